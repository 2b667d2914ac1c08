//! Deterministic test-set generators.

use std::collections::BTreeSet;

use addcomb::dissociation::{Caps, SpanOracle};
use addcomb::{Elem, Error, GroupSet, GroupSpec, Result};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Largest subgroup the subspace and coset generators build.
const SUBGROUP_CAP: u64 = 1 << 20;
const DEFAULT_INT_RANGE: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `size` distinct uniform elements; integers are drawn from `[0, range)`.
    Random { size: usize, range: Option<u64> },
    /// `{start + i step : 0 <= i < length}`.
    Ap { start: Value, step: Value, length: u64 },
    /// `{base + n_1 s_1 + ... + n_d s_d : 0 <= n_i < lengths[i]}`.
    MultiAp { base: Value, steps: Vec<Value>, lengths: Vec<u64> },
    /// A random subgroup of dimension `dim` of a vector group.
    Subspace { dim: usize },
    /// `size` elements passing the exact dissociation test.
    Dissociated { size: usize, range: Option<u64> },
    /// Union of `num_cosets` distinct cosets of a random subspace.
    CosetUnion { subgroup_dim: usize, num_cosets: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub group: GroupSpec,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, group: GroupSpec, seed: u64) -> Self {
        GeneratorSpec { family, group, seed }
    }
}

fn random_elem(spec: &GroupSpec, range: Option<u64>, rng: &mut ChaCha8Rng) -> Elem {
    match spec {
        GroupSpec::Integers => Elem::Integer(BigInt::from(rng.gen_range(0..range.unwrap_or(DEFAULT_INT_RANGE)))),
        _ => {
            let n = spec.order_u64().expect("finite group below 2^64");
            let bound = range.map_or(n, |r| r.min(n));
            spec.elem_at(rng.gen_range(0..bound))
        }
    }
}

fn check_room(spec: &GroupSpec, size: usize, range: Option<u64>) -> Result<()> {
    let room = match spec {
        GroupSpec::Integers => Some(range.unwrap_or(DEFAULT_INT_RANGE)),
        _ => spec.order_u64().map(|n| range.map_or(n, |r| r.min(n))),
    };
    match room {
        Some(r) if (size as u64) > r => Err(Error::Config(format!("cannot draw {size} distinct elements from {r}"))),
        None => Err(Error::Config(format!("{spec} is too large to sample"))),
        _ => Ok(()),
    }
}

fn vector_params(spec: &GroupSpec, dim: usize) -> Result<(u64, usize)> {
    let GroupSpec::Vector { q, dim: n } = spec else {
        return Err(Error::Config(format!("subspaces need a vector group, got {spec}")));
    };
    if dim > *n {
        return Err(Error::Config(format!("subspace dimension {dim} exceeds {n}")));
    }
    let size = (*q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if size > u128::from(SUBGROUP_CAP) {
        return Err(Error::capacity_error("subspace size", size, SUBGROUP_CAP));
    }
    Ok((*q, *n))
}

/// A uniformly seeded random subspace of dimension `dim`.
fn random_subspace(spec: &GroupSpec, dim: usize, rng: &mut ChaCha8Rng) -> Result<BTreeSet<Elem>> {
    let (q, _) = vector_params(spec, dim)?;
    let mut span: BTreeSet<Elem> = BTreeSet::from([spec.zero()]);
    let mut attempts = 0;
    while span.len() < (q as usize).pow(dim as u32) {
        attempts += 1;
        if attempts > 64 * (dim + 1) {
            return Err(Error::Config("could not find independent vectors".into()));
        }
        let v = random_elem(spec, None, rng);
        if span.contains(&v) {
            continue;
        }
        let mut next = BTreeSet::new();
        for s in &span {
            for c in 0..q {
                next.insert(spec.add(s, &spec.scale(&v, c as i64)));
            }
        }
        span = next;
    }
    Ok(span)
}

pub fn generate(g: &GeneratorSpec) -> Result<GroupSet> {
    let spec = &g.group;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    match &g.family {
        Family::Random { size, range } => {
            check_room(spec, *size, *range)?;
            let mut out = BTreeSet::new();
            while out.len() < *size {
                out.insert(random_elem(spec, *range, &mut rng));
            }
            GroupSet::new(spec.clone(), out)
        }
        Family::Ap { start, step, length } => {
            let (s, d) = (spec.elem_from_json(start)?, spec.elem_from_json(step)?);
            let xs = (0..*length).map(|i| Ok(spec.add(&s, &scale(spec, &d, i)?))).collect::<Result<Vec<_>>>()?;
            GroupSet::new(spec.clone(), xs)
        }
        Family::MultiAp { base, steps, lengths } => {
            if steps.len() != lengths.len() {
                return Err(Error::Config("steps and lengths differ in length".into()));
            }
            let total = lengths.iter().try_fold(1u64, |a, &l| a.checked_mul(l)).unwrap_or(u64::MAX);
            if total > SUBGROUP_CAP {
                return Err(Error::capacity_error("progression size", total.into(), SUBGROUP_CAP));
            }
            let steps = steps.iter().map(|s| spec.elem_from_json(s)).collect::<Result<Vec<_>>>()?;
            let mut xs = vec![spec.elem_from_json(base)?];
            for (d, &l) in steps.iter().zip(lengths) {
                let mut next = Vec::with_capacity(xs.len() * l as usize);
                for x in &xs {
                    for i in 0..l {
                        next.push(spec.add(x, &scale(spec, d, i)?));
                    }
                }
                xs = next;
            }
            GroupSet::new(spec.clone(), xs)
        }
        Family::Subspace { dim } => GroupSet::new(spec.clone(), random_subspace(spec, *dim, &mut rng)?),
        Family::Dissociated { size, range } => {
            check_room(spec, *size, *range)?;
            let caps = Caps::default();
            if *size > caps.mitm {
                return Err(Error::capacity_error("dissociated set size", *size as u128, caps.mitm as u64));
            }
            let mut kept = GroupSet::empty(spec.clone());
            let mut oracle = SpanOracle::new(&kept, caps)?;
            let mut attempts = 0usize;
            while kept.len() < *size {
                attempts += 1;
                if attempts > 256 * (size + 1) {
                    return Err(Error::Config(format!("no dissociated set of size {size} found in {spec}")));
                }
                let x = random_elem(spec, *range, &mut rng);
                if !oracle.contains(&x)? {
                    kept = kept.union(&GroupSet::new(spec.clone(), [x])?)?;
                    oracle = SpanOracle::new(&kept, caps)?;
                }
            }
            Ok(kept)
        }
        Family::CosetUnion { subgroup_dim, num_cosets } => {
            let h = random_subspace(spec, *subgroup_dim, &mut rng)?;
            let (q, n) = vector_params(spec, *subgroup_dim)?;
            let index = (q as u128).pow((n - subgroup_dim) as u32);
            if *num_cosets as u128 > index {
                return Err(Error::Config(format!("only {index} cosets exist")));
            }
            if (*num_cosets as u128) * (h.len() as u128) > u128::from(SUBGROUP_CAP) {
                return Err(Error::capacity_error("coset union size", *num_cosets as u128 * h.len() as u128, SUBGROUP_CAP));
            }
            let mut out: BTreeSet<Elem> = BTreeSet::new();
            let mut cosets = 0;
            while cosets < *num_cosets {
                let x = random_elem(spec, None, &mut rng);
                if out.contains(&x) {
                    continue;
                }
                out.extend(h.iter().map(|y| spec.add(&x, y)));
                cosets += 1;
            }
            GroupSet::new(spec.clone(), out)
        }
    }
}

fn scale(spec: &GroupSpec, d: &Elem, i: u64) -> Result<Elem> {
    let c = i64::try_from(i).map_err(|_| Error::Config("progression too long".into()))?;
    Ok(spec.scale(d, c))
}

trait CapacityExt {
    fn capacity_error(what: &str, got: u128, cap: u64) -> Error;
}

impl CapacityExt for Error {
    fn capacity_error(what: &str, got: u128, cap: u64) -> Error {
        Error::Capacity { what: what.into(), got: u64::try_from(got).unwrap_or(u64::MAX), cap }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use addcomb::dissociation::is_dissociated;
    use serde_json::json;

    #[test]
    fn ap_in_integers() {
        let g = GeneratorSpec::new(
            Family::Ap { start: json!(0), step: json!(1), length: 8 },
            GroupSpec::integers(),
            0,
        );
        assert_eq!(generate(&g).unwrap(), GroupSet::from_i64s(GroupSpec::integers(), &(0..8).collect::<Vec<_>>()).unwrap());
    }

    #[test]
    fn subspace_is_closed() {
        let spec = GroupSpec::vector(2, 3).unwrap();
        for seed in 0..10 {
            let p = generate(&GeneratorSpec::new(Family::Subspace { dim: 2 }, spec.clone(), seed)).unwrap();
            assert_eq!(p.len(), 4);
            for x in p.iter() {
                assert!(p.contains(&spec.neg(x)));
                for y in p.iter() {
                    assert!(p.contains(&spec.add(x, y)));
                }
            }
        }
        let bad = GeneratorSpec::new(Family::Subspace { dim: 4 }, spec, 0);
        assert!(matches!(generate(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn dissociated_output_passes() {
        let spec = GroupSpec::cyclic(1_000_000).unwrap();
        for seed in 0..5 {
            let l = generate(&GeneratorSpec::new(Family::Dissociated { size: 6, range: None }, spec.clone(), seed)).unwrap();
            assert_eq!(l.len(), 6);
            assert!(is_dissociated(&l).unwrap().dissociated);
        }
    }

    #[test]
    fn deterministic_and_round_trips() {
        let g = GeneratorSpec::new(Family::Random { size: 10, range: Some(100) }, GroupSpec::integers(), 7);
        assert_eq!(generate(&g).unwrap(), generate(&g).unwrap());
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<GeneratorSpec>(&s).unwrap(), g);
    }

    #[test]
    fn multi_ap_and_cosets() {
        let z = GroupSpec::integers();
        let g = GeneratorSpec::new(
            Family::MultiAp { base: json!(5), steps: vec![json!(1), json!(100)], lengths: vec![3, 2] },
            z.clone(),
            0,
        );
        let want = GroupSet::from_i64s(z, &[5, 6, 7, 105, 106, 107]).unwrap();
        assert_eq!(generate(&g).unwrap(), want);
        let v = GroupSpec::vector(2, 4).unwrap();
        let c = generate(&GeneratorSpec::new(Family::CosetUnion { subgroup_dim: 2, num_cosets: 3 }, v, 1)).unwrap();
        assert_eq!(c.len(), 12);
    }
}
