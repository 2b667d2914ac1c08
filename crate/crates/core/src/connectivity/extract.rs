use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::check::{connectedness_inequality, worst_subset_exact, worst_subset_heuristic};
use super::{ConnectivityParams, Mode};
use crate::dissociation::{maximal_dissociated_subset_with, span_cover, Caps, DissociatedSet};
use crate::energy::{energy, SubsetEnergy, ZetaValue};
use crate::error::{Error, Result};
use crate::group::GroupSet;
use crate::scalar::{big, ceil_ratio, log2_bounds, log2_ratio_bounds, RationalConstant, LOG_PRECISION};
use crate::verdict::{Inequality, Power, Relation};

/// Largest step bound for which the size floor is expanded exactly.
const SIZE_BOUND_MAX_STEPS: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionStep {
    pub index: usize,
    pub size_before: usize,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy_before: BigUint,
    pub removed: GroupSet,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy_removed: BigUint,
    pub size_after: usize,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy_after: BigUint,
    /// The connectedness inequality that `removed` violates.
    pub violation: Inequality,
    /// `T_k(A \ B) > T_k(A) (1 - C c_B)^2k`, cross-multiplied.
    pub energy_retained: Inequality,
    /// `zeta_k(A \ B) >= zeta_k(A)`; `None` if either side has fewer than
    /// two elements or the comparison did not resolve.
    pub zeta_nondecreasing: Option<bool>,
    /// `|A \ B| >= (1 - beta2) |A|`.
    pub size_retained: Inequality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionTrace {
    pub initial: GroupSet,
    pub steps: Vec<ExtractionStep>,
}

impl ExtractionTrace {
    /// Replays the removals and re-derives every recorded size and energy.
    pub fn replay(&self) -> Result<GroupSet> {
        let mut cur = self.initial.clone();
        for s in &self.steps {
            if !s.removed.is_subset_of(&cur) || cur.len() != s.size_before {
                return Err(Error::GuardTrip(format!("step {} does not apply", s.index)));
            }
            let next = cur.minus(&s.removed);
            let k = s.violation_order();
            if next.len() != s.size_after
                || energy(&cur, k)?.value != s.energy_before
                || energy(&s.removed, k)?.value != s.energy_removed
                || energy(&next, k)?.value != s.energy_after
            {
                return Err(Error::GuardTrip(format!("step {} does not replay", s.index)));
            }
            cur = next;
        }
        Ok(cur)
    }
}

impl ExtractionStep {
    fn violation_order(&self) -> u32 {
        // lhs terms are [T_k(B), |A|^2k, q^2k]
        self.violation.lhs_terms.as_ref().map(|t| t[1].exp / 2).unwrap_or(2)
    }
}

/// Conservative step count `ceil(log((2k-1)/zeta) / log(1 + kappa))` with
/// `kappa = log(1/(1-beta1)) / log m * (1 - 16C)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepBound {
    pub kappa_positive: bool,
    /// Lower bound on `kappa`.
    pub kappa_lower: Option<RationalConstant>,
    /// Lower bound on `log(1/(1-beta1)) / (2 log m)`, the variant without
    /// the `1 - 16C` factor.
    pub kappa_alt_lower: Option<RationalConstant>,
    pub max_steps: Option<u64>,
    /// `steps <= max_steps`.
    pub steps: Option<Inequality>,
    /// `|A'| >= m (1 - beta2)^max_steps`.
    pub size: Option<Inequality>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Extraction {
    pub result: GroupSet,
    /// Exhaustive search confirmed no violating `B` remains.
    pub certified: bool,
    pub trace: ExtractionTrace,
    pub zeta_initial: Option<ZetaValue>,
    pub zeta_final: Option<ZetaValue>,
    pub step_bound: StepBound,
    /// `zeta` monotonicity is guaranteed (`C <= 1/2`).
    pub zeta_asserted: bool,
    /// `|A'| >= (1 - beta2)^s m` for the actual step count `s`.
    pub size_floor: Inequality,
}

impl Extraction {
    /// Every asserted inequality holds and `zeta` never decreased.
    pub fn ok(&self) -> bool {
        self.trace.steps.iter().all(|s| {
            s.energy_retained.ok()
                && s.size_retained.ok()
                && (!self.zeta_asserted || s.zeta_nondecreasing != Some(false))
        }) && self.size_floor.ok()
            && self.step_bound.steps.as_ref().is_none_or(Inequality::ok)
            && self.step_bound.size.as_ref().is_none_or(Inequality::ok)
    }

    pub fn inequalities(&self) -> Vec<&Inequality> {
        let mut v: Vec<&Inequality> = Vec::new();
        for s in &self.trace.steps {
            v.extend([&s.violation, &s.energy_retained, &s.size_retained]);
        }
        v.push(&self.size_floor);
        v.extend(self.step_bound.steps.iter());
        v.extend(self.step_bound.size.iter());
        v
    }
}

fn rat(r: &RationalConstant) -> BigRational {
    r.as_ratio().clone()
}

fn check_extraction_params(a: &GroupSet, params: &ConnectivityParams) -> Result<()> {
    params.validate()?;
    params.require_power_of_two()?;
    let limit = if params.relaxed { RationalConstant::one() } else { RationalConstant::new(1, 32)? };
    if params.c > limit {
        return Err(Error::Domain(format!("extraction needs C <= {limit}, got {}", params.c)));
    }
    if a.len() < 2 {
        return Err(Error::Domain(format!("extraction needs |A| >= 2, got {}", a.len())));
    }
    Ok(())
}

fn step_bound(params: &ConnectivityParams, m: usize, t: &BigUint, steps: usize, final_size: usize) -> StepBound {
    let k = params.k;
    let one = BigRational::one();
    let b1 = rat(&params.beta1);
    let factor = &one - BigRational::from_integer(16.into()) * rat(&params.c);
    let none = StepBound {
        kappa_positive: false,
        kappa_lower: None,
        kappa_alt_lower: None,
        max_steps: None,
        steps: None,
        size: None,
    };
    if b1.is_zero() || b1 >= one {
        return none;
    }
    // log2(1/(1-b)) >= b and log2(1+x) >= x/(1+x) keep small values positive
    let (u_lo, _) = log2_ratio_bounds(&(&one / (&one - &b1)), LOG_PRECISION);
    let u_lo = u_lo.max(b1.clone());
    let (_, l_hi) = log2_bounds(&big(m), LOG_PRECISION);
    let alt = &u_lo / (BigRational::from_integer(2.into()) * &l_hi);
    let kappa_alt_lower = RationalConstant::from_ratio(alt).ok();
    if !factor.is_positive() || !u_lo.is_positive() {
        return StepBound { kappa_alt_lower, ..none };
    }
    let kappa = &u_lo / &l_hi * &factor;
    let (t_lo, _) = log2_bounds(t, LOG_PRECISION);
    let zeta_lo = &t_lo / &l_hi;
    let top = BigRational::from_integer(BigInt::from(2 * k - 1)) / &zeta_lo;
    let (_, n_hi) = log2_ratio_bounds(&top, LOG_PRECISION);
    let (d_lo, _) = log2_ratio_bounds(&(&one + &kappa), LOG_PRECISION);
    let d_lo = d_lo.max(&kappa / (&one + &kappa));
    let bound = if n_hi.is_positive() { ceil_ratio(&(n_hi / d_lo)) } else { BigUint::zero() };
    let max_steps = u64::try_from(&bound).unwrap_or(u64::MAX);
    let steps_q = Inequality::new("steps <= ceil(log((2k-1)/zeta) / log(1+kappa))", steps as u64, Relation::Le, max_steps);
    let size = (max_steps <= SIZE_BOUND_MAX_STEPS).then(|| {
        let b2 = &params.beta2;
        let s = max_steps as u32;
        Inequality::from_terms(
            "|A'| >= m (1 - beta2)^s",
            vec![Power::new(big(final_size), 1), Power::new(b2.denom(), s)],
            Relation::Ge,
            vec![Power::new(big(m), 1), Power::new(b2.denom() - b2.numer(), s)],
        )
    });
    StepBound {
        kappa_positive: true,
        kappa_lower: RationalConstant::from_ratio(kappa).ok(),
        kappa_alt_lower,
        max_steps: Some(max_steps),
        steps: Some(steps_q),
        size,
    }
}

/// Repeatedly removes the worst window-violating `B` until none remains.
///
/// In exact mode the result is certified window-connected with constant
/// `C`. Each step records the retained-energy inequality and the `zeta`
/// comparison; the run aborts with a guard trip after `4 |A|` steps.
pub fn extract_connected_subset(a: &GroupSet, params: &ConnectivityParams) -> Result<Extraction> {
    check_extraction_params(a, params)?;
    let k = params.k;
    let m0 = a.len();
    let c = &params.c;
    if params.mode == Mode::Exact && m0 > params.exhaustive_cap {
        return Err(Error::capacity("exhaustive subset search size", m0, params.exhaustive_cap));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let t0 = energy(a, k)?.value;
    let mut cur = a.clone();
    let mut t_cur = t0.clone();
    let mut steps = Vec::new();
    let guard = 4 * m0;
    loop {
        let m = cur.len();
        let (lo, hi) = params.window(m);
        let se = SubsetEnergy::new(&cur, k);
        let found = match params.mode {
            Mode::Exact => worst_subset_exact(&se, lo, hi),
            Mode::Heuristic => worst_subset_heuristic(&se, lo, hi, params.samples, &mut rng),
        };
        let Some(w) = found else { break };
        let b = w.idx.len();
        let violation = connectedness_inequality(&w.energy, b, &t_cur, m, c, k).observed();
        if violation.holds {
            break;
        }
        if steps.len() >= guard {
            return Err(Error::GuardTrip(format!("extraction exceeded {guard} steps")));
        }
        let removed = cur.subset(&w.idx);
        let next = cur.minus(&removed);
        let t_next = energy(&next, k)?.value;
        let qm = c.denom() * big(m);
        let energy_retained = Inequality::from_terms(
            "T_k(A \\ B) > T_k(A) (1 - C c_B)^2k",
            vec![Power::new(t_next.clone(), 1), Power::new(qm.clone(), 2 * k)],
            Relation::Gt,
            vec![Power::new(t_cur.clone(), 1), Power::new(&qm - c.numer() * big(b), 2 * k)],
        );
        let zeta_nondecreasing = if next.len() >= 2 {
            let before = ZetaValue::new(t_cur.clone(), m, k)?;
            let after = ZetaValue::new(t_next.clone(), next.len(), k)?;
            after.compare(&before).map(|o| o != std::cmp::Ordering::Less)
        } else {
            None
        };
        let b2 = &params.beta2;
        let size_retained = Inequality::from_terms(
            "|A \\ B| >= (1 - beta2) |A|",
            vec![Power::new(big(next.len()), 1), Power::new(b2.denom(), 1)],
            Relation::Ge,
            vec![Power::new(b2.denom() - b2.numer(), 1), Power::new(big(m), 1)],
        );
        steps.push(ExtractionStep {
            index: steps.len(),
            size_before: m,
            energy_before: t_cur.clone(),
            removed,
            energy_removed: w.energy,
            size_after: next.len(),
            energy_after: t_next.clone(),
            violation,
            energy_retained,
            zeta_nondecreasing,
            size_retained,
        });
        cur = next;
        t_cur = t_next;
        if cur.len() < 2 {
            break;
        }
    }
    let s = steps.len() as u32;
    let b2 = &params.beta2;
    let size_floor = Inequality::from_terms(
        "|A'| >= (1 - beta2)^s m",
        vec![Power::new(big(cur.len()), 1), Power::new(b2.denom(), s)],
        Relation::Ge,
        vec![Power::new(b2.denom() - b2.numer(), s), Power::new(big(m0), 1)],
    );
    let step_bound = step_bound(params, m0, &t0, steps.len(), cur.len());
    let zeta_initial = ZetaValue::new(t0, m0, k).ok();
    let zeta_final = ZetaValue::new(t_cur, cur.len(), k).ok();
    Ok(Extraction {
        result: cur,
        certified: params.mode == Mode::Exact,
        trace: ExtractionTrace { initial: a.clone(), steps },
        zeta_initial,
        zeta_final,
        step_bound,
        zeta_asserted: params.c <= RationalConstant::new(1, 2)?,
        size_floor,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostBasisStep {
    pub round: usize,
    pub current_size: usize,
    pub lambda: GroupSet,
    /// The `l` elements peeled off when `|lambda| > l`.
    pub slice: Option<GroupSet>,
}

/// Evidence that an input falls outside the almost-basis hypotheses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreconditionCertificate {
    /// Union of the peeled slices, trimmed to `floor(beta1 |A|) + 1`.
    pub b: GroupSet,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy_b: BigUint,
    pub hypotheses: Vec<Inequality>,
    pub failing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlmostBasisOutcome {
    Basis {
        lambda: DissociatedSet,
        covered: usize,
        /// `|Span L ∩ A| >= (1 - beta1) |A|`.
        coverage: Inequality,
    },
    Certificate(PreconditionCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostBasis {
    /// Slice size: `floor(2^13 C^-2 k |A|^2 / T_k(A)^(1/k))` unless overridden.
    pub l: u64,
    pub l_overridden: bool,
    /// `l^k T_k(A) C^2k <= (2^13 k |A|^2)^k` for the chosen `l`.
    pub l_bound: Inequality,
    pub outcome: AlmostBasisOutcome,
    pub trace: Vec<AlmostBasisStep>,
}

impl AlmostBasis {
    pub fn ok(&self) -> bool {
        match &self.outcome {
            AlmostBasisOutcome::Basis { coverage, .. } => coverage.ok() && self.l_bound.ok(),
            AlmostBasisOutcome::Certificate(c) => self.l_overridden || !c.failing.is_empty(),
        }
    }
}

fn l_inequality(l: &BigUint, t: &BigUint, m: usize, c: &RationalConstant, k: u32) -> Inequality {
    Inequality::from_terms(
        "l^k T_k(A) C^2k <= (2^13 k |A|^2)^k",
        vec![Power::new(l.clone(), k), Power::new(t.clone(), 1), Power::new(c.numer(), 2 * k)],
        Relation::Le,
        vec![
            Power::new(BigUint::from(1u32 << 13), k),
            Power::new(k, k),
            Power::new(big(m), 2 * k),
            Power::new(c.denom(), 2 * k),
        ],
    )
}

/// `floor(2^13 C^-2 k m^2 / T^(1/k))` by bisection on the exact inequality.
fn floor_l(t: &BigUint, m: usize, c: &RationalConstant, k: u32) -> BigUint {
    let mut lo = BigUint::zero();
    let mut hi = (BigUint::from(1u32 << 13) * k * big(m * m) * c.denom() * c.denom()) / (c.numer() * c.numer())
        + 1u32;
    while &lo + 1u32 < hi {
        let mid = (&lo + &hi) >> 1;
        if l_inequality(&mid, t, m, c, k).holds {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Peels dissociated slices of size `l` until a maximal dissociated subset
/// of the remainder has at most `l` elements, or the remainder drops below
/// `(1 - beta1) |A|` (then a precondition certificate is returned).
pub fn extract_almost_basis(a: &GroupSet, params: &ConnectivityParams, caps: Caps) -> Result<AlmostBasis> {
    params.validate()?;
    if a.is_empty() {
        return Err(Error::Domain("almost basis of the empty set".into()));
    }
    let m = a.len();
    let k = params.k;
    let (b1, b2) = (rat(&params.beta1), rat(&params.beta2));
    let mr = BigRational::from_integer(BigInt::from(m));
    if (&b2 - &b1) * &mr < BigRational::one() {
        return Err(Error::Domain("almost-basis extraction needs beta2 >= beta1 + 1/|A|".into()));
    }
    let c = &params.c;
    let t = energy(a, k)?.value;
    let l_big = match params.l_override {
        Some(l) => BigUint::from(l),
        None => floor_l(&t, m, c, k),
    };
    let l_bound = l_inequality(&l_big, &t, m, c, k);
    let l = u64::try_from(&l_big).unwrap_or(u64::MAX);
    let keep_floor = {
        // (1 - beta1) m, compared as |A_i| den >= (den - num) m
        let bd = params.beta1.denom();
        let bn = params.beta1.numer();
        move |size: usize| big(size) * &bd >= (&bd - &bn) * big(m)
    };

    let mut trace = Vec::new();
    let mut slices: Vec<GroupSet> = Vec::new();
    let mut cur = a.clone();
    let mut round = 0usize;
    let outcome = loop {
        if l == 0 {
            break None;
        }
        let md = maximal_dissociated_subset_with(&cur, Some(params.seed.wrapping_add(round as u64)), caps)?;
        if md.lambda.len() as u64 <= l {
            trace.push(AlmostBasisStep {
                round,
                current_size: cur.len(),
                lambda: md.lambda.base().clone(),
                slice: None,
            });
            break Some(md.lambda);
        }
        let slice = GroupSet::new(a.spec().clone(), md.insertion_order.iter().take(l as usize).cloned())?;
        trace.push(AlmostBasisStep {
            round,
            current_size: cur.len(),
            lambda: md.lambda.base().clone(),
            slice: Some(slice.clone()),
        });
        cur = cur.minus(&slice);
        slices.push(slice);
        round += 1;
        if !keep_floor(cur.len()) {
            break None;
        }
        if round > m {
            return Err(Error::GuardTrip("almost-basis peeling did not terminate".into()));
        }
    };

    let outcome = match outcome {
        Some(lambda) => {
            let cover = span_cover(lambda.base(), a, caps)?;
            let covered = cover.covered.unwrap_or(0);
            let bd = params.beta1.denom();
            let coverage = Inequality::from_terms(
                "|Span L ∩ A| >= (1 - beta1) |A|",
                vec![Power::new(big(covered), 1), Power::new(bd.clone(), 1)],
                Relation::Ge,
                vec![Power::new(&bd - params.beta1.numer(), 1), Power::new(big(m), 1)],
            );
            AlmostBasisOutcome::Basis { lambda, covered, coverage }
        }
        None => AlmostBasisOutcome::Certificate(certificate(a, params, &t, &slices)?),
    };
    Ok(AlmostBasis { l, l_overridden: params.l_override.is_some(), l_bound, outcome, trace })
}

fn certificate(
    a: &GroupSet,
    params: &ConnectivityParams,
    t: &BigUint,
    slices: &[GroupSet],
) -> Result<PreconditionCertificate> {
    let m = a.len();
    let k = params.k;
    let c = &params.c;
    let (b1n, b1d) = (params.beta1.numer(), params.beta1.denom());
    let target = usize::try_from(&((&b1n * big(m)) / &b1d)).unwrap_or(usize::MAX).saturating_add(1);
    let b = GroupSet::new(a.spec().clone(), slices.iter().flat_map(|s| s.iter().cloned()).take(target))?;
    let energy_b = if b.is_empty() { BigUint::zero() } else { energy(&b, k)?.value };
    let mut hypotheses = vec![
        Inequality::from_terms(
            "T_k(A) >= 2^14k C^-2k k^k |A|^k",
            vec![Power::new(t.clone(), 1), Power::new(c.numer(), 2 * k)],
            Relation::Ge,
            vec![
                Power::new(2u32, 14 * k),
                Power::new(c.denom(), 2 * k),
                Power::new(k, k),
                Power::new(big(m), k),
            ],
        )
        .observed(),
        Inequality::from_terms(
            "|A| >= 1/beta1",
            vec![Power::new(big(m), 1), Power::new(b1n.clone(), 1)],
            Relation::Ge,
            vec![Power::new(b1d.clone(), 1)],
        )
        .observed(),
    ];
    if !b.is_empty() {
        hypotheses.push(connectedness_inequality(&energy_b, b.len(), t, m, c, k).observed());
    }
    let failing = hypotheses.iter().filter(|q| !q.holds).map(|q| q.label.clone()).collect();
    Ok(PreconditionCertificate { b, energy_b, hypotheses, failing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissociation::span_enumerate;
    use crate::group::GroupSpec;

    fn rc(p: u64, q: u64) -> RationalConstant {
        RationalConstant::new(p, q).unwrap()
    }

    fn subspace(dim: usize, n: usize) -> GroupSet {
        let v = GroupSpec::vector(2, n).unwrap();
        GroupSet::new(v.clone(), (0..1u64 << dim).map(|i| v.elem_at(i))).unwrap()
    }

    #[test]
    fn connected_input_is_returned_unchanged() {
        let p = subspace(3, 4);
        let params = ConnectivityParams::new(2, rc(1, 32)).with_window(rc(1, 4), rc(3, 4));
        let x = extract_connected_subset(&p, &params).unwrap();
        assert_eq!(x.result, p);
        assert!(x.trace.steps.is_empty() && x.certified && x.ok());
        assert_eq!(x.trace.replay().unwrap(), p);
    }

    #[test]
    fn parameter_checks() {
        let p = subspace(2, 2);
        let loose = ConnectivityParams::new(2, rc(1, 4));
        assert!(matches!(extract_connected_subset(&p, &loose), Err(Error::Domain(_))));
        let relaxed = ConnectivityParams { relaxed: true, ..loose };
        assert!(extract_connected_subset(&p, &relaxed).is_ok());
        let k3 = ConnectivityParams::new(3, rc(1, 32));
        assert!(matches!(extract_connected_subset(&p, &k3), Err(Error::Domain(_))));
    }

    #[test]
    fn relaxed_constant_removes_a_sparse_tail() {
        let mut xs: Vec<i64> = (0..150).collect();
        xs.extend((0..45).map(|i| 1000i64 << i));
        let a = GroupSet::from_i64s(GroupSpec::integers(), &xs).unwrap();
        let params = ConnectivityParams {
            relaxed: true,
            samples: 8,
            ..ConnectivityParams::new(2, RationalConstant::one())
                .with_window(rc(3, 13), rc(3, 13))
                .with_mode(Mode::Heuristic)
                .with_seed(1)
        };
        let x = extract_connected_subset(&a, &params).unwrap();
        assert!(!x.certified && !x.zeta_asserted);
        assert!(!x.trace.steps.is_empty());
        assert!(x.ok());
        for s in &x.trace.steps {
            assert!(!s.violation.holds && s.energy_retained.holds);
        }
        assert!(x.result.is_subset_of(&a));
        assert_eq!(x.trace.replay().unwrap(), x.result);
    }

    #[test]
    fn small_sets_never_violate_at_half() {
        // T(B) >= |B|^2 and T(A) <= |A|^3 rule out violations when |A| <= 16.
        let spec = GroupSpec::cyclic(1_000_000).unwrap();
        let mut xs: Vec<i64> = (0..10).collect();
        xs.extend([1000, 30_000, 500_000]);
        let a = GroupSet::from_i64s(spec, &xs).unwrap();
        let params = ConnectivityParams { relaxed: true, ..ConnectivityParams::new(2, rc(1, 2)) };
        let x = extract_connected_subset(&a, &params).unwrap();
        assert!(x.trace.steps.is_empty() && x.ok() && x.zeta_asserted);
        assert_eq!(x.result, a);
    }

    #[test]
    fn step_bound_is_conservative() {
        let p = subspace(3, 3);
        let params = ConnectivityParams::new(2, rc(1, 32)).with_window(rc(1, 2), RationalConstant::one());
        let x = extract_connected_subset(&p, &params).unwrap();
        assert!(x.step_bound.kappa_positive);
        // zeta = 3 = 2k - 1 already: no steps are possible.
        assert_eq!(x.step_bound.max_steps, Some(0));
        let none = ConnectivityParams::new(2, rc(1, 32));
        assert!(!extract_connected_subset(&p, &none).unwrap().step_bound.kappa_positive);
    }

    #[test]
    fn almost_basis_examples() {
        let p = subspace(3, 3);
        let params = ConnectivityParams::new(2, RationalConstant::one()).with_window(rc(1, 2), RationalConstant::one());
        let r = extract_almost_basis(&p, &params, Caps::default()).unwrap();
        match &r.outcome {
            AlmostBasisOutcome::Basis { lambda, covered, coverage } => {
                assert_eq!(lambda.len(), 3);
                assert_eq!(*covered, 8);
                assert!(coverage.holds);
                let span = span_enumerate(lambda.base()).unwrap().elements.unwrap();
                assert!(p.is_subset_of(&span));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.ok() && r.l >= 1 << 14);

        let z = GroupSet::from_i64s(GroupSpec::integers(), &[0]).unwrap();
        let r = extract_almost_basis(&z, &ConnectivityParams::default(), Caps::default()).unwrap();
        match &r.outcome {
            AlmostBasisOutcome::Basis { lambda, covered, .. } => {
                assert!(lambda.is_empty());
                assert_eq!(*covered, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn almost_basis_certificate_with_small_slices() {
        let a = GroupSet::from_i64s(GroupSpec::integers(), &[1, 2, 4, 8, 16, 32, 64, 128]).unwrap();
        let params = ConnectivityParams {
            l_override: Some(2),
            ..ConnectivityParams::new(2, RationalConstant::one()).with_window(rc(1, 2), RationalConstant::one())
        };
        let r = extract_almost_basis(&a, &params, Caps::default()).unwrap();
        match &r.outcome {
            AlmostBasisOutcome::Certificate(c) => {
                assert_eq!(c.b.len(), 5);
                assert!(!c.failing.is_empty());
                assert_eq!(c.energy_b, energy(&c.b, 2).unwrap().value);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.ok());
        let zero = ConnectivityParams { l_override: Some(0), ..params };
        let r = extract_almost_basis(&a, &zero, Caps::default()).unwrap();
        assert!(matches!(r.outcome, AlmostBasisOutcome::Certificate(_)));
        let bad = ConnectivityParams::new(2, RationalConstant::one()).with_window(rc(1, 2), rc(1, 2));
        assert!(matches!(extract_almost_basis(&a, &bad, Caps::default()), Err(Error::Domain(_))));
    }
}
