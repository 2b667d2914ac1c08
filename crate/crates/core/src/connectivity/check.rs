use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::weights::CutWeight;
use super::{Certification, ConnectivityParams, Mode};
use crate::energy::{energy, SubsetEnergy};
use crate::error::{Error, Result};
use crate::function::iterated_self_conv;
use crate::group::{Elem, GroupSet};
use crate::scalar::{big, energy_bits, fits, pow, Count, RationalConstant};
use crate::verdict::{Inequality, Power, Relation};
use crate::IntFn;

/// Elements reachable by the subgroup closure before giving up.
const CLOSURE_CAP: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetWitness {
    pub elements: GroupSet,
    pub size: usize,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectedVerdict {
    pub holds: bool,
    pub certification: Certification,
    pub window: (usize, usize),
    pub subsets_checked: u64,
    /// The subset minimizing `T_k(B) / |B|^2k` among those examined.
    pub worst: Option<SubsetWitness>,
    /// The connectedness inequality instantiated at `worst`.
    pub inequality: Option<Inequality>,
}

/// Subset positions minimizing `T_k(B) / |B|^2k`.
#[derive(Clone, Debug)]
pub(crate) struct Worst {
    pub idx: Vec<usize>,
    pub energy: BigUint,
    pub checked: u64,
}

fn worse(t1: &BigUint, b1: usize, t2: &BigUint, b2: usize, k: u32) -> bool {
    t1 * pow(&big(b2), 2 * k) < t2 * pow(&big(b1), 2 * k)
}

fn worst_exact_in<V: Count>(se: &SubsetEnergy, lo: usize, hi: usize) -> Option<Worst> {
    let m = se.ambient_len();
    let k = se.order();
    let mut best: Option<Worst> = None;
    let mut checked = 0u64;
    for b in lo..=hi.min(m) {
        let mut idx: Vec<usize> = (0..b).collect();
        let mut size_best: Option<(V, Vec<usize>)> = None;
        loop {
            let t: V = se.energy(&idx);
            checked += 1;
            if size_best.as_ref().is_none_or(|(bt, _)| t < *bt) {
                size_best = Some((t, idx.clone()));
            }
            // next combination in lexicographic order
            let mut i = b;
            while i > 0 && idx[i - 1] == m - b + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..b {
                idx[j] = idx[j - 1] + 1;
            }
        }
        if let Some((t, idx)) = size_best {
            let t = t.to_biguint();
            if best.as_ref().is_none_or(|w| worse(&t, b, &w.energy, w.idx.len(), k)) {
                best = Some(Worst { idx, energy: t, checked: 0 });
            }
        }
    }
    best.map(|mut w| {
        w.checked = checked;
        w
    })
}

pub(crate) fn worst_subset_exact(se: &SubsetEnergy, lo: usize, hi: usize) -> Option<Worst> {
    if lo > hi {
        return None;
    }
    if fits::<u128>(energy_bits(se.ambient_len(), se.order())) {
        worst_exact_in::<u128>(se, lo, hi)
    } else {
        worst_exact_in::<BigUint>(se, lo, hi)
    }
}

pub(crate) fn worst_subset_heuristic(
    se: &SubsetEnergy,
    lo: usize,
    hi: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Worst> {
    let m = se.ambient_len();
    let hi = hi.min(m);
    if lo > hi {
        return None;
    }
    let k = se.order();
    let mut best: Option<Worst> = None;
    let mut checked = 0u64;
    let mut perm: Vec<usize> = (0..m).collect();
    for _ in 0..samples.max(1) {
        let b = rng.gen_range(lo..=hi);
        perm.shuffle(rng);
        let (mut inside, mut outside) = (perm[..b].to_vec(), perm[b..].to_vec());
        let mut t = se.energy_big(&inside);
        checked += 1;
        if !outside.is_empty() {
            for _ in 0..4 * m {
                let i = rng.gen_range(0..inside.len());
                let j = rng.gen_range(0..outside.len());
                std::mem::swap(&mut inside[i], &mut outside[j]);
                let t2 = se.energy_big(&inside);
                checked += 1;
                if t2 < t {
                    t = t2;
                } else {
                    std::mem::swap(&mut inside[i], &mut outside[j]);
                }
            }
        }
        if best.as_ref().is_none_or(|w| worse(&t, b, &w.energy, w.idx.len(), k)) {
            let mut idx = inside.clone();
            idx.sort_unstable();
            best = Some(Worst { idx, energy: t, checked: 0 });
        }
    }
    best.map(|mut w| {
        w.checked = checked;
        w
    })
}

/// `T_k(B) |A|^2k q^2k >= p^2k |B|^2k T_k(A)` for `C = p/q`.
pub(crate) fn connectedness_inequality(
    t_b: &BigUint,
    b: usize,
    t_a: &BigUint,
    m: usize,
    c: &RationalConstant,
    k: u32,
) -> Inequality {
    Inequality::from_terms(
        "T_k(B) |A|^2k >= C^2k |B|^2k T_k(A)",
        vec![Power::new(t_b.clone(), 1), Power::new(big(m), 2 * k), Power::new(c.denom(), 2 * k)],
        Relation::Ge,
        vec![Power::new(c.numer(), 2 * k), Power::new(big(b), 2 * k), Power::new(t_a.clone(), 1)],
    )
}

/// Window connectedness of degree `k` with constant `C`: every `B` in the
/// size window keeps `T_k(B) >= C^2k (|B|/|A|)^2k T_k(A)`.
pub fn check_connected(a: &GroupSet, params: &ConnectivityParams) -> Result<ConnectedVerdict> {
    params.validate()?;
    if a.is_empty() {
        return Err(Error::Domain("connectedness of the empty set".into()));
    }
    let m = a.len();
    let k = params.k;
    if params.mode == Mode::Exact && m > params.exhaustive_cap {
        return Err(Error::capacity("exhaustive subset search size", m, params.exhaustive_cap));
    }
    let (lo, hi) = params.window(m);
    let se = SubsetEnergy::new(a, k);
    let found = match params.mode {
        Mode::Exact => worst_subset_exact(&se, lo, hi),
        Mode::Heuristic => {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            worst_subset_heuristic(&se, lo, hi, params.samples, &mut rng)
        }
    };
    let Some(w) = found else {
        return Ok(ConnectedVerdict {
            holds: true,
            certification: Certification::Certified,
            window: (lo, hi),
            subsets_checked: 0,
            worst: None,
            inequality: None,
        });
    };
    let t_a = energy(a, k)?.value;
    let q = connectedness_inequality(&w.energy, w.idx.len(), &t_a, m, &params.c, k);
    let certification = match (q.holds, params.mode) {
        (false, _) => Certification::Counterexample,
        (true, Mode::Exact) => Certification::Certified,
        (true, Mode::Heuristic) => Certification::NoCounterexampleFound,
    };
    Ok(ConnectedVerdict {
        holds: q.holds,
        certification,
        window: (lo, hi),
        subsets_checked: w.checked,
        worst: Some(SubsetWitness { elements: a.subset(&w.idx), size: w.idx.len(), energy: w.energy }),
        inequality: Some(q),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutWitness {
    pub e_side: GroupSet,
    pub f_side: GroupSet,
    #[serde(with = "crate::verdict::biguint_string")]
    pub weight: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongVerdict {
    pub holds: bool,
    pub certification: Certification,
    /// The cut minimizing `e(E, F) / (|E| |F|)`.
    pub worst_cut: Option<CutWitness>,
    pub inequality: Option<Inequality>,
}

/// `e(E, F) |A|^2 q >= p |E| |F| T_k(A)`.
pub(crate) fn strong_inequality(e: &BigUint, ne: usize, nf: usize, t: &BigUint, m: usize, c: &RationalConstant) -> Inequality {
    Inequality::from_terms(
        "e(E,F) >= C c_E c_F T_k(A)",
        vec![Power::new(e.clone(), 1), Power::new(big(m), 2), Power::new(c.denom(), 1)],
        Relation::Ge,
        vec![
            Power::new(c.numer(), 1),
            Power::new(big(ne), 1),
            Power::new(big(nf), 1),
            Power::new(t.clone(), 1),
        ],
    )
}

/// Strong connectedness: every bipartition `E | F` of `A` carries
/// `e(E, F) >= C c_E c_F T_k(A)`.
pub fn check_strongly_connected(a: &GroupSet, params: &ConnectivityParams) -> Result<StrongVerdict> {
    params.validate()?;
    if a.is_empty() {
        return Err(Error::Domain("strong connectedness of the empty set".into()));
    }
    let m = a.len();
    if params.mode == Mode::Exact && m > params.exhaustive_cap {
        return Err(Error::capacity("exhaustive cut search size", m, params.exhaustive_cap));
    }
    let cw = CutWeight::new(a, params.k)?;
    strong_from_weights(&cw, params)
}

pub(crate) fn strong_from_weights(cw: &CutWeight, params: &ConnectivityParams) -> Result<StrongVerdict> {
    let a = cw.set();
    let m = a.len();
    let all: Vec<usize> = (0..m).collect();
    let cap = if params.mode == Mode::Exact { m } else { 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let Some(cut) = cw.min_ratio_cut(&all, cap, &mut rng) else {
        return Ok(StrongVerdict {
            holds: true,
            certification: Certification::Certified,
            worst_cut: None,
            inequality: None,
        });
    };
    let e = BigUint::from(cut.weight);
    let q = strong_inequality(&e, cut.e_side.len(), cut.f_side.len(), &cw.total_big(), m, &params.c);
    let certification = match (q.holds, cut.exact) {
        (false, _) => Certification::Counterexample,
        (true, true) => Certification::Certified,
        (true, false) => Certification::NoCounterexampleFound,
    };
    Ok(StrongVerdict {
        holds: q.holds,
        certification,
        worst_cut: Some(CutWitness { e_side: a.subset(&cut.e_side), f_side: a.subset(&cut.f_side), weight: e }),
        inequality: Some(q),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongImpliesWeak {
    pub strong: StrongVerdict,
    /// Connectedness at `C/8` over all nonempty `B`; run when `strong` holds.
    pub weak: Option<ConnectedVerdict>,
    pub weak_constant: RationalConstant,
    /// `strong` failed, so nothing is implied.
    pub vacuous: bool,
    pub implication_holds: bool,
}

/// Strong connectedness at `C` must give connectedness at `C/8` for all
/// nonempty `B`. Both checks are exhaustive.
pub fn check_strong_implies_weak(a: &GroupSet, params: &ConnectivityParams) -> Result<StrongImpliesWeak> {
    params.require_power_of_two()?;
    let exact = ConnectivityParams { mode: Mode::Exact, ..params.clone() };
    let strong = check_strongly_connected(a, &exact)?;
    let weak_constant = RationalConstant::from_ratio(params.c.as_ratio() / num_rational::BigRational::from_integer(8.into()))?;
    if !strong.holds {
        return Ok(StrongImpliesWeak { strong, weak: None, weak_constant, vacuous: true, implication_holds: true });
    }
    let weak_params = ConnectivityParams {
        c: weak_constant.clone(),
        beta1: RationalConstant::zero(),
        beta2: RationalConstant::one(),
        ..exact
    };
    let weak = check_connected(a, &weak_params)?;
    let implication_holds = weak.holds;
    Ok(StrongImpliesWeak { strong, weak: Some(weak), weak_constant, vacuous: false, implication_holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KonyaginReport {
    pub k: u32,
    pub c: RationalConstant,
    /// `S = {h : w(h) >= C T_k(A) / |A|^2}`.
    pub s: GroupSet,
    pub subgroup_size: usize,
    /// The fixed element `a` with `A - a` tested against `<S>`.
    pub translate: Elem,
    pub contained: bool,
    /// Exhaustive strong connectedness at `C`, when within the cap.
    pub strong: Option<StrongVerdict>,
    /// Containment is a theorem for this input (strong connectedness certified).
    pub required: bool,
}

impl KonyaginReport {
    pub fn ok(&self) -> bool {
        self.contained || !self.required
    }
}

/// Checks `A ⊆ <S> + a` where `<S>` is the subgroup generated by the
/// popular differences `S`.
pub fn konyagin_containment(a: &GroupSet, k: u32, c: &RationalConstant, exhaustive_cap: usize) -> Result<KonyaginReport> {
    let spec = a.spec().clone();
    if !spec.is_finite() {
        return Err(Error::UnsupportedSpec("subgroup closure needs a finite group".into()));
    }
    if a.is_empty() {
        return Err(Error::Domain("containment for the empty set".into()));
    }
    let params = ConnectivityParams::new(k, c.clone());
    params.validate()?;
    let m = a.len();
    let t = energy(a, k)?.value;
    let g: IntFn = iterated_self_conv(a, k - 2);
    let w = g.correlate(&g)?;
    let lhs_scale = big(m * m) * c.denom();
    let rhs = c.numer() * &t;
    let s: Vec<Elem> = w.iter().filter(|(_, v)| *v * &lhs_scale >= rhs).map(|(h, _)| h.clone()).collect();
    let s = GroupSet::new(spec.clone(), s)?;

    let mut seen: BTreeSet<Elem> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(spec.zero());
    queue.push_back(spec.zero());
    while let Some(x) = queue.pop_front() {
        for h in s.iter() {
            for y in [spec.add(&x, h), spec.sub(&x, h)] {
                if !seen.contains(&y) {
                    if seen.len() >= CLOSURE_CAP {
                        return Err(Error::capacity("subgroup closure size", seen.len() + 1, CLOSURE_CAP));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
    }
    let translate = a.elems()[0].clone();
    let contained = a.iter().all(|x| seen.contains(&spec.sub(x, &translate)));
    let strong = if m <= exhaustive_cap {
        Some(check_strongly_connected(a, &ConnectivityParams { exhaustive_cap, ..params })?)
    } else {
        None
    };
    let required = strong.as_ref().is_some_and(|v| v.holds && v.certification == Certification::Certified);
    Ok(KonyaginReport {
        k,
        c: c.clone(),
        s,
        subgroup_size: seen.len(),
        translate,
        contained,
        strong,
        required,
    })
}
