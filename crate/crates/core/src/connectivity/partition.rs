use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use super::positions;
use super::weights::{Cut, CutWeight};
use crate::energy::energy;
use crate::error::{Error, Result};
use crate::group::GroupSet;
use crate::scalar::{big, ceil_ratio, log2_ratio_bounds, RationalConstant, LOG_PRECISION};
use crate::verdict::{Inequality, Power, Relation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionStart {
    #[default]
    Singletons,
    AllInOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionOptions {
    pub start: PartitionStart,
    /// Largest part whose cuts are enumerated exhaustively.
    pub cut_cap: usize,
    pub seed: u64,
    /// Move budget; defaults to `16 |A|^2 + 64`.
    pub max_moves: Option<usize>,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions { start: PartitionStart::Singletons, cut_cap: 16, seed: 0, max_moves: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    Merge,
    Split,
}

/// One accepted local-search move. `delta` is the change of the scaled
/// objective and is always negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionMove {
    pub kind: MoveKind,
    /// Sizes of the two parts merged, or of the two sides split off.
    pub sizes: (usize, usize),
    #[serde(with = "crate::verdict::decimal_int")]
    pub delta: BigInt,
    #[serde(with = "crate::verdict::decimal_int")]
    pub sigma_after: BigInt,
}

fn rational_string<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Output of the partition local search.
///
/// The objective is `sigma = sum_{i<j} e(A_i, A_j) - eps1 c_i c_j T_k(A)`;
/// `sigma_scaled = sigma |A|^2 q` for `eps1 = p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionState {
    pub k: u32,
    pub epsilon1: RationalConstant,
    pub parts: Vec<GroupSet>,
    #[serde(serialize_with = "rational_string")]
    pub sigma: BigRational,
    #[serde(with = "crate::verdict::decimal_int")]
    pub sigma_scaled: BigInt,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy: BigUint,
    #[serde(with = "crate::verdict::decimal_uint_vec")]
    pub part_energies: Vec<BigUint>,
    /// `e(A_i, A_j) <= eps1 c_i c_j T_k(A)` for every pair (exact).
    pub property1: bool,
    /// Every part passed its internal cut check.
    pub property2: bool,
    /// Parts whose cut check was heuristic (larger than the cut cap).
    pub uncertified: Vec<usize>,
    /// `sum T_k(A_i) >= (1 - (2k-1) eps1) T_k(A)`.
    pub property3: Inequality,
    /// `max |A_i| >= (1 - (2k-1) eps1) |A|^(1/2)`, squared; present when
    /// the factor is positive.
    pub size_floor: Option<Inequality>,
    pub moves: Vec<PartitionMove>,
}

impl PartitionState {
    pub fn certified(&self) -> bool {
        self.uncertified.is_empty()
    }

    pub fn ok(&self) -> bool {
        self.property1 && self.property2 && self.property3.ok() && self.size_floor.as_ref().is_none_or(Inequality::ok)
    }

    pub fn inequalities(&self) -> Vec<&Inequality> {
        let mut v = vec![&self.property3];
        v.extend(self.size_floor.iter());
        v
    }
}

/// `sum_{i<j} (e(P_i, P_j) |A|^2 q - p |P_i| |P_j| T_k(A))` over positions.
pub fn sigma_scaled(cw: &CutWeight, parts: &[Vec<usize>], eps1: &RationalConstant) -> BigInt {
    let s = Scale::new(cw, eps1);
    let mut sigma = BigInt::zero();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            sigma += s.excess(cw.e(&parts[i], &parts[j]), parts[i].len(), parts[j].len());
        }
    }
    sigma
}

struct Scale {
    /// `|A|^2 q`
    mq: BigInt,
    /// `p T_k(A)`
    pt: BigInt,
}

impl Scale {
    fn new(cw: &CutWeight, eps1: &RationalConstant) -> Self {
        let m = cw.len();
        Scale {
            mq: BigInt::from(big(m * m) * eps1.denom()),
            pt: BigInt::from(eps1.numer() * cw.total_big()),
        }
    }

    fn excess(&self, e: u128, a: usize, b: usize) -> BigInt {
        BigInt::from(e) * &self.mq - &self.pt * BigInt::from(a * b)
    }
}

fn check_eps(name: &str, e: &RationalConstant) -> Result<()> {
    if *e > RationalConstant::one() {
        return Err(Error::Config(format!("{name} must lie in [0, 1], got {e}")));
    }
    Ok(())
}

/// A partition of `A` that is locally optimal for `sigma`: no merge and no
/// split lowers it. Merges pick the pair of largest positive excess;
/// splits use the minimum-ratio cut of each part.
pub fn partition_min_sigma(
    a: &GroupSet,
    k: u32,
    eps1: &RationalConstant,
    opts: &PartitionOptions,
) -> Result<PartitionState> {
    if a.is_empty() {
        return Err(Error::Domain("partition of the empty set".into()));
    }
    if k < 2 {
        return Err(Error::Domain(format!("order must be >= 2, got {k}")));
    }
    check_eps("epsilon1", eps1)?;
    let cw = CutWeight::new(a, k)?;
    lemma_partition(&cw, eps1, opts)
}

pub(crate) fn lemma_partition(cw: &CutWeight, eps1: &RationalConstant, opts: &PartitionOptions) -> Result<PartitionState> {
    let a = cw.set();
    let m = a.len();
    let k = cw.order();
    let scale = Scale::new(cw, eps1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut parts: Vec<Vec<usize>> = match opts.start {
        PartitionStart::Singletons => (0..m).map(|i| vec![i]).collect(),
        PartitionStart::AllInOne => vec![(0..m).collect()],
    };
    let mut sigma = sigma_scaled(cw, &parts, eps1);
    let mut cuts: HashMap<Vec<usize>, Cut> = HashMap::new();
    let mut moves = Vec::new();
    let budget = opts.max_moves.unwrap_or(16 * m * m + 64);

    loop {
        // weight from each element to each part
        let to_part: Vec<Vec<u128>> =
            (0..m).map(|x| parts.iter().map(|p| p.iter().map(|&y| cw.w(x, y)).sum()).collect()).collect();
        let mut merge: Option<(BigInt, usize, usize)> = None;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let e: u128 = parts[i].iter().map(|&x| to_part[x][j]).sum();
                let ex = scale.excess(e, parts[i].len(), parts[j].len());
                if ex.is_positive() && merge.as_ref().is_none_or(|(b, _, _)| ex > *b) {
                    merge = Some((ex, i, j));
                }
            }
        }
        let step = if let Some((ex, i, j)) = merge {
            let sizes = (parts[i].len(), parts[j].len());
            let pj = parts.swap_remove(j);
            parts[i].extend(pj);
            parts[i].sort_unstable();
            Some((MoveKind::Merge, sizes, -ex))
        } else {
            let mut split: Option<(BigInt, usize)> = None;
            for (i, p) in parts.iter().enumerate() {
                if p.len() < 2 {
                    continue;
                }
                let cut = cuts
                    .entry(p.clone())
                    .or_insert_with(|| cw.min_ratio_cut(p, opts.cut_cap, &mut rng).expect("part of size >= 2"));
                let ex = scale.excess(cut.weight, cut.e_side.len(), cut.f_side.len());
                if ex.is_negative() && split.as_ref().is_none_or(|(b, _)| ex < *b) {
                    split = Some((ex, i));
                }
            }
            split.map(|(ex, i)| {
                let cut = cuts[&parts[i]].clone();
                let sizes = (cut.e_side.len(), cut.f_side.len());
                parts[i] = cut.e_side;
                parts.push(cut.f_side);
                (MoveKind::Split, sizes, ex)
            })
        };
        let Some((kind, sizes, delta)) = step else { break };
        if moves.len() >= budget {
            return Err(Error::GuardTrip(format!("partition search exceeded {budget} moves")));
        }
        sigma += &delta;
        moves.push(PartitionMove { kind, sizes, delta, sigma_after: sigma.clone() });
    }

    parts.sort();
    let mut property2 = true;
    let mut uncertified = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        if p.len() < 2 {
            continue;
        }
        let cut = match cuts.get(p) {
            Some(c) => c.clone(),
            None => cw.min_ratio_cut(p, opts.cut_cap, &mut rng).expect("part of size >= 2"),
        };
        if !cut.exact {
            uncertified.push(i);
        }
        property2 &= !scale.excess(cut.weight, cut.e_side.len(), cut.f_side.len()).is_negative();
    }
    let mut property1 = true;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            property1 &= !scale.excess(cw.e(&parts[i], &parts[j]), parts[i].len(), parts[j].len()).is_positive();
        }
    }

    let groups: Vec<GroupSet> = parts.iter().map(|p| a.subset(p)).collect();
    let part_energies = groups.iter().map(|g| energy(g, k).map(|e| e.value)).collect::<Result<Vec<_>>>()?;
    let t = cw.total_big();
    let (p, q) = (BigInt::from(eps1.numer()), BigInt::from(eps1.denom()));
    let factor = &q - BigInt::from(2 * k - 1) * &p;
    let sum_t: BigUint = part_energies.iter().sum();
    let property3 = Inequality::new(
        "sum T_k(A_i) >= (1 - (2k-1) eps1) T_k(A)",
        BigInt::from(sum_t) * &q,
        Relation::Ge,
        &factor * BigInt::from(t.clone()),
    );
    let size_floor = factor.is_positive().then(|| {
        let max = parts.iter().map(Vec::len).max().unwrap_or(0);
        Inequality::new(
            "max |A_i|^2 >= (1 - (2k-1) eps1)^2 |A|",
            BigInt::from(max * max) * &q * &q,
            Relation::Ge,
            &factor * &factor * BigInt::from(m),
        )
    });
    let sigma_rat = BigRational::new(sigma.clone(), scale.mq.clone());
    Ok(PartitionState {
        k,
        epsilon1: eps1.clone(),
        parts: groups,
        sigma: sigma_rat,
        sigma_scaled: sigma,
        energy: t,
        part_energies,
        property1,
        property2,
        uncertified,
        property3,
        size_floor,
        moves,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartStatus {
    /// One element: no bipartition exists.
    Singleton,
    /// Every cut of the whole part passes at `C = eps'`.
    StronglyConnected,
    /// A sub-part of relative size `>= beta` whose cuts all pass.
    ConnectedCore,
    Bad,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongPart {
    pub elements: GroupSet,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy: BigUint,
    pub status: PartStatus,
    /// The connected core, for `ConnectedCore`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<GroupSet>,
    /// Status rests on exhaustive cut search only.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongRound {
    pub round: usize,
    pub parts: usize,
    pub bad: usize,
    #[serde(with = "crate::verdict::biguint_string")]
    pub good_energy: BigUint,
    /// `sum_good T_2 >= (1 - eps) T_2(A)` for this round.
    pub condition: Inequality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongPartition {
    pub epsilon: RationalConstant,
    pub beta: RationalConstant,
    /// Rational upper bound on `log(2m/eps) / (2 log(1/beta))`.
    pub s0_upper: RationalConstant,
    pub rounds_cap: usize,
    /// `eps / (6 s0_upper)`, the constant used for every cut check.
    pub epsilon_prime: RationalConstant,
    pub parts: Vec<StrongPart>,
    pub omega: GroupSet,
    pub success: bool,
    /// `"success"` or `"theorem-guarantee-not-met"`.
    pub status: String,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy: BigUint,
    #[serde(with = "crate::verdict::biguint_string")]
    pub omega_energy: BigUint,
    /// `T_2(A) - sum T_2(A_i) - T_2(Omega)`.
    #[serde(with = "crate::verdict::biguint_string")]
    pub cross_terms: BigUint,
    /// `sum T_2(A_i) >= (1 - eps) T_2(A)`.
    pub property2: Inequality,
    /// `T_2(Omega) <= eps T_2(A)`.
    pub omega_bound: Inequality,
    pub trace: Vec<StrongRound>,
}

impl StrongPartition {
    pub fn ok(&self) -> bool {
        self.property2.ok() && self.omega_bound.ok()
    }

    pub fn inequalities(&self) -> Vec<&Inequality> {
        let mut v: Vec<&Inequality> = self.trace.iter().map(|r| &r.condition).collect();
        v.extend([&self.property2, &self.omega_bound]);
        v
    }

    /// Parts and `Omega` are disjoint and cover `a`.
    pub fn is_partition_of(&self, a: &GroupSet) -> bool {
        let total: usize = self.parts.iter().map(|p| p.elements.len()).sum::<usize>() + self.omega.len();
        let mut all = self.omega.clone();
        for p in &self.parts {
            match all.union(&p.elements) {
                Ok(u) => all = u,
                Err(_) => return false,
            }
        }
        total == a.len() && all == *a
    }
}

struct Classified {
    part: StrongPart,
    refinement: Option<Vec<GroupSet>>,
}

fn classify(
    x: &GroupSet,
    eps_prime: &RationalConstant,
    beta: &RationalConstant,
    opts: &PartitionOptions,
) -> Result<Classified> {
    let t = energy(x, 2)?.value;
    let part = |status, core, certified| StrongPart { elements: x.clone(), energy: t.clone(), status, core, certified };
    if x.len() == 1 {
        return Ok(Classified { part: part(PartStatus::Singleton, None, true), refinement: None });
    }
    let cw = CutWeight::new(x, 2)?;
    if x.len() <= opts.cut_cap {
        let all: Vec<usize> = (0..x.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let cut = cw.min_ratio_cut(&all, opts.cut_cap, &mut rng).expect("size >= 2");
        if !Scale::new(&cw, eps_prime).excess(cut.weight, cut.e_side.len(), cut.f_side.len()).is_negative() {
            return Ok(Classified { part: part(PartStatus::StronglyConnected, None, true), refinement: None });
        }
    }
    let lemma = lemma_partition(&cw, eps_prime, opts)?;
    let (bn, bd) = (beta.numer(), beta.denom());
    let core = lemma.parts.iter().enumerate().find(|(i, y)| {
        big(y.len()) * &bd >= &bn * big(x.len()) && lemma.property2 && !lemma.uncertified.contains(i)
    });
    if let Some((_, y)) = core {
        return Ok(Classified { part: part(PartStatus::ConnectedCore, Some(y.clone()), true), refinement: None });
    }
    let certified = lemma.uncertified.is_empty() && x.len() <= opts.cut_cap;
    Ok(Classified { part: part(PartStatus::Bad, None, certified), refinement: Some(lemma.parts) })
}

fn s0_upper(m: usize, eps: &RationalConstant, beta: &RationalConstant) -> RationalConstant {
    let one = BigRational::one();
    let two_m = BigRational::from_integer(BigInt::from(2 * m));
    let (_, num_hi) = log2_ratio_bounds(&(two_m / eps.as_ratio()), LOG_PRECISION);
    let (den_lo, _) = log2_ratio_bounds(&(&one / beta.as_ratio()), LOG_PRECISION);
    // log2(1/b) >= 1 - b
    let den_lo = den_lo.max(&one - beta.as_ratio());
    let s = num_hi / (BigRational::from_integer(2.into()) * den_lo);
    let sixty_four = BigRational::from_integer(64.into());
    let up = BigRational::new(BigInt::from(ceil_ratio(&(s * &sixty_four))), 64.into());
    RationalConstant::from_ratio(up.max(one)).expect("positive")
}

/// Refines `A` into parts that are strongly `beta`-connected of degree 2
/// with constant `eps'`, plus an exceptional set `Omega`.
///
/// Each round classifies the current parts and stops once the good parts
/// carry `(1 - eps) T_2(A)`; otherwise every bad part is replaced by its
/// lemma partition at `eps1 = eps'`.
pub fn strong_partition(
    a: &GroupSet,
    eps: &RationalConstant,
    beta: &RationalConstant,
    opts: &PartitionOptions,
) -> Result<StrongPartition> {
    let one = RationalConstant::one();
    if eps.is_zero() || *eps >= one || beta.is_zero() || *beta >= one {
        return Err(Error::Domain("epsilon and beta must lie in (0, 1)".into()));
    }
    if a.is_empty() {
        return Err(Error::Domain("strong partition of the empty set".into()));
    }
    let m = a.len();
    // m >= eps / (2 beta^2)
    let lhs = BigRational::from_integer(BigInt::from(2 * m)) * beta.as_ratio() * beta.as_ratio();
    if lhs < *eps.as_ratio() {
        return Err(Error::Domain(format!("strong partition needs |A| >= eps / (2 beta^2), got |A| = {m}")));
    }
    let s0 = s0_upper(m, eps, beta);
    let rounds_cap = usize::try_from(&ceil_ratio(s0.as_ratio())).unwrap_or(usize::MAX).max(1);
    let eps_prime = RationalConstant::from_ratio(eps.as_ratio() / (BigRational::from_integer(6.into()) * s0.as_ratio()))?;
    let t = energy(a, 2)?.value;
    let (p, q) = (eps.numer(), eps.denom());
    let rhs_factor = &q - &p;

    let mut pending: Vec<GroupSet> = vec![a.clone()];
    let mut good: Vec<StrongPart> = Vec::new();
    let mut trace = Vec::new();
    let mut round = 0;
    let (success, bad) = loop {
        let mut bad: Vec<(StrongPart, Vec<GroupSet>)> = Vec::new();
        for x in pending.drain(..) {
            let c = classify(&x, &eps_prime, beta, opts)?;
            match c.refinement {
                None => good.push(c.part),
                Some(r) => bad.push((c.part, r)),
            }
        }
        let good_energy: BigUint = good.iter().map(|p| &p.energy).sum();
        let condition = Inequality::from_terms(
            "sum_good T_2 >= (1 - eps) T_2(A)",
            vec![Power::new(good_energy.clone(), 1), Power::new(q.clone(), 1)],
            Relation::Ge,
            vec![Power::new(rhs_factor.clone(), 1), Power::new(t.clone(), 1)],
        )
        .observed();
        let met = condition.holds;
        trace.push(StrongRound { round, parts: good.len() + bad.len(), bad: bad.len(), good_energy, condition });
        if met || round + 1 >= rounds_cap || bad.is_empty() {
            break (met, bad);
        }
        for (_, refinement) in bad {
            pending.extend(refinement);
        }
        round += 1;
    };

    let omega = GroupSet::new(a.spec().clone(), bad.iter().flat_map(|(p, _)| p.elements.iter().cloned()))?;
    let omega_energy = if omega.is_empty() { BigUint::zero() } else { energy(&omega, 2)?.value };
    good.sort_by(|x, y| x.elements.elems().cmp(y.elements.elems()));
    let good_energy: BigUint = good.iter().map(|p| &p.energy).sum();
    let cross_terms = &t - &good_energy - &omega_energy;
    let property2 = Inequality::from_terms(
        "sum T_2(A_i) >= (1 - eps) T_2(A)",
        vec![Power::new(good_energy, 1), Power::new(q.clone(), 1)],
        Relation::Ge,
        vec![Power::new(rhs_factor, 1), Power::new(t.clone(), 1)],
    )
    .asserted_if(success);
    let omega_bound = Inequality::from_terms(
        "T_2(Omega) <= eps T_2(A)",
        vec![Power::new(omega_energy.clone(), 1), Power::new(q, 1)],
        Relation::Le,
        vec![Power::new(p, 1), Power::new(t.clone(), 1)],
    )
    .asserted_if(success);
    Ok(StrongPartition {
        epsilon: eps.clone(),
        beta: beta.clone(),
        s0_upper: s0,
        rounds_cap,
        epsilon_prime: eps_prime,
        parts: good,
        omega,
        success,
        status: if success { "success" } else { "theorem-guarantee-not-met" }.into(),
        energy: t,
        omega_energy,
        cross_terms,
        property2,
        omega_bound,
        trace,
    })
}

/// Position lists of `parts` inside `a`.
pub fn part_positions(a: &GroupSet, parts: &[GroupSet]) -> Vec<Vec<usize>> {
    parts.iter().map(|p| positions(a, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use proptest::prelude::*;

    fn rc(p: u64, q: u64) -> RationalConstant {
        RationalConstant::new(p, q).unwrap()
    }

    fn subspace(dim: usize, n: usize) -> GroupSet {
        let v = GroupSpec::vector(2, n).unwrap();
        GroupSet::new(v.clone(), (0..1u64 << dim).map(|i| v.elem_at(i))).unwrap()
    }

    fn all_subsets_e(cw: &CutWeight, part: &[usize], s: &Scale) -> bool {
        let n = part.len();
        (1u32..(1 << n) - 1).all(|mask| {
            let es: Vec<usize> = (0..n).filter(|x| mask >> x & 1 == 0).map(|x| part[x]).collect();
            let fs: Vec<usize> = (0..n).filter(|x| mask >> x & 1 == 1).map(|x| part[x]).collect();
            !s.excess(cw.e(&es, &fs), es.len(), fs.len()).is_negative()
        })
    }

    #[test]
    fn pair_splits_at_one() {
        let a = GroupSet::from_i64s(GroupSpec::cyclic(100).unwrap(), &[0, 1]).unwrap();
        for start in [PartitionStart::Singletons, PartitionStart::AllInOne] {
            let opts = PartitionOptions { start, ..Default::default() };
            let st = partition_min_sigma(&a, 2, &RationalConstant::one(), &opts).unwrap();
            assert_eq!(st.parts.len(), 2);
            assert!(st.property1 && st.property2 && st.certified());
            // sigma = (1 - 6/4) = -1/2
            assert_eq!(st.sigma, BigRational::new((-1).into(), 2.into()));
        }
    }

    #[test]
    fn subspace_is_one_part() {
        let p = subspace(3, 3);
        let all = PartitionOptions { start: PartitionStart::AllInOne, ..Default::default() };
        for e in [rc(1, 4), rc(1, 2), RationalConstant::one()] {
            let st = partition_min_sigma(&p, 2, &e, &all).unwrap();
            assert_eq!(st.parts, vec![p.clone()]);
            assert!(st.ok() && st.property3.holds && st.moves.is_empty());
            assert_eq!(st.sigma_scaled, BigInt::zero());
        }
        for e in [rc(1, 4), rc(1, 2)] {
            let st = partition_min_sigma(&p, 2, &e, &PartitionOptions::default()).unwrap();
            assert_eq!(st.parts, vec![p.clone()]);
        }
        // at eps1 = 1 every merge of singletons has zero excess
        let st = partition_min_sigma(&p, 2, &RationalConstant::one(), &PartitionOptions::default()).unwrap();
        assert_eq!(st.parts.len(), 8);
        assert_eq!(st.sigma_scaled, BigInt::zero());
    }

    #[test]
    fn strong_partition_examples() {
        let p = subspace(3, 3);
        let r = strong_partition(&p, &rc(1, 2), &rc(1, 2), &PartitionOptions::default()).unwrap();
        assert!(r.success && r.omega.is_empty() && r.ok());
        assert_eq!(r.parts.len(), 1);
        assert_eq!(r.parts[0].status, PartStatus::StronglyConnected);
        assert!(r.is_partition_of(&p));

        let a = GroupSet::from_i64s(GroupSpec::integers(), &[0, 1_000_000]).unwrap();
        let r = strong_partition(&a, &rc(1, 2), &rc(1, 2), &PartitionOptions::default()).unwrap();
        assert!(r.is_partition_of(&a));
        let parts_t: BigUint = r.parts.iter().map(|p| &p.energy).sum();
        assert_eq!(parts_t + &r.omega_energy + &r.cross_terms, r.energy);
        assert!(r.ok());

        assert!(matches!(
            strong_partition(&a, &rc(1, 2), &rc(1, 8), &PartitionOptions::default()),
            Err(Error::Domain(_))
        ));
    }

    proptest! {
        #[test]
        fn lemma_properties(xs in prop::collection::vec(0i64..30, 1..11), e in 1u64..5, seed in 0u64..50, all_in_one: bool) {
            let a = GroupSet::from_i64s(GroupSpec::cyclic(31).unwrap(), &xs).unwrap();
            let eps = rc(e, 4);
            let opts = PartitionOptions {
                start: if all_in_one { PartitionStart::AllInOne } else { PartitionStart::Singletons },
                seed,
                ..Default::default()
            };
            let st = partition_min_sigma(&a, 2, &eps, &opts).unwrap();
            prop_assert!(st.ok());
            prop_assert!(st.property3.holds);
            let cw = CutWeight::new(&a, 2).unwrap();
            let pos = part_positions(&a, &st.parts);
            prop_assert_eq!(pos.iter().map(Vec::len).sum::<usize>(), a.len());
            prop_assert_eq!(sigma_scaled(&cw, &pos, &eps), st.sigma_scaled.clone());
            let s = Scale::new(&cw, &eps);
            for p in &pos {
                prop_assert!(all_subsets_e(&cw, p, &s));
            }
            let mut prev = sigma_scaled(&cw, &match opts.start {
                PartitionStart::Singletons => (0..a.len()).map(|i| vec![i]).collect::<Vec<_>>(),
                PartitionStart::AllInOne => vec![(0..a.len()).collect()],
            }, &eps);
            for mv in &st.moves {
                prop_assert!(mv.delta.is_negative());
                prop_assert_eq!(&prev + &mv.delta, mv.sigma_after.clone());
                prev = mv.sigma_after.clone();
            }
        }

        #[test]
        fn strong_partition_accounting(xs in prop::collection::vec(0i64..40, 2..11), seed in 0u64..20) {
            let a = GroupSet::from_i64s(GroupSpec::cyclic(41).unwrap(), &xs).unwrap();
            let opts = PartitionOptions { seed, ..Default::default() };
            let r = strong_partition(&a, &rc(1, 4), &rc(1, 2), &opts).unwrap();
            prop_assert!(r.is_partition_of(&a));
            prop_assert!(r.ok());
            let parts_t: BigUint = r.parts.iter().map(|p| &p.energy).sum();
            prop_assert_eq!(parts_t + &r.omega_energy + &r.cross_terms, r.energy.clone());
        }
    }
}
