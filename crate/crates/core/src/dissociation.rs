//! Dissociated sets, signed spans, and the small-basis machinery.
//!
//! A set `L` is dissociated when no nonzero `eps in {-1, 0, 1}^|L|` has
//! `sum eps_i l_i = 0`. `Span L` is the set of all such signed sums.
//! Sign vectors are aligned with the sorted elements of `L`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::energy::energy;
use crate::error::{Error, Result};
use crate::group::{Elem, GroupSet, GroupSpec};
use crate::keys::{Arith, KeySpace};
use crate::scalar::{big, RationalConstant};
use crate::verdict::{Inequality, Power, Relation};

/// Size limits for the exact searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest `|L|` whose `3^|L|` signed sums are enumerated outright.
    pub enumerate: usize,
    /// Largest `|L|` handled by meet-in-the-middle.
    pub mitm: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { enumerate: 12, mitm: 30 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMode {
    Exhaustive,
    MeetInTheMiddle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissociationVerdict {
    pub dissociated: bool,
    /// A nonzero sign vector with vanishing sum, when not dissociated.
    pub witness: Option<Vec<i8>>,
    pub mode: CertificateMode,
}

/// A set that has been certified dissociated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DissociatedSet {
    base: GroupSet,
    certificate: CertificateMode,
}

impl DissociatedSet {
    /// Certifies `l`; a set with a relation is a domain error.
    pub fn certify(l: GroupSet, caps: Caps) -> Result<Self> {
        let v = is_dissociated_with(&l, caps)?;
        if !v.dissociated {
            return Err(Error::Domain(format!(
                "set is not dissociated: relation {:?}",
                v.witness.unwrap_or_default()
            )));
        }
        Ok(DissociatedSet { base: l, certificate: v.mode })
    }

    pub fn base(&self) -> &GroupSet {
        &self.base
    }

    pub fn certificate(&self) -> CertificateMode {
        self.certificate
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn into_base(self) -> GroupSet {
        self.base
    }
}

fn decode_signs(mut idx: u64, len: usize) -> Vec<i8> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(match idx % 3 {
            0 => 0,
            1 => 1,
            _ => -1,
        });
        idx /= 3;
    }
    out
}

/// All `3^n` signed sums, indexed by base-3 digits (0, +1, -1) with the
/// first element least significant.
fn signed_sums<A: Arith>(arith: &A, keys: &[A::K]) -> Vec<A::K> {
    let mut sums = Vec::with_capacity(3usize.pow(keys.len() as u32));
    sums.push(arith.zero());
    for k in keys {
        let n = sums.len();
        let nk = arith.neg(k);
        for t in 0..n {
            let s = arith.add(&sums[t], k);
            sums.push(s);
        }
        for t in 0..n {
            let s = arith.add(&sums[t], &nk);
            sums.push(s);
        }
    }
    sums
}

/// Precomputed half-sums for meet-in-the-middle queries over one `L`.
struct Halves<K> {
    n: usize,
    split: usize,
    left: Vec<K>,
    left_index: FxHashMap<K, u32>,
    right: Vec<K>,
}

impl<K: Clone + Eq + std::hash::Hash> Halves<K> {
    fn new<A: Arith<K = K>>(arith: &A, keys: &[K]) -> Self {
        let split = keys.len().div_ceil(2);
        let left = signed_sums(arith, &keys[..split]);
        let right = signed_sums(arith, &keys[split..]);
        let mut left_index = FxHashMap::default();
        left_index.reserve(left.len());
        for (t, s) in left.iter().enumerate() {
            left_index.entry(s.clone()).or_insert(t as u32);
        }
        Halves { n: keys.len(), split, left, left_index, right }
    }

    fn signs(&self, l: usize, r: usize) -> Vec<i8> {
        let mut out = decode_signs(l as u64, self.split);
        out.extend(decode_signs(r as u64, self.n - self.split));
        out
    }

    /// Some `eps` with `sum eps_i l_i = target`; with `nonzero`, `eps != 0`.
    fn solve<A: Arith<K = K>>(&self, arith: &A, target: &K, nonzero: bool) -> Option<Vec<i8>> {
        if nonzero {
            if let Some(t) = (1..self.left.len()).find(|&t| &self.left[t] == target) {
                return Some(self.signs(t, 0));
            }
        }
        let start = usize::from(nonzero);
        for (r, s) in self.right.iter().enumerate().skip(start) {
            let want = arith.add(target, &arith.neg(s));
            if let Some(&l) = self.left_index.get(&want) {
                return Some(self.signs(l as usize, r));
            }
        }
        None
    }
}

enum Engine {
    Fast(KeySpace, Halves<i128>),
    Slow(GroupSpec, Halves<Elem>),
}

/// Answers repeated `x in Span L` queries by meet-in-the-middle.
pub struct SpanOracle {
    lambda: GroupSet,
    engine: Engine,
}

impl SpanOracle {
    pub fn new(lambda: &GroupSet, caps: Caps) -> Result<Self> {
        if lambda.len() > caps.mitm {
            return Err(Error::capacity("span basis size", lambda.len(), caps.mitm));
        }
        let spec = lambda.spec();
        let fast = KeySpace::for_spec(spec).and_then(|space| {
            let keys: Option<Vec<i128>> = lambda.iter().map(|e| space.encode(e)).collect();
            keys.map(|k| (space, k))
        });
        let engine = match fast {
            Some((space, keys)) => {
                let h = Halves::new(&space, &keys);
                Engine::Fast(space, h)
            }
            None => Engine::Slow(spec.clone(), Halves::new(spec, lambda.elems())),
        };
        Ok(SpanOracle { lambda: lambda.clone(), engine })
    }

    pub fn lambda(&self) -> &GroupSet {
        &self.lambda
    }

    /// A sign vector expressing `x`, or `None` if `x` is outside the span.
    pub fn express(&self, x: &Elem) -> Result<Option<Vec<i8>>> {
        self.lambda.spec().check(x)?;
        Ok(match &self.engine {
            Engine::Fast(space, h) => match space.encode_target(x) {
                Some(t) => h.solve(space, &t, false),
                None => None,
            },
            Engine::Slow(spec, h) => h.solve(spec, x, false),
        })
    }

    pub fn contains(&self, x: &Elem) -> Result<bool> {
        Ok(self.express(x)?.is_some())
    }

    fn relation(&self) -> Option<Vec<i8>> {
        match &self.engine {
            Engine::Fast(space, h) => h.solve(space, &0, true),
            Engine::Slow(spec, h) => h.solve(spec, &spec.zero(), true),
        }
    }
}

fn exhaustive_relation(l: &GroupSet) -> Option<Vec<i8>> {
    let spec = l.spec();
    let sums = signed_sums(spec, l.elems());
    (1..sums.len()).find(|&t| sums[t].is_zero()).map(|t| decode_signs(t as u64, l.len()))
}

pub fn is_dissociated_with(l: &GroupSet, caps: Caps) -> Result<DissociationVerdict> {
    let (witness, mode) = if l.len() <= caps.enumerate {
        (exhaustive_relation(l), CertificateMode::Exhaustive)
    } else {
        let oracle = SpanOracle::new(l, caps)?;
        (oracle.relation(), CertificateMode::MeetInTheMiddle)
    };
    Ok(DissociationVerdict { dissociated: witness.is_none(), witness, mode })
}

/// Exact dissociativity test with a relation witness on failure.
pub fn is_dissociated(l: &GroupSet) -> Result<DissociationVerdict> {
    is_dissociated_with(l, Caps::default())
}

/// Meet-in-the-middle test regardless of size (up to the cap).
pub fn is_dissociated_mitm(l: &GroupSet, caps: Caps) -> Result<DissociationVerdict> {
    let oracle = SpanOracle::new(l, caps)?;
    let witness = oracle.relation();
    Ok(DissociationVerdict {
        dissociated: witness.is_none(),
        witness,
        mode: CertificateMode::MeetInTheMiddle,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanResult {
    pub lambda: GroupSet,
    /// `|Span L|`, known when the span was enumerated.
    pub size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<GroupSet>,
    /// `|Span L ∩ target|` when a target was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covered: Option<usize>,
}

impl SpanResult {
    /// Span elements present in `target`, in order.
    pub fn intersect(&self, target: &GroupSet) -> Option<Vec<Elem>> {
        let e = self.elements.as_ref()?;
        Some(target.iter().filter(|x| e.contains(x)).cloned().collect())
    }
}

pub fn span_enumerate_with(l: &GroupSet, target: Option<&GroupSet>, caps: Caps) -> Result<SpanResult> {
    if l.len() > caps.enumerate {
        return Err(Error::capacity("span enumeration size", l.len(), caps.enumerate));
    }
    if let Some(t) = target {
        l.same_group(t)?;
    }
    let sums: BTreeSet<Elem> = signed_sums(l.spec(), l.elems()).into_iter().collect();
    let elements = GroupSet::from_sorted_unchecked(l.spec().clone(), sums.into_iter().collect());
    let covered = target.map(|t| t.iter().filter(|x| elements.contains(x)).count());
    Ok(SpanResult {
        lambda: l.clone(),
        size: Some(elements.len() as u64),
        elements: Some(elements),
        covered,
    })
}

/// The full span of `L` (at most `3^|L|` elements).
pub fn span_enumerate(l: &GroupSet) -> Result<SpanResult> {
    span_enumerate_with(l, None, Caps::default())
}

/// `|Span L ∩ target|`, enumerating when `L` is small and probing otherwise.
pub fn span_cover(l: &GroupSet, target: &GroupSet, caps: Caps) -> Result<SpanResult> {
    if l.len() <= caps.enumerate {
        return span_enumerate_with(l, Some(target), caps);
    }
    l.same_group(target)?;
    let oracle = SpanOracle::new(l, caps)?;
    let mut covered = 0;
    for x in target.iter() {
        covered += usize::from(oracle.contains(x)?);
    }
    Ok(SpanResult { lambda: l.clone(), size: None, elements: None, covered: Some(covered) })
}

/// `x in Span L`, with a sign vector when it is.
pub fn span_contains_with(l: &GroupSet, x: &Elem, caps: Caps) -> Result<Option<Vec<i8>>> {
    SpanOracle::new(l, caps)?.express(x)
}

pub fn span_contains(l: &GroupSet, x: &Elem) -> Result<bool> {
    Ok(span_contains_with(l, x, Caps::default())?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyStep {
    pub element: Elem,
    pub added: bool,
    /// Signs over `insertion_order` (prefix at the time) expressing the
    /// rejected element.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<i8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalDissociated {
    pub lambda: DissociatedSet,
    pub insertion_order: Vec<Elem>,
    pub trace: Vec<GreedyStep>,
}

/// Greedy maximal dissociated subset of `A`: scan `A` (sorted, or shuffled
/// by `seed`) and keep each element outside the span of those kept so far.
pub fn maximal_dissociated_subset_with(
    a: &GroupSet,
    seed: Option<u64>,
    caps: Caps,
) -> Result<MaximalDissociated> {
    let mut order: Vec<Elem> = a.elems().to_vec();
    if let Some(s) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    }
    let spec = a.spec().clone();
    let mut kept: Vec<Elem> = Vec::new();
    let mut oracle = SpanOracle::new(&GroupSet::empty(spec.clone()), caps)?;
    let mut trace = Vec::with_capacity(order.len());
    for x in order {
        let sorted_signs = oracle.express(&x)?;
        match sorted_signs {
            Some(signs) => {
                let lam = oracle.lambda();
                let witness = kept
                    .iter()
                    .map(|e| signs[lam.position(e).expect("kept element in lambda")])
                    .collect();
                trace.push(GreedyStep { element: x, added: false, witness: Some(witness) });
            }
            None => {
                kept.push(x.clone());
                trace.push(GreedyStep { element: x, added: true, witness: None });
                let lam = GroupSet::new(spec.clone(), kept.iter().cloned())?;
                oracle = SpanOracle::new(&lam, caps)?;
            }
        }
    }
    let lambda = DissociatedSet::certify(oracle.lambda().clone(), caps)?;
    Ok(MaximalDissociated { lambda, insertion_order: kept, trace })
}

pub fn maximal_dissociated_subset(a: &GroupSet, seed: Option<u64>) -> Result<MaximalDissociated> {
    maximal_dissociated_subset_with(a, seed, Caps::default())
}

/// `T_k(L) <= 288^k k^k |L|^k` for a dissociated `L`.
pub fn check_rudin(l: &DissociatedSet, k: u32) -> Result<Inequality> {
    if k < 2 {
        return Err(Error::Domain(format!("order must be >= 2, got {k}")));
    }
    let t = if l.is_empty() { BigUint::from(0u32) } else { energy(l.base(), k)?.value };
    Ok(Inequality::from_terms(
        "T_k(L) <= 288^k k^k |L|^k",
        vec![Power::new(t, 1)],
        Relation::Le,
        vec![
            Power::new(288u32, k),
            Power::new(k, k),
            Power::new(big(l.len()), k),
        ],
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallBasisReport {
    pub k: u32,
    pub c: RationalConstant,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy: BigUint,
    pub lambda: DissociatedSet,
    /// `|L|^k T_k(A) p^2k <= (288 k |A|^2)^k q^2k` for `C = p/q`.
    pub bound: Inequality,
    pub covered: usize,
    pub spans_a: bool,
}

/// Runs the greedy extraction and compares `|L|` with
/// `288 C^-2 k |A|^2 / T_k(A)^(1/k)`.
pub fn small_basis_bound_with(
    a: &GroupSet,
    k: u32,
    c: &RationalConstant,
    seed: Option<u64>,
    caps: Caps,
) -> Result<SmallBasisReport> {
    if a.is_empty() {
        return Err(Error::Domain("small basis of the empty set".into()));
    }
    if c.is_zero() {
        return Err(Error::Domain("C must be positive".into()));
    }
    let t = energy(a, k)?.value;
    let found = maximal_dissociated_subset_with(a, seed, caps)?;
    let lam = found.lambda;
    let (p, q) = (c.numer(), c.denom());
    let bound = Inequality::from_terms(
        "|L|^k T_k(A) C^2k <= (288 k |A|^2)^k",
        vec![Power::new(big(lam.len()), k), Power::new(t.clone(), 1), Power::new(p, 2 * k)],
        Relation::Le,
        vec![
            Power::new(288u32, k),
            Power::new(k, k),
            Power::new(big(a.len()), 2 * k),
            Power::new(q, 2 * k),
        ],
    );
    let cover = span_cover(lam.base(), a, caps)?;
    let covered = cover.covered.unwrap_or(0);
    Ok(SmallBasisReport {
        k,
        c: c.clone(),
        energy: t,
        lambda: lam,
        bound,
        covered,
        spans_a: covered == a.len(),
    })
}

pub fn small_basis_bound(a: &GroupSet, k: u32, c: &RationalConstant) -> Result<SmallBasisReport> {
    small_basis_bound_with(a, k, c, None, Caps::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(xs: &[i64]) -> GroupSet {
        GroupSet::from_i64s(GroupSpec::integers(), xs).unwrap()
    }

    fn value(l: &GroupSet, signs: &[i8]) -> Elem {
        let spec = l.spec();
        l.iter().zip(signs).fold(spec.zero(), |acc, (e, s)| spec.add(&acc, &spec.scale(e, i64::from(*s))))
    }

    #[test]
    fn dissociated_examples() {
        assert!(is_dissociated(&ints(&[1, 2])).unwrap().dissociated);
        let l = ints(&[1, 2, 3]);
        let v = is_dissociated(&l).unwrap();
        assert!(!v.dissociated);
        let w = v.witness.unwrap();
        assert!(w.iter().any(|s| *s != 0));
        assert!(value(&l, &w).is_zero());
        let l = ints(&[0, 5]);
        let v = is_dissociated(&l).unwrap();
        assert_eq!(v.witness.as_deref(), Some(&[1i8, 0][..]));
        assert!(is_dissociated(&GroupSet::empty(GroupSpec::integers())).unwrap().dissociated);
    }

    #[test]
    fn mitm_cap_is_a_capacity_error() {
        let l = ints(&(0..31).map(|i| 1i64 << i).collect::<Vec<_>>());
        assert!(matches!(is_dissociated(&l), Err(Error::Capacity { .. })));
        let caps = Caps { enumerate: 4, mitm: 8 };
        let l = ints(&[1, 2, 4, 8, 16, 32, 64, 128]);
        let v = is_dissociated_with(&l, caps).unwrap();
        assert!(v.dissociated && v.mode == CertificateMode::MeetInTheMiddle);
    }

    #[test]
    fn powers_of_two_are_dissociated_at_mitm_scale() {
        let l = ints(&(0..20).map(|i| 1i64 << i).collect::<Vec<_>>());
        assert!(is_dissociated(&l).unwrap().dissociated);
        let mut xs: Vec<i64> = (0..19).map(|i| 1i64 << i).collect();
        xs.push(3 + (1 << 10));
        let l = ints(&xs);
        let v = is_dissociated(&l).unwrap();
        assert!(!v.dissociated);
        assert!(value(&l, &v.witness.unwrap()).is_zero());
    }

    #[test]
    fn greedy_examples() {
        let m = maximal_dissociated_subset(&ints(&[1, 2, 3, 4]), None).unwrap();
        assert_eq!(m.lambda.base(), &ints(&[1, 2, 4]));
        let rejected = m.trace.iter().find(|s| !s.added).unwrap();
        assert_eq!(rejected.element, Elem::int(3));
        assert_eq!(rejected.witness.as_deref(), Some(&[1i8, 1][..]));

        let z = maximal_dissociated_subset(&ints(&[0]), None).unwrap();
        assert!(z.lambda.is_empty());
        assert_eq!(span_enumerate(z.lambda.base()).unwrap().size, Some(1));

        let v = GroupSpec::vector(2, 4).unwrap();
        let sub = GroupSet::new(v.clone(), (0..8).map(|i| v.elem_at(i))).unwrap();
        let m = maximal_dissociated_subset(&sub, Some(7)).unwrap();
        assert_eq!(m.lambda.len(), 3);
        let span = span_enumerate(m.lambda.base()).unwrap();
        assert!(sub.is_subset_of(span.elements.as_ref().unwrap()));
    }

    #[test]
    fn span_examples() {
        let s = span_enumerate(&GroupSet::empty(GroupSpec::integers())).unwrap();
        assert_eq!(s.elements.unwrap(), ints(&[0]));
        let s = span_enumerate(&ints(&[1, 2])).unwrap();
        assert_eq!(s.size, Some(7));
        assert_eq!(s.elements.unwrap(), ints(&[-3, -2, -1, 0, 1, 2, 3]));
        let v = GroupSpec::vector(2, 2).unwrap();
        let l = GroupSet::new(v.clone(), [Elem::vector(&[1, 0]), Elem::vector(&[0, 1])]).unwrap();
        assert_eq!(span_enumerate(&l).unwrap().size, Some(4));

        let l = ints(&[1, 2]);
        assert!(span_contains(&l, &Elem::int(0)).unwrap());
        assert_eq!(span_contains_with(&l, &Elem::int(3), Caps::default()).unwrap(), Some(vec![1, 1]));
        assert!(!span_contains(&l, &Elem::int(4)).unwrap());
        let d = ints(&[1, 3, 9]);
        assert_eq!(span_contains_with(&d, &Elem::int(9), Caps::default()).unwrap(), Some(vec![0, 0, 1]));
        let far = Elem::Integer(num_bigint::BigInt::from(1u8) << 100usize);
        assert!(!span_contains(&d, &far).unwrap());
    }

    #[test]
    fn rudin_examples() {
        let one = DissociatedSet::certify(ints(&[1]), Caps::default()).unwrap();
        for k in 2..5 {
            let q = check_rudin(&one, k).unwrap();
            assert!(q.holds);
            assert_eq!(q.lhs, 1.into());
        }
        let l = DissociatedSet::certify(ints(&[1, 2, 4]), Caps::default()).unwrap();
        let q = check_rudin(&l, 2).unwrap();
        // Pair sums 2,3,4,5,6,8 are distinct: 3 * 1^2 + 3 * 2^2.
        assert_eq!(q.lhs, 15.into());
        assert_eq!(q.rhs, (288 * 288 * 4 * 9).into());
        assert!(q.holds);
        assert!(DissociatedSet::certify(ints(&[1, 2, 3]), Caps::default()).is_err());
    }

    #[test]
    fn small_basis_examples() {
        let v = GroupSpec::vector(2, 3).unwrap();
        let sub = GroupSet::new(v.clone(), (0..8).map(|i| v.elem_at(i))).unwrap();
        let r = small_basis_bound(&sub, 2, &RationalConstant::one()).unwrap();
        assert_eq!(r.lambda.len(), 3);
        assert!(r.bound.holds && r.spans_a);
        // 9 * 512 <= (288 * 2 * 64)^2
        assert_eq!(r.bound.lhs, (9 * 512).into());
        let r = small_basis_bound(&ints(&[0]), 2, &RationalConstant::one()).unwrap();
        assert!(r.lambda.is_empty() && r.bound.holds && r.spans_a);
        let d = ints(&[1, 3, 9, 27, 81]);
        let r = small_basis_bound(&d, 2, &RationalConstant::new(1, 2).unwrap()).unwrap();
        assert_eq!(r.lambda.base(), &d);
        assert!(r.spans_a && r.bound.holds);
    }

    fn brute_relation_exists(l: &GroupSet) -> bool {
        let n = l.len() as u32;
        (1..3u64.pow(n)).any(|t| value(l, &decode_signs(t, l.len())).is_zero())
    }

    fn arb_small() -> impl Strategy<Value = GroupSet> {
        prop_oneof![
            (2u64..200, prop::collection::vec(0i64..200, 0..9))
                .prop_map(|(n, xs)| GroupSet::from_i64s(GroupSpec::cyclic(n).unwrap(), &xs).unwrap()),
            prop::collection::vec(-300i64..300, 0..9).prop_map(|xs| ints(&xs)),
            prop::collection::vec(0u64..243, 0..7).prop_map(|xs| {
                let v = GroupSpec::vector(3, 5).unwrap();
                GroupSet::new(v.clone(), xs.into_iter().map(|i| v.elem_at(i))).unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn mitm_agrees_with_exhaustive(l in arb_small()) {
            let truth = !brute_relation_exists(&l);
            let ex = is_dissociated(&l).unwrap();
            let mitm = is_dissociated_mitm(&l, Caps::default()).unwrap();
            prop_assert_eq!(ex.dissociated, truth);
            prop_assert_eq!(mitm.dissociated, truth);
            for w in [ex.witness, mitm.witness].into_iter().flatten() {
                prop_assert!(w.iter().any(|s| *s != 0));
                prop_assert!(value(&l, &w).is_zero());
            }
        }

        #[test]
        fn span_contains_agrees_with_enumeration(l in arb_small(), probes in prop::collection::vec(0u64..243, 8)) {
            let span = span_enumerate(&l).unwrap().elements.unwrap();
            let spec = l.spec().clone();
            prop_assert!(span.contains(&spec.zero()));
            prop_assert!(l.is_subset_of(&span));
            prop_assert_eq!(&span.negate(), &span);
            let oracle = SpanOracle::new(&l, Caps::default()).unwrap();
            let candidates = probes.iter().map(|p| match &spec {
                GroupSpec::Vector { .. } => spec.elem_at(*p),
                _ => spec.elem_from_i64(*p as i64 - 100),
            });
            for x in span.iter().cloned().chain(candidates) {
                let w = oracle.express(&x).unwrap();
                prop_assert_eq!(w.is_some(), span.contains(&x));
                if let Some(w) = w {
                    prop_assert_eq!(value(&l, &w), x);
                }
            }
        }

        #[test]
        fn greedy_is_maximal(a in arb_small(), seed in proptest::option::of(0u64..1000)) {
            let m = maximal_dissociated_subset(&a, seed).unwrap();
            let lam = m.lambda.base();
            prop_assert!(lam.is_subset_of(&a));
            prop_assert!(!brute_relation_exists(lam));
            let span = span_enumerate(lam).unwrap().elements.unwrap();
            prop_assert!(a.is_subset_of(&span));
            let again = maximal_dissociated_subset(&a, seed).unwrap();
            prop_assert_eq!(again.lambda, m.lambda);
        }

        #[test]
        fn rudin_holds_on_dissociated_sets(a in arb_small(), k in 2u32..5) {
            let m = maximal_dissociated_subset(&a, None).unwrap();
            prop_assert!(check_rudin(&m.lambda, k).unwrap().holds);
        }
    }
}
