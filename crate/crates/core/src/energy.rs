//! Additive energies `T_k`, the energy exponent `zeta_k`, and the exact
//! inequality checkers built on them.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::iterated_self_conv;
use crate::group::GroupSet;
use crate::keys::{with_arith, Arith, Keyed};
use crate::scalar::{self, big, energy_bits, fits, log2_bounds, perfect_power, pow, Count, RationalConstant};
use crate::verdict::{Inequality, Power, Relation};
use crate::IntFn;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Energy {
    #[serde(with = "crate::verdict::biguint_string")]
    pub value: BigUint,
    pub k: u32,
}

fn check_order(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain(format!("energy order must be >= 2, got {k}")));
    }
    Ok(())
}

/// `T_k(A)` on the reference path with scalar `V`. The caller guarantees
/// `V` is wide enough (see [`energy_bits`]).
pub fn energy_in<V: Count>(a: &GroupSet, k: u32) -> V {
    iterated_self_conv::<V>(a, k - 1).sum_of_squares()
}

/// `T_k(A) = sum_x (A *_{k-1} A)(x)^2`, exact.
pub fn energy(a: &GroupSet, k: u32) -> Result<Energy> {
    check_order(k)?;
    if a.is_empty() {
        return Err(Error::Domain("energy of the empty set".into()));
    }
    let value = if fits::<u128>(energy_bits(a.len(), k)) {
        BigUint::from(energy_in::<u128>(a, k))
    } else {
        energy_in::<BigUint>(a, k)
    };
    Ok(Energy { value, k })
}

/// `T_k(f)` for an arbitrary non-negative function.
pub fn function_energy(f: &IntFn, k: u32) -> Result<BigUint> {
    check_order(k)?;
    Ok(f.energy(k))
}

/// `zeta_k(A) = log T_k(A) / log |A|`, carried as the exact pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaValue {
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy: BigUint,
    pub size: usize,
    pub k: u32,
    /// Presentation only; comparisons use [`ZetaValue::compare`].
    pub approx: f64,
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl ZetaValue {
    pub fn new(energy: BigUint, size: usize, k: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::Domain(format!("zeta needs |A| >= 2, got {size}")));
        }
        let approx = ln_big(&energy) / (size as f64).ln();
        Ok(Self { energy, size, k, approx })
    }

    /// `zeta` as an exact rational when it is one (`T` and `|A|` are powers
    /// of a common base).
    pub fn as_rational(&self) -> Option<BigRational> {
        let (g, e) = perfect_power(&big(self.size));
        let f = exact_log(&self.energy, &g)?;
        Some(BigRational::new(f.into(), e.into()))
    }

    /// Exact comparison of two exponents.
    ///
    /// Decided by integer cross-powering when the sizes are powers of a
    /// common base, by exact rationals when both exponents are rational,
    /// and otherwise by outward-rounded log brackets refined until they
    /// separate. `None` only if the brackets never separate.
    pub fn compare(&self, other: &ZetaValue) -> Option<Ordering> {
        let (g1, e1) = perfect_power(&big(self.size));
        let (g2, e2) = perfect_power(&big(other.size));
        if g1 == g2 {
            // zeta_i = log T_i / (e_i log g)
            let l = pow(&self.energy, e2);
            let r = pow(&other.energy, e1);
            return Some(l.cmp(&r));
        }
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Some(a.cmp(&b));
        }
        let mut precision = scalar::LOG_PRECISION;
        while precision <= 1 << 14 {
            let (a_lo, a_hi) = self.bracket(precision);
            let (b_lo, b_hi) = other.bracket(precision);
            if a_hi < b_lo {
                return Some(Ordering::Less);
            }
            if a_lo > b_hi {
                return Some(Ordering::Greater);
            }
            precision *= 4;
        }
        None
    }

    fn bracket(&self, precision: u32) -> (BigRational, BigRational) {
        let (t_lo, t_hi) = log2_bounds(&self.energy, precision);
        let (m_lo, m_hi) = log2_bounds(&big(self.size), precision);
        (t_lo / m_hi, t_hi / m_lo)
    }
}

/// `f` with `base^f == x`, if any.
fn exact_log(x: &BigUint, base: &BigUint) -> Option<u32> {
    if base <= &BigUint::one() {
        return None;
    }
    let mut acc = BigUint::one();
    let mut f = 0u32;
    while &acc < x {
        acc *= base;
        f += 1;
    }
    (&acc == x).then_some(f)
}

pub fn zeta(a: &GroupSet, k: u32) -> Result<ZetaValue> {
    if a.len() < 2 {
        return Err(Error::Domain(format!("zeta needs |A| >= 2, got {}", a.len())));
    }
    let t = energy(a, k)?.value;
    ZetaValue::new(t, a.len(), k)
}

/// `|A|^k <= T_k(A) <= |A|^(2k-1)` as two inequalities.
pub fn energy_range_checks(a: &GroupSet, k: u32, t: &BigUint) -> [Inequality; 2] {
    let m = big(a.len());
    [
        Inequality::from_terms(
            "|A|^k <= T_k(A)",
            vec![Power::new(m.clone(), k)],
            Relation::Le,
            vec![Power::new(t.clone(), 1)],
        ),
        Inequality::from_terms(
            "T_k(A) <= |A|^(2k-1)",
            vec![Power::new(t.clone(), 1)],
            Relation::Le,
            vec![Power::new(m, 2 * k - 1)],
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolderVerdict {
    /// `sum_x (f_1 * ... * f_k1)(x) (g_1 * ... * g_k2)(x)`.
    #[serde(with = "crate::verdict::biguint_string")]
    pub sigma: BigUint,
    #[serde(with = "crate::verdict::decimal_uint_vec")]
    pub f_energies: Vec<BigUint>,
    #[serde(with = "crate::verdict::decimal_uint_vec")]
    pub g_energies: Vec<BigUint>,
    /// `sigma^(4 k1 k2) <= prod T_k1(f_i)^(2 k2) * prod T_k2(g_j)^(2 k1)`.
    pub inequality: Inequality,
    pub equality: bool,
}

impl HolderVerdict {
    pub fn holds(&self) -> bool {
        self.inequality.holds
    }
}

fn is_power_of_two_order(k: usize) -> bool {
    k >= 2 && k.is_power_of_two()
}

/// Checks the convolution Hoelder inequality by integer cross-powering.
pub fn check_holder(fs: &[IntFn], gs: &[IntFn], k1: usize, k2: usize) -> Result<HolderVerdict> {
    if !is_power_of_two_order(k1) || !is_power_of_two_order(k2) {
        return Err(Error::Domain(format!("k1={k1}, k2={k2}: both must be powers of two >= 2")));
    }
    if fs.len() != k1 || gs.len() != k2 {
        return Err(Error::Usage(format!(
            "expected {k1} f's and {k2} g's, got {} and {}",
            fs.len(),
            gs.len()
        )));
    }
    let spec = fs[0].spec();
    if fs.iter().chain(gs).any(|f| f.spec() != spec) {
        return Err(Error::Usage("functions live on different groups".into()));
    }
    let chain = |xs: &[IntFn]| -> IntFn {
        xs[1..].iter().fold(xs[0].clone(), |acc, f| acc.convolve(f).expect("same group"))
    };
    let sigma = chain(fs).dot(&chain(gs))?;
    let f_energies: Vec<BigUint> = fs.iter().map(|f| f.energy(k1 as u32)).collect();
    let g_energies: Vec<BigUint> = gs.iter().map(|g| g.energy(k2 as u32)).collect();
    let (k1, k2) = (k1 as u32, k2 as u32);
    let rhs: Vec<Power> = f_energies
        .iter()
        .map(|t| Power::new(t.clone(), 2 * k2))
        .chain(g_energies.iter().map(|t| Power::new(t.clone(), 2 * k1)))
        .collect();
    let inequality = Inequality::from_terms(
        "sigma^(4 k1 k2) <= prod T_k1(f_i)^(2 k2) prod T_k2(g_j)^(2 k1)",
        vec![Power::new(sigma.clone(), 4 * k1 * k2)],
        Relation::Le,
        rhs,
    );
    let equality = inequality.lhs == inequality.rhs;
    Ok(HolderVerdict { sigma, f_energies, g_energies, inequality, equality })
}

/// `T_k(A) |A|^(k-2) >= T_2(A)^(k-1)`.
pub fn check_tk_vs_t2(a: &GroupSet, k: u32) -> Result<Inequality> {
    let tk = energy(a, k)?.value;
    let t2 = energy(a, 2)?.value;
    Ok(Inequality::from_terms(
        "T_k(A) |A|^(k-2) >= T_2(A)^(k-1)",
        vec![Power::new(tk, 1), Power::new(big(a.len()), k - 2)],
        Relation::Ge,
        vec![Power::new(t2, k - 1)],
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub sumset_size: usize,
    #[serde(with = "crate::verdict::biguint_string")]
    pub energy: BigUint,
    /// `|A+A| / |A|`.
    pub doubling: RationalConstant,
    /// `|A|^4 <= T_2(A) |A+A|`.
    pub inequality: Inequality,
}

pub fn doubling_energy_bound(a: &GroupSet) -> Result<DoublingReport> {
    let t2 = energy(a, 2)?.value;
    let s = a.sumset(a)?.len();
    let inequality = Inequality::from_terms(
        "|A|^4 <= T_2(A) |A+A|",
        vec![Power::new(big(a.len()), 4)],
        Relation::Le,
        vec![Power::new(t2.clone(), 1), Power::new(big(s), 1)],
    );
    Ok(DoublingReport {
        sumset_size: s,
        energy: t2,
        doubling: RationalConstant::new(s as u64, a.len() as u64)?,
        inequality,
    })
}

/// Largest ambient set for which the pairwise difference table is built.
const DIFF_TABLE_MAX: usize = 2048;

#[derive(Clone, Debug)]
enum Kernel {
    /// `T_2(B) = sum_d #{(i, j) in B^2 : a_i - a_j = d}^2` over a table of
    /// difference ids.
    Differences { ids: Vec<u32> },
    Keyed(Keyed),
}

/// Energies of subsets of a fixed ambient set, addressed by position.
///
/// This is the fast path used by the connectivity searches; the test suite
/// checks it against [`energy`].
#[derive(Clone, Debug)]
pub struct SubsetEnergy {
    k: u32,
    m: usize,
    kernel: Kernel,
}

impl SubsetEnergy {
    pub fn new(ambient: &GroupSet, k: u32) -> Self {
        let m = ambient.len();
        let keyed = Keyed::new(ambient.spec(), ambient.elems());
        let kernel = if k == 2 && m <= DIFF_TABLE_MAX {
            let ids = with_arith!(&keyed, |arith, keys| difference_ids(arith, keys));
            Kernel::Differences { ids }
        } else {
            Kernel::Keyed(keyed)
        };
        Self { k, m, kernel }
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn ambient_len(&self) -> usize {
        self.m
    }

    /// `T_k` of the subset at positions `idx` (distinct, in range).
    pub fn energy<V: Count>(&self, idx: &[usize]) -> V {
        match &self.kernel {
            Kernel::Differences { ids } => {
                let mut d: Vec<u32> = Vec::with_capacity(idx.len() * idx.len());
                for &i in idx {
                    let row = &ids[i * self.m..(i + 1) * self.m];
                    d.extend(idx.iter().map(|&j| row[j]));
                }
                d.sort_unstable();
                let mut total = V::zero();
                let mut run = 0u64;
                for w in 0..d.len() {
                    run += 1;
                    if w + 1 == d.len() || d[w + 1] != d[w] {
                        let r = V::from_u64(run);
                        total += &(r.clone() * r);
                        run = 0;
                    }
                }
                total
            }
            Kernel::Keyed(keyed) => {
                with_arith!(keyed, |arith, keys| keyed_energy::<_, V>(arith, keys, idx, self.k))
            }
        }
    }

    /// `T_k` as a big integer, choosing the scalar by magnitude.
    pub fn energy_big(&self, idx: &[usize]) -> BigUint {
        if fits::<u128>(energy_bits(idx.len(), self.k)) {
            BigUint::from(self.energy::<u128>(idx))
        } else {
            self.energy::<BigUint>(idx)
        }
    }
}

fn difference_ids<A: Arith>(arith: &A, keys: &[A::K]) -> Vec<u32> {
    let m = keys.len();
    let mut table: FxHashMap<A::K, u32> = FxHashMap::default();
    let mut ids = Vec::with_capacity(m * m);
    for a in keys {
        for b in keys {
            let d = arith.add(a, &arith.neg(b));
            let next = table.len() as u32;
            ids.push(*table.entry(d).or_insert(next));
        }
    }
    ids
}

pub(crate) fn keyed_energy<A: Arith, V: Count>(arith: &A, keys: &[A::K], idx: &[usize], k: u32) -> V {
    let mut r: FxHashMap<A::K, V> = idx.iter().map(|&i| (keys[i].clone(), V::one())).collect();
    for _ in 1..k {
        let mut next: FxHashMap<A::K, V> = FxHashMap::default();
        for (x, v) in &r {
            for &i in idx {
                *next.entry(arith.add(x, &keys[i])).or_insert_with(V::zero) += v;
            }
        }
        r = next;
    }
    let mut total = V::zero();
    for v in r.values() {
        total += &(v.clone() * v.clone());
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Elem, GroupSpec};
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn z() -> GroupSpec {
        GroupSpec::integers()
    }

    /// Histogram of k-fold sums over all |A|^k tuples.
    fn brute_energy(a: &GroupSet, k: u32) -> u128 {
        let spec = a.spec();
        let mut hist: HashMap<Elem, u128> = HashMap::new();
        let m = a.len();
        let mut digits = vec![0usize; k as usize];
        loop {
            let mut s = spec.zero();
            for &d in &digits {
                s = spec.add(&s, &a.elems()[d]);
            }
            *hist.entry(s).or_default() += 1;
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return hist.values().map(|c| c * c).sum();
                }
                digits[pos] += 1;
                if digits[pos] < m {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn energy_examples() {
        for spec in [z(), GroupSpec::cyclic(9).unwrap()] {
            let a = GroupSet::new(spec.clone(), [spec.zero()]).unwrap();
            for k in 2..6 {
                assert_eq!(energy(&a, k).unwrap().value, BigUint::from(1u32));
            }
        }
        let a = GroupSet::from_i64s(z(), &[0, 1]).unwrap();
        assert_eq!(energy(&a, 2).unwrap().value, BigUint::from(6u32));
        let v = GroupSpec::vector(2, 3).unwrap();
        let p = GroupSet::new(v.clone(), (0..4).map(|i| v.elem_at(i))).unwrap();
        assert_eq!(energy(&p, 2).unwrap().value, BigUint::from(64u32));
        assert_eq!(energy(&p, 4).unwrap().value, BigUint::from(4u32).pow(7));
    }

    #[test]
    fn energy_domain_errors() {
        let a = GroupSet::from_i64s(z(), &[0, 1]).unwrap();
        assert!(matches!(energy(&a, 1), Err(Error::Domain(_))));
        assert!(matches!(energy(&GroupSet::empty(z()), 2), Err(Error::Domain(_))));
        assert!(matches!(zeta(&GroupSet::from_i64s(z(), &[3]).unwrap(), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta_examples() {
        let a = GroupSet::from_i64s(z(), &[0, 1]).unwrap();
        let zv = zeta(&a, 2).unwrap();
        assert_eq!((zv.energy.clone(), zv.size), (BigUint::from(6u32), 2));
        let v = GroupSpec::vector(2, 4).unwrap();
        let p = GroupSet::new(v.clone(), (0..8).map(|i| v.elem_at(i))).unwrap();
        for k in [2, 4] {
            let zp = zeta(&p, k).unwrap();
            assert_eq!(zp.as_rational(), Some(BigRational::from_integer((2 * k as i64 - 1).into())));
        }
    }

    #[test]
    fn zeta_compare_cases() {
        let mk = |t: u64, m: usize| ZetaValue::new(BigUint::from(t), m, 2).unwrap();
        // Same base: 8 = 2^3, 4 = 2^2; zeta(64, 8) = 2, zeta(16, 4) = 2.
        assert_eq!(mk(64, 8).compare(&mk(16, 4)), Some(Ordering::Equal));
        assert_eq!(mk(65, 8).compare(&mk(16, 4)), Some(Ordering::Greater));
        // Both rational, different bases: zeta(27, 3) = 3 vs zeta(25, 5) = 2.
        assert_eq!(mk(27, 3).compare(&mk(25, 5)), Some(Ordering::Greater));
        // Irrational, separated numerically: log 6 / log 2 vs log 20 / log 3.
        let a = mk(6, 2);
        let b = mk(20, 3);
        let truth = (6f64.ln() / 2f64.ln()).partial_cmp(&(20f64.ln() / 3f64.ln())).unwrap();
        assert_eq!(a.compare(&b), Some(truth));
        assert_eq!(b.compare(&a), Some(truth.reverse()));
    }

    #[test]
    fn tk_vs_t2_examples() {
        let a = GroupSet::from_i64s(z(), &[0, 1, 3]).unwrap();
        let q = check_tk_vs_t2(&a, 2).unwrap();
        assert!(q.holds && q.lhs == q.rhs);
        let q3 = check_tk_vs_t2(&a, 3).unwrap();
        // Frozen from the tuple histogram: T_2 = 15, T_3 = 99.
        assert_eq!(brute_energy(&a, 2), 15);
        assert_eq!(brute_energy(&a, 3), 99);
        assert_eq!(q3.lhs, (99 * 3).into());
        assert_eq!(q3.rhs, (15 * 15).into());
        assert!(q3.holds);
        let v = GroupSpec::vector(2, 3).unwrap();
        let p = GroupSet::new(v.clone(), (0..8).map(|i| v.elem_at(i))).unwrap();
        for k in 2..5 {
            let q = check_tk_vs_t2(&p, k).unwrap();
            assert_eq!(q.lhs, q.rhs);
        }
    }

    #[test]
    fn doubling_examples() {
        let ap = GroupSet::from_i64s(z(), &(0..8).collect::<Vec<_>>()).unwrap();
        let r = doubling_energy_bound(&ap).unwrap();
        assert_eq!(r.sumset_size, 15);
        assert!(r.inequality.holds);
        let single = GroupSet::from_i64s(z(), &[0]).unwrap();
        let r = doubling_energy_bound(&single).unwrap();
        assert_eq!(r.inequality.lhs, r.inequality.rhs);
        let v = GroupSpec::vector(2, 3).unwrap();
        let p = GroupSet::new(v.clone(), (0..4).map(|i| v.elem_at(i))).unwrap();
        let r = doubling_energy_bound(&p).unwrap();
        assert_eq!(r.sumset_size, 4);
        assert_eq!(r.inequality.lhs, r.inequality.rhs);
    }

    #[test]
    fn holder_examples() {
        let c7 = GroupSpec::cyclic(7).unwrap();
        let a = GroupSet::from_i64s(c7.clone(), &[0, 1, 3]).unwrap();
        let fa = IntFn::indicator(&a);
        for k in [2usize, 4] {
            let v = check_holder(&vec![fa.clone(); k], &vec![fa.clone(); k], k, k).unwrap();
            assert!(v.equality && v.holds());
            assert_eq!(v.sigma, energy(&a, k as u32).unwrap().value);
        }
        let b = GroupSet::from_i64s(c7.clone(), &[2, 5]).unwrap();
        let mut fs = vec![fa.clone(); 2];
        fs[0] = IntFn::indicator(&b);
        assert!(check_holder(&fs, &vec![fa.clone(); 2], 2, 2).unwrap().holds());
        let g = IntFn::indicator(&GroupSet::from_i64s(c7, &[1, 2, 6]).unwrap());
        let v = check_holder(&[fa.clone(), g.clone()], &[g.clone(), fa.clone(), fa.clone(), g], 2, 4).unwrap();
        assert!(v.holds());
        assert!(matches!(check_holder(&vec![fa.clone(); 3], &vec![fa.clone(); 2], 3, 2), Err(Error::Domain(_))));
        assert!(matches!(check_holder(&vec![fa.clone(); 2], &vec![fa; 3], 2, 2), Err(Error::Usage(_))));
    }

    #[test]
    fn subset_energy_handles_big_integers() {
        let huge: BigUint = BigUint::from(1u32) << 90usize;
        let spec = z();
        let elems = [Elem::Integer(huge.clone().into()), Elem::int(0), Elem::int(1)];
        let a = GroupSet::new(spec, elems).unwrap();
        for k in [2, 3] {
            let se = SubsetEnergy::new(&a, k);
            assert_eq!(se.energy_big(&[0, 1, 2]), energy(&a, k).unwrap().value);
        }
    }

    fn arb_set() -> impl Strategy<Value = GroupSet> {
        prop_oneof![
            (2u64..64, prop::collection::vec(0i64..64, 1..8))
                .prop_map(|(n, xs)| GroupSet::from_i64s(GroupSpec::cyclic(n).unwrap(), &xs).unwrap()),
            prop::collection::vec(-50i64..50, 1..8)
                .prop_map(|xs| GroupSet::from_i64s(GroupSpec::integers(), &xs).unwrap()),
            prop::collection::vec(0u64..27, 1..8).prop_map(|xs| {
                let v = GroupSpec::vector(3, 3).unwrap();
                GroupSet::new(v.clone(), xs.into_iter().map(|i| v.elem_at(i))).unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn energy_matches_histogram(a in arb_set(), k in 2u32..5) {
            let t = energy(&a, k).unwrap().value;
            prop_assert_eq!(t.clone(), BigUint::from(brute_energy(&a, k)));
            let m = big(a.len());
            prop_assert!(pow(&m, k) <= t && t <= pow(&m, 2 * k - 1));
            let all: Vec<usize> = (0..a.len()).collect();
            prop_assert_eq!(SubsetEnergy::new(&a, k).energy_big(&all), t);
        }

        #[test]
        fn translation_and_dilation_invariance(a in arb_set(), k in 2u32..4, t in 0i64..64) {
            let e = energy(&a, k).unwrap().value;
            let shift = a.spec().elem_from_i64(t);
            prop_assert_eq!(energy(&a.translate(&shift).unwrap(), k).unwrap().value, e.clone());
            let invertible = match a.spec() {
                GroupSpec::Cyclic { n } => scalar::gcd_u64(*n, 5) == 1,
                _ => true,
            };
            if invertible {
                prop_assert_eq!(energy(&a.dilate(5), k).unwrap().value, e);
            }
        }

        #[test]
        fn subset_engine_matches_reference(a in arb_set(), mask in 1u32..256, k in 2u32..5) {
            let idx: Vec<usize> = (0..a.len()).filter(|i| mask >> i & 1 == 1).collect();
            prop_assume!(!idx.is_empty());
            let b = a.subset(&idx);
            let se = SubsetEnergy::new(&a, k);
            prop_assert_eq!(se.energy_big(&idx), energy(&b, k).unwrap().value);
            prop_assert_eq!(BigUint::from(se.energy::<u64>(&idx)), energy(&b, k).unwrap().value);
        }

        #[test]
        fn holder_never_fails(
            n in 2u64..16,
            fs in prop::collection::vec(prop::collection::vec(0i64..16, 1..4), 4),
            gs in prop::collection::vec(prop::collection::vec(0i64..16, 1..4), 4),
            shape in 0usize..3,
        ) {
            let spec = GroupSpec::cyclic(n).unwrap();
            let mk = |xs: &Vec<i64>| IntFn::indicator(&GroupSet::from_i64s(spec.clone(), xs).unwrap());
            let (k1, k2) = [(2, 2), (2, 4), (4, 2)][shape];
            let f: Vec<IntFn> = fs.iter().take(k1).map(mk).collect();
            let g: Vec<IntFn> = gs.iter().take(k2).map(mk).collect();
            prop_assert!(check_holder(&f, &g, k1, k2).unwrap().holds());
        }
    }
}
