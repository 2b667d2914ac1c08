//! Brute-force reference implementations used by the verification suites.

use std::collections::BTreeMap;

use addcomb::{Elem, GroupSet};
use num_bigint::BigUint;

/// `T_k(A)` by enumerating all `|A|^k` ordered `k`-tuples and summing the
/// squared multiplicities of their sums.
pub fn energy_by_histogram(a: &GroupSet, k: u32) -> BigUint {
    let spec = a.spec();
    let mut hist: BTreeMap<Elem, u64> = BTreeMap::new();
    let m = a.len();
    let mut idx = vec![0usize; k as usize];
    loop {
        let s = idx.iter().fold(spec.zero(), |acc, &i| spec.add(&acc, &a.elems()[i]));
        *hist.entry(s).or_insert(0) += 1;
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return hist.values().map(|&c| BigUint::from(c) * c).sum();
            }
            idx[pos] += 1;
            if idx[pos] < m {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Whether some nontrivial `{-1, 0, 1}` combination of `l` vanishes.
pub fn has_zero_signed_sum(l: &GroupSet) -> bool {
    let spec = l.spec();
    let n = l.len();
    let total = 3u64.pow(n as u32);
    (1..total).any(|mut code| {
        let mut s = spec.zero();
        for x in l.iter() {
            match code % 3 {
                1 => s = spec.add(&s, x),
                2 => s = spec.sub(&s, x),
                _ => {}
            }
            code /= 3;
        }
        s.is_zero()
    })
}

/// All `{-1, 0, 1}` combinations of `l`.
pub fn signed_span(l: &GroupSet) -> Vec<Elem> {
    let spec = l.spec();
    let mut out = vec![spec.zero()];
    for x in l.iter() {
        let mut next = Vec::with_capacity(out.len() * 3);
        for s in &out {
            next.push(s.clone());
            next.push(spec.add(s, x));
            next.push(spec.sub(s, x));
        }
        next.sort();
        next.dedup();
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use addcomb::GroupSpec;

    #[test]
    fn small_values() {
        let a = GroupSet::from_i64s(GroupSpec::integers(), &[0, 1, 3]).unwrap();
        assert_eq!(energy_by_histogram(&a, 2), BigUint::from(15u32));
        assert_eq!(energy_by_histogram(&a, 3), BigUint::from(99u32));
        assert!(!has_zero_signed_sum(&GroupSet::from_i64s(GroupSpec::integers(), &[1, 2, 4]).unwrap()));
        assert!(has_zero_signed_sum(&GroupSet::from_i64s(GroupSpec::integers(), &[1, 2, 3]).unwrap()));
        assert_eq!(signed_span(&GroupSet::from_i64s(GroupSpec::integers(), &[1, 3]).unwrap()).len(), 9);
    }
}
