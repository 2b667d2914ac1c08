//! Compact element keys for hot loops.
//!
//! Elements whose encoding fits an `i128` are mapped to integer keys with
//! closed-form arithmetic; everything else falls back to [`Elem`] itself.
//! Algorithms are written once against [`Arith`] and run on either.

use std::fmt::Debug;
use std::hash::Hash;

use num_traits::ToPrimitive;

use crate::group::{Elem, GroupSpec};

pub(crate) trait Arith {
    type K: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::K;
    fn add(&self, a: &Self::K, b: &Self::K) -> Self::K;
    fn neg(&self, a: &Self::K) -> Self::K;
}

impl Arith for GroupSpec {
    type K = Elem;

    fn zero(&self) -> Elem {
        GroupSpec::zero(self)
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        GroupSpec::add(self, a, b)
    }

    fn neg(&self, a: &Elem) -> Elem {
        GroupSpec::neg(self, a)
    }
}

/// Integer elements up to this magnitude get keys; sums of up to `2^60`
/// of them stay inside `i128`.
const INT_KEY_LIMIT: i64 = 1 << 62;

#[derive(Clone, Debug)]
pub(crate) enum KeySpace {
    Cyclic(u64),
    /// `(Z/2)^dim`, `dim <= 126`: addition is xor.
    Binary,
    /// Mixed radix, first coordinate most significant.
    Vector { q: u64, dim: usize },
    Integers,
}

impl KeySpace {
    pub(crate) fn for_spec(spec: &GroupSpec) -> Option<KeySpace> {
        match spec {
            GroupSpec::Cyclic { n } => Some(KeySpace::Cyclic(*n)),
            GroupSpec::Vector { q: 2, dim } if *dim <= 126 => Some(KeySpace::Binary),
            GroupSpec::Vector { q, dim } => {
                let bits = (64 - q.leading_zeros()) as usize * dim;
                (bits <= 126).then_some(KeySpace::Vector { q: *q, dim: *dim })
            }
            GroupSpec::Integers => Some(KeySpace::Integers),
        }
    }

    pub(crate) fn encode(&self, e: &Elem) -> Option<i128> {
        match (self, e) {
            (KeySpace::Cyclic(_), Elem::Residue(r)) => Some(i128::from(*r)),
            (KeySpace::Binary, Elem::Vector(c)) => {
                Some(c.iter().fold(0i128, |acc, d| (acc << 1) | *d as i128))
            }
            (KeySpace::Vector { q, .. }, Elem::Vector(c)) => {
                Some(c.iter().fold(0i128, |acc, d| acc * i128::from(*q) + i128::from(*d)))
            }
            (KeySpace::Integers, Elem::Integer(i)) => {
                i.to_i64().filter(|v| v.abs() <= INT_KEY_LIMIT).map(i128::from)
            }
            _ => None,
        }
    }

    /// Like [`KeySpace::encode`] but accepts any integer that fits an
    /// `i128`; used for targets that are compared with, not added to, keys.
    pub(crate) fn encode_target(&self, e: &Elem) -> Option<i128> {
        match (self, e) {
            (KeySpace::Integers, Elem::Integer(i)) => i.to_i128(),
            _ => self.encode(e),
        }
    }

    #[cfg(test)]
    pub(crate) fn decode(&self, spec: &GroupSpec, k: i128) -> Elem {
        match (self, spec) {
            (KeySpace::Cyclic(_), _) => Elem::Residue(k as u64),
            (KeySpace::Binary, GroupSpec::Vector { dim, .. }) => {
                Elem::Vector((0..*dim).rev().map(|b| ((k >> b) & 1) as u64).collect())
            }
            (KeySpace::Vector { q, dim }, _) => {
                let mut c = vec![0u64; *dim];
                let mut rest = k;
                for slot in c.iter_mut().rev() {
                    *slot = (rest % i128::from(*q)) as u64;
                    rest /= i128::from(*q);
                }
                Elem::Vector(c)
            }
            (KeySpace::Integers, _) => Elem::Integer(num_bigint::BigInt::from(k)),
            _ => unreachable!("key space does not match spec"),
        }
    }

}

impl Arith for KeySpace {
    type K = i128;

    fn zero(&self) -> i128 {
        0
    }

    #[inline]
    fn add(&self, a: &i128, b: &i128) -> i128 {
        match self {
            KeySpace::Cyclic(n) => {
                let s = a + b;
                let n = i128::from(*n);
                if s >= n {
                    s - n
                } else {
                    s
                }
            }
            KeySpace::Binary => a ^ b,
            KeySpace::Vector { q, dim } => {
                let q = i128::from(*q);
                let (mut x, mut y) = (*a, *b);
                let mut out = 0i128;
                let mut place = 1i128;
                for _ in 0..*dim {
                    out += ((x % q + y % q) % q) * place;
                    x /= q;
                    y /= q;
                    place *= q;
                }
                out
            }
            KeySpace::Integers => a + b,
        }
    }

    #[inline]
    fn neg(&self, a: &i128) -> i128 {
        match self {
            KeySpace::Cyclic(n) => {
                if *a == 0 {
                    0
                } else {
                    i128::from(*n) - a
                }
            }
            KeySpace::Binary => *a,
            KeySpace::Vector { q, dim } => {
                let q = i128::from(*q);
                let mut x = *a;
                let mut out = 0i128;
                let mut place = 1i128;
                for _ in 0..*dim {
                    out += ((q - x % q) % q) * place;
                    x /= q;
                    place *= q;
                }
                out
            }
            KeySpace::Integers => -a,
        }
    }
}

/// Elements of one group in whichever key representation applies.
#[derive(Clone, Debug)]
pub(crate) enum Keyed {
    Fast { space: KeySpace, keys: Vec<i128> },
    Slow { spec: GroupSpec, keys: Vec<Elem> },
}

impl Keyed {
    pub(crate) fn new(spec: &GroupSpec, elems: &[Elem]) -> Keyed {
        if let Some(space) = KeySpace::for_spec(spec) {
            let keys: Option<Vec<i128>> = elems.iter().map(|e| space.encode(e)).collect();
            if let Some(keys) = keys {
                return Keyed::Fast { space, keys };
            }
        }
        Keyed::Slow { spec: spec.clone(), keys: elems.to_vec() }
    }
}

/// Runs `$body` with `$a: &impl Arith` and `$k: &Vec<Arith::K>` bound.
macro_rules! with_arith {
    ($keyed:expr, |$a:ident, $k:ident| $body:expr) => {
        match $keyed {
            $crate::keys::Keyed::Fast { space: $a, keys: $k } => $body,
            $crate::keys::Keyed::Slow { spec: $a, keys: $k } => $body,
        }
    };
}
pub(crate) use with_arith;
