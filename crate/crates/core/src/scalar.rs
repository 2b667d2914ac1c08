//! Exact scalar types.
//!
//! Every count in the crate (function values, energies, cut weights) is an
//! exact non-negative integer. Kernels are generic over [`Count`] so that the
//! same code runs on `u128` when a magnitude bound proves it cannot overflow
//! and on [`BigUint`] otherwise. Constants such as `C`, `beta`, `epsilon` are
//! exact rationals ([`RationalConstant`]).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact non-negative integer scalar.
pub trait Count:
    Clone
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + Send
    + Sync
    + 'static
{
    /// Width in bits, `None` for arbitrary precision.
    const BITS: Option<u32>;

    fn from_u64(v: u64) -> Self;

    fn to_biguint(&self) -> BigUint;

    /// `None` when `v` does not fit.
    fn from_biguint(v: &BigUint) -> Option<Self>;
}

macro_rules! impl_count_prim {
    ($t:ty) => {
        impl Count for $t {
            const BITS: Option<u32> = Some(<$t>::BITS);

            fn from_u64(v: u64) -> Self {
                v as $t
            }

            fn to_biguint(&self) -> BigUint {
                BigUint::from(*self)
            }

            fn from_biguint(v: &BigUint) -> Option<Self> {
                <$t>::try_from(v).ok()
            }
        }
    };
}

impl_count_prim!(u64);
impl_count_prim!(u128);

impl Count for BigUint {
    const BITS: Option<u32> = None;

    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }

    fn from_biguint(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }
}

/// True when every value bounded by `2^bits` fits `V` with one bit of slack.
pub fn fits<V: Count>(bits: u64) -> bool {
    match V::BITS {
        None => true,
        Some(w) => bits < u64::from(w),
    }
}

/// Upper bound on `log2` of `T_k` for a set of `m` elements: `(2k-1) * ceil(log2(m+1))`.
pub fn energy_bits(m: usize, k: u32) -> u64 {
    let per = u64::from(usize::BITS - m.leading_zeros()).max(1);
    (2 * u64::from(k) - 1) * per
}

/// An exact non-negative rational constant (`C`, `beta`, `epsilon`, ...).
///
/// Parses from `"p/q"`, an integer, or a finite decimal such as `"0.125"`.
/// Serializes as the reduced string `"p/q"` (or `"p"` when integral).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalConstant(BigRational);

impl RationalConstant {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_ratio(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain(format!("constant {r} is negative")));
        }
        Ok(Self(r))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> BigUint {
        self.0.numer().to_biguint().expect("non-negative")
    }

    pub fn denom(&self) -> BigUint {
        self.0.denom().to_biguint().expect("positive")
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RationalConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for RationalConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a non-negative rational: {s:?}"));
        let parse_int = |t: &str| -> Result<BigInt> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        let r = if let Some((p, q)) = s.split_once('/') {
            let q = parse_int(q.trim())?;
            if q.is_zero() {
                return Err(bad());
            }
            BigRational::new(parse_int(p.trim())?, q)
        } else if let Some((i, d)) = s.split_once('.') {
            let whole = if i.is_empty() { BigInt::zero() } else { parse_int(i)? };
            let frac = parse_int(d)?;
            let scale = BigInt::from(10u32).pow(d.len() as u32);
            BigRational::new(whole * &scale + frac, scale)
        } else {
            BigRational::from_integer(parse_int(s)?)
        };
        Ok(Self(r))
    }
}

impl Serialize for RationalConstant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalConstant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Default exponent used when bracketing logarithms.
pub const LOG_PRECISION: u32 = 64;

/// Outward-rounded bracket `[lo, hi]` of `log2(x)` for an integer `x >= 1`.
///
/// Uses `bits(x^n) - 1 <= n log2 x < bits(x^n)`; exact for powers of two.
pub fn log2_bounds(x: &BigUint, precision: u32) -> (BigRational, BigRational) {
    assert!(!x.is_zero(), "log2 of zero");
    if x.count_ones() == 1 {
        let e = BigRational::from_integer(BigInt::from(x.bits() - 1));
        return (e.clone(), e);
    }
    let n = precision.max(1);
    let bits = x.pow(n).bits();
    let den = BigInt::from(n);
    (
        BigRational::new(BigInt::from(bits - 1), den.clone()),
        BigRational::new(BigInt::from(bits), den),
    )
}

/// Outward-rounded bracket of `log2(r)` for a positive rational `r`.
pub fn log2_ratio_bounds(r: &BigRational, precision: u32) -> (BigRational, BigRational) {
    assert!(r.is_positive(), "log2 of a non-positive rational");
    let num = r.numer().to_biguint().expect("positive");
    let den = r.denom().to_biguint().expect("positive");
    let (nl, nh) = log2_bounds(&num, precision);
    let (dl, dh) = log2_bounds(&den, precision);
    (nl - dh, nh - dl)
}

/// Largest integer `l` with `l <= x` for a non-negative rational.
pub fn floor_ratio(x: &BigRational) -> BigUint {
    x.floor().to_integer().to_biguint().unwrap_or_default()
}

/// Smallest integer `>= x` for a non-negative rational.
pub fn ceil_ratio(x: &BigRational) -> BigUint {
    x.ceil().to_integer().to_biguint().unwrap_or_default()
}

pub fn big(v: usize) -> BigUint {
    BigUint::from(v)
}

pub fn pow(b: &BigUint, e: u32) -> BigUint {
    num_traits::pow(b.clone(), e as usize)
}

pub fn ratio(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

/// `(a, e)` with `x = a^e` and `e` maximal.
pub fn perfect_power(x: &BigUint) -> (BigUint, u32) {
    if x <= &BigUint::one() {
        return (x.clone(), 1);
    }
    let max_e = x.bits() as u32;
    for e in (2..=max_e).rev() {
        let r = x.nth_root(e);
        if r > BigUint::one() && num_traits::pow(r.clone(), e as usize) == *x {
            return (r, e);
        }
    }
    (x.clone(), 1)
}

/// Greatest common divisor helper for `u64` moduli.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        let r: RationalConstant = "3/6".parse().unwrap();
        assert_eq!(r.to_string(), "1/2");
        let d: RationalConstant = "0.125".parse().unwrap();
        assert_eq!(d, RationalConstant::new(1, 8).unwrap());
        let i: RationalConstant = "2".parse().unwrap();
        assert_eq!(i.to_string(), "2");
        assert!("-1/2".parse::<RationalConstant>().is_err());
        assert!("1/0".parse::<RationalConstant>().is_err());
        assert!("abc".parse::<RationalConstant>().is_err());
    }

    #[test]
    fn serde_as_string() {
        let r = RationalConstant::new(1, 32).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"1/32\"");
        let back: RationalConstant = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn log_bounds_bracket_truth() {
        for x in [2u64, 3, 5, 10, 1000, 999_983, 1 << 40] {
            let (lo, hi) = log2_bounds(&BigUint::from(x), LOG_PRECISION);
            let t = (x as f64).log2();
            assert!(lo.to_f64().unwrap() <= t + 1e-12, "{x}");
            assert!(hi.to_f64().unwrap() >= t - 1e-12, "{x}");
            assert!((hi - lo).to_f64().unwrap() <= 1.0 / 64.0 + 1e-12);
        }
        let (lo, hi) = log2_bounds(&BigUint::from(1u32), 8);
        assert!(lo.is_zero() && hi.is_zero());
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(&BigUint::from(64u32)), (BigUint::from(2u32), 6));
        assert_eq!(perfect_power(&BigUint::from(36u32)), (BigUint::from(6u32), 2));
        assert_eq!(perfect_power(&BigUint::from(12u32)), (BigUint::from(12u32), 1));
    }

    #[test]
    fn energy_bits_bound() {
        // 64^15 = 2^90 needs 7 bits per factor with the +1 slack.
        assert_eq!(energy_bits(64, 8), 15 * 7);
        assert!(fits::<u128>(energy_bits(20, 8)));
        assert!(!fits::<u64>(energy_bits(64, 8)));
    }
}
