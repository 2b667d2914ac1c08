//! Abelian groups, canonical elements and finite sets of elements.
//!
//! Three families are supported: cyclic groups `Z/N`, vector groups
//! `(Z/q)^n` with `q` prime, and the integers (arbitrary precision). Every
//! element is stored reduced, so structural equality is group equality and
//! the derived `Ord` is the canonical iteration order.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", try_from = "RawSpec")]
pub enum GroupSpec {
    Cyclic { n: u64 },
    Vector { q: u64, dim: usize },
    Integers,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawSpec {
    Cyclic { n: u64 },
    Vector { q: u64, dim: usize },
    Integers,
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        match raw {
            RawSpec::Cyclic { n } => GroupSpec::cyclic(n),
            RawSpec::Vector { q, dim } => GroupSpec::vector(q, dim),
            RawSpec::Integers => Ok(GroupSpec::Integers),
        }
    }
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GroupSpec {
    pub fn cyclic(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Usage(format!("cyclic modulus must be >= 2, got {n}")));
        }
        Ok(GroupSpec::Cyclic { n })
    }

    /// `(Z/q)^dim`; `q` must be a prime below `2^32`.
    pub fn vector(q: u64, dim: usize) -> Result<Self> {
        if q > u64::from(u32::MAX) || !is_prime(q) {
            return Err(Error::Usage(format!("vector modulus must be a prime < 2^32, got {q}")));
        }
        if dim == 0 {
            return Err(Error::Usage("vector dimension must be >= 1".into()));
        }
        Ok(GroupSpec::Vector { q, dim })
    }

    pub fn integers() -> Self {
        GroupSpec::Integers
    }

    pub fn zero(&self) -> Elem {
        match self {
            GroupSpec::Cyclic { .. } => Elem::Residue(0),
            GroupSpec::Vector { dim, .. } => Elem::Vector(vec![0; *dim]),
            GroupSpec::Integers => Elem::Integer(BigInt::zero()),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, GroupSpec::Integers)
    }

    /// `|G|`, `None` for the integers.
    pub fn order(&self) -> Option<BigUint> {
        match self {
            GroupSpec::Cyclic { n } => Some(BigUint::from(*n)),
            GroupSpec::Vector { q, dim } => Some(num_traits::pow(BigUint::from(*q), *dim)),
            GroupSpec::Integers => None,
        }
    }

    /// `|G|` when it fits a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|o| o.to_u64())
    }

    pub fn is_valid(&self, e: &Elem) -> bool {
        match (self, e) {
            (GroupSpec::Cyclic { n }, Elem::Residue(r)) => r < n,
            (GroupSpec::Vector { q, dim }, Elem::Vector(v)) => {
                v.len() == *dim && v.iter().all(|c| c < q)
            }
            (GroupSpec::Integers, Elem::Integer(_)) => true,
            _ => false,
        }
    }

    pub fn check(&self, e: &Elem) -> Result<()> {
        if self.is_valid(e) {
            Ok(())
        } else {
            Err(Error::Usage(format!("element {e} is not valid for {self}")))
        }
    }

    /// Sum of two elements already known to be valid.
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (GroupSpec::Cyclic { n }, Elem::Residue(x), Elem::Residue(y)) => {
                Elem::Residue(((u128::from(*x) + u128::from(*y)) % u128::from(*n)) as u64)
            }
            (GroupSpec::Vector { q, .. }, Elem::Vector(x), Elem::Vector(y)) => {
                Elem::Vector(x.iter().zip(y).map(|(s, t)| (s + t) % q).collect())
            }
            (GroupSpec::Integers, Elem::Integer(x), Elem::Integer(y)) => Elem::Integer(x + y),
            _ => panic!("element kinds do not match {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self, a) {
            (GroupSpec::Cyclic { n }, Elem::Residue(x)) => Elem::Residue((n - x) % n),
            (GroupSpec::Vector { q, .. }, Elem::Vector(x)) => {
                Elem::Vector(x.iter().map(|c| (q - c) % q).collect())
            }
            (GroupSpec::Integers, Elem::Integer(x)) => Elem::Integer(-x),
            _ => panic!("element kind does not match {self}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    /// `c * a` for an integer multiplier `c`.
    pub fn scale(&self, a: &Elem, c: i64) -> Elem {
        match (self, a) {
            (GroupSpec::Cyclic { n }, Elem::Residue(x)) => {
                let n = i128::from(*n);
                let r = (i128::from(*x) * i128::from(c)).rem_euclid(n);
                Elem::Residue(r as u64)
            }
            (GroupSpec::Vector { q, .. }, Elem::Vector(x)) => {
                let q = i128::from(*q);
                Elem::Vector(
                    x.iter()
                        .map(|v| (i128::from(*v) * i128::from(c)).rem_euclid(q) as u64)
                        .collect(),
                )
            }
            (GroupSpec::Integers, Elem::Integer(x)) => Elem::Integer(x * c),
            _ => panic!("element kind does not match {self}"),
        }
    }

    /// Element from a plain integer: reduced for cyclic groups, the integer
    /// itself for `Z`, and the first basis multiple for vector groups.
    pub fn elem_from_i64(&self, v: i64) -> Elem {
        match self {
            GroupSpec::Cyclic { n } => Elem::Residue(i128::from(v).rem_euclid(i128::from(*n)) as u64),
            GroupSpec::Vector { q, dim } => {
                let mut c = vec![0; *dim];
                c[0] = i128::from(v).rem_euclid(i128::from(*q)) as u64;
                Elem::Vector(c)
            }
            GroupSpec::Integers => Elem::Integer(BigInt::from(v)),
        }
    }

    /// The element with canonical index `idx` of a finite group; the
    /// indexing is order-preserving (first coordinate most significant).
    pub fn elem_at(&self, idx: u64) -> Elem {
        match self {
            GroupSpec::Cyclic { n } => {
                assert!(idx < *n);
                Elem::Residue(idx)
            }
            GroupSpec::Vector { q, dim } => {
                let mut c = vec![0; *dim];
                let mut rest = idx;
                for slot in c.iter_mut().rev() {
                    *slot = rest % q;
                    rest /= q;
                }
                assert!(rest == 0, "index out of range");
                Elem::Vector(c)
            }
            GroupSpec::Integers => panic!("elem_at on an infinite group"),
        }
    }

    /// Inverse of [`GroupSpec::elem_at`]; `None` if the index overflows `u64`.
    pub fn index_of(&self, e: &Elem) -> Option<u64> {
        match (self, e) {
            (GroupSpec::Cyclic { .. }, Elem::Residue(r)) => Some(*r),
            (GroupSpec::Vector { q, .. }, Elem::Vector(c)) => {
                c.iter().try_fold(0u64, |acc, d| acc.checked_mul(*q)?.checked_add(*d))
            }
            _ => None,
        }
    }

    /// All elements of a finite group in canonical order.
    pub fn all_elements(&self) -> Result<Vec<Elem>> {
        const CAP: u64 = 1 << 24;
        let n = self
            .order_u64()
            .ok_or_else(|| Error::UnsupportedSpec(format!("{self} has no finite enumeration")))?;
        if n > CAP {
            return Err(Error::capacity("group order", n as usize, CAP as usize));
        }
        Ok((0..n).map(|i| self.elem_at(i)).collect())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("spec serializes")
    }

    /// Parses one element of this group from JSON; rejects out-of-range residues.
    pub fn elem_from_json(&self, v: &Value) -> Result<Elem> {
        let bad = || Error::Parse(format!("invalid element {v} for {self}"));
        let e = match self {
            GroupSpec::Cyclic { .. } => Elem::Residue(v.as_u64().ok_or_else(bad)?),
            GroupSpec::Vector { .. } => {
                let arr = v.as_array().ok_or_else(bad)?;
                Elem::Vector(arr.iter().map(|c| c.as_u64().ok_or_else(bad)).collect::<Result<_>>()?)
            }
            GroupSpec::Integers => match v {
                Value::Number(n) => {
                    if let Some(i) = n.as_i64() {
                        Elem::Integer(BigInt::from(i))
                    } else if let Some(u) = n.as_u64() {
                        Elem::Integer(BigInt::from(u))
                    } else {
                        return Err(bad());
                    }
                }
                Value::String(s) => Elem::Integer(s.trim().parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            },
        };
        if !self.is_valid(&e) {
            return Err(Error::Parse(format!("element {v} out of range for {self}")));
        }
        Ok(e)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { n } => write!(f, "Z/{n}"),
            GroupSpec::Vector { q, dim } => write!(f, "(Z/{q})^{dim}"),
            GroupSpec::Integers => write!(f, "Z"),
        }
    }
}

/// A group element in canonical (reduced) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Residue(u64),
    Vector(Vec<u64>),
    Integer(BigInt),
}

impl Elem {
    pub fn int(v: i64) -> Self {
        Elem::Integer(BigInt::from(v))
    }

    pub fn vector(c: &[u64]) -> Self {
        Elem::Vector(c.to_vec())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Residue(r) => *r == 0,
            Elem::Vector(c) => c.iter().all(|x| *x == 0),
            Elem::Integer(i) => i.is_zero(),
        }
    }

    /// JSON form: a number (string if it exceeds `i64`) or an array.
    pub fn to_json(&self) -> Value {
        match self {
            Elem::Residue(r) => json!(r),
            Elem::Vector(c) => json!(c),
            Elem::Integer(i) => match i.to_i64() {
                Some(v) => json!(v),
                None => json!(i.to_string()),
            },
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Residue(r) => write!(f, "{r}"),
            Elem::Vector(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Elem::Integer(i) => write!(f, "{i}"),
        }
    }
}

/// `a + b`, validating both operands.
pub fn elem_add(spec: &GroupSpec, a: &Elem, b: &Elem) -> Result<Elem> {
    spec.check(a)?;
    spec.check(b)?;
    Ok(spec.add(a, b))
}

pub fn elem_neg(spec: &GroupSpec, a: &Elem) -> Result<Elem> {
    spec.check(a)?;
    Ok(spec.neg(a))
}

/// A finite set of distinct elements of one group, kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSet {
    spec: GroupSpec,
    elems: Vec<Elem>,
}

impl GroupSet {
    /// Builds a set, validating every element; duplicates are merged.
    pub fn new(spec: GroupSpec, elems: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut v: Vec<Elem> = elems.into_iter().collect();
        for e in &v {
            spec.check(e)?;
        }
        v.sort_unstable();
        v.dedup();
        Ok(Self { spec, elems: v })
    }

    /// Like [`GroupSet::new`] but duplicates are an error.
    pub fn from_distinct(spec: GroupSpec, elems: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let v: Vec<Elem> = elems.into_iter().collect();
        let n = v.len();
        let s = Self::new(spec, v)?;
        if s.len() != n {
            return Err(Error::Parse("duplicate elements".into()));
        }
        Ok(s)
    }

    pub fn empty(spec: GroupSpec) -> Self {
        Self { spec, elems: Vec::new() }
    }

    /// Integers (reduced for cyclic groups).
    pub fn from_i64s(spec: GroupSpec, xs: &[i64]) -> Result<Self> {
        let elems: Vec<Elem> = xs.iter().map(|x| spec.elem_from_i64(*x)).collect();
        Self::new(spec, elems)
    }

    pub(crate) fn from_sorted_unchecked(spec: GroupSpec, elems: Vec<Elem>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Self { spec, elems }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Elem> {
        self.elems.iter()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.elems.binary_search(e).is_ok()
    }

    pub fn position(&self, e: &Elem) -> Option<usize> {
        self.elems.binary_search(e).ok()
    }

    pub(crate) fn same_group(&self, other: &GroupSet) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::Usage(format!(
                "group mismatch: {} vs {}",
                self.spec, other.spec
            )));
        }
        Ok(())
    }

    /// Subset selected by positions in canonical order.
    pub fn subset(&self, idx: &[usize]) -> GroupSet {
        let mut v: Vec<Elem> = idx.iter().map(|&i| self.elems[i].clone()).collect();
        v.sort_unstable();
        v.dedup();
        Self { spec: self.spec.clone(), elems: v }
    }

    pub fn is_subset_of(&self, other: &GroupSet) -> bool {
        self.spec == other.spec && self.elems.iter().all(|e| other.contains(e))
    }

    /// `self \ other`.
    pub fn minus(&self, other: &GroupSet) -> GroupSet {
        let v = self.elems.iter().filter(|e| !other.contains(e)).cloned().collect();
        Self { spec: self.spec.clone(), elems: v }
    }

    pub fn union(&self, other: &GroupSet) -> Result<GroupSet> {
        self.same_group(other)?;
        Self::new(self.spec.clone(), self.elems.iter().chain(&other.elems).cloned())
    }

    pub fn translate(&self, t: &Elem) -> Result<GroupSet> {
        self.spec.check(t)?;
        Self::new(self.spec.clone(), self.elems.iter().map(|e| self.spec.add(e, t)))
    }

    /// `{c * a}`; may merge elements when `c` is not invertible.
    pub fn dilate(&self, c: i64) -> GroupSet {
        Self::new(self.spec.clone(), self.elems.iter().map(|e| self.spec.scale(e, c)))
            .expect("scaling keeps elements valid")
    }

    pub fn negate(&self) -> GroupSet {
        Self::new(self.spec.clone(), self.elems.iter().map(|e| self.spec.neg(e)))
            .expect("negation keeps elements valid")
    }

    /// `A + B`.
    pub fn sumset(&self, other: &GroupSet) -> Result<GroupSet> {
        self.same_group(other)?;
        let mut v = Vec::with_capacity(self.len() * other.len());
        for a in &self.elems {
            for b in &other.elems {
                v.push(self.spec.add(a, b));
            }
        }
        v.sort_unstable();
        v.dedup();
        Ok(Self::from_sorted_unchecked(self.spec.clone(), v))
    }

    /// `A - B`.
    pub fn difference_set(&self, other: &GroupSet) -> Result<GroupSet> {
        self.sumset(&other.negate())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.spec.to_json(),
            "elements": self.elems.iter().map(Elem::to_json).collect::<Vec<_>>(),
        })
    }

    /// Parses the set-file format; rejects duplicates and out-of-range residues.
    pub fn from_json(v: &Value) -> Result<Self> {
        let spec: GroupSpec = serde_json::from_value(
            v.get("group").cloned().ok_or_else(|| Error::Parse("missing \"group\"".into()))?,
        )
        .map_err(|e| Error::Parse(format!("bad group: {e}")))?;
        let arr = v
            .get("elements")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"elements\" array".into()))?;
        let elems = arr.iter().map(|x| spec.elem_from_json(x)).collect::<Result<Vec<_>>>()?;
        Self::from_distinct(spec, elems)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    /// Canonical serialization used for digests and golden files.
    pub fn to_canonical_string(&self) -> String {
        self.to_json().to_string()
    }
}

impl fmt::Display for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}} in {}", self.spec)
    }
}

impl Serialize for GroupSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        GroupSet::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// `A + B` for two sets of the same group.
pub fn sumset(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.sumset(b)
}
