//! Finitely supported non-negative integer functions on a group.
//!
//! This is the reference path for convolutions: sparse ordered maps with
//! exact values. Faster kernels elsewhere in the crate are checked against it.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{Elem, GroupSet, GroupSpec};
use crate::scalar::Count;

/// `f : G -> N` with finite support; zero values are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountFn<V> {
    spec: GroupSpec,
    values: BTreeMap<Elem, V>,
}

impl<V: Count> CountFn<V> {
    pub fn zero(spec: GroupSpec) -> Self {
        Self { spec, values: BTreeMap::new() }
    }

    /// Characteristic function of `set`.
    pub fn indicator(set: &GroupSet) -> Self {
        let values = set.iter().map(|e| (e.clone(), V::one())).collect();
        Self { spec: set.spec().clone(), values }
    }

    /// `delta_x`.
    pub fn delta(spec: GroupSpec, x: Elem) -> Result<Self> {
        spec.check(&x)?;
        let mut values = BTreeMap::new();
        values.insert(x, V::one());
        Ok(Self { spec, values })
    }

    /// Builds from `(element, value)` pairs; repeated elements accumulate.
    pub fn from_pairs(spec: GroupSpec, pairs: impl IntoIterator<Item = (Elem, V)>) -> Result<Self> {
        let mut f = Self::zero(spec);
        for (e, v) in pairs {
            f.spec.check(&e)?;
            f.add_at(e, &v);
        }
        Ok(f)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn add_at(&mut self, e: Elem, v: &V) {
        if v.is_zero() {
            return;
        }
        *self.values.entry(e).or_insert_with(V::zero) += v;
    }

    pub fn get(&self, e: &Elem) -> V {
        self.values.get(e).cloned().unwrap_or_else(V::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Elem, &V)> {
        self.values.iter()
    }

    /// Number of support points.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> GroupSet {
        GroupSet::from_sorted_unchecked(self.spec.clone(), self.values.keys().cloned().collect())
    }

    /// `sum_x f(x)`.
    pub fn mass(&self) -> V {
        let mut s = V::zero();
        for v in self.values.values() {
            s += v;
        }
        s
    }

    /// `sum_x f(x)^2`.
    pub fn sum_of_squares(&self) -> V {
        let mut s = V::zero();
        for v in self.values.values() {
            s += &(v.clone() * v.clone());
        }
        s
    }

    /// `sum_x f(x) g(x)`.
    pub fn dot(&self, other: &Self) -> Result<V> {
        self.same_group(other)?;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut s = V::zero();
        for (e, v) in &small.values {
            if let Some(w) = large.values.get(e) {
                s += &(v.clone() * w.clone());
            }
        }
        Ok(s)
    }

    /// `x -> f(-x)`.
    pub fn reflect(&self) -> Self {
        let values = self.values.iter().map(|(e, v)| (self.spec.neg(e), v.clone())).collect();
        Self { spec: self.spec.clone(), values }
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::Usage(format!("group mismatch: {} vs {}", self.spec, other.spec)));
        }
        Ok(())
    }

    /// `(f * g)(x) = sum_s f(s) g(x - s)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = Self::zero(self.spec.clone());
        for (s, fv) in &self.values {
            for (t, gv) in &other.values {
                out.add_at(self.spec.add(s, t), &(fv.clone() * gv.clone()));
            }
        }
        Ok(out)
    }

    /// `(f o g)(x) = sum_s f(s) g(s - x)`.
    pub fn correlate(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = Self::zero(self.spec.clone());
        for (s, fv) in &self.values {
            for (t, gv) in &other.values {
                out.add_at(self.spec.sub(s, t), &(fv.clone() * gv.clone()));
            }
        }
        Ok(out)
    }

    /// `f * f * ... * f` with `n >= 1` factors.
    pub fn self_convolve(&self, n: u32) -> Self {
        assert!(n >= 1, "need at least one factor");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.convolve(self).expect("same group");
        }
        acc
    }

    /// `T_k(f) = sum_x (f *_{k-1} f)(x)^2`.
    pub fn energy(&self, k: u32) -> V {
        self.self_convolve(k).sum_of_squares()
    }

    pub fn map_values<W: Count>(&self) -> Option<CountFn<W>> {
        let values = self
            .values
            .iter()
            .map(|(e, v)| Some((e.clone(), W::from_biguint(&v.to_biguint())?)))
            .collect::<Option<_>>()?;
        Some(CountFn { spec: self.spec.clone(), values })
    }

    /// `{"group": ..., "values": [[elem, count], ...]}` in canonical order.
    /// Counts beyond `u64` are written as decimal strings.
    pub fn to_json(&self) -> Value {
        let values: Vec<Value> = self
            .values
            .iter()
            .map(|(e, v)| {
                let b = v.to_biguint();
                let c = match u64::try_from(&b) {
                    Ok(x) => json!(x),
                    Err(_) => json!(b.to_string()),
                };
                json!([e.to_json(), c])
            })
            .collect();
        json!({ "group": self.spec.to_json(), "values": values })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let spec: GroupSpec = serde_json::from_value(
            v.get("group").cloned().ok_or_else(|| Error::Parse("missing \"group\"".into()))?,
        )
        .map_err(|e| Error::Parse(format!("bad group: {e}")))?;
        let arr = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"values\" array".into()))?;
        let mut f = Self::zero(spec.clone());
        for item in arr {
            let pair = item
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse(format!("bad value entry {item}")))?;
            let e = spec.elem_from_json(&pair[0])?;
            let count: BigUint = match &pair[1] {
                Value::Number(n) => n.as_u64().map(BigUint::from),
                Value::String(s) => s.parse().ok(),
                _ => None,
            }
            .ok_or_else(|| Error::Parse(format!("bad count in {item}")))?;
            if f.values.contains_key(&e) {
                return Err(Error::Parse(format!("duplicate element {e}")));
            }
            let count = V::from_biguint(&count)
                .ok_or_else(|| Error::Parse(format!("count {count} does not fit")))?;
            f.add_at(e, &count);
        }
        Ok(f)
    }
}

/// `(f * g)`.
pub fn convolve<V: Count>(f: &CountFn<V>, g: &CountFn<V>) -> Result<CountFn<V>> {
    f.convolve(g)
}

/// `(f o g)`.
pub fn correlate<V: Count>(f: &CountFn<V>, g: &CountFn<V>) -> Result<CountFn<V>> {
    f.correlate(g)
}

/// `A *_j A`: the representation function of `(j+1)`-fold sums of `A`.
///
/// `j = 0` yields the characteristic function of `A` itself.
pub fn iterated_self_conv<V: Count>(a: &GroupSet, j: u32) -> CountFn<V> {
    CountFn::<V>::indicator(a).self_convolve(j + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntFn;
    use proptest::prelude::*;

    fn z() -> GroupSpec {
        GroupSpec::integers()
    }

    fn table(f: &IntFn) -> Vec<(Elem, u64)> {
        f.iter().map(|(e, v)| (e.clone(), u64::try_from(v).unwrap())).collect()
    }

    #[test]
    fn convolve_examples() {
        let a = GroupSet::from_i64s(z(), &[0, 1]).unwrap();
        let f = IntFn::indicator(&a);
        let c = convolve(&f, &f).unwrap();
        assert_eq!(table(&c), vec![(Elem::int(0), 1), (Elem::int(1), 2), (Elem::int(2), 1)]);

        let g = IntFn::from_pairs(z(), [(Elem::int(3), 5u32.into()), (Elem::int(-1), 2u32.into())])
            .unwrap();
        let d = IntFn::delta(z(), Elem::int(0)).unwrap();
        assert_eq!(convolve(&d, &g).unwrap(), g);

        // Subspace {(0,0),(1,0)} of (Z/2)^2: each point is hit by 2 of the 4 pairs.
        let v = GroupSpec::vector(2, 2).unwrap();
        let p = GroupSet::new(v.clone(), [Elem::vector(&[0, 0]), Elem::vector(&[1, 0])]).unwrap();
        let pp = IntFn::indicator(&p);
        let c = convolve(&pp, &pp).unwrap();
        assert_eq!(table(&c), vec![(Elem::vector(&[0, 0]), 2), (Elem::vector(&[1, 0]), 2)]);
    }

    #[test]
    fn correlate_examples() {
        let a = GroupSet::from_i64s(z(), &[0, 1]).unwrap();
        let f = IntFn::indicator(&a);
        let c = correlate(&f, &f).unwrap();
        assert_eq!(table(&c), vec![(Elem::int(-1), 1), (Elem::int(0), 2), (Elem::int(1), 1)]);

        let c5 = GroupSpec::cyclic(5).unwrap();
        let f = IntFn::indicator(&GroupSet::from_i64s(c5.clone(), &[0, 3]).unwrap());
        let g = IntFn::indicator(&GroupSet::from_i64s(c5, &[1]).unwrap());
        // s=0: 0-1 = 4; s=3: 3-1 = 2.
        assert_eq!(table(&correlate(&f, &g).unwrap()), vec![(Elem::Residue(2), 1), (Elem::Residue(4), 1)]);
    }

    #[test]
    fn iterated_examples() {
        let a = GroupSet::from_i64s(z(), &[0, 1]).unwrap();
        assert_eq!(iterated_self_conv::<BigUint>(&a, 0), IntFn::indicator(&a));
        let r1 = iterated_self_conv::<u64>(&a, 1);
        assert_eq!(r1.iter().map(|(_, v)| *v).collect::<Vec<_>>(), vec![1, 2, 1]);
        let r2 = iterated_self_conv::<u64>(&a, 2);
        assert_eq!(r2.iter().map(|(_, v)| *v).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn mismatched_groups_rejected() {
        let f = IntFn::indicator(&GroupSet::from_i64s(z(), &[0]).unwrap());
        let g = IntFn::indicator(&GroupSet::from_i64s(GroupSpec::cyclic(3).unwrap(), &[0]).unwrap());
        assert!(matches!(convolve(&f, &g), Err(Error::Usage(_))));
        assert!(matches!(correlate(&f, &g), Err(Error::Usage(_))));
    }

    #[test]
    fn json_dump_round_trips_and_is_sorted() {
        let a = GroupSet::from_i64s(z(), &[5, -3, 0]).unwrap();
        let f = iterated_self_conv::<BigUint>(&a, 2);
        let v = f.to_json();
        let keys: Vec<i64> =
            v["values"].as_array().unwrap().iter().map(|p| p[0].as_i64().unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(IntFn::from_json(&v).unwrap(), f);
    }

    fn arb_pair() -> impl Strategy<Value = (GroupSet, GroupSet)> {
        (2u64..30, prop::collection::vec(0i64..30, 1..7), prop::collection::vec(0i64..30, 1..7))
            .prop_map(|(n, a, b)| {
                let s = GroupSpec::cyclic(n).unwrap();
                (GroupSet::from_i64s(s.clone(), &a).unwrap(), GroupSet::from_i64s(s, &b).unwrap())
            })
    }

    proptest! {
        #[test]
        fn convolution_identities((a, b) in arb_pair()) {
            let fa = IntFn::indicator(&a);
            let fb = IntFn::indicator(&b);
            let ab = convolve(&fa, &fb).unwrap();
            prop_assert_eq!(&ab, &convolve(&fb, &fa).unwrap());
            prop_assert_eq!(ab.mass(), BigUint::from(a.len() * b.len()));
            prop_assert_eq!(ab.support(), a.sumset(&b).unwrap());
            let c = correlate(&fa, &fb).unwrap();
            prop_assert_eq!(c.reflect(), correlate(&fb, &fa).unwrap());
            let aa = correlate(&fa, &fa).unwrap();
            prop_assert_eq!(aa.support(), a.difference_set(&a).unwrap());
            prop_assert_eq!(aa.get(&a.spec().zero()), BigUint::from(a.len()));
        }
    }
}
