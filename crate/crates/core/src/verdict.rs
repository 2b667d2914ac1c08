//! Exact inequality records.
//!
//! Every verdict the crate emits carries both integer sides so that a
//! report can be re-checked without recomputing anything.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "==")]
    Eq,
}

impl Relation {
    pub fn eval(self, ord: Ordering) -> bool {
        match self {
            Relation::Le => ord != Ordering::Greater,
            Relation::Lt => ord == Ordering::Less,
            Relation::Ge => ord != Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
            Relation::Eq => ord == Ordering::Equal,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "==",
        };
        f.write_str(s)
    }
}

/// One factor `base^exp` of a side written as a product of powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Power {
    #[serde(with = "decimal_uint")]
    pub base: BigUint,
    pub exp: u32,
}

impl Power {
    pub fn new(base: impl Into<BigUint>, exp: u32) -> Self {
        Self { base: base.into(), exp }
    }
}

pub fn product(terms: &[Power]) -> BigUint {
    terms.iter().fold(BigUint::from(1u32), |acc, p| acc * crate::scalar::pow(&p.base, p.exp))
}

/// `lhs relation rhs` over exact integers.
///
/// `asserted` marks inequalities that a theorem guarantees for this input;
/// an asserted inequality that does not hold is a failure. Unasserted ones
/// are observations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub label: String,
    #[serde(with = "decimal_int")]
    pub lhs: BigInt,
    pub relation: Relation,
    #[serde(with = "decimal_int")]
    pub rhs: BigInt,
    pub holds: bool,
    pub asserted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_terms: Option<Vec<Power>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_terms: Option<Vec<Power>>,
}

impl Inequality {
    pub fn new(
        label: impl Into<String>,
        lhs: impl Into<BigInt>,
        relation: Relation,
        rhs: impl Into<BigInt>,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let holds = relation.eval(lhs.cmp(&rhs));
        Self {
            label: label.into(),
            lhs,
            relation,
            rhs,
            holds,
            asserted: true,
            lhs_terms: None,
            rhs_terms: None,
        }
    }

    /// Both sides given as products of powers.
    pub fn from_terms(
        label: impl Into<String>,
        lhs: Vec<Power>,
        relation: Relation,
        rhs: Vec<Power>,
    ) -> Self {
        let mut q = Self::new(label, product(&lhs), relation, product(&rhs));
        q.lhs_terms = Some(lhs);
        q.rhs_terms = Some(rhs);
        q
    }

    pub fn observed(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn asserted_if(mut self, cond: bool) -> Self {
        self.asserted = cond;
        self
    }

    /// True unless this is an asserted inequality that fails.
    pub fn ok(&self) -> bool {
        self.holds || !self.asserted
    }

    /// Recomputes `holds` (and the sides, when terms are present) from the
    /// embedded data; returns a description of the first inconsistency.
    pub fn recheck(&self) -> Result<(), String> {
        if let Some(t) = &self.lhs_terms {
            if BigInt::from(product(t)) != self.lhs {
                return Err(format!("{}: lhs does not match its terms", self.label));
            }
        }
        if let Some(t) = &self.rhs_terms {
            if BigInt::from(product(t)) != self.rhs {
                return Err(format!("{}: rhs does not match its terms", self.label));
            }
        }
        let holds = self.relation.eval(self.lhs.cmp(&self.rhs));
        if holds != self.holds {
            return Err(format!("{}: recorded verdict {} but recomputed {}", self.label, self.holds, holds));
        }
        if self.asserted && !holds {
            return Err(format!("{}: asserted inequality fails", self.label));
        }
        Ok(())
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {} {} [{}]", self.label, self.lhs, self.relation, self.rhs, self.holds)
    }
}

pub mod decimal_uint {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub mod decimal_int {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde helper for `Vec<BigUint>` as decimal strings.
pub mod decimal_uint_vec {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub use decimal_uint as biguint_string;
