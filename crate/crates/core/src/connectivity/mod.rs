//! Connectedness of degree `k`: window connectedness, strong connectedness,
//! and the algorithms built on them (connected-subset extraction,
//! almost-bases, partitions, Konyagin containment).
//!
//! For `C = p/q` every verdict is an integer inequality; e.g. window
//! connectedness of `B` reads `T_k(B) |A|^2k q^2k >= p^2k |B|^2k T_k(A)`.

mod check;
mod extract;
mod partition;
mod weights;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSet;
use crate::scalar::RationalConstant;

pub use check::{
    check_connected, check_strong_implies_weak, check_strongly_connected, konyagin_containment,
    ConnectedVerdict, KonyaginReport, StrongImpliesWeak, StrongVerdict, SubsetWitness,
};
pub use extract::{
    extract_almost_basis, extract_connected_subset, AlmostBasis, AlmostBasisOutcome, AlmostBasisStep,
    Extraction, ExtractionStep, ExtractionTrace, PreconditionCertificate, StepBound,
};
pub use partition::{
    partition_min_sigma, sigma_scaled, strong_partition, PartStatus, PartitionMove, PartitionOptions,
    MoveKind, PartitionStart, PartitionState, StrongPart, StrongPartition, StrongRound, part_positions,
};
pub use weights::{Cut, CutWeight};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exhaustive search under the configured caps.
    #[default]
    Exact,
    /// Seeded sampling and local search; never certifies a positive verdict.
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Exhaustive search found no violation.
    Certified,
    /// Heuristic search found no violation.
    NoCounterexampleFound,
    /// A concrete violating witness.
    Counterexample,
}

/// Shared parameters for the connectivity operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityParams {
    pub k: u32,
    pub c: RationalConstant,
    /// Window `beta1 |A| <= |B| <= beta2 |A|`; `beta1 = 0` admits every
    /// nonempty `B`.
    pub beta1: RationalConstant,
    pub beta2: RationalConstant,
    pub mode: Mode,
    pub seed: u64,
    /// Largest `|A|` for exhaustive subset and cut enumeration.
    pub exhaustive_cap: usize,
    /// Largest part size for exhaustive cut search inside partitions.
    pub cut_cap: usize,
    /// Restarts for heuristic subset search.
    pub samples: usize,
    /// Allow any `C <= 1` in extraction instead of `C <= 1/32`.
    pub relaxed: bool,
    /// Replaces the computed slice size in almost-basis extraction.
    pub l_override: Option<u64>,
}

impl Default for ConnectivityParams {
    fn default() -> Self {
        ConnectivityParams {
            k: 2,
            c: RationalConstant::one(),
            beta1: RationalConstant::zero(),
            beta2: RationalConstant::one(),
            mode: Mode::Exact,
            seed: 0,
            exhaustive_cap: 20,
            cut_cap: 16,
            samples: 64,
            relaxed: false,
            l_override: None,
        }
    }
}

impl ConnectivityParams {
    pub fn new(k: u32, c: RationalConstant) -> Self {
        ConnectivityParams { k, c, ..Default::default() }
    }

    pub fn with_window(mut self, beta1: RationalConstant, beta2: RationalConstant) -> Self {
        self.beta1 = beta1;
        self.beta2 = beta2;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Domain(format!("order must be >= 2, got {}", self.k)));
        }
        let one = RationalConstant::one();
        if self.c.is_zero() || self.c > one {
            return Err(Error::Config(format!("C must lie in (0, 1], got {}", self.c)));
        }
        if self.beta1 > one || self.beta2 > one {
            return Err(Error::Config("beta1, beta2 must lie in [0, 1]".into()));
        }
        if self.beta1 > self.beta2 {
            return Err(Error::Config(format!("beta1 = {} exceeds beta2 = {}", self.beta1, self.beta2)));
        }
        Ok(())
    }

    pub(crate) fn require_power_of_two(&self) -> Result<()> {
        if !self.k.is_power_of_two() {
            return Err(Error::Domain(format!("order must be a power of two, got {}", self.k)));
        }
        Ok(())
    }

    /// Admissible `|B|` for a set of size `m`: `ceil(beta1 m) ..= floor(beta2 m)`,
    /// and at least 1.
    pub fn window(&self, m: usize) -> (usize, usize) {
        let mb = BigUint::from(m);
        let lo = ceil_mul(&self.beta1, &mb).max(1);
        let hi = floor_mul(&self.beta2, &mb);
        (lo, hi)
    }
}

fn floor_mul(r: &RationalConstant, m: &BigUint) -> usize {
    let v = (r.numer() * m) / r.denom();
    usize::try_from(&v).unwrap_or(usize::MAX)
}

fn ceil_mul(r: &RationalConstant, m: &BigUint) -> usize {
    let (q, rem) = (r.numer() * m).div_rem(&r.denom());
    let v = if rem.is_zero() { q } else { q + 1u32 };
    usize::try_from(&v).unwrap_or(usize::MAX)
}

pub(crate) fn positions(a: &GroupSet, b: &GroupSet) -> Vec<usize> {
    b.iter().map(|e| a.position(e).expect("subset of ambient set")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_rounding() {
        let p = ConnectivityParams::default()
            .with_window(RationalConstant::new(1, 4).unwrap(), RationalConstant::new(3, 4).unwrap());
        assert_eq!(p.window(10), (3, 7));
        assert_eq!(p.window(8), (2, 6));
        assert_eq!(ConnectivityParams::default().window(5), (1, 5));
    }

    #[test]
    fn validation() {
        let mut p = ConnectivityParams::new(2, RationalConstant::new(3, 2).unwrap());
        assert!(matches!(p.validate(), Err(Error::Config(_))));
        p.c = RationalConstant::one();
        p.beta1 = RationalConstant::one();
        p.beta2 = RationalConstant::new(1, 2).unwrap();
        assert!(matches!(p.validate(), Err(Error::Config(_))));
        assert!(matches!(ConnectivityParams::new(1, RationalConstant::one()).validate(), Err(Error::Domain(_))));
    }
}
