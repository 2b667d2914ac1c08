//! Exact additive combinatorics on finite abelian groups and the integers:
//! group arithmetic, convolutions, higher additive energies, dissociated
//! sets, and the connectivity toolkit (connected subsets, strong
//! connectedness, partitions and almost-bases).
//!
//! Every verdict is decided in exact integer or rational arithmetic.

pub mod connectivity;
pub mod dissociation;
pub mod energy;
pub mod error;
pub mod function;
pub mod group;
mod keys;
pub mod scalar;
pub mod verdict;

use num_bigint::BigUint;

pub use energy::{energy, zeta, Energy, SubsetEnergy, ZetaValue};
pub use error::{Error, Result};
pub use function::CountFn;
pub use group::{Elem, GroupSet, GroupSpec};
pub use scalar::{Count, RationalConstant};
pub use verdict::{Inequality, Power, Relation};

/// Counting functions with unbounded values.
pub type IntFn = CountFn<BigUint>;
/// Counting functions with 128-bit values, for hot paths with a known bound.
pub type WideFn = CountFn<u128>;
