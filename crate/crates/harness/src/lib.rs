//! Generators, the structure-extraction pipeline, verification suites and
//! report handling behind the `addcomb` binary.

pub mod generate;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod suites;

use addcomb::Error;

/// Process exit code for an error: 3 for capacity, 1 for a tripped guard,
/// 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => 3,
        Error::GuardTrip(_) => 1,
        _ => 2,
    }
}
