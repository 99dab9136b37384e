//! Scheduling unit jobs with precedence constraints on identical machines:
//! baselines, dyadic systems, schedule conversions and the recursive
//! guess-and-divide solver.

pub mod baselines;
pub mod convert;
pub mod dyadic;
pub mod error;
pub mod instance;
pub mod jobset;
pub mod order;
pub mod schedule;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use instance::Instance;
pub use jobset::JobSet;
pub use schedule::{verify_valid, Schedule, ValidityReport, Violation};
