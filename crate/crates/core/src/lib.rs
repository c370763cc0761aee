//! Combinatorial invariants and exhaustive list-sparse enumeration for
//! redundant dictionaries.
//!
//! A [`Dictionary`] is an `m × N` complex matrix with unit-norm columns
//! (atoms). On top of it this crate provides:
//!
//! * [`invariants`]: coherence, spark, generalized coherence `μ_k`,
//!   principal angles and support ranks;
//! * [`constructions`]: deterministic generators for the worst-case
//!   dictionaries and target vectors used to probe list sizes;
//! * [`solvers`]: exhaustive List-Sparse / List-Approx enumeration,
//!   multiplicity-restricted list sizes and multi-solution witnesses;
//! * [`bounds`]: closed-form list-size bounds and a harness that checks them
//!   against enumerated ground truth.
//!
//! Everything is exhaustive and desk-scale. Long enumerations are guarded by
//! an optional [`Budget`] which turns them into [`Error::BudgetExceeded`]
//! instead of silently running for hours.

pub mod bounds;
pub mod constructions;
pub mod dictionary;
mod error;
pub mod invariants;
pub mod linalg;
pub mod solvers;
pub mod subsets;

pub use dictionary::{Dictionary, SupportSet};
pub use error::{Error, Result};
pub use invariants::{InvariantReport, Spark};
pub use num_complex::Complex64;
pub use subsets::Budget;

/// Default relative tolerance for rank decisions: a singular value counts as
/// zero when it is below `DEFAULT_RANK_TOL × σ_max`.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Default tolerance on `| ‖A_i‖ − 1 |` when validating atoms.
pub const DEFAULT_COLUMN_NORM_TOL: f64 = 1e-10;
