//! Exact enumeration of reflection-symmetric triangulations of the dilated
//! standard triangle `dΔ = conv{(0,0), (d,0), (0,d)}`, closed-form lower and
//! upper bounds on their number, and tables comparing both against published
//! reference values.
//!
//! - [`geometry`]: lattice regions, exact predicates, symmetry groups.
//! - [`enumeration`]: the lexicographic reverse search, a brute-force oracle,
//!   and the half-region decomposition.
//! - [`bounds`]: binomial lower bounds, point and edge counts, upper-bound
//!   exponents.
//! - [`analysis`]: logarithms, capacity, regression and table reports.

pub mod error;
pub mod geometry;
pub mod enumeration;
pub mod bounds;
pub mod analysis;
mod decimal;

pub use error::{BoundsError, EnumerationError, GeometryError};
