//! Exact construction and certification of plurisubharmonic defining functions
//! `ρ = P(d_M, d_N)` for the union `M(A) ∪ ℝⁿ` of two maximal totally real
//! subspaces of `ℂⁿ`, plus the gradient-flow retraction of their sublevel sets.

pub mod certify;
pub mod error;
pub mod json;
pub mod levi;
pub mod polyalg;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod retract;
pub mod subspace;
pub mod suite;

pub use error::{Error, Result};
