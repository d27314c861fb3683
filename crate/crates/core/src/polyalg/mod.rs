//! Exact polynomial arithmetic in the real coordinates `x_1..x_n, y_1..y_n`,
//! Wirtinger derivatives, bivariate compositions and square-root extensions.

pub mod bivariate;
pub mod complex;
pub mod extension;
pub mod float;
pub mod monomial;
pub mod poly;
pub mod serial;

pub use bivariate::BivariatePoly;
pub use complex::{wirtinger, ComplexPoly, GaussianRational, WirtingerKind};
pub use extension::{ExtensionPoly, ExtensionRing};
pub use float::FloatPoly;
pub use monomial::{Monomial, MAX_VARS};
pub use poly::RationalPoly;

/// Real coordinate names `x1..xn, y1..yn`.
pub fn xy_names(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("x{j}")).chain((1..=n).map(|j| format!("y{j}"))).collect()
}
