//! Exact computation and certification of extremal bounded-degree
//! generating sets of polynomial ideals.

pub mod constructions;
pub mod dual_certificates;
pub mod error;
pub mod generator_count;
pub mod groebner;
pub mod json;
pub mod linalg;
pub mod norm_lift;
pub mod polynomials;
pub mod scalars;
pub mod univariate;

pub use error::{Error, Result};
pub use polynomials::{Degree, Monomial, MultiPoly, Point};
pub use scalars::{Field, FieldCtx, FieldElement};
