//! Exact Gröbner bases in two-dimensional semigroup algebras, their Gröbner
//! fans, and non-membership certificates for the Nash problem on toric
//! surface singularities.

pub mod a3;
pub mod coeff;
pub mod error;
pub mod fan;
pub mod groebner;
pub(crate) mod lattice;
pub mod nash;
pub mod poly;
pub mod semigroup;

pub use coeff::{Coeff, FieldSpec};
pub use error::{Error, Result};
pub use poly::{MarkedPoly, SemigroupPolynomial, TermOrder};
pub use semigroup::{dual_generators, AffineSemigroup, Cone, Exponent};
