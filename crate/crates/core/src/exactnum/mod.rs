//! Exact arithmetic: rationals, univariate polynomials, matrices, integer
//! lattices and number fields of small degree.

mod field;
mod galois;

pub mod lattice;
mod matrix;
mod rational;
mod scalar;
mod upoly;

pub use field::{cyclotomic_poly, is_irreducible, CycloField, FieldElement, Modulus, NumberField, NumberFieldError, RealRoot};
pub use galois::{discriminant, quartic_galois_class, GaloisClass};
pub use matrix::{char_poly, QMatrix};
pub use rational::{int, parse_rational, rat, ser_display, Rational};
pub use scalar::Scalar;
pub use upoly::UniPoly;
