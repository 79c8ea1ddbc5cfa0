//! Exact algebra for torus-coset searches on hypersurfaces, Weil heights,
//! cross-ratio coordinates of marked points and flat electrical networks.
//!
//! Everything that decides a verdict runs over exact rationals. Floating point
//! only appears in values that are reported with an explicit error bound.

pub mod crossratio;
pub mod exactnum;
pub mod flatnet;
pub mod groebner;
pub mod heights;
pub mod io;
pub mod multipoly;
pub mod report;
pub mod reproduce;
pub mod toruscan;

pub use exactnum::{rat, Rational};
pub use multipoly::MultiPoly;
