//! Contragredient Lie superalgebras from Cartan data.
//!
//! The crate works with a square matrix of exact rationals and a parity
//! vector, and provides odd reflections, admissibility and regular Kac-Moody
//! checks, a degree-by-degree construction of the positive part with growth
//! estimates, and classification of the non-symmetrizable finite-growth cases.

pub mod admissibility;
pub mod cartan;
pub mod classify;
pub mod cli;
pub mod codec;
pub mod diagram;
pub mod error;
pub mod linalg;
pub mod rational;
pub mod reflections;
pub mod search;
pub mod superalgebra;

pub use cartan::{canonical_form, normalize, structure_flags, CartanDatum, RootVector};
pub use error::{Error, Result};
pub use rational::Rational;
