//! Exact linear algebra over ℚ(i).
//!
//! Every kernel, image and quotient in the crate is computed here, and every
//! equality downstream is structural equality of these values.

mod echelon;
mod matrix;
mod scalar;
mod subspace;

pub use echelon::{kernel, rref, solve};
pub use matrix::{vector, Matrix};
pub use scalar::Scalar;
pub use subspace::{quotient, QuotientMap, Subspace};
