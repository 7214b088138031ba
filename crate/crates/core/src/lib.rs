//! Exact computations in noncommutative differential geometry over finite
//! algebras.
//!
//! All arithmetic is over the Gaussian rationals ℚ(i), so every identity is
//! checked by structural equality rather than a tolerance. The [`suite`]
//! module bundles the checks into named, seeded, reproducible reports.

pub mod algebra;
pub mod ce;
pub mod check;
pub mod connections;
pub mod connes;
pub mod error;
pub mod exactlin;
pub mod jets;
pub mod matrix_geometry;
pub mod suite;
pub mod universal;
