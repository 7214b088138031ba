//! Guide chapters compiled as doc-tests, one module per chapter so a failing
//! snippet points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/exact-linear-algebra.md")]
pub mod exact_linear_algebra {}
#[doc = include_str!("../../../book/src/algebras.md")]
pub mod algebras {}
#[doc = include_str!("../../../book/src/universal-calculus.md")]
pub mod universal_calculus {}
#[doc = include_str!("../../../book/src/jets.md")]
pub mod jets {}
#[doc = include_str!("../../../book/src/derivation-forms.md")]
pub mod derivation_forms {}
#[doc = include_str!("../../../book/src/connections.md")]
pub mod connections {}
#[doc = include_str!("../../../book/src/matrix-geometry.md")]
pub mod matrix_geometry {}
#[doc = include_str!("../../../book/src/spectral-triples.md")]
pub mod spectral_triples {}
#[doc = include_str!("../../../book/src/suites.md")]
pub mod suites {}
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
