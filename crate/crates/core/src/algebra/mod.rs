//! Finite-dimensional algebras, their derivations, and modules of every type.

mod derivation;
mod element;
mod finite;
mod idempotent;
mod module;
mod su;

pub use derivation::{derivation_basis, derivation_involution, inner_derivation, lie_bracket, Derivation};
pub use element::AlgebraElement;
pub use finite::{
    direct_sum, function_algebra, matrix_algebra, same_algebra, truncated_polynomial_algebra, Algebra, FiniteAlgebra,
};
pub use idempotent::{
    bloch_projector, idempotent_check, partition_blocks, partition_relation_holds, projective_from_idempotent,
    synthetic_partition, AlgebraMatrix, ProjectiveModule,
};
pub(crate) use module::intertwiner_constraints;
pub use module::{
    dual_module, hom_space, is_morphism, morphism_defect, natural_map_to_bidual, side_coordinates, side_generators,
    tensor_modules, unvectorize, Closure, DualModule, FiniteModule, ModuleKind, Side, TensorProduct,
};
pub use su::{su_basis, SuBasis};

/// Centre basis as algebra elements, in canonical echelon order.
pub fn centre_basis(a: &Algebra) -> Vec<AlgebraElement> {
    a.centre().basis_vectors().into_iter().map(|v| AlgebraElement::new(a, v).expect("centre vectors have algebra length")).collect()
}
