use super::{left_module_of, JetModule};
use crate::algebra::{hom_space, is_morphism, same_algebra, FiniteModule};
use crate::error::{Error, Result};
use crate::exactlin::{kernel, quotient, vector, Matrix, Subspace};

/// A `K`-linear map `Δ : P → Q` between modules over a commutative algebra.
#[derive(Clone, Debug)]
pub struct DiffOperator {
    source: FiniteModule,
    target: FiniteModule,
    map: Matrix,
}

impl DiffOperator {
    pub fn new(source: &FiniteModule, target: &FiniteModule, map: Matrix) -> Result<Self> {
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        if map.rows() != target.dim() || map.cols() != source.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim() * source.dim(), found: map.rows() * map.cols() });
        }
        Ok(DiffOperator { source: left_module_of(source)?, target: left_module_of(target)?, map })
    }

    pub fn source(&self) -> &FiniteModule {
        &self.source
    }

    pub fn target(&self) -> &FiniteModule {
        &self.target
    }

    pub fn map(&self) -> &Matrix {
        &self.map
    }
}

/// `δ_a φ = a·φ − φ∘a` acting on `φ : P → Q` vectorized row-major.
pub fn delta_operator(p: &FiniteModule, q: &FiniteModule, a: &[crate::exactlin::Scalar]) -> Result<Matrix> {
    let lp = p.left_action(a)?;
    let lq = q.left_action(a)?;
    Ok(&lq.kron(&Matrix::identity(p.dim())) - &Matrix::identity(q.dim()).kron(&lp.transpose()))
}

fn basis_deltas(p: &FiniteModule, q: &FiniteModule) -> Result<Vec<Matrix>> {
    let m = p.algebra().dim();
    (0..m).map(|i| delta_operator(p, q, &vector::unit(m, i))).collect()
}

/// `δ_{e_{i₀}}∘⋯∘δ_{e_{i_s}}Δ = 0` for every basis tuple; the `δ_a` are
/// linear in `a`, so basis tuples suffice.
pub fn is_diffop(delta: &DiffOperator, order: usize) -> bool {
    let deltas = basis_deltas(&delta.source, &delta.target).expect("left modules over a commutative algebra");
    let n = delta.map.rows() * delta.map.cols();
    let mut level = Subspace::span(n, vec![delta.map.entries().to_vec()]).expect("vector of full length");
    for _ in 0..=order {
        if level.is_zero() {
            return true;
        }
        let images = level.basis().row_vectors().flat_map(|w| deltas.iter().map(move |d| d.apply(w))).collect();
        level = Subspace::span(n, images).expect("vectors of full length");
    }
    level.is_zero()
}

/// `Diff_s(P, Q)`, built as `Diff_s = {φ : δ_{e_i}φ ∈ Diff_{s−1}}` from `Diff_{−1} = 0`.
pub fn diffop_space(p: &FiniteModule, q: &FiniteModule, order: usize) -> Result<Subspace> {
    let (p, q) = (left_module_of(p)?, left_module_of(q)?);
    let deltas = basis_deltas(&p, &q)?;
    let n = p.dim() * q.dim();
    let mut space = Subspace::zero(n);
    for _ in 0..=order {
        let qm = quotient(n, &space)?;
        let blocks: Vec<Matrix> = deltas.iter().map(|d| qm.projection() * d).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        space = kernel(&Matrix::vstack(&refs)?);
    }
    Ok(space)
}

/// The homomorphism `f^Δ : J^s(P) → Q` with `f^Δ∘J^s = Δ`, descended from
/// `h(a⊗p) = a·Δ(p)`.
pub fn diffop_to_hom(delta: &DiffOperator, order: usize) -> Result<(JetModule, Matrix)> {
    let jet = JetModule::new(&delta.source, order)?;
    let (m, np) = (delta.source.algebra().dim(), delta.source.dim());
    let mut h = Matrix::zeros(delta.target.dim(), m * np);
    for (i, lq) in delta.target.left_generators().iter().enumerate() {
        let block = lq * &delta.map;
        for v in 0..np {
            for r in 0..block.rows() {
                h[(r, i * np + v)] = block[(r, v)].clone();
            }
        }
    }
    if let Some(g) = jet.mu().basis().row_vectors().position(|r| !vector::is_zero(&h.apply(r))) {
        return Err(Error::NotADiffOperator {
            order,
            detail: format!("h(a⊗p) = aΔ(p) does not annihilate basis vector {g} of μ^{}", order + 1),
        });
    }
    let f = &h * jet.quotient().section();
    debug_assert_eq!(&f * &jet.jet_map(), delta.map);
    Ok((jet, f))
}

/// `f ↦ f∘J^s` for a module morphism `f : J^s(P) → Q`.
pub fn hom_to_diffop(jet: &JetModule, q: &FiniteModule, f: &Matrix) -> Result<DiffOperator> {
    let q = left_module_of(q)?;
    if !is_morphism(jet.module(), &q, f) {
        return Err(Error::NotModuleLinear("f is not a morphism J^s(P) → Q".into()));
    }
    DiffOperator::new(jet.base(), &q, f * &jet.jet_map())
}

/// `dim Hom_A(J^s(P), Q)`.
pub fn jet_hom_dim(jet: &JetModule, q: &FiniteModule) -> Result<usize> {
    Ok(hom_space(jet.module(), &left_module_of(q)?)?.dim())
}
