use std::fmt;

use serde::Serialize;

use super::{same_algebra, Algebra};
use crate::error::{Error, Result};
use crate::exactlin::{kernel, quotient, vector, Matrix, QuotientMap, Scalar, Subspace};

/// The ring acting on one side of a module: the whole algebra or its centre.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Side {
    Algebra,
    Centre,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Algebra => Side::Centre,
            Side::Centre => Side::Algebra,
        }
    }
}

/// Module type. Tags follow the `(i, j)` taxonomy: right `(1,0)`, left
/// `(0,1)`, central bimodule `(1,1)`, centre bimodule `(0,0)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ModuleKind {
    Right,
    Left,
    CentralBimodule,
    CentreBimodule,
}

impl ModuleKind {
    pub fn tag(self) -> (u8, u8) {
        match self {
            ModuleKind::Right => (1, 0),
            ModuleKind::Left => (0, 1),
            ModuleKind::CentralBimodule => (1, 1),
            ModuleKind::CentreBimodule => (0, 0),
        }
    }

    pub fn from_tag(tag: (u8, u8)) -> Result<Self> {
        match tag {
            (1, 0) => Ok(ModuleKind::Right),
            (0, 1) => Ok(ModuleKind::Left),
            (1, 1) => Ok(ModuleKind::CentralBimodule),
            (0, 0) => Ok(ModuleKind::CentreBimodule),
            other => Err(Error::InvalidParameter(format!("no module kind with tag {other:?}"))),
        }
    }

    /// Rings acting on the (left, right).
    pub fn sides(self) -> (Side, Side) {
        match self {
            ModuleKind::Right => (Side::Centre, Side::Algebra),
            ModuleKind::Left => (Side::Algebra, Side::Centre),
            ModuleKind::CentralBimodule => (Side::Algebra, Side::Algebra),
            ModuleKind::CentreBimodule => (Side::Centre, Side::Centre),
        }
    }

    pub fn from_sides(sides: (Side, Side)) -> Self {
        match sides {
            (Side::Centre, Side::Algebra) => ModuleKind::Right,
            (Side::Algebra, Side::Centre) => ModuleKind::Left,
            (Side::Algebra, Side::Algebra) => ModuleKind::CentralBimodule,
            (Side::Centre, Side::Centre) => ModuleKind::CentreBimodule,
        }
    }

    /// Kind of the dual: tag `(i+1, j+1) mod 2`.
    pub fn dual(self) -> Self {
        let (i, j) = self.tag();
        ModuleKind::from_tag(((i + 1) % 2, (j + 1) % 2)).expect("tags are closed under the flip")
    }
}

/// Generators of a side: the standard basis, or the canonical centre basis.
pub fn side_generators(algebra: &Algebra, side: Side) -> Vec<Vec<Scalar>> {
    match side {
        Side::Algebra => (0..algebra.dim()).map(|i| vector::unit(algebra.dim(), i)).collect(),
        Side::Centre => algebra.centre().basis_vectors(),
    }
}

/// Coordinates of `a` in the side generators; `None` if `a` is not central
/// and the side is the centre.
pub fn side_coordinates(algebra: &Algebra, side: Side, a: &[Scalar]) -> Option<Vec<Scalar>> {
    match side {
        Side::Algebra => Some(a.to_vec()),
        Side::Centre => algebra.centre().coordinates(a),
    }
}

/// A finite-dimensional module over an algebra, presented by the matrices
/// of its side generators acting on `K^dim`.
///
/// Invariants checked at construction: both actions are unital and
/// multiplicative, they commute, and central elements act identically from
/// both sides.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteModule {
    algebra: Algebra,
    kind: ModuleKind,
    dim: usize,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    label: String,
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteModule({}, {:?} over {}, dim {})", self.label, self.kind, self.algebra.label(), self.dim)
    }
}

/// Which actions a submodule closure respects.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Closure {
    Left,
    Right,
    Both,
}

impl FiniteModule {
    pub fn new(
        algebra: &Algebra,
        kind: ModuleKind,
        dim: usize,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let m = FiniteModule::new_unchecked(algebra, kind, dim, left, right, label);
        m.check_axioms()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        algebra: &Algebra,
        kind: ModuleKind,
        dim: usize,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
        label: impl Into<String>,
    ) -> Self {
        FiniteModule { algebra: algebra.clone(), kind, dim, left, right, label: label.into() }
    }

    /// Free module `A^rank` of the given kind; component `t`, basis `e_i` at `t·m + i`.
    pub fn free(algebra: &Algebra, kind: ModuleKind, rank: usize) -> Self {
        let id = Matrix::identity(rank);
        let (ls, rs) = kind.sides();
        let left = side_generators(algebra, ls).iter().map(|g| id.kron(&algebra.left_mult_by(g))).collect();
        let right = side_generators(algebra, rs).iter().map(|g| id.kron(&algebra.right_mult_by(g))).collect();
        let label = format!("{}^{rank}", algebra.label());
        FiniteModule::new_unchecked(algebra, kind, rank * algebra.dim(), left, right, label)
    }

    /// The algebra as a module over itself.
    pub fn regular(algebra: &Algebra, kind: ModuleKind) -> Self {
        let mut m = FiniteModule::free(algebra, kind, 1);
        m.label = algebra.label().to_string();
        m
    }

    pub fn zero(algebra: &Algebra, kind: ModuleKind) -> Self {
        FiniteModule::free(algebra, kind, 0)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn sides(&self) -> (Side, Side) {
        self.kind.sides()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Matrices of the left side generators.
    pub fn left_generators(&self) -> &[Matrix] {
        &self.left
    }

    pub fn right_generators(&self) -> &[Matrix] {
        &self.right
    }

    pub fn left_generator_elements(&self) -> Vec<Vec<Scalar>> {
        side_generators(&self.algebra, self.sides().0)
    }

    pub fn right_generator_elements(&self) -> Vec<Vec<Scalar>> {
        side_generators(&self.algebra, self.sides().1)
    }

    fn combine(&self, mats: &[Matrix], side: Side, a: &[Scalar]) -> Result<Matrix> {
        let coords = side_coordinates(&self.algebra, side, a)
            .ok_or_else(|| Error::InvalidParameter("element does not act on this side (not central)".into()))?;
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (mat, c) in mats.iter().zip(&coords).filter(|(_, c)| !c.is_zero()) {
            out = &out + &mat.scale(c);
        }
        Ok(out)
    }

    /// Matrix of `v ↦ a·v`.
    pub fn left_action(&self, a: &[Scalar]) -> Result<Matrix> {
        self.combine(&self.left, self.sides().0, a)
    }

    /// Matrix of `v ↦ v·a`.
    pub fn right_action(&self, a: &[Scalar]) -> Result<Matrix> {
        self.combine(&self.right, self.sides().1, a)
    }

    /// Matrix of `v ↦ z·v` for central `z`, the same from either side.
    pub fn centre_action(&self, z: &[Scalar]) -> Result<Matrix> {
        self.left_action(z)
    }

    pub fn check_axioms(&self) -> Result<()> {
        let ax = |s: String| Err(Error::ModuleAxiom(format!("{}: {s}", self.label)));
        let (ls, rs) = self.sides();
        for (mats, side, name) in [(&self.left, ls, "left"), (&self.right, rs, "right")] {
            let gens = side_generators(&self.algebra, side);
            if mats.len() != gens.len() {
                return Err(Error::DimensionMismatch { expected: gens.len(), found: mats.len() });
            }
            if mats.iter().any(|m| m.rows() != self.dim || m.cols() != self.dim) {
                return ax(format!("{name} action matrices must be {0}x{0}", self.dim));
            }
            if !self.combine(mats, side, self.algebra.unit())?.is_identity() {
                return ax(format!("unit does not act as identity on the {name}"));
            }
            for (s, gs) in gens.iter().enumerate() {
                for (t, gt) in gens.iter().enumerate() {
                    let prod = self.combine(mats, side, &self.algebra.mul(gs, gt))?;
                    let composed = if name == "left" { &mats[s] * &mats[t] } else { &mats[t] * &mats[s] };
                    if prod != composed {
                        return ax(format!("{name} action is not multiplicative on generators ({s}, {t})"));
                    }
                }
            }
        }
        for (s, l) in self.left.iter().enumerate() {
            for (t, r) in self.right.iter().enumerate() {
                if l * r != r * l {
                    return ax(format!("left generator {s} and right generator {t} do not commute"));
                }
            }
        }
        for z in self.algebra.centre().basis_vectors() {
            if self.left_action(&z)? != self.right_action(&z)? {
                return ax("central elements act differently from the two sides".into());
            }
        }
        Ok(())
    }

    /// Smallest subspace containing `vectors` and stable under the chosen actions.
    pub fn closure(&self, vectors: Vec<Vec<Scalar>>, which: Closure) -> Result<Subspace> {
        let mut gens: Vec<&Matrix> = Vec::new();
        if which != Closure::Right {
            gens.extend(self.left.iter());
        }
        if which != Closure::Left {
            gens.extend(self.right.iter());
        }
        let mut span = Subspace::span(self.dim, vectors)?;
        let mut frontier = span.basis_vectors();
        while !frontier.is_empty() {
            let residuals: Vec<Vec<Scalar>> = frontier
                .iter()
                .flat_map(|v| gens.iter().map(move |g| g.apply(v)))
                .map(|w| span.reduce(&w))
                .filter(|w| !vector::is_zero(w))
                .collect();
            let fresh = Subspace::span(self.dim, residuals)?;
            frontier = fresh.basis_vectors();
            if !frontier.is_empty() {
                span = span.join(&fresh)?;
            }
        }
        Ok(span)
    }

    pub fn is_invariant(&self, s: &Subspace) -> bool {
        s.basis().row_vectors().all(|v| self.left.iter().chain(&self.right).all(|g| s.contains(&g.apply(v))))
    }

    /// The submodule on an invariant subspace, in coordinates of its canonical basis.
    pub fn submodule(&self, s: &Subspace) -> Result<FiniteModule> {
        if s.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: s.ambient_dim() });
        }
        if !self.is_invariant(s) {
            return Err(Error::ModuleAxiom("subspace is not invariant under the actions".into()));
        }
        let basis = s.basis_vectors();
        let restrict = |g: &Matrix| {
            let cols: Vec<Vec<Scalar>> =
                basis.iter().map(|v| s.coordinates(&g.apply(v)).expect("invariant subspace")).collect();
            Matrix::from_columns(s.dim(), &cols).expect("coordinate columns")
        };
        let left = self.left.iter().map(restrict).collect();
        let right = self.right.iter().map(restrict).collect();
        Ok(FiniteModule::new_unchecked(&self.algebra, self.kind, s.dim(), left, right, format!("sub({})", self.label)))
    }

    /// The quotient by an invariant subspace, with its projection.
    pub fn quotient_module(&self, s: &Subspace) -> Result<(FiniteModule, QuotientMap)> {
        if !self.is_invariant(s) {
            return Err(Error::ModuleAxiom("subspace is not invariant under the actions".into()));
        }
        let q = quotient(self.dim, s)?;
        let left = self.left.iter().map(|g| q.induced(g, &q)).collect();
        let right = self.right.iter().map(|g| q.induced(g, &q)).collect();
        let m = FiniteModule::new_unchecked(&self.algebra, self.kind, q.dim(), left, right, format!("{}/~", self.label));
        Ok((m, q))
    }

    pub fn direct_sum(&self, other: &FiniteModule) -> Result<FiniteModule> {
        self.same_shape(other)?;
        let left = self.left.iter().zip(&other.left).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
        let right = self.right.iter().zip(&other.right).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
        let label = format!("{}⊕{}", self.label, other.label);
        Ok(FiniteModule::new_unchecked(&self.algebra, self.kind, self.dim + other.dim, left, right, label))
    }

    fn same_shape(&self, other: &FiniteModule) -> Result<()> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        if self.kind != other.kind {
            return Err(Error::KindMismatch(format!("{:?} vs {:?}", self.kind, other.kind)));
        }
        Ok(())
    }
}

/// Linear maps `F : P → Q` (as `dim Q × dim P` matrices, row-major
/// vectorized) commuting with every side generator of both modules.
///
/// On an algebra side only the generating basis elements are imposed, and the
/// kernel is cut down one generator at a time.
pub fn hom_space(p: &FiniteModule, q: &FiniteModule) -> Result<Subspace> {
    p.same_shape(q)?;
    let (ls, rs) = p.sides();
    let gens = p.algebra.generating_indices();
    let pick = |side: Side, a: &[Matrix], b: &[Matrix]| -> Vec<(Matrix, Matrix)> {
        match side {
            Side::Algebra => gens.iter().map(|&g| (a[g].clone(), b[g].clone())).collect(),
            Side::Centre => a.iter().cloned().zip(b.iter().cloned()).collect(),
        }
    };
    let mut pairs = pick(ls, &p.left, &q.left);
    pairs.extend(pick(rs, &p.right, &q.right));
    let n = p.dim * q.dim;
    let mut space = Subspace::full(n);
    for (m, nn) in &pairs {
        if space.is_zero() {
            break;
        }
        let c = intertwiner_constraints(&[(m, nn)], p.dim, q.dim);
        if c.rows() == 0 {
            continue;
        }
        let basis = space.basis().transpose();
        let coeffs = kernel(&(&c * &basis));
        let vectors = coeffs.basis().row_vectors().map(|k| basis.apply(k)).collect();
        space = Subspace::span(n, vectors)?;
    }
    Ok(space)
}

/// Rows of `N·F − F·M = 0` for each `(M, N)` pair, `F` of shape `nq × np`.
pub(crate) fn intertwiner_constraints(pairs: &[(&Matrix, &Matrix)], np: usize, nq: usize) -> Matrix {
    let mut rows = Vec::new();
    for (m, n) in pairs {
        for a in 0..nq {
            for b in 0..np {
                let mut row = vector::zeros(nq * np);
                for c in 0..nq {
                    if !n[(a, c)].is_zero() {
                        row[c * np + b] += &n[(a, c)];
                    }
                }
                for c in 0..np {
                    if !m[(c, b)].is_zero() {
                        row[a * np + c] -= &m[(c, b)];
                    }
                }
                if !vector::is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    Matrix::from_rows(nq * np, rows).expect("rows have width nq·np")
}

pub fn unvectorize(v: &[Scalar], rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| v[i * cols + j].clone())
}

/// Description of the first generator on which `f : P → Q` fails to intertwine.
pub fn morphism_defect(p: &FiniteModule, q: &FiniteModule, f: &Matrix) -> Option<String> {
    if let Some(i) = p.left.iter().zip(&q.left).position(|(m, n)| n * f != f * m) {
        return Some(format!("left generator {i}"));
    }
    p.right.iter().zip(&q.right).position(|(m, n)| n * f != f * m).map(|i| format!("right generator {i}"))
}

pub fn is_morphism(p: &FiniteModule, q: &FiniteModule, f: &Matrix) -> bool {
    f.rows() == q.dim && f.cols() == p.dim && morphism_defect(p, q, f).is_none()
}

/// `P* = Hom(P, A)` along with the basis maps its coordinates refer to.
#[derive(Clone, Debug)]
pub struct DualModule {
    pub module: FiniteModule,
    /// Basis maps `P → A`, each `m × dim P`.
    pub maps: Vec<Matrix>,
    space: Subspace,
    source_dim: usize,
}

impl DualModule {
    /// Coordinates of a map `P → A` in the dual, `None` if it is not a module map.
    pub fn coordinates(&self, f: &Matrix) -> Option<Vec<Scalar>> {
        self.space.coordinates(f.entries())
    }

    pub fn map_of(&self, coords: &[Scalar]) -> Matrix {
        let m = self.module.algebra().dim();
        let mut out = Matrix::zeros(m, self.source_dim);
        for (c, f) in coords.iter().zip(&self.maps) {
            if !c.is_zero() {
                out = &out + &f.scale(c);
            }
        }
        out
    }
}

/// The dual `P* = Hom_{A_i−A_j}(P, A)` with `(b·f)(p) = b·f(p)` and `(f·b)(p) = f(p)·b`,
/// each side acting through the opposite ring of the corresponding side of `P`.
pub fn dual_module(p: &FiniteModule) -> Result<DualModule> {
    let alg = p.algebra();
    let target = FiniteModule::regular(alg, p.kind);
    let space = hom_space(p, &target)?;
    let m = alg.dim();
    let maps: Vec<Matrix> = space.basis_vectors().iter().map(|v| unvectorize(v, m, p.dim)).collect();
    let kind = p.kind.dual();
    let (ls, rs) = kind.sides();
    let act = |mult: &dyn Fn(&[Scalar]) -> Matrix, side: Side| -> Vec<Matrix> {
        side_generators(alg, side)
            .iter()
            .map(|g| {
                let l = mult(g);
                let cols: Vec<Vec<Scalar>> = maps
                    .iter()
                    .map(|f| space.coordinates((&l * f).entries()).expect("dual is stable under the actions"))
                    .collect();
                Matrix::from_columns(maps.len(), &cols).expect("coordinate columns")
            })
            .collect()
    };
    let left = act(&|g| alg.left_mult_by(g), ls);
    let right = act(&|g| alg.right_mult_by(g), rs);
    let module = FiniteModule::new_unchecked(alg, kind, maps.len(), left, right, format!("{}*", p.label));
    Ok(DualModule { module, maps, space, source_dim: p.dim })
}

/// Matrix of the natural map `P → P**`, `p ↦ (f ↦ f(p))`, plus the bidual.
pub fn natural_map_to_bidual(p: &FiniteModule) -> Result<(Matrix, DualModule)> {
    let dual = dual_module(p)?;
    let bidual = dual_module(&dual.module)?;
    let m = p.algebra().dim();
    let cols: Vec<Vec<Scalar>> = (0..p.dim)
        .map(|v| {
            let ev = Matrix::from_fn(m, dual.maps.len(), |i, t| dual.maps[t][(i, v)].clone());
            bidual.coordinates(&ev).expect("evaluation is a module map")
        })
        .collect();
    Ok((Matrix::from_columns(bidual.module.dim(), &cols)?, bidual))
}

/// `P ⊗_B Q` over the middle ring `B`, as a quotient of `P ⊗_K Q`
/// (index `v·dim Q + w`).
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: FiniteModule,
    pub quotient: QuotientMap,
    p_dim: usize,
    q_dim: usize,
}

impl TensorProduct {
    /// Class of the pure tensor `p ⊗ q`.
    pub fn class(&self, p: &[Scalar], q: &[Scalar]) -> Vec<Scalar> {
        self.quotient.project(&vector::tensor(p, q))
    }

    /// Class of an element of the plain tensor product.
    pub fn class_of(&self, t: &[Scalar]) -> Vec<Scalar> {
        self.quotient.project(t)
    }

    pub fn factor_dims(&self) -> (usize, usize) {
        (self.p_dim, self.q_dim)
    }
}

pub fn tensor_modules(p: &FiniteModule, q: &FiniteModule) -> Result<TensorProduct> {
    if !same_algebra(p.algebra(), q.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let (pl, pr) = p.sides();
    let (ql, qr) = q.sides();
    if pr != ql {
        return Err(Error::KindMismatch(format!(
            "{:?} ⊗ {:?}: the right ring of the first factor must be the left ring of the second",
            p.kind, q.kind
        )));
    }
    let (np, nq) = (p.dim, q.dim);
    let id_p = Matrix::identity(np);
    let id_q = Matrix::identity(nq);
    let mut relations = Vec::new();
    for (rp, lq) in p.right.iter().zip(&q.left) {
        let diff = &rp.kron(&id_q) - &id_p.kron(lq);
        relations.extend(diff.transpose().into_rows().into_iter().filter(|r| !vector::is_zero(r)));
    }
    let balancing = Subspace::span(np * nq, relations)?;
    let quot = quotient(np * nq, &balancing)?;
    let left = p.left.iter().map(|g| quot.induced(&g.kron(&id_q), &quot)).collect();
    let right = q.right.iter().map(|g| quot.induced(&id_p.kron(g), &quot)).collect();
    let kind = ModuleKind::from_sides((pl, qr));
    let module =
        FiniteModule::new_unchecked(p.algebra(), kind, quot.dim(), left, right, format!("{}⊗{}", p.label, q.label));
    Ok(TensorProduct { module, quotient: quot, p_dim: np, q_dim: nq })
}
