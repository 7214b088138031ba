use super::{same_algebra, Algebra, AlgebraElement, FiniteModule, ModuleKind};
use crate::error::{Error, Result};
use crate::exactlin::{vector, Matrix, Scalar, Subspace};

/// An `n × n` matrix with entries in an algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraMatrix {
    algebra: Algebra,
    n: usize,
    // entry (i, j) at i·n + j
    entries: Vec<Vec<Scalar>>,
}

impl AlgebraMatrix {
    pub fn new(algebra: &Algebra, n: usize, entries: Vec<Vec<Scalar>>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(format!("expected {} entries for a square matrix, got {}", n * n, entries.len())));
        }
        if let Some(e) = entries.iter().find(|e| e.len() != algebra.dim()) {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: e.len() });
        }
        Ok(AlgebraMatrix { algebra: algebra.clone(), n, entries })
    }

    pub fn from_fn(algebra: &Algebra, n: usize, mut f: impl FnMut(usize, usize) -> Vec<Scalar>) -> Result<Self> {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        AlgebraMatrix::new(algebra, n, entries)
    }

    pub fn identity(algebra: &Algebra, n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { algebra.unit().to_vec() } else { vector::zeros(algebra.dim()) })
            .collect();
        AlgebraMatrix { algebra: algebra.clone(), n, entries }
    }

    pub fn diag(algebra: &Algebra, d: &[AlgebraElement]) -> Result<Self> {
        if d.iter().any(|x| !same_algebra(x.algebra(), algebra)) {
            return Err(Error::AlgebraMismatch);
        }
        let n = d.len();
        AlgebraMatrix::from_fn(algebra, n, |i, j| if i == j { d[i].coeffs().to_vec() } else { vector::zeros(algebra.dim()) })
    }

    /// A single algebra element as a 1×1 matrix.
    pub fn scalar(a: &AlgebraElement) -> Self {
        AlgebraMatrix { algebra: a.algebra().clone(), n: 1, entries: vec![a.coeffs().to_vec()] }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Scalar] {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &AlgebraMatrix) -> Result<AlgebraMatrix> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        AlgebraMatrix::from_fn(&self.algebra, n, |i, j| {
            let mut acc = vector::zeros(self.algebra.dim());
            for k in 0..n {
                let term = self.algebra.mul(self.entry(i, k), other.entry(k, j));
                acc = vector::add(&acc, &term);
            }
            acc
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self).map(|sq| sq == *self).unwrap_or(false)
    }

    /// `g·self·g⁻¹`; fails unless `g·g_inv = 1`.
    pub fn conjugate(&self, g: &AlgebraMatrix, g_inv: &AlgebraMatrix) -> Result<AlgebraMatrix> {
        if g.mul(g_inv)? != AlgebraMatrix::identity(&self.algebra, self.n) {
            return Err(Error::InvalidParameter("g·g⁻¹ != 1".into()));
        }
        g.mul(self)?.mul(g_inv)
    }

    /// Assembles a block matrix from `q × q` blocks of equal size.
    pub fn from_blocks(blocks: &[Vec<AlgebraMatrix>]) -> Result<AlgebraMatrix> {
        let q = blocks.len();
        let first = blocks.first().and_then(|r| r.first()).ok_or_else(|| Error::InvalidParameter("no blocks".into()))?;
        let (alg, m) = (first.algebra.clone(), first.n);
        if blocks.iter().any(|r| r.len() != q || r.iter().any(|b| b.n != m || !same_algebra(&b.algebra, &alg))) {
            return Err(Error::InvalidParameter("blocks must form a square grid of equal sizes".into()));
        }
        AlgebraMatrix::from_fn(&alg, q * m, |i, j| blocks[i / m][j / m].entry(i % m, j % m).to_vec())
    }

    /// Matrix of `s ↦ p·s` on columns of `A^n` (component `t`, basis `i` at `t·m + i`).
    pub fn column_action(&self) -> Matrix {
        let m = self.algebra.dim();
        let blocks: Vec<Vec<Matrix>> =
            (0..self.n).map(|j| (0..self.n).map(|t| self.algebra.left_mult_by(self.entry(j, t))).collect()).collect();
        assemble(&blocks, m)
    }

    /// Matrix of `s ↦ s·p` on rows of `A^n`.
    pub fn row_action(&self) -> Matrix {
        let m = self.algebra.dim();
        let blocks: Vec<Vec<Matrix>> =
            (0..self.n).map(|j| (0..self.n).map(|t| self.algebra.right_mult_by(self.entry(t, j))).collect()).collect();
        assemble(&blocks, m)
    }
}

fn assemble(blocks: &[Vec<Matrix>], m: usize) -> Matrix {
    let n = blocks.len();
    Matrix::from_fn(n * m, n * m, |r, c| blocks[r / m][c / m][(r % m, c % m)].clone())
}

pub fn idempotent_check(p: &AlgebraMatrix) -> bool {
    p.is_idempotent()
}

/// The projective module `p·A^n` (right) or `A^n·p` (left), a submodule of the free module.
#[derive(Clone, Debug)]
pub struct ProjectiveModule {
    pub module: FiniteModule,
    pub idempotent: AlgebraMatrix,
    /// Image of `p` inside the free module `A^n`.
    pub image: Subspace,
    pub free: FiniteModule,
}

impl ProjectiveModule {
    /// Ambient vector in `A^n` of a module coordinate vector.
    pub fn include(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut v = vector::zeros(self.image.ambient_dim());
        for (c, b) in coords.iter().zip(self.image.basis().row_vectors()) {
            vector::axpy(&mut v, c, b);
        }
        v
    }

    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.image.coordinates(v)
    }
}

pub fn projective_from_idempotent(p: &AlgebraMatrix, kind: ModuleKind) -> Result<ProjectiveModule> {
    if !p.is_idempotent() {
        return Err(Error::NotIdempotent(format!("{0}x{0} matrix over {1}", p.n, p.algebra.label())));
    }
    let action = match kind {
        ModuleKind::Right => p.column_action(),
        ModuleKind::Left => p.row_action(),
        other => return Err(Error::KindMismatch(format!("projective modules are one-sided, got {other:?}"))),
    };
    let free = FiniteModule::free(&p.algebra, kind, p.n);
    let image = Subspace::image(&action);
    let module = free.submodule(&image)?.with_label(format!("p·{}^{}", p.algebra.label(), p.n));
    Ok(ProjectiveModule { module, idempotent: p.clone(), image, free })
}

/// `½(1 + v·σ) ∈ M_2` for a rational unit vector `v`.
pub fn bloch_projector(m2: &Algebra, v: [Scalar; 3]) -> Result<AlgebraElement> {
    if m2.dim() != 4 || !m2.has_involution() {
        return Err(Error::InvalidParameter("Bloch projectors live in M2".into()));
    }
    let norm: Scalar = v.iter().map(|x| x * x).sum();
    if !norm.is_one() {
        return Err(Error::InvalidParameter(format!("|v|² = {norm}, expected 1")));
    }
    let half = Scalar::from_ratio(1, 2);
    let i = Scalar::i();
    // 1 + v1 σ1 + v2 σ2 + v3 σ3 in the E11, E12, E21, E22 basis
    let coeffs = vec![
        &Scalar::one() + &v[2],
        &v[0] - &(&i * &v[1]),
        &v[0] + &(&i * &v[1]),
        &Scalar::one() - &v[2],
    ];
    AlgebraElement::new(m2, vector::scale(&coeffs, &half))
}

/// Blocks `p_ζξ = φ_ζ ρ_ζξ φ_ξ` of a bundle over a finite set, trivialized by
/// frames `g_ζ` with transition functions `ρ_ζξ = g_ζ g_ξ⁻¹`.
///
/// `phis[ζ]` is a function (pointwise values); `frames[ζ][x]` the value of
/// `g_ζ` at point `x`, an invertible rank × rank matrix. The relation
/// `Σ_κ p_ζκ p_κξ = p_ζξ` holds whenever `Σ_ζ φ_ζ² = 1`.
pub fn partition_blocks(
    functions: &Algebra,
    phis: &[Vec<Scalar>],
    frames: &[Vec<Matrix>],
) -> Result<Vec<Vec<AlgebraMatrix>>> {
    let npts = functions.dim();
    let q = phis.len();
    let rank = frames.first().and_then(|f| f.first()).map(Matrix::rows).unwrap_or(0);
    if frames.len() != q || frames.iter().any(|f| f.len() != npts) {
        return Err(Error::InvalidParameter("one frame per patch and point".into()));
    }
    let inverses = frames
        .iter()
        .map(|f| f.iter().map(|g| g.inverse().ok_or_else(|| Error::InvalidParameter("singular frame".into()))).collect())
        .collect::<Result<Vec<Vec<Matrix>>>>()?;
    let mut blocks = Vec::with_capacity(q);
    for z in 0..q {
        let mut row = Vec::with_capacity(q);
        for x in 0..q {
            let pointwise: Vec<Matrix> = (0..npts)
                .map(|pt| (&frames[z][pt] * &inverses[x][pt]).scale(&(&phis[z][pt] * &phis[x][pt])))
                .collect();
            row.push(AlgebraMatrix::from_fn(functions, rank, |a, b| (0..npts).map(|pt| pointwise[pt][(a, b)].clone()).collect())?);
        }
        blocks.push(row);
    }
    Ok(blocks)
}

/// `Σ_κ p_ζκ p_κξ = p_ζξ` for all block indices.
pub fn partition_relation_holds(blocks: &[Vec<AlgebraMatrix>]) -> bool {
    let q = blocks.len();
    (0..q).all(|z| {
        (0..q).all(|x| {
            let mut acc: Option<AlgebraMatrix> = None;
            for k in 0..q {
                let Ok(t) = blocks[z][k].mul(&blocks[k][x]) else { return false };
                acc = Some(match acc {
                    None => t,
                    Some(a) => add(&a, &t),
                });
            }
            acc.as_ref() == Some(&blocks[z][x])
        })
    })
}

fn add(a: &AlgebraMatrix, b: &AlgebraMatrix) -> AlgebraMatrix {
    AlgebraMatrix {
        algebra: a.algebra.clone(),
        n: a.n,
        entries: a.entries.iter().zip(&b.entries).map(|(x, y)| vector::add(x, y)).collect(),
    }
}

/// Desk-scale partition data over three points, two patches, rank 2:
/// `φ₁ = (3/5, 1, 0)`, `φ₂ = (4/5, 0, 1)` and unimodular integer frames.
pub fn synthetic_partition(functions: &Algebra) -> Result<Vec<Vec<AlgebraMatrix>>> {
    if functions.dim() != 3 || !functions.is_commutative() {
        return Err(Error::InvalidParameter("synthetic partition data lives on three points".into()));
    }
    let r = Scalar::from_ratio;
    let phis = vec![vec![r(3, 5), r(1, 1), r(0, 1)], vec![r(4, 5), r(0, 1), r(1, 1)]];
    let frames = vec![
        vec![
            Matrix::from_ints(&[&[1, 1], &[0, 1]]),
            Matrix::from_ints(&[&[2, 1], &[1, 1]]),
            Matrix::from_ints(&[&[1, 0], &[3, 1]]),
        ],
        vec![
            Matrix::from_ints(&[&[1, 0], &[1, 1]]),
            Matrix::from_ints(&[&[1, 2], &[0, 1]]),
            Matrix::from_ints(&[&[0, 1], &[1, 0]]),
        ],
    ];
    partition_blocks(functions, &phis, &frames)
}
