use super::echelon::{kernel, rref_nonzero};
use super::{vector, Matrix, Scalar};
use crate::error::{Error, Result};

/// A linear subspace of `Kⁿ`, stored as its canonical reduced echelon basis.
///
/// Equal subspaces have identical bases, so derived `PartialEq` is set equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(ambient_dim), pivots: (0..ambient_dim).collect() }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: v.len() });
        }
        let m = Matrix::from_rows(ambient_dim, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn row_space(m: &Matrix) -> Self {
        let (rows, pivots) = rref_nonzero(m);
        let basis = Matrix::from_rows(m.cols(), rows).expect("rref rows have matrix width");
        Subspace { ambient_dim: m.cols(), basis, pivots }
    }

    /// Column space of `m`.
    pub fn image(m: &Matrix) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vectors().map(<[Scalar]>::to_vec).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v` modulo the subspace: zero on every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.row_vectors().zip(&self.pivots) {
            if !out[p].is_zero() {
                let c = -&out[p];
                vector::axpy(&mut out, &c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient_dim && vector::is_zero(&self.reduce(v))
    }

    /// Coordinates in the canonical basis, `None` if `v` lies outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.row_vectors().all(|r| other.contains(r))
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let (a, b) = (self.dim(), other.dim());
        // x·A = y·B  ⇔  (x, y) ∈ ker [Aᵀ | −Bᵀ]
        let m = Matrix::from_fn(self.ambient_dim, a + b, |i, j| {
            if j < a {
                self.basis[(j, i)].clone()
            } else {
                -&other.basis[(j - a, i)]
            }
        });
        let vectors = kernel(&m)
            .basis_vectors()
            .into_iter()
            .map(|xy| {
                let mut v = vector::zeros(self.ambient_dim);
                for (c, row) in xy[..a].iter().zip(self.basis.row_vectors()) {
                    vector::axpy(&mut v, c, row);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient_dim, vectors)
    }

    /// Image of the subspace under `m` (acting on columns).
    pub fn map(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: m.cols() });
        }
        Subspace::span(m.rows(), self.basis.row_vectors().map(|r| m.apply(r)).collect())
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Ok(())
    }
}

/// The linear projection `Kⁿ → Kⁿ/S` in coordinates given by the non-pivot
/// columns of `S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientMap {
    ambient_dim: usize,
    kernel: Subspace,
    projection: Matrix,
    section: Matrix,
    free: Vec<usize>,
}

impl QuotientMap {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    /// Quotient dimension.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn section(&self) -> &Matrix {
        &self.section
    }

    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.kernel.reduce(v);
        self.free.iter().map(|&f| r[f].clone()).collect()
    }

    pub fn lift(&self, c: &[Scalar]) -> Vec<Scalar> {
        let mut v = vector::zeros(self.ambient_dim);
        for (x, &f) in c.iter().zip(&self.free) {
            v[f] = x.clone();
        }
        v
    }

    /// Matrix of the map induced on quotients by `m : Kⁿ → Kᵖ`, given a
    /// quotient of the target. The caller must ensure `m` maps the kernel
    /// into `target.kernel`; see [`QuotientMap::descends`].
    pub fn induced(&self, m: &Matrix, target: &QuotientMap) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self
            .free
            .iter()
            .map(|&f| target.project(&m.apply(&vector::unit(self.ambient_dim, f))))
            .collect();
        Matrix::from_columns(target.dim(), &cols).expect("projected columns have quotient length")
    }

    pub fn descends(&self, m: &Matrix, target: &QuotientMap) -> bool {
        self.kernel.basis().row_vectors().all(|r| target.kernel.contains(&m.apply(r)))
    }
}

/// Quotient of `Kⁿ` by `s`.
pub fn quotient(ambient_dim: usize, s: &Subspace) -> Result<QuotientMap> {
    if s.ambient_dim() != ambient_dim {
        return Err(Error::DimensionMismatch { expected: ambient_dim, found: s.ambient_dim() });
    }
    let mut is_pivot = vec![false; ambient_dim];
    for &p in s.pivots() {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ambient_dim).filter(|&j| !is_pivot[j]).collect();
    let q = free.len();
    let mut projection = Matrix::zeros(q, ambient_dim);
    let mut section = Matrix::zeros(ambient_dim, q);
    for (k, &f) in free.iter().enumerate() {
        projection[(k, f)] = Scalar::one();
        section[(f, k)] = Scalar::one();
        for (row, &p) in s.basis().row_vectors().zip(s.pivots()) {
            projection[(k, p)] = -&row[f];
        }
    }
    Ok(QuotientMap { ambient_dim, kernel: s.clone(), projection, section, free })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::kernel;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from(x)).collect()
    }

    #[test]
    fn quotient_examples() {
        let s = Subspace::span(2, vec![v(&[1, 0])]).unwrap();
        let q = quotient(2, &s).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.projection().apply(&v(&[1, 0])), v(&[0]));
        assert_eq!(q.project(&v(&[5, 3])), v(&[3]));

        let q = quotient(4, &Subspace::zero(4)).unwrap();
        assert!(q.projection().is_identity() && q.section().is_identity());

        let s = Subspace::span(3, vec![v(&[1, 1, 0])]).unwrap();
        let q = quotient(3, &s).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(vector::is_zero(&q.projection().apply(&v(&[1, 1, 0]))));
        assert!(quotient(2, &s).is_err());
    }

    #[test]
    fn set_equality_is_basis_equality() {
        let a = Subspace::span(3, vec![v(&[1, 2, 0]), v(&[0, 1, 1])]).unwrap();
        let b = Subspace::span(3, vec![v(&[1, 3, 1]), v(&[2, 4, 0]), v(&[1, 1, -1])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn join_and_intersect() {
        let a = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let b = Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(a.join(&b).unwrap(), Subspace::full(3));
        assert_eq!(a.intersect(&b).unwrap(), Subspace::span(3, vec![v(&[0, 1, 0])]).unwrap());
        assert!(a.intersect(&b).unwrap().is_subspace_of(&a));
    }

    #[test]
    fn induced_map() {
        // swap descends to K²/span{(1,1)} as −1, since e₁ ≡ −e₂ there
        let s = Subspace::span(2, vec![v(&[1, 1])]).unwrap();
        let q = quotient(2, &s).unwrap();
        let swap = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert!(q.descends(&swap, &q));
        assert_eq!(q.induced(&swap, &q), Matrix::from_ints(&[&[-1]]));
        let proj = Matrix::from_ints(&[&[1, 0], &[0, 0]]);
        assert!(!q.descends(&proj, &q));
    }

    fn arb_rows() -> impl Strategy<Value = (usize, Vec<Vec<Scalar>>)> {
        (1usize..6).prop_flat_map(|n| {
            let row = prop::collection::vec((-2i64..3, -1i64..2), n)
                .prop_map(|r| r.into_iter().map(|(a, b)| Scalar::gaussian(a, b)).collect::<Vec<_>>());
            (Just(n), prop::collection::vec(row, 0..5))
        })
    }

    proptest! {
        #[test]
        fn quotient_round_trip((n, rows) in arb_rows(), probe in prop::collection::vec(-3i64..4, 6)) {
            let s = Subspace::span(n, rows).unwrap();
            let q = quotient(n, &s).unwrap();
            prop_assert_eq!(q.dim(), n - s.dim());
            prop_assert!((&q.projection().clone() * q.section()).is_identity());
            let x = v(&probe[..n]);
            let back = q.section().apply(&q.projection().apply(&x));
            prop_assert!(vector::is_zero(&q.projection().apply(&vector::sub(&x, &back))));
            prop_assert_eq!(q.project(&x), q.projection().apply(&x));
            for r in s.basis_vectors() {
                prop_assert!(vector::is_zero(&q.projection().apply(&r)));
            }
            // the projection annihilates exactly the subspace
            prop_assert_eq!(kernel(q.projection()), s);
        }
    }
}
