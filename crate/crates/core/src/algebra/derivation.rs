use super::{same_algebra, Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::exactlin::{vector, Matrix, Scalar};

/// A derivation `u(ab) = u(a)b + a·u(b)`, stored as the matrix of its action
/// on coefficient vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    algebra: Algebra,
    action: Matrix,
}

impl Derivation {
    /// Validates Leibniz on every basis pair.
    pub fn new(algebra: &Algebra, action: Matrix) -> Result<Self> {
        let m = algebra.dim();
        if action.rows() != m || action.cols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: action.rows() });
        }
        let u = Derivation { algebra: algebra.clone(), action };
        match u.leibniz_defect() {
            None => Ok(u),
            Some((i, j)) => Err(Error::NotADerivation { i, j }),
        }
    }

    pub fn zero(algebra: &Algebra) -> Self {
        let m = algebra.dim();
        Derivation { algebra: algebra.clone(), action: Matrix::zeros(m, m) }
    }

    /// `ad b : a ↦ ba − ab`.
    pub fn inner(b: &AlgebraElement) -> Self {
        let alg = b.algebra();
        let action = &alg.left_mult_by(b.coeffs()) - &alg.right_mult_by(b.coeffs());
        Derivation { algebra: alg.clone(), action }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn action(&self) -> &Matrix {
        &self.action
    }

    pub fn apply(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.action.apply(a)
    }

    pub fn apply_to(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if !same_algebra(&self.algebra, a.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        AlgebraElement::new(&self.algebra, self.apply(a.coeffs()))
    }

    /// First basis pair violating Leibniz.
    pub fn leibniz_defect(&self) -> Option<(usize, usize)> {
        let alg = &self.algebra;
        let m = alg.dim();
        let images: Vec<Vec<Scalar>> = (0..m).map(|i| self.action.col(i)).collect();
        for i in 0..m {
            for j in 0..m {
                let lhs = self.apply(&alg.basis_product_vec(i, j));
                let rhs = vector::add(&alg.right_mult(j).apply(&images[i]), &alg.left_mult(i).apply(&images[j]));
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.action.is_zero()
    }

    /// Row-major entries, the coordinates used by [`FiniteAlgebra::derivation_space`](super::FiniteAlgebra::derivation_space).
    pub fn vectorized(&self) -> Vec<Scalar> {
        self.action.entries().to_vec()
    }

    fn check(&self, other: &Derivation) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// `[u, v] = u∘v − v∘u`.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        Ok(Derivation { algebra: self.algebra.clone(), action: self.action.commutator(&other.action) })
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        Ok(Derivation { algebra: self.algebra.clone(), action: &self.action + &other.action })
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        Ok(Derivation { algebra: self.algebra.clone(), action: &self.action - &other.action })
    }

    pub fn scale(&self, s: &Scalar) -> Derivation {
        Derivation { algebra: self.algebra.clone(), action: self.action.scale(s) }
    }

    /// `(z·u)(a) = z·u(a)` for central `z`, again a derivation.
    pub fn central_multiple(&self, z: &[Scalar]) -> Result<Derivation> {
        if !self.algebra.is_central(z) {
            return Err(Error::InvalidParameter("multiplier is not central".into()));
        }
        let action = self.algebra.left_mult_by(z).try_mul(&self.action)?;
        Ok(Derivation { algebra: self.algebra.clone(), action })
    }

    /// `u*(a) = (u(a*))*`; with `a* = S·conj(a)` its matrix is `S·conj(U)·conj(S)`.
    pub fn star(&self) -> Result<Derivation> {
        let s = self.algebra.involution().ok_or_else(|| Error::NoInvolution(self.algebra.label().into()))?;
        let action = s.try_mul(&self.action.conj())?.try_mul(&s.conj())?;
        Ok(Derivation { algebra: self.algebra.clone(), action })
    }
}

/// Basis of the derivation Lie algebra, from the Leibniz linear system.
pub fn derivation_basis(algebra: &Algebra) -> Vec<Derivation> {
    let m = algebra.dim();
    algebra
        .derivation_space()
        .basis_vectors()
        .into_iter()
        .map(|v| Derivation { algebra: algebra.clone(), action: Matrix::from_fn(m, m, |i, j| v[i * m + j].clone()) })
        .collect()
}

pub fn lie_bracket(u: &Derivation, v: &Derivation) -> Result<Derivation> {
    u.bracket(v)
}

pub fn inner_derivation(b: &AlgebraElement) -> Derivation {
    Derivation::inner(b)
}

pub fn derivation_involution(u: &Derivation) -> Result<Derivation> {
    u.star()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, matrix_algebra, su_basis, truncated_polynomial_algebra};
    use crate::exactlin::Subspace;

    #[test]
    fn derivation_dimensions() {
        for n in 1..=3 {
            assert_eq!(derivation_basis(&matrix_algebra(n).unwrap()).len(), n * n - 1);
        }
        assert!(derivation_basis(&function_algebra(3).unwrap()).is_empty());
        assert_eq!(derivation_basis(&truncated_polynomial_algebra(3).unwrap()).len(), 2);
    }

    #[test]
    fn polynomial_derivations_are_x_and_x2_times_d() {
        // ∂ itself fails: ∂(x·x²) = 3x² ≠ 0 = ∂(x³)
        let a = truncated_polynomial_algebra(3).unwrap();
        let sp = a.derivation_space();
        let x_d = Matrix::from_ints(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let x2_d = Matrix::from_ints(&[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        let d = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 2], &[0, 0, 0]]);
        let span = Subspace::span(9, vec![x_d.entries().to_vec(), x2_d.entries().to_vec()]).unwrap();
        assert_eq!(sp, &span);
        assert_eq!(Derivation::new(&a, d).unwrap_err(), Error::NotADerivation { i: 1, j: 2 });
    }

    #[test]
    fn inner_derivations() {
        let a = matrix_algebra(2).unwrap();
        assert!(Derivation::inner(&AlgebraElement::one(&a)).is_zero());
        let e11 = AlgebraElement::basis(&a, 0);
        let e12 = AlgebraElement::basis(&a, 1);
        // E11·E12 − E12·E11 = E12
        assert_eq!(Derivation::inner(&e11).apply_to(&e12).unwrap(), e12);
        let z = AlgebraElement::scalar(&a, &Scalar::from(7));
        assert!(Derivation::inner(&z).is_zero());
    }

    #[test]
    fn brackets_and_involution() {
        let su = su_basis(2).unwrap();
        let alg = su.algebra().clone();
        let (f, g, h) = (&su.elements()[0], &su.elements()[1], &su.elements()[2]);
        let (uf, ug) = (Derivation::inner(f), Derivation::inner(g));
        let two_h = h.scale(&Scalar::from(2));
        assert_eq!(uf.bracket(&ug).unwrap(), Derivation::inner(&two_h));
        assert!(uf.bracket(&uf).unwrap().is_zero());
        for u in derivation_basis(&alg) {
            assert_eq!(u.star().unwrap().star().unwrap(), u);
        }
        for e in su.elements() {
            let u = Derivation::inner(e);
            assert_eq!(u.star().unwrap(), u);
        }
        assert!(Derivation::zero(&alg).star().unwrap().is_zero());
    }

    #[test]
    fn jacobi_on_m2() {
        let basis = derivation_basis(&matrix_algebra(2).unwrap());
        for u in &basis {
            for v in &basis {
                for w in &basis {
                    let j = u
                        .bracket(&v.bracket(w).unwrap())
                        .unwrap()
                        .add(&v.bracket(&w.bracket(u).unwrap()).unwrap())
                        .unwrap()
                        .add(&w.bracket(&u.bracket(v).unwrap()).unwrap())
                        .unwrap();
                    assert!(j.is_zero());
                }
            }
        }
    }
}
