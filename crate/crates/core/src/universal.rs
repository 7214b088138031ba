//! The universal differential calculus `Ω*A`.
//!
//! Degree-`k` forms live in `A^{⊗(k+1)}` with row-major multi-indices
//! `(i₀, …, i_k) ↦ ((i₀·m + i₁)·m + …)`. The product contracts the last
//! factor of one form with the first factor of the other, and `δ` acts on
//! every degree by the Amitsur coboundary
//! `δ(a₀⊗…⊗a_k) = Σ_i (−1)^i a₀⊗…⊗1⊗a_i⊗…⊗a_k` (unit inserted at slot `i`),
//! which restricts to `δ(a₀δa₁⋯δa_k) = δa₀δa₁⋯δa_k` on `Ω^k`.

use std::sync::OnceLock;

use crate::algebra::{same_algebra, Algebra, AlgebraElement, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{kernel, vector, Matrix, Scalar, Subspace};

pub const DEFAULT_MAX_DEGREE: usize = 3;

/// An element of `A^{⊗(degree+1)}`; genuine forms lie in the monomial span.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniversalForm {
    algebra: Algebra,
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl UniversalForm {
    pub fn new(algebra: &Algebra, degree: usize, coeffs: Vec<Scalar>) -> Result<Self> {
        let n = algebra.dim().pow(degree as u32 + 1);
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: coeffs.len() });
        }
        Ok(UniversalForm { algebra: algebra.clone(), degree, coeffs })
    }

    pub fn zero(algebra: &Algebra, degree: usize) -> Self {
        UniversalForm { algebra: algebra.clone(), degree, coeffs: vector::zeros(algebra.dim().pow(degree as u32 + 1)) }
    }

    pub fn from_element(a: &AlgebraElement) -> Self {
        UniversalForm { algebra: a.algebra().clone(), degree: 0, coeffs: a.coeffs().to_vec() }
    }

    /// Pure tensor `a₀ ⊗ … ⊗ a_k` of coefficient vectors.
    pub fn pure(algebra: &Algebra, factors: &[&[Scalar]]) -> Result<Self> {
        let (first, rest) = factors.split_first().ok_or_else(|| Error::InvalidParameter("no tensor factors".into()))?;
        let coeffs = rest.iter().fold(first.to_vec(), |acc, f| vector::tensor(&acc, f));
        UniversalForm::new(algebra, factors.len() - 1, coeffs)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        vector::is_zero(&self.coeffs)
    }

    fn compatible(&self, other: &UniversalForm) -> Result<()> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, other: &UniversalForm) -> Result<UniversalForm> {
        self.compatible(other)?;
        Ok(UniversalForm { coeffs: vector::add(&self.coeffs, &other.coeffs), ..self.clone() })
    }

    pub fn sub(&self, other: &UniversalForm) -> Result<UniversalForm> {
        self.compatible(other)?;
        Ok(UniversalForm { coeffs: vector::sub(&self.coeffs, &other.coeffs), ..self.clone() })
    }

    pub fn scale(&self, s: &Scalar) -> UniversalForm {
        UniversalForm { coeffs: vector::scale(&self.coeffs, s), ..self.clone() }
    }

    /// Nonzero entries with their multi-indices.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        let m = self.algebra.dim();
        let k = self.degree;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(idx, c)| (multi_index(idx, m, k + 1), c))
    }

    /// Contracted concatenation `(…⊗x_p)·(y₀⊗…) = …⊗x_p y₀⊗…`.
    pub fn mul(&self, other: &UniversalForm) -> Result<UniversalForm> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let alg = &self.algebra;
        let m = alg.dim();
        let (p, q) = (self.degree, other.degree);
        let tail = m.pow(q as u32);
        let mut out = vector::zeros(m.pow((p + q + 1) as u32));
        for (ix, x) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (head, i) = (ix / m, ix % m);
            for (jy, y) in other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (j, rest) = (jy / tail, jy % tail);
                let xy = x * y;
                for (k, c) in alg.basis_product(i, j) {
                    out[(head * m + k) * tail + rest] += &xy * c;
                }
            }
        }
        Ok(UniversalForm { algebra: alg.clone(), degree: p + q, coeffs: out })
    }

    /// `b·w·c` for algebra elements `b`, `c`.
    pub fn bimodule_action(&self, b: &[Scalar], c: &[Scalar]) -> Result<UniversalForm> {
        let bf = UniversalForm::new(&self.algebra, 0, b.to_vec())?;
        let cf = UniversalForm::new(&self.algebra, 0, c.to_vec())?;
        bf.mul(self)?.mul(&cf)
    }

    /// Amitsur coboundary; equals the universal `δ` on forms.
    pub fn delta(&self) -> UniversalForm {
        let alg = &self.algebra;
        let m = alg.dim();
        let k = self.degree;
        let unit: Vec<(usize, &Scalar)> = alg.unit().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = vector::zeros(m.pow(k as u32 + 2));
        for (ix, x) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for slot in 0..=k + 1 {
                let after = m.pow((k + 1 - slot) as u32);
                let (hi, lo) = (ix / after, ix % after);
                let sign_neg = slot % 2 == 1;
                for (u, cu) in &unit {
                    let target = (hi * m + u) * after + lo;
                    let t = x * *cu;
                    if sign_neg {
                        out[target] -= t;
                    } else {
                        out[target] += t;
                    }
                }
            }
        }
        UniversalForm { algebra: alg.clone(), degree: k + 1, coeffs: out }
    }

    /// Reversal-conjugation `(a₀⊗…⊗a_k)* = a_k*⊗…⊗a₀*`; gives `(δa)* = −δ(a*)`.
    pub fn star(&self) -> Result<UniversalForm> {
        let alg = &self.algebra;
        let s = alg.involution().ok_or_else(|| Error::NoInvolution(alg.label().into()))?;
        let m = alg.dim();
        let k = self.degree;
        let cols: Vec<Vec<(usize, Scalar)>> =
            (0..m).map(|j| (0..m).filter(|&i| !s[(i, j)].is_zero()).map(|i| (i, s[(i, j)].clone())).collect()).collect();
        let mut out = vector::zeros(self.coeffs.len());
        for (idx, c) in self.terms() {
            let c = c.conj();
            // expand ⊗_t S e_{idx[k−t]}
            let mut partial: Vec<(usize, Scalar)> = vec![(0, c)];
            for t in 0..=k {
                let j = idx[k - t];
                partial = partial
                    .into_iter()
                    .flat_map(|(pos, coef)| cols[j].iter().map(move |(i, sij)| (pos * m + i, &coef * sij)))
                    .collect();
            }
            for (pos, coef) in partial {
                out[pos] += coef;
            }
        }
        Ok(UniversalForm { algebra: alg.clone(), degree: k, coeffs: out })
    }
}

pub(crate) fn multi_index(mut idx: usize, m: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in (0..len).rev() {
        out[slot] = idx % m;
        idx /= m;
    }
    out
}

/// Matrix of the multiplication map `μ¹ : A⊗A → A`.
pub fn multiplication_map(algebra: &FiniteAlgebra) -> Matrix {
    let m = algebra.dim();
    let mut mu = Matrix::zeros(m, m * m);
    for i in 0..m {
        for j in 0..m {
            for (k, c) in algebra.basis_product(i, j) {
                mu[(*k, i * m + j)] = c.clone();
            }
        }
    }
    mu
}

/// `Ω¹A = ker μ¹ ⊂ A⊗A`.
pub fn universal_one_forms(algebra: &Algebra) -> Subspace {
    kernel(&multiplication_map(algebra))
}

/// `δa = 1⊗a − a⊗1`.
pub fn udelta(a: &AlgebraElement) -> UniversalForm {
    UniversalForm::from_element(a).delta()
}

/// `a₀·δa₁⋯δa_k`.
pub fn monomial(a0: &AlgebraElement, rest: &[AlgebraElement]) -> Result<UniversalForm> {
    let mut acc = UniversalForm::from_element(a0);
    for a in rest {
        acc = acc.mul(&udelta(a))?;
    }
    Ok(acc)
}

pub fn uproduct(w: &UniversalForm, w2: &UniversalForm) -> Result<UniversalForm> {
    w.mul(w2)
}

pub fn bimodule_action(b: &AlgebraElement, w: &UniversalForm, c: &AlgebraElement) -> Result<UniversalForm> {
    if !same_algebra(b.algebra(), w.algebra()) || !same_algebra(c.algebra(), w.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    w.bimodule_action(b.coeffs(), c.coeffs())
}

/// The universal calculus of an algebra up to a maximum degree, with the
/// monomial span of each degree computed once on demand.
#[derive(Debug)]
pub struct UniversalCalculus {
    algebra: Algebra,
    max_degree: usize,
    spans: Vec<OnceLock<Subspace>>,
}

impl UniversalCalculus {
    pub fn new(algebra: &Algebra) -> Self {
        UniversalCalculus::with_max_degree(algebra, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(algebra: &Algebra, max_degree: usize) -> Self {
        UniversalCalculus { algebra: algebra.clone(), max_degree, spans: (0..=max_degree).map(|_| OnceLock::new()).collect() }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.max_degree {
            return Err(Error::DegreeBound { degree: k, bound: self.max_degree });
        }
        Ok(())
    }

    /// Spanning monomials `e_{i₀}·δe_{i₁}⋯δe_{i_k}` with every `i_j` (j ≥ 1) running
    /// over a complement of the unit, which already spans `Ω^k`.
    pub fn spanning_monomials(&self, k: usize) -> Result<Vec<UniversalForm>> {
        self.check_degree(k)?;
        let alg = &self.algebra;
        let m = alg.dim();
        // a basis index whose removal leaves a complement of K·1
        let skip = (0..m).find(|&i| !alg.unit()[i].is_zero()).expect("unit is nonzero");
        let deltas: Vec<UniversalForm> =
            (0..m).filter(|&i| i != skip).map(|i| udelta(&AlgebraElement::basis(alg, i))).collect();
        let mut layer: Vec<UniversalForm> =
            (0..m).map(|i| UniversalForm::from_element(&AlgebraElement::basis(alg, i))).collect();
        for _ in 0..k {
            layer = layer.iter().flat_map(|w| deltas.iter().map(move |d| w.mul(d).expect("same algebra"))).collect();
        }
        Ok(layer)
    }

    /// The monomial span `Ω^k ⊂ A^{⊗(k+1)}`, dimension `m(m−1)^k`.
    pub fn span(&self, k: usize) -> Result<&Subspace> {
        self.check_degree(k)?;
        Ok(self.spans[k].get_or_init(|| {
            let n = self.algebra.dim().pow(k as u32 + 1);
            let vectors = self.spanning_monomials(k).expect("degree checked").into_iter().map(|w| w.coeffs).collect();
            Subspace::span(n, vectors).expect("monomials have ambient length")
        }))
    }

    pub fn contains(&self, w: &UniversalForm) -> Result<bool> {
        if !same_algebra(&self.algebra, w.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.span(w.degree())?.contains(&w.coeffs))
    }

    /// The left-module closure of `{δe_i}` inside `A⊗A`.
    pub fn left_closure_of_deltas(&self) -> Subspace {
        let alg = &self.algebra;
        let m = alg.dim();
        let mut vectors = Vec::new();
        for j in 0..m {
            let d = udelta(&AlgebraElement::basis(alg, j));
            for i in 0..m {
                vectors.push(UniversalForm::from_element(&AlgebraElement::basis(alg, i)).mul(&d).expect("same algebra").coeffs);
            }
        }
        Subspace::span(m * m, vectors).expect("ambient A⊗A")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, matrix_algebra, truncated_polynomial_algebra};

    fn basis(a: &Algebra, i: usize) -> AlgebraElement {
        AlgebraElement::basis(a, i)
    }

    #[test]
    fn one_form_dimensions() {
        assert_eq!(universal_one_forms(&function_algebra(1).unwrap()).dim(), 0);
        assert_eq!(universal_one_forms(&function_algebra(2).unwrap()).dim(), 2);
        assert_eq!(universal_one_forms(&matrix_algebra(2).unwrap()).dim(), 12);
    }

    #[test]
    fn delta_examples() {
        let a = matrix_algebra(2).unwrap();
        assert!(udelta(&AlgebraElement::one(&a)).is_zero());
        let f = function_algebra(2).unwrap();
        let d = udelta(&basis(&f, 0));
        // 1⊗e1 − e1⊗1 = e1⊗e1 + e2⊗e1 − e1⊗e1 − e1⊗e2 = e2⊗e1 − e1⊗e2
        assert_eq!(d.coeffs(), &[Scalar::zero(), Scalar::from(-1), Scalar::one(), Scalar::zero()][..]);
        assert!(vector::is_zero(&multiplication_map(&f).apply(d.coeffs())));
    }

    #[test]
    fn monomial_examples() {
        let a = matrix_algebra(2).unwrap();
        let x = basis(&a, 1);
        assert_eq!(monomial(&x, &[]).unwrap(), UniversalForm::from_element(&x));
        assert!(monomial(&AlgebraElement::one(&a), &[AlgebraElement::one(&a)]).unwrap().is_zero());
        // a·δb = a⊗b − ab⊗1, by direct tensor expansion
        let b = basis(&a, 2);
        let ab = &x * &b;
        let one = AlgebraElement::one(&a);
        let direct = UniversalForm::pure(&a, &[x.coeffs(), b.coeffs()])
            .unwrap()
            .sub(&UniversalForm::pure(&a, &[ab.coeffs(), one.coeffs()]).unwrap())
            .unwrap();
        assert_eq!(monomial(&x, &[b]).unwrap(), direct);
    }

    #[test]
    fn product_rule_examples() {
        let a = matrix_algebra(2).unwrap();
        let (x, y, z) = (basis(&a, 1), basis(&a, 2), basis(&a, 0));
        let one = AlgebraElement::one(&a);
        // (a δb)(1 δc) = a δb δc
        let lhs = monomial(&x, &[y.clone()]).unwrap().mul(&monomial(&one, &[z.clone()]).unwrap()).unwrap();
        assert_eq!(lhs, monomial(&x, &[y.clone(), z.clone()]).unwrap());
        // (δa)·b = δ(ab) − a δb
        let lhs = udelta(&x).mul(&UniversalForm::from_element(&y)).unwrap();
        let rhs = udelta(&(&x * &y)).sub(&monomial(&x, &[y.clone()]).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // (a₀δa₁)(b₀δb₁) = a₀δ(a₁b₀)δb₁ − a₀a₁δb₀δb₁
        let (a0, a1, b0, b1) = (basis(&a, 3), x.clone(), y.clone(), z.clone());
        let lhs = monomial(&a0, &[a1.clone()]).unwrap().mul(&monomial(&b0, &[b1.clone()]).unwrap()).unwrap();
        let rhs = monomial(&a0, &[&a1 * &b0, b1.clone()])
            .unwrap()
            .sub(&monomial(&(&a0 * &a1), &[b0, b1]).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bimodule_action_formula() {
        let a = matrix_algebra(2).unwrap();
        let (b, x, c) = (basis(&a, 1), basis(&a, 3), basis(&a, 2));
        assert_eq!(
            bimodule_action(&AlgebraElement::one(&a), &udelta(&x), &AlgebraElement::one(&a)).unwrap(),
            udelta(&x)
        );
        // b(δa)c = b⊗ac − ba⊗c
        let lhs = bimodule_action(&b, &udelta(&x), &c).unwrap();
        let rhs = UniversalForm::pure(&a, &[b.coeffs(), (&x * &c).coeffs()])
            .unwrap()
            .sub(&UniversalForm::pure(&a, &[(&b * &x).coeffs(), c.coeffs()]).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn span_dimensions() {
        for alg in [function_algebra(2).unwrap(), truncated_polynomial_algebra(3).unwrap(), matrix_algebra(2).unwrap()] {
            let uc = UniversalCalculus::new(&alg);
            let m = alg.dim();
            for k in 0..=2 {
                assert_eq!(uc.span(k).unwrap().dim(), m * (m - 1).pow(k as u32));
            }
            assert_eq!(uc.span(1).unwrap(), &universal_one_forms(&alg));
            assert_eq!(uc.left_closure_of_deltas(), universal_one_forms(&alg));
        }
        let uc = UniversalCalculus::with_max_degree(&function_algebra(2).unwrap(), 2);
        assert_eq!(uc.span(3).unwrap_err(), Error::DegreeBound { degree: 3, bound: 2 });
    }

    #[test]
    fn delta_is_a_graded_derivation_and_squares_to_zero() {
        let a = matrix_algebra(2).unwrap();
        let w = monomial(&basis(&a, 1), &[basis(&a, 2)]).unwrap();
        let v = monomial(&basis(&a, 3), &[basis(&a, 1)]).unwrap();
        assert!(w.delta().delta().is_zero());
        let lhs = w.mul(&v).unwrap().delta();
        let rhs = w.delta().mul(&v).unwrap().sub(&w.mul(&v.delta()).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // δ(a₀δa₁) = δa₀δa₁
        let d = monomial(&AlgebraElement::one(&a), &[basis(&a, 1), basis(&a, 2)]).unwrap();
        assert_eq!(w.delta(), d);
    }

    #[test]
    fn involution_reverses() {
        let a = matrix_algebra(2).unwrap();
        let x = AlgebraElement::new(&a, vec![Scalar::gaussian(1, 1), Scalar::from(2), Scalar::zero(), Scalar::i()]).unwrap();
        let lhs = udelta(&x).star().unwrap();
        let rhs = udelta(&x.star().unwrap()).scale(&Scalar::from(-1));
        assert_eq!(lhs, rhs);
        let w = monomial(&basis(&a, 1), &[basis(&a, 2), x.clone()]).unwrap();
        assert_eq!(w.star().unwrap().star().unwrap(), w);
        let v = monomial(&x, &[basis(&a, 0)]).unwrap();
        // (wv)* = v*w*
        assert_eq!(w.mul(&v).unwrap().star().unwrap(), v.star().unwrap().mul(&w.star().unwrap()).unwrap());
    }

    #[test]
    fn commutative_omega_is_not_central() {
        let t = truncated_polynomial_algebra(3).unwrap();
        let x = basis(&t, 1);
        let dx = udelta(&x);
        let left = UniversalForm::from_element(&x).mul(&dx).unwrap();
        let right = dx.mul(&UniversalForm::from_element(&x)).unwrap();
        assert_ne!(left, right);
    }
}
