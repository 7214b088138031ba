use super::{matrix_algebra, Algebra, AlgebraElement, Derivation};
use crate::error::{Error, Result};
use crate::exactlin::{solve, vector, Matrix, Scalar};

/// Integer anti-Hermitian basis of `su(n) ⊂ M_n` with its structure
/// constants `[ε_r, ε_q] = Σ_s c^s_rq ε_s`.
///
/// Order: `F_jk = E_jk − E_kj` for `j < k`, then `G_jk = i(E_jk + E_kj)`,
/// then `H_l = i(E_ll − E_{l+1,l+1})`.
#[derive(Clone, Debug)]
pub struct SuBasis {
    n: usize,
    algebra: Algebra,
    elements: Vec<AlgebraElement>,
    names: Vec<String>,
    // c^s_rq at (r·d + q)·d + s
    c: Vec<Scalar>,
}

impl SuBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `n² − 1`.
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `c^s_rq`.
    pub fn c(&self, s: usize, r: usize, q: usize) -> &Scalar {
        let d = self.dim();
        &self.c[(r * d + q) * d + s]
    }

    /// `u_r = ad ε_r`.
    pub fn inner_derivations(&self) -> Vec<Derivation> {
        self.elements.iter().map(Derivation::inner).collect()
    }
}

pub fn su_basis(n: usize) -> Result<SuBasis> {
    if n < 2 {
        return Err(Error::InvalidParameter("su(n) needs n >= 2".into()));
    }
    let algebra = matrix_algebra(n)?;
    let m = n * n;
    let idx = |j: usize, k: usize| j * n + k;
    let i = Scalar::i();
    let mut elements = Vec::new();
    let mut names = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            let mut v = vector::zeros(m);
            v[idx(j, k)] = Scalar::one();
            v[idx(k, j)] = Scalar::from(-1);
            elements.push(v);
            names.push(format!("F{}{}", j + 1, k + 1));
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut v = vector::zeros(m);
            v[idx(j, k)] = i.clone();
            v[idx(k, j)] = i.clone();
            elements.push(v);
            names.push(format!("G{}{}", j + 1, k + 1));
        }
    }
    for l in 0..n - 1 {
        let mut v = vector::zeros(m);
        v[idx(l, l)] = i.clone();
        v[idx(l + 1, l + 1)] = -&i;
        elements.push(v);
        names.push(format!("H{}", l + 1));
    }
    let d = elements.len();
    let frame = Matrix::from_columns(m, &elements)?;
    let mut c = vec![Scalar::zero(); d * d * d];
    for r in 0..d {
        for q in 0..d {
            let br = algebra.commutator(&elements[r], &elements[q]);
            let coords = solve(&frame, &br)?.expect("su(n) is closed under the commutator");
            for (s, x) in coords.into_iter().enumerate() {
                c[(r * d + q) * d + s] = x;
            }
        }
    }
    let elements = elements.into_iter().map(|v| AlgebraElement::new(&algebra, v)).collect::<Result<_>>()?;
    Ok(SuBasis { n, algebra, elements, names, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::derivation_basis;
    use crate::exactlin::Subspace;

    #[test]
    fn f_g_bracket_is_two_h() {
        let su = su_basis(2).unwrap();
        assert_eq!(su.names(), ["F12", "G12", "H1"]);
        assert_eq!(su.c(2, 0, 1), &Scalar::from(2));
        assert!(su.c(0, 0, 1).is_zero() && su.c(1, 0, 1).is_zero());
        assert!(su_basis(1).is_err());
    }

    #[test]
    fn structure_constants_reproduce_brackets() {
        for n in [2, 3] {
            let su = su_basis(n).unwrap();
            let d = su.dim();
            assert_eq!(d, n * n - 1);
            for r in 0..d {
                for q in 0..d {
                    let lhs = su.elements()[r].commutator(&su.elements()[q]).unwrap();
                    let mut rhs = AlgebraElement::zero(su.algebra());
                    for s in 0..d {
                        rhs = &rhs + &su.elements()[s].scale(su.c(s, r, q));
                        assert_eq!(su.c(s, r, q), &-su.c(s, q, r));
                    }
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn jacobi_su3() {
        let su = su_basis(3).unwrap();
        let d = su.dim();
        for r in 0..d {
            for q in 0..d {
                for s in 0..d {
                    for t in 0..d {
                        let mut acc = Scalar::zero();
                        for m in 0..d {
                            acc += su.c(m, r, q) * su.c(t, m, s);
                            acc += su.c(m, q, s) * su.c(t, m, r);
                            acc += su.c(m, s, r) * su.c(t, m, q);
                        }
                        assert!(acc.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn elements_are_anti_hermitian_and_trace_free() {
        let su = su_basis(3).unwrap();
        for e in su.elements() {
            assert_eq!(e.star().unwrap(), -e);
            let tr: Scalar = (0..3).map(|j| e.coeffs()[j * 3 + j].clone()).sum();
            assert!(tr.is_zero());
        }
    }

    #[test]
    fn all_derivations_are_inner() {
        for n in [2, 3] {
            let su = su_basis(n).unwrap();
            let inner = Subspace::span(n.pow(4), su.inner_derivations().iter().map(Derivation::vectorized).collect()).unwrap();
            let all = Subspace::span(n.pow(4), derivation_basis(su.algebra()).iter().map(Derivation::vectorized).collect()).unwrap();
            assert_eq!(inner, all);
        }
    }
}
