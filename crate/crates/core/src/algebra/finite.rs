use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exactlin::{kernel, vector, Matrix, Scalar, Subspace};

/// Shared handle to an algebra. Elements, modules and forms hold one.
pub type Algebra = Arc<FiniteAlgebra>;

/// A finite-dimensional associative unital algebra over ℚ(i), presented by
/// its structure constants `e_i·e_j = Σ_k c^k_ij e_k`.
pub struct FiniteAlgebra {
    dim: usize,
    label: String,
    names: Vec<String>,
    // sparse products, entry i*dim+j lists the nonzero (k, c^k_ij)
    table: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
    // coeffs(a*) = S·conj(coeffs(a))
    involution: Option<Matrix>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    centre: OnceLock<Subspace>,
    derivations: OnceLock<Subspace>,
    generators: OnceLock<Vec<usize>>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.table == other.table
            && self.unit == other.unit
            && self.involution == other.involution
    }
}

impl Eq for FiniteAlgebra {}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAlgebra({}, dim {})", self.label, self.dim)
    }
}

/// Same algebra, by identity or by content.
pub fn same_algebra(a: &Algebra, b: &Algebra) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FiniteAlgebra {
    /// Builds and validates an algebra from a dense structure tensor
    /// `structure[i][j] = e_i·e_j` as a coefficient vector.
    pub fn from_structure(
        label: impl Into<String>,
        names: Vec<String>,
        structure: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        involution: Option<Matrix>,
    ) -> Result<Algebra> {
        let m = structure.len();
        if names.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: names.len() });
        }
        let mut table = Vec::with_capacity(m * m);
        for row in &structure {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: row.len() });
            }
            for prod in row {
                if prod.len() != m {
                    return Err(Error::DimensionMismatch { expected: m, found: prod.len() });
                }
                table.push(prod.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect());
            }
        }
        let alg = Self::assemble(label.into(), names, table, unit, involution)?;
        alg.check_axioms()?;
        Ok(Arc::new(alg))
    }

    fn assemble(
        label: String,
        names: Vec<String>,
        table: Vec<Vec<(usize, Scalar)>>,
        unit: Vec<Scalar>,
        involution: Option<Matrix>,
    ) -> Result<Self> {
        let m = names.len();
        if unit.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: unit.len() });
        }
        if let Some(s) = &involution {
            if s.rows() != m || s.cols() != m {
                return Err(Error::DimensionMismatch { expected: m, found: s.rows() });
            }
        }
        let mut left = vec![Matrix::zeros(m, m); m];
        let mut right = vec![Matrix::zeros(m, m); m];
        for i in 0..m {
            for j in 0..m {
                for (k, c) in &table[i * m + j] {
                    left[i][(*k, j)] = c.clone();
                    right[j][(*k, i)] = c.clone();
                }
            }
        }
        Ok(FiniteAlgebra {
            dim: m,
            label,
            names,
            table,
            unit,
            involution,
            left,
            right,
            centre: OnceLock::new(),
            derivations: OnceLock::new(),
            generators: OnceLock::new(),
        })
    }

    /// Associativity and unit laws on all basis triples, plus the
    /// involution axioms when an involution is present.
    pub fn check_axioms(&self) -> Result<()> {
        let m = self.dim;
        for i in 0..m {
            let ei = vector::unit(m, i);
            if self.mul(&self.unit, &ei) != ei || self.mul(&ei, &self.unit) != ei {
                return Err(Error::AlgebraAxiom(format!("unit law fails on {}", self.names[i])));
            }
            for j in 0..m {
                let eij = self.basis_product_vec(i, j);
                for k in 0..m {
                    let lhs = self.right_mult(k).apply(&eij);
                    let rhs = self.left_mult(i).apply(&self.basis_product_vec(j, k));
                    if lhs != rhs {
                        return Err(Error::AlgebraAxiom(format!(
                            "associativity fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        if self.involution.is_some() {
            if self.star(&self.unit)? != self.unit {
                return Err(Error::AlgebraAxiom("1* != 1".into()));
            }
            for i in 0..m {
                let ei = vector::unit(m, i);
                let si = self.star(&ei)?;
                if self.star(&si)? != ei {
                    return Err(Error::AlgebraAxiom(format!("a** != a for {}", self.names[i])));
                }
                for j in 0..m {
                    let sj = self.star(&vector::unit(m, j))?;
                    if self.star(&self.basis_product_vec(i, j))? != self.mul(&sj, &si) {
                        return Err(Error::AlgebraAxiom(format!(
                            "(ab)* != b*a* for ({}, {})",
                            self.names[i], self.names[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn involution(&self) -> Option<&Matrix> {
        self.involution.as_ref()
    }

    pub fn has_involution(&self) -> bool {
        self.involution.is_some()
    }

    /// `c^k_ij`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.table[i * self.dim + j].iter().find(|(l, _)| *l == k).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Nonzero terms of `e_i·e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim + j]
    }

    pub fn basis_product_vec(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut v = vector::zeros(self.dim);
        for (k, c) in self.basis_product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    /// Product of coefficient vectors.
    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let m = self.dim;
        let mut out = vector::zeros(m);
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let ab = ai * bj;
                for (k, c) in &self.table[i * m + j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// `ab − ba`.
    pub fn commutator(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        vector::sub(&self.mul(a, b), &self.mul(b, a))
    }

    /// Matrix of `x ↦ e_i·x`.
    pub fn left_mult(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Matrix of `x ↦ x·e_j`.
    pub fn right_mult(&self, j: usize) -> &Matrix {
        &self.right[j]
    }

    pub fn left_mult_by(&self, a: &[Scalar]) -> Matrix {
        combine(&self.left, a, self.dim)
    }

    pub fn right_mult_by(&self, a: &[Scalar]) -> Matrix {
        combine(&self.right, a, self.dim)
    }

    pub fn star(&self, a: &[Scalar]) -> Result<Vec<Scalar>> {
        let s = self.involution.as_ref().ok_or_else(|| Error::NoInvolution(self.label.clone()))?;
        Ok(s.apply(&vector::conj(a)))
    }

    /// First non-commuting basis pair, if any.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        let m = self.dim;
        (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).find(|&(i, j)| self.table[i * m + j] != self.table[j * m + i])
    }

    pub fn is_commutative(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    pub fn require_commutative(&self) -> Result<()> {
        match self.noncommuting_pair() {
            None => Ok(()),
            Some((i, j)) => Err(Error::NonCommutative { label: self.label.clone(), i, j }),
        }
    }

    /// The centre `{z : z·e_i = e_i·z ∀i}`, cached.
    pub fn centre(&self) -> &Subspace {
        self.centre.get_or_init(|| {
            let m = self.dim;
            let blocks: Vec<Matrix> = (0..m).map(|i| &self.right[i] - &self.left[i]).collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            kernel(&Matrix::vstack(&refs).expect("equal widths"))
        })
    }

    /// Basis indices generating the algebra together with the unit, chosen
    /// greedily, cached. Module maps need only commute with these.
    pub fn generating_indices(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let m = self.dim;
            let mut chosen = Vec::new();
            let mut sub = Subspace::span(m, vec![self.unit.clone()]).expect("unit has length m");
            for i in 0..m {
                if sub.contains(&vector::unit(m, i)) {
                    continue;
                }
                chosen.push(i);
                let mut span = sub.basis_vectors();
                span.push(vector::unit(m, i));
                sub = Subspace::span(m, span).expect("length m");
                // close under products with the generators
                loop {
                    let mut grown = sub.basis_vectors();
                    for v in sub.basis().row_vectors() {
                        for &g in &chosen {
                            grown.push(self.left[g].apply(v));
                            grown.push(self.right[g].apply(v));
                        }
                    }
                    let next = Subspace::span(m, grown).expect("length m");
                    if next.dim() == sub.dim() {
                        break;
                    }
                    sub = next;
                }
            }
            chosen
        })
    }

    pub fn is_central(&self, z: &[Scalar]) -> bool {
        self.centre().contains(z)
    }

    /// Derivations as a subspace of row-major vectorized `m×m` matrices,
    /// cached. Leibniz `U(e_i e_j) = U(e_i)e_j + e_i U(e_j)` is linear in U.
    pub fn derivation_space(&self) -> &Subspace {
        self.derivations.get_or_init(|| {
            let m = self.dim;
            let mut rows = Vec::with_capacity(m * m * m);
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let mut row = vector::zeros(m * m);
                        // U(e_i e_j)_k = Σ_l U_kl c^l_ij
                        for (l, c) in self.basis_product(i, j) {
                            row[k * m + *l] += c;
                        }
                        // (U(e_i) e_j)_k = Σ_l U_li c^k_lj
                        for l in 0..m {
                            let c = &self.right[j][(k, l)];
                            if !c.is_zero() {
                                row[l * m + i] -= c;
                            }
                            // (e_i U(e_j))_k = Σ_l c^k_il U_lj
                            let c = &self.left[i][(k, l)];
                            if !c.is_zero() {
                                row[l * m + j] -= c;
                            }
                        }
                        if !vector::is_zero(&row) {
                            rows.push(row);
                        }
                    }
                }
            }
            kernel(&Matrix::from_rows(m * m, rows).expect("rows have width m²"))
        })
    }
}

fn combine(mats: &[Matrix], a: &[Scalar], m: usize) -> Matrix {
    let mut out = Matrix::zeros(m, m);
    for (mat, c) in mats.iter().zip(a).filter(|(_, c)| !c.is_zero()) {
        out = &out + &mat.scale(c);
    }
    out
}

/// `M_n(ℚ(i))` with basis `E_jk` at index `j·n + k` and `a* = a†`.
pub fn matrix_algebra(n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::InvalidParameter("matrix algebra needs n >= 1".into()));
    }
    let m = n * n;
    let mut table = vec![Vec::new(); m * m];
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                table[(j * n + k) * m + (k * n + l)] = vec![(j * n + l, Scalar::one())];
            }
        }
    }
    let mut unit = vector::zeros(m);
    for j in 0..n {
        unit[j * n + j] = Scalar::one();
    }
    let involution = Matrix::from_fn(m, m, |r, c| {
        let (j, k) = (c / n, c % n);
        if r == k * n + j {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let names = (0..m).map(|c| format!("E{}{}", c / n + 1, c % n + 1)).collect();
    Ok(Arc::new(FiniteAlgebra::assemble(format!("M{n}"), names, table, unit, Some(involution))?))
}

/// Functions on `N` points: `e_i e_j = δ_ij e_i`, conjugation as involution.
pub fn function_algebra(n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::InvalidParameter("function algebra needs N >= 1".into()));
    }
    let mut table = vec![Vec::new(); n * n];
    for i in 0..n {
        table[i * n + i] = vec![(i, Scalar::one())];
    }
    let unit = vec![Scalar::one(); n];
    let names = (0..n).map(|i| format!("e{}", i + 1)).collect();
    Ok(Arc::new(FiniteAlgebra::assemble(format!("C({n})"), names, table, unit, Some(Matrix::identity(n)))?))
}

/// `K[x]/(x^N)` with basis `1, x, …, x^{N−1}` and `x* = x`.
pub fn truncated_polynomial_algebra(n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncated polynomial algebra needs N >= 1".into()));
    }
    let mut table = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n - i {
            table[i * n + j] = vec![(i + j, Scalar::one())];
        }
    }
    let unit = vector::unit(n, 0);
    let names = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    Ok(Arc::new(FiniteAlgebra::assemble(format!("K[x]/x^{n}"), names, table, unit, Some(Matrix::identity(n)))?))
}

/// `A ⊕ B` with block products; the involution exists iff both factors have one.
pub fn direct_sum(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    let (ma, mb) = (a.dim(), b.dim());
    let m = ma + mb;
    let mut table = vec![Vec::new(); m * m];
    for i in 0..ma {
        for j in 0..ma {
            table[i * m + j] = a.basis_product(i, j).to_vec();
        }
    }
    for i in 0..mb {
        for j in 0..mb {
            table[(ma + i) * m + ma + j] = b.basis_product(i, j).iter().map(|(k, c)| (ma + k, c.clone())).collect();
        }
    }
    let mut unit = a.unit().to_vec();
    unit.extend_from_slice(b.unit());
    let involution = match (a.involution(), b.involution()) {
        (Some(s), Some(t)) => Some(Matrix::block_diag(&[s, t])),
        _ => None,
    };
    let names = a
        .basis_names()
        .iter()
        .map(|s| format!("{s}⊕0"))
        .chain(b.basis_names().iter().map(|s| format!("0⊕{s}")))
        .collect();
    Ok(Arc::new(FiniteAlgebra::assemble(format!("{}⊕{}", a.label(), b.label()), names, table, unit, involution)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(alg: &FiniteAlgebra, i: usize) -> Vec<Scalar> {
        vector::unit(alg.dim(), i)
    }

    #[test]
    fn shipped_algebras_satisfy_axioms() {
        for alg in [
            matrix_algebra(1).unwrap(),
            matrix_algebra(2).unwrap(),
            matrix_algebra(3).unwrap(),
            function_algebra(3).unwrap(),
            truncated_polynomial_algebra(4).unwrap(),
            direct_sum(&matrix_algebra(2).unwrap(), &function_algebra(1).unwrap()).unwrap(),
        ] {
            alg.check_axioms().unwrap();
        }
        assert!(matrix_algebra(0).is_err());
        assert!(function_algebra(0).is_err());
        assert!(truncated_polynomial_algebra(0).is_err());
    }

    #[test]
    fn elementary_matrix_products() {
        let a = matrix_algebra(2).unwrap();
        // E12·E21 = E11, E21·E12 = E22
        assert_eq!(a.mul(&e(&a, 1), &e(&a, 2)), e(&a, 0));
        assert_eq!(a.mul(&e(&a, 2), &e(&a, 1)), e(&a, 3));
        assert_eq!(matrix_algebra(1).unwrap().dim(), 1);
    }

    #[test]
    fn function_and_polynomial_products() {
        let f = function_algebra(2).unwrap();
        assert!(vector::is_zero(&f.mul(&e(&f, 0), &e(&f, 1))));
        assert_eq!(f.mul(&e(&f, 0), &e(&f, 0)), e(&f, 0));
        let t = truncated_polynomial_algebra(3).unwrap();
        assert!(vector::is_zero(&t.mul(&e(&t, 1), &e(&t, 2))));
        assert_eq!(t.mul(&e(&t, 1), &e(&t, 1)), e(&t, 2));
    }

    #[test]
    fn centres() {
        assert_eq!(function_algebra(4).unwrap().centre().dim(), 4);
        let m2 = matrix_algebra(2).unwrap();
        assert_eq!(m2.centre().dim(), 1);
        assert!(m2.centre().contains(m2.unit()));
        let s = direct_sum(&m2, &m2).unwrap();
        assert_eq!(s.centre().dim(), 2);
    }

    #[test]
    fn from_structure_rejects_nonassociative() {
        // e0 unit, e1·e1 = e0 is fine (K[x]/(x²−1)); e1·e1 via a bad unit is not
        let one = Scalar::one();
        let z = Scalar::zero();
        let good = vec![
            vec![vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]],
            vec![vec![z.clone(), one.clone()], vec![one.clone(), z.clone()]],
        ];
        let names = vec!["1".to_string(), "y".to_string()];
        assert!(FiniteAlgebra::from_structure("K[y]/(y²−1)", names.clone(), good.clone(), vector::unit(2, 0), None).is_ok());
        assert!(FiniteAlgebra::from_structure("bad unit", names, good, vector::unit(2, 1), None).is_err());
    }

    #[test]
    fn involution_is_adjoint_on_matrices() {
        let a = matrix_algebra(2).unwrap();
        let x = vec![Scalar::gaussian(1, 2), Scalar::gaussian(0, 1), Scalar::from(3), Scalar::gaussian(-1, 0)];
        let xs = a.star(&x).unwrap();
        assert_eq!(xs, vec![Scalar::gaussian(1, -2), Scalar::from(3), Scalar::gaussian(0, -1), Scalar::from(-1)]);
    }

    #[test]
    fn commutativity_detection() {
        assert!(truncated_polynomial_algebra(3).unwrap().is_commutative());
        let m2 = matrix_algebra(2).unwrap();
        assert!(matches!(m2.require_commutative(), Err(Error::NonCommutative { .. })));
    }
}
