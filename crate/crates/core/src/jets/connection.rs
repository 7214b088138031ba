use rand::Rng;

use super::{jet1_of_module_iso, Jet1TensorIso, JetModule, OneForms};
use crate::algebra::{
    derivation_basis, hom_space, is_morphism, tensor_modules, unvectorize, Algebra, Derivation, FiniteModule,
    ModuleKind, TensorProduct,
};
use crate::algebra::intertwiner_constraints;
use crate::error::{Error, Result};
use crate::exactlin::{kernel, solve, vector, Matrix, Scalar, Subspace};

/// Sample count for the randomized splitting/Leibniz round trips.
pub const DEFAULT_CONNECTION_SAMPLES: usize = 50;

/// A connection on `P`: a covariant differential `∇ : P → O¹⊗P` and,
/// when known, the splitting `Γ : P → J¹(P)` with `J¹ = Γ + ∇`.
#[derive(Clone, Debug)]
pub struct CommutativeConnection {
    pub module: FiniteModule,
    pub splitting: Option<Matrix>,
    pub covariant: Matrix,
}

/// Everything needed to pass between splittings of
/// `0 → O¹⊗P → J¹(P) → P → 0` and Leibniz operators.
#[derive(Clone, Debug)]
pub struct ConnectionSpace {
    pub iso: Jet1TensorIso,
    /// `O¹⊗P`.
    pub tensor: TensorProduct,
    /// `O¹⊗P → J¹(P)`, injective onto `ker π¹₀`.
    iota: Matrix,
    jet_map: Matrix,
    pi: Matrix,
    particular: Matrix,
    directions: Subspace,
}

pub fn connection_space(p: &FiniteModule) -> Result<ConnectionSpace> {
    ConnectionSpace::new(p)
}

impl ConnectionSpace {
    pub fn new(p: &FiniteModule) -> Result<Self> {
        let alg = p.algebra().clone();
        let iso = jet1_of_module_iso(&alg, p)?;
        let base = iso.jet.base().clone();
        let tensor = tensor_modules(&iso.forms.module, &base)?;
        let (np, nj, no) = (base.dim(), iso.jet.dim(), iso.forms.dim());

        let incl = iso.forms.inclusion();
        let mut amb = Matrix::zeros(nj, no * np);
        for o in 0..no {
            for v in 0..np {
                let t = iso.tensor.project(&vector::tensor(&incl.col(o), &vector::unit(np, v)));
                for (r, x) in iso.from_tensor.apply(&t).into_iter().enumerate() {
                    amb[(r, o * np + v)] = x;
                }
            }
        }
        if tensor.quotient.kernel().basis().row_vectors().any(|r| !vector::is_zero(&amb.apply(r))) {
            return Err(Error::ModuleAxiom("O¹⊗P → J¹(P) is not balanced".into()));
        }
        let iota = &amb * tensor.quotient.section();
        let pi = iso.jet.projection_to_base();
        if iota.rank() != tensor.module.dim() || !(&pi * &iota).is_zero() || iota.rank() + np != nj {
            return Err(Error::ModuleAxiom("0 → O¹⊗P → J¹(P) → P → 0 is not exact".into()));
        }

        // Γ row-major: aΓ = Γa and π¹₀Γ = id.
        let jm = iso.jet.module();
        let pairs: Vec<(&Matrix, &Matrix)> = base.left_generators().iter().zip(jm.left_generators()).collect();
        let homogeneous = intertwiner_constraints(&pairs, np, nj);
        let mut sect_rows = Vec::new();
        let mut rhs = Vec::new();
        for r in 0..np {
            for c in 0..np {
                let mut row = vector::zeros(nj * np);
                for k in 0..nj {
                    row[k * np + c] = pi[(r, k)].clone();
                }
                sect_rows.push(row);
                rhs.push(if r == c { Scalar::one() } else { Scalar::zero() });
            }
        }
        let sect = Matrix::from_rows(nj * np, sect_rows)?;
        let system = Matrix::vstack(&[&homogeneous, &sect])?;
        let mut b = vector::zeros(homogeneous.rows());
        b.extend(rhs);
        let particular = solve(&system, &b)?
            .ok_or_else(|| Error::NotASplitting("the sequence has no left-module splitting".into()))?;
        let particular = unvectorize(&particular, nj, np);
        let directions = kernel(&Matrix::vstack(&[&homogeneous, &sect])?);
        let jet_map = iso.jet.jet_map();
        Ok(ConnectionSpace { iso, tensor, iota, jet_map, pi, particular, directions })
    }

    pub fn algebra(&self) -> &Algebra {
        self.iso.jet.algebra()
    }

    pub fn base(&self) -> &FiniteModule {
        self.iso.jet.base()
    }

    pub fn jet(&self) -> &JetModule {
        &self.iso.jet
    }

    pub fn forms(&self) -> &OneForms {
        &self.iso.forms
    }

    /// `O¹⊗P → J¹(P)`.
    pub fn iota(&self) -> &Matrix {
        &self.iota
    }

    /// Differences of splittings, as vectorized maps `P → J¹(P)`.
    pub fn directions(&self) -> &Subspace {
        &self.directions
    }

    /// One left-module splitting, found by an exact solve.
    pub fn particular_splitting(&self) -> &Matrix {
        &self.particular
    }

    /// Why `Γ` fails to be a left-module splitting, if it does.
    pub fn splitting_defect(&self, gamma: &Matrix) -> Option<String> {
        if gamma.rows() != self.jet().dim() || gamma.cols() != self.base().dim() {
            return Some("wrong shape".into());
        }
        if !is_morphism(self.base(), self.jet().module(), gamma) {
            return Some("Γ(ap) ≠ aΓ(p)".into());
        }
        if !(&self.pi * gamma).is_identity() {
            return Some("π¹₀∘Γ ≠ id".into());
        }
        None
    }

    /// First basis pair `(a, p)` on which `∇(ap) = d¹a⊗p + a∇(p)` fails.
    pub fn leibniz_defect(&self, nabla: &Matrix) -> Option<(usize, usize)> {
        let base = self.base();
        let (m, np) = (self.algebra().dim(), base.dim());
        for i in 0..m {
            let e = vector::unit(m, i);
            let da = self.forms().d1(&e);
            let lt = self.tensor.module.left_action(&e).expect("commutative algebra");
            for v in 0..np {
                let p = vector::unit(np, v);
                let lhs = nabla.apply(&base.left_generators()[i].apply(&p));
                let rhs = vector::add(&self.tensor.class(&da, &p), &lt.apply(&nabla.apply(&p)));
                if lhs != rhs {
                    return Some((i, v));
                }
            }
        }
        None
    }

    /// `∇^Γ = J¹ − Γ`, read back through `O¹⊗P ≅ ker π¹₀`.
    pub fn connection_from_splitting(&self, gamma: &Matrix) -> Result<CommutativeConnection> {
        if let Some(why) = self.splitting_defect(gamma) {
            return Err(Error::NotASplitting(why));
        }
        let diff = &self.jet_map - gamma;
        let cols = (0..diff.cols())
            .map(|v| solve(&self.iota, &diff.col(v))?.ok_or_else(|| Error::NotASplitting("J¹p − Γp ∉ ker π¹₀".into())))
            .collect::<Result<Vec<_>>>()?;
        let covariant = Matrix::from_columns(self.tensor.module.dim(), &cols)?;
        if let Some((i, v)) = self.leibniz_defect(&covariant) {
            return Err(Error::LeibnizViolation(format!("∇^Γ on (e{i}, p{v})")));
        }
        Ok(CommutativeConnection { module: self.base().clone(), splitting: Some(gamma.clone()), covariant })
    }

    /// `Γ = J¹ − ∇` for `∇` obeying the Leibniz rule.
    pub fn splitting_from_connection(&self, nabla: &Matrix) -> Result<CommutativeConnection> {
        if nabla.rows() != self.tensor.module.dim() || nabla.cols() != self.base().dim() {
            return Err(Error::DimensionMismatch { expected: self.tensor.module.dim(), found: nabla.rows() });
        }
        if let Some((i, v)) = self.leibniz_defect(nabla) {
            return Err(Error::LeibnizViolation(format!("∇(e{i}·p{v}) ≠ d¹e{i}⊗p{v} + e{i}∇(p{v})")));
        }
        let gamma = &self.jet_map - &(&self.iota * nabla);
        if let Some(why) = self.splitting_defect(&gamma) {
            return Err(Error::NotASplitting(why));
        }
        Ok(CommutativeConnection { module: self.base().clone(), splitting: Some(gamma), covariant: nabla.clone() })
    }

    /// A splitting with small random integer offsets along [`Self::directions`].
    pub fn random_splitting(&self, rng: &mut impl Rng) -> Matrix {
        let (nj, np) = (self.jet().dim(), self.base().dim());
        let mut v = self.particular.entries().to_vec();
        for dir in self.directions.basis().row_vectors() {
            let c = Scalar::from(rng.gen_range(-3i64..=3));
            vector::axpy(&mut v, &c, dir);
        }
        unvectorize(&v, nj, np)
    }

    pub fn random_connection(&self, rng: &mut impl Rng) -> Result<CommutativeConnection> {
        self.connection_from_splitting(&self.random_splitting(rng))
    }

    /// The module map `P → O¹⊗P` separating two splittings.
    pub fn difference(&self, g1: &Matrix, g2: &Matrix) -> Result<Matrix> {
        let diff = g1 - g2;
        let cols = (0..diff.cols())
            .map(|v| solve(&self.iota, &diff.col(v))?.ok_or_else(|| Error::NotASplitting("difference leaves ker π¹₀".into())))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(self.tensor.module.dim(), &cols)
    }

    /// Pair a connection with derivations through `Hom_A(O¹, A) ≅ d(A)`.
    pub fn derivation_law(&self) -> Result<DerivationLaw> {
        DerivationLaw::new(self)
    }
}

/// `τ ↦ ∇_τ`: contraction of `∇ : P → O¹⊗P` against `h_τ ∈ Hom_A(O¹, A)`
/// with `h_τ(d¹a) = τ(a)`.
#[derive(Clone, Debug)]
pub struct DerivationLaw {
    algebra: Algebra,
    base: FiniteModule,
    d1: Matrix,
    /// Basis maps `O¹ → A`, each `m × dim O¹`.
    homs: Vec<Matrix>,
    /// Columns `vec(h∘d¹)` for the basis maps.
    pairing: Matrix,
    /// `O¹⊗_K P` relations, used to contract on classes.
    section: Matrix,
    balancing: Subspace,
    tensor_dim: usize,
}

impl DerivationLaw {
    fn new(space: &ConnectionSpace) -> Result<Self> {
        let alg = space.algebra().clone();
        let m = alg.dim();
        let o1 = &space.forms().module;
        let a = FiniteModule::regular(&alg, ModuleKind::CentralBimodule);
        let hom = hom_space(o1, &a)?;
        let homs: Vec<Matrix> = hom.basis_vectors().iter().map(|v| unvectorize(v, m, o1.dim())).collect();
        let d1 = space.forms().d1_matrix();
        let cols: Vec<Vec<Scalar>> = homs.iter().map(|h| (h * &d1).entries().to_vec()).collect();
        let pairing = Matrix::from_columns(m * m, &cols)?;
        let ders = alg.derivation_space();
        let image = Subspace::image(&pairing);
        if pairing.rank() != homs.len() || &image != ders {
            return Err(Error::DualityDegenerate(format!(
                "Hom_A(O¹, A) has dim {} with image of dim {} in d(A) of dim {}",
                homs.len(),
                image.dim(),
                ders.dim()
            )));
        }
        Ok(DerivationLaw {
            algebra: alg,
            base: space.base().clone(),
            d1,
            homs,
            pairing,
            section: space.tensor.quotient.section().clone(),
            balancing: space.tensor.quotient.kernel().clone(),
            tensor_dim: space.tensor.module.dim(),
        })
    }

    /// `dim Hom_A(O¹, A)`.
    pub fn hom_dim(&self) -> usize {
        self.homs.len()
    }

    /// `h_τ : O¹ → A` with `h_τ∘d¹ = τ`.
    pub fn pairing_of(&self, tau: &Derivation) -> Result<Matrix> {
        let coords = solve(&self.pairing, &tau.vectorized())?
            .ok_or_else(|| Error::DualityDegenerate("derivation outside the image of Hom_A(O¹, A)".into()))?;
        let m = self.algebra.dim();
        let mut h = Matrix::zeros(m, self.d1.rows());
        for (c, b) in coords.iter().zip(&self.homs) {
            h = &h + &b.scale(c);
        }
        Ok(h)
    }

    /// `∇_τ = (h_τ ⊗ id)∘∇ : P → P`.
    pub fn covariant_derivative(&self, conn: &CommutativeConnection, tau: &Derivation) -> Result<Matrix> {
        if conn.covariant.rows() != self.tensor_dim {
            return Err(Error::DimensionMismatch { expected: self.tensor_dim, found: conn.covariant.rows() });
        }
        let h = self.pairing_of(tau)?;
        let np = self.base.dim();
        let no = h.cols();
        let mut amb = Matrix::zeros(np, no * np);
        for o in 0..no {
            let act = self.base.left_action(&h.col(o))?;
            for v in 0..np {
                for w in 0..np {
                    amb[(w, o * np + v)] = act[(w, v)].clone();
                }
            }
        }
        if self.balancing.basis().row_vectors().any(|r| !vector::is_zero(&amb.apply(r))) {
            return Err(Error::ModuleAxiom("contraction O¹⊗P → P is not balanced".into()));
        }
        Ok(&(&amb * &self.section) * &conn.covariant)
    }

    /// `∇_τ` for each derivation in the basis of `d(A)`.
    pub fn family(&self, conn: &CommutativeConnection) -> Result<Vec<(Derivation, Matrix)>> {
        derivation_basis(&self.algebra)
            .into_iter()
            .map(|t| {
                let op = self.covariant_derivative(conn, &t)?;
                Ok((t, op))
            })
            .collect()
    }

    /// First `(f, s)` where `∇_τ(fs) = τ(f)s + f∇_τ s` fails.
    pub fn rule_defect(&self, tau: &Derivation, op: &Matrix) -> Option<(usize, usize)> {
        let m = self.algebra.dim();
        let np = self.base.dim();
        for f in 0..m {
            let ef = vector::unit(m, f);
            let lf = &self.base.left_generators()[f];
            let ltf = self.base.left_action(&tau.apply(&ef)).expect("commutative algebra");
            for v in 0..np {
                let s = vector::unit(np, v);
                let lhs = op.apply(&lf.apply(&s));
                let rhs = vector::add(&ltf.apply(&s), &lf.apply(&op.apply(&s)));
                if lhs != rhs {
                    return Some((f, v));
                }
            }
        }
        None
    }
}

/// Checks that each `∇` in `family` is a derivation of the commutative
/// algebra `s` with `∇∘ι = ι∘τ` along the unital embedding `ι : A → S`.
pub fn ring_connection_check(s: &Algebra, embedding: &Matrix, family: &[(Derivation, Matrix)]) -> Result<bool> {
    s.require_commutative()?;
    if embedding.rows() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: embedding.rows() });
    }
    for (tau, nabla) in family {
        let a = tau.algebra();
        if embedding.cols() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: embedding.cols() });
        }
        if embedding.apply(a.unit()) != s.unit() {
            return Err(Error::InvalidParameter("embedding is not unital".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = embedding.apply(&a.basis_product_vec(i, j));
                let rhs = s.mul(&embedding.col(i), &embedding.col(j));
                if lhs != rhs {
                    return Err(Error::InvalidParameter("embedding is not multiplicative".into()));
                }
            }
        }
        if Derivation::new(s, nabla.clone()).is_err() {
            return Ok(false);
        }
        if &(nabla * embedding) != &(embedding * tau.action()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, truncated_polynomial_algebra};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_connection_on_the_algebra_is_d1() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let space = connection_space(&FiniteModule::regular(&a, ModuleKind::Left)).unwrap();
        let i1 = space.jet().injection();
        let conn = space.connection_from_splitting(&i1).unwrap();
        // O¹⊗A ≅ O¹ via w⊗a ↦ w·a
        for i in 0..3 {
            let e = vector::unit(3, i);
            let expected = space.tensor.class(&space.forms().d1(&e), a.unit());
            assert_eq!(conn.covariant.apply(&e), expected);
        }
        let law = space.derivation_law().unwrap();
        for (tau, op) in law.family(&conn).unwrap() {
            assert_eq!(&op, tau.action());
        }
    }

    #[test]
    fn round_trips_for_sampled_connections() {
        let a = truncated_polynomial_algebra(3).unwrap();
        for rank in [1, 2] {
            let space = connection_space(&FiniteModule::free(&a, ModuleKind::Left, rank)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..DEFAULT_CONNECTION_SAMPLES {
                let g = space.random_splitting(&mut rng);
                let conn = space.connection_from_splitting(&g).unwrap();
                let back = space.splitting_from_connection(&conn.covariant).unwrap();
                assert_eq!(back.splitting.as_ref(), Some(&g));
            }
        }
    }

    #[test]
    fn splittings_form_an_affine_space() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let space = connection_space(&FiniteModule::free(&a, ModuleKind::Left, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (g1, g2) = (space.random_splitting(&mut rng), space.random_splitting(&mut rng));
        let diff = space.difference(&g1, &g2).unwrap();
        assert!(is_morphism(space.base(), &space.tensor.module, &diff));
        let shifted = &g2 + &(space.iota() * &diff);
        assert_eq!(shifted, g1);
    }

    #[test]
    fn bad_inputs_are_reported() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let space = connection_space(&FiniteModule::regular(&a, ModuleKind::Left)).unwrap();
        let zero = Matrix::zeros(space.jet().dim(), 3);
        assert!(matches!(space.connection_from_splitting(&zero), Err(Error::NotASplitting(_))));
        let zero_nabla = Matrix::zeros(space.tensor.module.dim(), 3);
        assert!(matches!(space.splitting_from_connection(&zero_nabla), Err(Error::LeibnizViolation(_))));
    }

    #[test]
    fn derivation_law_obeys_the_rule() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let space = connection_space(&FiniteModule::free(&a, ModuleKind::Left, 2)).unwrap();
        let law = space.derivation_law().unwrap();
        assert_eq!(law.hom_dim(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let conn = space.random_connection(&mut rng).unwrap();
        for (tau, op) in law.family(&conn).unwrap() {
            assert_eq!(law.rule_defect(&tau, &op), None);
            // ∇_{xτ} = x∇_τ
            let x = vector::unit(3, 1);
            let xt = Derivation::new(&a, &a.left_mult_by(&x) * tau.action()).unwrap();
            let lx = space.base().left_action(&x).unwrap();
            assert_eq!(law.covariant_derivative(&conn, &xt).unwrap(), &lx * &op);
        }
    }

    #[test]
    fn function_algebra_duality_is_trivial() {
        let a = function_algebra(3).unwrap();
        let space = connection_space(&FiniteModule::regular(&a, ModuleKind::Left)).unwrap();
        assert_eq!(space.tensor.module.dim(), 0);
        assert_eq!(space.derivation_law().unwrap().hom_dim(), 0);
    }

    fn y_to_x_squared() -> (Algebra, Algebra, Matrix) {
        let s = truncated_polynomial_algebra(3).unwrap();
        let a = truncated_polynomial_algebra(2).unwrap();
        let emb = Matrix::from_ints(&[&[1, 0], &[0, 0], &[0, 1]]);
        (s, a, emb)
    }

    #[test]
    fn ring_connections() {
        let s = truncated_polynomial_algebra(3).unwrap();
        let taus = derivation_basis(&s);
        let id = Matrix::identity(3);
        let fam: Vec<(Derivation, Matrix)> = taus.iter().map(|t| (t.clone(), t.action().clone())).collect();
        assert!(ring_connection_check(&s, &id, &fam).unwrap());

        // S ⊇ K: any derivation family is compatible
        let k = function_algebra(1).unwrap();
        let unit = Matrix::from_ints(&[&[1], &[0], &[0]]);
        let fam: Vec<(Derivation, Matrix)> = taus.iter().map(|t| (Derivation::zero(&k), t.action().clone())).collect();
        assert!(ring_connection_check(&s, &unit, &fam).unwrap());

        // y ↦ x², τ = y∂_y: ∇_τ(x) = x/2 + βx²
        let (s, a, emb) = y_to_x_squared();
        let tau = derivation_basis(&a).pop().unwrap();
        assert_eq!(tau.apply(&[Scalar::zero(), Scalar::one()]), vector::unit(2, 1));
        let nabla = |beta: i64| {
            let mut u = Matrix::zeros(3, 3);
            u[(1, 1)] = Scalar::from_ratio(1, 2);
            u[(2, 1)] = Scalar::from(beta);
            u[(2, 2)] = Scalar::one();
            u
        };
        let (n1, n2) = (nabla(0), nabla(5));
        assert!(ring_connection_check(&s, &emb, &[(tau.clone(), n1.clone()), (tau.clone(), n2.clone())]).unwrap());
        let diff = &n1 - &n2;
        assert!((&diff * &emb).is_zero());
        assert!(Derivation::new(&s, diff).is_ok());
        assert!(!ring_connection_check(&s, &emb, &[(tau, Matrix::zeros(3, 3))]).unwrap());
    }
}
