//! Jet modules `J^k(P) = (A⊗P)/μ^{k+1}` over commutative algebras, the
//! module of differentials `O¹`, differential operators, and the commutative
//! notions of connection.
//!
//! Coordinates on `A⊗P` put `e_i⊗p_v` at index `i·dim P + v`.

mod connection;
mod diffop;

pub use connection::{
    connection_space, ring_connection_check, CommutativeConnection, ConnectionSpace, DerivationLaw,
    DEFAULT_CONNECTION_SAMPLES,
};
pub use diffop::{delta_operator, diffop_space, diffop_to_hom, hom_to_diffop, is_diffop, jet_hom_dim, DiffOperator};

use crate::algebra::{side_generators, Algebra, Closure, FiniteModule, ModuleKind, Side};
use crate::error::{Error, Result};
use crate::exactlin::{kernel, quotient, vector, Matrix, QuotientMap, Scalar, Subspace};
use crate::universal::multiplication_map;

/// `P` re-presented as a left module; over a commutative algebra every kind
/// of module carries one left action.
pub fn left_module_of(p: &FiniteModule) -> Result<FiniteModule> {
    let alg = p.algebra();
    alg.require_commutative()?;
    let m = alg.dim();
    let left = (0..m).map(|i| p.left_action(&vector::unit(m, i))).collect::<Result<Vec<_>>>()?;
    let right = side_generators(alg, Side::Centre).iter().map(|z| p.left_action(z)).collect::<Result<Vec<_>>>()?;
    FiniteModule::new(alg, ModuleKind::Left, p.dim(), left, right, p.label().to_string())
}

/// `J^k(P)`: the quotient of `A⊗P` by `μ^{k+1}` with its two left structures,
/// `b(a⊗p) = ba⊗p` and `b⋆(a⊗p) = a⊗bp`.
#[derive(Clone, Debug)]
pub struct JetModule {
    base: FiniteModule,
    order: usize,
    mu: Subspace,
    q: QuotientMap,
    module: FiniteModule,
    star: Vec<Matrix>,
}

pub fn jet_module(p: &FiniteModule, order: usize) -> Result<JetModule> {
    JetModule::new(p, order)
}

impl JetModule {
    pub fn new(p: &FiniteModule, order: usize) -> Result<Self> {
        let base = left_module_of(p)?;
        let alg = base.algebra().clone();
        let (m, np) = (alg.dim(), base.dim());
        let id_p = Matrix::identity(np);
        let id_a = Matrix::identity(m);
        let lp: Vec<Matrix> = base.left_generators().to_vec();
        let left: Vec<Matrix> = (0..m).map(|i| alg.left_mult(i).kron(&id_p)).collect();
        let star: Vec<Matrix> = lp.iter().map(|l| id_a.kron(l)).collect();
        let ambient =
            FiniteModule::new_unchecked(&alg, ModuleKind::Left, m * np, left.clone(), left.clone(), "A⊗P");

        // δ^b is linear in b, so iterating δ^{e_i} over basis indices spans
        // every δ^{b₀}∘⋯∘δ^{b_k}(1⊗p).
        let deltas: Vec<Matrix> = left.iter().zip(&star).map(|(l, s)| l - s).collect();
        let mut level = Subspace::span(m * np, (0..np).map(|v| vector::tensor(alg.unit(), &vector::unit(np, v))).collect())?;
        for _ in 0..=order {
            let images = level.basis().row_vectors().flat_map(|w| deltas.iter().map(move |d| d.apply(w))).collect();
            level = Subspace::span(m * np, images)?;
        }
        let mu = ambient.closure(level.basis_vectors(), Closure::Left)?;
        let (module, q) = ambient.quotient_module(&mu)?;
        if let Some(i) = star.iter().position(|s| !q.descends(s, &q)) {
            return Err(Error::ModuleAxiom(format!("⋆-action of e{i} does not preserve μ^{}", order + 1)));
        }
        let star: Vec<Matrix> = star.iter().map(|s| q.induced(s, &q)).collect();
        let module = module.with_label(format!("J^{order}({})", base.label()));
        Ok(JetModule { base, order, mu, q, module, star })
    }

    pub fn algebra(&self) -> &Algebra {
        self.base.algebra()
    }

    /// `P` as a left module.
    pub fn base(&self) -> &FiniteModule {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// `μ^{k+1} ⊂ A⊗P`.
    pub fn mu(&self) -> &Subspace {
        &self.mu
    }

    pub fn quotient(&self) -> &QuotientMap {
        &self.q
    }

    /// `J^k(P)` with the structure `b(a⊗p) = ba⊗p`.
    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    /// `J^k(P)` with the ⋆-structure `b⋆(a⊗p) = a⊗bp`.
    pub fn star_module(&self) -> FiniteModule {
        let alg = self.algebra();
        FiniteModule::new_unchecked(alg, ModuleKind::Left, self.dim(), self.star.clone(), self.star.clone(), "J⋆")
    }

    pub fn left_action(&self, b: &[Scalar]) -> Matrix {
        self.module.left_action(b).expect("commutative algebra acts on either side")
    }

    pub fn star_action(&self, b: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for (s, c) in self.star.iter().zip(b).filter(|(_, c)| !c.is_zero()) {
            out = &out + &s.scale(c);
        }
        out
    }

    /// Class of `a⊗p mod μ^{k+1}`.
    pub fn class(&self, a: &[Scalar], p: &[Scalar]) -> Vec<Scalar> {
        self.q.project(&vector::tensor(a, p))
    }

    /// `J^k : P → J^k(P)`, `p ↦ 1⊗p mod μ^{k+1}`.
    pub fn jet_map(&self) -> Matrix {
        let np = self.base.dim();
        let cols: Vec<Vec<Scalar>> =
            (0..np).map(|v| self.class(self.algebra().unit(), &vector::unit(np, v))).collect();
        Matrix::from_columns(self.dim(), &cols).expect("jet columns")
    }

    /// `π^k_0 : a⊗p ↦ ap`.
    pub fn projection_to_base(&self) -> Matrix {
        let (m, np) = (self.algebra().dim(), self.base.dim());
        let mut act = Matrix::zeros(np, m * np);
        for (i, l) in self.base.left_generators().iter().enumerate() {
            for v in 0..np {
                for w in 0..np {
                    act[(w, i * np + v)] = l[(w, v)].clone();
                }
            }
        }
        &act * self.q.section()
    }

    /// `π^k_l : J^k(P) → J^l(P)` for `l ≤ k`, induced by `μ^{k+1} ⊆ μ^{l+1}`.
    pub fn projection_to(&self, lower: &JetModule) -> Result<Matrix> {
        if lower.base != self.base || lower.order > self.order {
            return Err(Error::InvalidParameter("projection needs the same base module and a lower order".into()));
        }
        let id = Matrix::identity(self.q.ambient_dim());
        if !self.q.descends(&id, &lower.q) {
            return Err(Error::ModuleAxiom(format!("μ^{} is not contained in μ^{}", self.order + 1, lower.order + 1)));
        }
        Ok(self.q.induced(&id, &lower.q))
    }
}

/// `O¹ = (ker μ¹) mod μ² ⊂ J¹`, a central bimodule generated by `d¹a`.
#[derive(Clone, Debug)]
pub struct OneForms {
    pub jet: JetModule,
    pub module: FiniteModule,
    space: Subspace,
    inclusion: Matrix,
    projection: Matrix,
}

pub fn o1_module(algebra: &Algebra) -> Result<OneForms> {
    OneForms::new(algebra)
}

impl OneForms {
    pub fn new(algebra: &Algebra) -> Result<Self> {
        algebra.require_commutative()?;
        let jet = JetModule::new(&FiniteModule::regular(algebra, ModuleKind::Left), 1)?;
        let kernel_mu = kernel(&multiplication_map(algebra));
        let images = kernel_mu.basis().row_vectors().map(|v| jet.q.project(v)).collect();
        let space = Subspace::span(jet.dim(), images)?;
        let sub = jet.module.submodule(&space)?;
        let acts = sub.left_generators().to_vec();
        let module = FiniteModule::new(algebra, ModuleKind::CentralBimodule, space.dim(), acts.clone(), acts, "O¹")?;
        let inclusion = space.basis().transpose();
        let i1 = jet.injection();
        let back = &i1 * &jet.projection_to_base();
        let cols: Vec<Vec<Scalar>> = (0..jet.dim())
            .map(|c| {
                let e = vector::unit(jet.dim(), c);
                let rest = vector::sub(&e, &back.apply(&e));
                space.coordinates(&rest).expect("a⊗b − ab⊗1 lies in ker μ¹")
            })
            .collect();
        let projection = Matrix::from_columns(space.dim(), &cols)?;
        Ok(OneForms { jet, module, space, inclusion, projection })
    }

    pub fn algebra(&self) -> &Algebra {
        self.jet.algebra()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `O¹` as a subspace of `J¹`.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// `O¹ → J¹`.
    pub fn inclusion(&self) -> &Matrix {
        &self.inclusion
    }

    /// `J¹ → O¹`, `a⊗b ↦ a⊗b − ab⊗1`.
    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    /// `d¹a = 1⊗a − a⊗1 mod μ²` in `O¹` coordinates.
    pub fn d1(&self, a: &[Scalar]) -> Vec<Scalar> {
        let alg = self.algebra();
        let t = vector::sub(&vector::tensor(alg.unit(), a), &vector::tensor(a, alg.unit()));
        self.space.coordinates(&self.jet.q.project(&t)).expect("d¹a lies in O¹")
    }

    /// Matrix of `d¹ : A → O¹`.
    pub fn d1_matrix(&self) -> Matrix {
        let m = self.algebra().dim();
        let cols: Vec<Vec<Scalar>> = (0..m).map(|i| self.d1(&vector::unit(m, i))).collect();
        Matrix::from_columns(self.dim(), &cols).expect("d¹ columns")
    }

    pub fn act(&self, a: &[Scalar], w: &[Scalar]) -> Vec<Scalar> {
        self.module.left_action(a).expect("commutative algebra").apply(w)
    }
}

impl JetModule {
    /// `i₁ : a ↦ a⊗1 mod μ²`, meaningful when `P = A`.
    pub fn injection(&self) -> Matrix {
        let m = self.algebra().dim();
        let one = self.algebra().unit().to_vec();
        let cols: Vec<Vec<Scalar>> = (0..m).map(|i| self.class(&vector::unit(m, i), &one)).collect();
        Matrix::from_columns(self.dim(), &cols).expect("injection columns")
    }
}

/// `J¹ = A ⊕ O¹` split by `i₁`.
#[derive(Clone, Debug)]
pub struct Jet1Splitting {
    pub forms: OneForms,
    /// `i₁ : A → J¹`.
    pub injection: Matrix,
    /// `J¹ → A ⊕ O¹`, `c ↦ (π¹₀c, c − i₁π¹₀c)`.
    pub decompose: Matrix,
    /// `A ⊕ O¹ → J¹`, `(a, w) ↦ i₁a + w`.
    pub assemble: Matrix,
}

pub fn jet1_splitting(algebra: &Algebra) -> Result<Jet1Splitting> {
    let forms = OneForms::new(algebra)?;
    let injection = forms.jet.injection();
    let decompose = Matrix::vstack(&[&forms.jet.projection_to_base(), &forms.projection])?;
    let assemble = Matrix::hstack(&[&injection, &forms.inclusion])?;
    Ok(Jet1Splitting { forms, injection, decompose, assemble })
}

/// `J¹(P) ≅ J¹⊗P`, the tensor product taken over the ⋆-structure of `J¹`,
/// realized by `(a⊗bp) mod μ² ↔ [a⊗b mod μ²]⊗p`.
#[derive(Clone, Debug)]
pub struct Jet1TensorIso {
    pub jet: JetModule,
    pub forms: OneForms,
    /// `J¹⊗_K P → J¹⊗P`, index `c·dim P + v`.
    pub tensor: QuotientMap,
    /// `J¹(P) → J¹⊗P`.
    pub to_tensor: Matrix,
    /// `J¹⊗P → J¹(P)`.
    pub from_tensor: Matrix,
}

pub fn jet1_of_module_iso(algebra: &Algebra, p: &FiniteModule) -> Result<Jet1TensorIso> {
    let forms = OneForms::new(algebra)?;
    let jet = JetModule::new(p, 1)?;
    let j1 = &forms.jet;
    let (m, np, nj) = (algebra.dim(), jet.base.dim(), j1.dim());
    let lp = jet.base.left_generators();
    let id_p = Matrix::identity(np);
    let id_j = Matrix::identity(nj);
    let mut relations = Vec::new();
    for (s, l) in j1.star.iter().zip(lp) {
        let diff = &s.kron(&id_p) - &id_j.kron(l);
        relations.extend(diff.transpose().into_rows().into_iter().filter(|r| !vector::is_zero(r)));
    }
    let tensor = quotient(nj * np, &Subspace::span(nj * np, relations)?)?;

    // a⊗p ↦ [a⊗1]⊗p
    let one = algebra.unit().to_vec();
    let mut phi = Matrix::zeros(nj * np, m * np);
    for i in 0..m {
        let ji = j1.class(&vector::unit(m, i), &one);
        for v in 0..np {
            let col = vector::tensor(&ji, &vector::unit(np, v));
            for (r, x) in col.into_iter().enumerate() {
                phi[(r, i * np + v)] = x;
            }
        }
    }
    if !jet.q.descends(&phi, &tensor) {
        return Err(Error::ModuleAxiom("a⊗p ↦ [a⊗1]⊗p does not annihilate μ²(P)".into()));
    }
    let to_tensor = jet.q.induced(&phi, &tensor);

    // [a⊗b]⊗p ↦ a⊗bp, through the section of J¹
    let mut psi = Matrix::zeros(m * np, nj * np);
    for c in 0..nj {
        let lift = j1.q.lift(&vector::unit(nj, c));
        for v in 0..np {
            let mut out = vector::zeros(m * np);
            for (idx, x) in lift.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (a, b) = (idx / m, idx % m);
                for w in 0..np {
                    out[a * np + w] += &(x * &lp[b][(w, v)]);
                }
            }
            for (r, x) in out.into_iter().enumerate() {
                psi[(r, c * np + v)] = x;
            }
        }
    }
    if !tensor.descends(&psi, &jet.q) {
        return Err(Error::ModuleAxiom("[a⊗b]⊗p ↦ a⊗bp is not balanced".into()));
    }
    let from_tensor = tensor.induced(&psi, &jet.q);
    if !(&to_tensor * &from_tensor).is_identity() || !(&from_tensor * &to_tensor).is_identity() {
        return Err(Error::ModuleAxiom("J¹(P) → J¹⊗P is not invertible".into()));
    }
    Ok(Jet1TensorIso { jet, forms, tensor, to_tensor, from_tensor })
}

impl Jet1TensorIso {
    /// Image of the `O¹⊗P` summand inside `J¹(P)`.
    pub fn o1_summand(&self) -> Result<Subspace> {
        let np = self.jet.base.dim();
        let incl = self.forms.inclusion();
        let mut images = Vec::new();
        for o in 0..self.forms.dim() {
            for v in 0..np {
                let t = self.tensor.project(&vector::tensor(&incl.col(o), &vector::unit(np, v)));
                images.push(self.from_tensor.apply(&t));
            }
        }
        Subspace::span(self.jet.dim(), images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, matrix_algebra, truncated_polynomial_algebra};

    fn s(n: i64) -> Scalar {
        Scalar::from(n)
    }

    /// Brute-force `μ^{k+1}`: every explicit generator `a·δ^{b₀}⋯δ^{b_k}(1⊗p)`,
    /// written out with the tensor formula rather than with actions.
    fn oracle_mu(alg: &Algebra, k: usize) -> Subspace {
        let m = alg.dim();
        let delta = |b: usize, t: &[Scalar]| {
            let mut out = vector::zeros(m * m);
            for (idx, x) in t.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (a, p) = (idx / m, idx % m);
                let ba = alg.basis_product_vec(b, a);
                let bp = alg.basis_product_vec(b, p);
                vector::axpy(&mut out, x, &vector::tensor(&ba, &vector::unit(m, p)));
                vector::axpy(&mut out, &-x, &vector::tensor(&vector::unit(m, a), &bp));
            }
            out
        };
        let mut gens = Vec::new();
        let tuples = m.pow(k as u32 + 1);
        for p in 0..m {
            for t in 0..tuples {
                let mut w = vector::tensor(alg.unit(), &vector::unit(m, p));
                let mut idx = t;
                for _ in 0..=k {
                    w = delta(idx % m, &w);
                    idx /= m;
                }
                for a in 0..m {
                    let mut aw = vector::zeros(m * m);
                    for (j, x) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                        let ea = alg.basis_product_vec(a, j / m);
                        vector::axpy(&mut aw, x, &vector::tensor(&ea, &vector::unit(m, j % m)));
                    }
                    gens.push(aw);
                }
            }
        }
        Subspace::span(m * m, gens).unwrap()
    }

    #[test]
    fn function_algebra_jets_collapse() {
        for n in [2, 3] {
            let a = function_algebra(n).unwrap();
            let j = jet_module(&FiniteModule::regular(&a, ModuleKind::Left), 1).unwrap();
            assert_eq!(j.dim(), n);
            assert_eq!(j.mu(), &oracle_mu(&a, 1));
            assert_eq!(o1_module(&a).unwrap().dim(), 0);
        }
    }

    #[test]
    fn truncated_polynomial_jets() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let j = jet_module(&FiniteModule::regular(&a, ModuleKind::Left), 1).unwrap();
        assert_eq!(j.dim(), 5);
        assert_eq!(j.mu(), &oracle_mu(&a, 1));
        let j2 = jet_module(&FiniteModule::regular(&a, ModuleKind::Left), 2).unwrap();
        assert_eq!(j2.mu(), &oracle_mu(&a, 2));
        assert!(j2.mu().is_subspace_of(j.mu()));
    }

    #[test]
    fn noncommutative_input_is_rejected() {
        let a = matrix_algebra(2).unwrap();
        let err = jet_module(&FiniteModule::regular(&a, ModuleKind::Left), 1).unwrap_err();
        assert!(matches!(err, Error::NonCommutative { .. }));
        assert!(matches!(o1_module(&a).unwrap_err(), Error::NonCommutative { .. }));
    }

    #[test]
    fn tower_projections() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let p = FiniteModule::free(&a, ModuleKind::Left, 2);
        let jets: Vec<JetModule> = (0..=3).map(|k| jet_module(&p, k).unwrap()).collect();
        assert_eq!(jets[0].dim(), p.dim());
        for k in 1..=3 {
            let pi = jets[k].projection_to(&jets[k - 1]).unwrap();
            assert_eq!(pi.rank(), jets[k - 1].dim());
            assert!(jets[k].dim() >= jets[k - 1].dim());
            assert_eq!(&pi * &jets[k].jet_map(), jets[k - 1].jet_map());
        }
        assert!((&jets[1].projection_to_base() * &jets[1].jet_map()).is_identity());
        assert!(jets[0].projection_to(&jets[1]).is_err());
    }

    #[test]
    fn both_structures_descend_and_commute() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let j = jet_module(&FiniteModule::free(&a, ModuleKind::Left, 2), 2).unwrap();
        j.module().check_axioms().unwrap();
        j.star_module().check_axioms().unwrap();
        for b in 0..3 {
            for c in 0..3 {
                let l = j.left_action(&vector::unit(3, b));
                let st = j.star_action(&vector::unit(3, c));
                assert_eq!(&l * &st, &st * &l);
            }
        }
        // J^k is a ⋆-morphism
        let jm = j.jet_map();
        for b in 0..3 {
            let e = vector::unit(3, b);
            assert_eq!(&jm * &j.base().left_action(&e).unwrap(), &j.star_action(&e) * &jm);
        }
    }

    #[test]
    fn star_matches_right_structure_of_central_bimodule() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let p = FiniteModule::regular(&a, ModuleKind::CentralBimodule);
        let j = jet_module(&p, 1).unwrap();
        for b in 0..3 {
            let e = vector::unit(3, b);
            let right = Matrix::identity(3).kron(&p.right_action(&e).unwrap());
            assert_eq!(j.quotient().induced(&right, j.quotient()), j.star_action(&e));
        }
    }

    #[test]
    fn four_term_relation_lies_in_mu2() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let j = jet_module(&FiniteModule::regular(&a, ModuleKind::Left), 1).unwrap();
        let one = a.unit().to_vec();
        for x in 0..3 {
            for y in 0..3 {
                for p in 0..3 {
                    let (ea, eb, ep) = (vector::unit(3, x), vector::unit(3, y), vector::unit(3, p));
                    let abp = a.mul(&a.mul(&ea, &eb), &ep);
                    let mut t = vector::tensor(&one, &abp);
                    t = vector::sub(&t, &vector::tensor(&ea, &a.mul(&eb, &ep)));
                    t = vector::sub(&t, &vector::tensor(&eb, &a.mul(&ea, &ep)));
                    t = vector::add(&t, &vector::tensor(&a.mul(&ea, &eb), &ep));
                    assert!(j.mu().contains(&t));
                }
            }
        }
    }

    #[test]
    fn o1_of_truncated_polynomials() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let o = o1_module(&a).unwrap();
        assert_eq!(o.dim(), 2);
        o.module.check_axioms().unwrap();
        let (one, x, x2) = (vector::unit(3, 0), vector::unit(3, 1), vector::unit(3, 2));
        let dx = o.d1(&x);
        let xdx = o.act(&x, &dx);
        assert_eq!(Subspace::span(2, vec![dx.clone(), xdx.clone()]).unwrap().dim(), 2);
        assert!(vector::is_zero(&o.act(&x2, &dx)));
        assert!(vector::is_zero(&o.d1(&one)));
        // d¹(x²) = 2x·d¹x
        assert_eq!(o.d1(&x2), vector::scale(&xdx, &s(2)));
        // generated by d¹e_i
        let gens: Vec<Vec<Scalar>> = (0..3).map(|i| o.d1(&vector::unit(3, i))).collect();
        assert_eq!(o.module.closure(gens, Closure::Left).unwrap().dim(), 2);
    }

    #[test]
    fn d1_leibniz_and_centrality() {
        for a in [truncated_polynomial_algebra(3).unwrap(), function_algebra(2).unwrap()] {
            let o = o1_module(&a).unwrap();
            let m = a.dim();
            for i in 0..m {
                for j in 0..m {
                    let (ei, ej) = (vector::unit(m, i), vector::unit(m, j));
                    let lhs = o.d1(&a.mul(&ej, &ei));
                    let rhs = vector::add(&o.act(&ej, &o.d1(&ei)), &o.act(&ei, &o.d1(&ej)));
                    assert_eq!(lhs, rhs);
                    let w = o.d1(&ej);
                    assert_eq!(o.act(&ei, &w), o.module.right_action(&ei).unwrap().apply(&w));
                }
            }
        }
        let c2 = function_algebra(2).unwrap();
        assert!(vector::is_zero(&o1_module(&c2).unwrap().d1(&vector::unit(2, 0))));
    }

    #[test]
    fn canonical_splitting_of_j1() {
        for a in [truncated_polynomial_algebra(3).unwrap(), function_algebra(3).unwrap()] {
            let sp = jet1_splitting(&a).unwrap();
            let m = a.dim();
            assert_eq!(sp.forms.jet.dim(), m + sp.forms.dim());
            assert!((&sp.assemble * &sp.decompose).is_identity());
            assert!((&sp.decompose * &sp.assemble).is_identity());
            for i in 0..m {
                let e = vector::unit(m, i);
                let jet = sp.forms.jet.jet_map().apply(&e);
                let rebuilt =
                    vector::add(&sp.injection.apply(&e), &sp.forms.inclusion().apply(&sp.forms.d1(&e)));
                assert_eq!(jet, rebuilt);
            }
        }
    }

    #[test]
    fn jet_of_module_is_tensor_with_j1() {
        let a = truncated_polynomial_algebra(3).unwrap();
        let iso = jet1_of_module_iso(&a, &FiniteModule::free(&a, ModuleKind::Left, 2)).unwrap();
        assert_eq!(iso.jet.dim(), 10);
        assert_eq!(iso.tensor.dim(), 10);
        let summand = iso.o1_summand().unwrap();
        let pi = iso.jet.projection_to_base();
        assert!(summand.basis().row_vectors().all(|v| vector::is_zero(&pi.apply(v))));
        assert_eq!(summand.dim(), iso.jet.dim() - iso.jet.base().dim());

        // P = A: composing with J¹⊗A ≅ J¹, j⊗a ↦ j⋆a, gives the identity
        let iso = jet1_of_module_iso(&a, &FiniteModule::regular(&a, ModuleKind::Left)).unwrap();
        let j1 = &iso.forms.jet;
        let mut collapse = Matrix::zeros(j1.dim(), j1.dim() * 3);
        for c in 0..j1.dim() {
            for v in 0..3 {
                let col = j1.star_action(&vector::unit(3, v)).apply(&vector::unit(j1.dim(), c));
                for (r, x) in col.into_iter().enumerate() {
                    collapse[(r, c * 3 + v)] = x;
                }
            }
        }
        let collapse = iso.tensor.induced(&collapse, &quotient(j1.dim(), &Subspace::zero(j1.dim())).unwrap());
        assert!((&collapse * &iso.to_tensor).is_identity());
    }
}
