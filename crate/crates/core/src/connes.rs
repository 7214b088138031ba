//! Finite spectral triples and the operator calculus `Ω_D`.
//!
//! Universal forms act on the Hilbert space through
//! `π(x₀⊗x₁⊗…⊗x_k) = ρ(x₀)[D,ρ(x₁)]⋯[D,ρ(x_k)]`. On a form
//! `a₀δa₁⋯δa_k` every other tensor term carries a unit in some slot `≥ 1`,
//! and `[D,1] = 0`, so this restricts to the operator representation of `Ω*A`.
//! Degree `k` of `Ω_D` is `π(Ω^k)/π(δJ₀^{k−1})` with `J₀^k = ker π|Ω^k`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    function_algebra, same_algebra, Algebra, AlgebraElement, AlgebraMatrix, ModuleKind, ProjectiveModule,
    projective_from_idempotent,
};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::exactlin::{kernel, quotient, solve, vector, Matrix, QuotientMap, Scalar, Subspace};
use crate::universal::{monomial, UniversalCalculus, UniversalForm};

pub const DEFAULT_DEGREE_BOUND: usize = 2;
pub const MAX_DEGREE_BOUND: usize = 3;

/// `(A, H, D, Γ)` with `A` acting on `H = K^h` through `rep`.
///
/// In finite dimension every resolvent is compact, so that axiom holds
/// vacuously and is not represented.
#[derive(Clone, Debug)]
pub struct SpectralTriple {
    algebra: Algebra,
    rep: Vec<Matrix>,
    dirac: Matrix,
    grading: Option<Matrix>,
}

impl SpectralTriple {
    /// `rep[i]` represents basis element `e_i`.
    pub fn new(algebra: &Algebra, rep: Vec<Matrix>, dirac: Matrix, grading: Option<Matrix>) -> Result<Self> {
        let t = SpectralTriple { algebra: algebra.clone(), rep, dirac, grading };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let alg = &self.algebra;
        let m = alg.dim();
        let h = self.dirac.rows();
        let fail = |s: String| Err(Error::TripleAxiom(s));
        if self.rep.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: self.rep.len() });
        }
        if !self.dirac.is_square() || self.rep.iter().any(|r| r.rows() != h || r.cols() != h) {
            return fail("representation and D must be square of one size".into());
        }
        if self.dirac.adjoint() != self.dirac {
            return fail("D is not self-adjoint".into());
        }
        if !self.rep_of(alg.unit()).is_identity() {
            return fail("the unit is not represented by the identity".into());
        }
        for i in 0..m {
            for j in 0..m {
                if &self.rep[i] * &self.rep[j] != self.rep_of(&alg.basis_product_vec(i, j)) {
                    return fail(format!("ρ(e{i})ρ(e{j}) ≠ ρ(e{i}e{j})"));
                }
            }
            let star = alg.star(&vector::unit(m, i))?;
            if self.rep_of(&star) != self.rep[i].adjoint() {
                return fail(format!("ρ(e{i}*) ≠ ρ(e{i})†"));
            }
        }
        if let Some(g) = &self.grading {
            if g.rows() != h || !(g * g).is_identity() {
                return fail("Γ² ≠ 1".into());
            }
            if !(&(g * &self.dirac) + &(&self.dirac * g)).is_zero() {
                return fail("ΓD + DΓ ≠ 0".into());
            }
            if let Some(i) = (0..m).find(|&i| !self.rep[i].commutator(g).is_zero()) {
                return fail(format!("[ρ(e{i}), Γ] ≠ 0"));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn h_dim(&self) -> usize {
        self.dirac.rows()
    }

    pub fn rep(&self) -> &[Matrix] {
        &self.rep
    }

    pub fn dirac(&self) -> &Matrix {
        &self.dirac
    }

    pub fn grading(&self) -> Option<&Matrix> {
        self.grading.as_ref()
    }

    pub fn rep_of(&self, a: &[Scalar]) -> Matrix {
        let h = self.h_dim();
        let mut out = Matrix::zeros(h, h);
        for (c, r) in a.iter().zip(&self.rep).filter(|(c, _)| !c.is_zero()) {
            out = &out + &r.scale(c);
        }
        out
    }

    /// `[D, ρ(a)]`.
    pub fn commutator(&self, a: &[Scalar]) -> Matrix {
        self.dirac.commutator(&self.rep_of(a))
    }
}

/// Functions on two points acting diagonally on `K²`, with
/// `D = [[0, m], [m̄, 0]]` and `Γ = diag(1, −1)`.
pub fn two_point_triple(m: &Scalar) -> Result<SpectralTriple> {
    if m.is_zero() {
        return Err(Error::InvalidParameter("two-point triple needs m ≠ 0; with D = 0 every junk form is trivial".into()));
    }
    let alg = function_algebra(2)?;
    let rep = vec![Matrix::from_ints(&[&[1, 0], &[0, 0]]), Matrix::from_ints(&[&[0, 0], &[0, 1]])];
    let mut dirac = Matrix::zeros(2, 2);
    dirac[(0, 1)] = m.clone();
    dirac[(1, 0)] = m.conj();
    SpectralTriple::new(&alg, rep, dirac, Some(Matrix::from_ints(&[&[1, 0], &[0, -1]])))
}

/// Functions on `n` points acting diagonally on `K^n` with a given Hermitian `D`.
pub fn diagonal_triple(dirac: Matrix) -> Result<SpectralTriple> {
    let n = dirac.rows();
    let alg = function_algebra(n)?;
    let rep = (0..n).map(|i| Matrix::from_fn(n, n, |r, c| if r == i && c == i { Scalar::one() } else { Scalar::zero() })).collect();
    SpectralTriple::new(&alg, rep, dirac, None)
}

fn flatten(x: &Matrix) -> Vec<Scalar> {
    x.entries().to_vec()
}

fn unflatten(v: &[Scalar], h: usize) -> Matrix {
    Matrix::from_fn(h, h, |r, c| v[r * h + c].clone())
}

/// One degree of `Ω_D`.
#[derive(Clone, Debug)]
pub struct OmegaDegree {
    pub degree: usize,
    /// `Ω^k ⊂ A^{⊗(k+1)}`.
    pub forms: Subspace,
    /// `π` on the basis of `forms`, columns flattened row-major.
    pub pi: Matrix,
    /// `J₀^k = ker π|Ω^k` in tensor coordinates.
    pub junk0: Subspace,
    /// `π(Ω^k)` among flattened operators.
    pub image: Subspace,
    /// `π(δJ₀^{k−1})` among flattened operators.
    pub djunk: Subspace,
    /// `π(Ω^k) → Ω_D^k`, on coordinates relative to `image`.
    pub quotient: QuotientMap,
}

impl OmegaDegree {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Class of an operator, `None` outside `π(Ω^k)`.
    pub fn class(&self, x: &Matrix) -> Option<Vec<Scalar>> {
        self.image.coordinates(&flatten(x)).map(|c| self.quotient.project(&c))
    }

    /// An operator in the given class.
    pub fn lift(&self, c: &[Scalar], h: usize) -> Matrix {
        let coords = self.quotient.lift(c);
        let mut v = vector::zeros(self.image.ambient_dim());
        for (a, b) in coords.iter().zip(self.image.basis().row_vectors()) {
            vector::axpy(&mut v, a, b);
        }
        unflatten(&v, h)
    }

    /// A universal form mapping onto the operator `x`.
    fn preimage(&self, x: &Matrix, alg: &Algebra) -> Result<UniversalForm> {
        let coeffs = solve(&self.pi, &flatten(x))?
            .ok_or_else(|| Error::InvalidParameter(format!("operator outside π(Ω^{})", self.degree)))?;
        let mut w = vector::zeros(self.forms.ambient_dim());
        for (a, b) in coeffs.iter().zip(self.forms.basis().row_vectors()) {
            vector::axpy(&mut w, a, b);
        }
        UniversalForm::new(alg, self.degree, w)
    }
}

/// `Ω_D^k` for `k ≤ k_max` with its differential.
#[derive(Debug)]
pub struct ConnesCalculus {
    triple: SpectralTriple,
    universal: UniversalCalculus,
    degrees: Vec<OmegaDegree>,
    // d on the quotient bases, one per k < k_max
    d: Vec<Matrix>,
}

impl ConnesCalculus {
    pub fn new(triple: &SpectralTriple, k_max: usize) -> Result<Self> {
        if k_max > MAX_DEGREE_BOUND {
            return Err(Error::DegreeBound { degree: k_max, bound: MAX_DEGREE_BOUND });
        }
        let alg = triple.algebra().clone();
        let universal = UniversalCalculus::with_max_degree(&alg, k_max);
        let h2 = triple.h_dim() * triple.h_dim();
        let mut degrees: Vec<OmegaDegree> = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let forms = universal.span(k)?.clone();
            let cols = forms
                .basis()
                .row_vectors()
                .map(|b| Ok(flatten(&pi_tensor(triple, &UniversalForm::new(&alg, k, b.to_vec())?))))
                .collect::<Result<Vec<_>>>()?;
            let pi = Matrix::from_columns(h2, &cols)?;
            let junk_coords = kernel(&pi);
            let junk_vectors = junk_coords
                .basis()
                .row_vectors()
                .map(|c| {
                    let mut v = vector::zeros(forms.ambient_dim());
                    for (a, b) in c.iter().zip(forms.basis().row_vectors()) {
                        vector::axpy(&mut v, a, b);
                    }
                    v
                })
                .collect();
            let junk0 = Subspace::span(forms.ambient_dim(), junk_vectors)?;
            let image = Subspace::span(h2, cols)?;
            let djunk = match degrees.last() {
                None => Subspace::zero(h2),
                Some(prev) => {
                    let v = prev
                        .junk0
                        .basis()
                        .row_vectors()
                        .map(|j| Ok(flatten(&pi_tensor(triple, &UniversalForm::new(&alg, k - 1, j.to_vec())?.delta()))))
                        .collect::<Result<Vec<_>>>()?;
                    Subspace::span(h2, v)?
                }
            };
            let in_image = djunk
                .basis()
                .row_vectors()
                .map(|v| image.coordinates(v).ok_or_else(|| Error::TripleAxiom("π(δJ₀) escapes π(Ω)".into())))
                .collect::<Result<Vec<_>>>()?;
            let quotient = quotient(image.dim(), &Subspace::span(image.dim(), in_image)?)?;
            degrees.push(OmegaDegree { degree: k, forms, pi, junk0, image, djunk, quotient });
        }
        let mut calc = ConnesCalculus { triple: triple.clone(), universal, degrees, d: Vec::new() };
        for k in 0..k_max {
            let cols = (0..calc.degrees[k].dim())
                .map(|c| calc.d_class(k, &vector::unit(calc.degrees[k].dim(), c)))
                .collect::<Result<Vec<_>>>()?;
            let d = Matrix::from_columns(calc.degrees[k + 1].dim(), &cols)?;
            calc.d.push(d);
        }
        Ok(calc)
    }

    pub fn triple(&self) -> &SpectralTriple {
        &self.triple
    }

    pub fn algebra(&self) -> &Algebra {
        self.triple.algebra()
    }

    pub fn k_max(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn universal(&self) -> &UniversalCalculus {
        &self.universal
    }

    pub fn degree(&self, k: usize) -> Result<&OmegaDegree> {
        self.degrees.get(k).ok_or(Error::DegreeBound { degree: k, bound: self.k_max() })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(OmegaDegree::dim).collect()
    }

    /// Matrix of `d : Ω_D^k → Ω_D^{k+1}`.
    pub fn d(&self, k: usize) -> Result<&Matrix> {
        self.d.get(k).ok_or(Error::DegreeBound { degree: k + 1, bound: self.k_max() })
    }

    /// `π(w)` for a form of degree at most `k_max`.
    pub fn pi(&self, w: &UniversalForm) -> Result<Matrix> {
        if !same_algebra(w.algebra(), self.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        if w.degree() > self.k_max() {
            return Err(Error::DegreeBound { degree: w.degree(), bound: self.k_max() });
        }
        Ok(pi_tensor(&self.triple, w))
    }

    /// `[w] ∈ Ω_D^k`.
    pub fn class_of(&self, w: &UniversalForm) -> Result<Vec<Scalar>> {
        let x = self.pi(w)?;
        self.degrees[w.degree()].class(&x).ok_or_else(|| Error::InvalidParameter("not a form".into()))
    }

    /// `d[φ] = [δφ]` through an arbitrary representative of the class.
    fn d_class(&self, k: usize, c: &[Scalar]) -> Result<Vec<Scalar>> {
        let deg = &self.degrees[k];
        let x = deg.lift(c, self.triple.h_dim());
        let w = deg.preimage(&x, self.algebra())?;
        self.class_of(&w.delta())
    }

    /// `J^k = J₀^k + δJ₀^{k−1}` in tensor coordinates.
    pub fn junk_ideal(&self, k: usize) -> Result<Subspace> {
        let deg = self.degree(k)?;
        if k == 0 {
            return Ok(deg.junk0.clone());
        }
        let prev = &self.degrees[k - 1];
        let mut v = deg.junk0.basis_vectors();
        for j in prev.junk0.basis().row_vectors() {
            v.push(UniversalForm::new(self.algebra(), k - 1, j.to_vec())?.delta().coeffs().to_vec());
        }
        Subspace::span(deg.forms.ambient_dim(), v)
    }
}

fn pi_tensor(t: &SpectralTriple, w: &UniversalForm) -> Matrix {
    let m = t.algebra().dim();
    let h = t.h_dim();
    let comm: Vec<Matrix> = (0..m).map(|i| t.commutator(&vector::unit(m, i))).collect();
    let mut out = Matrix::zeros(h, h);
    for (idx, c) in w.terms() {
        let mut x = t.rep()[idx[0]].scale(c);
        for &i in &idx[1..] {
            x = &x * &comm[i];
        }
        out = &out + &x;
    }
    out
}

/// `π(a₀δa₁⋯δa_k) = ρ(a₀)[D,ρ(a₁)]⋯[D,ρ(a_k)]`.
pub fn pi_rep(calc: &ConnesCalculus, w: &UniversalForm) -> Result<Matrix> {
    calc.pi(w)
}

fn random_element(alg: &Algebra, rng: &mut impl Rng) -> AlgebraElement {
    let coeffs = (0..alg.dim()).map(|_| Scalar::gaussian(rng.gen_range(-3..=3), rng.gen_range(-2..=2))).collect();
    AlgebraElement::new(alg, coeffs).expect("coefficient count matches")
}

fn random_monomial(alg: &Algebra, k: usize, rng: &mut impl Rng) -> UniversalForm {
    let a0 = random_element(alg, rng);
    let rest: Vec<AlgebraElement> = (0..k).map(|_| random_element(alg, rng)).collect();
    monomial(&a0, &rest).expect("one algebra")
}

/// `π(w·w′) = π(w)π(w′)` on random monomials with `deg w + deg w′ ≤ k_max`.
pub fn pi_multiplicative_check(calc: &ConnesCalculus, samples: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Check::new();
    let k_max = calc.k_max();
    for _ in 0..samples {
        let p = rng.gen_range(0..=k_max);
        let q = rng.gen_range(0..=k_max - p);
        let (w, w2) = (random_monomial(calc.algebra(), p, &mut rng), random_monomial(calc.algebra(), q, &mut rng));
        let ok = calc.pi(&w.mul(&w2)?)? == &calc.pi(&w)? * &calc.pi(&w2)?;
        c.record(ok, || format!("π(w·w′) ≠ π(w)π(w′) for degrees ({p}, {q}), w = {:?}", w.coeffs()));
    }
    Ok(c)
}

/// `π(φ*) = π(φ)†` on random sums of monomials.
pub fn pi_star_check(calc: &ConnesCalculus, samples: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Check::new();
    for _ in 0..samples {
        let k = rng.gen_range(0..=calc.k_max());
        let w = random_monomial(calc.algebra(), k, &mut rng).add(&random_monomial(calc.algebra(), k, &mut rng))?;
        let ok = calc.pi(&w.star()?)? == calc.pi(&w)?.adjoint();
        c.record(ok, || format!("π(φ*) ≠ π(φ)† for φ = {:?}", w.coeffs()));
    }
    Ok(c)
}

/// `x·J^k·y ⊂ J^{k+i+j}` for random monomials `x, y` of degrees `i, j`.
pub fn junk_ideal_check(calc: &ConnesCalculus, samples: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Check::new();
    let k_max = calc.k_max();
    let ideals = (0..=k_max).map(|k| calc.junk_ideal(k)).collect::<Result<Vec<_>>>()?;
    for k in (0..=k_max).filter(|&k| !ideals[k].is_zero()) {
        let basis = ideals[k].basis_vectors();
        for _ in 0..samples {
            let i = rng.gen_range(0..=k_max - k);
            let j = rng.gen_range(0..=k_max - k - i);
            let jw = UniversalForm::new(calc.algebra(), k, basis[rng.gen_range(0..basis.len())].clone())?;
            let x = random_monomial(calc.algebra(), i, &mut rng);
            let y = random_monomial(calc.algebra(), j, &mut rng);
            let prod = x.mul(&jw)?.mul(&y)?;
            c.record(ideals[k + i + j].contains(prod.coeffs()), || format!("x·J^{k}·y leaves J^{}", k + i + j));
        }
    }
    Ok(c)
}

/// `d[φ]` does not depend on the representative and `d∘d = 0`.
pub fn differential_check(calc: &ConnesCalculus) -> Result<Check> {
    let mut c = Check::new();
    for k in 0..calc.k_max() {
        let deg = &calc.degrees[k];
        // forms whose class vanishes
        let to_class = Matrix::from_columns(
            deg.dim(),
            &(0..deg.pi.cols())
                .map(|j| deg.quotient.project(&deg.image.coordinates(&deg.pi.col(j)).expect("column of π")))
                .collect::<Vec<_>>(),
        )?;
        for z in kernel(&to_class).basis().row_vectors() {
            let mut w = vector::zeros(deg.forms.ambient_dim());
            for (a, b) in z.iter().zip(deg.forms.basis().row_vectors()) {
                vector::axpy(&mut w, a, b);
            }
            let dw = calc.class_of(&UniversalForm::new(calc.algebra(), k, w)?.delta())?;
            c.record(vector::is_zero(&dw), || format!("d of a vanishing class is nonzero in degree {}", k + 1));
        }
        if k + 1 < calc.k_max() {
            let dd = &calc.d[k + 1] * &calc.d[k];
            c.record(dd.is_zero(), || format!("d∘d ≠ 0 on Ω_D^{k}"));
        }
    }
    Ok(c)
}

/// Outcome of the search for `φ` with `π(φ) = 0` and `π(δφ) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JunkSearch {
    pub witness: Option<UniversalForm>,
    /// Degrees searched are `0..=max_degree`.
    pub max_degree: usize,
    pub junk_dims: Vec<usize>,
}

/// Searching a basis of each `J₀^k` is exhaustive: `φ ↦ π(δφ)` is linear, so
/// it vanishes on `J₀^k` iff it vanishes on a basis.
pub fn junk_witness(calc: &ConnesCalculus) -> Result<JunkSearch> {
    let mut junk_dims = Vec::new();
    let mut witness = None;
    for deg in &calc.degrees {
        junk_dims.push(deg.junk0.dim());
        if witness.is_some() {
            continue;
        }
        for j in deg.junk0.basis().row_vectors() {
            let phi = UniversalForm::new(calc.algebra(), deg.degree, j.to_vec())?;
            if !pi_tensor(&calc.triple, &phi.delta()).is_zero() {
                witness = Some(phi);
                break;
            }
        }
    }
    Ok(JunkSearch { witness, max_degree: calc.k_max(), junk_dims })
}

/// `∇₀ = (Id⊗π)∘p∘δ` on the right module `P = p·A^N`, valued in
/// `P⊗Ω_D¹ = p·(Ω_D¹)^N` (component `t`, class basis `c` at `t·d₁ + c`).
#[derive(Clone, Debug)]
pub struct ConnesConnection {
    pub projective: ProjectiveModule,
    /// Columns are `∇(s)` for the basis of `P`.
    pub map: Matrix,
}

/// `P`, `Ω_D¹` and the actions needed for Leibniz checks.
#[derive(Clone, Debug)]
pub struct ConnectionSetting {
    pub projective: ProjectiveModule,
    /// `dim Ω_D¹`.
    pub d1: usize,
    /// `v ↦ v·e_i` on `P`.
    pub right_p: Vec<Matrix>,
    /// `ω ↦ ω·e_i` on `(Ω_D¹)^N`.
    pub right_t: Vec<Matrix>,
    /// `s ↦ s⊗[D, e_i]`.
    pub leibniz_term: Vec<Matrix>,
    /// `p` acting on `(Ω_D¹)^N`; its image is `P⊗Ω_D¹`.
    pub p_t: Matrix,
}

fn class_matrix(calc: &ConnesCalculus, f: impl Fn(&Matrix) -> Matrix) -> Result<Matrix> {
    let deg = calc.degree(1)?;
    let h = calc.triple.h_dim();
    let cols = (0..deg.dim())
        .map(|c| {
            deg.class(&f(&deg.lift(&vector::unit(deg.dim(), c), h)))
                .ok_or_else(|| Error::TripleAxiom("Ω_D¹ is not a bimodule".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(deg.dim(), &cols)
}

impl ConnectionSetting {
    pub fn new(calc: &ConnesCalculus, p: &AlgebraMatrix) -> Result<Self> {
        let alg = calc.algebra();
        if !same_algebra(p.algebra(), alg) {
            return Err(Error::AlgebraMismatch);
        }
        let projective = projective_from_idempotent(p, ModuleKind::Right)?;
        let deg = calc.degree(1)?;
        let (m, n, d1) = (alg.dim(), p.n(), deg.dim());
        let t = &calc.triple;
        let id = Matrix::identity(n);
        let right_p = (0..m).map(|i| projective.module.right_action(&vector::unit(m, i))).collect::<Result<Vec<_>>>()?;
        let right_t = (0..m)
            .map(|i| Ok(id.kron(&class_matrix(calc, |x| x * &t.rep()[i])?)))
            .collect::<Result<Vec<_>>>()?;
        let left_t = (0..m).map(|i| class_matrix(calc, |x| &t.rep()[i] * x)).collect::<Result<Vec<_>>>()?;
        let mut p_t = Matrix::zeros(n * d1, n * d1);
        for r in 0..n {
            for s in 0..n {
                let entry = p.entry(r, s);
                for (i, c) in entry.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let block = left_t[i].scale(c);
                    for a in 0..d1 {
                        for b in 0..d1 {
                            p_t[(r * d1 + a, s * d1 + b)] += &block[(a, b)];
                        }
                    }
                }
            }
        }
        let leibniz_term = (0..m)
            .map(|i| {
                let da = t.commutator(&vector::unit(m, i));
                let cols = (0..projective.module.dim())
                    .map(|b| {
                        let s = projective.include(&vector::unit(projective.module.dim(), b));
                        column_classes(calc, n, |comp| &t.rep_of(&s[comp * m..(comp + 1) * m]) * &da)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Matrix::from_columns(n * d1, &cols)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConnectionSetting { projective, d1, right_p, right_t, leibniz_term, p_t })
    }

    pub fn target_dim(&self) -> usize {
        self.projective.idempotent.n() * self.d1
    }

    /// `Hom_A(P, P⊗Ω_D¹)`, each map a `target_dim × dim P` matrix flattened row-major.
    pub fn gauge_space(&self) -> Result<Subspace> {
        let (dt, dp) = (self.target_dim(), self.projective.module.dim());
        let mut rows = Vec::new();
        for (rp, rt) in self.right_p.iter().zip(&self.right_t) {
            for r in 0..dt {
                for c in 0..dp {
                    let mut row = vector::zeros(dt * dp);
                    for k in 0..dp {
                        row[r * dp + k] += &rp[(k, c)];
                    }
                    for k in 0..dt {
                        row[k * dp + c] -= &rt[(r, k)];
                    }
                    rows.push(row);
                }
            }
        }
        let q = &Matrix::identity(dt) - &self.p_t;
        for r in 0..dt {
            for c in 0..dp {
                let mut row = vector::zeros(dt * dp);
                for k in 0..dt {
                    row[k * dp + c] += &q[(r, k)];
                }
                rows.push(row);
            }
        }
        Ok(kernel(&Matrix::from_rows(dt * dp, rows)?))
    }

    /// First `(a, s)` basis pair where `σ(s·a) ≠ σ(s)·a`, or where `σ` leaves `P⊗Ω_D¹`.
    pub fn linearity_defect(&self, sigma: &Matrix) -> Option<String> {
        let dp = self.projective.module.dim();
        for (i, (rp, rt)) in self.right_p.iter().zip(&self.right_t).enumerate() {
            let lhs = sigma * rp;
            let rhs = rt * sigma;
            if let Some(s) = (0..dp).find(|&s| lhs.col(s) != rhs.col(s)) {
                return Some(format!("σ(s{s}·e{i}) ≠ σ(s{s})·e{i}"));
            }
        }
        let proj = &self.p_t * sigma;
        (0..dp).find(|&s| proj.col(s) != sigma.col(s)).map(|s| format!("σ(s{s}) is not in P⊗Ω_D¹"))
    }

    /// `∇(s·a) = ∇(s)·a + s⊗[D,a]` on the bases of `P` and `A`.
    pub fn leibniz_check(&self, map: &Matrix) -> Check {
        let mut c = Check::new();
        let dp = self.projective.module.dim();
        for (i, ((rp, rt), l)) in self.right_p.iter().zip(&self.right_t).zip(&self.leibniz_term).enumerate() {
            let lhs = map * rp;
            let rhs = &(rt * map) + l;
            for s in 0..dp {
                c.record(lhs.col(s) == rhs.col(s), || format!("∇(s{s}·e{i}) ≠ ∇(s{s})·e{i} + s{s}⊗[D,e{i}]"));
            }
        }
        c
    }
}

fn column_classes(calc: &ConnesCalculus, n: usize, f: impl Fn(usize) -> Matrix) -> Result<Vec<Scalar>> {
    let deg = calc.degree(1)?;
    let mut out = Vec::with_capacity(n * deg.dim());
    for comp in 0..n {
        out.extend(deg.class(&f(comp)).ok_or_else(|| Error::TripleAxiom("component outside π(Ω¹)".into()))?);
    }
    Ok(out)
}

/// `∇₀(s)_r = Σ_t [ρ(p_rt)[D, ρ(s_t)]]`.
pub fn grassmann_connection(calc: &ConnesCalculus, p: &AlgebraMatrix) -> Result<(ConnectionSetting, ConnesConnection)> {
    let setting = ConnectionSetting::new(calc, p)?;
    let t = &calc.triple;
    let (m, n) = (calc.algebra().dim(), p.n());
    let pm = &setting.projective;
    let cols = (0..pm.module.dim())
        .map(|b| {
            let s = pm.include(&vector::unit(pm.module.dim(), b));
            column_classes(calc, n, |r| {
                let h = t.h_dim();
                let mut acc = Matrix::zeros(h, h);
                for c in 0..n {
                    acc = &acc + &(&t.rep_of(p.entry(r, c)) * &t.commutator(&s[c * m..(c + 1) * m]));
                }
                acc
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let map = Matrix::from_columns(setting.target_dim(), &cols)?;
    let projective = pm.clone();
    Ok((setting, ConnesConnection { projective, map }))
}

/// `∇₀ + σ` for a right-linear gauge field `σ`.
pub fn add_gauge(setting: &ConnectionSetting, conn: &ConnesConnection, sigma: &Matrix) -> Result<ConnesConnection> {
    if sigma.rows() != conn.map.rows() || sigma.cols() != conn.map.cols() {
        return Err(Error::DimensionMismatch { expected: conn.map.rows() * conn.map.cols(), found: sigma.rows() * sigma.cols() });
    }
    if let Some(w) = setting.linearity_defect(sigma) {
        return Err(Error::NotModuleLinear(w));
    }
    Ok(ConnesConnection { projective: conn.projective.clone(), map: &conn.map + sigma })
}

/// `∇ − ∇′`, which is right-linear whenever both satisfy Leibniz.
pub fn gauge_difference(setting: &ConnectionSetting, a: &ConnesConnection, b: &ConnesConnection) -> Result<Matrix> {
    let sigma = &a.map - &b.map;
    match setting.linearity_defect(&sigma) {
        None => Ok(sigma),
        Some(w) => Err(Error::NotModuleLinear(w)),
    }
}

pub fn gauge_of(setting: &ConnectionSetting, coords: &[Scalar]) -> Matrix {
    crate::algebra::unvectorize(coords, setting.target_dim(), setting.projective.module.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universal::udelta;

    fn e(alg: &Algebra, i: usize) -> AlgebraElement {
        AlgebraElement::basis(alg, i)
    }

    #[test]
    fn two_point_axioms() {
        let t = two_point_triple(&Scalar::one()).unwrap();
        assert_eq!(t.commutator(&[Scalar::one(), Scalar::zero()]), Matrix::from_ints(&[&[0, -1], &[1, 0]]));
        let m = Scalar::gaussian(2, 1);
        let t = two_point_triple(&m).unwrap();
        let c = t.commutator(&[Scalar::one(), Scalar::zero()]);
        assert_eq!((c[(0, 1)].clone(), c[(1, 0)].clone()), (-&m, m.conj()));
        let g = t.grading().unwrap();
        assert!((&(g * t.dirac()) + &(t.dirac() * g)).is_zero());
        assert!(two_point_triple(&Scalar::zero()).is_err());
        let bad = Matrix::from_gaussian(&[&[(0, 0), (0, 1)], &[(0, 1), (0, 0)]]);
        assert!(matches!(diagonal_triple(bad), Err(Error::TripleAxiom(_))));
    }

    #[test]
    fn pi_examples() {
        let t = two_point_triple(&Scalar::one()).unwrap();
        let calc = ConnesCalculus::new(&t, 2).unwrap();
        let alg = calc.algebra().clone();
        assert_eq!(calc.pi(&UniversalForm::from_element(&e(&alg, 1))).unwrap(), t.rep()[1]);
        let w = monomial(&e(&alg, 0), &[e(&alg, 1)]).unwrap();
        let x = calc.pi(&w).unwrap();
        // diag(1,0)·[[0,1],[−1,0]]
        assert_eq!(x, Matrix::from_ints(&[&[0, 1], &[0, 0]]));
        assert!(calc.pi(&udelta(&AlgebraElement::one(&alg))).unwrap().is_zero());
        let too_high = monomial(&e(&alg, 0), &[e(&alg, 1), e(&alg, 0), e(&alg, 1)]).unwrap();
        assert!(matches!(calc.pi(&too_high), Err(Error::DegreeBound { degree: 3, bound: 2 })));
    }

    #[test]
    fn two_point_omega_d() {
        let t = two_point_triple(&Scalar::one()).unwrap();
        let calc = ConnesCalculus::new(&t, 2).unwrap();
        // oracle: a₀[D,a₁] over basis pairs spans the off-diagonal matrices
        let offdiag: Vec<Vec<Scalar>> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| {
                let a0 = &t.rep()[i];
                (a0 * &t.commutator(&vector::unit(2, j))).entries().to_vec()
            })
            .collect();
        let span = Subspace::span(4, offdiag).unwrap();
        assert_eq!(span.dim(), 2);
        assert_eq!(calc.degree(1).unwrap().image, span);
        assert_eq!(calc.dims(), vec![2, 2, 2]);
        assert!(calc.degree(0).unwrap().junk0.is_zero());
        assert!(differential_check(&calc).unwrap().holds);
        let search = junk_witness(&calc).unwrap();
        assert_eq!(search.witness, None);
        assert_eq!(search.junk_dims, vec![0, 0, 0]);
    }

    #[test]
    fn path_graph_has_junk() {
        let d = Matrix::from_ints(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]);
        let t = diagonal_triple(d).unwrap();
        let calc = ConnesCalculus::new(&t, 2).unwrap();
        let search = junk_witness(&calc).unwrap();
        let phi = search.witness.expect("e₁δe₃ type junk");
        assert_eq!(phi.degree(), 1);
        assert!(calc.pi(&phi).unwrap().is_zero());
        assert!(!calc.pi(&phi.delta()).unwrap().is_zero());
        assert!(calc.degree(2).unwrap().djunk.dim() > 0);
        assert!(differential_check(&calc).unwrap().holds);
        assert!(junk_ideal_check(&calc, 40, 5).unwrap().holds);
    }

    #[test]
    fn sampled_representation_identities() {
        let t = two_point_triple(&Scalar::gaussian(1, 2)).unwrap();
        let calc = ConnesCalculus::new(&t, 2).unwrap();
        let c = pi_multiplicative_check(&calc, 100, 1).unwrap();
        assert!(c.holds);
        assert_eq!(c.cases, 100);
        assert!(pi_star_check(&calc, 50, 2).unwrap().holds);
    }

    fn idempotents(alg: &Algebra) -> Vec<AlgebraMatrix> {
        let one = AlgebraElement::one(alg);
        let zero = AlgebraElement::zero(alg);
        let p = AlgebraMatrix::diag(alg, &[e(alg, 0), zero.clone()]).unwrap();
        let g = AlgebraMatrix::new(alg, 2, vec![one.coeffs().to_vec(), one.coeffs().to_vec(), zero.coeffs().to_vec(), one.coeffs().to_vec()])
            .unwrap();
        let minus = one.scale(&Scalar::from(-1));
        let g_inv =
            AlgebraMatrix::new(alg, 2, vec![one.coeffs().to_vec(), minus.coeffs().to_vec(), zero.coeffs().to_vec(), one.coeffs().to_vec()])
                .unwrap();
        vec![AlgebraMatrix::identity(alg, 2), p.clone(), p.conjugate(&g, &g_inv).unwrap()]
    }

    #[test]
    fn grassmann_leibniz_and_gauge() {
        let t = two_point_triple(&Scalar::one()).unwrap();
        let calc = ConnesCalculus::new(&t, 2).unwrap();
        for p in idempotents(calc.algebra()) {
            let (setting, conn) = grassmann_connection(&calc, &p).unwrap();
            assert!(setting.leibniz_check(&conn.map).holds);
            assert_eq!(&setting.p_t * &conn.map, conn.map);
            let gauge = setting.gauge_space().unwrap();
            for b in gauge.basis().row_vectors() {
                let sigma = gauge_of(&setting, b);
                let moved = add_gauge(&setting, &conn, &sigma).unwrap();
                assert!(setting.leibniz_check(&moved.map).holds);
                assert_eq!(gauge_difference(&setting, &moved, &conn).unwrap(), sigma);
            }
            assert_eq!(add_gauge(&setting, &conn, &Matrix::zeros(conn.map.rows(), conn.map.cols())).unwrap().map, conn.map);
        }
    }

    #[test]
    fn free_rank_one_gauge_fields() {
        // Hom_A(A, Ω_D¹) ≅ Ω_D¹ via σ ↦ σ(1)
        let t = two_point_triple(&Scalar::one()).unwrap();
        let calc = ConnesCalculus::new(&t, 1).unwrap();
        let alg = calc.algebra().clone();
        let p = AlgebraMatrix::identity(&alg, 1);
        let (setting, conn) = grassmann_connection(&calc, &p).unwrap();
        assert_eq!(setting.gauge_space().unwrap().dim(), 2);
        // the Leibniz-extra operator s ↦ s⊗[D,e₁] is not right-linear
        let err = add_gauge(&setting, &conn, &setting.leibniz_term[0]).unwrap_err();
        assert!(matches!(err, Error::NotModuleLinear(_)));
    }
}
