//! Chevalley–Eilenberg forms: centre-multilinear alternating maps from the
//! derivation module to the algebra.
//!
//! Conventions: `d` carries no `1/(k+1)` prefactor and contraction carries
//! no factor `k`, so `dθ^r(u_q, u_s) = −c^r_qs` holds exactly.
//!
//! A [`DerivationFrame`] generates `d(A)` over `Z(A)`. When the generators
//! satisfy central relations `Σ z_q u_q = 0`, admissible forms are those that
//! respect them; components are stored on increasing generator tuples.

use std::sync::Arc;

use crate::algebra::{
    derivation_basis, hom_space, side_generators, su_basis, Algebra, Closure, Derivation, FiniteModule, ModuleKind,
    Side,
};
use crate::error::{Error, Result};
use crate::exactlin::{kernel, solve, vector, Matrix, Scalar, Subspace};

/// Central coefficients `(z_1, …, z_r)` of `Σ z_q u_q`.
pub type FrameCoords = Vec<Vec<Scalar>>;

/// Generators of `d(A)` over the centre with their brackets, involutions,
/// and central relations.
#[derive(Debug)]
pub struct DerivationFrame {
    algebra: Algebra,
    generators: Vec<Derivation>,
    names: Vec<String>,
    centre: Vec<Vec<Scalar>>,
    // columns vec(z_b·u_q) at q·|Z| + b
    span: Matrix,
    relations: Vec<FrameCoords>,
    brackets: Vec<FrameCoords>,
    stars: Option<Vec<FrameCoords>>,
}

impl DerivationFrame {
    /// Validates that `generators` span `d(A)` over `Z(A)`.
    pub fn new(algebra: &Algebra, generators: Vec<Derivation>, names: Vec<String>) -> Result<Arc<Self>> {
        if names.len() != generators.len() {
            return Err(Error::Frame("one name per generator".into()));
        }
        let m = algebra.dim();
        let centre = side_generators(algebra, Side::Centre);
        let mut cols = Vec::new();
        for u in &generators {
            for z in &centre {
                cols.push((&algebra.left_mult_by(z) * u.action()).entries().to_vec());
            }
        }
        let span = Matrix::from_columns(m * m, &cols)?;
        if &Subspace::image(&span) != algebra.derivation_space() {
            return Err(Error::Frame(format!(
                "{} generators do not span the derivations of {} over the centre",
                generators.len(),
                algebra.label()
            )));
        }
        let nz = centre.len();
        let to_coords = |flat: &[Scalar]| -> FrameCoords {
            (0..generators.len())
                .map(|q| {
                    let mut z = vector::zeros(m);
                    for (b, zb) in centre.iter().enumerate() {
                        vector::axpy(&mut z, &flat[q * nz + b], zb);
                    }
                    z
                })
                .collect()
        };
        let relations: Vec<FrameCoords> = kernel(&span).basis().row_vectors().map(to_coords).collect();
        let mut frame = DerivationFrame {
            algebra: algebra.clone(),
            generators,
            names,
            centre,
            span,
            relations,
            brackets: Vec::new(),
            stars: None,
        };
        let r = frame.rank();
        let mut brackets = Vec::with_capacity(r * r);
        for q in 0..r {
            for s in 0..r {
                brackets.push(frame.coords(&frame.generators[q].bracket(&frame.generators[s])?)?);
            }
        }
        frame.brackets = brackets;
        if algebra.has_involution() {
            let stars = frame.generators.iter().map(|u| frame.coords(&u.star()?)).collect::<Result<Vec<_>>>()?;
            frame.stars = Some(stars);
        }
        Ok(Arc::new(frame))
    }

    /// `u_r = ad ε_r` over the integer `su(n)` basis of `M_n`.
    pub fn su(n: usize) -> Result<Arc<Self>> {
        let su = su_basis(n)?;
        DerivationFrame::new(su.algebra(), su.inner_derivations(), su.names().to_vec())
    }

    /// Greedy generators picked from the canonical derivation basis.
    pub fn standard(algebra: &Algebra) -> Result<Arc<Self>> {
        let m = algebra.dim();
        let centre = side_generators(algebra, Side::Centre);
        let mut chosen: Vec<Derivation> = Vec::new();
        let mut span = Subspace::zero(m * m);
        for u in derivation_basis(algebra) {
            if span.contains(&u.vectorized()) {
                continue;
            }
            let orbit =
                centre.iter().map(|z| (&algebra.left_mult_by(z) * u.action()).entries().to_vec()).collect();
            span = span.join(&Subspace::span(m * m, orbit)?)?;
            chosen.push(u);
        }
        let names = (0..chosen.len()).map(|q| format!("u{}", q + 1)).collect();
        DerivationFrame::new(algebra, chosen, names)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Derivation] {
        &self.generators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Central relations among the generators; empty when the frame is free.
    pub fn relations(&self) -> &[FrameCoords] {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// Some central coefficients expressing `u`.
    pub fn coords(&self, u: &Derivation) -> Result<FrameCoords> {
        let m = self.algebra.dim();
        let nz = self.centre.len();
        let flat = solve(&self.span, &u.vectorized())?.ok_or_else(|| Error::Frame("not in the derivation span".into()))?;
        Ok((0..self.rank())
            .map(|q| {
                let mut z = vector::zeros(m);
                for (b, zb) in self.centre.iter().enumerate() {
                    vector::axpy(&mut z, &flat[q * nz + b], zb);
                }
                z
            })
            .collect())
    }

    /// Coordinates of `[u_q, u_s]`.
    pub fn bracket_coords(&self, q: usize, s: usize) -> &FrameCoords {
        &self.brackets[q * self.rank() + s]
    }

    pub fn unit_coords(&self, q: usize) -> FrameCoords {
        let m = self.algebra.dim();
        (0..self.rank()).map(|t| if t == q { self.algebra.unit().to_vec() } else { vector::zeros(m) }).collect()
    }
}

/// Increasing `k`-tuples of `0..r` in lexicographic order.
fn combinations(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    rec(0, r, k, &mut cur, &mut out);
    out
}

/// Sorts `t` in place; returns the permutation sign, or `None` on a repeat.
fn sort_sign(t: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

/// A CE `k`-form given by its values on increasing generator tuples.
#[derive(Clone, Debug)]
pub struct CEForm {
    frame: Arc<DerivationFrame>,
    degree: usize,
    tuples: Arc<Vec<Vec<usize>>>,
    values: Vec<Vec<Scalar>>,
}

impl PartialEq for CEForm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.frame, &other.frame) && self.degree == other.degree && self.values == other.values
    }
}

impl Eq for CEForm {}

impl CEForm {
    /// Values listed in the order of [`CEForm::tuples`]; rejected if they
    /// violate a central relation of the frame.
    pub fn new(frame: &Arc<DerivationFrame>, degree: usize, values: Vec<Vec<Scalar>>) -> Result<Self> {
        let tuples = combinations(frame.rank(), degree);
        let m = frame.algebra.dim();
        if values.len() != tuples.len() || values.iter().any(|v| v.len() != m) {
            return Err(Error::DimensionMismatch { expected: tuples.len(), found: values.len() });
        }
        let f = CEForm { frame: frame.clone(), degree, tuples: Arc::new(tuples), values };
        if !f.is_admissible() {
            return Err(Error::Frame("form violates a central relation among the generators".into()));
        }
        Ok(f)
    }

    fn raw(frame: &Arc<DerivationFrame>, degree: usize, values: Vec<Vec<Scalar>>) -> Self {
        CEForm { frame: frame.clone(), degree, tuples: Arc::new(combinations(frame.rank(), degree)), values }
    }

    pub fn zero(frame: &Arc<DerivationFrame>, degree: usize) -> Self {
        let n = combinations(frame.rank(), degree).len();
        CEForm::raw(frame, degree, vec![vector::zeros(frame.algebra.dim()); n])
    }

    pub fn function(frame: &Arc<DerivationFrame>, a: &[Scalar]) -> Self {
        CEForm::raw(frame, 0, vec![a.to_vec()])
    }

    /// `θ^r(u_q) = δ^r_q·1`; requires a free frame.
    pub fn theta(frame: &Arc<DerivationFrame>, r: usize) -> Result<Self> {
        let m = frame.algebra.dim();
        let values = (0..frame.rank()).map(|q| if q == r { frame.algebra.unit().to_vec() } else { vector::zeros(m) }).collect();
        CEForm::new(frame, 1, values)
    }

    pub fn frame(&self) -> &Arc<DerivationFrame> {
        &self.frame
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn values(&self) -> &[Vec<Scalar>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| vector::is_zero(v))
    }

    /// Flattened components, tuple-major.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.values.concat()
    }

    fn same_frame(&self, other: &CEForm) -> Result<()> {
        if Arc::ptr_eq(&self.frame, &other.frame) {
            Ok(())
        } else {
            Err(Error::Frame("forms refer to different derivation frames".into()))
        }
    }

    pub fn add(&self, other: &CEForm) -> Result<CEForm> {
        self.same_frame(other)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, found: other.degree });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| vector::add(a, b)).collect();
        Ok(CEForm::raw(&self.frame, self.degree, values))
    }

    pub fn sub(&self, other: &CEForm) -> Result<CEForm> {
        self.add(&other.scale(&Scalar::from(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> CEForm {
        CEForm::raw(&self.frame, self.degree, self.values.iter().map(|v| vector::scale(v, s)).collect())
    }

    /// `(aφb)(u…) = a·φ(u…)·b`.
    pub fn bimodule_action(&self, a: &[Scalar], b: &[Scalar]) -> CEForm {
        let alg = &self.frame.algebra;
        CEForm::raw(&self.frame, self.degree, self.values.iter().map(|v| alg.mul(&alg.mul(a, v), b)).collect())
    }

    /// `φ(u_{t₁}, …, u_{t_k})` for arbitrary generator indices.
    pub fn eval_indices(&self, t: &[usize]) -> Vec<Scalar> {
        let mut t = t.to_vec();
        let m = self.frame.algebra.dim();
        match sort_sign(&mut t) {
            None => vector::zeros(m),
            Some(neg) => {
                let i = self.tuples.binary_search(&t).expect("sorted tuple of the right length");
                if neg {
                    vector::scale(&self.values[i], &Scalar::from(-1))
                } else {
                    self.values[i].clone()
                }
            }
        }
    }

    /// `φ(v, u_{t₁}, …)` with `v` in frame coordinates.
    fn eval_first(&self, v: &FrameCoords, rest: &[usize]) -> Vec<Scalar> {
        let alg = &self.frame.algebra;
        let mut acc = vector::zeros(alg.dim());
        let mut t = Vec::with_capacity(rest.len() + 1);
        for (q, z) in v.iter().enumerate().filter(|(_, z)| !vector::is_zero(z)) {
            t.clear();
            t.push(q);
            t.extend_from_slice(rest);
            let val = self.eval_indices(&t);
            if !vector::is_zero(&val) {
                acc = vector::add(&acc, &alg.mul(z, &val));
            }
        }
        acc
    }

    /// `φ(v₁, …, v_k)` for arguments in frame coordinates, expanded
    /// centre-multilinearly.
    pub fn eval_coords(&self, args: &[FrameCoords]) -> Result<Vec<Scalar>> {
        if args.len() != self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, found: args.len() });
        }
        let alg = &self.frame.algebra;
        let mut acc = vector::zeros(alg.dim());
        let mut stack: Vec<(Vec<usize>, Vec<Scalar>)> = vec![(Vec::new(), alg.unit().to_vec())];
        for arg in args {
            let mut next = Vec::new();
            for (t, c) in &stack {
                for (q, z) in arg.iter().enumerate().filter(|(_, z)| !vector::is_zero(z)) {
                    if t.contains(&q) {
                        continue;
                    }
                    let mut t2 = t.clone();
                    t2.push(q);
                    next.push((t2, alg.mul(c, z)));
                }
            }
            stack = next;
        }
        for (t, c) in stack {
            let val = self.eval_indices(&t);
            if !vector::is_zero(&val) {
                acc = vector::add(&acc, &alg.mul(&c, &val));
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, args: &[Derivation]) -> Result<Vec<Scalar>> {
        let coords = args.iter().map(|u| self.frame.coords(u)).collect::<Result<Vec<_>>>()?;
        self.eval_coords(&coords)
    }

    /// Respects every central relation `Σ z_q u_q = 0` of the frame.
    pub fn is_admissible(&self) -> bool {
        if self.degree == 0 || self.frame.relations.is_empty() {
            return true;
        }
        let rests = combinations(self.frame.rank(), self.degree - 1);
        self.frame.relations.iter().all(|rel| rests.iter().all(|rest| vector::is_zero(&self.eval_first(rel, rest))))
    }
}

/// The CE coboundary without the `1/(k+1)` prefactor.
pub fn ce_d(phi: &CEForm) -> CEForm {
    let frame = &phi.frame;
    let alg = &frame.algebra;
    let k = phi.degree;
    let tuples = combinations(frame.rank(), k + 1);
    let minus = Scalar::from(-1);
    let values = tuples
        .iter()
        .map(|t| {
            let mut acc = vector::zeros(alg.dim());
            for i in 0..=k {
                let rest: Vec<usize> = t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                let val = frame.generators[t[i]].apply(&phi.eval_indices(&rest));
                if i % 2 == 0 {
                    acc = vector::add(&acc, &val);
                } else {
                    vector::axpy(&mut acc, &minus, &val);
                }
            }
            for r in 0..=k {
                for s in r + 1..=k {
                    let rest: Vec<usize> =
                        t.iter().enumerate().filter(|&(j, _)| j != r && j != s).map(|(_, &x)| x).collect();
                    let val = phi.eval_first(frame.bracket_coords(t[r], t[s]), &rest);
                    if (r + s) % 2 == 0 {
                        acc = vector::add(&acc, &val);
                    } else {
                        vector::axpy(&mut acc, &minus, &val);
                    }
                }
            }
            acc
        })
        .collect();
    CEForm { frame: frame.clone(), degree: k + 1, tuples: Arc::new(tuples), values }
}

/// `(da)(u) = u(a)`.
pub fn exact(frame: &Arc<DerivationFrame>, a: &[Scalar]) -> CEForm {
    ce_d(&CEForm::function(frame, a))
}

/// Unnormalized shuffle product.
pub fn wedge(phi: &CEForm, psi: &CEForm) -> Result<CEForm> {
    phi.same_frame(psi)?;
    let frame = &phi.frame;
    let alg = &frame.algebra;
    let (p, q) = (phi.degree, psi.degree);
    let tuples = combinations(frame.rank(), p + q);
    let picks = combinations(p + q, p);
    let values = tuples
        .iter()
        .map(|t| {
            let mut acc = vector::zeros(alg.dim());
            for s in &picks {
                let left: Vec<usize> = s.iter().map(|&i| t[i]).collect();
                let right: Vec<usize> = (0..p + q).filter(|i| !s.contains(i)).map(|i| t[i]).collect();
                let a = phi.eval_indices(&left);
                if vector::is_zero(&a) {
                    continue;
                }
                let prod = alg.mul(&a, &psi.eval_indices(&right));
                let inversions: usize = s.iter().enumerate().map(|(j, &i)| i - j).sum();
                if inversions % 2 == 0 {
                    acc = vector::add(&acc, &prod);
                } else {
                    acc = vector::sub(&acc, &prod);
                }
            }
            acc
        })
        .collect();
    Ok(CEForm { frame: frame.clone(), degree: p + q, tuples: Arc::new(tuples), values })
}

/// `(ι_uφ)(u₁, …) = φ(u, u₁, …)`, without a factor `k`.
pub fn contract(u: &Derivation, phi: &CEForm) -> Result<CEForm> {
    if phi.degree == 0 {
        return Err(Error::InvalidParameter("contraction of a 0-form".into()));
    }
    let coords = phi.frame.coords(u)?;
    Ok(contract_coords(&coords, phi))
}

fn contract_coords(coords: &FrameCoords, phi: &CEForm) -> CEForm {
    let tuples = combinations(phi.frame.rank(), phi.degree - 1);
    let values = tuples.iter().map(|t| phi.eval_first(coords, t)).collect();
    CEForm { frame: phi.frame.clone(), degree: phi.degree - 1, tuples: Arc::new(tuples), values }
}

/// Cartan formula `L_u = d∘ι_u + ι_u∘d`.
pub fn lie_derivative(u: &Derivation, phi: &CEForm) -> Result<CEForm> {
    let coords = phi.frame.coords(u)?;
    let second = contract_coords(&coords, &ce_d(phi));
    if phi.degree == 0 {
        return Ok(second);
    }
    ce_d(&contract_coords(&coords, phi)).add(&second)
}

/// `φ*(u₁, …, u_k) = (φ(u₁*, …, u_k*))*`.
pub fn form_involution(phi: &CEForm) -> Result<CEForm> {
    let frame = &phi.frame;
    let stars = frame.stars.as_ref().ok_or_else(|| Error::NoInvolution(frame.algebra.label().to_string()))?;
    let values = phi
        .tuples
        .iter()
        .map(|t| {
            let args: Vec<FrameCoords> = t.iter().map(|&q| stars[q].clone()).collect();
            frame.algebra.star(&phi.eval_coords(&args)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CEForm { frame: frame.clone(), degree: phi.degree, tuples: phi.tuples.clone(), values })
}

/// Forms `e_j` placed on a single tuple, restricted to admissible ones.
pub fn form_basis(frame: &Arc<DerivationFrame>, degree: usize) -> Result<Vec<CEForm>> {
    let m = frame.algebra.dim();
    let n = combinations(frame.rank(), degree).len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..m {
            let mut values = vec![vector::zeros(m); n];
            values[i] = vector::unit(m, j);
            out.push(CEForm::raw(frame, degree, values));
        }
    }
    if frame.is_free() || degree == 0 {
        return Ok(out);
    }
    let space = admissible_space(frame, degree)?;
    Ok(space.basis().row_vectors().map(|v| CEForm::raw(frame, degree, v.chunks(m).map(<[Scalar]>::to_vec).collect())).collect())
}

/// Admissible `k`-forms as a subspace of flattened components.
pub fn admissible_space(frame: &Arc<DerivationFrame>, degree: usize) -> Result<Subspace> {
    let m = frame.algebra.dim();
    let n = combinations(frame.rank(), degree).len();
    if degree == 0 {
        return Ok(Subspace::full(m));
    }
    if frame.relations.is_empty() || n == 0 {
        return Ok(Subspace::full(n * m));
    }
    let rests = combinations(frame.rank(), degree - 1);
    let mut cols = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let mut values = vec![vector::zeros(m); n];
            values[i] = vector::unit(m, j);
            let f = CEForm::raw(frame, degree, values);
            let mut col = Vec::new();
            for rel in &frame.relations {
                for rest in &rests {
                    col.extend(f.eval_first(rel, rest));
                }
            }
            cols.push(col);
        }
    }
    Ok(kernel(&Matrix::from_columns(cols[0].len(), &cols)?))
}

/// Dimensions and bijectivity of `d(A) → Hom_{A−A}(O¹[A], A)`, `u ↦ (φ ↦ φ(u))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub derivations_dim: usize,
    pub dual_dim: usize,
    pub one_forms_dim: usize,
    pub injective: bool,
    pub bijective: bool,
}

/// `O¹[A]`: the sub-bimodule of CE 1-forms generated by `da`, with
/// `(aφb)(u) = a·φ(u)·b`.
#[derive(Clone, Debug)]
pub struct CeOneForms {
    frame: Arc<DerivationFrame>,
    pub module: FiniteModule,
    space: Subspace,
}

pub fn ce_one_forms(frame: &Arc<DerivationFrame>) -> Result<CeOneForms> {
    CeOneForms::new(frame)
}

impl CeOneForms {
    pub fn new(frame: &Arc<DerivationFrame>) -> Result<Self> {
        let alg = &frame.algebra;
        let m = alg.dim();
        let r = frame.rank();
        let id = Matrix::identity(r);
        let left = (0..m).map(|i| id.kron(alg.left_mult(i))).collect::<Vec<_>>();
        let right =
            side_generators(alg, Side::Algebra).iter().map(|g| id.kron(&alg.right_mult_by(g))).collect::<Vec<_>>();
        let ambient = FiniteModule::new_unchecked(alg, ModuleKind::CentralBimodule, r * m, left, right, "CE¹");
        let gens = (0..m).map(|j| exact(frame, &vector::unit(m, j)).flatten()).collect();
        let space = ambient.closure(gens, Closure::Both)?;
        let module = ambient.submodule(&space)?.with_label(format!("O¹[{}]", alg.label()));
        Ok(CeOneForms { frame: frame.clone(), module, space })
    }

    pub fn frame(&self) -> &Arc<DerivationFrame> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Span of the flattened components inside all CE 1-forms.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn form(&self, coords: &[Scalar]) -> CEForm {
        let m = self.frame.algebra.dim();
        let mut flat = vector::zeros(self.space.ambient_dim());
        for (c, b) in coords.iter().zip(self.space.basis().row_vectors()) {
            vector::axpy(&mut flat, c, b);
        }
        CEForm::raw(&self.frame, 1, flat.chunks(m).map(<[Scalar]>::to_vec).collect())
    }

    pub fn basis_forms(&self) -> Vec<CEForm> {
        (0..self.dim()).map(|k| self.form(&vector::unit(self.dim(), k))).collect()
    }

    pub fn coordinates(&self, phi: &CEForm) -> Option<Vec<Scalar>> {
        if !Arc::ptr_eq(&phi.frame, &self.frame) || phi.degree != 1 {
            return None;
        }
        self.space.coordinates(&phi.flatten())
    }

    /// `S` with `φ* = S·conj(φ)` in module coordinates.
    pub fn star_matrix(&self) -> Result<Matrix> {
        let cols = self
            .basis_forms()
            .iter()
            .map(|f| {
                self.coordinates(&form_involution(f)?)
                    .ok_or_else(|| Error::Frame("O¹[A] is not stable under the involution".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(self.dim(), &cols)
    }
}

pub fn one_form_duality(frame: &Arc<DerivationFrame>) -> Result<DualityReport> {
    let alg = &frame.algebra;
    let m = alg.dim();
    let o1 = CeOneForms::new(frame)?;
    let (module, forms) = (&o1.module, o1.basis_forms());
    let target = FiniteModule::regular(alg, ModuleKind::CentralBimodule);
    let hom = hom_space(module, &target)?;
    let ders = derivation_basis(alg);
    let mut images = Vec::new();
    for u in &ders {
        let cols = forms.iter().map(|f| f.eval(std::slice::from_ref(u))).collect::<Result<Vec<_>>>()?;
        let ev = Matrix::from_columns(m, &cols)?;
        if !hom.contains(ev.entries()) {
            return Err(Error::NotModuleLinear("evaluation at a derivation is not a bimodule map".into()));
        }
        images.push(ev.entries().to_vec());
    }
    let rank = Subspace::span(m * forms.len(), images)?.dim();
    let injective = rank == ders.len();
    Ok(DualityReport {
        derivations_dim: ders.len(),
        dual_dim: hom.dim(),
        one_forms_dim: module.dim(),
        injective,
        bijective: injective && rank == hom.dim(),
    })
}

/// `a·de_i = de_i·a` for all basis pairs, or the first failing `(a, i)`.
pub fn differentials_central(frame: &Arc<DerivationFrame>) -> std::result::Result<(), (usize, usize)> {
    let alg = &frame.algebra;
    let m = alg.dim();
    for i in 0..m {
        let de = exact(frame, &vector::unit(m, i));
        for a in 0..m {
            let ea = vector::unit(m, a);
            if de.bimodule_action(&ea, alg.unit()) != de.bimodule_action(alg.unit(), &ea) {
                return Err((a, i));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, matrix_algebra, su_basis, truncated_polynomial_algebra};
    use crate::jets::o1_module;

    fn basis_forms(frame: &Arc<DerivationFrame>, k: usize) -> Vec<CEForm> {
        form_basis(frame, k).unwrap()
    }

    #[test]
    fn exact_forms_on_m2() {
        let frame = DerivationFrame::su(2).unwrap();
        let su = su_basis(2).unwrap();
        let (f, g, h) = (&su.elements()[0], &su.elements()[1], &su.elements()[2]);
        let df = exact(&frame, f.coeffs());
        // (dε_F)(u_G) = [ε_G, ε_F] = −2ε_H
        assert_eq!(df.eval_indices(&[1]), h.scale(&Scalar::from(-2)).into_coeffs());
        assert_eq!(df.eval_indices(&[1]), g.commutator(f).unwrap().into_coeffs());
        let one = exact(&frame, frame.algebra().unit());
        assert!(one.is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        let frames = [DerivationFrame::su(2).unwrap(), DerivationFrame::standard(&truncated_polynomial_algebra(3).unwrap()).unwrap()];
        for frame in &frames {
            for k in 0..=2 {
                for f in basis_forms(frame, k) {
                    assert!(ce_d(&ce_d(&f)).is_zero());
                }
            }
        }
    }

    #[test]
    fn maurer_cartan() {
        let frame = DerivationFrame::su(2).unwrap();
        let su = su_basis(2).unwrap();
        for r in 0..3 {
            let dt = ce_d(&CEForm::theta(&frame, r).unwrap());
            for q in 0..3 {
                for s in 0..3 {
                    let expected = vector::scale(frame.algebra().unit(), &-su.c(r, q, s));
                    assert_eq!(dt.eval_indices(&[q, s]), expected);
                }
            }
        }
    }

    #[test]
    fn ratio_against_normalized_formula() {
        let frame = DerivationFrame::su(2).unwrap();
        let u = frame.generators();
        for phi in basis_forms(&frame, 1) {
            let dphi = ce_d(&phi);
            for a in 0..3 {
                for b in 0..3 {
                    let br = u[a].bracket(&u[b]).unwrap();
                    let mut normalized = u[a].apply(&phi.eval_indices(&[b]));
                    normalized = vector::sub(&normalized, &u[b].apply(&phi.eval_indices(&[a])));
                    normalized = vector::sub(&normalized, &phi.eval(&[br]).unwrap());
                    let normalized = vector::scale(&normalized, &Scalar::from_ratio(1, 2));
                    assert_eq!(dphi.eval_indices(&[a, b]), vector::scale(&normalized, &Scalar::from(2)));
                }
            }
        }
    }

    #[test]
    fn wedge_examples() {
        let frame = DerivationFrame::su(2).unwrap();
        let alg = frame.algebra().clone();
        let (x, y) = (vector::unit(4, 1), vector::unit(4, 2));
        let w = wedge(&CEForm::function(&frame, &x), &CEForm::function(&frame, &y)).unwrap();
        assert_eq!(w.values()[0], alg.mul(&x, &y));
        for q in 0..3 {
            for s in 0..3 {
                let t = wedge(&CEForm::theta(&frame, q).unwrap(), &CEForm::theta(&frame, s).unwrap()).unwrap();
                for a in 0..3 {
                    for b in 0..3 {
                        let mut expected = Scalar::zero();
                        if q == a && s == b {
                            expected += Scalar::one();
                        }
                        if q == b && s == a {
                            expected -= Scalar::one();
                        }
                        assert_eq!(t.eval_indices(&[a, b]), vector::scale(alg.unit(), &expected));
                    }
                }
            }
        }
        // no graded commutativity for matrix-valued forms
        let p = exact(&frame, &vector::unit(4, 1));
        let q = exact(&frame, &vector::unit(4, 2));
        assert_ne!(wedge(&p, &q).unwrap(), wedge(&q, &p).unwrap().scale(&Scalar::from(-1)));
    }

    #[test]
    fn contraction() {
        let frame = DerivationFrame::su(2).unwrap();
        let u = frame.generators().to_vec();
        for r in 0..3 {
            for q in 0..3 {
                let c = contract(&u[q], &CEForm::theta(&frame, r).unwrap()).unwrap();
                let expected = if r == q { frame.algebra().unit().to_vec() } else { vector::zeros(4) };
                assert_eq!(c.values()[0], expected);
            }
        }
        for f in basis_forms(&frame, 2) {
            for v in &u {
                assert!(contract(v, &contract(v, &f).unwrap()).unwrap().is_zero());
            }
        }
        assert!(contract(&u[0], &CEForm::function(&frame, &vector::unit(4, 0))).is_err());
    }

    #[test]
    fn lie_derivative_examples() {
        let frame = DerivationFrame::su(2).unwrap();
        let u = frame.generators().to_vec();
        for v in &u {
            for a in 0..4 {
                let e = vector::unit(4, a);
                let l = lie_derivative(v, &CEForm::function(&frame, &e)).unwrap();
                assert_eq!(l.values()[0], v.apply(&e));
                let lhs = lie_derivative(v, &exact(&frame, &e)).unwrap();
                assert_eq!(lhs, ce_d(&l));
            }
        }
        for f in basis_forms(&frame, 1).into_iter().step_by(3) {
            let (a, b) = (&u[0], &u[1]);
            let br = a.bracket(b).unwrap();
            let lhs = lie_derivative(&br, &f).unwrap();
            let ab = lie_derivative(a, &lie_derivative(b, &f).unwrap()).unwrap();
            let ba = lie_derivative(b, &lie_derivative(a, &f).unwrap()).unwrap();
            assert_eq!(lhs, ab.sub(&ba).unwrap());
        }
    }

    #[test]
    fn involution() {
        let frame = DerivationFrame::su(2).unwrap();
        for q in 0..3 {
            let t = CEForm::theta(&frame, q).unwrap();
            assert_eq!(form_involution(&t).unwrap(), t);
        }
        for f in basis_forms(&frame, 1) {
            assert_eq!(form_involution(&form_involution(&f).unwrap()).unwrap(), f);
        }
        let real = CEForm::function(&frame, &vector::unit(4, 0));
        assert_eq!(form_involution(&real).unwrap(), real);
    }

    #[test]
    fn duality_reports() {
        let r = one_form_duality(&DerivationFrame::su(2).unwrap()).unwrap();
        assert_eq!((r.derivations_dim, r.dual_dim, r.bijective), (3, 3, true));
        let r = one_form_duality(&DerivationFrame::standard(&function_algebra(3).unwrap()).unwrap()).unwrap();
        assert_eq!((r.derivations_dim, r.dual_dim, r.bijective), (0, 0, true));
        let t = truncated_polynomial_algebra(3).unwrap();
        let r = one_form_duality(&DerivationFrame::standard(&t).unwrap()).unwrap();
        assert_eq!((r.derivations_dim, r.dual_dim, r.bijective), (2, 2, true));
        assert_eq!(r.one_forms_dim, o1_module(&t).unwrap().dim());
    }

    #[test]
    fn centrality_of_differentials() {
        let t = DerivationFrame::standard(&truncated_polynomial_algebra(3).unwrap()).unwrap();
        assert!(!t.is_free());
        assert_eq!(differentials_central(&t), Ok(()));
        assert_eq!(differentials_central(&DerivationFrame::standard(&function_algebra(3).unwrap()).unwrap()), Ok(()));
        let (a, i) = differentials_central(&DerivationFrame::su(2).unwrap()).unwrap_err();
        let frame = DerivationFrame::su(2).unwrap();
        let de = exact(&frame, &vector::unit(4, i));
        let ea = vector::unit(4, a);
        assert_ne!(de.bimodule_action(&ea, frame.algebra().unit()), de.bimodule_action(frame.algebra().unit(), &ea));
    }

    #[test]
    fn frames_must_span() {
        let a = matrix_algebra(2).unwrap();
        let su = su_basis(2).unwrap();
        let gens = su.inner_derivations()[..2].to_vec();
        assert!(matches!(DerivationFrame::new(&a, gens, vec!["a".into(), "b".into()]), Err(Error::Frame(_))));
        let c = DerivationFrame::standard(&function_algebra(2).unwrap()).unwrap();
        assert_eq!(c.rank(), 0);
        assert!(exact(&c, &vector::unit(2, 0)).is_zero());
    }

    #[test]
    fn relations_constrain_forms() {
        let t = DerivationFrame::standard(&truncated_polynomial_algebra(3).unwrap()).unwrap();
        assert_eq!(t.rank(), 1);
        assert_eq!(admissible_space(&t, 1).unwrap().dim(), 2);
        assert!(CEForm::theta(&t, 0).is_err());
        assert!(form_basis(&t, 1).unwrap().iter().all(CEForm::is_admissible));
    }
}
