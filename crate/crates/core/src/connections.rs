//! Connections along derivations and universal connections.
//!
//! A [`DVConnection`] stores one `K`-linear endomorphism `∇_q` of `P` per
//! frame generator and extends centre-linearly: `∇_{Σ z_q u_q} = Σ z_q ∇_q`.
//!
//! A [`UniversalConnection`] on a left module is stored through the
//! isomorphism `A^{⊗(k+1)} ⊗_A P ≅ A^{⊗k} ⊗ P`, `a₀⊗…⊗a_k⊗p ↦ a₀⊗…⊗a_{k−1}⊗a_k p`;
//! degree-one values then lie in the kernel of `a⊗p ↦ ap` and `δa⊗p` reads
//! `1⊗ap − a⊗p`. Right modules use the mirror image `P⊗A^{⊗k}`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{dual_module, side_generators, tensor_modules, DualModule, FiniteModule, ModuleKind, Side, TensorProduct};
use crate::algebra::{is_morphism, same_algebra, Derivation};
use crate::ce::{ce_d, CEForm, CeOneForms, DerivationFrame, FrameCoords};
use crate::error::{Error, Result};
use crate::exactlin::{solve, vector, Matrix, Scalar};

/// `∇ : u ↦ ∇_u ∈ End_K(P)`, centre-linear in `u`.
#[derive(Clone, Debug)]
pub struct DVConnection {
    module: FiniteModule,
    frame: Arc<DerivationFrame>,
    endos: Vec<Matrix>,
}

/// First violated condition found by [`dv_defect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DvWitness {
    /// `Σ z_q ∇_q ≠ 0` for a central relation `Σ z_q u_q = 0`.
    Relation { relation: usize },
    /// `∇_u(a·p) ≠ u(a)·p + a·∇_u(p)` for side generator `a`, basis vector `p`.
    Left { generator: usize, a: usize, p: usize },
    /// `∇_u(p·b) ≠ ∇_u(p)·b + p·u(b)`.
    Right { generator: usize, b: usize, p: usize },
}

impl fmt::Display for DvWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DvWitness::Relation { relation } => write!(f, "centre-linearity fails on relation {relation}"),
            DvWitness::Left { generator, a, p } => {
                write!(f, "Leibniz fails for u{generator} on (a{a}, p{p}, 1)")
            }
            DvWitness::Right { generator, b, p } => {
                write!(f, "Leibniz fails for u{generator} on (1, p{p}, b{b})")
            }
        }
    }
}

impl DVConnection {
    /// Shapes only; see [`dv_check`] for the axioms.
    pub fn new(module: &FiniteModule, frame: &Arc<DerivationFrame>, endos: Vec<Matrix>) -> Result<Self> {
        if !same_algebra(module.algebra(), frame.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        if endos.len() != frame.rank() {
            return Err(Error::DimensionMismatch { expected: frame.rank(), found: endos.len() });
        }
        if let Some(e) = endos.iter().find(|e| e.rows() != module.dim() || e.cols() != module.dim()) {
            return Err(Error::DimensionMismatch { expected: module.dim(), found: e.rows().max(e.cols()) });
        }
        Ok(DVConnection { module: module.clone(), frame: frame.clone(), endos })
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn frame(&self) -> &Arc<DerivationFrame> {
        &self.frame
    }

    pub fn endos(&self) -> &[Matrix] {
        &self.endos
    }

    /// `∇_q` for the frame generator `u_q`.
    pub fn endo(&self, q: usize) -> &Matrix {
        &self.endos[q]
    }

    pub fn along_coords(&self, coords: &FrameCoords) -> Result<Matrix> {
        let n = self.module.dim();
        let mut out = Matrix::zeros(n, n);
        for (z, e) in coords.iter().zip(&self.endos) {
            if !vector::is_zero(z) {
                out = &out + &(&self.module.centre_action(z)? * e);
            }
        }
        Ok(out)
    }

    /// `∇_u` for an arbitrary derivation.
    pub fn covariant(&self, u: &Derivation) -> Result<Matrix> {
        self.along_coords(&self.frame.coords(u)?)
    }

    pub fn is_real(&self, star: &Matrix) -> Result<bool> {
        Ok(conjugate(self, star)?.endos == self.endos)
    }
}

pub fn dv_defect(conn: &DVConnection) -> Option<DvWitness> {
    let p = &conn.module;
    let n = p.dim();
    for (i, rel) in conn.frame.relations().iter().enumerate() {
        match conn.along_coords(rel) {
            Ok(m) if m.is_zero() => {}
            _ => return Some(DvWitness::Relation { relation: i }),
        }
    }
    let (ls, rs) = p.sides();
    let alg = p.algebra();
    for (q, (u, e)) in conn.frame.generators().iter().zip(&conn.endos).enumerate() {
        for (a, (g, l)) in side_generators(alg, ls).iter().zip(p.left_generators()).enumerate() {
            let rhs = &p.left_action(&u.apply(g)).expect("derivations preserve the centre") + &(l * e);
            let diff = &(e * l) - &rhs;
            if let Some(col) = (0..n).find(|&c| !vector::is_zero(&diff.col(c))) {
                return Some(DvWitness::Left { generator: q, a, p: col });
            }
        }
        for (b, (g, r)) in side_generators(alg, rs).iter().zip(p.right_generators()).enumerate() {
            let rhs = &p.right_action(&u.apply(g)).expect("derivations preserve the centre") + &(r * e);
            let diff = &(e * r) - &rhs;
            if let Some(col) = (0..n).find(|&c| !vector::is_zero(&diff.col(c))) {
                return Some(DvWitness::Right { generator: q, b, p: col });
            }
        }
    }
    None
}

/// Centre-linearity and the Leibniz rule on every side generator.
pub fn dv_check(conn: &DVConnection) -> bool {
    dv_defect(conn).is_none()
}

/// `∇_u(a) = u(a)` on the regular central bimodule.
pub fn canonical_connection(frame: &Arc<DerivationFrame>) -> DVConnection {
    canonical_connection_of_kind(frame, ModuleKind::CentralBimodule)
}

pub fn canonical_connection_of_kind(frame: &Arc<DerivationFrame>, kind: ModuleKind) -> DVConnection {
    let module = FiniteModule::regular(frame.algebra(), kind);
    let endos = frame.generators().iter().map(|u| u.action().clone()).collect();
    DVConnection { module, frame: frame.clone(), endos }
}

/// Some `b` with `u = ad b`.
pub fn inner_generator(u: &Derivation) -> Option<Vec<Scalar>> {
    let alg = u.algebra();
    let m = alg.dim();
    let cols: Vec<Vec<Scalar>> =
        (0..m).map(|i| (alg.left_mult(i) - alg.right_mult(i)).transpose().entries().to_vec()).collect();
    let target = u.action().transpose().entries().to_vec();
    let basis = Matrix::from_columns(m * m, &cols).ok()?;
    solve(&basis, &target).ok().flatten()
}

/// `∇_{ad b}(p) = bp − pb` on a central bimodule.
pub fn inner_connection(frame: &Arc<DerivationFrame>, p: &FiniteModule) -> Result<DVConnection> {
    if p.kind() != ModuleKind::CentralBimodule {
        return Err(Error::KindMismatch(format!("inner connections need a central bimodule, got {:?}", p.kind())));
    }
    let endos = frame
        .generators()
        .iter()
        .enumerate()
        .map(|(q, u)| {
            let b = inner_generator(u).ok_or_else(|| Error::Frame(format!("generator u{q} is not inner")))?;
            Ok(&p.left_action(&b)? - &p.right_action(&b)?)
        })
        .collect::<Result<Vec<_>>>()?;
    DVConnection::new(p, frame, endos)
}

/// `R_{u,v} = ∇_u∇_v − ∇_v∇_u − ∇_{[u,v]}`.
pub fn curvature(conn: &DVConnection, u: &Derivation, v: &Derivation) -> Result<Matrix> {
    let (nu, nv) = (conn.covariant(u)?, conn.covariant(v)?);
    let nb = conn.covariant(&u.bracket(v)?)?;
    Ok(&(&(&nu * &nv) - &(&nv * &nu)) - &nb)
}

/// `R_{u_q,u_s}` from the stored generators and bracket coordinates.
pub fn curvature_on_generators(conn: &DVConnection, q: usize, s: usize) -> Result<Matrix> {
    let (a, b) = (&conn.endos[q], &conn.endos[s]);
    let nb = conn.along_coords(conn.frame.bracket_coords(q, s))?;
    Ok(&(&(a * b) - &(b * a)) - &nb)
}

pub fn is_flat(conn: &DVConnection) -> Result<bool> {
    let r = conn.frame.rank();
    for q in 0..r {
        for s in q + 1..r {
            if !curvature_on_generators(conn, q, s)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn same_frame(a: &DVConnection, b: &DVConnection) -> Result<()> {
    if Arc::ptr_eq(&a.frame, &b.frame) {
        Ok(())
    } else {
        Err(Error::Frame("connections are stored against different frames".into()))
    }
}

pub fn direct_sum(a: &DVConnection, b: &DVConnection) -> Result<DVConnection> {
    same_frame(a, b)?;
    let module = a.module.direct_sum(&b.module)?;
    let endos = a.endos.iter().zip(&b.endos).map(|(x, y)| Matrix::block_diag(&[x, y])).collect();
    DVConnection::new(&module, &a.frame, endos)
}

/// The connection on `P*` with `u⟨p, f⟩ = ⟨∇_u p, f⟩ + ⟨p, ∇'_u f⟩`, where
/// `⟨p, f⟩ = f(p)`.
pub fn dual(conn: &DVConnection) -> Result<(DualModule, DVConnection)> {
    let d = dual_module(&conn.module)?;
    let endos = conn
        .frame
        .generators()
        .iter()
        .zip(&conn.endos)
        .map(|(u, e)| {
            let cols = d
                .maps
                .iter()
                .map(|f| {
                    let g = &(u.action() * f) - &(f * e);
                    d.coordinates(&g).ok_or_else(|| {
                        Error::DualityDegenerate("u∘f − f∘∇_u has no coordinates in the dual basis".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Matrix::from_columns(d.module.dim(), &cols)
        })
        .collect::<Result<Vec<_>>>()?;
    let conn = DVConnection::new(&d.module, &conn.frame, endos)?;
    Ok((d, conn))
}

/// `(∇¹⊗∇²)_u = ∇¹_u⊗1 + 1⊗∇²_u`, descended to the balanced tensor product.
pub fn tensor(a: &DVConnection, b: &DVConnection) -> Result<(TensorProduct, DVConnection)> {
    same_frame(a, b)?;
    let t = tensor_modules(&a.module, &b.module)?;
    let (ia, ib) = (Matrix::identity(a.module.dim()), Matrix::identity(b.module.dim()));
    let endos = a
        .endos
        .iter()
        .zip(&b.endos)
        .enumerate()
        .map(|(q, (x, y))| {
            let e = &x.kron(&ib) + &ia.kron(y);
            if !t.quotient.descends(&e, &t.quotient) {
                return Err(Error::LeibnizViolation(format!("(∇¹⊗∇²)_u{q} does not preserve the balancing relations")));
            }
            Ok(t.quotient.induced(&e, &t.quotient))
        })
        .collect::<Result<Vec<_>>>()?;
    let conn = DVConnection::new(&t.module, &a.frame, endos)?;
    Ok((t, conn))
}

/// `∇*_u(p) = (∇_{u*}(p*))*`, where `p* = S·conj(p)`.
pub fn conjugate(conn: &DVConnection, star: &Matrix) -> Result<DVConnection> {
    if !matches!(conn.module.kind(), ModuleKind::CentralBimodule | ModuleKind::CentreBimodule) {
        return Err(Error::KindMismatch(format!("conjugation needs a *-module, got {:?}", conn.module.kind())));
    }
    let n = conn.module.dim();
    if star.rows() != n || star.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: star.rows() });
    }
    let label = conn.frame.algebra().label().to_string();
    let sc = star.conj();
    let endos = conn
        .frame
        .generators()
        .iter()
        .map(|u| {
            let e = conn.covariant(&u.star().map_err(|_| Error::NoInvolution(label.clone()))?)?;
            Ok(&(star * &e.conj()) * &sc)
        })
        .collect::<Result<Vec<_>>>()?;
    DVConnection::new(&conn.module, &conn.frame, endos)
}

/// `σ_q = ∇_q − ∇'_q`, each a module endomorphism.
pub fn difference(a: &DVConnection, b: &DVConnection) -> Result<Vec<Matrix>> {
    same_frame(a, b)?;
    if a.module != b.module {
        return Err(Error::KindMismatch("connections on different modules".into()));
    }
    let family: Vec<Matrix> = a.endos.iter().zip(&b.endos).map(|(x, y)| x - y).collect();
    if let Some(q) = family.iter().position(|s| !is_morphism(&a.module, &a.module, s)) {
        return Err(Error::NotModuleLinear(format!("difference along u{q} is not a module endomorphism")));
    }
    Ok(family)
}

/// `∇ + σ` for a family of module endomorphisms.
pub fn shift(conn: &DVConnection, family: &[Matrix]) -> Result<DVConnection> {
    if family.len() != conn.endos.len() {
        return Err(Error::DimensionMismatch { expected: conn.endos.len(), found: family.len() });
    }
    if let Some(q) = family.iter().position(|s| !is_morphism(&conn.module, &conn.module, s)) {
        return Err(Error::NotModuleLinear(format!("σ_{q} is not a module endomorphism")));
    }
    let endos = conn.endos.iter().zip(family).map(|(e, s)| e + s).collect();
    DVConnection::new(&conn.module, &conn.frame, endos)
}

/// `(Tφ)(u,v) = (dφ)(u,v) − ∇_u(φ)(v) + ∇_v(φ)(u)` as a map `O¹[A] → Ω²`.
#[derive(Clone, Debug)]
pub struct Torsion {
    forms: CeOneForms,
    map: Matrix,
}

impl Torsion {
    /// `dim Ω²_CE × dim O¹[A]`, columns the flattened `T(φ_k)`.
    pub fn matrix(&self) -> &Matrix {
        &self.map
    }

    pub fn apply(&self, phi: &CEForm) -> Result<CEForm> {
        let c = self.forms.coordinates(phi).ok_or_else(|| Error::Frame("form is not in O¹[A]".into()))?;
        let m = self.forms.frame().algebra().dim();
        let flat = self.map.apply(&c);
        CEForm::new(self.forms.frame(), 2, flat.chunks(m).map(<[Scalar]>::to_vec).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    /// First generator with `T(aφ) ≠ aT(φ)` (tagged `Algebra`) or
    /// `T(φa) ≠ T(φ)a` (tagged `Centre`).
    pub fn bimodule_defect(&self) -> Option<(usize, Side)> {
        let alg = self.forms.frame().algebra();
        let n2 = self.map.rows() / alg.dim().max(1);
        let id = Matrix::identity(n2);
        let module = &self.forms.module;
        for (a, l) in module.left_generators().iter().enumerate() {
            if &self.map * l != &id.kron(alg.left_mult(a)) * &self.map {
                return Some((a, Side::Algebra));
            }
        }
        let gens = side_generators(alg, Side::Algebra);
        for (b, (g, r)) in gens.iter().zip(module.right_generators()).enumerate() {
            if &self.map * r != &id.kron(&alg.right_mult_by(g)) * &self.map {
                return Some((b, Side::Centre));
            }
        }
        None
    }
}

pub fn torsion(conn: &DVConnection, forms: &CeOneForms) -> Result<Torsion> {
    if !Arc::ptr_eq(&conn.frame, forms.frame()) {
        return Err(Error::Frame("torsion needs the frame of the 1-forms".into()));
    }
    if conn.module != forms.module {
        return Err(Error::KindMismatch("torsion is defined for connections on O¹[A]".into()));
    }
    let basis = forms.basis_forms();
    let r = conn.frame.rank();
    let moved: Vec<Vec<CEForm>> =
        conn.endos.iter().map(|e| (0..basis.len()).map(|k| forms.form(&e.col(k))).collect()).collect();
    let cols = basis
        .iter()
        .enumerate()
        .map(|(k, phi)| {
            let dphi = ce_d(phi);
            let values = dphi
                .tuples()
                .iter()
                .zip(dphi.values())
                .map(|(t, v)| {
                    let (q, s) = (t[0], t[1]);
                    let a = moved[q][k].eval_indices(&[s]);
                    let b = moved[s][k].eval_indices(&[q]);
                    vector::add(&vector::sub(v, &a), &b)
                })
                .collect::<Vec<_>>();
            values.concat()
        })
        .collect::<Vec<_>>();
    let rows = conn.frame.algebra().dim() * r * r.saturating_sub(1) / 2;
    Ok(Torsion { forms: forms.clone(), map: Matrix::from_columns(rows, &cols)? })
}

/// Which action a universal connection differentiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hand {
    Left,
    Right,
}

/// `∇ : P → Ω¹A⊗_A P` (left) or `P → P⊗_A Ω¹A` (right), in the contracted model.
#[derive(Clone, Debug)]
pub struct UniversalConnection {
    module: FiniteModule,
    hand: Hand,
    map: Matrix,
}

/// First violated condition found by [`universal_defect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniversalWitness {
    /// `∇(p)` leaves `Ω¹⊗P`.
    NotOneForm { p: usize },
    /// Leibniz fails on `(e_a, p)`.
    Leibniz { a: usize, p: usize },
}

/// The one-sided structure of `P` over the whole algebra, with the centre on the other side.
pub fn one_sided(p: &FiniteModule, hand: Hand) -> Result<FiniteModule> {
    let alg = p.algebra();
    let (ls, rs) = p.sides();
    let centre = side_generators(alg, Side::Centre).iter().map(|z| p.centre_action(z)).collect::<Result<Vec<_>>>()?;
    match hand {
        Hand::Left if ls == Side::Algebra => {
            Ok(FiniteModule::new_unchecked(alg, ModuleKind::Left, p.dim(), p.left_generators().to_vec(), centre, p.label()))
        }
        Hand::Right if rs == Side::Algebra => {
            Ok(FiniteModule::new_unchecked(alg, ModuleKind::Right, p.dim(), centre, p.right_generators().to_vec(), p.label()))
        }
        _ => Err(Error::KindMismatch(format!("{:?} has no {hand:?} algebra action", p.kind()))),
    }
}

impl UniversalConnection {
    /// One-sided modules only; bimodules go through [`bimodule_pair_check`]
    /// or a [`DVConnection`].
    pub fn new(module: &FiniteModule, map: Matrix) -> Result<Self> {
        let hand = match module.kind() {
            ModuleKind::Left => Hand::Left,
            ModuleKind::Right => Hand::Right,
            other => {
                return Err(Error::KindMismatch(format!(
                    "universal connections live on one-sided modules, got {other:?}; use a DV connection or a bimodule pair"
                )))
            }
        };
        let m = module.algebra().dim();
        if map.rows() != m * module.dim() || map.cols() != module.dim() {
            return Err(Error::DimensionMismatch { expected: m * module.dim(), found: map.rows() });
        }
        Ok(UniversalConnection { module: module.clone(), hand, map })
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn hand(&self) -> Hand {
        self.hand
    }

    pub fn map(&self) -> &Matrix {
        &self.map
    }

    fn action(&self, a: &[Scalar]) -> Matrix {
        match self.hand {
            Hand::Left => self.module.left_action(a),
            Hand::Right => self.module.right_action(a),
        }
        .expect("one-sided modules carry the full algebra")
    }

    /// `(a⊗p ↦ ap)` or `(p⊗a ↦ pa)`.
    fn contraction(&self) -> Matrix {
        let (m, n) = (self.module.algebra().dim(), self.module.dim());
        let blocks: Vec<Matrix> = (0..m).map(|i| self.action(&vector::unit(m, i))).collect();
        match self.hand {
            Hand::Left => Matrix::hstack(&blocks.iter().collect::<Vec<_>>()).expect("equal heights"),
            Hand::Right => Matrix::from_fn(n, n * m, |r, c| blocks[c % m][(r, c / m)].clone()),
        }
    }

    /// `δa⊗p ↦ 1⊗ap − a⊗p`, or `p⊗δa ↦ p⊗a − pa⊗1`.
    fn delta_term(&self, a: &[Scalar]) -> Matrix {
        let alg = self.module.algebra();
        let one = Matrix::from_columns(alg.dim(), &[alg.unit().to_vec()]).expect("unit column");
        let av = Matrix::from_columns(alg.dim(), &[a.to_vec()]).expect("column");
        let id = Matrix::identity(self.module.dim());
        let la = self.action(a);
        match self.hand {
            Hand::Left => &one.kron(&la) - &av.kron(&id),
            Hand::Right => &id.kron(&av) - &la.kron(&one),
        }
    }

    /// The algebra acting on the model factor adjacent to nothing: `a⊗p ↦ ba⊗p`
    /// or `p⊗a ↦ p⊗ab`.
    fn outer_action(&self, b: &[Scalar], k: usize) -> Matrix {
        let alg = self.module.algebra();
        let rest = Matrix::identity(alg.dim().pow(k.saturating_sub(1) as u32) * self.module.dim());
        match self.hand {
            Hand::Left => alg.left_mult_by(b).kron(&rest),
            Hand::Right => rest.kron(&alg.right_mult_by(b)),
        }
    }

    /// `∇ : Ω^k⊗P → Ω^{k+1}⊗P`, `∇(α⊗p) = δα⊗p + (−1)^{|α|}α⊗∇(p)`, on the
    /// contracted model of degree `k`.
    pub fn extend(&self, k: usize) -> Matrix {
        let alg = self.module.algebra();
        let (m, n) = (alg.dim(), self.module.dim());
        let src = m.pow(k as u32);
        let unit = alg.unit();
        let mut out = Matrix::zeros(m * src * n, src * n);
        for col in 0..src * n {
            // col encodes (x, v) with x ∈ A^{⊗k}
            let (x, v) = match self.hand {
                Hand::Left => (col / n, col % n),
                Hand::Right => (col % src, col / src),
            };
            let digits = digits_of(x, m, k);
            let nv = self.map.col(v);
            match self.hand {
                Hand::Left => {
                    // Σ_{i<k} (−1)^i ins_i(x)⊗p + (−1)^k x⊗∇p
                    for i in 0..k {
                        for (u, c) in unit.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            let mut d = digits.clone();
                            d.insert(i, u);
                            let row = number_of(&d, m) * n + v;
                            let c = if i % 2 == 0 { c.clone() } else { -c };
                            out[(row, col)] += &c;
                        }
                    }
                    let base = x * m * n;
                    for (r, c) in nv.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        let c = if k % 2 == 0 { c.clone() } else { -c };
                        out[(base + r, col)] += &c;
                    }
                }
                Hand::Right => {
                    // ∇p⊗y + Σ_{1≤j≤k} (−1)^{j+1} p⊗ins_j(y)
                    for (r, c) in nv.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        out[(r * src + x, col)] += c;
                    }
                    for j in 1..=k {
                        for (u, c) in unit.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            let mut d = digits.clone();
                            d.insert(j, u);
                            let row = v * m * src + number_of(&d, m);
                            let c = if j % 2 == 1 { c.clone() } else { -c };
                            out[(row, col)] += &c;
                        }
                    }
                }
            }
        }
        out
    }

    /// `∇² : P → Ω²⊗P` in the degree-2 model.
    pub fn curvature(&self) -> Matrix {
        &self.extend(1) * &self.map
    }

    /// `∇_u = u⌟∇` (left) or `∇⌞u` (right), with `u⌟δa = u(a)`.
    pub fn interior(&self, u: &Derivation) -> Matrix {
        let (m, n) = (self.module.algebra().dim(), self.module.dim());
        let blocks: Vec<Matrix> = (0..m).map(|i| self.action(&u.apply(&vector::unit(m, i)))).collect();
        // left: w = Σ a_i⊗p_i ↦ −Σ u(a_i)p_i; right: Σ p_i⊗a_i ↦ Σ p_i u(a_i)
        let pairing = match self.hand {
            Hand::Left => -&Matrix::hstack(&blocks.iter().collect::<Vec<_>>()).expect("equal heights"),
            Hand::Right => Matrix::from_fn(n, n * m, |r, c| blocks[c % m][(r, c / m)].clone()),
        };
        &pairing * &self.map
    }

    /// The connection along derivations obtained by interior products.
    pub fn reduce(&self, frame: &Arc<DerivationFrame>) -> Result<DVConnection> {
        let endos = frame.generators().iter().map(|u| self.interior(u)).collect();
        DVConnection::new(&self.module, frame, endos)
    }
}

fn digits_of(mut x: usize, m: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for slot in d.iter_mut().rev() {
        *slot = x % m;
        x /= m;
    }
    d
}

fn number_of(d: &[usize], m: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * m + x)
}

pub fn universal_defect(conn: &UniversalConnection) -> Option<UniversalWitness> {
    let n = conn.module.dim();
    let m = conn.module.algebra().dim();
    let mu = &conn.contraction() * &conn.map;
    if let Some(p) = (0..n).find(|&c| !vector::is_zero(&mu.col(c))) {
        return Some(UniversalWitness::NotOneForm { p });
    }
    for a in 0..m {
        let e = vector::unit(m, a);
        let lhs = &conn.map * &conn.action(&e);
        let rhs = &conn.delta_term(&e) + &(&conn.outer_action(&e, 1) * &conn.map);
        let diff = &lhs - &rhs;
        if let Some(p) = (0..n).find(|&c| !vector::is_zero(&diff.col(c))) {
            return Some(UniversalWitness::Leibniz { a, p });
        }
    }
    None
}

pub fn universal_check(conn: &UniversalConnection) -> bool {
    universal_defect(conn).is_none()
}

/// `∇²(ap) = a∇²(p)` (left) or `∇²(pa) = ∇²(p)a` (right) on basis elements.
pub fn curvature_is_linear(conn: &UniversalConnection) -> bool {
    let m = conn.module.algebra().dim();
    let c = conn.curvature();
    (0..m).all(|a| {
        let e = vector::unit(m, a);
        &c * &conn.action(&e) == &conn.outer_action(&e, 2) * &c
    })
}

/// `∇(a) = δa` on the algebra as a one-sided module.
pub fn delta_connection(alg: &crate::algebra::Algebra, hand: Hand) -> UniversalConnection {
    let kind = match hand {
        Hand::Left => ModuleKind::Left,
        Hand::Right => ModuleKind::Right,
    };
    let module = FiniteModule::regular(alg, kind);
    let m = alg.dim();
    let cols: Vec<Vec<Scalar>> = (0..m)
        .map(|a| {
            let e = vector::unit(m, a);
            vector::sub(&vector::tensor(alg.unit(), &e), &vector::tensor(&e, alg.unit()))
        })
        .collect();
    let map = Matrix::from_columns(m * m, &cols).expect("columns of length m²");
    UniversalConnection { module, hand, map }
}

/// Grassmann connection `s ↦ p·δs` on `p·A^n`, or `s ↦ δs·p` on `A^n·p`.
pub fn grassmann_connection(proj: &crate::algebra::ProjectiveModule) -> Result<UniversalConnection> {
    let p = &proj.idempotent;
    let alg = p.algebra().clone();
    let (m, n) = (alg.dim(), p.n());
    let dim = proj.module.dim();
    let unit = alg.unit();
    let mut cols = Vec::with_capacity(dim);
    for v in 0..dim {
        let s = proj.include(&vector::unit(dim, v));
        let comp = |t: usize| &s[t * m..(t + 1) * m];
        // ambient (A^n)⊗A for right, A⊗(A^n) for left; blocks per A-basis index k
        let mut blocks = vec![vector::zeros(n * m); m];
        match proj.module.kind() {
            ModuleKind::Right => {
                // component j: Σ_t p_jt⊗s_t − p_jt s_t⊗1
                for j in 0..n {
                    for t in 0..n {
                        let pjt = p.entry(j, t);
                        for (k, c) in comp(t).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            for (i, x) in pjt.iter().enumerate() {
                                blocks[k][j * m + i] += &(x * c);
                            }
                        }
                        let ps = alg.mul(pjt, comp(t));
                        for (k, c) in unit.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            for (i, x) in ps.iter().enumerate() {
                                blocks[k][j * m + i] -= &(x * c);
                            }
                        }
                    }
                }
            }
            ModuleKind::Left => {
                // component j: Σ_t 1⊗s_t p_tj − s_t⊗p_tj
                for j in 0..n {
                    for t in 0..n {
                        let ptj = p.entry(t, j);
                        let sp = alg.mul(comp(t), ptj);
                        for (k, c) in unit.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            for (i, x) in sp.iter().enumerate() {
                                blocks[k][j * m + i] += &(x * c);
                            }
                        }
                        for (k, c) in comp(t).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            for (i, x) in ptj.iter().enumerate() {
                                blocks[k][j * m + i] -= &(x * c);
                            }
                        }
                    }
                }
            }
            other => return Err(Error::KindMismatch(format!("projective modules are one-sided, got {other:?}"))),
        }
        let coords = blocks
            .iter()
            .map(|b| proj.coordinates(b).ok_or_else(|| Error::NotIdempotent("p·δs left the image of p".into())))
            .collect::<Result<Vec<_>>>()?;
        let mut col = vector::zeros(m * dim);
        for (k, c) in coords.iter().enumerate() {
            for (w, x) in c.iter().enumerate() {
                let idx = match proj.module.kind() {
                    ModuleKind::Right => w * m + k,
                    _ => k * dim + w,
                };
                col[idx] = x.clone();
            }
        }
        cols.push(col);
    }
    UniversalConnection::new(&proj.module, Matrix::from_columns(m * dim, &cols)?)
}

/// Outcome of [`bimodule_pair_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    /// `ϱ∘∇^L = ∇^R`, when `ϱ` was supplied.
    pub rho_compatible: Option<bool>,
    /// `u⌟∇^L(p) = ∇^R(p)⌞u` on every generator and basis vector.
    pub interior_compatible: bool,
    /// First `(generator, p)` violating the interior condition.
    pub witness: Option<(usize, usize)>,
}

/// `ϱ(α⊗p) = p⊗α` in the contracted models, for commutative algebras.
pub fn permutation_rho(p: &FiniteModule) -> Result<Matrix> {
    p.algebra().require_commutative()?;
    let (m, n) = (p.algebra().dim(), p.dim());
    // a⊗p in the model is −δa⊗p; its image is −p⊗δa = −(p⊗a) on the kernel
    Ok(Matrix::from_fn(n * m, m * n, |r, c| {
        let (v, i) = (r / m, r % m);
        if c == i * n + v {
            Scalar::from(-1)
        } else {
            Scalar::zero()
        }
    }))
}

pub fn bimodule_pair_check(
    p: &FiniteModule,
    left: &Matrix,
    right: &Matrix,
    rho: Option<&Matrix>,
    frame: &Arc<DerivationFrame>,
) -> Result<PairReport> {
    if p.kind() != ModuleKind::CentralBimodule {
        return Err(Error::KindMismatch(format!("pair connections need a central bimodule, got {:?}", p.kind())));
    }
    let l = UniversalConnection::new(&one_sided(p, Hand::Left)?, left.clone())?;
    let r = UniversalConnection::new(&one_sided(p, Hand::Right)?, right.clone())?;
    for (c, side) in [(&l, "left"), (&r, "right")] {
        if let Some(w) = universal_defect(c) {
            return Err(Error::LeibnizViolation(format!("{side} connection: {w:?}")));
        }
    }
    let rho_compatible = match rho {
        Some(rho) => Some(&rho.try_mul(left)? == right),
        None => None,
    };
    let mut witness = None;
    'outer: for (q, u) in frame.generators().iter().enumerate() {
        let diff = &l.interior(u) - &r.interior(u);
        if let Some(col) = (0..p.dim()).find(|&c| !vector::is_zero(&diff.col(c))) {
            witness = Some((q, col));
            break 'outer;
        }
    }
    Ok(PairReport { rho_compatible, interior_compatible: witness.is_none(), witness })
}
