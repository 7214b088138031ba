//! The θ-frame over `M_n` and its linear connections.
//!
//! `O¹[M_n]` is all of the CE 1-forms, free on `θ^r` as a left module, and
//! its coordinates are the components `φ(u_q)`. A family `ω^p_rq ∈ M_n`
//! defines `∇_r(φ)(u_q) = u_r(φ(u_q)) + Σ_p φ(u_p)·ω^p_rq`, that is
//! `∇_r θ^p = ω^p_rq θ^q` with the left Leibniz rule built in.

use std::sync::Arc;

use crate::algebra::{su_basis, Closure, SuBasis};
use crate::ce::{ce_d, exact, wedge, CEForm, CeOneForms, DerivationFrame};
use crate::check::Check;
use crate::connections::{torsion, DVConnection};
use crate::error::{Error, Result};
use crate::exactlin::{kernel, solve, vector, Matrix, Scalar, Subspace};

#[derive(Clone, Debug)]
pub struct ThetaFrame {
    su: SuBasis,
    frame: Arc<DerivationFrame>,
    thetas: Vec<CEForm>,
    forms: CeOneForms,
}

pub fn theta_frame(n: usize) -> Result<ThetaFrame> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("the θ-frame needs n ≥ 2, got {n}")));
    }
    let su = su_basis(n)?;
    let frame = DerivationFrame::new(su.algebra(), su.inner_derivations(), su.names().to_vec())?;
    let thetas = (0..frame.rank()).map(|r| CEForm::theta(&frame, r)).collect::<Result<Vec<_>>>()?;
    let forms = CeOneForms::new(&frame)?;
    if forms.space() != &Subspace::full(frame.rank() * n * n) {
        return Err(Error::Frame("exact forms do not generate every CE 1-form".into()));
    }
    Ok(ThetaFrame { su, frame, thetas, forms })
}

impl ThetaFrame {
    pub fn n(&self) -> usize {
        self.su.n()
    }

    /// `n² − 1`.
    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn su(&self) -> &SuBasis {
        &self.su
    }

    pub fn frame(&self) -> &Arc<DerivationFrame> {
        &self.frame
    }

    pub fn thetas(&self) -> &[CEForm] {
        &self.thetas
    }

    pub fn forms(&self) -> &CeOneForms {
        &self.forms
    }

    /// `c^s_rq` with `[ε_r, ε_q] = c^s_rq ε_s`.
    pub fn c(&self, s: usize, r: usize, q: usize) -> &Scalar {
        self.su.c(s, r, q)
    }

    /// `θ = ε_r θ^r`, so `θ(u_q) = ε_q`.
    pub fn theta_element(&self) -> CEForm {
        let values = self.su.elements().iter().map(|e| e.coeffs().to_vec()).collect();
        CEForm::new(&self.frame, 1, values).expect("free frame")
    }

    /// `O¹[M_n]` is the left span of the `θ^r`, of dimension `(n²−1)·n²`.
    pub fn free_on_thetas(&self) -> Result<bool> {
        let m = self.n() * self.n();
        let span = self.forms.module.closure(self.thetas.iter().map(CEForm::flatten).collect(), Closure::Left)?;
        Ok(span.dim() == self.rank() * m && self.forms.dim() == self.rank() * m)
    }
}

/// `θ^r(u_q) = δ^r_q·1`.
pub fn defining_relation_check(tf: &ThetaFrame) -> Check {
    let mut c = Check::new();
    let alg = tf.frame.algebra();
    for (r, t) in tf.thetas.iter().enumerate() {
        for q in 0..tf.rank() {
            let expected = if r == q { alg.unit().to_vec() } else { vector::zeros(alg.dim()) };
            c.record(t.eval_indices(&[q]) == expected, || format!("θ^{r}(u_{q})"));
        }
    }
    c
}

/// `a·θ^r = θ^r·a` for all basis `a`.
pub fn centrality_check(tf: &ThetaFrame) -> Check {
    let mut c = Check::new();
    let alg = tf.frame.algebra();
    for (r, t) in tf.thetas.iter().enumerate() {
        for a in 0..alg.dim() {
            let e = vector::unit(alg.dim(), a);
            c.record(t.bimodule_action(&e, alg.unit()) == t.bimodule_action(alg.unit(), &e), || {
                format!("e{a}·θ^{r} ≠ θ^{r}·e{a}")
            });
        }
    }
    c
}

/// `θ^r∧θ^q = −θ^q∧θ^r`.
pub fn anticommutativity_check(tf: &ThetaFrame) -> Result<Check> {
    let mut c = Check::new();
    for (r, a) in tf.thetas.iter().enumerate() {
        for (q, b) in tf.thetas.iter().enumerate() {
            let sum = wedge(a, b)?.add(&wedge(b, a)?)?;
            c.record(sum.is_zero(), || format!("θ^{r}∧θ^{q} + θ^{q}∧θ^{r} ≠ 0"));
        }
    }
    Ok(c)
}

/// `dε_r = Σ_q c^s_qr ε_s θ^q` as CE forms.
pub fn depsilon_check(tf: &ThetaFrame) -> Result<Check> {
    let mut c = Check::new();
    let alg = tf.frame.algebra();
    let rank = tf.rank();
    for r in 0..rank {
        let lhs = exact(&tf.frame, tf.su.elements()[r].coeffs());
        let mut rhs = CEForm::zero(&tf.frame, 1);
        for q in 0..rank {
            for s in 0..rank {
                let coeff = tf.c(s, q, r);
                if coeff.is_zero() {
                    continue;
                }
                let es = vector::scale(tf.su.elements()[s].coeffs(), coeff);
                rhs = rhs.add(&tf.thetas[q].bimodule_action(&es, alg.unit()))?;
            }
        }
        c.record(lhs == rhs, || format!("dε_{} differs from c^s_q{r} ε_s θ^q", tf.su.names()[r]));
    }
    Ok(c)
}

/// `dθ^r = −½ c^r_qs θ^q∧θ^s`.
pub fn maurer_cartan_check(tf: &ThetaFrame) -> Result<Check> {
    let mut c = Check::new();
    let rank = tf.rank();
    let half = Scalar::from_ratio(-1, 2);
    for r in 0..rank {
        let lhs = ce_d(&tf.thetas[r]);
        let mut rhs = CEForm::zero(&tf.frame, 2);
        for q in 0..rank {
            for s in 0..rank {
                let coeff = tf.c(r, q, s);
                if !coeff.is_zero() {
                    rhs = rhs.add(&wedge(&tf.thetas[q], &tf.thetas[s])?.scale(&(&half * coeff)))?;
                }
            }
        }
        c.record(lhs == rhs, || format!("Maurer–Cartan fails for θ^{}", tf.su.names()[r]));
    }
    Ok(c)
}

/// `da = s·(aθ − θa)` with a single global sign `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaElementReport {
    pub sign: Option<i64>,
    pub check: Check,
}

pub fn theta_element_check(tf: &ThetaFrame) -> Result<ThetaElementReport> {
    let alg = tf.frame.algebra();
    let m = alg.dim();
    let theta = tf.theta_element();
    let mut sign: Option<i64> = None;
    let mut c = Check::new();
    for a in 0..m {
        let e = vector::unit(m, a);
        let da = exact(&tf.frame, &e);
        let comm = theta.bimodule_action(&e, alg.unit()).sub(&theta.bimodule_action(alg.unit(), &e))?;
        let s = match sign {
            Some(s) => s,
            None if comm.is_zero() => {
                c.record(da.is_zero(), || format!("d(e{a}) ≠ 0 while e{a}θ = θe{a}"));
                continue;
            }
            None => {
                let s = if da == comm { 1 } else { -1 };
                sign = Some(s);
                s
            }
        };
        c.record(da == comm.scale(&Scalar::from(s)), || format!("d(e{a}) ≠ {s}·(e{a}θ − θe{a})"));
    }
    Ok(ThetaElementReport { sign, check: c })
}

/// Index of `ω^p_rq` in a flat family.
pub fn omega_index(rank: usize, r: usize, p: usize, q: usize) -> usize {
    (r * rank + p) * rank + q
}

/// The connection `∇_r θ^p = ω^p_rq θ^q`; `omega` holds algebra elements
/// at [`omega_index`].
pub fn linear_connection(tf: &ThetaFrame, omega: &[Vec<Scalar>]) -> Result<DVConnection> {
    let rank = tf.rank();
    let alg = tf.frame.algebra();
    let m = alg.dim();
    if omega.len() != rank * rank * rank {
        return Err(Error::DimensionMismatch { expected: rank * rank * rank, found: omega.len() });
    }
    let endos = tf
        .frame
        .generators()
        .iter()
        .enumerate()
        .map(|(r, u)| {
            let mut e = Matrix::identity(rank).kron(u.action());
            for p in 0..rank {
                for q in 0..rank {
                    let w = &omega[omega_index(rank, r, p, q)];
                    if vector::is_zero(w) {
                        continue;
                    }
                    let block = alg.right_mult_by(w);
                    for i in 0..m {
                        for j in 0..m {
                            if !block[(i, j)].is_zero() {
                                e[(q * m + i, p * m + j)] += &block[(i, j)];
                            }
                        }
                    }
                }
            }
            e
        })
        .collect();
    DVConnection::new(&tf.forms.module, &tf.frame, endos)
}

/// Scalar family `ω^p_rq = x_{rpq}·1`.
pub fn scalar_omega(tf: &ThetaFrame, values: &[Scalar]) -> Vec<Vec<Scalar>> {
    let unit = tf.frame.algebra().unit();
    values.iter().map(|x| vector::scale(unit, x)).collect()
}

/// Which `ω ∈ M_n` may fill a slot of a linear connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConnectionSpace {
    pub slot_space: Subspace,
    /// The allowed slot values are exactly the centre `K·1`.
    pub slot_is_centre: bool,
    pub slots: usize,
    /// Dimension over `K` of the affine space of linear connections.
    pub dimension: usize,
}

/// The right Leibniz rule for `φ ↦ φ(u_p)·ω` in slot `q` is
/// `φ(u_p)·b·ω = φ(u_p)·ω·b`; the constraint is the same in every slot since
/// the `θ^q` are a free basis.
pub fn linear_connection_space(tf: &ThetaFrame) -> Result<LinearConnectionSpace> {
    let alg = tf.frame.algebra();
    let m = alg.dim();
    let cols = (0..m)
        .map(|i| {
            let rw = alg.right_mult(i);
            (0..m).flat_map(|b| (&(alg.right_mult(b) * rw) - &(rw * alg.right_mult(b))).entries().to_vec()).collect()
        })
        .collect::<Vec<Vec<Scalar>>>();
    let slot_space = kernel(&Matrix::from_columns(m * m * m, &cols)?);
    let rank = tf.rank();
    let slots = rank * rank * rank;
    Ok(LinearConnectionSpace {
        slot_is_centre: &slot_space == alg.centre(),
        dimension: slots * slot_space.dim(),
        slot_space,
        slots,
    })
}

/// Solutions of `T = 0` over scalar families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionFreeSolution {
    /// `λ` with `ω = λc` torsion-free.
    pub lambda: Scalar,
    /// `ω^p_rq = λ c^p_rq` at [`omega_index`].
    pub distinguished: Vec<Scalar>,
    /// Dimension of the solution space of `ω^p_rq − ω^p_qr = −c^p_rq`.
    pub solution_dim: usize,
    /// `(n²−1)·(n²−1)(n²)/2`, the symmetric `(r,q)` pairs per upper index.
    pub symmetric_dim: usize,
    /// Torsion of the distinguished solution, recomputed from its connection.
    pub torsion_vanishes: bool,
    /// Torsion of `ω = 0` is `−c^p_rq·1`.
    pub zero_torsion_is_structure_constants: bool,
}

pub fn torsion_free_solver(tf: &ThetaFrame) -> Result<TorsionFreeSolution> {
    let rank = tf.rank();
    let n3 = rank * rank * rank;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for p in 0..rank {
        for r in 0..rank {
            for q in r + 1..rank {
                let mut row = vector::zeros(n3);
                row[omega_index(rank, r, p, q)] = Scalar::one();
                row[omega_index(rank, q, p, r)] = Scalar::from(-1);
                rows.push(row);
                rhs.push(-tf.c(p, r, q));
            }
        }
    }
    let a = Matrix::from_rows(n3, rows)?;
    let solution_dim = kernel(&a).dim();
    let c_vec: Vec<Scalar> = (0..n3)
        .map(|i| {
            let (r, p, q) = (i / (rank * rank), (i / rank) % rank, i % rank);
            tf.c(p, r, q).clone()
        })
        .collect();
    let ac = Matrix::from_columns(a.rows(), &[a.apply(&c_vec)])?;
    let lambda = solve(&ac, &rhs)?
        .ok_or_else(|| Error::InvalidParameter("no ad-proportional torsion-free connection".into()))?
        .remove(0);
    let distinguished = vector::scale(&c_vec, &lambda);

    let t = torsion(&linear_connection(tf, &scalar_omega(tf, &distinguished))?, &tf.forms)?;
    let zero = torsion(&linear_connection(tf, &scalar_omega(tf, &vector::zeros(n3)))?, &tf.forms)?;
    let mut flat = true;
    for (pi, theta) in tf.thetas.iter().enumerate() {
        let tp = zero.apply(theta)?;
        for r in 0..rank {
            for q in 0..rank {
                flat &= tp.eval_indices(&[r, q]) == vector::scale(tf.frame.algebra().unit(), &-tf.c(pi, r, q));
            }
        }
    }
    Ok(TorsionFreeSolution {
        lambda,
        distinguished,
        solution_dim,
        symmetric_dim: rank * rank * (rank + 1) / 2,
        torsion_vanishes: t.is_zero(),
        zero_torsion_is_structure_constants: flat,
    })
}
