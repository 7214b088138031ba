//! Row reduction over ℚ(i).
//!
//! Rows are scaled to Gaussian integers and eliminated fraction-free
//! (Bareiss-style Gauss–Jordan, every division exact in ℤ\[i\]); the result is
//! normalized to the canonical reduced row-echelon form only at the end.
//! Tall systems are reduced in blocks so the working set never exceeds a
//! few times the column count.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Matrix, Scalar, Subspace};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn one() -> Self {
        GaussInt { re: BigInt::one(), im: BigInt::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        if self.is_zero() || o.is_zero() {
            return GaussInt { re: BigInt::zero(), im: BigInt::zero() };
        }
        GaussInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// Exact quotient; the caller guarantees divisibility.
    fn div_exact(&self, d: &GaussInt) -> GaussInt {
        if d.im.is_zero() {
            if d.re.is_one() {
                return self.clone();
            }
            debug_assert!(self.re.is_multiple_of(&d.re) && self.im.is_multiple_of(&d.re));
            return GaussInt { re: &self.re / &d.re, im: &self.im / &d.re };
        }
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        debug_assert!(re.is_multiple_of(&n) && im.is_multiple_of(&n), "inexact Bareiss division");
        GaussInt { re: re / &n, im: im / n }
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::new(BigRational::from_integer(self.re.clone()), BigRational::from_integer(self.im.clone()))
    }
}

fn integer_row(row: &[Scalar]) -> Vec<GaussInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom_lcm()));
    row.iter()
        .map(|x| {
            let re = x.re() * &l;
            let im = x.im() * &l;
            GaussInt { re: re.to_integer(), im: im.to_integer() }
        })
        .collect()
}

/// Fraction-free Gauss–Jordan on integer rows. Returns the nonzero reduced
/// rows (not yet normalized) and their pivot columns.
fn bareiss_gauss_jordan(mut a: Vec<Vec<GaussInt>>, cols: usize) -> (Vec<Vec<GaussInt>>, Vec<usize>) {
    let n = a.len();
    let mut prev = GaussInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(i) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, i);
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row exists");
        let p = pivot_row[c].clone();
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let f = row[c].clone();
            for j in 0..cols {
                let pr = &pivot_row[j];
                if row[j].is_zero() && (pr.is_zero() || f.is_zero()) {
                    continue;
                }
                let v = if f.is_zero() { p.mul(&row[j]) } else { p.mul(&row[j]).sub(&f.mul(pr)) };
                row[j] = v.div_exact(&prev);
            }
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

fn normalize(rows: Vec<Vec<GaussInt>>, pivots: &[usize]) -> Vec<Vec<Scalar>> {
    rows.into_iter()
        .zip(pivots)
        .map(|(row, &c)| {
            let inv = row[c].to_scalar().inv().expect("pivot is nonzero");
            row.iter().map(|x| if x.is_zero() { Scalar::zero() } else { &x.to_scalar() * &inv }).collect()
        })
        .collect()
}

fn rref_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let int_rows: Vec<_> = rows.iter().filter(|r| !r.iter().all(Scalar::is_zero)).map(|r| integer_row(r)).collect();
    let (red, piv) = bareiss_gauss_jordan(int_rows, cols);
    (normalize(red, &piv), piv)
}

/// Reduced row-echelon form with its pivot columns; zero rows dropped.
pub(crate) fn rref_nonzero(m: &Matrix) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let cols = m.cols();
    let block = (2 * cols).max(64);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut pivots = Vec::new();
    let mut pending: Vec<Vec<Scalar>> = Vec::new();
    let all: Vec<&[Scalar]> = m.row_vectors().filter(|r| !r.iter().all(Scalar::is_zero)).collect();
    if all.len() <= block {
        return rref_rows(all.into_iter().map(|r| r.to_vec()).collect(), cols);
    }
    for r in all {
        pending.push(r.to_vec());
        if pending.len() == block {
            let mut work = std::mem::take(&mut rows);
            work.append(&mut pending);
            (rows, pivots) = rref_rows(work, cols);
        }
    }
    if !pending.is_empty() {
        rows.append(&mut pending);
        (rows, pivots) = rref_rows(rows, cols);
    }
    (rows, pivots)
}

pub(crate) fn rref_with_pivots(m: &Matrix) -> (Matrix, Vec<usize>) {
    let (rows, piv) = rref_nonzero(m);
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for (i, r) in rows.into_iter().enumerate() {
        for (j, x) in r.into_iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    (out, piv)
}

/// Reduced row-echelon form of `m`, same shape, zero rows at the bottom.
pub fn rref(m: &Matrix) -> Matrix {
    rref_with_pivots(m).0
}

/// Right null space `{x : m·x = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let n = m.cols();
    let (rows, piv) = rref_nonzero(m);
    let mut is_pivot = vec![false; n];
    for &p in &piv {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Scalar::zero(); n];
        v[f] = Scalar::one();
        for (row, &p) in rows.iter().zip(&piv) {
            v[p] = -&row[f];
        }
        basis.push(v);
    }
    Subspace::span(n, basis).expect("kernel vectors have ambient length")
}

/// Some exact solution of `m·x = b`, or `None` if the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: b.len() });
    }
    let n = m.cols();
    let bcol = Matrix::from_fn(b.len(), 1, |i, _| b[i].clone());
    let aug = Matrix::hstack(&[m, &bcol])?;
    let (rows, piv) = rref_nonzero(&aug);
    if piv.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); n];
    for (row, &p) in rows.iter().zip(&piv) {
        x[p] = row[n].clone();
    }
    Ok(Some(x))
}

#[cfg(test)]
pub(crate) mod oracle {
    use super::*;

    /// Textbook Gauss–Jordan in rational arithmetic, independent of the
    /// fraction-free path.
    pub fn naive_rref(m: &Matrix) -> Matrix {
        let mut a = m.clone();
        let (rows, cols) = (a.rows(), a.cols());
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(i) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
            for j in 0..cols {
                let t = a[(i, j)].clone();
                a[(i, j)] = a[(r, j)].clone();
                a[(r, j)] = t;
            }
            let inv = a[(r, c)].inv().unwrap();
            for j in 0..cols {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
            for i in 0..rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in 0..cols {
                        let d = &f * &a[(r, j)];
                        a[(i, j)] -= d;
                    }
                }
            }
            r += 1;
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(re: i64, im: i64) -> Scalar {
        Scalar::gaussian(re, im)
    }

    #[test]
    fn rref_examples() {
        let m = Matrix::from_ints(&[&[2, 0], &[0, 2]]);
        assert!(rref(&m).is_identity());
        let m = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(rref(&m), Matrix::from_ints(&[&[1, 2], &[0, 0]]));
        let m = Matrix::from_gaussian(&[&[(0, 0), (0, 1)], &[(1, 0), (0, 0)]]);
        assert!(rref(&m).is_identity());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::identity(3)).dim(), 0);
        assert_eq!(kernel(&Matrix::zeros(2, 2)).dim(), 2);
        let k = kernel(&Matrix::from_ints(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[s(1, 0), s(-1, 0)]));
    }

    #[test]
    fn solve_examples() {
        let x = solve(&Matrix::identity(2), &[s(3, 0), s(4, 0)]).unwrap().unwrap();
        assert_eq!(x, vec![s(3, 0), s(4, 0)]);
        let m = Matrix::from_ints(&[&[1, 1]]);
        let x = solve(&m, &[s(2, 0)]).unwrap().unwrap();
        assert_eq!(m.apply(&x), vec![s(2, 0)]);
        let m = Matrix::from_ints(&[&[1], &[1]]);
        assert_eq!(solve(&m, &[s(0, 0), s(1, 0)]).unwrap(), None);
        assert!(solve(&m, &[s(0, 0)]).is_err());
    }

    #[test]
    fn tall_systems_are_blocked() {
        // 300 rows of a rank-3 system in 5 unknowns
        let rows: Vec<Vec<Scalar>> = (0..300)
            .map(|k| {
                let (a, b, c) = ((k % 7) as i64, (k % 5) as i64 - 2, (k % 3) as i64);
                vec![s(a, 0), s(b, 1), s(c, 0), s(a + b, 1), s(2 * c, 0)]
            })
            .collect();
        let m = Matrix::from_rows(5, rows).unwrap();
        assert_eq!(rref(&m), oracle::naive_rref(&m));
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i64..4, -2i64..3, 1i64..4), r * c).prop_map(move |v| {
                Matrix::from_fn(r, c, |i, j| {
                    let (re, im, d) = v[i * c + j];
                    &Scalar::gaussian(re, im) * &Scalar::from_ratio(1, d)
                })
            })
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_naive(m in arb_matrix()) {
            prop_assert_eq!(rref(&m), oracle::naive_rref(&m));
        }

        #[test]
        fn rref_preserves_row_space(m in arb_matrix()) {
            let r = rref(&m);
            let a = Subspace::span(m.cols(), m.clone().into_rows()).unwrap();
            for row in r.row_vectors() { prop_assert!(a.contains(row)); }
            let b = Subspace::span(m.cols(), r.clone().into_rows()).unwrap();
            for row in m.row_vectors() { prop_assert!(b.contains(row)); }
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.rank() + kernel(&m).dim(), m.cols());
            for v in kernel(&m).basis_vectors() {
                prop_assert!(m.apply(&v).iter().all(Scalar::is_zero));
            }
        }
    }
}
