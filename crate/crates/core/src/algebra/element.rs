use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{same_algebra, Algebra};
use crate::error::{Error, Result};
use crate::exactlin::{vector, Scalar};

/// An element of a [`FiniteAlgebra`](super::FiniteAlgebra) in the standard basis.
///
/// The arithmetic operators panic when the operands live in different
/// algebras; the `checked_*` methods return [`Error::AlgebraMismatch`] instead.
#[derive(Clone)]
pub struct AlgebraElement {
    algebra: Algebra,
    coeffs: Vec<Scalar>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_algebra(&self.algebra, &other.algebra)
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn new(algebra: &Algebra, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: coeffs.len() });
        }
        Ok(AlgebraElement { algebra: algebra.clone(), coeffs })
    }

    pub fn zero(algebra: &Algebra) -> Self {
        AlgebraElement { algebra: algebra.clone(), coeffs: vector::zeros(algebra.dim()) }
    }

    pub fn one(algebra: &Algebra) -> Self {
        AlgebraElement { algebra: algebra.clone(), coeffs: algebra.unit().to_vec() }
    }

    pub fn basis(algebra: &Algebra, i: usize) -> Self {
        AlgebraElement { algebra: algebra.clone(), coeffs: vector::unit(algebra.dim(), i) }
    }

    pub fn scalar(algebra: &Algebra, s: &Scalar) -> Self {
        AlgebraElement { algebra: algebra.clone(), coeffs: vector::scale(algebra.unit(), s) }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        vector::is_zero(&self.coeffs)
    }

    pub fn is_central(&self) -> bool {
        self.algebra.is_central(&self.coeffs)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        AlgebraElement { algebra: self.algebra.clone(), coeffs: vector::scale(&self.coeffs, s) }
    }

    pub fn star(&self) -> Result<Self> {
        Ok(AlgebraElement { algebra: self.algebra.clone(), coeffs: self.algebra.star(&self.coeffs)? })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(AlgebraElement { algebra: self.algebra.clone(), coeffs: vector::add(&self.coeffs, &other.coeffs) })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(AlgebraElement { algebra: self.algebra.clone(), coeffs: vector::sub(&self.coeffs, &other.coeffs) })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(AlgebraElement { algebra: self.algebra.clone(), coeffs: self.algebra.mul(&self.coeffs, &other.coeffs) })
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(AlgebraElement { algebra: self.algebra.clone(), coeffs: self.algebra.commutator(&self.coeffs, &other.coeffs) })
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = self.algebra.basis_name(i);
                if c.is_one() {
                    name.to_string()
                } else if c.is_real() || c.is_imaginary() {
                    format!("{c}·{name}")
                } else {
                    format!("({c})·{name}")
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! element_op {
    ($tr:ident $m:ident $checked:ident) => {
        impl<'a> $tr<&'a AlgebraElement> for &'a AlgebraElement {
            type Output = AlgebraElement;
            fn $m(self, o: &AlgebraElement) -> AlgebraElement {
                self.$checked(o).expect("operands belong to different algebras")
            }
        }
        impl $tr for AlgebraElement {
            type Output = AlgebraElement;
            fn $m(self, o: AlgebraElement) -> AlgebraElement {
                (&self).$m(&o)
            }
        }
    };
}
element_op!(Add add checked_add);
element_op!(Sub sub checked_sub);
element_op!(Mul mul checked_mul);

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&Scalar::from(-1))
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}
