//! Scalar abstraction shared by matrices, polynomials and the Potts routes.
//!
//! Everything in the crate that only needs ring operations is written against
//! [`Scalar`]; the exact cyclotomic field, big rationals, `f64` and
//! `Complex<f64>` all implement it.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qarith::CycloElement;

/// A commutative ring element.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(n: i64) -> Self;

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

/// A scalar with exact or floating division.
pub trait FieldScalar: Scalar + Div<Output = Self> {}

impl<T: Scalar + Div<Output = T>> FieldScalar for T {}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn pow(&self, n: u32) -> Self {
        self.powi(n as i32)
    }
}

impl Scalar for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn pow(&self, n: u32) -> Self {
        self.powu(n)
    }
}

impl Scalar for CycloElement {
    fn from_i64(n: i64) -> Self {
        CycloElement::from_rational(BigRational::from_i64(n))
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
