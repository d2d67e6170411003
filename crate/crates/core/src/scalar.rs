//! Exact scalar fields used as coefficients: rationals and Gaussian rationals.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::rational::{to_f64, Rational};

/// Gaussian rational `a + b i`.
pub type GaussRat = Complex<Rational>;

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
    + Div<Output = Self>
    + Send
    + Sync
{
    fn conj(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Scalar for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(self), 0.0)
    }
}

impl Scalar for GaussRat {
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn from_rational(r: Rational) -> Self {
        Complex::new(r, Rational::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

pub fn gauss(re: Rational, im: Rational) -> GaussRat {
    Complex::new(re, im)
}
