//! Exact construction and analysis of B-spline quark and quarklet
//! multiwavelet systems.
//!
//! Everything that can be exact is exact: masks, symbols, modulation
//! matrices and their inverses, inner products and stability decisions use
//! arbitrary-precision rationals. Floating point appears only where the
//! object has no rational closed form (Fourier transforms, infinite products).

pub mod cdf;
pub mod conventions;
pub mod duals;
pub mod error;
pub mod grid;
pub mod json;
pub mod laurent;
pub mod matrix;
pub mod modulation;
pub mod mra;
pub mod piecewise;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod splines;
pub mod stability;
pub mod trig;

pub use error::{Error, Result};
pub use rational::Rational;
