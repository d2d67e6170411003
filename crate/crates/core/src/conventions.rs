//! Normalization conventions shared by every module.
//!
//! * Fourier transform: `𝓕f(ξ) = ∫ f(x) e^{-ixξ} dx` (no `2π` factor).
//! * Symbols: a mask `{M_k}` has symbol `½ Σ_k M_k z^k`, evaluated at
//!   `z = e^{-iξ/2}`, so that `𝓕Φ(ξ) = 𝒜(e^{-iξ/2}) 𝓕Φ(ξ/2)`.
//! * Periodic symbols (bracket products, Gram matrices) are written in the
//!   variable `e^{-iξ}`: `Θ(ξ) = Σ_n c_n e^{-inξ}`. With the transform above,
//!   `Θ_{f,g}(ξ) = Σ_k 𝓕f(ξ+2πk) conj(𝓕g(ξ+2πk))` holds with constant 1.
//! * Dual generators are only defined up to one global scalar; they are
//!   normalized so that the last component of the eigenvector is 1.

use num_complex::Complex64;

use crate::rational::{rat, Rational};

/// Factor from a mask to its symbol.
pub fn symbol_factor() -> Rational {
    rat(1, 2)
}

/// Factor from symbol coefficients back to the mask.
pub fn mask_factor() -> Rational {
    rat(2, 1)
}

/// Symbol variable for frequency `ξ`.
pub fn symbol_z(xi: f64) -> Complex64 {
    Complex64::from_polar(1.0, -xi / 2.0)
}
