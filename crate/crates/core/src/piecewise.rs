//! Compactly supported piecewise polynomials with exact rational data.
//!
//! Pieces are right-open: piece `i` lives on `[breaks[i], breaks[i + 1])`,
//! and the function vanishes outside `[breaks[0], breaks[last])`.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{int, pow2, to_f64, Rational};

#[derive(Clone, Default)]
pub struct PiecewisePoly {
    breaks: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(breaks: Vec<Rational>, pieces: Vec<Poly>) -> Result<Self> {
        if breaks.is_empty() && pieces.is_empty() {
            return Ok(Self::zero());
        }
        if breaks.len() != pieces.len() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} breakpoints for {} pieces",
                breaks.len(),
                pieces.len()
            )));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameters(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self { breaks, pieces }.canonical())
    }

    /// `p` restricted to `[a, b)`.
    pub fn on_interval(a: Rational, b: Rational, p: Poly) -> Self {
        assert!(a < b, "empty interval");
        Self {
            breaks: vec![a, b],
            pieces: vec![p],
        }
        .canonical()
    }

    /// Indicator of `[a, b)`.
    pub fn indicator(a: Rational, b: Rational) -> Self {
        Self::on_interval(a, b, Poly::one())
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    /// Iterates `(left, right, piece)` triples.
    pub fn intervals(&self) -> impl Iterator<Item = (&Rational, &Rational, &Poly)> {
        self.pieces
            .iter()
            .enumerate()
            .map(move |(i, p)| (&self.breaks[i], &self.breaks[i + 1], p))
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Poly::is_zero)
    }

    /// Closed support hull `[first, last]`, or `None` for the zero function.
    pub fn support(&self) -> Option<(Rational, Rational)> {
        if self.is_zero() {
            None
        } else {
            Some((self.breaks[0].clone(), self.breaks.last().unwrap().clone()))
        }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.pieces.iter().filter_map(Poly::degree).max()
    }

    fn piece_index(&self, x: &Rational) -> Option<usize> {
        if self.breaks.is_empty() || x < &self.breaks[0] || x >= self.breaks.last().unwrap() {
            return None;
        }
        // Last i with breaks[i] <= x.
        let i = self.breaks.partition_point(|b| b <= x) - 1;
        Some(i)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self.piece_index(x) {
            Some(i) => self.pieces[i].eval(x),
            None => Rational::zero(),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        if self.breaks.is_empty() {
            return 0.0;
        }
        let fb: Vec<f64> = self.breaks.iter().map(to_f64).collect();
        if x < fb[0] || x >= *fb.last().unwrap() {
            return 0.0;
        }
        let i = fb.partition_point(|b| *b <= x) - 1;
        self.pieces[i].eval_f64(x)
    }

    /// Drops zero pieces at either end and merges equal neighbours.
    fn canonical(mut self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut pieces: Vec<Poly> = Vec::with_capacity(self.pieces.len());
        for (i, p) in self.pieces.drain(..).enumerate() {
            if let Some(last) = pieces.last() {
                if *last == p {
                    continue;
                }
            }
            breaks.push(self.breaks[i].clone());
            pieces.push(p);
        }
        if let Some(b) = self.breaks.pop() {
            breaks.push(b);
        }
        while pieces.first().is_some_and(Poly::is_zero) {
            pieces.remove(0);
            breaks.remove(0);
        }
        while pieces.last().is_some_and(Poly::is_zero) {
            pieces.pop();
            breaks.pop();
        }
        if pieces.is_empty() {
            return Self::zero();
        }
        Self { breaks, pieces }
    }

    /// Piece covering `[u, v)` on a grid refinement (zero outside support).
    fn piece_on(&self, u: &Rational) -> Poly {
        self.piece_index(u)
            .map(|i| self.pieces[i].clone())
            .unwrap_or_else(Poly::zero)
    }

    fn merged_breaks(&self, other: &Self) -> Vec<Rational> {
        let mut all: Vec<Rational> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        all.sort();
        all.dedup();
        all
    }

    fn combine(&self, other: &Self, op: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        let grid = self.merged_breaks(other);
        if grid.len() < 2 {
            return Self::zero();
        }
        let pieces = grid
            .windows(2)
            .map(|w| op(&self.piece_on(&w[0]), &other.piece_on(&w[0])))
            .collect();
        Self {
            breaks: grid,
            pieces,
        }
        .canonical()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
        }
        .canonical()
    }

    /// Pointwise product with a global polynomial.
    pub fn mul_poly(&self, q: &Poly) -> Self {
        Self {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p * q).collect(),
        }
        .canonical()
    }

    /// `x -> f(a*x + b)` for `a > 0`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Self {
        assert!(
            a > &Rational::zero(),
            "affine map must preserve orientation"
        );
        Self {
            breaks: self.breaks.iter().map(|t| (t - b) / a).collect(),
            pieces: self.pieces.iter().map(|p| p.compose_affine(a, b)).collect(),
        }
    }

    /// `x -> f(x - k)`.
    pub fn shift(&self, k: &Rational) -> Self {
        self.compose_affine(&Rational::one(), &-k)
    }

    /// `x -> f(2^j x - k)`.
    pub fn dilate_shift(&self, j: i64, k: i64) -> Self {
        self.compose_affine(&pow2(j), &int(-k))
    }

    pub fn integral(&self) -> Rational {
        self.intervals()
            .map(|(a, b, p)| p.integrate(a, b))
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    /// Exact L2 inner product of two real piecewise polynomials.
    pub fn inner(&self, other: &Self) -> Rational {
        self.mul(other).integral()
    }

    /// `∫ x^n f(x) dx`.
    pub fn moment(&self, n: usize) -> Rational {
        self.mul_poly(&Poly::monomial(Rational::one(), n))
            .integral()
    }

    /// Piecewise derivative (jump contributions at breakpoints are ignored).
    pub fn derivative(&self) -> Self {
        Self {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(Poly::derivative).collect(),
        }
        .canonical()
    }

    /// `∫ f(x) e^{-i x ξ} dx`, evaluated per piece in floating point.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        self.intervals()
            .map(|(a, b, p)| piece_fourier(a, b, p, xi))
            .sum()
    }
}

/// Fourier integral of one polynomial piece, expanded around the midpoint.
fn piece_fourier(a: &Rational, b: &Rational, p: &Poly, xi: f64) -> Complex64 {
    let mid = (a + b) / int(2);
    let half = to_f64(&((b - a) / int(2)));
    let local = p.compose_affine(&Rational::one(), &mid);
    let q: Vec<f64> = local.coeffs().iter().map(to_f64).collect();
    let phase = Complex64::from_polar(1.0, -xi * to_f64(&mid));

    let value = if xi.abs() * half <= 8.0 {
        // Taylor series of e^{-iξt} against the moments of q over [-h, h].
        let moment = |n: usize| -> f64 {
            q.iter()
                .enumerate()
                .map(|(j, c)| {
                    let e = j + n + 1;
                    if e.is_multiple_of(2) {
                        0.0
                    } else {
                        2.0 * c * half.powi(e as i32) / e as f64
                    }
                })
                .sum()
        };
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 0..90 {
            if n > 0 {
                term *= Complex64::new(0.0, -xi) / n as f64;
            }
            acc += term * moment(n);
        }
        acc
    } else {
        // ∫ q(t) e^{ct} dt = e^{ct} Σ_k (-1)^k q^{(k)}(t) / c^{k+1},  c = -iξ.
        let c = Complex64::new(0.0, -xi);
        let mut deriv = local.clone();
        let mut at_hi = Complex64::new(0.0, 0.0);
        let mut at_lo = Complex64::new(0.0, 0.0);
        let mut cpow = c;
        let mut sign = 1.0;
        while !deriv.is_zero() {
            at_hi += sign * deriv.eval_f64(half) / cpow;
            at_lo += sign * deriv.eval_f64(-half) / cpow;
            deriv = deriv.derivative();
            cpow *= c;
            sign = -sign;
        }
        at_hi * (c * half).exp() - at_lo * (-c * half).exp()
    };
    phase * value
}

impl PartialEq for PiecewisePoly {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Debug for PiecewisePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "PiecewisePoly(0)");
        }
        let mut list = f.debug_list();
        for (a, b, p) in self.intervals() {
            list.entry(&format_args!("[{a}, {b}): {p:?}"));
        }
        list.finish()
    }
}
