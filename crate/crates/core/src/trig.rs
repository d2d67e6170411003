//! Trigonometric polynomials `Θ(ξ) = Σ_n c_n e^{-inξ}` with Gaussian-rational
//! coefficients, and an exact test for zeros on the circle.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::piecewise::PiecewisePoly;
use crate::poly::Poly;
use crate::rational::{ceil_i64, floor_i64, int, to_f64, Rational};
use crate::scalar::{GaussRat, Scalar};

#[derive(Clone, PartialEq, Default)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, GaussRat>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_real([(0, c)])
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, GaussRat)>) -> Self {
        let mut t = Self::zero();
        for (n, c) in coeffs {
            t.add_term(n, c);
        }
        t
    }

    pub fn from_real(coeffs: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|(n, c)| (n, GaussRat::from_rational(c))),
        )
    }

    /// `Θ_{f,g}` with coefficients `c_n = ⟨f, g(· - n)⟩`.
    pub fn from_inner_products(f: &PiecewisePoly, g: &PiecewisePoly) -> Self {
        let (Some((fa, fb)), Some((ga, gb))) = (f.support(), g.support()) else {
            return Self::zero();
        };
        let lo = floor_i64(&(&fa - &gb));
        let hi = ceil_i64(&(&fb - &ga));
        Self::from_real((lo..=hi).map(|n| (n, f.inner(&g.shift(&int(n))))))
    }

    fn add_term(&mut self, n: i64, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let s = match self.coeffs.remove(&n) {
            Some(old) => old + c,
            None => c,
        };
        if !s.is_zero() {
            self.coeffs.insert(n, s);
        }
    }

    pub fn coeff(&self, n: i64) -> GaussRat {
        self.coeffs.get(&n).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &GaussRat)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `c_{-n} = conj(c_n)` for all `n`.
    pub fn is_real_valued(&self) -> bool {
        self.coeffs.iter().all(|(n, c)| self.coeff(-n) == c.conj())
    }

    /// Largest `|n|` with `c_n ≠ 0`.
    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            out.add_term(*n, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(n, c)| (*n, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }

    /// The function `ξ -> conj(Θ(ξ))`.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(n, c)| (-n, c.conj())).collect(),
        }
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(n, c)| c.to_c64() * Complex64::from_polar(1.0, -(*n as f64) * xi))
            .sum()
    }

    /// `(A, B)` with `Θ(ξ) = A(cos ξ) + sin ξ · B(cos ξ)`, for real-valued `Θ`.
    pub fn chebyshev_form(&self) -> Option<(Poly, Poly)> {
        if !self.is_real_valued() {
            return None;
        }
        let d = self.degree() as usize;
        let (t, u) = chebyshev(d);
        let mut a = Poly::constant(self.coeff(0).re);
        let mut b = Poly::zero();
        let two = int(2);
        for n in 1..=d {
            let c = self.coeff(n as i64);
            // c e^{-inξ} + conj(c) e^{inξ} = 2 Re c cos nξ + 2 Im c sin nξ
            a = &a + &t[n].scale(&(&two * &c.re));
            b = &b + &u[n - 1].scale(&(&two * &c.im));
        }
        Some((a, b))
    }

    /// Decides exactly whether a real-valued `Θ` is strictly positive on the
    /// whole circle. Returns `None` if `Θ` is not real-valued.
    pub fn positivity(&self) -> Option<Positivity> {
        let (a, b) = self.chebyshev_form()?;
        // Θ vanishes somewhere iff R = A² - (1 - x²) B² has a root in [-1, 1].
        let one_minus_x2 = Poly::from_ints(&[1, 0, -1]);
        let r = &(&a * &a) - &(&one_minus_x2 * &(&b * &b));
        if let Some(x) = root_in_unit_interval(&r) {
            let xi = self.zero_angle(x);
            return Some(Positivity::Zero { xi });
        }
        let (min_xi, min_value) = self.sampled_min(4096);
        if self.eval(0.0).re > 0.0 {
            Some(Positivity::Positive { min_xi, min_value })
        } else {
            Some(Positivity::Negative {
                xi: min_xi,
                value: min_value,
            })
        }
    }

    fn zero_angle(&self, x: RootLocation) -> f64 {
        let c = match x {
            RootLocation::Exact(r) => to_f64(&r),
            RootLocation::Approx(v) => v,
        };
        let base = c.clamp(-1.0, 1.0).acos();
        let (p, m) = (self.eval(base).norm(), self.eval(-base).norm());
        if p <= m {
            base
        } else {
            (2.0 * PI - base) % (2.0 * PI)
        }
    }

    fn sampled_min(&self, n: usize) -> (f64, f64) {
        (0..n)
            .map(|k| {
                let xi = 2.0 * PI * k as f64 / n as f64;
                (xi, self.eval(xi).re)
            })
            .fold((0.0, f64::INFINITY), |best, cur| {
                if cur.1 < best.1 {
                    cur
                } else {
                    best
                }
            })
    }
}

/// Outcome of [`TrigPoly::positivity`]. Frequencies are reported in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Positivity {
    Positive { min_xi: f64, min_value: f64 },
    Zero { xi: f64 },
    Negative { xi: f64, value: f64 },
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Positivity::Positive { .. })
    }
}

enum RootLocation {
    Exact(Rational),
    Approx(f64),
}

/// `T_0..=T_d` and `U_0..=U_d`.
fn chebyshev(d: usize) -> (Vec<Poly>, Vec<Poly>) {
    let x2 = Poly::from_ints(&[0, 2]);
    let mut t = vec![Poly::one(), Poly::from_ints(&[0, 1])];
    let mut u = vec![Poly::one(), x2.clone()];
    while t.len() <= d {
        let n = t.len();
        t.push(&(&x2 * &t[n - 1]) - &t[n - 2]);
        u.push(&(&x2 * &u[n - 1]) - &u[n - 2]);
    }
    (t, u)
}

/// A root of `r` in `[-1, 1]`, found exactly at the endpoints and by Sturm
/// bisection inside. The zero polynomial reports `x = 1`.
fn root_in_unit_interval(r: &Poly) -> Option<RootLocation> {
    let (lo, hi) = (int(-1), int(1));
    if r.is_zero() || r.eval(&hi).is_zero() {
        return Some(RootLocation::Exact(hi));
    }
    if r.eval(&lo).is_zero() {
        return Some(RootLocation::Exact(lo));
    }
    let seq = sturm_sequence(r);
    if sign_changes(&seq, &lo) == sign_changes(&seq, &hi) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..60 {
        let mid = (&a + &b) / int(2);
        if r.eval(&mid).is_zero() {
            return Some(RootLocation::Exact(mid));
        }
        if sign_changes(&seq, &a) > sign_changes(&seq, &mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Some(RootLocation::Approx(to_f64(&((a + b) / int(2)))))
}

fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        // Positive rescaling keeps signs and tames coefficient growth.
        let lead = r.leading().abs();
        seq.push(-&r.scale(&lead.recip()));
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &Rational) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|p| p.sign_at(x))
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Determinant of a square matrix of trigonometric polynomials, by Laplace
/// expansion along rows with memoization over the remaining column sets.
pub fn determinant(m: &[Vec<TrigPoly>]) -> TrigPoly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    assert!(n < 64, "matrix too large");
    fn rec(
        m: &[Vec<TrigPoly>],
        row: usize,
        cols: u64,
        memo: &mut HashMap<u64, TrigPoly>,
    ) -> TrigPoly {
        if row == m.len() {
            return TrigPoly::constant(Rational::one());
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = TrigPoly::zero();
        let mut sign_positive = true;
        for j in 0..m.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            if !m[row][j].is_zero() {
                let minor = rec(m, row + 1, cols & !(1 << j), memo);
                let term = m[row][j].mul(&minor);
                acc = if sign_positive {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    rec(m, 0, (1u64 << n) - 1, &mut HashMap::new())
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.coeffs.iter().map(|(n, c)| (n, format!("{c}"))))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn hat() -> PiecewisePoly {
        PiecewisePoly::new(
            vec![int(0), int(1), int(2)],
            vec![Poly::from_ints(&[0, 1]), Poly::from_ints(&[2, -1])],
        )
        .unwrap()
    }

    #[test]
    fn indicator_autocorrelation_is_one() {
        let chi = PiecewisePoly::indicator(int(0), int(1));
        assert_eq!(
            TrigPoly::from_inner_products(&chi, &chi),
            TrigPoly::constant(int(1))
        );
    }

    #[test]
    fn hat_autocorrelation() {
        let h = hat();
        let theta = TrigPoly::from_inner_products(&h, &h);
        let expect = TrigPoly::from_real([(-1, rat(1, 6)), (0, rat(2, 3)), (1, rat(1, 6))]);
        assert_eq!(theta, expect);
        let far = TrigPoly::from_inner_products(&h, &h.shift(&int(2)));
        assert!(far.coeff(2).is_zero());
        match theta.positivity().unwrap() {
            Positivity::Positive { min_xi, min_value } => {
                assert!((min_xi - PI).abs() < 1e-2);
                assert!((min_value - 1.0 / 3.0).abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_is_positive() {
        assert!(TrigPoly::constant(int(1))
            .positivity()
            .unwrap()
            .is_positive());
        assert!(!TrigPoly::zero().positivity().unwrap().is_positive());
    }

    #[test]
    fn detects_zero_at_pi_and_interior() {
        // 1 + cos ξ vanishes at π
        let t = TrigPoly::from_real([(-1, rat(1, 2)), (0, int(1)), (1, rat(1, 2))]);
        match t.positivity().unwrap() {
            Positivity::Zero { xi } => assert!((xi - PI).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        // (1 + 2 sin ξ)² vanishes where sin ξ = -1/2, through the sine part.
        let s = TrigPoly::from_coeffs([
            (-1, GaussRat::new(int(0), int(-1))),
            (0, GaussRat::new(int(1), int(0))),
            (1, GaussRat::new(int(0), int(1))),
        ]);
        let sq = s.mul(&s);
        assert!(sq.is_real_valued());
        match sq.positivity().unwrap() {
            Positivity::Zero { xi } => {
                let v = sq.eval(xi).norm();
                assert!(v < 1e-9, "{xi} {v}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_real_is_rejected() {
        let t = TrigPoly::from_real([(1, int(1))]);
        assert!(t.positivity().is_none());
    }

    #[test]
    fn determinant_matches_expansion() {
        let a = TrigPoly::from_real([(0, int(2)), (1, int(1))]);
        let b = TrigPoly::from_real([(-1, int(1))]);
        let c = TrigPoly::from_real([(1, int(3))]);
        let d = TrigPoly::constant(int(5));
        let det = determinant(&[vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]);
        assert_eq!(det, a.mul(&d).sub(&b.mul(&c)));
    }
}
