//! L2-stability of quark translates, Fourier zero scans and Condition E.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::modulation::ModulationBundle;
use crate::piecewise::PiecewisePoly;
use crate::poly::Poly;
use crate::rational::{int, Rational};
use crate::splines::{quark, QuarkFamily};
use crate::trig::{determinant, Positivity, TrigPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subject {
    /// Translates of the single quark `φ_q` of order `m`.
    Single { m: u32, q: u32 },
    /// Translates of the vector `(φ_0, …, φ_p)`.
    Vector { m: u32, p: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// The symbol is positive; its sampled minimum is reported.
    PositiveMinimum { xi: f64, value: f64 },
    /// The symbol vanishes at `xi` (located exactly up to float rounding).
    UnitCircleZero { xi: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub subject: Subject,
    pub stable: bool,
    pub certificate: Certificate,
}

fn report(subject: Subject, theta: &TrigPoly) -> Result<StabilityReport> {
    let verdict = theta
        .positivity()
        .ok_or_else(|| Error::Construction("Gram symbol is not real-valued".into()))?;
    Ok(match verdict {
        Positivity::Positive { min_xi, min_value } => StabilityReport {
            subject,
            stable: true,
            certificate: Certificate::PositiveMinimum {
                xi: min_xi,
                value: min_value,
            },
        },
        Positivity::Zero { xi } => StabilityReport {
            subject,
            stable: false,
            certificate: Certificate::UnitCircleZero { xi },
        },
        Positivity::Negative { .. } => {
            return Err(Error::Construction("Gram symbol is negative".into()))
        }
    })
}

/// Autocorrelation symbol of `φ_q`.
pub fn autocorrelation(m: u32, q: u32) -> Result<TrigPoly> {
    let phi = quark(m, q)?;
    Ok(TrigPoly::from_inner_products(&phi, &phi))
}

pub fn is_stable_single(m: u32, q: u32) -> Result<StabilityReport> {
    report(Subject::Single { m, q }, &autocorrelation(m, q)?)
}

/// Gram symbol matrix `G_{ij} = Θ_{φ_i, φ_j}`.
pub fn gram_matrix(fs: &[PiecewisePoly]) -> Vec<Vec<TrigPoly>> {
    fs.iter()
        .map(|f| {
            fs.iter()
                .map(|g| TrigPoly::from_inner_products(f, g))
                .collect()
        })
        .collect()
}

/// `G_{ji}` is the conjugate function of `G_{ij}`, so `G(ξ)` is Hermitian.
pub fn is_hermitian(g: &[Vec<TrigPoly>]) -> bool {
    (0..g.len()).all(|i| (0..g.len()).all(|j| g[j][i] == g[i][j].conj()))
}

pub fn is_stable_vector(m: u32, p: u32) -> Result<StabilityReport> {
    let fam = QuarkFamily::new(m, p)?;
    let gram = gram_matrix(&fam.quarks);
    report(Subject::Vector { m, p }, &determinant(&gram))
}

#[derive(Clone, Debug)]
pub struct StabilityTable {
    pub max_m: u32,
    pub max_p: u32,
    /// `rows[m-1][q]`.
    pub rows: Vec<Vec<StabilityReport>>,
}

pub fn stability_table(max_m: u32, max_p: u32) -> Result<StabilityTable> {
    if max_m == 0 {
        return Err(Error::InvalidParameters("max_m must be at least 1".into()));
    }
    let cells: Vec<(u32, u32)> = (1..=max_m)
        .flat_map(|m| (0..=max_p).map(move |q| (m, q)))
        .collect();
    let reports = cells
        .par_iter()
        .map(|&(m, q)| is_stable_single(m, q))
        .collect::<Result<Vec<_>>>()?;
    let rows = reports
        .chunks(max_p as usize + 1)
        .map(<[StabilityReport]>::to_vec)
        .collect();
    Ok(StabilityTable { max_m, max_p, rows })
}

impl StabilityTable {
    pub fn get(&self, m: u32, q: u32) -> &StabilityReport {
        &self.rows[m as usize - 1][q as usize]
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| m \\ p |");
        for q in 0..=self.max_p {
            let _ = write!(s, " {q} |");
        }
        s.push_str("\n|---|");
        for _ in 0..=self.max_p {
            s.push_str("---|");
        }
        s.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(s, "| {} |", i + 1);
            for r in row {
                s.push_str(if r.stable { " stable |" } else { " unstable |" });
            }
            s.push('\n');
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,p,stable,certificate,xi\n");
        for (i, row) in self.rows.iter().enumerate() {
            for (q, r) in row.iter().enumerate() {
                let (kind, xi) = match r.certificate {
                    Certificate::PositiveMinimum { xi, .. } => ("positive-minimum", xi),
                    Certificate::UnitCircleZero { xi } => ("unit-circle-zero", xi),
                };
                let _ = writeln!(s, "{},{},{},{},{:.17e}", i + 1, q, r.stable, kind, xi);
            }
        }
        s
    }
}

/// Approximate zeros of `|𝓕φ_q|` in `[lo, hi]`.
///
/// `|𝓕φ_q|` is sampled at `resolution` points; every interior local minimum
/// is refined by golden-section search and accepted when the refined value
/// is below `1e-8` times the sampled maximum.
pub fn ft_zero_scan(m: u32, q: u32, lo: f64, hi: f64, resolution: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameters(format!(
            "bad interval [{lo}, {hi}]"
        )));
    }
    if resolution < 3 {
        return Err(Error::InvalidParameters(
            "resolution must be at least 3".into(),
        ));
    }
    let phi = quark(m, q)?;
    let f = |x: f64| phi.fourier(x).norm();
    let step = (hi - lo) / (resolution - 1) as f64;
    let xs: Vec<f64> = (0..resolution).map(|i| lo + step * i as f64).collect();
    let ys: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
    let max = ys.iter().cloned().fold(0.0, f64::max);
    let mut zeros: Vec<f64> = Vec::new();
    for i in 1..resolution - 1 {
        if !(ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1]) {
            continue;
        }
        let x = golden_min(&f, xs[i - 1], xs[i + 1], 1e-12);
        if f(x) < 1e-8 * max && zeros.last().is_none_or(|z| (x - z).abs() > 1e-6) {
            zeros.push(x);
        }
    }
    Ok(zeros)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// `det(λ Id - M)` by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(m: &RatMatrix) -> Poly {
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let shifted = m
            .mul(&mk)
            .expect("square")
            .add(&RatMatrix::identity(n).scale(&coeffs[n - k + 1]))
            .expect("square");
        let am = m.mul(&shifted).expect("square");
        let trace = am
            .diagonal()
            .into_iter()
            .fold(Rational::zero(), |a, b| a + b);
        coeffs[n - k] = -trace / int(k as i64);
        mk = shifted;
    }
    Poly::new(coeffs)
}

/// Schur–Cohn test: every root of `q` lies in the open unit disk.
pub fn roots_inside_unit_disk(q: &Poly) -> bool {
    let mut q = q.clone();
    loop {
        let Some(d) = q.degree() else { return false };
        if d == 0 {
            return true;
        }
        let a0 = q.coeff(0);
        let ad = q.leading();
        if a0.abs() >= ad.abs() {
            return false;
        }
        // q*(z) = z^d q(1/z)
        let reversed = Poly::new(q.coeffs().iter().rev().cloned().collect::<Vec<_>>());
        let t = &q.scale(&ad) - &reversed.scale(&a0);
        // The constant term cancels; divide by z.
        q = Poly::new(t.coeffs().iter().skip(1).cloned().collect());
    }
}

/// Condition E: 1 is a simple eigenvalue and all others lie strictly inside
/// the unit disk. Exact for matrices up to 8x8, floating point beyond.
pub fn condition_e(m: &RatMatrix) -> bool {
    assert!(m.is_square(), "square matrix required");
    if m.rows() > 8 {
        let f = DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            crate::rational::to_f64(m.get(i, j))
        });
        return condition_e_f64(&f, 1e-10);
    }
    let chi = characteristic_polynomial(m);
    if !chi.eval(&int(1)).is_zero() || chi.derivative().eval(&int(1)).is_zero() {
        return false;
    }
    let (rest, rem) = chi.div_rem(&Poly::from_ints(&[-1, 1]));
    debug_assert!(rem.is_zero());
    roots_inside_unit_disk(&rest)
}

/// Floating-point Condition E with eigenvalue tolerance `tol`.
pub fn condition_e_f64(m: &DMatrix<f64>, tol: f64) -> bool {
    let eig = m.clone().complex_eigenvalues();
    let ones = eig.iter().filter(|l| (*l - 1.0).norm() < tol).count();
    ones == 1
        && eig
            .iter()
            .filter(|l| (*l - 1.0).norm() >= tol)
            .all(|l| l.norm() < 1.0 - tol)
}

/// Eigenvalues of the upper-triangular `𝒜~(1)`, read off the diagonal.
pub fn dual_symbol_eigenvalues(bundle: &ModulationBundle) -> Result<Vec<Rational>> {
    let a1 = bundle.a_dual_at_one();
    if !a1.is_upper_triangular() {
        return Err(Error::Construction(
            "dual symbol at 1 is not upper triangular".into(),
        ));
    }
    Ok(a1.diagonal())
}
