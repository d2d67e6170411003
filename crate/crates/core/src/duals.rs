//! Generalized dual quarks and quarklets, approximated in the Fourier domain
//! by a truncated infinite product.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::conventions::symbol_z;
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::modulation::ModulationBundle;
use crate::rational::{int, pow2, to_f64, Rational};

/// Right eigenvector of `2^{-p} 𝒜~(1)` for the eigenvalue 1, with last
/// component 1, by back substitution on the upper-triangular matrix.
pub fn dual_eigenvector(bundle: &ModulationBundle) -> Result<Vec<Rational>> {
    let m = scaled_dual_at_one(bundle);
    if !m.is_upper_triangular() {
        return Err(Error::Construction(
            "dual symbol at 1 is not upper triangular".into(),
        ));
    }
    let n = m.rows();
    let mut v = vec![Rational::zero(); n];
    v[n - 1] = Rational::one();
    for i in (0..n - 1).rev() {
        let pivot = m.get(i, i) - int(1);
        if pivot.is_zero() {
            return Err(Error::Construction("eigenvalue 1 is not simple".into()));
        }
        let s = (i + 1..n).fold(Rational::zero(), |acc, j| acc + m.get(i, j) * &v[j]);
        v[i] = -s / pivot;
    }
    Ok(v)
}

fn scaled_dual_at_one(bundle: &ModulationBundle) -> RatMatrix {
    bundle.a_dual_at_one().scale(&pow2(-(bundle.p as i64)))
}

/// How the neglected tail `Φ~^(ξ/2^J)` of the product is modelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TailModel {
    /// `Φ~^(ξ/2^J) ≈ v`, error `O(2^{-J})`.
    None,
    /// `Φ~^(ξ/2^J) ≈ v + (ξ/2^J) w` with the exact derivative `w` at 0,
    /// error `O(4^{-J})`.
    #[default]
    FirstOrder,
}

/// Exact data of the product `Π_j M(e^{-i 2^{-j} ξ}) v`, with
/// `M(z) = 2^{-p} 𝒜~(z) = Σ_k μ_k z^k`.
#[derive(Clone, Debug)]
pub struct DualProduct {
    pub p: u32,
    pub v: Vec<Rational>,
    /// `u` with `d/dξ Φ~^(0) = -i u` (before the `(iξ)^p` factor).
    pub u: Vec<Rational>,
    terms: Vec<(i64, DMatrix<Complex64>)>,
}

impl DualProduct {
    pub fn new(bundle: &ModulationBundle) -> Result<Self> {
        let v = dual_eigenvector(bundle)?;
        let n = v.len();
        let scale = pow2(-(bundle.p as i64));
        let mu = bundle.a_dual_sym.scale(&scale);
        let (lo, hi) = mu.exp_range().unwrap_or((0, 0));
        // (Id - ½ M(1)) u = ½ Σ_k k μ_k v
        let m1 = scaled_dual_at_one(bundle);
        let mut first = RatMatrix::zeros(n, n);
        for k in lo..=hi {
            first = first
                .add(&mu.coeff_matrix(k).scale(&int(k)))
                .expect("shape");
        }
        let rhs = first
            .scale(&Rational::new(1.into(), 2.into()))
            .mul_vec(&v)?;
        let lhs = RatMatrix::identity(n)
            .sub(&m1.scale(&Rational::new(1.into(), 2.into())))
            .expect("shape");
        let u = solve_upper(&lhs, &rhs)?;
        let terms = (lo..=hi)
            .map(|k| {
                let c = mu.coeff_matrix(k);
                (
                    k,
                    DMatrix::from_fn(n, n, |i, j| Complex64::new(to_f64(c.get(i, j)), 0.0)),
                )
            })
            .filter(|(_, m)| m.iter().any(|x| *x != Complex64::zero()))
            .collect();
        Ok(Self {
            p: bundle.p,
            v,
            u,
            terms,
        })
    }

    fn symbol_at(&self, z: Complex64) -> DMatrix<Complex64> {
        let n = self.v.len();
        self.terms.iter().fold(DMatrix::zeros(n, n), |acc, (k, c)| {
            acc + c * z.powi(*k as i32)
        })
    }

    /// `(iξ)^p Π_{j=1}^{J} M(e^{-i 2^{-j} ξ}) t(ξ/2^J)`, accumulated left to right.
    pub fn eval(&self, xi: f64, levels: u32, tail: TailModel) -> Vec<Complex64> {
        let n = self.v.len();
        let mut acc = DMatrix::<Complex64>::identity(n, n);
        let mut x = xi;
        for _ in 0..levels {
            x /= 2.0;
            acc *= self.symbol_at(Complex64::from_polar(1.0, -x));
        }
        let start = DVector::from_fn(n, |i, _| {
            let v = Complex64::new(to_f64(&self.v[i]), 0.0);
            match tail {
                TailModel::None => v,
                TailModel::FirstOrder => v - Complex64::i() * x * to_f64(&self.u[i]),
            }
        });
        let weight = (Complex64::i() * xi).powi(self.p as i32);
        (acc * start).iter().map(|c| c * weight).collect()
    }
}

fn solve_upper(m: &RatMatrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = m.rows();
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let s = (i + 1..n).fold(rhs[i].clone(), |acc, j| acc - m.get(i, j) * &x[j]);
        let d = m.get(i, i);
        if d.is_zero() {
            return Err(Error::Construction("singular triangular system".into()));
        }
        x[i] = s / d;
    }
    Ok(x)
}

#[derive(Clone, Debug)]
pub struct DualApproximation {
    pub m: u32,
    pub mt: u32,
    pub p: u32,
    pub levels: u32,
    pub tail: TailModel,
    pub v: Vec<Rational>,
    pub grid: Vec<f64>,
    /// `values[i]` approximates `𝓕Φ~(grid[i])`.
    pub values: Vec<Vec<Complex64>>,
}

pub fn dual_quark_ft(
    bundle: &ModulationBundle,
    levels: u32,
    grid: &[f64],
    tail: TailModel,
) -> Result<DualApproximation> {
    if levels == 0 {
        return Err(Error::InvalidParameters(
            "truncation level must be at least 1".into(),
        ));
    }
    let prod = DualProduct::new(bundle)?;
    let values = grid
        .par_iter()
        .map(|&xi| prod.eval(xi, levels, tail))
        .collect();
    Ok(DualApproximation {
        m: bundle.m,
        mt: bundle.mt,
        p: bundle.p,
        levels,
        tail,
        v: prod.v,
        grid: grid.to_vec(),
        values,
    })
}

impl DualApproximation {
    pub fn lookup(&self) -> HashMap<u64, usize> {
        self.grid
            .iter()
            .enumerate()
            .map(|(i, x)| (canonical_bits(*x), i))
            .collect()
    }
}

fn canonical_bits(x: f64) -> u64 {
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

/// `𝓕Ψ~(ξ) = ℬ~(e^{-iξ/2}) 𝓕Φ~(ξ/2)` at each target `ξ`; every `ξ/2` must be
/// a point of the approximation grid.
pub fn dual_quarklet_ft(
    bundle: &ModulationBundle,
    approx: &DualApproximation,
    targets: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    let index = approx.lookup();
    targets
        .iter()
        .map(|&xi| {
            let half = xi / 2.0;
            let &i = index
                .get(&canonical_bits(half))
                .ok_or(Error::GridNotHalvingClosed(half))?;
            let b = bundle.b_dual_sym.eval_c64(symbol_z(xi));
            let v = DVector::from_column_slice(&approx.values[i]);
            Ok((b * v).iter().copied().collect())
        })
        .collect()
}

/// Points `2πk / 2^depth` for `k = -count..=count`; halving maps depth `s`
/// onto depth `s + 1` exactly.
pub fn dyadic_grid(depth: u32, count: i64) -> Vec<f64> {
    let h = 2.0 * PI / 2f64.powi(depth as i32);
    (-count..=count).map(|k| k as f64 * h).collect()
}

/// Uniform grid of `n` points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * (i as f64 / (n - 1) as f64))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStep {
    pub from: u32,
    pub to: u32,
    pub delta: f64,
}

/// Sup-norm differences between consecutive truncation levels.
pub fn convergence_probe(
    bundle: &ModulationBundle,
    grid: &[f64],
    levels: &[u32],
    tail: TailModel,
) -> Result<Vec<ConvergenceStep>> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameters("levels must be increasing".into()));
    }
    let prod = DualProduct::new(bundle)?;
    let runs: Vec<Vec<Vec<Complex64>>> = levels
        .iter()
        .map(|&j| grid.par_iter().map(|&xi| prod.eval(xi, j, tail)).collect())
        .collect();
    Ok(levels
        .windows(2)
        .zip(runs.windows(2))
        .map(|(l, r)| ConvergenceStep {
            from: l[0],
            to: l[1],
            delta: sup_distance(&r[0], &r[1]),
        })
        .collect())
}

pub fn sup_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(s, t)| (s - t).norm()))
        .fold(0.0, f64::max)
}

/// Support hull of the dual refinement mask; the dual generator is
/// supported in it.
pub fn dual_mask_support(bundle: &ModulationBundle) -> (i64, i64) {
    bundle.a_dual.support().unwrap_or((0, 0))
}

/// Relative L2 mass of the component `comp` of the dual generator outside
/// `[lo - eps, hi + eps]`, from a periodized inverse DFT.
///
/// The transform is sampled at `ξ_k = 2πk/period` for `|k| <= freqs`, and the
/// resulting Fourier series is evaluated on `samples` points per period with
/// Lanczos σ-factors to suppress Gibbs ringing.
#[allow(clippy::too_many_arguments)]
pub fn support_leakage(
    bundle: &ModulationBundle,
    comp: usize,
    levels: u32,
    period: f64,
    freqs: i64,
    samples: usize,
    (lo, hi): (f64, f64),
    eps: f64,
) -> Result<f64> {
    let prod = DualProduct::new(bundle)?;
    let coeffs: Vec<(f64, Complex64)> = (-freqs..=freqs)
        .into_par_iter()
        .map(|k| {
            let xi = 2.0 * PI * k as f64 / period;
            let sigma = if k == 0 {
                1.0
            } else {
                let t = PI * k as f64 / (freqs + 1) as f64;
                t.sin() / t
            };
            (
                xi,
                prod.eval(xi, levels, TailModel::FirstOrder)[comp] * sigma / period,
            )
        })
        .collect();
    let centre = (lo + hi) / 2.0;
    let xs: Vec<f64> = (0..samples)
        .map(|i| centre - period / 2.0 + period * i as f64 / samples as f64)
        .collect();
    let vals: Vec<f64> = xs
        .par_iter()
        .map(|&x| {
            coeffs
                .iter()
                .map(|(xi, c)| c * Complex64::from_polar(1.0, xi * x))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect();
    let total: f64 = vals.iter().sum();
    let outside: f64 = xs
        .iter()
        .zip(&vals)
        .filter(|(x, _)| **x < lo - eps || **x > hi + eps)
        .map(|(_, v)| v)
        .sum();
    Ok(outside / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn haar_eigenvector() {
        let b = ModulationBundle::new(1, 1, 1).unwrap();
        assert_eq!(dual_eigenvector(&b).unwrap(), vec![rat(-1, 2), int(1)]);
        let b0 = ModulationBundle::new(1, 1, 0).unwrap();
        assert_eq!(dual_eigenvector(&b0).unwrap(), vec![int(1)]);
    }

    #[test]
    fn haar_tail_derivative() {
        let b = ModulationBundle::new(1, 1, 0).unwrap();
        let prod = DualProduct::new(&b).unwrap();
        assert_eq!(prod.u, vec![rat(1, 2)]);
    }

    #[test]
    fn value_at_zero() {
        let b = ModulationBundle::new(2, 2, 1).unwrap();
        let approx = dual_quark_ft(&b, 10, &[0.0], TailModel::None).unwrap();
        assert!(approx.values[0].iter().all(|c| c.norm() == 0.0));
        let b0 = ModulationBundle::new(1, 1, 0).unwrap();
        let approx = dual_quark_ft(&b0, 10, &[0.0], TailModel::None).unwrap();
        assert_eq!(approx.values[0], vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn halving_closure_is_enforced() {
        let b = ModulationBundle::new(1, 1, 0).unwrap();
        let approx = dual_quark_ft(&b, 5, &dyadic_grid(3, 4), TailModel::FirstOrder).unwrap();
        assert!(dual_quarklet_ft(&b, &approx, &dyadic_grid(2, 4)).is_ok());
        assert!(matches!(
            dual_quarklet_ft(&b, &approx, &dyadic_grid(1, 4)),
            Err(Error::GridNotHalvingClosed(_))
        ));
    }
}
