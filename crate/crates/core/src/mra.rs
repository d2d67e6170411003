//! Coefficient-level multiscale transforms and orthogonalized Haar quarklets.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cdf::quarklets;
use crate::error::{Error, Result};
use crate::matrix::{RatMask, RatMatrix};
use crate::modulation::{DecompositionFilters, ModulationBundle};
use crate::piecewise::PiecewisePoly;
use crate::rational::{ceil_i64, floor_i64, int, Rational};
use crate::splines::QuarkFamily;

/// Finitely supported sequence `k -> c_k ∈ Q^{dim}` at dyadic level `j`,
/// representing `Σ_k c_kᵀ G(2^j · - k)` for a generator vector `G`.
/// All-zero vectors are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientFrame {
    pub level: i64,
    dim: usize,
    coeffs: BTreeMap<i64, Vec<Rational>>,
}

impl CoefficientFrame {
    pub fn new(level: i64, dim: usize) -> Self {
        Self {
            level,
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, k: i64, v: Vec<Rational>) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in frame of dimension {}",
                v.len(),
                self.dim
            )));
        }
        if v.iter().all(Zero::is_zero) {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, v);
        }
        Ok(())
    }

    /// Adds `v` to the coefficient at `k`.
    pub fn accumulate(&mut self, k: i64, v: &[Rational]) {
        let entry = self
            .coeffs
            .entry(k)
            .or_insert_with(|| vec![Rational::zero(); v.len()]);
        for (e, x) in entry.iter_mut().zip(v) {
            *e += x;
        }
        if entry.iter().all(Zero::is_zero) {
            self.coeffs.remove(&k);
        }
    }

    pub fn get(&self, k: i64) -> Option<&Vec<Rational>> {
        self.coeffs.get(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Vec<Rational>)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ_k c_kᵀ G(2^j x - k)`.
    pub fn function(&self, generators: &[PiecewisePoly]) -> PiecewisePoly {
        self.coeffs
            .iter()
            .flat_map(|(k, v)| {
                v.iter()
                    .zip(generators)
                    .filter(|(c, _)| !c.is_zero())
                    .map(move |(c, g)| g.dilate_shift(self.level, *k).scale(c))
            })
            .fold(PiecewisePoly::zero(), |acc, f| acc.add(&f))
    }

    /// Applies `M` to every coefficient vector.
    pub fn map_vectors(&self, m: &RatMatrix) -> Result<Self> {
        let mut out = Self::new(self.level, m.rows());
        for (k, v) in &self.coeffs {
            out.insert(*k, m.mul_vec(v)?)?;
        }
        Ok(out)
    }
}

/// Everything needed to move between `V_{j+1}` and `V_j ⊕ W_j`.
#[derive(Clone, Debug)]
pub struct Transform {
    pub p: u32,
    pub a: RatMask,
    pub b: RatMask,
    pub filters: DecompositionFilters,
}

impl Transform {
    pub fn new(bundle: &ModulationBundle) -> Result<Self> {
        Ok(Self {
            p: bundle.p,
            a: bundle.refinement.matrices.clone(),
            b: bundle.b_masks.clone(),
            filters: bundle.decomposition_filters()?,
        })
    }

    fn dim(&self) -> usize {
        self.p as usize + 1
    }

    fn check(&self, f: &CoefficientFrame) -> Result<()> {
        if f.dim != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "frame dimension {} for p = {}",
                f.dim, self.p
            )));
        }
        Ok(())
    }

    /// `c_n = Σ_l (A_{n-2l}ᵀ s_l + B_{n-2l}ᵀ d_l)`.
    pub fn reconstruct(
        &self,
        s: &CoefficientFrame,
        d: &CoefficientFrame,
    ) -> Result<CoefficientFrame> {
        self.check(s)?;
        self.check(d)?;
        if s.level != d.level {
            return Err(Error::InvalidParameters(format!(
                "levels differ: {} vs {}",
                s.level, d.level
            )));
        }
        let mut c = CoefficientFrame::new(s.level + 1, self.dim());
        for (mask, frame) in [(&self.a, s), (&self.b, d)] {
            let transposed: Vec<(i64, RatMatrix)> =
                mask.iter().map(|(k, m)| (k, m.transpose())).collect();
            for (l, v) in frame.iter() {
                for (k, mt) in &transposed {
                    c.accumulate(2 * l + k, &mt.mul_vec(v)?);
                }
            }
        }
        Ok(c)
    }

    /// `s_l = Σ_n C_{2l-n+2ρ(n)}ᵀ c_n` and likewise for `d`, `ρ(n) = n mod 2`.
    pub fn decompose(&self, c: &CoefficientFrame) -> Result<(CoefficientFrame, CoefficientFrame)> {
        self.check(c)?;
        let mut s = CoefficientFrame::new(c.level - 1, self.dim());
        let mut d = CoefficientFrame::new(c.level - 1, self.dim());
        for (mask, out) in [(&self.filters.c, &mut s), (&self.filters.d, &mut d)] {
            let transposed: Vec<(i64, RatMatrix)> =
                mask.iter().map(|(k, m)| (k, m.transpose())).collect();
            let parts: Vec<(i64, Vec<Rational>)> = c
                .iter()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&(n, v)| {
                    let rho = n.rem_euclid(2);
                    transposed
                        .iter()
                        .filter(|(idx, _)| (idx - rho).rem_euclid(2) == 0)
                        .map(|(idx, mt)| {
                            // idx = 2l - n + 2ρ
                            let l = (idx + n - 2 * rho) / 2;
                            (l, mt.mul_vec(v).expect("shape"))
                        })
                        .collect::<Vec<_>>()
                })
                .flatten()
                .collect();
            for (l, v) in parts {
                out.accumulate(l, &v);
            }
        }
        Ok((s, d))
    }
}

/// Orthogonalized Haar quarklets `ψ*_q = Σ_l L_{ql} ψ_l`.
#[derive(Clone, Debug)]
pub struct OrthoQuarklets {
    pub mt: u32,
    pub p: u32,
    pub psis: Vec<PiecewisePoly>,
    pub stars: Vec<PiecewisePoly>,
    /// `⟨ψ*_q, ψ*_q⟩`.
    pub gram: Vec<Rational>,
    /// Unit lower-triangular change of basis, `Ψ* = L Ψ`.
    pub l: RatMatrix,
}

/// Gram–Schmidt on `ψ_0, …, ψ_p` for `m = 1` with exact inner products.
///
/// Only `m~ = 1` is accepted: then every `ψ_q` lives in `[0, 1]`, so distinct
/// translates are orthogonal and per-translate orthogonalization is global.
pub fn orthogonalize_haar(m: u32, mt: u32, p: u32) -> Result<OrthoQuarklets> {
    if m != 1 {
        return Err(Error::Unsupported(format!(
            "orthogonalization is implemented for m = 1 only, got m = {m}"
        )));
    }
    if mt != 1 {
        return Err(Error::Unsupported(format!(
            "translates of the quarklets overlap for m~ = {mt}; only m~ = 1 is supported"
        )));
    }
    let psis = quarklets(m, mt, p)?.quarklets;
    let n = psis.len();
    let mut l = RatMatrix::identity(n);
    let mut stars: Vec<PiecewisePoly> = Vec::with_capacity(n);
    let mut gram: Vec<Rational> = Vec::with_capacity(n);
    for (q, psi) in psis.iter().enumerate() {
        let mut star = psi.clone();
        let mut row: Vec<Rational> = (0..n)
            .map(|j| {
                if j == q {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for r in 0..q {
            let coef = psi.inner(&stars[r]) / &gram[r];
            star = star.sub(&stars[r].scale(&coef));
            for (j, x) in row.iter_mut().enumerate() {
                *x -= &coef * l.get(r, j);
            }
        }
        for (j, x) in row.into_iter().enumerate() {
            l.set(q, j, x);
        }
        gram.push(star.inner(&star));
        stars.push(star);
    }
    Ok(OrthoQuarklets {
        mt,
        p,
        psis,
        stars,
        gram,
        l,
    })
}

impl OrthoQuarklets {
    /// Orthogonal projection onto `W_{p,0}`:
    /// `Σ_q Σ_k ⟨f, ψ*_q(·-k)⟩ / ⟨ψ*_q, ψ*_q⟩ ψ*_q(·-k)`.
    pub fn project_w(&self, f: &PiecewisePoly) -> PiecewisePoly {
        let Some((lo, hi)) = f.support() else {
            return PiecewisePoly::zero();
        };
        let mut out = PiecewisePoly::zero();
        for (star, norm) in self.stars.iter().zip(&self.gram) {
            let (a, b) = star.support().expect("nonzero quarklet");
            for k in floor_i64(&(&lo - &b))..=ceil_i64(&(&hi - &a)) {
                let shifted = star.shift(&int(k));
                let c = f.inner(&shifted);
                if !c.is_zero() {
                    out = out.add(&shifted.scale(&(c / norm)));
                }
            }
        }
        out
    }

    /// Rewrites a quarklet frame over `Ψ` as one over `Ψ*`: `d* = L^{-T} d`.
    pub fn decompose_orthogonal(&self, d: &CoefficientFrame) -> Result<CoefficientFrame> {
        d.map_vectors(&self.inverse_transpose())
    }

    /// Rewrites a frame over `Ψ*` as one over `Ψ`: `d = Lᵀ d*`.
    pub fn recompose(&self, d_star: &CoefficientFrame) -> Result<CoefficientFrame> {
        d_star.map_vectors(&self.l.transpose())
    }

    /// Splits a frame over `Ψ*` into one scalar frame per degree `q`.
    pub fn split_by_degree(d_star: &CoefficientFrame) -> Vec<CoefficientFrame> {
        (0..d_star.dim())
            .map(|q| {
                let mut f = CoefficientFrame::new(d_star.level, 1);
                for (k, v) in d_star.iter() {
                    f.insert(k, vec![v[q].clone()]).expect("scalar");
                }
                f
            })
            .collect()
    }

    /// `L^{-T}`, by forward substitution on the unit lower-triangular `L`.
    fn inverse_transpose(&self) -> RatMatrix {
        let n = self.l.rows();
        let mut inv = RatMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                let s = (j..i).fold(Rational::zero(), |acc, k| {
                    acc + self.l.get(i, k) * inv.get(k, j)
                });
                inv.set(i, j, -s);
            }
        }
        inv.transpose()
    }
}

/// Generators for frames of a given kind, used to turn frames into functions.
pub fn generators(m: u32, mt: u32, p: u32) -> Result<(Vec<PiecewisePoly>, Vec<PiecewisePoly>)> {
    Ok((
        QuarkFamily::new(m, p)?.quarks,
        quarklets(m, mt, p)?.quarklets,
    ))
}
