//! Cardinal B-splines, quarks and their refinement masks.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{MaskSequence, RatMask, RatMatrix};
use crate::piecewise::PiecewisePoly;
use crate::poly::Poly;
use crate::rational::{binomial, factorial, int, pow2, powi, rat, Rational};

/// `⌊m/2⌋`
pub fn half_floor(m: u32) -> i64 {
    (m / 2) as i64
}

/// `⌈m/2⌉`
pub fn half_ceil(m: u32) -> i64 {
    m.div_ceil(2) as i64
}

/// Cardinal B-spline `N_m` on `[0, m]`, by the recursion
/// `N_m(x) = x/(m-1) N_{m-1}(x) + (m-x)/(m-1) N_{m-1}(x-1)`.
pub fn bspline(m: u32) -> Result<PiecewisePoly> {
    if m == 0 {
        return Err(Error::InvalidParameters(
            "spline order must be at least 1".into(),
        ));
    }
    let mut n = PiecewisePoly::indicator(int(0), int(1));
    for k in 2..=m as i64 {
        let inv = rat(1, k - 1);
        let left = Poly::linear(inv.clone(), Rational::zero());
        let right = Poly::linear(-inv.clone(), int(k) * inv);
        n = n.mul_poly(&left).add(&n.shift(&int(1)).mul_poly(&right));
    }
    Ok(n)
}

/// `N_m` from the truncated-power sum
/// `1/(m-1)! Σ_k (-1)^k C(m,k) (x-k)_+^{m-1}`. Independent of [`bspline`].
pub fn bspline_truncated_power(m: u32) -> Result<PiecewisePoly> {
    if m == 0 {
        return Err(Error::InvalidParameters(
            "spline order must be at least 1".into(),
        ));
    }
    let m = m as i64;
    let scale = Rational::from_integer(factorial((m - 1) as u64)).recip();
    let mut pieces = Vec::new();
    for j in 0..m {
        let mut piece = Poly::zero();
        for k in 0..=j {
            let c = Rational::from_integer(binomial(m, k)) * int(if k % 2 == 0 { 1 } else { -1 });
            let shifted = Poly::linear(int(1), int(-k)).pow((m - 1) as u32);
            piece = &piece + &shifted.scale(&c);
        }
        pieces.push(piece.scale(&scale));
    }
    PiecewisePoly::new((0..=m).map(int).collect(), pieces)
}

/// Quark `φ_q(x) = (x/⌈m/2⌉)^q N_m(x + ⌊m/2⌋)`, supported on `[-⌊m/2⌋, ⌈m/2⌉]`.
pub fn quark(m: u32, q: u32) -> Result<PiecewisePoly> {
    let centred = bspline(m)?.shift(&int(-half_floor(m)));
    let monomial = Poly::linear(rat(1, half_ceil(m)), Rational::zero()).pow(q);
    Ok(centred.mul_poly(&monomial))
}

/// `𝓕φ_q(ξ)`.
pub fn quark_ft(m: u32, q: u32, xi: f64) -> Result<Complex64> {
    Ok(quark(m, q)?.fourier(xi))
}

/// The quark vector `Φ = (φ_0, …, φ_p)`.
#[derive(Clone, Debug)]
pub struct QuarkFamily {
    pub m: u32,
    pub p: u32,
    pub quarks: Vec<PiecewisePoly>,
}

impl QuarkFamily {
    pub fn new(m: u32, p: u32) -> Result<Self> {
        let quarks = (0..=p).map(|q| quark(m, q)).collect::<Result<_>>()?;
        Ok(Self { m, p, quarks })
    }
}

#[derive(Clone, Debug)]
pub struct RefinementMasks {
    pub m: u32,
    pub p: u32,
    /// Scalar B-spline mask `a_k`.
    pub a: RatMask,
    /// Matrix masks `A_k` of size `(p+1) x (p+1)`.
    pub matrices: RatMask,
}

/// Scalar mask `a_k = 2^{1-m} C(m, k + ⌊m/2⌋)` for `k ∈ [-⌊m/2⌋, ⌈m/2⌉]`.
pub fn primal_mask(m: u32) -> RatMask {
    let f = half_floor(m);
    MaskSequence::scalar((-f..=half_ceil(m)).map(|k| {
        (
            k,
            pow2(1 - m as i64) * Rational::from_integer(binomial(m as i64, k + f)),
        )
    }))
}

/// Matrices `A_k` with `Φ = Σ_k A_k Φ(2· - k)`:
/// `(A_k)_{q,l} = 2^{-q} ⌈m/2⌉^{l-q} a_k C(q, l) k^{q-l}` (0-based `q, l`).
pub fn refinement_masks(m: u32, p: u32) -> Result<RefinementMasks> {
    if m == 0 {
        return Err(Error::InvalidParameters(
            "spline order must be at least 1".into(),
        ));
    }
    let a = primal_mask(m);
    let c = int(half_ceil(m));
    let n = p as usize + 1;
    let mut matrices = MaskSequence::new(n, n);
    for (k, ak) in a.iter() {
        let ak = ak.get(0, 0).clone();
        let kr = int(k);
        let mk = RatMatrix::from_fn(n, n, |q, l| {
            if l > q {
                return Rational::zero();
            }
            let (q, l) = (q as i64, l as i64);
            pow2(-q)
                * powi(&c, l - q)
                * &ak
                * Rational::from_integer(binomial(q, l))
                * powi(&kr, q - l)
        });
        matrices.insert(k, mk);
    }
    Ok(RefinementMasks { m, p, a, matrices })
}

/// `Σ_i M[r][i] f_i` for each row `r` of a rational matrix.
pub fn apply_matrix(m: &RatMatrix, fs: &[PiecewisePoly]) -> Vec<PiecewisePoly> {
    (0..m.rows())
        .map(|r| {
            fs.iter()
                .enumerate()
                .filter(|(i, _)| !m.get(r, *i).is_zero())
                .fold(PiecewisePoly::zero(), |acc, (i, f)| {
                    acc.add(&f.scale(m.get(r, i)))
                })
        })
        .collect()
}

/// `Σ_k M_k F(2· - k)` for a vector of functions `F`.
pub fn refine_vector(mask: &RatMask, fs: &[PiecewisePoly]) -> Vec<PiecewisePoly> {
    let mut out = vec![PiecewisePoly::zero(); mask.rows()];
    for (k, mk) in mask.iter() {
        let dilated: Vec<_> = fs.iter().map(|f| f.dilate_shift(1, k)).collect();
        for (o, t) in out.iter_mut().zip(apply_matrix(mk, &dilated)) {
            *o = o.add(&t);
        }
    }
    out
}

/// Partition of unity value `Σ_k N_m(x - k)` at a rational point.
pub fn partition_of_unity_at(n: &PiecewisePoly, x: &Rational) -> Rational {
    let (lo, hi) = n.support().expect("nonzero spline");
    let span = crate::rational::ceil_i64(&(hi - lo)) + 1;
    let base = crate::rational::floor_i64(x);
    ((base - span)..=(base + span))
        .map(|k| n.eval(&(x - int(k))))
        .fold(Rational::zero(), |a, b| a + b)
}
