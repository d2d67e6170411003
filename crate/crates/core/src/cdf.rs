//! Biorthogonal spline (CDF) filters and the quarklets built from them.

use crate::conventions::{mask_factor, symbol_factor};
use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix, RatLaurent};
use crate::matrix::{MaskSequence, RatMask};
use crate::piecewise::PiecewisePoly;
use crate::poly::Poly;
use crate::rational::{binomial, int, rat, Rational};
use crate::splines::{primal_mask, quark};

#[derive(Clone, Debug)]
pub struct CdfPair {
    pub m: u32,
    pub mt: u32,
    /// Shift `κ` of the dual symbol.
    pub kappa: i64,
    pub a: RatMask,
    pub a_dual: RatMask,
    pub b: RatMask,
    pub b_dual: RatMask,
}

pub fn validate(m: u32, mt: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameters("m must be at least 1".into()));
    }
    if m > mt {
        return Err(Error::InvalidParameters(format!(
            "need m <= m~, got m={m}, m~={mt}"
        )));
    }
    if !(m + mt).is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "m + m~ must be even, got {m} + {mt}"
        )));
    }
    Ok(())
}

/// Symbol `½ Σ_k s_k z^k` of a scalar mask.
pub fn scalar_symbol(mask: &RatMask) -> RatLaurent {
    LaurentMatrix::from_mask(mask, &symbol_factor())
        .get(0, 0)
        .clone()
}

/// Mask `s_k = 2 · coeff_k` of a scalar symbol.
pub fn scalar_mask(symbol: &RatLaurent) -> RatMask {
    MaskSequence::scalar(symbol.terms().map(|(k, c)| (k, c * mask_factor())))
}

/// `a(z) conj(ã(z)) + a(-z) conj(ã(-z)) - 1` on the unit circle.
pub fn scalar_pr_residual(a: &RatLaurent, a_dual: &RatLaurent) -> RatLaurent {
    let lhs = a.mul(&a_dual.conj_on_circle()).add(
        &a.substitute_neg()
            .mul(&a_dual.substitute_neg().conj_on_circle()),
    );
    lhs.sub(&RatLaurent::one())
}

/// Dual symbol before shifting: `((1+z)/2)^{m~} P_L((2 - z - z^{-1})/4)`.
fn unshifted_dual_symbol(m: u32, mt: u32) -> RatLaurent {
    let l = ((m + mt) / 2) as i64;
    let half_one_plus_z = RatLaurent::from_terms([(0, rat(1, 2)), (1, rat(1, 2))]);
    let y = RatLaurent::from_terms([(-1, rat(-1, 4)), (0, rat(1, 2)), (1, rat(-1, 4))]);
    let mut p = RatLaurent::zero();
    let mut y_pow = RatLaurent::one();
    for n in 0..l {
        let c = Rational::from_integer(binomial(l - 1 + n, n));
        p = p.add(&y_pow.scale(&c));
        y_pow = y_pow.mul(&y);
    }
    half_one_plus_z.pow(mt).mul(&p)
}

pub fn cdf_masks(m: u32, mt: u32) -> Result<CdfPair> {
    validate(m, mt)?;
    let a = primal_mask(m);
    let a_sym = scalar_symbol(&a);
    let base = unshifted_dual_symbol(m, mt);
    let window = (m + mt) as i64;
    let hits: Vec<i64> = (-window..=window)
        .filter(|&k| scalar_pr_residual(&a_sym, &base.shift(k)).is_zero())
        .collect();
    let kappa = match hits.as_slice() {
        [k] => *k,
        [] => {
            return Err(Error::Construction(format!(
                "no shift of the dual symbol satisfies reconstruction for ({m}, {mt})"
            )))
        }
        _ => {
            return Err(Error::Construction(format!(
                "ambiguous dual shift for ({m}, {mt}): {hits:?}"
            )))
        }
    };
    let a_dual = scalar_mask(&base.shift(kappa));
    let alternate = |s: &RatMask| -> RatMask {
        let (lo, hi) = s.support().expect("nonempty mask");
        MaskSequence::scalar((1 - hi..=1 - lo).map(|k| {
            let sign = if k.rem_euclid(2) == 0 {
                int(1)
            } else {
                int(-1)
            };
            (k, sign * s.scalar_at(1 - k))
        }))
    };
    let b = alternate(&a_dual);
    let b_dual = alternate(&a);
    Ok(CdfPair {
        m,
        mt,
        kappa,
        a,
        a_dual,
        b,
        b_dual,
    })
}

impl CdfPair {
    pub fn a_symbol(&self) -> RatLaurent {
        scalar_symbol(&self.a)
    }

    pub fn a_dual_symbol(&self) -> RatLaurent {
        scalar_symbol(&self.a_dual)
    }

    pub fn b_symbol(&self) -> RatLaurent {
        scalar_symbol(&self.b)
    }

    pub fn b_dual_symbol(&self) -> RatLaurent {
        scalar_symbol(&self.b_dual)
    }

    pub fn pr_holds(&self) -> bool {
        scalar_pr_residual(&self.a_symbol(), &self.a_dual_symbol()).is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct QuarkletFamily {
    pub m: u32,
    pub mt: u32,
    pub p: u32,
    pub quarklets: Vec<PiecewisePoly>,
}

/// `ψ_q = Σ_k b_k φ_q(2· - k)` for `q = 0..=p`.
pub fn quarklets(m: u32, mt: u32, p: u32) -> Result<QuarkletFamily> {
    let pair = cdf_masks(m, mt)?;
    let quarklets = (0..=p)
        .map(|q| {
            let phi = quark(m, q)?;
            Ok(pair.b.iter().fold(PiecewisePoly::zero(), |acc, (k, bk)| {
                acc.add(&phi.dilate_shift(1, k).scale(bk.get(0, 0)))
            }))
        })
        .collect::<Result<_>>()?;
    Ok(QuarkletFamily {
        m,
        mt,
        p,
        quarklets,
    })
}

/// `∫ x^n f(x) dx` for `n = 0..count`.
pub fn moments(f: &PiecewisePoly, count: usize) -> Vec<Rational> {
    (0..count)
        .map(|n| f.mul_poly(&Poly::monomial(int(1), n)).integral())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;

    fn values(mask: &RatMask) -> Vec<(i64, Rational)> {
        mask.iter().map(|(k, m)| (k, m.get(0, 0).clone())).collect()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(cdf_masks(2, 3).is_err());
        assert!(cdf_masks(3, 1).is_err());
        assert!(cdf_masks(0, 2).is_err());
    }

    #[test]
    fn haar_pair() {
        let c = cdf_masks(1, 1).unwrap();
        assert_eq!(values(&c.a), vec![(0, int(1)), (1, int(1))]);
        assert_eq!(values(&c.a_dual), vec![(0, int(1)), (1, int(1))]);
        assert_eq!(values(&c.b), vec![(0, int(1)), (1, int(-1))]);
        assert_eq!(
            c.b_symbol(),
            RatLaurent::from_terms([(0, rat(1, 2)), (1, rat(-1, 2))])
        );
    }

    #[test]
    fn hat_dual_mask() {
        let c = cdf_masks(2, 2).unwrap();
        assert_eq!(
            values(&c.a_dual),
            vec![
                (-2, rat(-1, 4)),
                (-1, rat(1, 2)),
                (0, rat(3, 2)),
                (1, rat(1, 2)),
                (2, rat(-1, 4))
            ]
        );
        assert_eq!(c.a_dual.sum(), RatMatrix::scalar(int(2)));
    }

    #[test]
    fn kappa_closed_form() {
        for (m, mt) in [(1, 1), (1, 3), (2, 2), (2, 4), (3, 3), (3, 5), (4, 6)] {
            let c = cdf_masks(m, mt).unwrap();
            assert!(c.pr_holds());
            let expect = (m as i64 - mt as i64) / 2 - (m / 2) as i64;
            assert_eq!(c.kappa, expect, "({m}, {mt})");
        }
    }

    #[test]
    fn haar_quarklets() {
        let f = quarklets(1, 1, 1).unwrap();
        let haar = PiecewisePoly::indicator(int(0), rat(1, 2))
            .sub(&PiecewisePoly::indicator(rat(1, 2), int(1)));
        assert_eq!(f.quarklets[0], haar);
        let star = f.quarklets[1].sub(&f.quarklets[0].scale(&rat(1, 2)));
        let expect = PiecewisePoly::new(
            vec![int(0), rat(1, 2), int(1)],
            vec![
                Poly::new(vec![rat(-1, 2), int(2)]),
                Poly::new(vec![rat(3, 2), int(-2)]),
            ],
        )
        .unwrap();
        assert_eq!(star, expect);
    }
}
