//! Symbol matrices, the modulation matrix and its exact inverse, dual masks,
//! polyphase factorization and decomposition filters.

use crate::cdf::{cdf_masks, CdfPair};
use crate::conventions::{mask_factor, symbol_factor};
use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix, RatLaurent, RatLaurentMatrix};
use crate::matrix::{MaskSequence, RatMask, RatMatrix};
use crate::piecewise::PiecewisePoly;
use crate::rational::{int, rat};
use crate::splines::{apply_matrix, refinement_masks, RefinementMasks};

/// All symbol-level data of one `(m, m~, p)` system.
#[derive(Clone, Debug)]
pub struct ModulationBundle {
    pub m: u32,
    pub mt: u32,
    pub p: u32,
    pub cdf: CdfPair,
    pub refinement: RefinementMasks,
    /// Quarklet masks `B_k = b_k Id`.
    pub b_masks: RatMask,
    pub a_sym: RatLaurentMatrix,
    pub b_sym: RatLaurentMatrix,
    pub x: RatLaurentMatrix,
    pub t: RatLaurentMatrix,
    pub t_inv: RatLaurentMatrix,
    pub x_inv: RatLaurentMatrix,
    pub a_dual_sym: RatLaurentMatrix,
    pub b_dual_sym: RatLaurentMatrix,
    pub a_dual: RatMask,
    pub b_dual: RatMask,
}

impl ModulationBundle {
    pub fn new(m: u32, mt: u32, p: u32) -> Result<Self> {
        let cdf = cdf_masks(m, mt)?;
        let refinement = refinement_masks(m, p)?;
        let n = p as usize + 1;

        let mut b_masks = MaskSequence::new(n, n);
        for (k, bk) in cdf.b.iter() {
            b_masks.insert(k, RatMatrix::identity(n).scale(bk.get(0, 0)));
        }

        let half = symbol_factor();
        let a_sym = LaurentMatrix::from_mask(&refinement.matrices, &half);
        let b = cdf.b_symbol();
        let b_neg = b.substitute_neg();
        let b_sym = LaurentMatrix::scalar_identity(&b, n);
        let a_neg = a_sym.substitute_neg();
        let x = LaurentMatrix::from_blocks(&a_sym, &a_neg, &b_sym, &b_sym.substitute_neg())?;

        let t = a_sym.mul_poly(&b_neg).sub(&a_neg.mul_poly(&b))?;
        if t.substitute_neg() != t.neg() {
            return Err(Error::Construction("T(-z) != -T(z)".into()));
        }
        let t_inv = t.invert_lower_triangular()?;

        let x_inv = LaurentMatrix::from_blocks(
            &t_inv.mul_poly(&b_neg),
            &t_inv.mul(&a_neg)?.neg(),
            &t_inv.mul_poly(&b).neg(),
            &t_inv.mul(&a_sym)?,
        )?;

        // conj(𝒜̃(z))ᵀ = b(-z) T⁻¹,  conj(ℬ̃(z))ᵀ = -T⁻¹ 𝒜(-z)
        let a_dual_sym = t_inv.mul_poly(&b_neg).adjoint_on_circle();
        let b_dual_sym = t_inv.mul(&a_neg)?.neg().adjoint_on_circle();
        let a_dual = a_dual_sym.to_mask(&mask_factor());
        let b_dual = b_dual_sym.to_mask(&mask_factor());

        Ok(Self {
            m,
            mt,
            p,
            cdf,
            refinement,
            b_masks,
            a_sym,
            b_sym,
            x,
            t,
            t_inv,
            x_inv,
            a_dual_sym,
            b_dual_sym,
            a_dual,
            b_dual,
        })
    }

    pub fn dim(&self) -> usize {
        self.p as usize + 1
    }

    /// `X~(z) = [[𝒜~(z), 𝒜~(-z)], [ℬ~(z), ℬ~(-z)]]`.
    pub fn dual_modulation(&self) -> RatLaurentMatrix {
        LaurentMatrix::from_blocks(
            &self.a_dual_sym,
            &self.a_dual_sym.substitute_neg(),
            &self.b_dual_sym,
            &self.b_dual_sym.substitute_neg(),
        )
        .expect("square blocks")
    }

    /// `𝒜~(1)`.
    pub fn a_dual_at_one(&self) -> RatMatrix {
        self.a_dual_sym.eval(&int(1))
    }

    /// Sub-symbols `(𝒜_ρ(z²), ℬ_ρ(z²))` with `𝒜_ρ(z²) = Σ_k A_{2k+ρ} z^{2k}`.
    pub fn sub_symbols(&self, rho: u32) -> (RatLaurentMatrix, RatLaurentMatrix) {
        let split = |mask: &RatMask| {
            let mut out = MaskSequence::new(mask.rows(), mask.cols());
            for (k, mk) in mask.iter() {
                if (k - rho as i64).rem_euclid(2) == 0 {
                    out.insert(k - rho as i64, mk.clone());
                }
            }
            LaurentMatrix::from_mask(&out, &int(1))
        };
        (split(&self.refinement.matrices), split(&self.b_masks))
    }

    pub fn polyphase(&self) -> Result<Polyphase> {
        let n = self.dim();
        let (a0, b0) = self.sub_symbols(0);
        let (a1, b1) = self.sub_symbols(1);
        let p = LaurentMatrix::from_blocks(&a0, &a1, &b0, &b1)?;
        let id = RatLaurentMatrix::identity(n);
        let zinv = RatLaurentMatrix::scalar_identity(&RatLaurent::z(-1), n);
        let e = LaurentMatrix::from_blocks(&id, &zinv, &id, &zinv.neg())?;
        let zid = RatLaurentMatrix::scalar_identity(&RatLaurent::z(1), n);
        let e_inv = LaurentMatrix::from_blocks(&id, &id, &zid, &zid.neg())?.scale(&rat(1, 2));
        let factorization_holds = self.x.mul(&e)? == p && e.mul(&e_inv)?.is_identity();
        let p_inv = e_inv.mul(&self.x_inv)?;
        let invertible = p.mul(&p_inv)?.is_identity() && p_inv.mul(&p)?.is_identity();
        Ok(Polyphase {
            p,
            e,
            e_inv,
            p_inv,
            factorization_holds,
            invertible,
        })
    }

    /// Filters with `Φ(2x-ρ) = Σ_k C_{ρ+2k} Φ(x-k) + Σ_k D_{ρ+2k} Ψ(x-k)`.
    ///
    /// The symbol row `[C_ρ(z²), D_ρ(z²)] = ½ [z^ρ Id, (-z)^ρ Id] X(z)⁻¹`
    /// must be even in `z`; `C_{ρ+2k}` is its `z^{2k}` coefficient.
    pub fn decomposition_filters(&self) -> Result<DecompositionFilters> {
        let n = self.dim();
        let mut c = MaskSequence::new(n, n);
        let mut d = MaskSequence::new(n, n);
        for rho in 0..2i64 {
            let zr = RatLaurent::z(rho);
            let sel = LaurentMatrix::from_blocks(
                &RatLaurentMatrix::scalar_identity(&zr, n),
                &RatLaurentMatrix::scalar_identity(&zr.substitute_neg(), n),
                &RatLaurentMatrix::zeros(0, n),
                &RatLaurentMatrix::zeros(0, n),
            )?
            .scale(&rat(1, 2));
            let row = sel.mul(&self.x_inv)?;
            let even = row.downsample().map_err(|e| {
                Error::Construction(format!("decomposition symbol for rho={rho}: {e}"))
            })?;
            let cs = even.block(0, 0, n, n).to_mask(&int(1));
            let ds = even.block(0, n, n, n).to_mask(&int(1));
            for (k, mk) in cs.iter() {
                c.insert(rho + 2 * k, mk.clone());
            }
            for (k, mk) in ds.iter() {
                d.insert(rho + 2 * k, mk.clone());
            }
        }
        Ok(DecompositionFilters { c, d })
    }
}

#[derive(Clone, Debug)]
pub struct Polyphase {
    pub p: RatLaurentMatrix,
    pub e: RatLaurentMatrix,
    pub e_inv: RatLaurentMatrix,
    pub p_inv: RatLaurentMatrix,
    /// `P = X ℰ` and `ℰ ℰ⁻¹ = Id`.
    pub factorization_holds: bool,
    /// `P P⁻¹ = P⁻¹ P = Id` with `P⁻¹ = ℰ⁻¹ X⁻¹`.
    pub invertible: bool,
}

#[derive(Clone, Debug)]
pub struct DecompositionFilters {
    pub c: RatMask,
    pub d: RatMask,
}

impl DecompositionFilters {
    /// Largest support hull over both parities of `C` and `D`.
    pub fn support_len(&self) -> usize {
        self.c.support_len().max(self.d.support_len())
    }

    /// Checks `Φ(2x-ρ) = Σ_k C_{ρ+2k} Φ(x-k) + Σ_k D_{ρ+2k} Ψ(x-k)`
    /// exactly for `ρ ∈ {0, 1}`.
    pub fn identity_holds(&self, phi: &[PiecewisePoly], psi: &[PiecewisePoly]) -> bool {
        (0..2i64).all(|rho| {
            let lhs: Vec<_> = phi.iter().map(|f| f.dilate_shift(1, rho)).collect();
            let mut rhs = vec![PiecewisePoly::zero(); phi.len()];
            for (mask, gens) in [(&self.c, phi), (&self.d, psi)] {
                for (idx, mk) in mask.iter() {
                    if (idx - rho).rem_euclid(2) != 0 {
                        continue;
                    }
                    let k = (idx - rho) / 2;
                    let shifted: Vec<_> = gens.iter().map(|g| g.shift(&int(k))).collect();
                    for (r, t) in rhs.iter_mut().zip(apply_matrix(mk, &shifted)) {
                        *r = r.add(&t);
                    }
                }
            }
            lhs == rhs
        })
    }
}

/// Nonzero entries of `X(z) conj(X~(z))ᵀ - Id`.
pub fn pr_residual(
    x: &RatLaurentMatrix,
    x_dual: &RatLaurentMatrix,
) -> Result<Vec<(usize, usize, RatLaurent)>> {
    let prod = x.mul(&x_dual.adjoint_on_circle())?;
    Ok(prod
        .sub(&RatLaurentMatrix::identity(prod.rows()))?
        .nonzero_entries())
}

#[derive(Clone, Debug)]
pub struct PrReport {
    pub m: u32,
    pub mt: u32,
    pub p: u32,
    pub residual: Vec<(usize, usize, RatLaurent)>,
}

impl PrReport {
    pub fn holds(&self) -> bool {
        self.residual.is_empty()
    }
}

pub fn verify_perfect_reconstruction(bundle: &ModulationBundle) -> Result<PrReport> {
    Ok(PrReport {
        m: bundle.m,
        mt: bundle.mt,
        p: bundle.p,
        residual: pr_residual(&bundle.x, &bundle.dual_modulation())?,
    })
}
