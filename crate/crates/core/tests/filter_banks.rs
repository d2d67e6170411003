use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use quarklet::cdf::{cdf_masks, moments, quarklets};
use quarklet::matrix::{RatMask, RatMatrix};
use quarklet::modulation::ModulationBundle;
use quarklet::rational::{int, pow2, rat, to_f64, Rational};

const PAIRS: [(u32, u32); 5] = [(1, 1), (2, 2), (3, 3), (2, 4), (3, 5)];

/// `½ Σ_k P_k Q_{k-2l}ᵀ`, straight from the masks.
fn mask_correlation(p: &RatMask, q: &RatMask, l: i64) -> RatMatrix {
    let mut acc = RatMatrix::zeros(p.rows(), q.rows());
    for (k, pk) in p.iter() {
        if let Some(qk) = q.get(k - 2 * l) {
            acc = acc.add(&pk.mul(&qk.transpose()).unwrap()).unwrap();
        }
    }
    acc.scale(&rat(1, 2))
}

#[test]
fn biorthogonality_in_the_mask_domain() {
    for (m, mt) in PAIRS {
        for p in 0..=3 {
            let b = ModulationBundle::new(m, mt, p).unwrap();
            let a = &b.refinement.matrices;
            let n = b.dim();
            for l in -8..=8 {
                let delta = if l == 0 {
                    RatMatrix::identity(n)
                } else {
                    RatMatrix::zeros(n, n)
                };
                assert_eq!(
                    mask_correlation(a, &b.a_dual, l),
                    delta,
                    "({m},{mt},{p}) A/A~ l={l}"
                );
                assert_eq!(
                    mask_correlation(&b.b_masks, &b.b_dual, l),
                    delta,
                    "B/B~ l={l}"
                );
                assert!(mask_correlation(a, &b.b_dual, l).is_zero(), "A/B~ l={l}");
                assert!(
                    mask_correlation(&b.b_masks, &b.a_dual, l).is_zero(),
                    "B/A~ l={l}"
                );
            }
        }
    }
}

fn to_dmatrix(m: &RatMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| to_f64(m.get(i, j)))
}

#[test]
fn inverse_agrees_with_a_numerical_inverse() {
    for (m, mt, p) in [(2, 2, 2), (3, 3, 1), (2, 4, 3)] {
        let b = ModulationBundle::new(m, mt, p).unwrap();
        for theta in [0.3, 1.1, 2.9, -2.0] {
            let z = Complex64::from_polar(1.0, theta);
            let x = b.x.eval_c64(z);
            let numeric = x.clone().try_inverse().unwrap();
            let exact = b.x_inv.eval_c64(z);
            assert!((numeric - exact).norm() < 1e-9, "({m},{mt},{p}) at {theta}");
        }
    }
}

#[test]
fn modulation_matrix_inverse_both_ways() {
    for (m, mt) in PAIRS {
        for p in 0..=4 {
            let b = ModulationBundle::new(m, mt, p).unwrap();
            assert!(b.x.mul(&b.x_inv).unwrap().is_identity());
            assert!(b.x_inv.mul(&b.x).unwrap().is_identity());
        }
    }
}

#[test]
fn t_is_odd_lower_triangular_and_invertible() {
    for (m, mt) in PAIRS {
        for p in 0..=4 {
            let b = ModulationBundle::new(m, mt, p).unwrap();
            assert_eq!(b.t.substitute_neg(), b.t.neg());
            assert!(b.t.is_lower_triangular());
            assert!(b.t.mul(&b.t_inv).unwrap().is_identity());
            for q in 0..b.dim() {
                let (_, k) = b.t.get(q, q).as_monomial().expect("monomial diagonal");
                assert_eq!(k.rem_euclid(2), 1);
            }
        }
    }
}

#[test]
fn dual_symbol_at_one_is_upper_triangular_with_powers_of_two() {
    for (m, mt) in PAIRS {
        for p in 0..=4 {
            let b = ModulationBundle::new(m, mt, p).unwrap();
            let a1 = b.a_dual_at_one();
            assert!(a1.is_upper_triangular());
            for q in 0..b.dim() {
                assert_eq!(a1.get(q, q), &pow2(q as i64));
            }
            let eig = to_dmatrix(&a1).complex_eigenvalues();
            assert!(eig.iter().all(|e| e.im.abs() < 1e-9));
        }
    }
}

#[test]
fn polyphase_factorization() {
    for (m, mt, p) in [(1, 1, 0), (2, 2, 1), (3, 3, 2), (3, 5, 1)] {
        let pp = ModulationBundle::new(m, mt, p)
            .unwrap()
            .polyphase()
            .unwrap();
        assert!(pp.factorization_holds);
        assert!(pp.invertible);
    }
}

#[test]
fn cdf_22_dual_mask() {
    let c = cdf_masks(2, 2).unwrap();
    let want = [
        (-2, rat(-1, 4)),
        (-1, rat(1, 2)),
        (0, rat(3, 2)),
        (1, rat(1, 2)),
        (2, rat(-1, 4)),
    ];
    let got: Vec<(i64, Rational)> = c
        .a_dual
        .iter()
        .map(|(k, v)| (k, v.get(0, 0).clone()))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn cdf_shift_and_alternation() {
    for (m, mt) in PAIRS {
        let c = cdf_masks(m, mt).unwrap();
        let expected = (m as i64 - mt as i64) / 2 - (m / 2) as i64;
        assert_eq!(c.kappa, expected, "({m},{mt})");
        for k in -10..=10 {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(c.b.scalar_at(k), sign.clone() * c.a_dual.scalar_at(1 - k));
            assert_eq!(c.b_dual.scalar_at(k), sign * c.a.scalar_at(1 - k));
        }
        assert_eq!(c.a.sum().get(0, 0), &int(2));
        assert_eq!(c.a_dual.sum().get(0, 0), &int(2));
    }
}

#[test]
fn quarklets_have_dual_vanishing_moments() {
    for (m, mt) in PAIRS {
        for p in 0..=2 {
            let fam = quarklets(m, mt, p).unwrap();
            for psi in &fam.quarklets {
                let mom = moments(psi, mt as usize);
                assert!(mom.iter().all(Zero::is_zero), "({m},{mt},{p})");
            }
        }
    }
}

#[test]
fn invalid_pairs_are_rejected() {
    assert!(cdf_masks(2, 1).is_err());
    assert!(cdf_masks(0, 2).is_err());
    assert!(ModulationBundle::new(3, 2, 1).is_err());
}
