use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use quarklet::matrix::RatMatrix;
use quarklet::rational::{rat, to_f64};
use quarklet::splines::{quark, quark_ft, QuarkFamily};
use quarklet::stability::{
    autocorrelation, characteristic_polynomial, condition_e, condition_e_f64, gram_matrix,
    is_hermitian, is_stable_single, stability_table, Certificate,
};

/// `Σ_k |𝓕φ_q(ξ + 2πk)|²`, truncated.
fn periodized(m: u32, q: u32, xi: f64, terms: i64) -> f64 {
    (-terms..=terms)
        .map(|k| quark_ft(m, q, xi + 2.0 * PI * k as f64).unwrap().norm_sqr())
        .sum()
}

#[test]
fn autocorrelation_matches_periodized_transform() {
    for (m, q) in [(2, 0), (2, 1), (3, 2), (4, 1)] {
        let theta = autocorrelation(m, q).unwrap();
        assert!(theta.is_real_valued());
        for xi in [0.0, 0.4, 1.7, 3.0] {
            let exact = theta.eval(xi);
            let series = periodized(m, q, xi, 400);
            assert!(exact.im.abs() < 1e-12);
            assert!(
                (exact.re - series).abs() < 1e-4,
                "m={m} q={q} xi={xi}: {exact} vs {series}"
            );
        }
    }
}

#[test]
fn unstable_quark_vanishes_at_the_reported_point() {
    let r = is_stable_single(2, 1).unwrap();
    assert!(!r.stable);
    let Certificate::UnitCircleZero { xi } = r.certificate else {
        panic!("expected a zero certificate");
    };
    assert!(periodized(2, 1, xi, 400) < 1e-6);
}

#[test]
fn stable_quark_minimum_is_positive() {
    let r = is_stable_single(3, 2).unwrap();
    assert!(r.stable);
    let Certificate::PositiveMinimum { xi, value } = r.certificate else {
        panic!("expected a positive certificate");
    };
    assert!(value > 0.0);
    let theta = autocorrelation(3, 2).unwrap();
    assert!((theta.eval(xi).re - value).abs() < 1e-9);
    for i in 0..200 {
        let x = -PI + 2.0 * PI * i as f64 / 200.0;
        assert!(theta.eval(x).re >= value - 1e-9);
    }
}

#[test]
fn gram_matrix_is_hermitian_with_inner_products_on_the_diagonal() {
    let fam = QuarkFamily::new(3, 2).unwrap();
    let g = gram_matrix(&fam.quarks);
    assert!(is_hermitian(&g));
    for (q, f) in fam.quarks.iter().enumerate() {
        let c0 = g[q][q].coeff(0);
        assert_eq!(c0.re, f.inner(f));
    }
    let phi = quark(3, 1).unwrap();
    assert_eq!(
        g[1][1].coeff(1).re,
        phi.inner(&phi.shift(&quarklet::rational::int(1)))
    );
}

#[test]
fn table_renders_deterministically() {
    let t = stability_table(2, 1).unwrap();
    assert_eq!(
        t.to_markdown(),
        "| m \\ p | 0 | 1 |\n|---|---|---|\n| 1 | stable | stable |\n| 2 | stable | unstable |\n"
    );
    let csv = t.to_csv();
    assert!(csv.starts_with("m,p,stable,certificate,xi\n"));
    assert!(csv.contains("2,1,false,unit-circle-zero,"));
    assert_eq!(csv, stability_table(2, 1).unwrap().to_csv());
}

fn mat(rows: &[&[(i64, i64)]]) -> RatMatrix {
    RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect())
            .collect(),
    )
    .unwrap()
}

#[test]
fn characteristic_polynomial_matches_numeric_eigenvalues() {
    let m = mat(&[
        &[(1, 2), (3, 1), (-1, 4)],
        &[(2, 3), (1, 1), (5, 1)],
        &[(0, 1), (-7, 3), (2, 1)],
    ]);
    let chi = characteristic_polynomial(&m);
    let dm = DMatrix::from_fn(3, 3, |i, j| to_f64(m.get(i, j)));
    for ev in dm.complex_eigenvalues().iter() {
        let v: Complex64 = chi
            .coeffs()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * ev + to_f64(c));
        assert!(v.norm() < 1e-9, "{ev}: {v}");
    }
}

#[test]
fn exact_and_float_condition_e_agree() {
    let cases = [
        (mat(&[&[(1, 1), (3, 1)], &[(0, 1), (1, 2)]]), true),
        (mat(&[&[(1, 1), (3, 1)], &[(0, 1), (2, 1)]]), false),
        (mat(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]), false),
        (
            mat(&[
                &[(1, 1), (1, 5), (0, 1)],
                &[(0, 1), (-1, 3), (1, 1)],
                &[(0, 1), (0, 1), (1, 4)],
            ]),
            true,
        ),
        (mat(&[&[(1, 1), (1, 5)], &[(0, 1), (-1, 1)]]), false),
    ];
    for (m, want) in cases {
        assert_eq!(condition_e(&m), want, "{m:?}");
        let dm = DMatrix::from_fn(m.rows(), m.cols(), |i, j| to_f64(m.get(i, j)));
        assert_eq!(condition_e_f64(&dm, 1e-10), want, "{m:?}");
    }
}
