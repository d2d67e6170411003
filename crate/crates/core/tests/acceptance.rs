//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quarklet::cdf::{cdf_masks, moments, quarklets};
use quarklet::duals::{convergence_probe, dual_quark_ft, linspace, TailModel};
use quarklet::laurent::{RatLaurent, RatLaurentMatrix};
use quarklet::matrix::RatMatrix;
use quarklet::modulation::{verify_perfect_reconstruction, ModulationBundle};
use quarklet::mra::{orthogonalize_haar, CoefficientFrame, Transform};
use quarklet::rational::{int, pow2, rat, Rational};
use quarklet::splines::QuarkFamily;
use quarklet::stability::{
    condition_e, dual_symbol_eigenvalues, ft_zero_scan, is_stable_vector, stability_table,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const PAIRS: [(u32, u32); 5] = [(1, 1), (2, 2), (3, 3), (2, 4), (3, 5)];
const DECOMP_SETS: [(u32, u32, u32); 4] = [(1, 1, 0), (1, 1, 2), (2, 2, 1), (3, 3, 1)];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lp(terms: &[(i64, Rational)]) -> RatLaurent {
    RatLaurent::from_terms(terms.iter().cloned())
}

fn lmat(rows: Vec<Vec<RatLaurent>>) -> RatLaurentMatrix {
    RatLaurentMatrix::from_rows(rows).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (m, mt) in PAIRS {
        for p in 0..=5 {
            let b = ModulationBundle::new(m, mt, p).map_err(|e| e.to_string())?;
            let r = verify_perfect_reconstruction(&b).map_err(|e| e.to_string())?;
            ensure(r.holds(), || {
                format!("residual for ({m},{mt},{p}): {:?}", r.residual)
            })?;
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("{checked} systems, zero residual, {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let b = ModulationBundle::new(1, 1, 1).map_err(|e| e.to_string())?;
    let h = |n| rat(n, 2);
    let q = |n| rat(n, 4);
    let zero = RatLaurent::zero;
    let x = lmat(vec![
        vec![
            lp(&[(0, h(1)), (1, h(1))]),
            zero(),
            lp(&[(0, h(1)), (1, h(-1))]),
            zero(),
        ],
        vec![
            lp(&[(1, q(1))]),
            lp(&[(0, q(1)), (1, q(1))]),
            lp(&[(1, q(-1))]),
            lp(&[(0, q(1)), (1, q(-1))]),
        ],
        vec![
            lp(&[(0, h(1)), (1, h(-1))]),
            zero(),
            lp(&[(0, h(1)), (1, h(1))]),
            zero(),
        ],
        vec![
            zero(),
            lp(&[(0, h(1)), (1, h(-1))]),
            zero(),
            lp(&[(0, h(1)), (1, h(1))]),
        ],
    ]);
    ensure(b.x == x, || format!("X(z) differs: {:?}", b.x))?;

    let x_inv = lmat(vec![
        vec![
            lp(&[(-1, int(1)), (0, int(1))]),
            zero(),
            lp(&[(-1, int(-1)), (0, int(1))]),
            zero(),
        ],
        vec![
            lp(&[(-1, h(-1)), (0, h(-1))]),
            lp(&[(-1, int(2)), (0, int(2))]),
            lp(&[(-1, h(1)), (0, h(1))]),
            lp(&[(-1, int(-1)), (0, int(1))]),
        ],
        vec![
            lp(&[(-1, int(-1)), (0, int(1))]),
            zero(),
            lp(&[(-1, int(1)), (0, int(1))]),
            zero(),
        ],
        vec![
            lp(&[(-1, h(1)), (0, h(-1))]),
            lp(&[(-1, int(-2)), (0, int(2))]),
            lp(&[(-1, h(-1)), (0, h(1))]),
            lp(&[(-1, int(1)), (0, int(1))]),
        ],
    ])
    .scale(&h(1));
    ensure(b.x_inv == x_inv, || {
        format!("X(z)^-1 differs: {:?}", b.x_inv)
    })?;

    let a_dual_sym = lmat(vec![
        vec![lp(&[(0, h(1)), (1, h(1))]), lp(&[(0, q(-1)), (1, q(-1))])],
        vec![zero(), lp(&[(0, int(1)), (1, int(1))])],
    ]);
    let b_dual_sym = lmat(vec![
        vec![lp(&[(0, h(1)), (1, h(-1))]), lp(&[(0, q(1)), (1, q(1))])],
        vec![zero(), lp(&[(0, h(1)), (1, h(-1))])],
    ]);
    ensure(b.a_dual_sym == a_dual_sym, || {
        format!("dual symbol A~ differs: {:?}", b.a_dual_sym)
    })?;
    ensure(b.b_dual_sym == b_dual_sym, || {
        format!("dual symbol B~ differs: {:?}", b.b_dual_sym)
    })?;

    let m = |rows: [[Rational; 2]; 2]| RatMatrix::from_rows(rows.map(Vec::from).to_vec()).unwrap();
    let a0 = m([[int(1), h(-1)], [int(0), int(2)]]);
    let b0 = m([[int(1), h(1)], [int(0), int(1)]]);
    let b1 = m([[int(-1), h(1)], [int(0), int(-1)]]);
    ensure(b.a_dual.support() == Some((0, 1)), || {
        "A~ support is not {0,1}".into()
    })?;
    ensure(b.b_dual.support() == Some((0, 1)), || {
        "B~ support is not {0,1}".into()
    })?;
    ensure(b.a_dual.at(0) == a0 && b.a_dual.at(1) == a0, || {
        format!("A~ = {:?}", b.a_dual)
    })?;
    ensure(b.b_dual.at(0) == b0 && b.b_dual.at(1) == b1, || {
        format!("B~ = {:?}", b.b_dual)
    })?;
    Ok("X, X^-1, A~_0, A~_1, B~_0, B~_1 equal entrywise".into())
}

fn criterion_3() -> Outcome {
    let expected = [
        [true, true, true, true],
        [true, false, true, true],
        [true, true, true, true],
        [true, false, true, false],
    ];
    let t = stability_table(4, 3).map_err(|e| e.to_string())?;
    for m in 1..=4u32 {
        for q in 0..=3u32 {
            let got = t.get(m, q).stable;
            let want = expected[m as usize - 1][q as usize];
            ensure(got == want, || {
                format!("cell (m={m}, p={q}): got {got}, want {want}")
            })?;
        }
    }
    Ok("16/16 cells match".into())
}

fn criterion_4() -> Outcome {
    for p in 0..=4 {
        let r = is_stable_vector(1, p).map_err(|e| e.to_string())?;
        ensure(r.stable, || format!("(m=1, p={p}) reported unstable"))?;
    }
    for (m, p) in [(2, 1), (2, 2), (3, 1), (4, 1)] {
        let r = is_stable_vector(m, p).map_err(|e| e.to_string())?;
        ensure(!r.stable, || format!("(m={m}, p={p}) reported stable"))?;
    }
    Ok("m=1 stable for p<=4; (2,1),(2,2),(3,1),(4,1) unstable".into())
}

fn criterion_5() -> Outcome {
    for (m, mt) in PAIRS {
        for p in 0..=5u32 {
            let b = ModulationBundle::new(m, mt, p).map_err(|e| e.to_string())?;
            let eig = dual_symbol_eigenvalues(&b).map_err(|e| e.to_string())?;
            let want: Vec<Rational> = (0..=p as i64).map(pow2).collect();
            ensure(eig == want, || {
                format!("({m},{mt},{p}) eigenvalues {eig:?}")
            })?;
            let e = condition_e(&b.a_dual_at_one());
            ensure(e == (p == 0), || {
                format!("({m},{mt},{p}) condition E = {e}")
            })?;
        }
    }
    Ok("eigenvalues {2^q}; condition E exactly for p = 0".into())
}

fn criterion_6() -> Outcome {
    let o = orthogonalize_haar(1, 1, 3).map_err(|e| e.to_string())?;
    let want2 = [rat(1, 6), int(-1), int(1), int(0)];
    let want3 = [rat(-1, 20), rat(3, 5), rat(-3, 2), int(1)];
    ensure(o.l.row(2) == want2, || {
        format!("psi*_2 coefficients {:?}", o.l.row(2))
    })?;
    ensure(o.l.row(3) == want3, || {
        format!("psi*_3 coefficients {:?}", o.l.row(3))
    })?;
    for q in 0..4 {
        for r in 0..4 {
            let ip = o.stars[q].inner(&o.stars[r]);
            let want = if q == r {
                o.gram[q].clone()
            } else {
                Rational::zero()
            };
            ensure(ip == want, || format!("<psi*_{q}, psi*_{r}> = {ip}"))?;
        }
        ensure(o.gram[q] > Rational::zero(), || {
            format!("norm of psi*_{q} is not positive")
        })?;
    }
    Ok("Gram-Schmidt coefficients and orthogonality exact".into())
}

fn criterion_7() -> Outcome {
    for (m, mt, p) in DECOMP_SETS {
        let b = ModulationBundle::new(m, mt, p).map_err(|e| e.to_string())?;
        let f = b.decomposition_filters().map_err(|e| e.to_string())?;
        let phi = QuarkFamily::new(m, p).map_err(|e| e.to_string())?.quarks;
        let psi = quarklets(m, mt, p).map_err(|e| e.to_string())?.quarklets;
        ensure(f.identity_holds(&phi, &psi), || {
            format!("identity fails for ({m},{mt},{p})")
        })?;
    }
    let mut report = Vec::new();
    for (m, mt) in [(1, 1), (2, 2), (3, 3)] {
        let lens: Vec<usize> = (0..=6)
            .map(|p| {
                ModulationBundle::new(m, mt, p)
                    .and_then(|b| b.decomposition_filters())
                    .map(|f| f.support_len())
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        // At most linear: no increment exceeds the largest early increment
        // and the total stays below an affine bound.
        let slope = lens
            .windows(2)
            .take(2)
            .map(|w| w[1].saturating_sub(w[0]))
            .max()
            .unwrap_or(0)
            .max(1);
        for (p, l) in lens.iter().enumerate() {
            ensure(*l <= lens[0] + slope * p, || {
                format!("({m},{mt}) lengths {lens:?} not linear")
            })?;
        }
        report.push(format!("({m},{mt}): {lens:?}"));
    }
    Ok(format!(
        "identity exact; support lengths {}",
        report.join(" ")
    ))
}

fn random_frame(rng: &mut ChaCha8Rng, level: i64, dim: usize) -> CoefficientFrame {
    let mut f = CoefficientFrame::new(level, dim);
    for _ in 0..rng.gen_range(1..=6) {
        let k = rng.gen_range(-10..=10);
        let v = (0..dim)
            .map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=12)))
            .collect();
        f.insert(k, v).unwrap();
    }
    f
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut count = 0;
    for (m, mt, p) in DECOMP_SETS {
        let b = ModulationBundle::new(m, mt, p).map_err(|e| e.to_string())?;
        let t = Transform::new(&b).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let c = random_frame(&mut rng, 1, p as usize + 1);
            let (s, d) = t.decompose(&c).map_err(|e| e.to_string())?;
            let back = t.reconstruct(&s, &d).map_err(|e| e.to_string())?;
            ensure(back == c, || {
                format!("round trip fails for ({m},{mt},{p}) on {c:?}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} random frames round-trip exactly"))
}

fn criterion_9() -> Outcome {
    let close = |zeros: &[f64], targets: &[f64]| {
        zeros.len() == targets.len()
            && targets
                .iter()
                .all(|t| zeros.iter().any(|z| (z - t).abs() < 1e-3))
    };
    let z22 = ft_zero_scan(2, 2, -12.0, 12.0, 4801).map_err(|e| e.to_string())?;
    let t22 = [-10.562, -7.414, -2.606, 2.606, 7.414, 10.562];
    ensure(close(&z22, &t22), || format!("(2,2) zeros {z22:?}"))?;
    let z23 = ft_zero_scan(2, 3, -2.0 * PI, 2.0 * PI, 2513).map_err(|e| e.to_string())?;
    let z23: Vec<f64> = z23
        .into_iter()
        .filter(|z| z.abs() < 2.0 * PI - 1e-3)
        .collect();
    let t23 = [-4.639, 0.0, 4.639];
    ensure(close(&z23, &t23), || format!("(2,3) zeros {z23:?}"))?;
    let z11 = ft_zero_scan(1, 1, -10.0, 10.0, 4001).map_err(|e| e.to_string())?;
    ensure(z11.is_empty(), || format!("(1,1) zeros {z11:?}"))?;
    let z12 = ft_zero_scan(1, 2, -7.0, 7.0, 2801).map_err(|e| e.to_string())?;
    ensure(z12.is_empty(), || format!("(1,2) zeros {z12:?}"))?;
    Ok(format!(
        "(2,2): {z22:.4?}; (2,3): {z23:.4?}; none for (1,1), (1,2)"
    ))
}

fn haar_ft(xi: f64) -> Complex64 {
    if xi == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, -xi / 2.0) * ((xi / 2.0).sin() / (xi / 2.0))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let b = ModulationBundle::new(1, 1, 0).map_err(|e| e.to_string())?;
    let grid = linspace(-8.0 * PI, 8.0 * PI, 513);
    let approx = dual_quark_ft(&b, 25, &grid, TailModel::FirstOrder).map_err(|e| e.to_string())?;
    let err = grid
        .iter()
        .zip(&approx.values)
        .map(|(xi, v)| (v[0] - haar_ft(*xi)).norm())
        .fold(0.0, f64::max);
    ensure(err < 1e-8, || format!("sup error at J=25: {err:.3e}"))?;
    let levels: Vec<u32> = (20..=25).collect();
    let steps =
        convergence_probe(&b, &grid, &levels, TailModel::FirstOrder).map_err(|e| e.to_string())?;
    let worst = steps.iter().map(|s| s.delta).fold(0.0, f64::max);
    ensure(worst < 1e-8, || format!("consecutive deltas {steps:?}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "sup error {err:.2e}, max delta J>=20 {worst:.2e}, {secs:.2} s"
    ))
}

fn criterion_11() -> Outcome {
    for (m, mt) in PAIRS {
        let c = cdf_masks(m, mt).map_err(|e| e.to_string())?;
        ensure(c.pr_holds(), || format!("scalar PR fails for ({m},{mt})"))?;
        ensure(c.a_dual_symbol().eval(&int(1)) == int(1), || {
            format!("a~(1) != 1 for ({m},{mt})")
        })?;
        let psi0 = quarklets(m, mt, 0)
            .map_err(|e| e.to_string())?
            .quarklets
            .remove(0);
        let mom = moments(&psi0, mt as usize + 1);
        ensure(mom[..mt as usize].iter().all(Zero::is_zero), || {
            format!("moments {mom:?}")
        })?;
        ensure(!mom[mt as usize].is_zero(), || {
            format!("({m},{mt}) has more than {mt} vanishing moments")
        })?;
    }
    Ok("scalar PR, a~(1) = 1, exactly m~ vanishing moments".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact perfect reconstruction", criterion_1),
        ("example matrices m = m~ = 1, p = 1", criterion_2),
        ("single-quark stability table", criterion_3),
        ("quark-vector stability", criterion_4),
        ("dual symbol eigen-structure", criterion_5),
        ("orthogonalized Haar quarklets", criterion_6),
        ("decomposition identity and filter growth", criterion_7),
        ("transform round trip", criterion_8),
        ("Fourier zeros of quarks", criterion_9),
        ("dual product convergence (Haar)", criterion_10),
        ("scalar CDF sanity", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
