mod common;

use std::f64::consts::TAU;

use hybridom::cubic::cubic_roots;
use hybridom::steady::solve_steady_state;
use hybridom::SystemParams;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn reference_point_matches_bracketing_scan() {
    let p = SystemParams {
        kappa: TAU * 1e6,
        g_ac: 0.0,
        ..SystemParams::reference_point()
    };
    let e_l = TAU * 2e6;
    let s = solve_steady_state(&p, e_l).unwrap();
    let reference = common::bracketed_lowest_root(&p, e_l, 1_000_000).unwrap();
    assert!(
        (s.n_s - reference).abs() <= 1e-10 * reference,
        "{} vs {reference}",
        s.n_s
    );
}

#[test]
fn random_draws_match_bracketing_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let (p, e_l) = common::random_params(&mut rng);
        let s = solve_steady_state(&p, e_l).unwrap();
        let reference = common::bracketed_lowest_root(&p, e_l, 200_000).unwrap();
        assert!((s.n_s - reference).abs() <= 1e-10 * reference, "{p:?}");
        assert!(s.residual() < 1e-9 * e_l);
        assert!(common::mismatch(&p, e_l, s.n_s).abs() <= 1e-9 * e_l * e_l);
    }
}

fn real_roots_by_scan(c: [f64; 4], lo: f64, hi: f64) -> Vec<f64> {
    let f = |x: f64| ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
    let n = 200_000;
    let h = (hi - lo) / n as f64;
    let mut roots = Vec::new();
    for k in 0..n {
        let (mut a, mut b) = (lo + k as f64 * h, lo + (k + 1) as f64 * h);
        let fa = f(a);
        if fa.signum() == f(b).signum() {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(m).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cubic_real_roots_match_scan(
        r in prop::collection::vec(-10.0f64..10.0, 3),
        scale in 1e-3f64..1e6,
    ) {
        let mut r = r;
        r.sort_by(f64::total_cmp);
        prop_assume!(r[1] - r[0] > 1e-2 && r[2] - r[1] > 1e-2);
        let c = [
            scale,
            -scale * (r[0] + r[1] + r[2]),
            scale * (r[0] * r[1] + r[0] * r[2] + r[1] * r[2]),
            -scale * r[0] * r[1] * r[2],
        ];
        let mut got: Vec<f64> = cubic_roots(c).iter().map(|z| z.re).collect();
        got.sort_by(f64::total_cmp);
        let scanned = real_roots_by_scan(c, -11.0, 11.0);
        prop_assert_eq!(scanned.len(), 3);
        for (g, s) in got.iter().zip(&scanned) {
            prop_assert!((g - s).abs() <= 1e-8 * s.abs().max(1.0), "{} vs {}", g, s);
        }
    }

    #[test]
    fn cubic_single_real_root_matches_scan(
        real in -10.0f64..10.0,
        re in -5.0f64..5.0,
        im in 0.1f64..5.0,
    ) {
        // (x − real)(x² − 2·re·x + re² + im²)
        let q = re * re + im * im;
        let c = [1.0, -2.0 * re - real, q + 2.0 * re * real, -real * q];
        let roots = cubic_roots(c);
        let reals: Vec<f64> = roots.iter().filter(|z| z.im == 0.0).map(|z| z.re).collect();
        let scanned = real_roots_by_scan(c, -11.0, 11.0);
        prop_assert_eq!(scanned.len(), 1);
        prop_assert_eq!(reals.len(), 1);
        prop_assert!((reals[0] - scanned[0]).abs() <= 1e-8 * scanned[0].abs().max(1.0));
    }
}
