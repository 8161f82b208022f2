//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use hybridom::SystemParams;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// `n·|D(n)|² − E_l²` written out from scratch, without the library's
/// helpers.
pub fn mismatch(p: &SystemParams, e_l: f64, n: f64) -> f64 {
    let atom = p.g_ac * p.g_ac * p.sigma_z_ss / Complex64::new(p.gamma_a, p.delta_a);
    let d = Complex64::new(p.kappa, p.delta_c - p.g0 * p.g0 * n / p.omega_m) - atom;
    n * d.norm_sqr() - e_l * e_l
}

/// Lowest photon-number root by a sign-change scan over `points` samples
/// of `[0, n_max]` followed by bisection to `1e-12` relative.
///
/// `n_max` is `(E_l/κ_eff)²` with `κ_eff` the net field damping including
/// the atom's contribution, which bounds the lowest root whenever
/// `κ_eff > 0` (`|D| ≥ κ_eff` everywhere).
pub fn bracketed_lowest_root(p: &SystemParams, e_l: f64, points: usize) -> Option<f64> {
    let atom_re = p.g_ac * p.g_ac * p.sigma_z_ss * p.gamma_a
        / (p.gamma_a * p.gamma_a + p.delta_a * p.delta_a);
    let kappa_eff = p.kappa - atom_re;
    if kappa_eff <= 0.0 {
        return None;
    }
    let n_max = (e_l / kappa_eff).powi(2).max((e_l / p.kappa).powi(2));
    let f = |n: f64| mismatch(p, e_l, n);
    let h = n_max / (points - 1) as f64;
    let mut lo = 0.0;
    let mut f_lo = f(lo);
    for k in 1..points {
        let hi = k as f64 * h;
        let f_hi = f(hi);
        if f_hi == 0.0 {
            return Some(hi);
        }
        if f_lo.signum() != f_hi.signum() {
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-12 * b.abs().max(f64::MIN_POSITIVE) {
                let m = 0.5 * (a + b);
                if f(m).signum() == f_lo.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some(0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
    }
    None
}

/// Random parameter draw around the experimental scale with positive net
/// field damping.
pub fn random_params(rng: &mut ChaCha8Rng) -> (SystemParams, f64) {
    let mhz = |x: f64| TAU * 1e6 * x;
    loop {
        let omega_m = mhz(rng.gen_range(1.0..20.0));
        let p = SystemParams {
            omega_m,
            gamma_m: TAU * rng.gen_range(10.0..1e4),
            kappa: omega_m * rng.gen_range(0.01..0.5),
            delta_c: omega_m * rng.gen_range(-2.0..2.0),
            g0: mhz(rng.gen_range(0.0..2.0)),
            g_ac: mhz(rng.gen_range(0.0..8.0)),
            gamma_a: mhz(rng.gen_range(0.05..1.0)),
            delta_a: omega_m * rng.gen_range(-2.0..2.0),
            sigma_z_ss: rng.gen_range(-1.0..1.0),
            ..SystemParams::reference_point()
        };
        let e_l = mhz(rng.gen_range(0.1..10.0));
        let atom_re = p.g_ac * p.g_ac * p.sigma_z_ss * p.gamma_a
            / (p.gamma_a * p.gamma_a + p.delta_a * p.delta_a);
        if p.kappa - atom_re > 0.1 * p.kappa {
            return (p, e_l);
        }
    }
}

/// Group-delay errors of the library's differentiator on `sin(δ/ω)` for
/// `levels` successive grid halvings, measured at the fixed interior
/// point `δ = 1.3 ω`.
pub fn sine_delay_errors(levels: usize) -> Vec<f64> {
    let w = 6.0e7;
    let (a, b) = (0.5 * w, 1.5 * w);
    (0..levels)
        .map(|l| {
            let n = 40 * (1 << l) + 1;
            let grid: Vec<f64> = (0..n)
                .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
                .collect();
            let phi: Vec<f64> = grid.iter().map(|d| (d / w).sin()).collect();
            let tau = hybridom::dispersion::group_delay(&grid, &phi).unwrap();
            let k = (n - 1) * 8 / 10;
            (tau[k] - (grid[k] / w).cos() / w).abs()
        })
        .collect()
}
