//! Self-consistent pump-tone operating point.
//!
//! With the pump alone the intracavity amplitude obeys
//! `c_s · D(n) = E_l`, where
//!
//! ```text
//! D(n) = κ + i(Δ_c − g0²·n/ω_m) − g_ac²⟨σ_z⟩/(γ_a + iΔ_a)
//! ```
//!
//! and `n = |c_s|²`. Taking the modulus squared gives the real cubic
//! `n·|D(n)|² = E_l²`, which may have up to three nonnegative roots
//! (optical bistability). The root continuously connected to zero drive
//! is the smallest one.

use num_complex::Complex64;

use crate::cubic::cubic_roots;
use crate::error::{Error, Result};
use crate::params::SystemParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Pump-tone operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    /// Parameters this operating point was solved for.
    pub params: SystemParams,
    /// Pump drive amplitude, s⁻¹.
    pub e_l: f64,
    pub c_s: Complex64,
    /// Mean intracavity photon number `|c_s|²`.
    pub n_s: f64,
    /// Effective detuning `Δ_c − g0²·n_s/ω_m`, rad/s.
    pub delta_tilde: f64,
    /// Static mirror displacement (dimensionless quadrature).
    pub q_s: f64,
    /// Static atomic coherence `⟨σ_−⟩`.
    pub sigma_s: Complex64,
    /// Number of admissible (real, nonnegative) photon-number roots.
    pub branch_count: usize,
    /// All admissible roots in ascending order.
    pub branches: Vec<f64>,
}

impl SteadyState {
    /// `|c_s·(κ + iΔ̃ − g_ac²⟨σ_z⟩/(γ_a + iΔ_a)) − E_l|`.
    pub fn residual(&self) -> f64 {
        let atom = atomic_term(&self.params).unwrap_or_default();
        let d = self.params.kappa + I * self.delta_tilde - atom;
        (self.c_s * d - self.e_l).norm()
    }
}

/// `g_ac²⟨σ_z⟩ / (γ_a + iΔ_a)`.
pub fn atomic_term(params: &SystemParams) -> Result<Complex64> {
    let coupling = params.g_ac * params.g_ac * params.sigma_z_ss;
    if coupling == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let denom = Complex64::new(params.gamma_a, params.delta_a);
    if denom.norm() == 0.0 {
        return Err(Error::Domain(
            "atomic term diverges for gamma_a = 0 and delta_a = 0".into(),
        ));
    }
    Ok(coupling / denom)
}

/// Complex denominator `D(n)`.
pub fn drive_denominator(params: &SystemParams, n: f64) -> Result<Complex64> {
    let atom = atomic_term(params)?;
    let kerr = params.g0 * params.g0 / params.omega_m;
    Ok(Complex64::new(params.kappa, params.delta_c - kerr * n) - atom)
}

/// Coefficients of `n·|D(n)|² − E_l²`, highest degree first.
pub fn steady_cubic(params: &SystemParams, e_l: f64) -> Result<[f64; 4]> {
    let atom = atomic_term(params)?;
    let a = params.kappa - atom.re;
    let b0 = params.delta_c - atom.im;
    let k = params.g0 * params.g0 / params.omega_m;
    Ok([k * k, -2.0 * b0 * k, a * a + b0 * b0, -e_l * e_l])
}

/// `f(n) = n·|D(n)|² − E_l²` evaluated directly (no expanded polynomial).
pub fn fixed_point_mismatch(params: &SystemParams, e_l: f64, n: f64) -> Result<f64> {
    Ok(n * drive_denominator(params, n)?.norm_sqr() - e_l * e_l)
}

pub fn solve_steady_state(params: &SystemParams, e_l: f64) -> Result<SteadyState> {
    if !(e_l >= 0.0 && e_l.is_finite()) {
        return Err(Error::Domain(format!(
            "pump amplitude must be >= 0, got {e_l}"
        )));
    }
    let atom = atomic_term(params)?;
    let branches = if e_l == 0.0 {
        vec![0.0]
    } else {
        admissible_roots(params, e_l)?
    };
    let n_s = *branches
        .first()
        .ok_or_else(|| Error::Solver(format!("no nonnegative real root for e_l = {e_l}")))?;

    let kerr = params.g0 * params.g0 / params.omega_m;
    let delta_tilde = params.delta_c - kerr * n_s;
    let d = params.kappa + I * delta_tilde - atom;
    let c_s = if e_l == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        e_l / d
    };
    let q_s = params.g0 * n_s / params.omega_m;
    let sigma_s = if params.g_ac == 0.0 || params.sigma_z_ss == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        I * params.g_ac * c_s * params.sigma_z_ss / Complex64::new(params.gamma_a, params.delta_a)
    };

    Ok(SteadyState {
        params: *params,
        e_l,
        c_s,
        n_s,
        delta_tilde,
        q_s,
        sigma_s,
        branch_count: branches.len(),
        branches,
    })
}

fn admissible_roots(params: &SystemParams, e_l: f64) -> Result<Vec<f64>> {
    let coeffs = steady_cubic(params, e_l)?;
    let [k2, _, lin, c0] = coeffs;

    // Rescale n = s·x so the polynomial coefficients are O(1).
    let s = if lin > 0.0 {
        -c0 / lin
    } else {
        (-c0 / k2).cbrt()
    };
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Solver(format!(
            "degenerate fixed-point equation (linear coefficient {lin}, cubic {k2})"
        )));
    }
    let scaled = [
        coeffs[0] * s * s * s,
        coeffs[1] * s * s,
        coeffs[2] * s,
        coeffs[3],
    ];

    let mut roots: Vec<f64> = cubic_roots(scaled)
        .into_iter()
        .filter(|z| z.im.abs() <= 1e-7 * z.norm().max(1e-300))
        .map(|z| z.re * s)
        .filter(|&n| n >= -1e-12 * s)
        .map(|n| refine(params, e_l, n.max(0.0)))
        .collect::<Result<_>>()?;
    roots.sort_by(f64::total_cmp);
    if roots.is_empty() {
        return Err(Error::Solver(format!(
            "no nonnegative real root for e_l = {e_l}"
        )));
    }
    Ok(roots)
}

/// Newton on the unexpanded mismatch `n·|D(n)|² − E_l²`.
fn refine(params: &SystemParams, e_l: f64, mut n: f64) -> Result<f64> {
    let atom = atomic_term(params)?;
    let a = params.kappa - atom.re;
    let b0 = params.delta_c - atom.im;
    let k = params.g0 * params.g0 / params.omega_m;
    let f = |n: f64| {
        let b = b0 - k * n;
        n * (a * a + b * b) - e_l * e_l
    };
    let mut fn_ = f(n);
    for _ in 0..16 {
        let b = b0 - k * n;
        let df = a * a + b * b - 2.0 * k * n * b;
        if df == 0.0 || fn_ == 0.0 {
            break;
        }
        let next = (n - fn_ / df).max(0.0);
        let fnext = f(next);
        if !(fnext.abs() < fn_.abs()) {
            break;
        }
        n = next;
        fn_ = fnext;
    }
    Ok(n)
}
