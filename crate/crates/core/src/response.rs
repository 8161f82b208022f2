//! First-order probe response: sideband amplitudes and transmission.
//!
//! Around the pump operating point every mean field is written as
//! `h(t) = h_s + h_− e^{−iδt} + h_+ e^{+iδt}` and the equations of motion are
//! kept to first order in `E_p`. Eliminating the mirror and atom sidebands
//! leaves a 2×2 system for `(c_−, c_+*)`:
//!
//! ```text
//! [M1 − iGn      −iG c_s²  ] [c_− ]   [E_p]
//! [iG c_s*²      M2 + iGn  ] [c_+*] = [ 0 ]
//!
//! G  = g0² ω_m / (ω_m² − δ² − iγ_m δ)
//! M1 = κ + i(Δ̃ − δ) − g_ac²⟨σ_z⟩ / (γ_a + i(Δ_a − δ))
//! M2 = κ − i(Δ̃ + δ) − g_ac²⟨σ_z⟩ / (γ_a − i(Δ_a + δ))
//! ```
//!
//! `docs/derivation.md` carries the full derivation. The transmitted probe
//! is `T = 1 − 2ηκ c_−/E_p` with `η` the escape efficiency of the port.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::params::SystemParams;
use crate::steady::{solve_steady_state, SteadyState};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which closed form produces `c_−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResponseVariant {
    /// Direct solve of the linearized 2×2 sideband system.
    #[default]
    OracleConsistent,
    /// The printed `c_−` expression, evaluated verbatim (`−iΔ_c` in `A`).
    PaperLiteral,
}

impl fmt::Display for ResponseVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResponseVariant::OracleConsistent => "oracle-consistent",
            ResponseVariant::PaperLiteral => "paper-literal",
        })
    }
}

impl FromStr for ResponseVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle-consistent" => Ok(ResponseVariant::OracleConsistent),
            "paper-literal" => Ok(ResponseVariant::PaperLiteral),
            other => Err(Error::Config(format!(
                "unknown variant `{other}` (expected oracle-consistent or paper-literal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeResponse {
    /// Probe-pump detuning, rad/s.
    pub delta: f64,
    pub c_minus: Complex64,
    /// Four-wave-mixing sideband. Diagnostic only; `None` for the
    /// paper-literal variant, which has no expression for it.
    pub c_plus: Option<Complex64>,
    pub t: Complex64,
    pub t_sq: f64,
    /// `arg T` in (−π, π].
    pub phi_t: f64,
}

/// `ω_m / (ω_m² − δ² − iγ_mδ)`.
pub fn mechanical_susceptibility(params: &SystemParams, delta: f64) -> Complex64 {
    let w = params.omega_m;
    w / Complex64::new(w * w - delta * delta, -params.gamma_m * delta)
}

fn atomic_self_energy(params: &SystemParams, denom: Complex64) -> Complex64 {
    let coupling = params.g_ac * params.g_ac * params.sigma_z_ss;
    if coupling == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        coupling / denom
    }
}

/// `(c_−, c_+)` from the 2×2 sideband system.
pub fn sideband_amplitudes(
    params: &SystemParams,
    steady: &SteadyState,
    e_p: f64,
    delta: f64,
) -> (Complex64, Complex64) {
    let n = steady.n_s;
    let cs = steady.c_s;
    let dt = steady.delta_tilde;
    let g = params.g0 * params.g0 * mechanical_susceptibility(params, delta);
    let m1 = params.kappa + I * (dt - delta)
        - atomic_self_energy(
            params,
            Complex64::new(params.gamma_a, params.delta_a - delta),
        );
    let m2 = params.kappa
        - I * (dt + delta)
        - atomic_self_energy(
            params,
            Complex64::new(params.gamma_a, -(params.delta_a + delta)),
        );

    let a11 = m1 - I * g * n;
    let a12 = -I * g * cs * cs;
    let a21 = I * g * cs.conj() * cs.conj();
    let a22 = m2 + I * g * n;
    let det = a11 * a22 - a12 * a21;
    let c_minus = e_p * a22 / det;
    let c_plus_conj = -a21 * e_p / det;
    (c_minus, c_plus_conj.conj())
}

/// Detuning that enters the `−i(·)` slot of `A` in the printed expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) enum ADetuning {
    /// As printed: the cavity-pump detuning `Δ_c`.
    Cavity,
    /// The probe detuning `δ`; this is what the linearization produces.
    Probe,
}

/// Printed closed form:
/// `c_− = E_p (A − B) / (B B' + (A − C)(A' + C) − (A B' + A' B) + 2iCΔ̃)`
/// with `A' = A(−Δ)*`, `B' = B(−Δ)*` and `Δ` read as the probe detuning.
pub(crate) fn printed_c_minus(
    params: &SystemParams,
    steady: &SteadyState,
    e_p: f64,
    delta: f64,
    a_detuning: ADetuning,
) -> Complex64 {
    let n = steady.n_s;
    let dt = steady.delta_tilde;
    let c_of = |x: f64| I * params.g0 * params.g0 * mechanical_susceptibility(params, x) * n;
    // `sign` is +1 for A and −1 for A': the primed quantities flip the
    // detuning whichever detuning the A term is read with.
    let a_of = |x: f64, sign: f64| {
        let det = match a_detuning {
            ADetuning::Cavity => sign * params.delta_c,
            ADetuning::Probe => x,
        };
        params.kappa - I * det - I * dt + c_of(x)
    };
    let b_of =
        |x: f64| atomic_self_energy(params, Complex64::new(params.gamma_a, -params.delta_a - x));

    let a = a_of(delta, 1.0);
    let b = b_of(delta);
    let c = c_of(delta);
    let a_p = a_of(-delta, -1.0).conj();
    let b_p = b_of(-delta).conj();
    let denom = b * b_p + (a - c) * (a_p + c) - (a * b_p + a_p * b) + 2.0 * I * c * dt;
    e_p * (a - b) / denom
}

pub fn probe_response(
    params: &SystemParams,
    steady: &SteadyState,
    e_p: f64,
    delta: f64,
    variant: ResponseVariant,
) -> Result<ProbeResponse> {
    if steady.params != *params {
        return Err(Error::Contract(
            "steady state was solved for a different parameter set".into(),
        ));
    }
    if !(e_p > 0.0 && e_p.is_finite()) {
        return Err(Error::Domain(format!(
            "probe amplitude must be positive, got {e_p}"
        )));
    }
    let (c_minus, c_plus) = match variant {
        ResponseVariant::OracleConsistent => {
            let (m, p) = sideband_amplitudes(params, steady, e_p, delta);
            (m, Some(p))
        }
        ResponseVariant::PaperLiteral => (
            printed_c_minus(params, steady, e_p, delta, ADetuning::Cavity),
            None,
        ),
    };
    if !(c_minus.re.is_finite() && c_minus.im.is_finite()) {
        return Err(Error::Domain(format!(
            "probe response has a pole at delta = {delta:e} rad/s"
        )));
    }
    let t = 1.0 - 2.0 * params.escape_efficiency * params.kappa * c_minus / e_p;
    Ok(ProbeResponse {
        delta,
        c_minus,
        c_plus,
        t,
        t_sq: t.norm_sqr(),
        phi_t: t.arg(),
    })
}

/// Transmission over a strictly increasing detuning grid. The operating
/// point is solved once; grid points are evaluated with the default
/// execution mode.
pub fn transmission_spectrum(
    params: &SystemParams,
    e_l: f64,
    e_p: f64,
    delta_grid: &[f64],
    variant: ResponseVariant,
) -> Result<Vec<ProbeResponse>> {
    transmission_spectrum_with(ExecMode::default(), params, e_l, e_p, delta_grid, variant)
}

pub fn transmission_spectrum_with(
    mode: ExecMode,
    params: &SystemParams,
    e_l: f64,
    e_p: f64,
    delta_grid: &[f64],
    variant: ResponseVariant,
) -> Result<Vec<ProbeResponse>> {
    if delta_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain(
            "delta grid must be strictly increasing".into(),
        ));
    }
    let steady = solve_steady_state(params, e_l)?;
    exec::map(mode, delta_grid, |&d| {
        probe_response(params, &steady, e_p, d, variant)
    })
    .into_iter()
    .collect()
}

/// `|1 − 2ηκ/(κ + i(Δ_c − δ))|²`, the bare-cavity transmission.
pub fn empty_cavity_transmission(params: &SystemParams, delta: f64) -> Complex64 {
    1.0 - 2.0 * params.escape_efficiency * params.kappa
        / Complex64::new(params.kappa, params.delta_c - delta)
}
