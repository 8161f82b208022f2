//! Physical parameter model, unit conversions and validation.
//!
//! Every rate, detuning and coupling is stored in angular units (rad/s).
//! Human-facing inputs quote frequencies as `X/2π` in Hz; use
//! [`cyclic_to_angular`] at the boundary.
//!
//! Mechanical quadratures are dimensionless, so the radiation-pressure
//! coupling is a single rate `g0` and no mirror mass or cavity length
//! appears anywhere. The static Kerr shift of the cavity is `g0²·n/ω_m` and
//! the mechanical susceptibility is `ω_m / (ω_m² − δ² − iγ_mδ)`.

use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Default pump wavelength, m.
pub const DEFAULT_WAVELENGTH: f64 = 1064e-9;
/// Probe-to-pump amplitude ratio above which the linearization is refused
/// in validated mode.
pub const MAX_PROBE_RATIO: f64 = 0.1;

pub fn cyclic_to_angular(f: f64) -> f64 {
    TAU * f
}

pub fn angular_to_cyclic(w: f64) -> f64 {
    w / TAU
}

/// Pump angular frequency for a vacuum wavelength.
pub fn laser_angular_frequency(lambda_l: f64) -> Result<f64> {
    if !(lambda_l > 0.0) || !lambda_l.is_finite() {
        return Err(Error::Domain(format!(
            "wavelength must be positive, got {lambda_l}"
        )));
    }
    Ok(TAU * SPEED_OF_LIGHT / lambda_l)
}

/// Drive amplitude `E_l = sqrt(2κ P_l / ħω_l)` in s⁻¹ for a pump power in W.
pub fn power_to_amplitude(p_l: f64, lambda_l: f64, kappa: f64) -> Result<f64> {
    let omega_l = laser_angular_frequency(lambda_l)?;
    if !(p_l >= 0.0) {
        return Err(Error::Domain(format!("pump power must be >= 0, got {p_l}")));
    }
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    Ok((2.0 * kappa * p_l / (HBAR * omega_l)).sqrt())
}

/// Exact inverse of [`power_to_amplitude`].
pub fn amplitude_to_power(e_l: f64, lambda_l: f64, kappa: f64) -> Result<f64> {
    let omega_l = laser_angular_frequency(lambda_l)?;
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    Ok(e_l * e_l * HBAR * omega_l / (2.0 * kappa))
}

/// Rates, detunings and couplings of the hybrid cavity, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Mechanical angular frequency.
    pub omega_m: f64,
    /// Mechanical damping rate.
    pub gamma_m: f64,
    /// Cavity amplitude decay rate.
    pub kappa: f64,
    /// Cavity-pump detuning `ω_c − ω_l`.
    pub delta_c: f64,
    /// Single-photon optomechanical coupling.
    pub g0: f64,
    /// Atom-field (Jaynes-Cummings) coupling.
    pub g_ac: f64,
    /// Atomic decay rate.
    pub gamma_a: f64,
    /// Atom-pump detuning `ω_a − ω_l`.
    pub delta_a: f64,
    /// Frozen atomic inversion `⟨σ_z⟩`.
    pub sigma_z_ss: f64,
    /// Pump wavelength in m, only used for power conversion.
    pub lambda_l: f64,
    /// Fraction of `κ` leaving through the probed port. `1` is a one-sided
    /// cavity (all-pass when empty), `1/2` a symmetric two-port cavity.
    pub escape_efficiency: f64,
}

impl SystemParams {
    /// Reference operating point: ω_m/2π = 10 MHz,
    /// κ/2π = 215 kHz, g0/2π = 1.2 MHz, g_ac/2π = 4 MHz, Δ_c = Δ_a = ω_m,
    /// γ_a/2π = 200 kHz, γ_m/2π = 140 Hz, ⟨σ_z⟩ = +1.
    pub fn reference_point() -> Self {
        let mhz = |x: f64| cyclic_to_angular(x * 1e6);
        SystemParams {
            omega_m: mhz(10.0),
            gamma_m: cyclic_to_angular(140.0),
            kappa: mhz(0.215),
            delta_c: mhz(10.0),
            g0: mhz(1.2),
            g_ac: mhz(4.0),
            gamma_a: mhz(0.2),
            delta_a: mhz(10.0),
            sigma_z_ss: 1.0,
            lambda_l: DEFAULT_WAVELENGTH,
            escape_efficiency: 1.0,
        }
    }

    /// The same cavity with both couplings switched off.
    pub fn empty_cavity(self) -> Self {
        SystemParams {
            g0: 0.0,
            g_ac: 0.0,
            ..self
        }
    }

    pub fn is_sideband_resolved(&self) -> bool {
        self.omega_m > self.kappa
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// Validate and turn a failing report into an error.
    pub fn checked(self) -> Result<Self> {
        let report = self.validate();
        if report.is_ok() {
            Ok(self)
        } else {
            Err(Error::Domain(report.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

pub fn validate(params: &SystemParams) -> ValidationReport {
    let mut violations = Vec::new();
    let mut positive = |name: &str, v: f64| {
        if !(v > 0.0 && v.is_finite()) {
            violations.push(format!("{name} must be positive"));
        }
    };
    positive("omega_m", params.omega_m);
    positive("kappa", params.kappa);
    positive("lambda_l", params.lambda_l);

    let finite = [
        ("delta_c", params.delta_c),
        ("g0", params.g0),
        ("g_ac", params.g_ac),
        ("delta_a", params.delta_a),
    ];
    for (name, v) in finite {
        if !v.is_finite() {
            violations.push(format!("{name} must be finite"));
        }
    }
    for (name, v) in [("gamma_m", params.gamma_m), ("gamma_a", params.gamma_a)] {
        if !(v >= 0.0 && v.is_finite()) {
            violations.push(format!("{name} must be non-negative"));
        }
    }
    if !(-1.0..=1.0).contains(&params.sigma_z_ss) {
        violations.push(format!(
            "sigma_z_ss must lie in [-1, 1], got {}",
            params.sigma_z_ss
        ));
    }
    if !(params.escape_efficiency > 0.0 && params.escape_efficiency <= 1.0) {
        violations.push(format!(
            "escape_efficiency must lie in (0, 1], got {}",
            params.escape_efficiency
        ));
    }
    ValidationReport { violations }
}

/// Pump and probe drive amplitudes (s⁻¹) and probe-pump detuning (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    pub e_l: f64,
    pub e_p: f64,
    pub delta: f64,
}

impl DriveParams {
    pub fn new(e_l: f64, e_p: f64, delta: f64) -> Self {
        DriveParams { e_l, e_p, delta }
    }

    /// Checks sign constraints, and with `strict` also the weak-probe
    /// condition `E_p <= 0.1·E_l`.
    pub fn validate(&self, strict: bool) -> ValidationReport {
        let mut violations = Vec::new();
        if !(self.e_l >= 0.0 && self.e_l.is_finite()) {
            violations.push("e_l must be non-negative".to_string());
        }
        if !(self.e_p >= 0.0 && self.e_p.is_finite()) {
            violations.push("e_p must be non-negative".to_string());
        }
        if !self.delta.is_finite() {
            violations.push("delta must be finite".to_string());
        }
        if strict && self.e_p > MAX_PROBE_RATIO * self.e_l {
            violations.push(format!(
                "e_p must not exceed {MAX_PROBE_RATIO}·e_l for the linearized response"
            ));
        }
        ValidationReport { violations }
    }
}
