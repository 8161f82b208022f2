//! Direct time integration of the mean-field equations, used as an
//! independent check on the closed-form steady state and probe response.
//!
//! In the frame rotating at the pump frequency the equations are
//!
//! ```text
//! q' = ω_m p
//! p' = −ω_m q − γ_m p + g0 |c|²
//! c' = −(κ + iΔ_c) c + i g0 c q − i g_ac σ + E_l + E_p e^{−iδt}
//! σ' = −(γ_a + iΔ_a) σ + i g_ac c ⟨σ_z⟩
//! ```
//!
//! with the atomic inversion held fixed.

mod demod;
mod dopri;

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{cyclic_to_angular, DriveParams, SystemParams};
use crate::steady::SteadyState;

pub use demod::{demodulate, DemodResult, Tones, ALIGNMENT_TOLERANCE, MIN_PERIODS};
pub use dopri::{integrate, IntegrationControls, IntegratorStats};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Magnitude, relative to the drive-scaled estimate, at which a trajectory
/// is declared divergent.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanFieldState {
    pub q: f64,
    pub p: f64,
    pub c: Complex64,
    /// Atomic coherence `⟨σ_−⟩`.
    pub sigma: Complex64,
    pub t: f64,
}

impl MeanFieldState {
    pub fn from_steady(steady: &SteadyState) -> Self {
        MeanFieldState {
            q: steady.q_s,
            p: 0.0,
            c: steady.c_s,
            sigma: steady.sigma_s,
            t: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.q,
            self.p,
            self.c.re,
            self.c.im,
            self.sigma.re,
            self.sigma.im,
            self.t,
        ]
        .iter()
        .all(|x| x.is_finite())
    }

    pub(crate) fn to_array(self) -> [f64; 6] {
        [
            self.q,
            self.p,
            self.c.re,
            self.c.im,
            self.sigma.re,
            self.sigma.im,
        ]
    }

    pub(crate) fn from_array(y: &[f64; 6], t: f64) -> Self {
        MeanFieldState {
            q: y[0],
            p: y[1],
            c: Complex64::new(y[2], y[3]),
            sigma: Complex64::new(y[4], y[5]),
            t,
        }
    }
}

/// Time derivative of every field (`t` of the result is 1).
pub fn derivative(
    state: &MeanFieldState,
    params: &SystemParams,
    drives: &DriveParams,
    t: f64,
) -> MeanFieldState {
    let mut out = [0.0; 6];
    rhs(params, drives, t, &state.to_array(), &mut out);
    MeanFieldState {
        t: 1.0,
        ..MeanFieldState::from_array(&out, 0.0)
    }
}

pub(crate) fn rhs(p: &SystemParams, d: &DriveParams, t: f64, y: &[f64; 6], dy: &mut [f64; 6]) {
    let (q, mom) = (y[0], y[1]);
    let c = Complex64::new(y[2], y[3]);
    let sigma = Complex64::new(y[4], y[5]);

    let probe = if d.e_p == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let (s, co) = (d.delta * t).sin_cos();
        d.e_p * Complex64::new(co, -s)
    };
    let dc = -Complex64::new(p.kappa, p.delta_c) * c + I * (p.g0 * q) * c - I * p.g_ac * sigma
        + d.e_l
        + probe;
    let ds = -Complex64::new(p.gamma_a, p.delta_a) * sigma + I * (p.g_ac * p.sigma_z_ss) * c;

    dy[0] = p.omega_m * mom;
    dy[1] = -p.omega_m * q - p.gamma_m * mom + p.g0 * c.norm_sqr();
    dy[2] = dc.re;
    dy[3] = dc.im;
    dy[4] = ds.re;
    dy[5] = ds.im;
}

/// Uniformly sampled solution plus integrator bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<MeanFieldState>,
    pub sample_dt: f64,
    pub stats: IntegratorStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&MeanFieldState> {
        self.states.last()
    }

    /// CSV with columns `t,q,p,re_c,im_c,re_sigma,im_sigma`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Scenario(format!("trajectory dump failed: {e}"));
        w.write_record(["t", "q", "p", "re_c", "im_c", "re_sigma", "im_sigma"])
            .map_err(io)?;
        for s in &self.states {
            let row = [s.t, s.q, s.p, s.c.re, s.c.im, s.sigma.re, s.sigma.im];
            w.write_record(row.iter().map(|x| format!("{x:.16e}")))
                .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Scenario(format!("trajectory dump failed: {e}")))?;
        Ok(())
    }

    pub fn dump(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Parameter set used to check the closed forms against integration. The
/// mechanical damping is raised far above the experimental value so the
/// mirror settles within a few thousand oscillations.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationPreset {
    pub name: &'static str,
    pub params: SystemParams,
    pub e_l: f64,
}

impl ValidationPreset {
    /// Integration horizon `20/γ_m`.
    pub fn t_end(&self) -> f64 {
        20.0 / self.params.gamma_m
    }

    /// Earliest admissible demodulation start, `10/min(κ, γ_m, γ_a)`.
    pub fn settle_time(&self) -> f64 {
        let p = &self.params;
        10.0 / p.kappa.min(p.gamma_m).min(p.gamma_a)
    }
}

/// Oracle presets. Where the atom sits on the anti-Stokes sideband with
/// nonzero coupling the inversion is taken as −1: a fully inverted atom
/// there pumps the cavity and the mean-field solution runs away.
pub fn validation_presets() -> Vec<ValidationPreset> {
    let mhz = |x: f64| cyclic_to_angular(x * 1e6);
    let base = SystemParams::reference_point();
    let om = base.omega_m;
    let make =
        |name, gamma_m_khz: f64, g_ac_mhz: f64, delta_a: f64, sigma_z: f64| ValidationPreset {
            name,
            params: SystemParams {
                gamma_m: cyclic_to_angular(gamma_m_khz * 1e3),
                kappa: om / 10.0,
                g_ac: mhz(g_ac_mhz),
                delta_a,
                sigma_z_ss: sigma_z,
                escape_efficiency: 0.5,
                ..base
            },
            e_l: mhz(2.0),
        };
    vec![
        make("val-bare-50k", 50.0, 0.0, om, 1.0),
        make("val-bare-10k", 10.0, 0.0, om, 1.0),
        make("val-red-1.2", 50.0, 1.2, -om, 1.0),
        make("val-red-4", 50.0, 4.0, -om, 1.0),
        make("val-blue-1.2", 50.0, 1.2, om, -1.0),
        make("val-blue-4", 50.0, 4.0, om, -1.0),
    ]
}

pub fn validation_preset(name: &str) -> Option<ValidationPreset> {
    validation_presets().into_iter().find(|p| p.name == name)
}

/// Closed-form and integrated probe sideband at one detuning.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub delta: f64,
    pub e_p: f64,
    pub closed_form: Complex64,
    pub demodulated: DemodResult,
    pub stats: IntegratorStats,
}

impl OracleComparison {
    /// `|c_−(integrated) − c_−(closed form)| / |c_−(closed form)|`.
    pub fn relative_error(&self) -> f64 {
        (self.demodulated.c.h_minus - self.closed_form).norm() / self.closed_form.norm()
    }
}

/// Integrate `pre` with a probe of amplitude `e_p` at detuning `delta` and
/// compare the demodulated cavity sideband with the 2×2 closed form. The
/// window spans every whole beat period after the settling time.
pub fn compare_sideband(pre: &ValidationPreset, e_p: f64, delta: f64) -> Result<OracleComparison> {
    let steady = crate::steady::solve_steady_state(&pre.params, pre.e_l)?;
    let (closed_form, _) = crate::response::sideband_amplitudes(&pre.params, &steady, e_p, delta);

    let beat = std::f64::consts::TAU / delta.abs();
    let dt = beat / 64.0;
    let t_end = pre.t_end();
    let periods = ((t_end - pre.settle_time()) / beat).floor() as usize;
    let controls = IntegrationControls {
        sample_dt: Some(dt),
        record_from: t_end - (periods as f64 + 1.0) * beat,
        initial: Some(MeanFieldState::from_steady(&steady)),
        ..Default::default()
    };
    let drives = DriveParams::new(pre.e_l, e_p, delta);
    let traj = integrate(&pre.params, &drives, t_end, &controls)?;
    let demodulated = demodulate(&traj, delta, periods)?;
    Ok(OracleComparison {
        delta,
        e_p,
        closed_form,
        demodulated,
        stats: traj.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steady::solve_steady_state;

    #[test]
    fn zero_state_is_fixed_point() {
        let p = SystemParams::reference_point();
        let d = derivative(
            &MeanFieldState::default(),
            &p,
            &DriveParams::new(0.0, 0.0, 1.0),
            0.3,
        );
        assert_eq!(MeanFieldState { t: 0.0, ..d }, MeanFieldState::default());
    }

    #[test]
    fn steady_state_has_zero_derivative() {
        for pre in validation_presets() {
            let s = solve_steady_state(&pre.params, pre.e_l).unwrap();
            let d = derivative(
                &MeanFieldState::from_steady(&s),
                &pre.params,
                &DriveParams::new(pre.e_l, 0.0, pre.params.omega_m),
                0.0,
            );
            assert!(d.c.norm() <= 1e-9 * pre.e_l, "{} {}", pre.name, d.c);
            assert!(d.sigma.norm() <= 1e-9 * pre.e_l, "{}", pre.name);
            assert!(d.p.abs() <= 1e-9 * pre.params.omega_m, "{}", pre.name);
            assert_eq!(d.q, 0.0);
        }
    }

    #[test]
    fn single_term_activation() {
        let p = SystemParams::reference_point();
        let st = MeanFieldState {
            c: Complex64::new(1.0, 0.0),
            ..Default::default()
        };
        let d = derivative(&st, &p, &DriveParams::new(0.0, 0.0, 0.0), 0.0);
        assert_eq!(d.q, 0.0);
        assert_eq!(d.p, p.g0);
    }

    #[test]
    fn probe_rotates_at_detuning() {
        let p = SystemParams::reference_point().empty_cavity();
        let drives = DriveParams::new(0.0, 2.0, 3.0);
        let t = 0.25;
        let d = derivative(&MeanFieldState::default(), &p, &drives, t);
        let expected = 2.0 * (-I * 3.0 * t).exp();
        assert!((d.c - expected).norm() < 1e-15);
    }

    #[test]
    fn presets_are_valid() {
        for pre in validation_presets() {
            assert!(pre.params.validate().is_ok(), "{}", pre.name);
            assert!(pre.settle_time() < pre.t_end());
        }
        assert!(validation_preset("val-red-4").is_some());
        assert!(validation_preset("nope").is_none());
    }
}
