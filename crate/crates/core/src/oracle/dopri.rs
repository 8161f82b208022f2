//! Dormand–Prince 5(4) with steps clamped onto a uniform sample grid.
//!
//! Landing exactly on every sample time avoids interpolation error in the
//! recorded series; the grid is fine enough that clamping costs little.

use std::f64::consts::TAU;

use super::{rhs, MeanFieldState, Trajectory, DIVERGENCE_FACTOR};
use crate::error::{Error, Result};
use crate::params::{DriveParams, SystemParams};
use crate::steady::solve_steady_state;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth- minus fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const N: usize = 6;
type Vec6 = [f64; N];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationControls {
    pub rtol: f64,
    pub atol: f64,
    /// Output spacing; `None` gives 64 samples per beat period (or per
    /// mechanical period when the probe detuning is zero).
    pub sample_dt: Option<f64>,
    /// Samples before this time are not stored.
    pub record_from: f64,
    /// Starting point; `None` starts on the pump-only steady state.
    pub initial: Option<MeanFieldState>,
    pub max_steps: u64,
}

impl Default for IntegrationControls {
    fn default() -> Self {
        IntegrationControls {
            rtol: 1e-10,
            atol: 1e-12,
            sample_dt: None,
            record_from: 0.0,
            initial: None,
            max_steps: 200_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegratorStats {
    /// Order of the propagated solution.
    pub order: u32,
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub evaluations: u64,
    /// Last unclamped step size proposed by the controller, s.
    pub last_step: f64,
    pub min_step: f64,
}

fn axpy(y: &Vec6, h: f64, terms: &[(f64, &Vec6)]) -> Vec6 {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Magnitude scales used by the divergence detector.
fn blowup_limits(params: &SystemParams, drives: &DriveParams, y0: &Vec6) -> Vec6 {
    let cav = (drives.e_l.abs() + drives.e_p.abs()) / params.kappa;
    let mech = params.g0.abs() * cav * cav / params.omega_m;
    let atom = params.g_ac.abs() * params.sigma_z_ss.abs() * cav
        / params.gamma_a.hypot(params.delta_a).max(f64::MIN_POSITIVE);
    let scale = [mech, mech, cav, cav, atom, atom];
    let mut lim = [0.0; N];
    for i in 0..N {
        lim[i] = DIVERGENCE_FACTOR * scale[i].max(y0[i].abs()).max(1.0);
    }
    lim
}

/// Integrate from `t = 0` to the last sample time not beyond `t_end`.
pub fn integrate(
    params: &SystemParams,
    drives: &DriveParams,
    t_end: f64,
    controls: &IntegrationControls,
) -> Result<Trajectory> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let dt = match controls.sample_dt {
        Some(dt) => dt,
        None => {
            let w = if drives.delta != 0.0 {
                drives.delta.abs()
            } else {
                params.omega_m
            };
            TAU / (64.0 * w)
        }
    };
    if !(dt > 0.0 && dt <= t_end) {
        return Err(Error::Domain(format!(
            "sample spacing {dt:e} must lie in (0, t_end]"
        )));
    }
    let initial = match controls.initial {
        Some(s) => s,
        None => MeanFieldState::from_steady(&solve_steady_state(params, drives.e_l)?),
    };
    if !initial.is_finite() {
        return Err(Error::Domain("initial state is not finite".into()));
    }

    let f = |t: f64, y: &Vec6| {
        let mut dy = [0.0; N];
        rhs(params, drives, t, y, &mut dy);
        dy
    };

    let last_index = (t_end / dt * (1.0 + 1e-12)).floor() as u64;
    let mut y = initial.to_array();
    let limits = blowup_limits(params, drives, &y);
    let mut t = 0.0;
    let mut stats = IntegratorStats {
        order: 5,
        min_step: f64::INFINITY,
        ..Default::default()
    };

    let mut times = Vec::new();
    let mut states = Vec::new();
    let record = |t: f64, y: &Vec6, times: &mut Vec<f64>, states: &mut Vec<_>| {
        if t >= controls.record_from {
            times.push(t);
            states.push(MeanFieldState::from_array(y, t));
        }
    };
    record(0.0, &y, &mut times, &mut states);

    let rate = params.kappa
        + params.delta_c.abs()
        + params.omega_m
        + params.gamma_a
        + params.delta_a.abs()
        + drives.delta.abs();
    let mut h = (1e-3 / rate).min(dt);
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    let mut next = 1u64;
    let mut steps = 0u64;

    while next <= last_index {
        let target = next as f64 * dt;
        let clamped = h >= target - t;
        let step = if clamped { target - t } else { h };
        if step <= 1e-14 * target.max(dt) {
            return Err(Error::Stiffness { time: t, step });
        }
        steps += 1;
        if steps > controls.max_steps {
            return Err(Error::Stiffness { time: t, step });
        }

        let k2 = f(t + C2 * step, &axpy(&y, step, &[(A21, &k1)]));
        let k3 = f(t + C3 * step, &axpy(&y, step, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(
            t + C4 * step,
            &axpy(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = f(
            t + C5 * step,
            &axpy(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + step,
            &axpy(
                &y,
                step,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            step,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let t_new = if clamped { target } else { t + step };
        let k7 = f(t_new, &y_new);
        stats.evaluations += 6;

        let mut err = 0.0;
        for i in 0..N {
            let e = step
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = controls.atol + controls.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / N as f64).sqrt();

        if err <= 1.0 {
            stats.accepted_steps += 1;
            stats.min_step = stats.min_step.min(step);
            for i in 0..N {
                if !(y_new[i].abs() <= limits[i]) {
                    return Err(Error::Instability {
                        time: t_new,
                        variable: ["q", "p", "c", "c", "sigma", "sigma"][i],
                        limit: limits[i],
                    });
                }
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            if clamped {
                record(t, &y, &mut times, &mut states);
                next += 1;
            }
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // a clamped step says nothing about how large a free step may be
            h = if clamped {
                h.max(step * grow)
            } else {
                step * grow
            };
        } else {
            stats.rejected_steps += 1;
            h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
    stats.last_step = h;
    if stats.min_step.is_infinite() {
        stats.min_step = 0.0;
    }

    Ok(Trajectory {
        times,
        states,
        sample_dt: dt,
        stats,
    })
}
