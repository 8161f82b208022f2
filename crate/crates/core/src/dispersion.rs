//! Transmission phase curves and group delay `τ_g = dφ_t/dω_p`.
//!
//! The pump frequency is fixed, so derivatives with respect to the probe
//! frequency equal derivatives with respect to the detuning `δ`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::response::{probe_response, ProbeResponse, ResponseVariant};
use crate::steady::solve_steady_state;

/// Slack below π for the largest admissible unwrapped increment.
pub const UNWRAP_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionCurve {
    pub delta_grid: Vec<f64>,
    pub phi_raw: Vec<f64>,
    pub phi_unwrapped: Vec<f64>,
    /// Group delay in s on every grid point.
    pub tau_g: Vec<f64>,
    pub stencil_order: u32,
    pub richardson: bool,
}

impl DispersionCurve {
    pub fn from_phases(delta_grid: Vec<f64>, phi_raw: Vec<f64>, richardson: bool) -> Result<Self> {
        let phi_unwrapped = unwrap_phase(&phi_raw)?;
        let tau_g = if richardson {
            group_delay_richardson(&delta_grid, &phi_unwrapped)?
        } else {
            group_delay(&delta_grid, &phi_unwrapped)?
        };
        Ok(DispersionCurve {
            delta_grid,
            phi_raw,
            phi_unwrapped,
            tau_g,
            stencil_order: 2,
            richardson,
        })
    }

    pub fn from_responses(responses: &[ProbeResponse], richardson: bool) -> Result<Self> {
        Self::from_phases(
            responses.iter().map(|r| r.delta).collect(),
            responses.iter().map(|r| r.phi_t).collect(),
            richardson,
        )
    }
}

/// Remove 2π jumps so successive increments are minimal.
///
/// Fails with [`Error::GridTooCoarse`] when an increment cannot be brought
/// below `π − 1e-6`, i.e. the sampling cannot resolve the phase.
pub fn unwrap_phase(phi_raw: &[f64]) -> Result<Vec<f64>> {
    let Some(&first) = phi_raw.first() else {
        return Err(Error::Arity { needed: 1, got: 0 });
    };
    let mut out = Vec::with_capacity(phi_raw.len());
    out.push(first);
    let mut turns = 0.0f64;
    for (k, w) in phi_raw.windows(2).enumerate() {
        let d = w[1] - w[0];
        let jump = (d / TAU).round();
        let inc = d - TAU * jump;
        if inc.abs() >= PI - UNWRAP_MARGIN {
            return Err(Error::GridTooCoarse {
                index: k + 1,
                increment: inc,
            });
        }
        turns -= jump;
        out.push(w[1] + TAU * turns);
    }
    Ok(out)
}

fn check_grid(delta_grid: &[f64], phi: &[f64]) -> Result<()> {
    if delta_grid.len() != phi.len() {
        return Err(Error::Contract(format!(
            "grid has {} points but phase has {}",
            delta_grid.len(),
            phi.len()
        )));
    }
    if delta_grid.len() < 3 {
        return Err(Error::Arity {
            needed: 3,
            got: delta_grid.len(),
        });
    }
    if delta_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain(
            "detuning grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Three-point derivative at `x0` from samples at offsets `h1`, `h2`
/// (signed, distinct, nonzero).
fn one_sided(f0: f64, f1: f64, f2: f64, h1: f64, h2: f64) -> f64 {
    -(h1 + h2) / (h1 * h2) * f0 + h2 / (h1 * (h2 - h1)) * f1 - h1 / (h2 * (h2 - h1)) * f2
}

/// Second-order group delay: central differences inside, one-sided
/// three-point stencils at both ends.
pub fn group_delay(delta_grid: &[f64], phi_unwrapped: &[f64]) -> Result<Vec<f64>> {
    check_grid(delta_grid, phi_unwrapped)?;
    let (x, f) = (delta_grid, phi_unwrapped);
    let n = x.len();
    let mut tau = Vec::with_capacity(n);
    tau.push(one_sided(f[0], f[1], f[2], x[1] - x[0], x[2] - x[0]));
    for k in 1..n - 1 {
        tau.push((f[k + 1] - f[k - 1]) / (x[k + 1] - x[k - 1]));
    }
    tau.push(one_sided(
        f[n - 1],
        f[n - 2],
        f[n - 3],
        x[n - 2] - x[n - 1],
        x[n - 3] - x[n - 1],
    ));
    Ok(tau)
}

/// Whether spacing is uniform to one part in 10⁹.
pub fn is_uniform(delta_grid: &[f64]) -> bool {
    if delta_grid.len() < 2 {
        return true;
    }
    let h = (delta_grid[delta_grid.len() - 1] - delta_grid[0]) / (delta_grid.len() - 1) as f64;
    delta_grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs())
}

/// [`group_delay`] with one Richardson step-halving correction on interior
/// points that have two neighbours on each side. Requires a uniform grid.
pub fn group_delay_richardson(delta_grid: &[f64], phi_unwrapped: &[f64]) -> Result<Vec<f64>> {
    let mut tau = group_delay(delta_grid, phi_unwrapped)?;
    if !is_uniform(delta_grid) {
        return Err(Error::Domain(
            "Richardson refinement needs a uniform grid".into(),
        ));
    }
    let (x, f) = (delta_grid, phi_unwrapped);
    let coarse: Vec<f64> = (2..x.len().saturating_sub(2))
        .map(|k| (f[k + 2] - f[k - 2]) / (x[k + 2] - x[k - 2]))
        .collect();
    for (k, d2h) in (2..).zip(coarse) {
        tau[k] = (4.0 * tau[k] - d2h) / 3.0;
    }
    Ok(tau)
}

/// Controls for [`delay_at_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayControls {
    /// Starting micro-grid half-width in rad/s; `None` means `ω_m/10⁴`.
    pub initial_half_width: Option<f64>,
    pub rel_tol: f64,
    /// Absolute floor in s, so estimates at a sign change can converge.
    pub abs_tol: f64,
    pub max_halvings: u32,
}

impl Default for DelayControls {
    fn default() -> Self {
        DelayControls {
            initial_half_width: None,
            rel_tol: 1e-3,
            abs_tol: 1e-18,
            max_halvings: 10,
        }
    }
}

/// Group delay at `delta0` from a shrinking five-point micro-grid.
pub fn delay_at(
    params: &SystemParams,
    e_l: f64,
    e_p: f64,
    delta0: f64,
    variant: ResponseVariant,
) -> Result<f64> {
    delay_at_with(params, e_l, e_p, delta0, variant, &DelayControls::default())
}

pub fn delay_at_with(
    params: &SystemParams,
    e_l: f64,
    e_p: f64,
    delta0: f64,
    variant: ResponseVariant,
    controls: &DelayControls,
) -> Result<f64> {
    let steady = solve_steady_state(params, e_l)?;
    let estimate = |half_width: f64| -> Result<f64> {
        let h = 0.5 * half_width;
        let grid: Vec<f64> = (-2..=2).map(|k| delta0 + k as f64 * h).collect();
        let phases = grid
            .iter()
            .map(|&d| probe_response(params, &steady, e_p, d, variant).map(|r| r.phi_t))
            .collect::<Result<Vec<_>>>()?;
        let tau = group_delay(&grid, &unwrap_phase(&phases)?)?;
        Ok(tau[2])
    };

    let mut w = controls.initial_half_width.unwrap_or(params.omega_m / 1e4);
    let mut previous = estimate(w)?;
    let mut last = previous;
    for _ in 0..controls.max_halvings {
        w *= 0.5;
        last = estimate(w)?;
        let scale = last.abs().max(previous.abs());
        if (last - previous).abs() <= (controls.rel_tol * scale).max(controls.abs_tol) {
            return Ok(last);
        }
        previous = last;
    }
    Err(Error::Convergence { previous, last })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unwrap_examples() {
        assert_eq!(unwrap_phase(&[0.1, 0.2, 0.3]).unwrap(), vec![0.1, 0.2, 0.3]);
        let u = unwrap_phase(&[3.0, -3.0]).unwrap();
        assert_eq!(u[0], 3.0);
        assert!((u[1] - (TAU - 3.0)).abs() < 1e-15);
        assert!((u[1] - 3.2832).abs() < 1e-4);
        assert_eq!(unwrap_phase(&[1.5; 7]).unwrap(), vec![1.5; 7]);
    }

    #[test]
    fn unwrap_rejects_coarse_grid() {
        match unwrap_phase(&[0.0, 1.0, 1.0 + PI]) {
            Err(Error::GridTooCoarse { index, .. }) => assert_eq!(index, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(unwrap_phase(&[]), Err(Error::Arity { .. })));
    }

    #[test]
    fn unwrap_shifts_by_whole_turns() {
        let raw: Vec<f64> = (0..200)
            .map(|k| {
                let x = 0.3 * k as f64;
                let y = x.sin() * 4.0 + x;
                y - TAU * (y / TAU).round()
            })
            .collect();
        let u = unwrap_phase(&raw).unwrap();
        for (a, b) in u.iter().zip(&raw) {
            let turns = (a - b) / TAU;
            assert!((turns - turns.round()).abs() < 1e-12);
        }
        for w in u.windows(2) {
            assert!((w[1] - w[0]).abs() < PI);
        }
    }

    #[test]
    fn constant_and_linear_phase() {
        let grid: Vec<f64> = (0..40)
            .map(|k| 1e6 + 37.0 * k as f64 + (k * k) as f64)
            .collect();
        assert!(group_delay(&grid, &vec![2.0; 40])
            .unwrap()
            .iter()
            .all(|&t| t.abs() < 1e-12));
        let a = 5e-9;
        let phi: Vec<f64> = grid.iter().map(|d| a * d).collect();
        for t in group_delay(&grid, &phi).unwrap() {
            assert!((t - a).abs() <= 1e-9 * a, "{t}");
        }
    }

    #[test]
    fn arity_and_grid_errors() {
        assert!(matches!(
            group_delay(&[0.0, 1.0], &[0.0, 1.0]),
            Err(Error::Arity { needed: 3, got: 2 })
        ));
        assert!(group_delay(&[0.0, 2.0, 1.0], &[0.0, 1.0, 2.0]).is_err());
        assert!(group_delay_richardson(&[0.0, 1.0, 3.0, 4.0], &[0.0; 4]).is_err());
    }

    #[test]
    fn richardson_improves_interior() {
        let n = 41;
        let grid: Vec<f64> = (0..n).map(|k| 0.05 * k as f64).collect();
        let phi: Vec<f64> = grid.iter().map(|x| x.sin()).collect();
        let plain = group_delay(&grid, &phi).unwrap();
        let rich = group_delay_richardson(&grid, &phi).unwrap();
        let err = |v: &[f64]| {
            (2..n - 2)
                .map(|k| (v[k] - grid[k].cos()).abs())
                .fold(0.0, f64::max)
        };
        assert!(err(&rich) < 1e-2 * err(&plain));
    }

    #[test]
    fn invariant_under_offsets() {
        let grid: Vec<f64> = (0..30).map(|k| k as f64 * 0.1).collect();
        let phi: Vec<f64> = grid.iter().map(|x| (2.0 * x).cos()).collect();
        let shifted: Vec<f64> = phi.iter().map(|p| p + 3.0 * TAU + 0.25).collect();
        let a = group_delay(&grid, &phi).unwrap();
        let b = group_delay(&grid, &shifted).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_cavity_far_off_resonance_is_flat() {
        let p = SystemParams::reference_point().empty_cavity();
        let d0 = 100.0 * p.kappa + p.delta_c;
        let tau = delay_at(&p, 1e7, 1.0, d0, ResponseVariant::OracleConsistent).unwrap();
        assert!(tau.abs() < 1e-3 / p.kappa, "{tau}");
    }

    #[test]
    fn empty_cavity_delay_matches_analytic() {
        // T = (−κ + i x)/(κ + i x) with x = Δ_c − δ has φ = π − 2 atan(x/κ)
        // so dφ/dδ = 2κ/(κ² + x²).
        let p = SystemParams::reference_point().empty_cavity();
        for off in [-3.0, -0.5, 0.0, 0.7, 4.0] {
            let d0 = p.delta_c + off * p.kappa;
            let tau = delay_at(&p, 1e7, 1.0, d0, ResponseVariant::OracleConsistent).unwrap();
            let x = p.delta_c - d0;
            let want = 2.0 * p.kappa / (p.kappa * p.kappa + x * x);
            assert!((tau - want).abs() <= 2e-3 * want, "{off}: {tau} vs {want}");
        }
    }

    #[test]
    fn non_convergence_reports_estimates() {
        let p = SystemParams::reference_point().empty_cavity();
        let controls = DelayControls {
            max_halvings: 0,
            ..DelayControls::default()
        };
        let r = delay_at_with(
            &p,
            1e7,
            1.0,
            p.delta_c,
            ResponseVariant::OracleConsistent,
            &controls,
        );
        assert!(matches!(r, Err(Error::Convergence { .. })));
    }
}
