//! Tone extraction: project the tail of a trajectory onto `1` and
//! `e^{±iδt}` over a whole number of beat periods.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::Trajectory;
use crate::error::{Error, Result};

/// Fewest beat periods a demodulation window may span.
pub const MIN_PERIODS: usize = 10;
/// Largest tolerated fractional mismatch between the sampled window and a
/// whole number of beat periods.
pub const ALIGNMENT_TOLERANCE: f64 = 1e-6;

/// Amplitudes of `h(t) ≈ h_s + h_− e^{−iδt} + h_+ e^{+iδt}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tones {
    pub h_s: Complex64,
    pub h_minus: Complex64,
    pub h_plus: Complex64,
    /// Fraction of the AC power not explained by the two sidebands.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemodResult {
    pub c: Tones,
    pub q: Tones,
    pub sigma: Tones,
    pub periods: usize,
    pub window_start: f64,
}

/// Demodulate the last `periods` beat periods of `traj` at detuning `delta`.
pub fn demodulate(traj: &Trajectory, delta: f64, periods: usize) -> Result<DemodResult> {
    if periods < MIN_PERIODS {
        return Err(Error::Arity {
            needed: MIN_PERIODS,
            got: periods,
        });
    }
    if !(delta != 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!(
            "beat frequency must be nonzero, got {delta}"
        )));
    }
    let beat = TAU / delta.abs();
    let exact = periods as f64 * beat / traj.sample_dt;
    let intervals = exact.round() as usize;
    let coverage = intervals as f64 * traj.sample_dt / beat;
    if (coverage / periods as f64 - 1.0).abs() > ALIGNMENT_TOLERANCE {
        return Err(Error::Alignment {
            coverage,
            expected: periods,
        });
    }
    if intervals + 1 > traj.len() {
        return Err(Error::Arity {
            needed: intervals + 1,
            got: traj.len(),
        });
    }

    let start = traj.len() - intervals - 1;
    let window = &traj.states[start..];
    let times = &traj.times[start..];
    let phasors: Vec<Complex64> = times
        .iter()
        .map(|&t| {
            let (s, c) = (delta * t).sin_cos();
            Complex64::new(c, s)
        })
        .collect();

    let tones = |get: &dyn Fn(usize) -> Complex64| project(&phasors, get, intervals);
    Ok(DemodResult {
        c: tones(&|k| window[k].c),
        q: tones(&|k| Complex64::new(window[k].q, 0.0)),
        sigma: tones(&|k| window[k].sigma),
        periods,
        window_start: times[0],
    })
}

/// Trapezoid projections on `intervals + 1` uniform samples. `phasors[k]`
/// holds `e^{+iδ t_k}`.
fn project(phasors: &[Complex64], h: &dyn Fn(usize) -> Complex64, intervals: usize) -> Tones {
    let weight = |k: usize| if k == 0 || k == intervals { 0.5 } else { 1.0 };
    let norm = 1.0 / intervals as f64;

    let mut h_s = Complex64::new(0.0, 0.0);
    let mut h_minus = Complex64::new(0.0, 0.0);
    let mut h_plus = Complex64::new(0.0, 0.0);
    for (k, e) in phasors.iter().enumerate() {
        let w = weight(k);
        let v = h(k);
        h_s += w * v;
        h_minus += w * v * e;
        h_plus += w * v * e.conj();
    }
    h_s *= norm;
    h_minus *= norm;
    h_plus *= norm;

    let mut ac = 0.0;
    for k in 0..phasors.len() {
        ac += weight(k) * (h(k) - h_s).norm_sqr();
    }
    ac *= norm;
    let tone = h_minus.norm_sqr() + h_plus.norm_sqr();
    let residual = if ac > 0.0 {
        (1.0 - tone / ac).max(0.0)
    } else {
        0.0
    };

    Tones {
        h_s,
        h_minus,
        h_plus,
        residual,
    }
}
