//! Named parameter sweeps: one scalar axis, an optional series dimension,
//! a chosen set of observables per point.

mod config;
mod output;
mod presets;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dispersion::{delay_at_with, DelayControls};
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::params::{cyclic_to_angular, power_to_amplitude, DriveParams, SystemParams};
use crate::response::{probe_response, ResponseVariant};
use crate::steady::solve_steady_state;

pub use config::{load_config, load_config_file, serialize, CONFIG_KEYS};
pub use output::{write_outputs, Manifest};
pub use presets::{load_scenario, preset, preset_names};

/// Probe amplitude relative to the pump when a scenario does not set one.
pub const DEFAULT_PROBE_RATIO: f64 = 1e-3;

/// System parameters in configuration units: cyclic frequencies in Hz,
/// wavelength in m. Kept separate from [`SystemParams`] so a scenario
/// survives a text round trip bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsHz {
    pub omega_m: f64,
    pub gamma_m: f64,
    pub kappa: f64,
    pub delta_c: f64,
    pub g0: f64,
    pub g_ac: f64,
    pub gamma_a: f64,
    pub delta_a: f64,
    pub sigma_z_ss: f64,
    pub lambda_l: f64,
    pub escape_efficiency: f64,
}

impl ParamsHz {
    /// Values quoted for the experiments (ω_m/2π = 10 MHz, κ/2π = 215 kHz, ...).
    pub fn reference_point() -> Self {
        ParamsHz {
            omega_m: 10e6,
            gamma_m: 140.0,
            kappa: 215e3,
            delta_c: 10e6,
            g0: 1.2e6,
            g_ac: 4e6,
            gamma_a: 200e3,
            delta_a: 10e6,
            sigma_z_ss: 1.0,
            lambda_l: crate::params::DEFAULT_WAVELENGTH,
            escape_efficiency: 1.0,
        }
    }

    pub fn to_params(&self) -> SystemParams {
        let w = cyclic_to_angular;
        SystemParams {
            omega_m: w(self.omega_m),
            gamma_m: w(self.gamma_m),
            kappa: w(self.kappa),
            delta_c: w(self.delta_c),
            g0: w(self.g0),
            g_ac: w(self.g_ac),
            gamma_a: w(self.gamma_a),
            delta_a: w(self.delta_a),
            sigma_z_ss: self.sigma_z_ss,
            lambda_l: self.lambda_l,
            escape_efficiency: self.escape_efficiency,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pump {
    /// Drive amplitude `E_l/2π` in Hz.
    AmplitudeHz(f64),
    /// Pump power in W, converted with the cavity's κ and wavelength.
    PowerW(f64),
}

/// Scalar quantity a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Delta,
    PumpPower,
    G0,
    GAc,
    Kappa,
    DeltaA,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::Delta,
        Quantity::PumpPower,
        Quantity::G0,
        Quantity::GAc,
        Quantity::Kappa,
        Quantity::DeltaA,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Delta => "delta",
            Quantity::PumpPower => "pump_power",
            Quantity::G0 => "g0",
            Quantity::GAc => "g_ac",
            Quantity::Kappa => "kappa",
            Quantity::DeltaA => "delta_a",
        }
    }

    /// Config and CSV unit suffix.
    pub fn unit_suffix(self) -> &'static str {
        match self {
            Quantity::PumpPower => "_w",
            _ => "_hz",
        }
    }

    /// CSV column header for values of this quantity.
    pub fn column(self) -> String {
        match self {
            Quantity::PumpPower => "p_l_w".into(),
            q => format!("{}{}", q.name(), q.unit_suffix()),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep quantity `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Observable {
    TSq,
    Phi,
    TauG,
    CMinus,
    Steady,
}

impl Observable {
    pub const ALL: [Observable; 5] = [
        Observable::TSq,
        Observable::Phi,
        Observable::TauG,
        Observable::CMinus,
        Observable::Steady,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::TSq => "T_sq",
            Observable::Phi => "phi",
            Observable::TauG => "tau_g",
            Observable::CMinus => "c_minus",
            Observable::Steady => "steady",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Observable::TSq => &["t_sq"],
            Observable::Phi => &["phi_rad"],
            Observable::TauG => &["tau_g_s"],
            Observable::CMinus => &["c_minus_re", "c_minus_im"],
            Observable::Steady => &["n_s", "delta_tilde_rad_s", "branch_count"],
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown observable `{s}`")))
    }
}

/// Linear grid `min..=max` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    self.max
                } else {
                    self.min + (self.max - self.min) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub quantity: Quantity,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub title: Option<String>,
    pub params: ParamsHz,
    pub pump: Pump,
    /// Probe amplitude `E_p/2π` in Hz; `None` means `10⁻³·E_l`.
    pub probe_hz: Option<f64>,
    /// Probe detuning `δ/2π` in Hz when `delta` is not the axis; `None`
    /// means `ω_m`.
    pub delta_hz: Option<f64>,
    pub axis: Quantity,
    pub grid: Grid,
    pub series: Option<Series>,
    pub outputs: Vec<Observable>,
    pub variant: ResponseVariant,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.')
        {
            problems.push(format!(
                "scenario name `{}` is not a plain identifier",
                self.name
            ));
        }
        if self.grid.count < 2 {
            problems.push(format!(
                "axis_count must be at least 2, got {}",
                self.grid.count
            ));
        }
        if !(self.grid.min.is_finite() && self.grid.max.is_finite())
            || self.grid.max <= self.grid.min
        {
            problems.push("axis range must satisfy axis_min < axis_max".into());
        }
        if let Some(s) = &self.series {
            if s.values.is_empty() {
                problems.push("series needs at least one value".into());
            }
            if s.quantity == self.axis {
                problems.push("series and axis must be different quantities".into());
            }
        }
        if self.outputs.is_empty() {
            problems.push("at least one output is required".into());
        }
        let report = self.params.to_params().validate();
        problems.extend(report.violations);
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    fn series_values(&self) -> Vec<Option<f64>> {
        match &self.series {
            Some(s) => s.values.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        }
    }
}

/// Numerical tolerance presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ToleranceProfile {
    #[default]
    Default,
    /// Tighter delay convergence and the weak-probe drive check.
    Strict,
}

impl ToleranceProfile {
    pub fn delay_controls(self) -> DelayControls {
        match self {
            ToleranceProfile::Default => DelayControls::default(),
            ToleranceProfile::Strict => DelayControls {
                rel_tol: 1e-5,
                max_halvings: 16,
                ..DelayControls::default()
            },
        }
    }
}

impl fmt::Display for ToleranceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ToleranceProfile::Default => "default",
            ToleranceProfile::Strict => "strict",
        })
    }
}

impl FromStr for ToleranceProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(ToleranceProfile::Default),
            "strict" => Ok(ToleranceProfile::Strict),
            other => Err(Error::Config(format!(
                "unknown tolerance profile `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub mode: ExecMode,
    pub profile: ToleranceProfile,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            mode: ExecMode::default(),
            profile: ToleranceProfile::Default,
        }
    }
}

/// Observables at one point; fields not requested stay `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointValues {
    pub t_sq: Option<f64>,
    pub phi: Option<f64>,
    pub tau_g: Option<f64>,
    pub c_minus: Option<Complex64>,
    pub n_s: Option<f64>,
    pub delta_tilde: Option<f64>,
    pub branch_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub series: Option<f64>,
    pub axis: f64,
    pub outcome: std::result::Result<PointValues, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub tool_version: &'static str,
    pub variant: ResponseVariant,
    pub profile: ToleranceProfile,
    pub delay_controls: DelayControls,
    pub mode: ExecMode,
    /// Seconds since the Unix epoch when the run started.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub scenario: Scenario,
    pub rows: Vec<SweepRow>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }

    /// Rows of one series value, in axis order.
    pub fn series_rows(&self, value: Option<f64>) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.series == value)
    }

    /// `(axis, observable)` pairs for one series, skipping failed points.
    pub fn column(
        &self,
        series: Option<f64>,
        pick: impl Fn(&PointValues) -> Option<f64>,
    ) -> Vec<(f64, f64)> {
        self.series_rows(series)
            .filter_map(|r| r.outcome.as_ref().ok().and_then(&pick).map(|v| (r.axis, v)))
            .collect()
    }
}

/// Full width of the outermost half-height crossings of a curve's excess
/// over its span-edge baseline, `y − (y_first + y_last)/2`, with crossings
/// located by linear interpolation. `None` for fewer than three points or
/// a curve with no positive excess.
pub fn half_height_width(curve: &[(f64, f64)]) -> Option<f64> {
    if curve.len() < 3 {
        return None;
    }
    let base = 0.5 * (curve[0].1 + curve[curve.len() - 1].1);
    let f: Vec<f64> = curve.iter().map(|p| p.1 - base).collect();
    let peak = f.iter().copied().fold(f64::MIN, f64::max);
    if !(peak > 0.0) {
        return None;
    }
    let half = 0.5 * peak;
    let first = f.iter().position(|&v| v >= half)?;
    let last = f.iter().rposition(|&v| v >= half)?;
    let cross = |i: usize, j: usize| {
        let t = (half - f[i]) / (f[j] - f[i]);
        curve[i].0 + t * (curve[j].0 - curve[i].0)
    };
    let left = if first == 0 {
        curve[0].0
    } else {
        cross(first - 1, first)
    };
    let right = if last + 1 == f.len() {
        curve[last].0
    } else {
        cross(last + 1, last)
    };
    Some(right - left)
}

fn apply(params: &mut ParamsHz, pump: &mut Pump, delta_hz: &mut f64, q: Quantity, v: f64) {
    match q {
        Quantity::Delta => *delta_hz = v,
        Quantity::PumpPower => *pump = Pump::PowerW(v),
        Quantity::G0 => params.g0 = v,
        Quantity::GAc => params.g_ac = v,
        Quantity::Kappa => params.kappa = v,
        Quantity::DeltaA => params.delta_a = v,
    }
}

/// Parameters and drives at one sweep point.
pub fn resolve_point(
    scenario: &Scenario,
    series: Option<f64>,
    axis: f64,
) -> Result<(SystemParams, DriveParams)> {
    let mut hz = scenario.params;
    let mut pump = scenario.pump;
    let mut delta_hz = scenario.delta_hz.unwrap_or(hz.omega_m);
    if let (Some(s), Some(v)) = (&scenario.series, series) {
        apply(&mut hz, &mut pump, &mut delta_hz, s.quantity, v);
    }
    apply(&mut hz, &mut pump, &mut delta_hz, scenario.axis, axis);
    let params = hz.to_params().checked()?;
    let e_l = match pump {
        Pump::AmplitudeHz(a) => cyclic_to_angular(a),
        Pump::PowerW(p) => power_to_amplitude(p, params.lambda_l, params.kappa)?,
    };
    let e_p = match scenario.probe_hz {
        Some(a) => cyclic_to_angular(a),
        None if e_l > 0.0 => DEFAULT_PROBE_RATIO * e_l,
        None => DEFAULT_PROBE_RATIO * params.kappa,
    };
    Ok((
        params,
        DriveParams::new(e_l, e_p, cyclic_to_angular(delta_hz)),
    ))
}

fn evaluate(
    scenario: &Scenario,
    series: Option<f64>,
    axis: f64,
    profile: ToleranceProfile,
) -> Result<PointValues> {
    let (params, drive) = resolve_point(scenario, series, axis)?;
    let report = drive.validate(profile == ToleranceProfile::Strict);
    if !report.is_ok() {
        return Err(Error::Domain(report.to_string()));
    }
    let steady = solve_steady_state(&params, drive.e_l)?;
    let resp = probe_response(&params, &steady, drive.e_p, drive.delta, scenario.variant)?;
    let wants = |o| scenario.outputs.contains(&o);

    let mut v = PointValues::default();
    if wants(Observable::TSq) {
        v.t_sq = Some(resp.t_sq);
    }
    if wants(Observable::Phi) {
        v.phi = Some(resp.phi_t);
    }
    if wants(Observable::CMinus) {
        v.c_minus = Some(resp.c_minus);
    }
    if wants(Observable::Steady) {
        v.n_s = Some(steady.n_s);
        v.delta_tilde = Some(steady.delta_tilde);
        v.branch_count = Some(steady.branch_count);
    }
    if wants(Observable::TauG) {
        v.tau_g = Some(delay_at_with(
            &params,
            drive.e_l,
            drive.e_p,
            drive.delta,
            scenario.variant,
            &profile.delay_controls(),
        )?);
    }
    Ok(v)
}

pub fn run_scenario(scenario: &Scenario) -> Result<SweepResult> {
    run_scenario_with(scenario, &RunOptions::default())
}

/// Evaluate every (series, axis) point. Failing points are kept as error
/// rows; only a run where every point fails is an error.
pub fn run_scenario_with(scenario: &Scenario, options: &RunOptions) -> Result<SweepResult> {
    scenario.validate()?;
    let points: Vec<(Option<f64>, f64)> = scenario
        .series_values()
        .into_iter()
        .flat_map(|s| scenario.grid.values().into_iter().map(move |a| (s, a)))
        .collect();

    let outcomes = exec::map(options.mode, &points, |&(s, a)| {
        evaluate(scenario, s, a, options.profile).map_err(|e| e.to_string())
    });
    let rows: Vec<SweepRow> = points
        .iter()
        .zip(outcomes)
        .map(|(&(series, axis), outcome)| SweepRow {
            series,
            axis,
            outcome,
        })
        .collect();

    if rows.iter().all(|r| r.outcome.is_err()) {
        let first = rows[0].outcome.as_ref().err().cloned().unwrap_or_default();
        return Err(Error::Scenario(format!(
            "all {} points of `{}` failed; first error: {first}",
            rows.len(),
            scenario.name
        )));
    }

    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepResult {
        scenario: scenario.clone(),
        rows,
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION"),
            variant: scenario.variant,
            profile: options.profile,
            delay_controls: options.profile.delay_controls(),
            mode: options.mode,
            timestamp,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::empty_cavity_transmission;

    #[test]
    fn width_of_a_triangle() {
        let curve: Vec<(f64, f64)> = (0..=20)
            .map(|k| {
                let x = k as f64;
                (x, 1.0 + (4.0 - (x - 10.0).abs()).max(0.0))
            })
            .collect();
        assert!((half_height_width(&curve).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(half_height_width(&curve[..2]), None);
        assert_eq!(
            half_height_width(&[(0.0, 1.0), (1.0, 0.5), (2.0, 1.0)]),
            None
        );
    }

    #[test]
    fn grid_hits_both_ends() {
        let g = Grid {
            min: 0.1,
            max: 0.7,
            count: 7,
        };
        let v = g.values();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 0.7);
    }

    #[test]
    fn zero_couplings_give_empty_cavity_curve() {
        let mut s = preset("fig2a").unwrap();
        s.params.escape_efficiency = 1.0;
        s.params.g_ac = 0.0;
        s.params.g0 = 0.0;
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.failed(), 0);
        for row in &r.rows {
            let (p, d) = resolve_point(&s, None, row.axis).unwrap();
            let want = empty_cavity_transmission(&p, d.delta).norm_sqr();
            let got = row.outcome.as_ref().unwrap().t_sq.unwrap();
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn failed_points_are_recorded() {
        let mut s = preset("fig2d").unwrap();
        // negative powers are rejected point by point
        s.axis = Quantity::PumpPower;
        s.grid = Grid {
            min: -1e-6,
            max: 1e-6,
            count: 3,
        };
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.failed(), 1);
        assert!(r.rows[0].outcome.is_err());

        s.grid = Grid {
            min: -2e-6,
            max: -1e-6,
            count: 2,
        };
        assert!(matches!(run_scenario(&s), Err(Error::Scenario(_))));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let s = preset("fig4a").unwrap();
        let seq = run_scenario_with(
            &s,
            &RunOptions {
                mode: ExecMode::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        let par = run_scenario(&s).unwrap();
        assert_eq!(seq.rows, par.rows);
    }

    #[test]
    fn strict_profile_rejects_strong_probe() {
        let mut s = preset("fig2d").unwrap();
        s.probe_hz = Some(1e6);
        s.grid.count = 3;
        assert_eq!(run_scenario(&s).unwrap().failed(), 0);
        let strict = RunOptions {
            profile: ToleranceProfile::Strict,
            ..Default::default()
        };
        assert!(run_scenario_with(&s, &strict).is_err());
    }
}
