//! CSV table, plot command file and provenance sidecar for a sweep.

use std::fs;
use std::path::{Path, PathBuf};

use super::config::serialize;
use super::{Observable, PointValues, SweepResult};
use crate::error::{Error, Result};

/// Paths written by [`write_outputs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub csv: PathBuf,
    pub plot: PathBuf,
    pub meta: PathBuf,
}

fn num(x: f64) -> String {
    // 17 significant digits round-trip every f64
    format!("{x:.16e}")
}

fn cells(o: Observable, v: &PointValues) -> Vec<String> {
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    match o {
        Observable::TSq => vec![opt(v.t_sq)],
        Observable::Phi => vec![opt(v.phi)],
        Observable::TauG => vec![opt(v.tau_g)],
        Observable::CMinus => vec![opt(v.c_minus.map(|c| c.re)), opt(v.c_minus.map(|c| c.im))],
        Observable::Steady => vec![
            opt(v.n_s),
            opt(v.delta_tilde),
            v.branch_count.map(|b| b.to_string()).unwrap_or_default(),
        ],
    }
}

fn header(result: &SweepResult) -> Vec<String> {
    let s = &result.scenario;
    let mut h = Vec::new();
    if let Some(series) = &s.series {
        h.push(series.quantity.column());
    }
    h.push(s.axis.column());
    for o in &s.outputs {
        h.extend(o.columns().iter().map(|c| c.to_string()));
    }
    h.push("error".into());
    h
}

/// The CSV table as bytes.
pub fn render_csv(result: &SweepResult) -> Result<Vec<u8>> {
    let s = &result.scenario;
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Scenario(format!("CSV encoding failed: {e}"));
    w.write_record(header(result)).map_err(fail)?;
    for row in &result.rows {
        let mut rec = Vec::new();
        if let Some(v) = row.series {
            rec.push(num(v));
        }
        rec.push(num(row.axis));
        match &row.outcome {
            Ok(v) => {
                for o in &s.outputs {
                    rec.extend(cells(*o, v));
                }
                rec.push("0".into());
            }
            Err(_) => {
                let width: usize = s.outputs.iter().map(|o| o.columns().len()).sum();
                rec.extend(std::iter::repeat_n(String::new(), width));
                rec.push("1".into());
            }
        }
        w.write_record(&rec).map_err(fail)?;
    }
    w.into_inner()
        .map_err(|e| Error::Scenario(format!("CSV encoding failed: {e}")))
}

/// Renderer-agnostic plot commands referring to CSV columns by name.
pub fn render_plot(result: &SweepResult) -> String {
    let s = &result.scenario;
    let name = &s.name;
    let x = s.axis.column();
    let mut out = format!("# plot commands for {name}.csv\n");
    out.push_str(&format!("data \"{name}.csv\"\n"));
    out.push_str(&format!(
        "title \"{}\"\n",
        s.title.as_deref().unwrap_or(name).replace('"', "'")
    ));
    out.push_str(&format!("xlabel \"{x}\"\n"));
    for o in &s.outputs {
        for col in o.columns() {
            out.push_str(&format!("panel \"{col}\"\n"));
            match &s.series {
                Some(series) => {
                    let key = series.quantity.column();
                    for v in &series.values {
                        out.push_str(&format!(
                            "series x={x} y={col} where {key}={} label \"{key} = {v}\"\n",
                            num(*v)
                        ));
                    }
                }
                None => out.push_str(&format!("series x={x} y={col} label \"{col}\"\n")),
            }
        }
    }
    out
}

pub fn render_meta(result: &SweepResult) -> String {
    let p = &result.provenance;
    let mut out = String::new();
    let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
    put("tool", "hybridom".into());
    put("tool_version", p.tool_version.into());
    put("variant", p.variant.to_string());
    put("tolerance_profile", p.profile.to_string());
    put("delay_rel_tol", format!("{:?}", p.delay_controls.rel_tol));
    put("delay_abs_tol_s", format!("{:?}", p.delay_controls.abs_tol));
    put(
        "delay_max_halvings",
        p.delay_controls.max_halvings.to_string(),
    );
    put("exec_mode", p.mode.to_string());
    put("timestamp_unix", p.timestamp.to_string());
    put("points", result.rows.len().to_string());
    put("failed_points", result.failed().to_string());
    for (i, row) in result.rows.iter().enumerate() {
        if let Err(msg) = &row.outcome {
            put(&format!("failure.{i}"), msg.replace('\n', " "));
        }
    }
    out.push_str("\n# scenario\n");
    out.push_str(&serialize(&result.scenario));
    out
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write `<name>.csv`, `<name>.plot` and `<name>.meta` into `out_dir`,
/// creating it if needed.
pub fn write_outputs(result: &SweepResult, out_dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let name = &result.scenario.name;
    let manifest = Manifest {
        csv: out_dir.join(format!("{name}.csv")),
        plot: out_dir.join(format!("{name}.plot")),
        meta: out_dir.join(format!("{name}.meta")),
    };
    write(&manifest.csv, &render_csv(result)?)?;
    write(&manifest.plot, render_plot(result).as_bytes())?;
    write(&manifest.meta, render_meta(result).as_bytes())?;
    Ok(manifest)
}
