use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hybridom::exec::{self, ExecMode};
use hybridom::oracle::{compare_sideband, validation_preset, validation_presets};
use hybridom::sweep::{
    load_config_file, load_scenario, preset, preset_names, run_scenario_with, write_outputs,
    RunOptions, ToleranceProfile,
};
use hybridom::ResponseVariant;

/// Pump-probe transmission, phase and group delay of a hybrid
/// atom-optomechanical cavity.
#[derive(Parser, Debug)]
#[command(name = "hybridom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a preset or a config file and write <name>.csv, .plot and .meta.
    Run {
        /// Preset name or path to a config file.
        target: String,
        #[arg(long, env = "HYBRIDOM_OUT_DIR", default_value = "out")]
        out_dir: PathBuf,
        /// Override the response variant set by the scenario.
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        /// Worker threads (defaults to one per core).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value_t = Profile::Default)]
        tolerance_profile: Profile,
    },
    /// Print the built-in scenario presets.
    ListPresets,
    /// Check a config file without running it.
    Validate { config: PathBuf },
    /// Compare the closed-form probe sideband with direct integration.
    OracleCheck {
        /// Validation preset (val-bare-50k, val-bare-10k, val-red-1.2, val-red-4,
        /// val-blue-1.2, val-blue-4) or `all`.
        preset: String,
        /// Detunings per preset, spread over 0.8 to 1.2 mechanical frequencies.
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    OracleConsistent,
    PaperLiteral,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Profile {
    Default,
    Strict,
}

fn run(
    target: &str,
    out_dir: PathBuf,
    variant: Option<Variant>,
    workers: Option<usize>,
    profile: Profile,
) -> Result<bool> {
    let mut scenario = load_scenario(target).with_context(|| format!("loading `{target}`"))?;
    if let Some(v) = variant {
        scenario.variant = match v {
            Variant::OracleConsistent => ResponseVariant::OracleConsistent,
            Variant::PaperLiteral => ResponseVariant::PaperLiteral,
        };
    }
    let options = RunOptions {
        mode: ExecMode::default(),
        profile: match profile {
            Profile::Default => ToleranceProfile::Default,
            Profile::Strict => ToleranceProfile::Strict,
        },
    };
    let result = exec::with_workers(workers, || run_scenario_with(&scenario, &options))?;
    let manifest = write_outputs(&result, &out_dir)?;
    let failed = result.failed();
    println!(
        "{}: {} points, {failed} failed",
        scenario.name,
        result.rows.len()
    );
    for path in [&manifest.csv, &manifest.plot, &manifest.meta] {
        println!("  wrote {}", path.display());
    }
    Ok(failed == 0)
}

fn oracle_check(name: &str, points: usize, workers: Option<usize>) -> Result<bool> {
    let presets = if name == "all" {
        validation_presets()
    } else {
        let names: Vec<&str> = validation_presets().iter().map(|p| p.name).collect();
        vec![validation_preset(name).with_context(|| {
            format!(
                "unknown validation preset `{name}` (known: {})",
                names.join(", ")
            )
        })?]
    };
    let points = points.max(1);
    let jobs: Vec<(usize, f64)> = (0..presets.len())
        .flat_map(|i| {
            (0..points).map(move |k| {
                let f = if points == 1 {
                    1.0
                } else {
                    0.8 + 0.4 * k as f64 / (points - 1) as f64
                };
                (i, f)
            })
        })
        .collect();
    let results = exec::with_workers(workers, || {
        exec::map(ExecMode::default(), &jobs, |&(i, f)| {
            let pre = &presets[i];
            compare_sideband(pre, 1e-3 * pre.e_l, f * pre.params.omega_m)
        })
    });
    let mut ok = true;
    println!("preset,delta_over_omega_m,relative_error,residual,steps");
    for (&(i, f), r) in jobs.iter().zip(results) {
        match r {
            Ok(c) => {
                let err = c.relative_error();
                ok &= err <= 1e-3;
                println!(
                    "{},{f:.3},{err:.3e},{:.3e},{}",
                    presets[i].name, c.demodulated.c.residual, c.stats.accepted_steps
                );
            }
            Err(e) => {
                ok = false;
                println!("{},{f:.3},error: {e},,", presets[i].name);
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            target,
            out_dir,
            variant,
            workers,
            tolerance_profile,
        } => run(&target, out_dir, variant, workers, tolerance_profile),
        Command::ListPresets => {
            for name in preset_names() {
                let s = preset(name).expect("listed preset exists");
                println!("{name:<8} {}", s.title.as_deref().unwrap_or(""));
            }
            Ok(true)
        }
        Command::Validate { config } => load_config_file(&config)
            .and_then(|s| s.validate().map(|_| s))
            .map(|s| {
                println!(
                    "{}: ok ({} x {} points)",
                    s.name,
                    s.series.map_or(1, |x| x.values.len()),
                    s.grid.count
                );
                true
            })
            .with_context(|| format!("validating {}", config.display())),
        Command::OracleCheck {
            preset,
            points,
            workers,
        } => oracle_check(&preset, points, workers),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
