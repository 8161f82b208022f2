use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("steady-state solver failed: {0}")]
    Solver(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("phase grid too coarse at index {index}: unwrapped increment {increment:.6} rad")]
    GridTooCoarse { index: usize, increment: f64 },

    #[error("need at least {needed} points, got {got}")]
    Arity { needed: usize, got: usize },

    #[error("group delay did not converge: last estimates {previous:e} s and {last:e} s")]
    Convergence { previous: f64, last: f64 },

    #[error("trajectory diverged at t = {time:e} s ({variable} exceeded {limit:e})")]
    Instability {
        time: f64,
        variable: &'static str,
        limit: f64,
    },

    #[error(
        "step size underflow at t = {time:e} s (h = {step:e}); the system is too stiff for the explicit integrator, use a relaxed-gamma_m preset"
    )]
    Stiffness { time: f64, step: f64 },

    #[error("demodulation window misaligned: covers {coverage} beat periods, expected {expected}")]
    Alignment { coverage: f64, expected: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("scenario `{0}` failed at every axis point")]
    Scenario(String),

    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
