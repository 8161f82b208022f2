//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) [`ExecMode::Parallel`] fans work out
//! over the current rayon pool. Without it both modes run sequentially.
//! Output order always follows input order.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

impl fmt::Display for ExecMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExecMode::Sequential => "sequential",
            ExecMode::Parallel => "parallel",
        })
    }
}

impl FromStr for ExecMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequential" | "seq" => Ok(ExecMode::Sequential),
            "parallel" | "par" => Ok(ExecMode::Parallel),
            other => Err(format!("unknown execution mode `{other}`")),
        }
    }
}

pub fn map<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Run `f` on a pool with `workers` threads (parallel builds only).
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = workers {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
        {
            return pool.install(f);
        }
    }
    let _ = workers;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..10_000).collect();
        let seq = map(ExecMode::Sequential, &xs, |x| x * x);
        let par = map(ExecMode::Parallel, &xs, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(
            with_workers(Some(3), || map(ExecMode::Parallel, &xs, |x| x + 1))[9_999],
            10_000
        );
    }

    #[test]
    fn parse_modes() {
        assert_eq!("parallel".parse::<ExecMode>().unwrap(), ExecMode::Parallel);
        assert_eq!("seq".parse::<ExecMode>().unwrap(), ExecMode::Sequential);
        assert!("gpu".parse::<ExecMode>().is_err());
    }
}
