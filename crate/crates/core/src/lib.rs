//! Pump-probe response of a hybrid optomechanical cavity: a mechanical
//! mirror and a two-level atom coupled to one driven cavity mode.
//!
//! The closed-form linear response ([`response`]) gives probe transmission
//! and phase; [`dispersion`] turns phase into group delay; [`oracle`]
//! integrates the mean-field equations in time to check both; [`sweep`]
//! runs named scenarios and writes CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` rejects NaN too

pub mod cubic;
pub mod dispersion;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod params;
pub mod response;
pub mod steady;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::ExecMode;
pub use params::{DriveParams, SystemParams, ValidationReport};
pub use response::{ProbeResponse, ResponseVariant};
pub use steady::SteadyState;
