//! Built-in scenarios.
//!
//! The `fig2*` and `fig3*` sets use κ = ω_m/10 and a pump amplitude
//! `E_l/2π = 2 MHz`; the rest use the reference operating point
//! (κ/2π = 215 kHz) and pump powers converted at 1064 nm. All readouts use a two-port cavity
//! (escape efficiency 1/2), so an empty cavity shows a Lorentzian dip.

use std::path::Path;

use super::config::load_config_file;
use super::{Grid, Observable, ParamsHz, Pump, Quantity, Scenario, Series};
use crate::error::Result;
use crate::response::ResponseVariant;

const NAMES: [&str; 11] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig4a", "fig4b", "fig5", "fig6", "fig7",
];

pub fn preset_names() -> &'static [&'static str] {
    &NAMES
}

fn spectrum() -> Grid {
    Grid {
        min: 5e6,
        max: 15e6,
        count: 801,
    }
}

fn power_axis() -> Grid {
    Grid {
        min: 0.1e-6,
        max: 20e-6,
        count: 60,
    }
}

fn fig2_params(g0: f64) -> ParamsHz {
    ParamsHz {
        kappa: 1e6,
        g0,
        g_ac: 0.0,
        escape_efficiency: 0.5,
        ..ParamsHz::reference_point()
    }
}

fn hybrid_params() -> ParamsHz {
    ParamsHz {
        escape_efficiency: 0.5,
        ..ParamsHz::reference_point()
    }
}

fn scenario(
    name: &str,
    title: &str,
    params: ParamsHz,
    pump: Pump,
    axis: Quantity,
    grid: Grid,
) -> Scenario {
    Scenario {
        name: name.into(),
        title: Some(title.into()),
        params,
        pump,
        probe_hz: None,
        delta_hz: None,
        axis,
        grid,
        series: None,
        outputs: vec![Observable::TSq, Observable::Phi],
        variant: ResponseVariant::default(),
    }
}

pub fn preset(name: &str) -> Option<Scenario> {
    let fig2 = |g0: f64| {
        scenario(
            name,
            &format!("Probe transmission, g0/2pi = {} MHz", g0 / 1e6),
            fig2_params(g0),
            Pump::AmplitudeHz(2e6),
            Quantity::Delta,
            spectrum(),
        )
    };
    let six_uw = Pump::PowerW(6e-6);
    let s = match name {
        "fig2a" => fig2(0.0),
        "fig2b" => fig2(0.5e6),
        "fig2c" => fig2(0.8e6),
        "fig2d" => fig2(1.2e6),
        "fig3a" => Scenario {
            outputs: vec![Observable::Phi],
            title: Some("Probe phase without the atom".into()),
            ..fig2(1.2e6)
        },
        "fig3b" => Scenario {
            outputs: vec![Observable::TauG],
            ..scenario(
                name,
                "Group delay against pump power without the atom",
                fig2_params(1.2e6),
                six_uw,
                Quantity::PumpPower,
                power_axis(),
            )
        },
        "fig4a" => Scenario {
            series: Some(Series {
                quantity: Quantity::GAc,
                values: vec![0.0, 1.2e6, 1.4e6, 1.6e6],
            }),
            ..scenario(
                name,
                "Probe transmission with the atom on the anti-Stokes sideband",
                hybrid_params(),
                six_uw,
                Quantity::Delta,
                spectrum(),
            )
        },
        "fig4b" => Scenario {
            outputs: vec![Observable::Phi],
            ..scenario(
                name,
                "Probe phase, g_ac/2pi = 1.2 MHz",
                ParamsHz {
                    g_ac: 1.2e6,
                    ..hybrid_params()
                },
                six_uw,
                Quantity::Delta,
                spectrum(),
            )
        },
        "fig5" => Scenario {
            outputs: vec![Observable::TauG],
            series: Some(Series {
                quantity: Quantity::GAc,
                values: vec![4e6, 8e6],
            }),
            ..scenario(
                name,
                "Group delay at delta = omega_m, atom at +omega_m",
                hybrid_params(),
                six_uw,
                Quantity::PumpPower,
                power_axis(),
            )
        },
        "fig6" => Scenario {
            outputs: vec![Observable::Phi],
            series: Some(Series {
                quantity: Quantity::DeltaA,
                values: vec![10e6, -10e6],
            }),
            ..scenario(
                name,
                "Probe phase for atomic detuning +omega_m and -omega_m",
                ParamsHz {
                    g_ac: 1.6e6,
                    g0: 0.1e6,
                    ..hybrid_params()
                },
                six_uw,
                Quantity::Delta,
                spectrum(),
            )
        },
        "fig7" => Scenario {
            outputs: vec![Observable::TauG],
            series: Some(Series {
                quantity: Quantity::Kappa,
                values: vec![107.5e3, 215e3, 322.5e3],
            }),
            ..scenario(
                name,
                "Group delay at delta = omega_m, atom at -omega_m",
                ParamsHz {
                    g_ac: 8e6,
                    delta_a: -10e6,
                    ..hybrid_params()
                },
                six_uw,
                Quantity::PumpPower,
                power_axis(),
            )
        },
        _ => return None,
    };
    Some(s)
}

/// A preset name, or else a path to a config file.
pub fn load_scenario(arg: &str) -> Result<Scenario> {
    match preset(arg) {
        Some(s) => Ok(s),
        None => load_config_file(Path::new(arg)),
    }
}
