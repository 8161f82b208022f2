//! Flat `key = value` scenario files.
//!
//! Frequencies are cyclic and carry an `_hz` suffix, powers carry `_w`.
//! Lines starting with `#` are comments. Unknown keys are rejected so a
//! misspelt key cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::path::Path;

use super::{Grid, Observable, ParamsHz, Pump, Quantity, Scenario, Series};
use crate::error::{Error, Result};
use crate::response::ResponseVariant;

/// Every accepted key. Axis and series keys take `_w` instead of `_hz`
/// when the swept quantity is the pump power.
pub const CONFIG_KEYS: &[&str] = &[
    "name",
    "title",
    "omega_m_hz",
    "gamma_m_hz",
    "kappa_hz",
    "delta_c_hz",
    "g0_hz",
    "g_ac_hz",
    "gamma_a_hz",
    "delta_a_hz",
    "sigma_z_ss",
    "lambda_l",
    "escape_efficiency",
    "e_l_hz",
    "p_l_w",
    "e_p_hz",
    "delta_hz",
    "axis",
    "axis_min_hz",
    "axis_min_w",
    "axis_max_hz",
    "axis_max_w",
    "axis_count",
    "series",
    "series_values_hz",
    "series_values_w",
    "outputs",
    "variant",
];

const SUFFIXES: [&str; 4] = ["_hz", "_w", "_m", "_s"];

fn strip_suffix(key: &str) -> &str {
    SUFFIXES
        .iter()
        .find_map(|s| key.strip_suffix(s))
        .unwrap_or(key)
}

/// Classify a key that is not in [`CONFIG_KEYS`].
fn unknown_key_error(key: &str) -> Error {
    let base = strip_suffix(key);
    let sibling = CONFIG_KEYS.iter().find(|k| strip_suffix(k) == base);
    match sibling {
        Some(known) => Error::Config(format!(
            "unit-suffix mismatch for `{key}`: expected `{known}`"
        )),
        None => Error::Config(format!("unknown key `{key}`")),
    }
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, (usize, String)>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let key = k.trim().to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(unknown_key_error(&key));
        }
        if map
            .insert(key.clone(), (i + 1, v.trim().to_string()))
            .is_some()
        {
            return Err(Error::Config(format!(
                "line {}: duplicate key `{key}`",
                i + 1
            )));
        }
    }
    Ok(map)
}

struct Entries(BTreeMap<String, (usize, String)>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.0.remove(key)
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key)
            .map(|(line, v)| {
                v.parse::<f64>().map_err(|_| {
                    Error::Config(format!("line {line}: `{key}` expects a number, got `{v}`"))
                })
            })
            .transpose()
    }

    fn required_number(&mut self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    /// Reject the keys of the wrong unit family, e.g. `axis_min_hz` on a
    /// power axis.
    fn forbid(&mut self, key: &str, expected: &str) -> Result<()> {
        match self.take(key) {
            Some((line, _)) => Err(Error::Config(format!(
                "line {line}: unit-suffix mismatch for `{key}`: expected `{expected}`"
            ))),
            None => Ok(()),
        }
    }

    fn suffixed(&mut self, stem: &str, q: Quantity) -> Result<Option<f64>> {
        let (right, wrong) = match q.unit_suffix() {
            "_w" => (format!("{stem}_w"), format!("{stem}_hz")),
            _ => (format!("{stem}_hz"), format!("{stem}_w")),
        };
        self.forbid(&wrong, &right)?;
        self.number(&right)
    }
}

pub fn load_config(text: &str) -> Result<Scenario> {
    let mut e = Entries(parse_entries(text)?);
    let name = e
        .take("name")
        .map(|(_, v)| v)
        .ok_or_else(|| Error::Config("missing required key `name`".into()))?;
    let title = e.take("title").map(|(_, v)| v);

    let mut params = ParamsHz::reference_point();
    let fields: [(&str, &mut f64); 11] = [
        ("omega_m_hz", &mut params.omega_m),
        ("gamma_m_hz", &mut params.gamma_m),
        ("kappa_hz", &mut params.kappa),
        ("delta_c_hz", &mut params.delta_c),
        ("g0_hz", &mut params.g0),
        ("g_ac_hz", &mut params.g_ac),
        ("gamma_a_hz", &mut params.gamma_a),
        ("delta_a_hz", &mut params.delta_a),
        ("sigma_z_ss", &mut params.sigma_z_ss),
        ("lambda_l", &mut params.lambda_l),
        ("escape_efficiency", &mut params.escape_efficiency),
    ];
    for (key, slot) in fields {
        if let Some(v) = e.number(key)? {
            *slot = v;
        }
    }

    let pump = match (e.number("e_l_hz")?, e.number("p_l_w")?) {
        (Some(a), None) => Some(Pump::AmplitudeHz(a)),
        (None, Some(p)) => Some(Pump::PowerW(p)),
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give either `e_l_hz` or `p_l_w`, not both".into(),
            ))
        }
        (None, None) => None,
    };
    let probe_hz = e.number("e_p_hz")?;
    let delta_hz = e.number("delta_hz")?;

    let axis: Quantity = e
        .take("axis")
        .ok_or_else(|| Error::Config("missing required key `axis`".into()))?
        .1
        .parse()?;
    let suffix = axis.unit_suffix();
    let min = e
        .suffixed("axis_min", axis)?
        .ok_or_else(|| Error::Config(format!("missing required key `axis_min{suffix}`")))?;
    let max = e
        .suffixed("axis_max", axis)?
        .ok_or_else(|| Error::Config(format!("missing required key `axis_max{suffix}`")))?;
    let count_f = e.required_number("axis_count")?;
    if !(count_f >= 0.0 && count_f.fract() == 0.0 && count_f <= u32::MAX as f64) {
        return Err(Error::Config(format!(
            "`axis_count` must be a non-negative integer, got {count_f}"
        )));
    }
    let grid = Grid {
        min,
        max,
        count: count_f as usize,
    };

    let series = match e.take("series") {
        Some((_, q)) => {
            let quantity: Quantity = q.parse()?;
            let (right, wrong) = match quantity.unit_suffix() {
                "_w" => ("series_values_w", "series_values_hz"),
                _ => ("series_values_hz", "series_values_w"),
            };
            e.forbid(wrong, right)?;
            let (line, list) = e
                .take(right)
                .ok_or_else(|| Error::Config(format!("missing required key `{right}`")))?;
            let values = list
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Error::Config(format!("line {line}: bad series value `{}`", s.trim()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Series { quantity, values })
        }
        None => {
            for key in ["series_values_hz", "series_values_w"] {
                if e.take(key).is_some() {
                    return Err(Error::Config(format!("`{key}` given without `series`")));
                }
            }
            None
        }
    };

    // a swept pump power overrides the pump at every point
    let swept = axis == Quantity::PumpPower
        || series
            .as_ref()
            .is_some_and(|s| s.quantity == Quantity::PumpPower);
    let pump = match pump {
        Some(p) => p,
        None if swept => Pump::PowerW(0.0),
        None => {
            return Err(Error::Config(
                "missing required key `e_l_hz` (or `p_l_w`)".into(),
            ))
        }
    };

    let outputs = match e.take("outputs") {
        Some((_, list)) => {
            let mut outs = list
                .split(',')
                .map(|s| s.trim().parse::<Observable>())
                .collect::<Result<Vec<_>>>()?;
            outs.sort();
            outs.dedup();
            outs
        }
        None => vec![Observable::TSq, Observable::Phi],
    };
    let variant = match e.take("variant") {
        Some((_, v)) => v.parse::<ResponseVariant>()?,
        None => ResponseVariant::default(),
    };

    if let Some(key) = e.0.keys().next() {
        return Err(Error::Config(format!("key `{key}` does not apply here")));
    }

    let scenario = Scenario {
        name,
        title,
        params,
        pump,
        probe_hz,
        delta_hz,
        axis,
        grid,
        series,
        outputs,
        variant,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_config_file(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_config(&text)
}

/// Fully resolved text form; `load_config(&serialize(s)) == s`.
pub fn serialize(s: &Scenario) -> String {
    let mut out = String::new();
    let mut put = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    put("name", s.name.clone());
    if let Some(t) = &s.title {
        put("title", t.clone());
    }
    let p = &s.params;
    for (k, v) in [
        ("omega_m_hz", p.omega_m),
        ("gamma_m_hz", p.gamma_m),
        ("kappa_hz", p.kappa),
        ("delta_c_hz", p.delta_c),
        ("g0_hz", p.g0),
        ("g_ac_hz", p.g_ac),
        ("gamma_a_hz", p.gamma_a),
        ("delta_a_hz", p.delta_a),
        ("sigma_z_ss", p.sigma_z_ss),
        ("lambda_l", p.lambda_l),
        ("escape_efficiency", p.escape_efficiency),
    ] {
        put(k, format!("{v:?}"));
    }
    match s.pump {
        Pump::AmplitudeHz(a) => put("e_l_hz", format!("{a:?}")),
        Pump::PowerW(w) => put("p_l_w", format!("{w:?}")),
    }
    if let Some(v) = s.probe_hz {
        put("e_p_hz", format!("{v:?}"));
    }
    if let Some(v) = s.delta_hz {
        put("delta_hz", format!("{v:?}"));
    }
    let suffix = s.axis.unit_suffix();
    put("axis", s.axis.name().into());
    put(&format!("axis_min{suffix}"), format!("{:?}", s.grid.min));
    put(&format!("axis_max{suffix}"), format!("{:?}", s.grid.max));
    put("axis_count", s.grid.count.to_string());
    if let Some(series) = &s.series {
        put("series", series.quantity.name().into());
        let values: Vec<String> = series.values.iter().map(|v| format!("{v:?}")).collect();
        put(
            &format!("series_values{}", series.quantity.unit_suffix()),
            values.join(", "),
        );
    }
    let outs: Vec<&str> = s.outputs.iter().map(|o| o.name()).collect();
    put("outputs", outs.join(", "));
    put("variant", s.variant.to_string());
    out
}
