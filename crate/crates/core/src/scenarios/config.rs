use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pde::LaplacianKind;

/// The named scenarios the runner knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    Fig1,
    DispersionScan,
    RegimeCompare,
    Convergence,
    PdePacket,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 5] = [
        ScenarioName::Fig1,
        ScenarioName::DispersionScan,
        ScenarioName::RegimeCompare,
        ScenarioName::Convergence,
        ScenarioName::PdePacket,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::Fig1 => "fig1",
            ScenarioName::DispersionScan => "dispersion_scan",
            ScenarioName::RegimeCompare => "regime_compare",
            ScenarioName::Convergence => "convergence",
            ScenarioName::PdePacket => "pde_packet",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ScenarioName::Fig1 => {
                "free macroscopic pilot wave psi = A(1 - exp(-2it)), analytic vs RK4 over 100 and 1000 Planck times"
            }
            ScenarioName::DispersionScan => {
                "single-mode PDE runs: measured frequency (and growth) vs the analytic dispersion branches"
            }
            ScenarioName::RegimeCompare => {
                "sup distance between full and macroscopic solutions for a list of mass ratios"
            }
            ScenarioName::Convergence => "RK4 temporal order against the free solution",
            ScenarioName::PdePacket => "Gaussian packet evolution with norm, amplitude and width diagnostics",
        }
    }

    /// Keys accepted in the configuration of this scenario.
    pub fn keys(&self) -> &'static [&'static str] {
        match self {
            ScenarioName::Fig1 => &["scenario", "seed", "A", "horizon_tau", "samples_per_period", "dt"],
            ScenarioName::DispersionScan => &[
                "scenario", "seed", "k_values", "r", "v", "n", "L", "dt", "safety", "laplacian",
                "override_unstable",
            ],
            ScenarioName::RegimeCompare => &[
                "scenario", "seed", "mass_ratios", "v", "A", "horizon_tau", "n", "L", "sigma", "dt",
                "safety", "laplacian", "override_unstable",
            ],
            ScenarioName::Convergence => &["scenario", "seed", "dts", "A", "horizon_tau"],
            ScenarioName::PdePacket => &[
                "scenario", "seed", "form", "r", "v", "n", "L", "sigma", "k0", "horizon_tau", "dt",
                "safety", "laplacian", "override_unstable",
            ],
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Self::ALL.iter().map(|n| n.as_str()).collect();
                Error::Config(format!("unknown scenario `{s}` (known: {})", known.join(", ")))
            })
    }
}

/// Equation variant for the packet scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PacketForm {
    #[default]
    Full,
    Microscopic,
    Macroscopic,
    /// Full coefficients with the second time derivative removed.
    Schrodinger,
}

/// Every key a configuration file may contain. Which keys a scenario accepts
/// is listed by [`ScenarioName::keys`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon_tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_per_period: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub safety: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dts: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_ratios: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laplacian: Option<LaplacianKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub override_unstable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<PacketForm>,
}

const FLOAT_KEYS: &[&str] = &[
    "A", "horizon_tau", "r", "v", "L", "dt", "safety", "k_values", "dts", "mass_ratios", "sigma",
    "k0",
];

/// A fully resolved run request.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioName,
    pub params: RawConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub plotscript: bool,
}

impl ScenarioConfig {
    /// Config with every parameter at its default.
    pub fn new(scenario: ScenarioName, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            scenario,
            params: RawConfig::default(),
            output_dir: output_dir.into(),
            seed: 0,
            plotscript: false,
        }
    }

    /// Builds a config from optional file contents plus `key=value` overrides.
    pub fn from_sources(
        scenario: ScenarioName,
        file_contents: Option<&str>,
        overrides: &[String],
        output_dir: impl Into<PathBuf>,
    ) -> Result<Self> {
        let mut table = match file_contents {
            Some(text) => text
                .parse::<toml::Table>()
                .map_err(|e| Error::Config(format!("cannot parse config: {e}")))?,
            None => toml::Table::new(),
        };
        for assignment in overrides {
            let (key, value) = parse_override(assignment)?;
            table.insert(key, value);
        }
        let params = parse_table(table)?;
        Self::from_params(scenario, params, output_dir)
    }

    pub fn from_params(
        scenario: ScenarioName,
        params: RawConfig,
        output_dir: impl Into<PathBuf>,
    ) -> Result<Self> {
        if let Some(named) = &params.scenario {
            let named: ScenarioName = named.parse()?;
            if named != scenario {
                return Err(Error::Config(format!(
                    "config file is for scenario `{named}` but `{scenario}` was requested"
                )));
            }
        }
        let given = present_keys(&params)?;
        let allowed: BTreeSet<&str> = scenario.keys().iter().copied().collect();
        let stray: Vec<_> = given.iter().filter(|k| !allowed.contains(k.as_str())).cloned().collect();
        if !stray.is_empty() {
            return Err(Error::Config(format!(
                "key(s) {} not used by scenario `{scenario}` (accepted: {})",
                stray.join(", "),
                scenario.keys().join(", ")
            )));
        }
        Ok(Self {
            scenario,
            seed: params.seed.unwrap_or(0),
            params,
            output_dir: output_dir.into(),
            plotscript: false,
        })
    }

    pub fn load(
        scenario: ScenarioName,
        path: Option<&Path>,
        overrides: &[String],
        output_dir: impl Into<PathBuf>,
    ) -> Result<Self> {
        let text = path
            .map(|p| {
                std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))
            })
            .transpose()?;
        Self::from_sources(scenario, text.as_deref(), overrides, output_dir)
    }
}

fn parse_override(assignment: &str) -> Result<(String, toml::Value)> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not of the form key=value")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(Error::Config(format!("override `{assignment}` has an empty key")));
    }
    let raw = raw.trim();
    let value = format!("value = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("value"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

fn parse_table(mut table: toml::Table) -> Result<RawConfig> {
    // Integer literals are accepted wherever a real number is expected.
    for key in FLOAT_KEYS {
        if let Some(value) = table.get_mut(*key) {
            promote_integers(value);
        }
    }
    toml::Value::Table(table)
        .try_into()
        .map_err(|e| Error::Config(format!("{e}")))
}

fn promote_integers(value: &mut toml::Value) {
    match value {
        toml::Value::Integer(i) => *value = toml::Value::Float(*i as f64),
        toml::Value::Array(items) => items.iter_mut().for_each(promote_integers),
        _ => {}
    }
}

fn present_keys(params: &RawConfig) -> Result<Vec<String>> {
    match serde_json::to_value(params)? {
        serde_json::Value::Object(map) => Ok(map.keys().cloned().collect()),
        _ => Ok(Vec::new()),
    }
}
