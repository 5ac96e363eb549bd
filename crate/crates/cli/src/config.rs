//! Scenario files (TOML) and their command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use cvqkd_core::{Direction, Protocol};
use serde::Deserialize;

use crate::sweep::Sweep;

/// Environment variable holding the default temperature in °C.
pub const DEFAULT_TEMP_ENV: &str = "CVQKD_DEFAULT_TEMP_C";
pub const DEFAULT_TEMPERATURE_C: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Rate,
    Threshold,
    Distance,
    Env,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rate => "rate",
            Mode::Threshold => "threshold",
            Mode::Distance => "distance",
            Mode::Env => "env",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Reconciliation direction, or the better of the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum DirectionChoice {
    #[serde(rename = "dr", alias = "direct")]
    Dr,
    #[serde(rename = "rr", alias = "reverse")]
    Rr,
    #[serde(rename = "best")]
    Best,
}

impl DirectionChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            DirectionChoice::Dr => "dr",
            DirectionChoice::Rr => "rr",
            DirectionChoice::Best => "best",
        }
    }

    pub fn single(self) -> Option<Direction> {
        match self {
            DirectionChoice::Dr => Some(Direction::Direct),
            DirectionChoice::Rr => Some(Direction::Reverse),
            DirectionChoice::Best => None,
        }
    }
}

impl FromStr for DirectionChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "best" => Ok(DirectionChoice::Best),
            other => match other.parse::<Direction>()? {
                Direction::Direct => Ok(DirectionChoice::Dr),
                Direction::Reverse => Ok(DirectionChoice::Rr),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveFor {
    W,
    ExcessNoise,
    Frequency,
    Transmission,
}

impl FromStr for SolveFor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "w" => Ok(SolveFor::W),
            "excess_noise" | "n" => Ok(SolveFor::ExcessNoise),
            "frequency" | "f" => Ok(SolveFor::Frequency),
            "transmission" | "t" => Ok(SolveFor::Transmission),
            other => Err(format!(
                "unknown solve variable `{other}` (expected w, excess_noise, frequency or transmission)"
            )),
        }
    }
}

/// Channel noise `W`: a number, or `v0` to match the preparation noise.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "NoiseRepr")]
pub enum Noise {
    Value(f64),
    MatchV0,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NoiseRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<NoiseRepr> for Noise {
    type Error = String;

    fn try_from(r: NoiseRepr) -> std::result::Result<Self, String> {
        match r {
            NoiseRepr::Number(x) => Ok(Noise::Value(x)),
            NoiseRepr::Text(s) => s.parse(),
        }
    }
}

impl FromStr for Noise {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("v0") {
            return Ok(Noise::MatchV0);
        }
        s.parse()
            .map(Noise::Value)
            .map_err(|_| format!("`{s}` is neither a number nor `v0`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

/// All scenario settings; every field is optional so files, curves and flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub mode: Option<Mode>,
    pub protocol: Option<Protocol>,
    pub direction: Option<DirectionChoice>,
    pub solve: Option<SolveFor>,
    pub v0: Option<f64>,
    pub frequency_hz: Option<f64>,
    pub wavelength_m: Option<f64>,
    pub temperature_c: Option<f64>,
    pub w: Option<Noise>,
    pub excess_noise: Option<f64>,
    pub t: Option<f64>,
    pub mu: Option<f64>,
    pub alpha_db_per_m: Option<f64>,
    pub alpha_db_per_km: Option<f64>,
    pub sweep: Option<Sweep>,
    pub output: Option<Output>,
    #[serde(default)]
    pub curves: Vec<Scenario>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        Scenario {
            $($field: $top.$field.clone().or_else(|| $base.$field.clone()),)*
            output: match (&$base.output, &$top.output) {
                (Some(b), Some(t)) => Some(Output {
                    format: t.format.or(b.format),
                    path: t.path.clone().or_else(|| b.path.clone()),
                }),
                (b, t) => t.clone().or_else(|| b.clone()),
            },
            curves: Vec::new(),
        }
    };
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text)?;
        if s.curves.iter().any(|c| !c.curves.is_empty()) {
            bail!("curves: nested `curves` are not allowed");
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in scenario file {}", path.display()))
    }

    /// `top` wins wherever it sets a value; curves are dropped.
    pub fn overlay(&self, top: &Scenario) -> Scenario {
        overlay!(
            self,
            top,
            mode,
            protocol,
            direction,
            solve,
            v0,
            frequency_hz,
            wavelength_m,
            temperature_c,
            w,
            excess_noise,
            t,
            mu,
            alpha_db_per_m,
            alpha_db_per_km,
            sweep
        )
    }

    /// One fully layered scenario per curve (`base ⊕ curve ⊕ flags`), or just `base ⊕ flags`.
    pub fn expand(&self, flags: &Scenario) -> Vec<Scenario> {
        if self.curves.is_empty() {
            vec![self.overlay(flags)]
        } else {
            self.curves
                .iter()
                .map(|c| self.overlay(c).overlay(flags))
                .collect()
        }
    }

    pub fn format(&self) -> Format {
        self.output
            .as_ref()
            .and_then(|o| o.format)
            .unwrap_or_default()
    }

    pub fn output_path(&self) -> Option<&Path> {
        self.output.as_ref().and_then(|o| o.path.as_deref())
    }
}

/// Default temperature in °C, from the environment or 15 °C.
pub fn default_temperature_c() -> Result<f64> {
    match std::env::var(DEFAULT_TEMP_ENV) {
        Ok(s) => {
            let t: f64 = s
                .trim()
                .parse()
                .with_context(|| format!("{DEFAULT_TEMP_ENV}=`{s}` is not a number"))?;
            Ok(t)
        }
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_TEMPERATURE_C),
        Err(e) => bail!("{DEFAULT_TEMP_ENV}: {e}"),
    }
}
