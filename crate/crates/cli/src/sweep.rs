//! One-dimensional parameter sweeps: `variable:from:to:points[:log]`.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    T,
    V0,
    W,
    ExcessNoise,
    #[serde(alias = "frequency_hz")]
    Frequency,
    #[serde(alias = "wavelength_m")]
    Wavelength,
    Mu,
    TemperatureC,
}

impl Variable {
    pub fn as_str(self) -> &'static str {
        match self {
            Variable::T => "t",
            Variable::V0 => "v0",
            Variable::W => "w",
            Variable::ExcessNoise => "excess_noise",
            Variable::Frequency => "frequency",
            Variable::Wavelength => "wavelength",
            Variable::Mu => "mu",
            Variable::TemperatureC => "temperature_c",
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variable {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "t" => Variable::T,
            "v0" => Variable::V0,
            "w" => Variable::W,
            "excess_noise" => Variable::ExcessNoise,
            "frequency" | "frequency_hz" => Variable::Frequency,
            "wavelength" | "wavelength_m" => Variable::Wavelength,
            "mu" => Variable::Mu,
            "temperature_c" => Variable::TemperatureC,
            other => bail!(
                "unknown sweep variable `{other}` (expected t, v0, w, excess_noise, frequency, wavelength, mu or temperature_c)"
            ),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// A validated sweep over `points` values from `from` to `to`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "SweepRepr")]
pub struct Sweep {
    pub variable: Variable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: Scale,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SweepRepr {
    Text(String),
    Table {
        variable: Variable,
        from: f64,
        to: f64,
        points: usize,
        #[serde(default)]
        scale: Scale,
    },
}

impl TryFrom<SweepRepr> for Sweep {
    type Error = anyhow::Error;

    fn try_from(repr: SweepRepr) -> Result<Self> {
        match repr {
            SweepRepr::Text(s) => s.parse(),
            SweepRepr::Table {
                variable,
                from,
                to,
                points,
                scale,
            } => Sweep::new(variable, from, to, points, scale),
        }
    }
}

impl Sweep {
    pub fn new(
        variable: Variable,
        from: f64,
        to: f64,
        points: usize,
        scale: Scale,
    ) -> Result<Self> {
        ensure!(
            from.is_finite() && to.is_finite(),
            "sweep: bounds must be finite"
        );
        ensure!(
            from < to,
            "sweep: `from` ({from}) must be below `to` ({to})"
        );
        ensure!(
            points >= 2,
            "sweep: `points` must be at least 2 (got {points})"
        );
        if scale == Scale::Log {
            ensure!(
                from > 0.0,
                "sweep: log scale needs a positive `from` (got {from})"
            );
        }
        Ok(Self {
            variable,
            from,
            to,
            points,
            scale,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.from;
                }
                if i + 1 == self.points {
                    return self.to;
                }
                let s = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.from + (self.to - self.from) * s,
                    Scale::Log => {
                        let (a, b) = (self.from.log10(), self.to.log10());
                        10f64.powf(a + (b - a) * s)
                    }
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        ensure!(
            parts.len() == 4 || parts.len() == 5,
            "sweep `{s}`: expected variable:from:to:points[:log]"
        );
        let variable = parts[0].parse()?;
        let from = parts[1]
            .parse()
            .with_context(|| format!("sweep `{s}`: bad `from`"))?;
        let to = parts[2]
            .parse()
            .with_context(|| format!("sweep `{s}`: bad `to`"))?;
        let points = parts[3]
            .parse()
            .with_context(|| format!("sweep `{s}`: bad `points`"))?;
        let scale = match parts.get(4) {
            None | Some(&"lin") | Some(&"linear") => Scale::Linear,
            Some(&"log") => Scale::Log,
            Some(other) => bail!("sweep `{s}`: unknown scale `{other}` (expected linear or log)"),
        };
        Sweep::new(variable, from, to, points, scale)
    }
}
