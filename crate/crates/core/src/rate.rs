//! Types shared by the one-way and two-way rate engines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance below zero accepted for a computed Holevo bound.
pub const HOLEVO_TOL: f64 = 1e-9;

/// Which variable the classical post-processing is anchored to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Direct reconciliation: Bob estimates Alice's variable.
    #[serde(rename = "dr")]
    Direct,
    /// Reverse reconciliation: Alice estimates Bob's variable.
    #[serde(rename = "rr")]
    Reverse,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Direct, Direction::Reverse];

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Direct => "dr",
            Direction::Reverse => "rr",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "dr" | "direct" => Ok(Direction::Direct),
            "rr" | "reverse" => Ok(Direction::Reverse),
            other => Err(format!(
                "unknown reconciliation direction `{other}` (expected dr or rr)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    #[serde(rename = "oneway")]
    OneWay,
    /// Two-way protocol in the ON configuration.
    #[serde(rename = "twoway")]
    TwoWay,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::OneWay => "oneway",
            Protocol::TwoWay => "twoway",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "oneway" | "1way" => Ok(Protocol::OneWay),
            "twoway" | "2way" => Ok(Protocol::TwoWay),
            other => Err(format!(
                "unknown protocol `{other}` (expected oneway or twoway)"
            )),
        }
    }
}

/// Mutual information, Holevo bound and secret-key rate, in bits per round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateBreakdown {
    pub mutual_info: f64,
    pub holevo: f64,
    pub rate: f64,
    pub direction: Direction,
}

impl RateBreakdown {
    pub fn new(direction: Direction, mutual_info: f64, holevo: f64) -> Result<Self> {
        if holevo < -HOLEVO_TOL {
            return Err(Error::Numeric(format!("negative Holevo bound {holevo:e}")));
        }
        Ok(Self {
            mutual_info,
            holevo,
            rate: mutual_info - holevo,
            direction,
        })
    }
}

/// A protocol together with a reconciliation direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scheme {
    pub protocol: Protocol,
    pub direction: Direction,
}

impl Scheme {
    pub const ONEWAY_DR: Scheme = Scheme::new(Protocol::OneWay, Direction::Direct);
    pub const ONEWAY_RR: Scheme = Scheme::new(Protocol::OneWay, Direction::Reverse);
    pub const TWOWAY_DR: Scheme = Scheme::new(Protocol::TwoWay, Direction::Direct);
    pub const TWOWAY_RR: Scheme = Scheme::new(Protocol::TwoWay, Direction::Reverse);

    pub const fn new(protocol: Protocol, direction: Direction) -> Self {
        Self {
            protocol,
            direction,
        }
    }

    /// Asymptotic (infinite modulation) secret-key rate.
    pub fn asymptotic_rate(self, v0: f64, t: f64, w: f64) -> Result<f64> {
        use crate::{oneway, twoway};
        match (self.protocol, self.direction) {
            (Protocol::OneWay, Direction::Direct) => oneway::rate_dr_asym(v0, t, w),
            (Protocol::OneWay, Direction::Reverse) => oneway::rate_rr_asym(v0, t, w),
            (Protocol::TwoWay, Direction::Direct) => twoway::rate_dr_asym(v0, t, w),
            (Protocol::TwoWay, Direction::Reverse) => twoway::rate_rr_asym(v0, t, w),
        }
    }

    /// Finite-modulation rate from the full covariance-matrix calculation.
    pub fn numeric_rate(self, v0: f64, t: f64, w: f64, modulation: f64) -> Result<RateBreakdown> {
        use crate::{oneway, twoway};
        match self.protocol {
            Protocol::OneWay => oneway::rate_numeric(
                &oneway::OneWayParams::new(v0, modulation, t, w)?,
                self.direction,
            ),
            Protocol::TwoWay => twoway::rate_numeric(
                &twoway::TwoWayParams::new(v0, modulation, t, w)?,
                self.direction,
            ),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.protocol, self.direction)
    }
}
