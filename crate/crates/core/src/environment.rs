//! Blackbody preparation noise and free-space attenuation.

use serde::Serialize;

use crate::error::{ensure, Result};

/// Planck constant, J·s (exact SI value).
pub const PLANCK: f64 = 6.62607015e-34;
/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;
/// 0 °C in kelvin.
pub const ZERO_CELSIUS: f64 = 273.15;
/// 15 °C.
pub const DEFAULT_TEMPERATURE_K: f64 = 288.15;

/// Above this value of `hf/(k_B t)` the thermal occupation is treated as zero.
const OCCUPATION_CUTOFF: f64 = 700.0;

pub fn celsius_to_kelvin(c: f64) -> f64 {
    c + ZERO_CELSIUS
}

/// A bosonic mode of frequency `f` in a thermal bath at temperature `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalEnvironment {
    temperature: f64,
    frequency: f64,
}

impl ThermalEnvironment {
    pub fn new(temperature_k: f64, frequency_hz: f64) -> Result<Self> {
        ensure(
            temperature_k > 0.0 && temperature_k.is_finite(),
            "temperature",
            temperature_k,
            "> 0 K",
        )?;
        ensure(
            frequency_hz > 0.0 && frequency_hz.is_finite(),
            "frequency",
            frequency_hz,
            "> 0 Hz",
        )?;
        Ok(Self {
            temperature: temperature_k,
            frequency: frequency_hz,
        })
    }

    pub fn from_wavelength(temperature_k: f64, wavelength_m: f64) -> Result<Self> {
        ensure(
            wavelength_m > 0.0 && wavelength_m.is_finite(),
            "wavelength",
            wavelength_m,
            "> 0 m",
        )?;
        Self::new(temperature_k, SPEED_OF_LIGHT / wavelength_m)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency
    }

    /// Mean photon number `n̄ = 1/(exp(hf/k_B t) - 1)`.
    pub fn mean_photons(&self) -> f64 {
        mean_photons(self.frequency, self.temperature)
    }

    /// Preparation noise `V0 = 2 n̄ + 1`.
    pub fn v0(&self) -> f64 {
        2.0 * self.mean_photons() + 1.0
    }
}

fn mean_photons(frequency: f64, temperature: f64) -> f64 {
    let x = PLANCK * frequency / (BOLTZMANN * temperature);
    if x > OCCUPATION_CUTOFF {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

pub fn v0_from_environment(env: &ThermalEnvironment) -> f64 {
    env.v0()
}

/// `V0` at frequency `f` (Hz) and temperature `t` (K), without validation.
pub(crate) fn v0_at(frequency: f64, temperature: f64) -> f64 {
    2.0 * mean_photons(frequency, temperature) + 1.0
}

/// Loss of `alpha` dB per `unit_length` meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttenuationModel {
    alpha: f64,
    unit_length: f64,
}

impl AttenuationModel {
    pub fn new(alpha_db: f64, unit_length_m: f64) -> Result<Self> {
        ensure(
            alpha_db > 0.0 && alpha_db.is_finite(),
            "alpha",
            alpha_db,
            "> 0 dB",
        )?;
        ensure(
            unit_length_m > 0.0 && unit_length_m.is_finite(),
            "unit_length",
            unit_length_m,
            "> 0 m",
        )?;
        Ok(Self {
            alpha: alpha_db,
            unit_length: unit_length_m,
        })
    }

    pub fn db_per_meter(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn db_per_km(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1000.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn unit_length(&self) -> f64 {
        self.unit_length
    }

    pub fn alpha_db_per_m(&self) -> f64 {
        self.alpha / self.unit_length
    }
}

/// Distance in meters over which the channel transmission drops to `t`.
pub fn distance_from_transmission(t: f64, att: &AttenuationModel) -> Result<f64> {
    ensure(t > 0.0 && t <= 1.0, "T", t, "0 < T <= 1")?;
    Ok(-10.0 * t.log10() / att.alpha * att.unit_length)
}

/// Transmission after `d` meters.
pub fn transmission_from_distance(d: f64, att: &AttenuationModel) -> Result<f64> {
    ensure(d >= 0.0 && d.is_finite(), "distance", d, ">= 0 m")?;
    Ok(10f64.powf(-att.alpha * (d / att.unit_length) / 10.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn optical_limit_is_vacuum() {
        let env = ThermalEnvironment::new(DEFAULT_TEMPERATURE_K, 1e18).unwrap();
        assert_eq!(env.v0(), 1.0);
        let env = ThermalEnvironment::from_wavelength(DEFAULT_TEMPERATURE_K, 1550e-9).unwrap();
        assert!(env.v0() - 1.0 < 1e-12);
    }

    #[test]
    fn infrared_noise() {
        let env = ThermalEnvironment::new(DEFAULT_TEMPERATURE_K, 1.2e13).unwrap();
        assert_relative_eq!(env.v0(), 1.3135, epsilon = 1e-4);
        let env = ThermalEnvironment::from_wavelength(DEFAULT_TEMPERATURE_K, 12e-6).unwrap();
        assert_relative_eq!(env.v0(), 1.0317, epsilon = 1e-4);
        assert_relative_eq!(env.wavelength(), 12e-6, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_environment() {
        assert!(ThermalEnvironment::new(0.0, 1e12).is_err());
        assert!(ThermalEnvironment::new(300.0, -1.0).is_err());
        assert!(ThermalEnvironment::from_wavelength(300.0, 0.0).is_err());
        assert!(AttenuationModel::db_per_meter(0.0).is_err());
    }

    #[test]
    fn distances() {
        let ir = AttenuationModel::db_per_meter(9.7).unwrap();
        assert_eq!(distance_from_transmission(1.0, &ir).unwrap(), 0.0);
        assert_relative_eq!(
            distance_from_transmission(0.4, &ir).unwrap(),
            0.4102,
            epsilon = 1e-4
        );
        assert_relative_eq!(
            distance_from_transmission(0.6, &ir).unwrap(),
            0.2287,
            epsilon = 1e-4
        );
        let km = AttenuationModel::db_per_km(0.53).unwrap();
        // 10 dB over 10/0.53 km
        assert_relative_eq!(
            distance_from_transmission(0.1, &km).unwrap(),
            1e4 / 0.53,
            max_relative = 1e-14
        );
        assert!(distance_from_transmission(0.0, &km).is_err());
        assert!(transmission_from_distance(-1.0, &km).is_err());
        assert_eq!(transmission_from_distance(0.0, &km).unwrap(), 1.0);
    }
}
