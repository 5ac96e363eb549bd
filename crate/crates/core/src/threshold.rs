//! Security thresholds: the parameter values at which a secret-key rate vanishes.
//!
//! All solvers use bracketed bisection. Rates are assumed monotone in the
//! solved variable (decreasing in `W`, increasing in `T` and in frequency).

use serde::Serialize;

use crate::environment::v0_at;
use crate::error::{check_transmission, check_variance, ensure, Error, Result};
use crate::oneway::excess_noise_from_w;
use crate::rate::{Direction, Protocol, Scheme};

/// Largest `W` probed before a threshold is reported as unbounded.
pub const MAX_W: f64 = 1e12;
/// Frequency search window, Hz.
pub const MIN_FREQUENCY: f64 = 1e9;
pub const MAX_FREQUENCY: f64 = 1e16;
/// Transmission search window.
pub const MIN_TRANSMISSION: f64 = 1e-9;
pub const MAX_TRANSMISSION: f64 = 1.0 - 1e-9;

/// Outcome of a threshold search over a finite window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Threshold {
    /// The rate changes sign at this value.
    Root(f64),
    /// The rate is non-negative over the whole window.
    SecureEverywhere,
    /// The rate is negative over the whole window.
    InsecureEverywhere,
}

impl Threshold {
    pub fn root(self) -> Option<f64> {
        match self {
            Threshold::Root(x) => Some(x),
            _ => None,
        }
    }

    /// Picks whichever threshold tolerates the lower value of the solved variable.
    pub fn lower(self, other: Threshold) -> Threshold {
        use Threshold::*;
        match (self, other) {
            (SecureEverywhere, _) | (_, SecureEverywhere) => SecureEverywhere,
            (InsecureEverywhere, x) | (x, InsecureEverywhere) => x,
            (Root(a), Root(b)) => Root(a.min(b)),
        }
    }
}

/// Bisection on a bracket `[lo, hi]` whose endpoints have opposite signs (or a zero).
///
/// Stops when the bracket is narrower than `xtol` relative to its magnitude,
/// and returns the endpoint with the smaller residual.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol * lo.abs().max(hi.abs()).max(1.0) || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

const XTOL: f64 = 1e-14;

/// Channel-noise threshold `W*` at which `rate(v0, t, W*) = 0`.
///
/// Returns `1` when the rate is already non-positive at `W = 1` (no tolerable noise).
pub fn solve_threshold_w<F>(rate: F, v0: f64, t: f64) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    check_variance("V0", v0)?;
    check_transmission(t)?;
    let at = |w: f64| rate(v0, t, w);
    if at(1.0)? <= 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while at(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_W {
            return Err(Error::Unbounded(lo));
        }
    }
    bisect(at, lo, hi, XTOL)
}

/// Excess-noise threshold `N* = (W* - 1)(1 - T)/T`.
pub fn solve_threshold_excess_noise<F>(rate: F, v0: f64, t: f64) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    excess_noise_from_w(solve_threshold_w(rate, v0, t)?, t)
}

/// Transmission threshold `T*` for fixed `v0` and `w`.
pub fn solve_threshold_transmission<F>(rate: F, v0: f64, w: f64) -> Result<Threshold>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    check_variance("V0", v0)?;
    check_variance("W", w)?;
    let at = |t: f64| rate(v0, t, w);
    if at(MIN_TRANSMISSION)? >= 0.0 {
        return Ok(Threshold::SecureEverywhere);
    }
    if at(MAX_TRANSMISSION)? < 0.0 {
        return Ok(Threshold::InsecureEverywhere);
    }
    bisect(at, MIN_TRANSMISSION, MAX_TRANSMISSION, XTOL).map(Threshold::Root)
}

/// Minimum tolerable frequency `f*` at transmission `t`, with the attack noise
/// matched to the preparation noise (`W = V0(f)`).
pub fn solve_threshold_frequency(scheme: Scheme, t: f64, temperature_k: f64) -> Result<Threshold> {
    check_transmission(t)?;
    ensure(
        temperature_k > 0.0 && temperature_k.is_finite(),
        "temperature",
        temperature_k,
        "> 0 K",
    )?;
    let at = |log_f: f64| {
        let v0 = v0_at(10f64.powf(log_f), temperature_k);
        scheme.asymptotic_rate(v0, t, v0)
    };
    let (lo, hi) = (MIN_FREQUENCY.log10(), MAX_FREQUENCY.log10());
    if at(lo)? >= 0.0 {
        return Ok(Threshold::SecureEverywhere);
    }
    if at(hi)? < 0.0 {
        return Ok(Threshold::InsecureEverywhere);
    }
    let log_f = bisect(at, lo, hi, XTOL)?;
    Ok(Threshold::Root(10f64.powf(log_f)))
}

/// Frequency threshold of the one-way protocol taking the better of DR and RR.
pub fn solve_threshold_frequency_oneway_best(t: f64, temperature_k: f64) -> Result<Threshold> {
    let dr = solve_threshold_frequency(Scheme::ONEWAY_DR, t, temperature_k)?;
    let rr = solve_threshold_frequency(Scheme::ONEWAY_RR, t, temperature_k)?;
    Ok(dr.lower(rr))
}

/// Point where the one-way DR and RR frequency thresholds cross.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub transmission: f64,
    pub frequency: f64,
}

/// Locates the crossing of the one-way DR and RR frequency-threshold curves.
///
/// Scans `T` on a 0.01 grid above the 3 dB point for a sign change of
/// `log f_DR - log f_RR`, then bisects.
pub fn oneway_frequency_crossing(temperature_k: f64) -> Result<Crossing> {
    let gap = |t: f64| -> Result<Option<f64>> {
        let dr = solve_threshold_frequency(Scheme::ONEWAY_DR, t, temperature_k)?;
        let rr = solve_threshold_frequency(Scheme::ONEWAY_RR, t, temperature_k)?;
        Ok(match (dr, rr) {
            (Threshold::Root(a), Threshold::Root(b)) => Some(a.log10() - b.log10()),
            _ => None,
        })
    };
    let mut prev: Option<(f64, f64)> = None;
    for k in 51..100 {
        let t = k as f64 / 100.0;
        let Some(g) = gap(t)? else {
            prev = None;
            continue;
        };
        if let Some((t_prev, g_prev)) = prev {
            if g_prev.signum() != g.signum() {
                let t_cross = bisect(
                    |t| gap(t)?.ok_or(Error::NoBracket { lo: t_prev, hi: t }),
                    t_prev,
                    t,
                    1e-12,
                )?;
                let frequency =
                    solve_threshold_frequency(Scheme::ONEWAY_DR, t_cross, temperature_k)?
                        .root()
                        .ok_or(Error::NoBracket { lo: t_prev, hi: t })?;
                return Ok(Crossing {
                    transmission: t_cross,
                    frequency,
                });
            }
        }
        prev = Some((t, g));
    }
    Err(Error::NoBracket { lo: 0.51, hi: 0.99 })
}

/// Convenience: frequency threshold for a protocol/direction pair.
pub fn frequency_threshold(
    protocol: Protocol,
    direction: Direction,
    t: f64,
    temperature_k: f64,
) -> Result<Threshold> {
    solve_threshold_frequency(Scheme::new(protocol, direction), t, temperature_k)
}
