//! Evaluation of scenarios into result tables.

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use cvqkd_core::environment::{celsius_to_kelvin, distance_from_transmission, SPEED_OF_LIGHT};
use cvqkd_core::threshold::{
    solve_threshold_frequency, solve_threshold_transmission, solve_threshold_w,
};
use cvqkd_core::{
    oneway, AttenuationModel, Direction, Error, Protocol, Scheme, ThermalEnvironment, Threshold,
};

use crate::config::{default_temperature_c, DirectionChoice, Mode, Noise, Scenario, SolveFor};
use crate::sweep::Variable;
use crate::table::{Cell, Table, INSECURE_ALL};

/// Runs every curve of `file` with `flags` layered on top, concatenating the rows.
pub fn run(file: &Scenario, flags: &Scenario) -> Result<Table> {
    let runs = file.expand(flags);
    let mut table: Option<Table> = None;
    for (k, s) in runs.iter().enumerate() {
        let t = run_one(s).with_context(|| {
            if runs.len() > 1 {
                format!("curve {}", k + 1)
            } else {
                "scenario".into()
            }
        })?;
        match table.as_mut() {
            None => table = Some(t),
            Some(acc) => acc.append(t)?,
        }
    }
    table.ok_or_else(|| anyhow!("scenario has no curves"))
}

/// Runs a single layered scenario; rows follow sweep order.
pub fn run_one(s: &Scenario) -> Result<Table> {
    let mode = s
        .mode
        .ok_or_else(|| anyhow!("missing `mode` (rate, threshold, distance or env)"))?;
    let kind = Kind::of(s, mode)?;
    check_fields(s, kind)?;
    let mut table = Table::new(kind.columns(s));
    match s.sweep {
        None => table.rows.push(kind.eval(s)?),
        Some(sweep) => {
            let values = sweep.values();
            let rows: Vec<Result<Vec<Cell>>> = values
                .par_iter()
                .map(|&x| kind.eval(&apply(s, sweep.variable, x)))
                .collect();
            for (x, row) in values.iter().zip(rows) {
                table
                    .rows
                    .push(row.with_context(|| format!("at {} = {x}", sweep.variable))?);
            }
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Rate,
    NoiseThreshold,
    TransmissionThreshold,
    FrequencyThreshold,
    Distance,
    Env,
}

impl Kind {
    fn of(s: &Scenario, mode: Mode) -> Result<Self> {
        Ok(match mode {
            Mode::Rate => Kind::Rate,
            Mode::Threshold => match s.solve {
                Some(SolveFor::W) | Some(SolveFor::ExcessNoise) => Kind::NoiseThreshold,
                Some(SolveFor::Transmission) => Kind::TransmissionThreshold,
                Some(SolveFor::Frequency) => Kind::FrequencyThreshold,
                None => bail!("missing `solve` (w, excess_noise, frequency or transmission)"),
            },
            Mode::Distance
                if s.t.is_some() || s.sweep.is_some_and(|w| w.variable == Variable::T) =>
            {
                Kind::Distance
            }
            Mode::Distance => Kind::TransmissionThreshold,
            Mode::Env => Kind::Env,
        })
    }

    fn allowed(self) -> &'static [&'static str] {
        const SOURCE: [&str; 4] = ["v0", "frequency_hz", "wavelength_m", "temperature_c"];
        match self {
            Kind::Rate => &[
                "protocol",
                "direction",
                "v0",
                "frequency_hz",
                "wavelength_m",
                "temperature_c",
                "w",
                "excess_noise",
                "t",
                "mu",
            ],
            Kind::NoiseThreshold => &[
                "protocol",
                "direction",
                "solve",
                "v0",
                "frequency_hz",
                "wavelength_m",
                "temperature_c",
                "t",
            ],
            Kind::TransmissionThreshold => &[
                "protocol",
                "direction",
                "solve",
                "v0",
                "frequency_hz",
                "wavelength_m",
                "temperature_c",
                "w",
                "alpha_db_per_m",
                "alpha_db_per_km",
            ],
            Kind::FrequencyThreshold => &[
                "protocol",
                "direction",
                "solve",
                "temperature_c",
                "t",
                "alpha_db_per_m",
                "alpha_db_per_km",
            ],
            Kind::Distance => &["t", "alpha_db_per_m", "alpha_db_per_km"],
            Kind::Env => &SOURCE,
        }
    }

    fn columns(self, s: &Scenario) -> Vec<&'static str> {
        let with_distance = |mut c: Vec<&'static str>| {
            if s.alpha_db_per_m.is_some() || s.alpha_db_per_km.is_some() {
                c.extend(["alpha_db_per_m", "max_distance_m"]);
            }
            c
        };
        match self {
            Kind::Rate => vec![
                "protocol",
                "direction",
                "v0",
                "w",
                "t",
                "mu",
                "mutual_info_bits",
                "holevo_bits",
                "rate_bits",
            ],
            Kind::NoiseThreshold => vec![
                "protocol",
                "direction",
                "v0",
                "t",
                "w_threshold",
                "excess_noise_threshold",
            ],
            Kind::TransmissionThreshold => {
                with_distance(vec!["protocol", "direction", "v0", "w", "t_threshold"])
            }
            Kind::FrequencyThreshold => with_distance(vec![
                "protocol",
                "direction",
                "t",
                "temperature_k",
                "f_threshold_hz",
                "lambda_m",
            ]),
            Kind::Distance => vec!["t", "alpha_db_per_m", "distance_m"],
            Kind::Env => vec![
                "temperature_k",
                "frequency_hz",
                "lambda_m",
                "mean_photons",
                "v0",
            ],
        }
    }

    fn eval(self, s: &Scenario) -> Result<Vec<Cell>> {
        match self {
            Kind::Rate => eval_rate(s),
            Kind::NoiseThreshold => eval_noise_threshold(s),
            Kind::TransmissionThreshold => eval_transmission_threshold(s),
            Kind::FrequencyThreshold => eval_frequency_threshold(s),
            Kind::Distance => eval_distance(s),
            Kind::Env => eval_env(s),
        }
    }
}

fn set_fields(s: &Scenario) -> Vec<&'static str> {
    let flags = [
        ("protocol", s.protocol.is_some()),
        ("direction", s.direction.is_some()),
        ("solve", s.solve.is_some()),
        ("v0", s.v0.is_some()),
        ("frequency_hz", s.frequency_hz.is_some()),
        ("wavelength_m", s.wavelength_m.is_some()),
        ("temperature_c", s.temperature_c.is_some()),
        ("w", s.w.is_some()),
        ("excess_noise", s.excess_noise.is_some()),
        ("t", s.t.is_some()),
        ("mu", s.mu.is_some()),
        ("alpha_db_per_m", s.alpha_db_per_m.is_some()),
        ("alpha_db_per_km", s.alpha_db_per_km.is_some()),
    ];
    flags
        .iter()
        .filter(|(_, set)| *set)
        .map(|(name, _)| *name)
        .collect()
}

fn sweep_field(v: Variable) -> &'static str {
    match v {
        Variable::T => "t",
        Variable::V0 => "v0",
        Variable::W => "w",
        Variable::ExcessNoise => "excess_noise",
        Variable::Frequency => "frequency_hz",
        Variable::Wavelength => "wavelength_m",
        Variable::Mu => "mu",
        Variable::TemperatureC => "temperature_c",
    }
}

fn check_fields(s: &Scenario, kind: Kind) -> Result<()> {
    let allowed = kind.allowed();
    let mut fields = set_fields(s);
    if let Some(sweep) = s.sweep {
        let f = sweep_field(sweep.variable);
        if fields.contains(&f) {
            bail!("`{f}` is both fixed and swept");
        }
        fields.push(f);
    }
    match fields.iter().find(|f| !allowed.contains(f)) {
        Some(f) => bail!("`{f}` is not used by this mode"),
        None => Ok(()),
    }
}

fn apply(s: &Scenario, var: Variable, x: f64) -> Scenario {
    let mut p = s.clone();
    p.sweep = None;
    match var {
        Variable::T => p.t = Some(x),
        Variable::V0 => p.v0 = Some(x),
        Variable::W => p.w = Some(Noise::Value(x)),
        Variable::ExcessNoise => p.excess_noise = Some(x),
        Variable::Frequency => p.frequency_hz = Some(x),
        Variable::Wavelength => p.wavelength_m = Some(x),
        Variable::Mu => p.mu = Some(x),
        Variable::TemperatureC => p.temperature_c = Some(x),
    }
    p
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("missing `{name}`"))
}

fn field<T>(r: cvqkd_core::Result<T>, name: &str) -> Result<T> {
    r.map_err(|e| anyhow!("`{name}`: {e}"))
}

fn temperature_k(s: &Scenario) -> Result<f64> {
    let c = match s.temperature_c {
        Some(c) => c,
        None => default_temperature_c()?,
    };
    let k = celsius_to_kelvin(c);
    if !(k > 0.0 && k.is_finite()) {
        bail!("`temperature_c`: {c} °C is below absolute zero");
    }
    Ok(k)
}

fn environment(s: &Scenario) -> Result<ThermalEnvironment> {
    let temp = temperature_k(s)?;
    match (s.frequency_hz, s.wavelength_m) {
        (Some(_), Some(_)) => bail!("`frequency_hz` and `wavelength_m` are mutually exclusive"),
        (Some(f), None) => field(ThermalEnvironment::new(temp, f), "frequency_hz"),
        (None, Some(l)) => field(ThermalEnvironment::from_wavelength(temp, l), "wavelength_m"),
        (None, None) => bail!("missing `frequency_hz` or `wavelength_m`"),
    }
}

fn v0(s: &Scenario) -> Result<f64> {
    match s.v0 {
        Some(_) if s.frequency_hz.is_some() || s.wavelength_m.is_some() => {
            bail!("`v0` and `frequency_hz`/`wavelength_m` are mutually exclusive")
        }
        Some(v) if v >= 1.0 && v.is_finite() => Ok(v),
        Some(v) => bail!("`v0` = {v} must be >= 1"),
        None if s.frequency_hz.is_none() && s.wavelength_m.is_none() => {
            bail!("missing `v0` (or `frequency_hz`/`wavelength_m`)")
        }
        None => Ok(environment(s)?.v0()),
    }
}

fn transmission(s: &Scenario) -> Result<f64> {
    let t = require(s.t, "t")?;
    if !(t > 0.0 && t < 1.0) {
        bail!("`t` = {t} must lie in (0, 1)");
    }
    Ok(t)
}

fn channel_noise(s: &Scenario, v0: f64) -> Result<f64> {
    let w = match (s.w, s.excess_noise) {
        (Some(_), Some(_)) => bail!("`w` and `excess_noise` are mutually exclusive"),
        (Some(Noise::Value(w)), None) => w,
        (Some(Noise::MatchV0), None) => v0,
        (None, Some(n)) => field(
            oneway::w_from_excess_noise(n, transmission(s)?),
            "excess_noise",
        )?,
        (None, None) => bail!("missing `w` (a number or \"v0\") or `excess_noise`"),
    };
    if !(w >= 1.0 && w.is_finite()) {
        bail!("`w` = {w} must be >= 1");
    }
    Ok(w)
}

fn attenuation(s: &Scenario) -> Result<Option<AttenuationModel>> {
    match (s.alpha_db_per_m, s.alpha_db_per_km) {
        (Some(_), Some(_)) => {
            bail!("`alpha_db_per_m` and `alpha_db_per_km` are mutually exclusive")
        }
        (Some(a), None) => field(AttenuationModel::db_per_meter(a), "alpha_db_per_m").map(Some),
        (None, Some(a)) => field(AttenuationModel::db_per_km(a), "alpha_db_per_km").map(Some),
        (None, None) => Ok(None),
    }
}

fn directions(s: &Scenario) -> Result<(Protocol, DirectionChoice, Vec<Scheme>)> {
    let protocol = require(s.protocol, "protocol")?;
    let choice = require(s.direction, "direction")?;
    let schemes = match choice.single() {
        Some(d) => vec![Scheme::new(protocol, d)],
        None => Direction::ALL
            .iter()
            .map(|&d| Scheme::new(protocol, d))
            .collect(),
    };
    Ok((protocol, choice, schemes))
}

fn label(protocol: Protocol, choice: DirectionChoice) -> [Cell; 2] {
    [Cell::text(protocol.as_str()), Cell::text(choice.as_str())]
}

fn eval_rate(s: &Scenario) -> Result<Vec<Cell>> {
    let protocol = require(s.protocol, "protocol")?;
    let choice = require(s.direction, "direction")?;
    let direction = choice
        .single()
        .ok_or_else(|| anyhow!("`direction` = best is only available for thresholds"))?;
    let scheme = Scheme::new(protocol, direction);
    let v0 = v0(s)?;
    let t = transmission(s)?;
    let w = channel_noise(s, v0)?;
    let mu = s.mu.unwrap_or(f64::INFINITY);
    let (mi, holevo, rate) = if mu == f64::INFINITY {
        let r = scheme.asymptotic_rate(v0, t, w)?;
        (f64::INFINITY, f64::INFINITY, r)
    } else {
        let b = field(scheme.numeric_rate(v0, t, w, mu), "mu")?;
        (b.mutual_info, b.holevo, b.rate)
    };
    let [p, d] = label(protocol, choice);
    Ok(vec![
        p,
        d,
        v0.into(),
        w.into(),
        t.into(),
        mu.into(),
        mi.into(),
        holevo.into(),
        rate.into(),
    ])
}

fn eval_noise_threshold(s: &Scenario) -> Result<Vec<Cell>> {
    let (protocol, choice, schemes) = directions(s)?;
    let v0 = v0(s)?;
    let t = transmission(s)?;
    let mut best: Option<Threshold> = None;
    for scheme in schemes {
        let w = match solve_threshold_w(|v, t, w| scheme.asymptotic_rate(v, t, w), v0, t) {
            Ok(w) => Threshold::Root(w),
            Err(Error::Unbounded(_)) => Threshold::SecureEverywhere,
            Err(e) => return Err(e.into()),
        };
        best = Some(match (best, w) {
            (None, w) => w,
            (Some(Threshold::Root(a)), Threshold::Root(b)) => Threshold::Root(a.max(b)),
            _ => Threshold::SecureEverywhere,
        });
    }
    let w = best.expect("at least one direction");
    let n = match w {
        Threshold::Root(w) => Cell::Num(oneway::excess_noise_from_w(w, t)?),
        other => other.into(),
    };
    let [p, d] = label(protocol, choice);
    Ok(vec![p, d, v0.into(), t.into(), w.into(), n])
}

fn max_distance(t: Threshold, att: &AttenuationModel) -> Result<Cell> {
    Ok(match t {
        Threshold::Root(t) => distance_from_transmission(t, att)?.into(),
        other => other.into(),
    })
}

fn eval_transmission_threshold(s: &Scenario) -> Result<Vec<Cell>> {
    let (protocol, choice, schemes) = directions(s)?;
    let v0 = v0(s)?;
    let w = channel_noise(s, v0)?;
    let mut best = Threshold::InsecureEverywhere;
    for scheme in schemes {
        best = best.lower(solve_threshold_transmission(
            |v, t, w| scheme.asymptotic_rate(v, t, w),
            v0,
            w,
        )?);
    }
    let [p, d] = label(protocol, choice);
    let mut row = vec![p, d, v0.into(), w.into(), best.into()];
    if let Some(att) = attenuation(s)? {
        row.push(att.alpha_db_per_m().into());
        row.push(max_distance(best, &att)?);
    }
    Ok(row)
}

fn eval_frequency_threshold(s: &Scenario) -> Result<Vec<Cell>> {
    let (protocol, choice, schemes) = directions(s)?;
    let t = transmission(s)?;
    let temp = temperature_k(s)?;
    let mut best = Threshold::InsecureEverywhere;
    for scheme in schemes {
        best = best.lower(solve_threshold_frequency(scheme, t, temp)?);
    }
    let lambda = match best {
        Threshold::Root(f) => Cell::Num(SPEED_OF_LIGHT / f),
        other => other.into(),
    };
    let [p, d] = label(protocol, choice);
    let mut row = vec![p, d, t.into(), temp.into(), best.into(), lambda];
    if let Some(att) = attenuation(s)? {
        row.push(att.alpha_db_per_m().into());
        row.push(match best {
            Threshold::InsecureEverywhere => Cell::text(INSECURE_ALL),
            _ => distance_from_transmission(t, &att)?.into(),
        });
    }
    Ok(row)
}

fn eval_distance(s: &Scenario) -> Result<Vec<Cell>> {
    let t = require(s.t, "t")?;
    let att =
        attenuation(s)?.ok_or_else(|| anyhow!("missing `alpha_db_per_m` or `alpha_db_per_km`"))?;
    let d = field(distance_from_transmission(t, &att), "t")?;
    Ok(vec![t.into(), att.alpha_db_per_m().into(), d.into()])
}

fn eval_env(s: &Scenario) -> Result<Vec<Cell>> {
    let env = environment(s)?;
    Ok(vec![
        env.temperature().into(),
        env.frequency().into(),
        env.wavelength().into(),
        env.mean_photons().into(),
        env.v0().into(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::SECURE_ALL;

    fn scenario(text: &str) -> Scenario {
        Scenario::from_toml(text).unwrap()
    }

    #[test]
    fn rate_row_echoes_inputs() {
        let t = run_one(&scenario(
            "mode='rate'\nprotocol='twoway'\ndirection='rr'\nv0=1.0\nw=1.0\nt=0.5",
        ))
        .unwrap();
        assert_eq!(t.rows.len(), 1);
        let Cell::Num(r) = t.rows[0][8] else { panic!() };
        assert!((r - 0.66096).abs() < 1e-4);
        assert_eq!(t.rows[0][6].render(), "inf");
    }

    #[test]
    fn sentinels_not_nan() {
        let t = run_one(&scenario(
            "mode='threshold'\nsolve='transmission'\nprotocol='twoway'\ndirection='rr'\nv0=10.0\nw=1.0",
        ))
        .unwrap();
        assert_eq!(t.rows[0][4].render(), SECURE_ALL);
    }

    #[test]
    fn field_level_errors() {
        let err = |text: &str| format!("{:#}", run_one(&scenario(text)).unwrap_err());
        assert!(
            err("mode='rate'\nprotocol='oneway'\ndirection='dr'\nv0=1.0\nw=1.0").contains("`t`")
        );
        assert!(err("mode='rate'\nprotocol='oneway'\ndirection='dr'\nv0=1.0\nfrequency_hz=1e13\nw=1.0\nt=0.5")
            .contains("mutually exclusive"));
        assert!(err("mode='env'\nfrequency_hz=1e13\nt=0.5").contains("not used"));
        assert!(err("mode='rate'\nprotocol='oneway'\ndirection='dr'\nv0=1.0\nw=1.0\nt=0.5\nsweep='t:0.1:0.9:3'")
            .contains("both fixed and swept"));
        assert!(err(
            "mode='rate'\nprotocol='oneway'\ndirection='dr'\nv0=1.0\nw=1.0\nsweep='t:0.5:2.5:3'"
        )
        .contains("at t = 1.5"));
    }
}
