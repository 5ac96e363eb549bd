use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cvqkd_cli::{run, DirectionChoice, Format, Mode, Noise, Output, Scenario, SolveFor, Sweep};
use cvqkd_core::Protocol;

#[derive(Parser)]
#[command(
    name = "cvqkd",
    version,
    about = "Secret-key rates and security thresholds of thermal CV-QKD"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Secret-key rate (asymptotic unless --mu is finite)
    Rate(Flags),
    /// Security threshold in w, excess_noise, frequency or transmission
    Threshold(Flags),
    /// Run a scenario file; its `mode` key selects the computation
    Sweep {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Distance for a transmission, or maximum secure distance when no --t is given
    Distance(Flags),
    /// Thermal occupation and preparation noise at a frequency or wavelength
    Env(Flags),
}

/// Every scenario key as a flag; flags override the file.
#[derive(Args, Default)]
struct Flags {
    /// Scenario file (TOML)
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    protocol: Option<Protocol>,
    /// dr, rr, or best (thresholds only)
    #[arg(long)]
    direction: Option<DirectionChoice>,
    #[arg(long)]
    solve: Option<SolveFor>,
    #[arg(long)]
    v0: Option<f64>,
    #[arg(long = "frequency", alias = "frequency-hz")]
    frequency_hz: Option<f64>,
    #[arg(long = "wavelength", alias = "wavelength-m")]
    wavelength_m: Option<f64>,
    #[arg(long = "temperature-c")]
    temperature_c: Option<f64>,
    /// Channel noise: a number or `v0`
    #[arg(long)]
    w: Option<Noise>,
    #[arg(long = "excess-noise")]
    excess_noise: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Modulation variance; `inf` for the asymptotic rate
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long = "alpha-db-per-m")]
    alpha_db_per_m: Option<f64>,
    #[arg(long = "alpha-db-per-km")]
    alpha_db_per_km: Option<f64>,
    /// variable:from:to:points[:log]
    #[arg(long)]
    sweep: Option<Sweep>,
    #[arg(long)]
    format: Option<Format>,
    /// Output file (default: stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Flags {
    fn into_parts(self, mode: Option<Mode>) -> (Option<PathBuf>, Scenario) {
        let output = (self.format.is_some() || self.output.is_some()).then_some(Output {
            format: self.format,
            path: self.output,
        });
        let s = Scenario {
            mode,
            protocol: self.protocol,
            direction: self.direction,
            solve: self.solve,
            v0: self.v0,
            frequency_hz: self.frequency_hz,
            wavelength_m: self.wavelength_m,
            temperature_c: self.temperature_c,
            w: self.w,
            excess_noise: self.excess_noise,
            t: self.t,
            mu: self.mu,
            alpha_db_per_m: self.alpha_db_per_m,
            alpha_db_per_km: self.alpha_db_per_km,
            sweep: self.sweep,
            output,
            curves: Vec::new(),
        };
        (self.config, s)
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (file, flags) = match cli.command {
        Command::Rate(f) => f.into_parts(Some(Mode::Rate)),
        Command::Threshold(f) => f.into_parts(Some(Mode::Threshold)),
        Command::Distance(f) => f.into_parts(Some(Mode::Distance)),
        Command::Env(f) => f.into_parts(Some(Mode::Env)),
        Command::Sweep { file, flags } => {
            let (extra, s) = flags.into_parts(None);
            anyhow::ensure!(
                extra.is_none(),
                "`sweep` takes the scenario file as its argument, not --config"
            );
            (Some(file), s)
        }
    };
    let base = match file {
        Some(path) => Scenario::load(&path)?,
        None => Scenario::default(),
    };
    let table = run(&base, &flags)?;
    let settings = base.overlay(&flags);
    let format = settings.format();
    match settings.output_path() {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write(&table, format, BufWriter::new(f))
        }
        None => write(&table, format, io::stdout().lock()),
    }
}

fn write<W: Write>(table: &cvqkd_cli::Table, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => table.write_csv(out),
        Format::Json => table.write_json(out),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
