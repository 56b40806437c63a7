//! The `ctl` command line: argument parsing, config layering and output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::execute;
pub use config::{CommandName, Format, RunConfig};
pub use error::CliError;
pub use output::{Cell, Table};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_VAR: &str = "CTL_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "ctl", version, about = "Numeric lab for contact thermodynamic phase-space")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Integrate the Legendre generator and emit the trajectory.
    Orbit(Flags),
    /// Apply a discrete Legendre map to points.
    Legendre(Flags),
    /// Killing residual table for a metric family.
    Killing(Flags),
    /// Invariance-constraint residual table for a metric function.
    OmegaCheck(Flags),
    /// Closed-form and numeric ideal-gas curvature at one point.
    Curvature(Flags),
    /// Ideal-gas curvature along the energy density.
    RhoScan(Flags),
    /// Discrete-map and quarter-turn recurrence residuals.
    Isometry(Flags),
}

#[derive(Debug, Args, Default)]
struct Flags {
    /// Degrees of freedom.
    #[arg(long)]
    n: Option<usize>,
    /// Metric family: epsilon, gtd_total or gtd_partial.
    #[arg(long)]
    family: Option<String>,
    /// Metric function, e.g. const:1, pair-norm:1, expr:q1*p2-q2*p1.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Exponent k of the partial-invariant family.
    #[arg(long)]
    k: Option<u32>,
    /// Use the single-pair generator for this pair (1-based).
    #[arg(long)]
    pair: Option<usize>,
    /// Legendre map: total or a list of pairs such as 1,2.
    #[arg(long)]
    map: Option<String>,
    /// Ideal-gas heat capacity.
    #[arg(long = "cv", alias = "c-v")]
    c_v: Option<f64>,
    /// Energy-density range min:max:steps.
    #[arg(long)]
    rho: Option<String>,
    /// Volume held fixed during a scan.
    #[arg(long)]
    v_fixed: Option<f64>,
    /// Internal energy.
    #[arg(long)]
    u: Option<f64>,
    /// Volume.
    #[arg(long)]
    v: Option<f64>,
    /// Finite-difference step.
    #[arg(long)]
    h_fd: Option<f64>,
    /// RK4 step.
    #[arg(long)]
    dt: Option<f64>,
    /// Final integration time.
    #[arg(long)]
    t_end: Option<f64>,
    /// Initial condition as comma-separated values; repeatable.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ';')]
    ic: Vec<String>,
    /// Number of random points.
    #[arg(long)]
    points: Option<usize>,
    /// Seed for random points.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; relative paths resolve under CTL_OUTPUT_DIR.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn parse_tuple(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("'{s}' in initial condition '{text}' is not a number")))
        })
        .collect()
}

impl Flags {
    fn into_config(self, command: CommandName) -> Result<RunConfig, CliError> {
        let ic = if self.ic.is_empty() {
            None
        } else {
            Some(self.ic.iter().map(|s| parse_tuple(s)).collect::<Result<Vec<_>, _>>()?)
        };
        Ok(RunConfig {
            command: Some(command),
            n: self.n,
            family: self.family,
            omega: self.omega,
            k: self.k,
            pair: self.pair,
            map: self.map,
            c_v: self.c_v,
            rho: self.rho,
            v_fixed: self.v_fixed,
            u: self.u,
            v: self.v,
            h_fd: self.h_fd,
            dt: self.dt,
            t_end: self.t_end,
            ic,
            points: self.points,
            seed: self.seed,
            output: self.output,
            format: self.format,
        })
    }
}

/// Builds the effective configuration from command-line arguments.
pub fn resolve_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Validation(e.to_string()))?;
    let base = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let flags = match cli.command {
        None => RunConfig::default(),
        Some(sub) => {
            let (name, flags) = match sub {
                Sub::Orbit(f) => (CommandName::Orbit, f),
                Sub::Legendre(f) => (CommandName::Legendre, f),
                Sub::Killing(f) => (CommandName::Killing, f),
                Sub::OmegaCheck(f) => (CommandName::OmegaCheck, f),
                Sub::Curvature(f) => (CommandName::Curvature, f),
                Sub::RhoScan(f) => (CommandName::RhoScan, f),
                Sub::Isometry(f) => (CommandName::Isometry, f),
            };
            flags.into_config(name)?
        }
    };
    Ok(base.overlay(flags))
}

/// Where output goes: an explicit path (relative paths resolve against
/// `CTL_OUTPUT_DIR` when set), `CTL_OUTPUT_DIR/<command>.<format>`, or
/// standard output.
pub fn output_path(cfg: &RunConfig) -> Result<Option<PathBuf>, CliError> {
    let dir = std::env::var_os(OUTPUT_DIR_VAR).map(PathBuf::from);
    Ok(match (&cfg.output, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(format!("{}.{}", cfg.command()?.as_str(), cfg.format()))),
        (None, None) => None,
    })
}

fn write_table(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    match output_path(cfg)? {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            let mut w = BufWriter::new(File::create(&path)?);
            table.write(cfg.format(), &mut w)?;
            w.flush()?;
            log::info!("wrote {} rows to {}", table.rows.len(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            table.write(cfg.format(), &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 on
/// invalid input, 2 on numeric failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    // help and version go to stdout with a zero exit
    if let Err(e) = Cli::try_parse_from(&args) {
        if !e.use_stderr() {
            let _ = e.print();
            return 0;
        }
    }
    let result = resolve_config(&args).and_then(|cfg| {
        let table = execute(&cfg)?;
        write_table(&cfg, &table)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ctl: {e}");
            e.exit_code()
        }
    }
}
