//! Command-line front end. The binary is a one-line wrapper around [`run`].
//!
//! Exit codes: 0 success, 1 I/O failure or no result, 2 usage error,
//! 3 internal-consistency failure, 4 oracle mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::checks::{self, Suite, PARITY_TOLERANCE};
use crate::error::Error;
use crate::explorer::{self, Axis, Fixed, GridSpec, Objective, Preset, Record, SweepSpec};
use crate::oracle;
use crate::output::{self, Format};
use crate::params::{MziScenario, NgOpParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ngmzi",
    version,
    about = "Parity-detection MZI phase sensitivity with heralded non-Gaussian squeezed vacuum"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one scenario and print a JSON record.
    Sensitivity(SensitivityArgs),
    /// Sweep r, tau or phi for a list of states.
    Sweep(SweepArgs),
    /// Evaluate a dense (r, tau) grid for one state.
    Grid(GridArgs),
    /// Maximize D or P x D over the transmissivity.
    Optimize(OptimizeArgs),
    /// Compare the closed forms against the Fock-space simulator.
    OracleCheck(OracleCheckArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub tau: f64,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub dx: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub dp: f64,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Also evaluate the parity with the Fock-space simulator.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Skip the `.meta.json` sidecar.
    #[arg(long)]
    pub no_meta: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Figure preset (2a-2c, 3a-3c, 5a-5c, 6); overrides the sweep flags.
    #[arg(long)]
    pub fig: Option<String>,
    #[arg(long, default_value = "r")]
    pub axis: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// States as `m,n` pairs separated by `;`, e.g. `0,1;1,0`.
    #[arg(long, default_value = "0,1")]
    pub states: String,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 0.9)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub dx: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub dp: f64,
    #[command(flatten)]
    pub table: TableArgs,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Figure preset (4a, 4b, 4c); overrides the grid flags.
    #[arg(long)]
    pub fig: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub r_from: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r_to: f64,
    #[arg(long, default_value_t = 41)]
    pub r_points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tau_from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau_to: f64,
    #[arg(long, default_value_t = 41)]
    pub tau_points: usize,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub dx: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub dp: f64,
    #[command(flatten)]
    pub table: TableArgs,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub dx: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub dp: f64,
    /// `d` or `pxd`
    #[arg(long, default_value = "pxd")]
    pub objective: String,
}

#[derive(Debug, Args)]
pub struct OracleCheckArgs {
    /// `fast` or `full`
    #[arg(long, default_value = "fast")]
    pub suite: String,
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
    Oracle(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) => EXIT_USAGE,
        Error::NoOptimum => EXIT_FAILURE,
        _ => EXIT_INTERNAL,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
        Err(Failure::Oracle(msg)) => {
            let _ = writeln!(stderr, "oracle mismatch: {msg}");
            EXIT_ORACLE
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Sensitivity(a) => sensitivity(a, stdout),
        Command::Sweep(a) => sweep(a, stdout),
        Command::Grid(a) => grid(a, stdout),
        Command::Optimize(a) => optimize(a, stdout),
        Command::OracleCheck(a) => oracle_check(a, stdout),
    }
}

fn print_json<T: Serialize>(value: &T, stdout: &mut dyn Write) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    writeln!(stdout, "{text}")?;
    Ok(())
}

#[derive(Serialize)]
struct SensitivityOutput {
    #[serde(flatten)]
    record: Record,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_parity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_deviation: Option<f64>,
}

fn sensitivity(a: &SensitivityArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let s = &a.scenario;
    let scenario = MziScenario::new(NgOpParams::new(s.r, s.tau, s.m, s.n)?, s.dx, s.dp, s.phi)?;
    let record = explorer::evaluate((s.m, s.n), s.r, s.tau, s.phi, s.dx, s.dp)?;
    let mut out = SensitivityOutput {
        record,
        oracle_parity: None,
        oracle_deviation: None,
    };
    let mut mismatch = None;
    if a.oracle && out.record.parity.is_finite() {
        let value = oracle::scenario_parity(&scenario)?;
        let deviation = (value - out.record.parity).abs();
        if deviation > PARITY_TOLERANCE {
            mismatch = Some(format!("parity deviates by {deviation:e}"));
        }
        out.oracle_parity = Some(value);
        out.oracle_deviation = Some(deviation);
    }
    print_json(&out, stdout)?;
    match mismatch {
        Some(msg) => Err(Failure::Oracle(msg)),
        None => Ok(()),
    }
}

/// Parses `0,1;1,0` into state pairs.
pub fn parse_states(text: &str) -> Result<Vec<(usize, usize)>, Error> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let bad = || Error::InvalidParameter(format!("state '{pair}' is not of the form m,n"));
            let (m, n) = pair.split_once(',').ok_or_else(bad)?;
            Ok((
                m.trim().parse().map_err(|_| bad())?,
                n.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn preset(id: &str) -> Result<Preset, Error> {
    explorer::figure(id).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "unknown figure '{id}' (one of {})",
            explorer::FIGURES.join(", ")
        ))
    })
}

fn emit<S: Serialize>(
    records: &[Record],
    table: &TableArgs,
    command: &str,
    spec: &S,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let format: Format = table.format.parse()?;
    let text = output::render(records, format)?;
    match &table.out {
        None => stdout.write_all(text.as_bytes())?,
        Some(path) => {
            output::write_atomic(path, text.as_bytes())?;
            if !table.no_meta {
                output::write_meta(path, command, spec, records.len())?;
            }
        }
    }
    Ok(())
}

fn sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let spec = match &a.fig {
        Some(id) => match preset(id)? {
            Preset::Sweep(s) => s,
            Preset::Grid(_) => {
                return Err(Error::InvalidParameter(format!(
                    "figure {id} is a grid; use `grid --fig {id}`"
                ))
                .into())
            }
        },
        None => SweepSpec {
            axis: a.axis.parse::<Axis>()?,
            range: (a.from, a.to),
            points: a.points,
            fixed: Fixed {
                r: a.r,
                tau: a.tau,
                phi: a.phi,
                dx: a.dx,
                dp: a.dp,
            },
            states: parse_states(&a.states)?,
        },
    };
    let records = explorer::run_sweep(&spec)?;
    emit(&records, &a.table, "sweep", &spec, stdout)
}

fn grid(a: &GridArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let spec = match &a.fig {
        Some(id) => match preset(id)? {
            Preset::Grid(g) => g,
            Preset::Sweep(_) => {
                return Err(Error::InvalidParameter(format!(
                    "figure {id} is a sweep; use `sweep --fig {id}`"
                ))
                .into())
            }
        },
        None => GridSpec {
            r_range: (a.r_from, a.r_to),
            tau_range: (a.tau_from, a.tau_to),
            r_points: a.r_points,
            tau_points: a.tau_points,
            phi: a.phi,
            dx: a.dx,
            dp: a.dp,
            state: (a.m, a.n),
        },
    };
    let records = explorer::run_grid(&spec)?;
    emit(&records, &a.table, "grid", &spec, stdout)
}

fn optimize(a: &OptimizeArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let objective: Objective = a.objective.parse()?;
    let best = explorer::optimize_tau((a.m, a.n), a.r, a.phi, a.dx, a.dp, objective)?;
    print_json(&best, stdout)
}

fn oracle_check(a: &OracleCheckArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let suite: Suite = a.suite.parse()?;
    let report = checks::run(suite)?;
    print_json(&report, stdout)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Oracle("deviations exceed tolerance".into()))
    }
}
