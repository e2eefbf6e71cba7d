//! Command-line front end: `sweep`, `verify` and `figure <id>`.
//!
//! Exit codes: 0 ok, 1 configuration error, 2 I/O error, 3 verification failure.

pub mod sweep;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analog_search::{peak_time, time_grid, SearchParams};
use crate::grover_discrete::optimal_iterations;
use crate::qmath::LogBase;
use sweep::{discrete_table, select, sweep, sweep_table, SweepOptions};
use table::Table;
use verify::{run_suite, Check, Status, VerifyOptions};

/// Largest register the CLI will simulate densely.
pub const MAX_CLI_QUBITS: usize = 12;
pub const DEFAULT_STEPS: usize = 1000;
/// Fault injected by `verify --corrupt-integrator`.
pub const CORRUPT_FAULT: f64 = 1e-2;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "analog-grover",
    version,
    about = "Analog Grover search: coherence, entanglement and monogamy data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate every diagnostic over a time grid.
    Sweep(CommonArgs),
    /// Check closed forms against the numerical oracle.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Perturb every integrator step (negative control).
        #[arg(long, hide = true)]
        corrupt_integrator: bool,
    },
    /// Emit the data behind one figure.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Number of qubits n, N = 2^n.
    #[arg(long, conflicts_with = "dim")]
    n_qubits: Option<usize>,
    /// Search space size N (a power of two).
    #[arg(long)]
    dim: Option<usize>,
    /// Energy scale E.
    #[arg(long)]
    energy: Option<f64>,
    /// Overlap x = <s|w>; defaults to 1/sqrt(N).
    #[arg(long)]
    overlap: Option<f64>,
    /// Marked basis index w.
    #[arg(long)]
    marked: Option<usize>,
    /// End of the time grid; defaults to twice the peak time.
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Logarithm base for relative-entropy coherence and entanglement entropy.
    #[arg(long, value_enum, default_value_t = LogBaseArg::Two)]
    log_base: LogBaseArg,
    /// Seed for the random-state checks of `verify`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report C(A|rest) - sum C(AB) instead of the squared monogamy score.
    #[arg(long)]
    unsquared_monogamy: bool,
    /// Iterations for the discrete Grover table of figure 3b.
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LogBaseArg {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl From<LogBaseArg> for LogBase {
    fn from(b: LogBaseArg) -> Self {
        match b {
            LogBaseArg::Two => LogBase::Two,
            LogBaseArg::E => LogBase::E,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    #[value(name = "1")]
    F1,
    #[value(name = "2")]
    F2,
    #[value(name = "3a")]
    F3a,
    #[value(name = "3b")]
    F3b,
    #[value(name = "4")]
    F4,
    #[value(name = "5")]
    F5,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::F1 => "1",
            FigureId::F2 => "2",
            FigureId::F3a => "3a",
            FigureId::F3b => "3b",
            FigureId::F4 => "4",
            FigureId::F5 => "5",
        }
    }

    /// Default `(n_qubits, energy, overlap)`.
    fn defaults(self) -> (usize, f64, Option<f64>) {
        match self {
            FigureId::F1 => (1, 1.0, Some(0.707)),
            FigureId::F2 | FigureId::F3a | FigureId::F3b | FigureId::F4 => (2, 1.0, None),
            FigureId::F5 => (5, 1.0, None),
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            FigureId::F1 => &["t", "P", "C_l1", "C_r"],
            FigureId::F2 => &["t", "S_ent", "C_1_rest", "P"],
            FigureId::F3a => &["t", "dC_dt"],
            FigureId::F3b => &sweep::DISCRETE_COLUMNS,
            FigureId::F4 => &["t", "C_pair", "dP_dt"],
            FigureId::F5 => &["t", "delta_C", "delta_EoF2", "P"],
        }
    }
}

/// Fully resolved run configuration, echoed into JSON output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    pub n_qubits: usize,
    pub dim: usize,
    pub energy: f64,
    pub overlap: f64,
    pub marked: usize,
    pub t_max: f64,
    pub steps: usize,
    pub log_base: String,
    pub seed: u64,
    pub unsquared_monogamy: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip)]
    params: Option<SearchParams>,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Io(String),
    Verify(usize),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
            CliError::Verify(_) => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Verify(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Sweep(args) => {
            let cfg = resolve(&args, "sweep", None, (2, 1.0, None))?;
            let records = sweep(
                cfg.params(),
                &time_grid(cfg.t_max, cfg.steps),
                &sweep_opts(&args),
            )?;
            emit(&args, &cfg, &sweep_table(&records))
        }
        Command::Figure { id, common } => {
            let mut cfg = resolve(&common, "figure", Some(id), id.defaults())?;
            let table = if id == FigureId::F3b {
                let p = *cfg.params();
                if !p.is_uniform() {
                    return Err(CliError::Config(
                        "figure 3b needs the uniform start state".into(),
                    ));
                }
                let k_max = common
                    .k_max
                    .unwrap_or_else(|| (4 * optimal_iterations(p.n_qubits())).max(4));
                cfg.k_max = Some(k_max);
                discrete_table(&p, k_max)?
            } else {
                let records = sweep(
                    cfg.params(),
                    &time_grid(cfg.t_max, cfg.steps),
                    &sweep_opts(&common),
                )?;
                select(cfg.params(), &records, id.columns())?
            };
            emit(&common, &cfg, &table)
        }
        Command::Verify {
            common,
            corrupt_integrator,
        } => {
            let cfg = resolve(&common, "verify", None, (2, 1.0, None))?;
            if common.overlap.is_some() && !cfg.params().is_uniform() {
                return Err(CliError::Config(
                    "verify runs on the uniform start state only".into(),
                ));
            }
            let ns: Vec<usize> = match common.n_qubits.or(common.dim.map(|_| cfg.n_qubits)) {
                Some(n) => vec![n],
                None => (2..=6).collect(),
            };
            if ns.iter().any(|&n| cfg.marked >= 1 << n) {
                return Err(CliError::Config(format!(
                    "marked index {} is out of range for the smallest register in the suite",
                    cfg.marked
                )));
            }
            let opts = VerifyOptions {
                energy: cfg.energy,
                marked: cfg.marked,
                steps: cfg.steps,
                seed: cfg.seed,
                fault: if corrupt_integrator {
                    CORRUPT_FAULT
                } else {
                    0.0
                },
            };
            let checks = run_suite(&ns, &opts)?;
            write_out(&common, |w| match common.format {
                Format::Csv => write_check_table(&checks, w),
                Format::Json => write_check_json(&cfg, &checks, w),
            })?;
            let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
            if failed > 0 {
                Err(CliError::Verify(failed))
            } else {
                Ok(())
            }
        }
    }
}

impl RunConfig {
    fn params(&self) -> &SearchParams {
        self.params
            .as_ref()
            .expect("resolved config carries parameters")
    }
}

fn sweep_opts(args: &CommonArgs) -> SweepOptions {
    SweepOptions {
        log_base: args.log_base.into(),
        unsquared_monogamy: args.unsquared_monogamy,
    }
}

fn resolve(
    args: &CommonArgs,
    command: &str,
    figure: Option<FigureId>,
    (def_n, def_energy, def_overlap): (usize, f64, Option<f64>),
) -> Result<RunConfig, CliError> {
    let n_qubits = match (args.n_qubits, args.dim) {
        (Some(n), _) => n,
        (None, Some(dim)) => {
            if dim < 2 || !dim.is_power_of_two() {
                return Err(CliError::Config(format!(
                    "--dim must be a power of two >= 2, got {dim}"
                )));
            }
            dim.trailing_zeros() as usize
        }
        (None, None) => def_n,
    };
    if !(1..=MAX_CLI_QUBITS).contains(&n_qubits) {
        return Err(CliError::Config(format!(
            "number of qubits must lie in [1, {MAX_CLI_QUBITS}], got {n_qubits}"
        )));
    }
    let energy = args.energy.unwrap_or(def_energy);
    let overlap = args.overlap.or(def_overlap);
    let params = match overlap {
        Some(x) => SearchParams::with_overlap(n_qubits, energy, x)?,
        None => SearchParams::uniform(n_qubits, energy)?,
    }
    .with_marked(args.marked.unwrap_or(0))?;
    let steps = args.steps.unwrap_or(DEFAULT_STEPS);
    if steps < 2 {
        return Err(CliError::Config(format!(
            "--steps must be at least 2, got {steps}"
        )));
    }
    let t_max = args.t_max.unwrap_or_else(|| 2.0 * peak_time(&params));
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(CliError::Config(format!(
            "--t-max must be positive and finite, got {t_max}"
        )));
    }
    if args.k_max == Some(0) {
        return Err(CliError::Config("--k-max must be at least 1".into()));
    }
    Ok(RunConfig {
        command: command.into(),
        figure: figure.map(|f| f.name().into()),
        n_qubits,
        dim: params.dim(),
        energy,
        overlap: params.overlap(),
        marked: params.marked(),
        t_max,
        steps,
        log_base: match args.log_base {
            LogBaseArg::Two => "2".into(),
            LogBaseArg::E => "e".into(),
        },
        seed: args.seed,
        unsquared_monogamy: args.unsquared_monogamy,
        k_max: args.k_max,
        params: Some(params),
    })
}

fn emit(args: &CommonArgs, cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    write_out(args, |w| match args.format {
        Format::Csv => table.write_csv(w),
        Format::Json => table.write_json(cfg, w),
    })
}

fn write_out(
    args: &CommonArgs,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match &args.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w).map_err(io)?;
            w.flush().map_err(io)
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w).map_err(io)?;
            w.flush().map_err(io)
        }
    }
}

fn write_check_table(checks: &[Check], w: &mut dyn Write) -> std::io::Result<()> {
    let width = checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(5)
        .max(5);
    writeln!(
        w,
        "{:<width$}  {:>2}  {:>14}  {:>9}  status",
        "check", "n", "max deviation", "tolerance"
    )?;
    for c in checks {
        let n = c
            .n_qubits
            .map(|n| n.to_string())
            .unwrap_or_else(|| "-".into());
        let dev = c.max_deviation.map(fmt_dev).unwrap_or_else(|| "-".into());
        writeln!(
            w,
            "{:<width$}  {:>2}  {:>14}  {:>9}  {}",
            c.name,
            n,
            dev,
            fmt_dev(c.tolerance),
            c.status
        )?;
    }
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    let skipped = checks.iter().filter(|c| c.status == Status::Skip).count();
    writeln!(
        w,
        "{} checks, {} failed, {} skipped",
        checks.len(),
        failed,
        skipped
    )
}

fn fmt_dev(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v:.2e}")
    }
}

fn write_check_json(cfg: &RunConfig, checks: &[Check], w: &mut dyn Write) -> std::io::Result<()> {
    let doc = serde_json::json!({
        "config": cfg,
        "checks": checks,
        "passed": checks.iter().all(|c| c.status != Status::Fail),
    });
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}
