//! Command-line interface. [`run`] returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldsolve_core::oracle::{brute_force_ap, held_karp, tsptw_enumerate};
use ldsolve_core::{Cost, ProblemKind};

use crate::bench::{partition_summary, read_suite_list, run_suite, solve_record};
use crate::config::{time_limit_from_secs, ConfigError, OutputFormat, SolveConfig};
use crate::instance_io::{load_instance, LoadError};
use crate::report::{write_single, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ldsolve",
    version,
    about = "TSP and TSPTW by limited discrepancy search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance.
    Solve {
        path: PathBuf,
        #[command(flatten)]
        opts: SolveArgs,
    },
    /// Solve a suite and print one row per instance plus averages.
    Bench {
        /// Instance files, or suite files (`.txt`) listing one instance path per line.
        paths: Vec<PathBuf>,
        #[command(flatten)]
        opts: SolveArgs,
    },
    /// Exact value from an exhaustive reference solver.
    Oracle {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = OracleMethod::Auto)]
        method: OracleMethod,
        #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
        format: OutputFormat,
    },
    /// Root bound, good/bad partition and per-level bounds.
    PartitionReport {
        path: PathBuf,
        #[command(flatten)]
        opts: SolveArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMethod {
    /// Held-Karp for a TSP, enumeration for a TSPTW.
    Auto,
    HeldKarp,
    Tsptw,
    /// Assignment relaxation by brute force.
    Ap,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Good-set ratio in (0, 1]; defaults to 0.075 for a TSP and 0.15 for a TSPTW.
    #[arg(long)]
    ratio: Option<f64>,
    /// Lagrangean subtour cuts at the root.
    #[arg(long, value_enum, default_value_t = Switch::On)]
    cuts: Switch,
    /// Subgradient iteration cap.
    #[arg(long, default_value_t = ldsolve_core::lagrangean::DEFAULT_SUBGRADIENT_ITERATIONS)]
    sg_iters: usize,
    /// Stop after the level-0 subproblem.
    #[arg(long)]
    first_only: bool,
    #[arg(long)]
    max_k: Option<usize>,
    /// Seconds.
    #[arg(long, env = "LDSOLVE_TIME_LIMIT")]
    time_limit: Option<f64>,
    /// Search every level instead of pruning with the discrepancy bound.
    #[arg(long)]
    no_theorem1: bool,
    /// Only accept tours of cost at most this value.
    #[arg(long)]
    ub: Option<Cost>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
}

impl SolveArgs {
    fn config(&self) -> Result<SolveConfig, ConfigError> {
        let time_limit = match self.time_limit {
            Some(s) => Some(time_limit_from_secs(s)?),
            None => SolveConfig::default().time_limit,
        };
        let config = SolveConfig {
            ratio: self.ratio,
            cuts: self.cuts == Switch::On,
            sg_iters: self.sg_iters,
            first_only: self.first_only,
            max_k: self.max_k,
            time_limit,
            theorem1: !self.no_theorem1,
            ub: self.ub,
            format: self.format,
        };
        config.validate()?;
        Ok(config)
    }
}

fn load_error_code(e: &LoadError) -> i32 {
    match e {
        LoadError::Io { .. } | LoadError::Parse { .. } => EXIT_PARSE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "ldsolve: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    match command {
        Command::Solve { path, opts } => {
            let Some(config) = config_or_report(&opts, err)? else {
                return Ok(EXIT_USAGE);
            };
            let inst = match load_instance(&path) {
                Ok(i) => i,
                Err(e) => {
                    writeln!(err, "ldsolve: {e}")?;
                    return Ok(load_error_code(&e));
                }
            };
            let record = match solve_record(&inst, &config) {
                Ok(r) => r,
                Err(e) => {
                    writeln!(err, "ldsolve: {e}")?;
                    return Ok(EXIT_USAGE);
                }
            };
            write_single(&record, config.format, out)?;
            Ok(
                if record.objective.is_none() && record.status == Status::Infeasible {
                    EXIT_INFEASIBLE
                } else {
                    EXIT_OK
                },
            )
        }
        Command::Bench { paths, opts } => {
            let Some(config) = config_or_report(&opts, err)? else {
                return Ok(EXIT_USAGE);
            };
            let mut files = Vec::new();
            for p in paths {
                if is_suite_list(&p) {
                    match read_suite_list(&p) {
                        Ok(list) => files.extend(list),
                        Err(e) => {
                            writeln!(err, "ldsolve: cannot read {}: {e}", p.display())?;
                            return Ok(EXIT_PARSE);
                        }
                    }
                } else {
                    files.push(p);
                }
            }
            let mut report = run_suite(&files, &config);
            if config.first_only {
                for r in &mut report.records {
                    r.pr = None;
                }
            }
            for r in report.records.iter().filter(|r| r.error.is_some()) {
                writeln!(
                    err,
                    "ldsolve: {}: {}",
                    r.instance,
                    r.error.as_deref().unwrap_or_default()
                )?;
            }
            report.write(config.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Oracle {
            path,
            method,
            format,
        } => {
            let inst = match load_instance(&path) {
                Ok(i) => i,
                Err(e) => {
                    writeln!(err, "ldsolve: {e}")?;
                    return Ok(load_error_code(&e));
                }
            };
            let method = match method {
                OracleMethod::Auto if inst.kind() == ProblemKind::Tsp => OracleMethod::HeldKarp,
                OracleMethod::Auto => OracleMethod::Tsptw,
                m => m,
            };
            let (label, value) = match method {
                OracleMethod::HeldKarp => ("held-karp", held_karp(&inst).map(Some)),
                OracleMethod::Tsptw => ("tsptw-enumeration", tsptw_enumerate(&inst)),
                _ => {
                    let model = ldsolve_core::model::Model::new(&inst);
                    (
                        "assignment",
                        brute_force_ap(model.cost(), model.root_domains()),
                    )
                }
            };
            let value = match value {
                Ok(v) => v,
                Err(e) => {
                    writeln!(err, "ldsolve: {e}")?;
                    return Ok(EXIT_USAGE);
                }
            };
            match format {
                OutputFormat::Json => {
                    let doc = serde_json::json!({
                        "instance": inst.name(),
                        "method": label,
                        "value": value,
                    });
                    writeln!(out, "{doc}")?;
                }
                OutputFormat::Csv => {
                    writeln!(out, "instance,method,value")?;
                    writeln!(
                        out,
                        "{},{label},{}",
                        inst.name(),
                        value.map(|v| v.to_string()).unwrap_or_default()
                    )?;
                }
                OutputFormat::Plain => match value {
                    Some(v) => writeln!(out, "{label} {v}")?,
                    None => writeln!(out, "{label} infeasible")?,
                },
            }
            Ok(if value.is_some() {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            })
        }
        Command::PartitionReport { path, opts } => {
            let Some(config) = config_or_report(&opts, err)? else {
                return Ok(EXIT_USAGE);
            };
            let inst = match load_instance(&path) {
                Ok(i) => i,
                Err(e) => {
                    writeln!(err, "ldsolve: {e}")?;
                    return Ok(load_error_code(&e));
                }
            };
            let summary = match partition_summary(&inst, &config) {
                Ok(Some(s)) => s,
                Ok(None) => {
                    writeln!(out, "{}: infeasible at the root", inst.name())?;
                    return Ok(EXIT_INFEASIBLE);
                }
                Err(e) => {
                    writeln!(err, "ldsolve: {e}")?;
                    return Ok(EXIT_USAGE);
                }
            };
            match config.format {
                OutputFormat::Json => {
                    serde_json::to_writer_pretty(&mut *out, &summary)?;
                    writeln!(out)?;
                }
                OutputFormat::Csv => {
                    writeln!(out, "k,bound")?;
                    for (k, b) in summary.level_bounds.iter().enumerate() {
                        writeln!(out, "{k},{b}")?;
                    }
                }
                OutputFormat::Plain => {
                    let join = |v: &[i64]| {
                        v.iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    writeln!(out, "instance     {}", summary.instance)?;
                    writeln!(out, "n            {}", summary.n)?;
                    writeln!(out, "ratio        {}", summary.ratio)?;
                    writeln!(out, "plain bound  {}", summary.plain_bound)?;
                    writeln!(
                        out,
                        "root bound   {} ({} cuts, {} iterations)",
                        summary.root_bound, summary.cuts, summary.subgradient_iterations
                    )?;
                    writeln!(out, "size         {:.3}", summary.size)?;
                    writeln!(out, "max k        {}", summary.max_discrepancy)?;
                    writeln!(out, "L            {}", join(&summary.l_list))?;
                    writeln!(out, "bounds       {}", join(&summary.level_bounds))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn config_or_report(opts: &SolveArgs, err: &mut dyn Write) -> std::io::Result<Option<SolveConfig>> {
    match opts.config() {
        Ok(c) => Ok(Some(c)),
        Err(e) => {
            writeln!(err, "ldsolve: {e}")?;
            Ok(None)
        }
    }
}

fn is_suite_list(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("txt" | "lst")
    )
}
