//! Scenario-driven front end: `obkit <command> --scenario <path>`.
//!
//! [`run`] does everything except touch the process, so tests can drive it
//! in-process; the binary only prints and exits.

pub mod commands;
pub mod diag;
pub mod json;
pub mod report;
pub mod scenario;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::report::{Failure, Report, Status};
use crate::scenario::Scenario;

#[derive(Debug, Parser)]
#[command(name = "obkit", version, about = "Second-obstruction algebra on scenario files")]
pub struct Cli {
    /// Scenario file (restricted JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for randomized self-checks; `report-paper` ignores it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of a group word (or, with --ring, a group-ring element).
    Normalize {
        #[arg(allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        ring: bool,
    },
    /// Decide conjugacy of two elements and give a conjugating witness.
    Conjugacy {
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Wh1+ normal forms and detection by a coefficient map.
    #[command(subcommand)]
    Wh(WhCommand),
    /// Cocycle checks and the chi map on three matrices.
    Chi {
        #[arg(long)]
        cocycle: Option<String>,
        /// Three matrix names, comma separated.
        #[arg(long, value_delimiter = ',')]
        matrices: Option<Vec<String>>,
        /// Also add 1 at every table entry and confirm each change is caught.
        #[arg(long)]
        mutations: bool,
    },
    /// Involution, suspensions and stable obstruction of a lens.
    Obstruct {
        #[arg(long)]
        lens: Option<String>,
    },
    /// Brute-force Smith normal form oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// The full lens, involution, retraction and circle pipeline.
    ReportPaper,
}

#[derive(Debug, Subcommand)]
pub enum WhCommand {
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "Z")]
        module: String,
    },
    Detect {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        map: String,
        /// Source module; defaults to the map's source.
        #[arg(long)]
        module: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// `oracle wh Z2 Ztrivial`, or a finite scenario group with --module.
    Wh {
        /// One of Z2, Z3, Z4, Z6, Z2xZ2.
        group: Option<String>,
        /// One of Ztrivial, Z2trivial, Z^2trivial.
        coefficients: Option<String>,
        #[arg(long)]
        module: Option<String>,
        /// Random pairs compared when --seed is given.
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
}

/// What the process should print and exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(status: Status, stderr: String) -> Self {
        Outcome {
            status,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Reads and validates a scenario file; diagnostics are prefixed with the
/// path.
pub fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: cannot read scenario: {e}", path.display())))?;
    scenario::load(&text).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| format!("{}:{d}", path.display())).collect();
        Failure::invalid(lines.join("\n"))
    })
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let loaded = cli.scenario.as_deref().map(load_scenario).transpose()?;
    let needs = |what: &str| Failure::new(Status::Usage, format!("{what} needs --scenario <path>"));
    match &cli.command {
        Command::Normalize { word, ring } => {
            let s = loaded.unwrap_or_else(commands::default_scenario);
            commands::normalize(&s, word, *ring)
        }
        Command::Conjugacy { first, second } => {
            let s = loaded.unwrap_or_else(commands::default_scenario);
            commands::conjugacy(&s, first, second)
        }
        Command::Wh(WhCommand::Normalize { expr, module }) => {
            let s = loaded.unwrap_or_else(commands::default_scenario);
            commands::wh_normalize(&s, module, expr)
        }
        Command::Wh(WhCommand::Detect { expr, map, module }) => {
            let s = loaded.ok_or_else(|| needs("wh detect"))?;
            commands::wh_detect(&s, module.as_deref(), map, expr)
        }
        Command::Chi {
            cocycle,
            matrices,
            mutations,
        } => {
            let s = loaded.ok_or_else(|| needs("chi"))?;
            commands::chi(&s, cocycle.as_deref(), matrices.clone(), *mutations)
        }
        Command::Obstruct { lens } => {
            let s = loaded.ok_or_else(|| needs("obstruct"))?;
            commands::obstruct(&s, lens.as_deref())
        }
        Command::Oracle(OracleCommand::Wh {
            group,
            coefficients,
            module,
            pairs,
        }) => match (group, coefficients, &loaded) {
            (Some(gt), Some(ct), _) => {
                let g = commands::oracle_group(gt).ok_or_else(|| {
                    Failure::new(
                        Status::Usage,
                        format!(
                            "unknown group {gt} (expected one of {})",
                            commands::ORACLE_GROUPS.join(", ")
                        ),
                    )
                })?;
                let m = commands::oracle_coefficients(&g, ct).ok_or_else(|| {
                    Failure::new(
                        Status::Usage,
                        format!(
                            "unknown coefficients {ct} (expected one of {})",
                            commands::ORACLE_COEFFICIENTS.join(", ")
                        ),
                    )
                })?;
                commands::oracle_wh(&g, &m, ct, *pairs, cli.seed)
            }
            (None, None, Some(s)) => {
                let name = module.as_deref().unwrap_or("Z");
                let m = s
                    .modules
                    .get(name)
                    .ok_or_else(|| Failure::invalid(format!("undeclared module \"{name}\"")))?;
                commands::oracle_wh(&s.group, m, name, *pairs, cli.seed)
            }
            _ => Err(Failure::new(
                Status::Usage,
                "oracle wh takes a group and coefficient token, or --scenario with --module",
            )),
        },
        Command::ReportPaper => {
            let s = loaded.ok_or_else(|| needs("report-paper"))?;
            commands::report_paper(&s)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    status: Status::Ok,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome::failure(Status::Usage, text),
            };
        }
    };
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(f) => return Outcome::failure(f.status, format!("{}\n", f.message)),
    };
    let text = report.to_string();
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                status: Status::Ok,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::failure(
                Status::Invalid,
                format!("{}: cannot write report: {e}\n", path.display()),
            ),
        },
        None => Outcome {
            status: Status::Ok,
            stdout: text,
            stderr: String::new(),
        },
    }
}
