//! Command-line front end for the `permit_games` engine: scenario files,
//! command dispatch and report rendering.

pub mod commands;
pub mod report;
pub mod reproduce;
pub mod scenario;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use permit_games::partition::DEFAULT_PARTITION_LIMIT;
use permit_games::{Rational, Rule};

use report::Report;
use scenario::{Format, Scenario};

/// Environment variable that sets the default output format. It never
/// affects numerics.
pub const FORMAT_ENV: &str = "PERMIT_GAMES_FORMAT";

pub const DEFAULT_PRECISION: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad input: unreadable or invalid scenario, malformed flag value.
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<permit_games::Error> for CliError {
    fn from(e: permit_games::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "permit-games", version, about = "Cooperative analysis of capped, taxed emission permits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scenario file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub scenario: Option<PathBuf>,

    /// Division rule: cea, cel, prop or tal. Overrides the scenario.
    #[arg(long, global = true)]
    pub rule: Option<Rule>,

    /// Decimal places in reports.
    #[arg(long, global = true, value_name = "N")]
    pub precision: Option<usize>,

    /// Report format. Falls back to the scenario, then to $PERMIT_GAMES_FORMAT.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Largest firm count for which partitions are enumerated.
    #[arg(long, global = true, value_name = "N")]
    pub partition_limit: Option<usize>,

    /// Report grid for `mechanism`, e.g. `0,10,50/3,20`.
    #[arg(long, global = true, value_name = "SPEC")]
    pub grid: Option<String>,

    /// Write the loaded scenario, with flag overrides applied, to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub dump_scenario: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameKind {
    Optimistic,
    Pessimistic,
    ResourcePlus,
    ResourceMinus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal permit demand of every coalition.
    Demands,
    /// Per-partition shares and values, and the derived characteristic games.
    Game,
    /// Core emptiness and membership for one derived game.
    Cores {
        #[arg(long, value_enum, default_value = "pessimistic")]
        game: GameKind,
        /// Allocation to test for membership, e.g. `700,800,800`.
        #[arg(long, value_name = "VALUES")]
        check: Option<String>,
    },
    /// The permit games R+ and R- with their witnessing partitions.
    ResourceGames,
    /// Rule allocation of the cap, its stability, and the dual-based money allocation.
    Pipeline,
    /// Exhaustive incentive check of the rule on report grids.
    Mechanism {
        /// Report profile to test as an equilibrium, e.g. `0,20,25`.
        #[arg(long, value_name = "VALUES")]
        profile: Option<String>,
    },
    /// Permit trades at a uniform price turning holdings into a money target.
    Trade {
        /// Initial permits; defaults to the rule's division of the cap.
        #[arg(long, value_name = "VALUES")]
        holdings: Option<String>,
        /// Money target; defaults to the dual-based allocation.
        #[arg(long, value_name = "VALUES")]
        target: Option<String>,
        /// Permit price; chosen automatically when omitted.
        #[arg(long)]
        price: Option<String>,
    },
    /// Recompute the published worked examples and compare with stored figures.
    ReproducePaper,
}

/// Resolved settings shared by all commands.
pub struct Context {
    pub scenario: Scenario,
    pub rule: Rule,
    pub precision: usize,
    pub partition_limit: usize,
    pub grid: Option<Vec<Rational>>,
}

pub struct Outcome {
    pub report: Report,
    /// The analysis reached a negative verdict.
    pub negative: bool,
}

impl Outcome {
    pub fn positive(report: Report) -> Self {
        Outcome { report, negative: false }
    }
}

/// Exit codes: success, negative verdict, input error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

fn default_format(scenario: Option<&Scenario>) -> Result<Format, CliError> {
    if let Some(f) = scenario.and_then(|s| s.options.format) {
        return Ok(f);
    }
    match std::env::var(FORMAT_ENV) {
        Ok(v) if !v.is_empty() => v.parse().map_err(|e| CliError::Input(format!("{FORMAT_ENV}: {e}"))),
        _ => Ok(Format::Table),
    }
}

/// Runs a parsed command line; returns the rendered report and exit code,
/// or an input error.
pub fn execute(cli: &Cli) -> Result<(String, u8), CliError> {
    if matches!(cli.command, Command::ReproducePaper) {
        let precision = cli.precision.unwrap_or(DEFAULT_PRECISION);
        let outcome = reproduce::run()?;
        let format = match cli.format {
            Some(f) => f,
            None => default_format(None)?,
        };
        let code = if outcome.negative { EXIT_NEGATIVE } else { EXIT_OK };
        return Ok((outcome.report.render(format, precision), code));
    }
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| CliError::Input("this command needs --scenario <PATH>".into()))?;
    let mut scenario = scenario::load_scenario(path)?;
    if let Some(rule) = cli.rule {
        scenario.rule = rule;
    }
    if let Some(p) = cli.precision {
        scenario.options.precision = Some(p);
    }
    if let Some(l) = cli.partition_limit {
        if l == 0 {
            return Err(CliError::Input("--partition-limit must be at least 1".into()));
        }
        scenario.options.partition_limit = Some(l);
    }
    if let Some(spec) = &cli.grid {
        scenario.options.grid = Some(scenario::parse_list(spec, "--grid")?);
    }
    let format = match cli.format {
        Some(f) => f,
        None => default_format(Some(&scenario))?,
    };
    if let Some(out) = &cli.dump_scenario {
        std::fs::write(out, scenario::dump_scenario(&scenario))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out.display())))?;
    }
    let ctx = Context {
        rule: scenario.rule,
        precision: scenario.options.precision.unwrap_or(DEFAULT_PRECISION),
        partition_limit: scenario.options.partition_limit.unwrap_or(DEFAULT_PARTITION_LIMIT),
        grid: scenario.options.grid.clone(),
        scenario,
    };
    let outcome = commands::run(&cli.command, &ctx)?;
    let code = if outcome.negative { EXIT_NEGATIVE } else { EXIT_OK };
    Ok((outcome.report.render(format, ctx.precision), code))
}
