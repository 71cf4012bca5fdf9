//! File-level commands behind the `rowhorn` binary.
//!
//! [`run`] parses arguments and dispatches to [`cmd_check`] or
//! [`cmd_query`]. Every command returns a [`Report`] holding the text for
//! stdout and stderr plus the exit code, so callers decide what to print.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rowhorn_core::clause::{goal_vars, parse_goal_with};
use rowhorn_core::engine::{solve, EngineConfig, Mode, SearchStatus};
use rowhorn_core::infer::{infer_scheme, parse_ml, TypeEnv};
use rowhorn_core::term::{VarNames, VarSupply};
use rowhorn_core::types::{Kind, KindEnv};
use rowhorn_core::parse_program;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const NO: i32 = 1;
    pub const IO: i32 = 2;
    pub const SYNTAX: i32 = 3;
    pub const KIND: i32 = 4;
    pub const TYPE: i32 = 5;
    pub const BUDGET: i32 = 6;
    pub const USAGE: i32 = 64;
}

#[derive(Parser, Debug)]
#[command(name = "rowhorn", version, about = "Horn-clause resolution and row-polymorphic type checking")]
struct Args {
    #[command(subcommand)]
    command: SubArgs,
}

#[derive(Subcommand, Debug)]
enum SubArgs {
    /// Infer the principal type of a `.ml1` expression.
    Check {
        file: PathBuf,
        /// Extra type constructor, e.g. `Map:* -> * -> *`.
        #[arg(long = "declare", value_name = "NAME:KIND")]
        declare: Vec<String>,
    },
    /// Solve a goal against a clause file.
    Query {
        file: PathBuf,
        #[arg(long, value_name = "ATOMS")]
        goal: String,
        #[arg(long)]
        coinductive: bool,
        /// Resolution steps allowed on one branch.
        #[arg(long, value_name = "N", default_value_t = EngineConfig::DEFAULT_DEPTH_LIMIT as u32,
              value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[arg(long = "max-solutions", value_name = "N", default_value_t = DEFAULT_MAX_SOLUTIONS as u32,
              value_parser = clap::value_parser!(u32).range(1..))]
        max_solutions: u32,
        #[arg(long)]
        trace: bool,
    },
}

pub const DEFAULT_MAX_SOLUTIONS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Query { goal: String },
}

/// A validated command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub command: Command,
    pub input: PathBuf,
    pub mode: Mode,
    pub depth_limit: usize,
    pub max_solutions: usize,
    pub trace: bool,
    /// `--declare` flags, already parsed.
    pub declarations: Vec<(String, Kind)>,
}

impl CliConfig {
    pub fn check(input: impl Into<PathBuf>) -> Self {
        CliConfig {
            command: Command::Check,
            input: input.into(),
            mode: Mode::Inductive,
            depth_limit: EngineConfig::DEFAULT_DEPTH_LIMIT,
            max_solutions: DEFAULT_MAX_SOLUTIONS,
            trace: false,
            declarations: Vec::new(),
        }
    }

    pub fn query(input: impl Into<PathBuf>, goal: impl Into<String>) -> Self {
        CliConfig {
            command: Command::Query { goal: goal.into() },
            ..Self::check(input)
        }
    }

    fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            mode: self.mode,
            ..EngineConfig::inductive()
        }
        .with_depth_limit(self.depth_limit.max(1))
        .with_max_solutions(self.max_solutions)
        .with_trace(self.trace)
    }

    fn kind_env(&self) -> KindEnv {
        let mut env = KindEnv::builtin();
        for (name, kind) in &self.declarations {
            env.declare(name, kind.clone());
        }
        env
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
    BudgetExceeded,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub outcome: Outcome,
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl Report {
    fn success(stdout: String) -> Self {
        Report {
            outcome: Outcome::Success,
            stdout,
            stderr: String::new(),
            exit_code: exit::SUCCESS,
        }
    }

    fn error(exit_code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Report {
            outcome: Outcome::Error,
            stdout: String::new(),
            stderr,
            exit_code,
        }
    }
}

/// Parses `NAME:KIND`, e.g. `Map:* -> * -> *`.
pub fn parse_declaration(text: &str) -> Result<(String, Kind), String> {
    let (name, kind) = text
        .split_once(':')
        .ok_or_else(|| format!("invalid declaration '{text}': expected NAME:KIND"))?;
    let name = name.trim();
    let valid = name.starts_with(|c: char| c.is_uppercase())
        && name.chars().all(|c| c.is_alphanumeric() || c == '_');
    if !valid {
        return Err(format!(
            "invalid declaration '{text}': constructor names start with an uppercase letter"
        ));
    }
    let kind = kind
        .parse::<Kind>()
        .map_err(|e| format!("invalid declaration '{text}': {e}"))?;
    Ok((name.to_string(), kind))
}

/// Validates a command line. `Err` carries the report for usage errors and
/// for `--help`/`--version`.
pub fn parse_args<I, T>(args: I) -> Result<CliConfig, Report>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return Err(if e.use_stderr() {
                Report::error(exit::USAGE, text)
            } else {
                Report::success(text)
            });
        }
    };
    match args.command {
        SubArgs::Check { file, declare } => {
            let mut declarations = Vec::new();
            for d in &declare {
                declarations.push(parse_declaration(d).map_err(|m| {
                    Report::error(exit::USAGE, format!("error: {m}"))
                })?);
            }
            Ok(CliConfig {
                declarations,
                ..CliConfig::check(file)
            })
        }
        SubArgs::Query {
            file,
            goal,
            coinductive,
            depth,
            max_solutions,
            trace,
        } => Ok(CliConfig {
            mode: if coinductive {
                Mode::Coinductive
            } else {
                Mode::Inductive
            },
            depth_limit: depth as usize,
            max_solutions: max_solutions as usize,
            trace,
            ..CliConfig::query(file, goal)
        }),
    }
}

/// Parses arguments and runs the selected command.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(args) {
        Ok(config) => execute(&config),
        Err(report) => report,
    }
}

pub fn execute(config: &CliConfig) -> Report {
    match &config.command {
        Command::Check => cmd_check(&config.input, config),
        Command::Query { goal } => cmd_query(&config.input, goal, config),
    }
}

fn read(path: &Path) -> Result<String, Report> {
    fs::read_to_string(path).map_err(|e| {
        Report::error(exit::IO, format!("error: cannot read '{}': {e}", path.display()))
    })
}

/// Type-checks a `.ml1` file and prints its principal type.
pub fn cmd_check(path: &Path, config: &CliConfig) -> Report {
    let text = match read(path) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let expr = match parse_ml(&text) {
        Ok(e) => e,
        Err(e) => return Report::error(exit::SYNTAX, e.to_string()),
    };
    let env = config.kind_env();
    match infer_scheme(&env, &TypeEnv::new(), &expr, &mut VarSupply::new()) {
        Ok(scheme) => Report::success(format!("{scheme}\n")),
        Err(e) if e.is_kind_error() => Report::error(exit::KIND, e.to_string()),
        Err(e) => Report::error(exit::TYPE, e.to_string()),
    }
}

/// Solves `goal` against the clause file at `path`.
pub fn cmd_query(path: &Path, goal: &str, config: &CliConfig) -> Report {
    let text = match read(path) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let program = match parse_program(&text) {
        Ok(p) => p,
        Err(e) => return Report::error(exit::SYNTAX, e.to_string()),
    };
    let atoms = match parse_goal_with(goal, &mut VarSupply::new()) {
        Ok(a) => a,
        Err(e) => return Report::error(exit::SYNTAX, format!("in goal: {e}")),
    };
    let query_vars = goal_vars(&atoms);
    let mut engine = config.engine_config();
    if query_vars.is_empty() {
        engine = engine.with_max_solutions(1);
    }

    let mut answers = Vec::new();
    let mut traces = Vec::new();
    let mut solutions = solve(&program, &atoms, engine);
    for sol in solutions.by_ref() {
        let mut names = VarNames::new();
        for v in &query_vars {
            names.name(v);
        }
        let bindings = sol.render(&mut names);
        let mut line = if bindings.is_empty() {
            "yes".to_string()
        } else {
            bindings
                .iter()
                .map(|(n, t)| format!("{n} = {t}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        if sol.coinductive {
            line.push_str(" (coinductive)");
        }
        if let Some(d) = &sol.derivation {
            traces.push(d.lines(&mut names));
        }
        answers.push(line);
    }
    let status = solutions.status();

    if answers.is_empty() {
        let (outcome, code, line) = if status == SearchStatus::BudgetExceeded {
            (Outcome::BudgetExceeded, exit::BUDGET, "unknown (budget exceeded)")
        } else {
            (Outcome::Failure, exit::NO, "no")
        };
        return Report {
            outcome,
            stdout: format!("{line}\n"),
            stderr: String::new(),
            exit_code: code,
        };
    }

    let mut out = String::new();
    if config.trace {
        for (i, (lines, answer)) in traces.iter().zip(&answers).enumerate() {
            if i > 0 {
                out.push_str(";\n");
            }
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
            let _ = writeln!(out, "{answer}");
        }
    } else {
        let _ = writeln!(out, "{}", answers.join(" ; "));
    }
    Report::success(out)
}
