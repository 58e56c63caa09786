//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 verification mismatch.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::challenge::{
    emit_change_command, emit_server_conf, parse_change_command, validate, ChallengeError, ParamOverride,
    ParamRegistry,
};
use crate::error::Error;
use crate::fixtures::{self, Fixture, FixtureSet};
use crate::ingest::{aggregate, dump_matrix, load_matrix, load_model, load_ranking, parse_results};
use crate::metrics::{l1_distance, rank_differences};
use crate::model::{Ranking, ScoreMatrix};
use crate::report::{build_report, render_bias_report, render_points_csv, render_points_markdown};
use crate::schemes::{points_table, rank, PointsTable, SchemeKind};
use crate::simlab::{bias_table, simulate_round_robin, SimConfig, BIAS_GAMES, DEFAULT_SIGMA, TOURNAMENT_GAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

pub const DEFAULT_SEED: u64 = 2016;

#[derive(Debug, Parser)]
#[command(name = "league-eval", version, about = "Round-robin ranking schemes, ranking distances and score-model simulation")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Discrete,
    Continuous,
}

impl From<SchemeArg> for SchemeKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Discrete => SchemeKind::Discrete,
            SchemeArg::Continuous => SchemeKind::Continuous,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Points table and ranking of a matrix file, game log or fixture (`@table1`).
    Rank {
        input: String,
        #[arg(long, value_enum, default_value = "discrete")]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
    },
    /// L1 distance between two rankings. Matrix sources are ranked first.
    Compare {
        first: String,
        second: String,
        #[arg(long, value_enum, default_value = "discrete")]
        scheme: SchemeArg,
    },
    /// Monte Carlo vs exact continuous points for equal and asymmetric pairs.
    Bias {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1.0, 2.0, 3.0])]
        q: Vec<f64>,
        #[arg(long, default_value_t = BIAS_GAMES)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        threads: Threads,
    },
    /// Simulates a round robin from a model file and ranks it under both schemes.
    Simulate {
        model: String,
        #[arg(long, default_value_t = TOURNAMENT_GAMES)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Default sigma for pairs that do not set one.
        #[arg(long)]
        sigma: Option<f64>,
        /// Where to write the simulated matrix file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        threads: Threads,
    },
    /// Coach command and server.conf tooling.
    Challenge {
        #[command(subcommand)]
        command: ChallengeCommand,
    },
    /// Regenerates the published results tables and audits every cell.
    Report,
}

#[derive(Debug, Args)]
struct Threads {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum ChallengeCommand {
    /// Parses a change_player_param command (`-` reads stdin) and validates it.
    Parse {
        command: String,
        /// Extra registry entries (JSON array of {name, min?, max?}).
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Unknown parameters are errors (exit 2).
        #[arg(long)]
        strict: bool,
    },
    /// Emits the canonical command for `--set name=value` assignments.
    Emit {
        #[arg(long = "set", value_name = "NAME=VALUE", required = true)]
        set: Vec<String>,
    },
    /// Emits a server.conf snippet.
    Conf {
        #[arg(long, conflicts_with = "off")]
        on: bool,
        #[arg(long)]
        off: bool,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ChallengeError> for Failure {
    fn from(e: ChallengeError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(stderr, "verification failed:\n{msg}");
            EXIT_MISMATCH
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Rank { input, scheme, format } => cmd_rank(&input, scheme.into(), format, stdin, out),
        Command::Compare { first, second, scheme } => cmd_compare(&first, &second, scheme.into(), stdin, out),
        Command::Bias { q, n, sigma, seed, threads } => {
            let cfg = SimConfig::new(n, seed, sigma)?;
            let rows = with_threads(threads.threads, || Ok(bias_table(&q, &cfg)?))?;
            out.write_all(render_bias_report(&rows, &cfg)?.as_bytes())?;
            Ok(())
        }
        Command::Simulate { model, n, seed, sigma, out: path, threads } => {
            let text = read_input(&model, stdin)?;
            let model = load_model(&text, sigma)?;
            let cfg = SimConfig::new(n, seed, sigma.unwrap_or(DEFAULT_SIGMA))?;
            let matrix = with_threads(threads.threads, || Ok(simulate_round_robin(&model, &cfg)?))?;
            cmd_simulate(&matrix, n, seed, path.as_ref(), out)
        }
        Command::Challenge { command } => cmd_challenge(command, stdin, out, err),
        Command::Report => cmd_report(&FixtureSet::embedded(), out),
    }
}

fn with_threads<T: Send, F: FnOnce() -> Result<T, Failure> + Send>(threads: Option<usize>, f: F) -> Result<T, Failure> {
    match threads {
        None => f(),
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            pool.install(f)
        }
    }
}

enum Source {
    Matrix(ScoreMatrix),
    Ranking(Ranking),
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }
}

/// `@name` fixture, `-` for stdin, or a path. Files starting with `{` are
/// matrix files, `[` ranking files, anything else a CSV game log.
fn load_source(spec: &str, stdin: &mut dyn Read) -> Result<Source, Failure> {
    if let Some(name) = spec.strip_prefix('@') {
        return match fixtures::fixture(name)? {
            Fixture::Table(t) => Ok(Source::Matrix(t.matrix)),
            Fixture::Ranking(r) => Ok(Source::Ranking(r)),
            Fixture::Evaluation(_) => Err(Failure::Usage(format!(
                "@{name} is an evaluation row, not a round robin; merge it into @table1 (see @table3)"
            ))),
        };
    }
    let text = read_input(spec, stdin)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        Ok(Source::Matrix(load_matrix(&text)?))
    } else if trimmed.starts_with('[') {
        Ok(Source::Ranking(load_ranking(&text)?))
    } else {
        Ok(Source::Matrix(aggregate(&parse_results(&text)?)?))
    }
}

fn load_matrix_source(spec: &str, stdin: &mut dyn Read) -> Result<ScoreMatrix, Failure> {
    match load_source(spec, stdin)? {
        Source::Matrix(m) => Ok(m),
        Source::Ranking(_) => Err(Failure::Usage(format!("{spec} is a ranking, not a results matrix"))),
    }
}

fn ranked(matrix: &ScoreMatrix, scheme: SchemeKind) -> Result<(PointsTable, Ranking), Failure> {
    let table = points_table(matrix, scheme)?;
    let ranking = rank(&table)?;
    Ok((table, ranking))
}

fn cmd_rank(input: &str, scheme: SchemeKind, format: Format, stdin: &mut dyn Read, out: &mut dyn Write) -> CmdResult {
    let matrix = load_matrix_source(input, stdin)?;
    let (table, ranking) = ranked(&matrix, scheme)?;
    let text = match format {
        Format::Markdown => render_points_markdown(&table, &ranking),
        Format::Csv => render_points_csv(&table, &ranking),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn resolve_ranking(spec: &str, scheme: SchemeKind, stdin: &mut dyn Read) -> Result<Ranking, Failure> {
    match load_source(spec, stdin)? {
        Source::Ranking(r) => Ok(r),
        Source::Matrix(m) => Ok(ranked(&m, scheme)?.1),
    }
}

fn cmd_compare(first: &str, second: &str, scheme: SchemeKind, stdin: &mut dyn Read, out: &mut dyn Write) -> CmdResult {
    if first == "-" && second == "-" {
        return Err(Failure::Usage("only one source may read stdin".into()));
    }
    let a = resolve_ranking(first, scheme, stdin)?;
    let b = resolve_ranking(second, scheme, stdin)?;
    let distance = l1_distance(&a, &b)?;
    writeln!(out, "L1 distance: {distance}\n")?;
    writeln!(out, "| Team | Rank A | Rank B | abs diff |\n|---|---:|---:|---:|")?;
    for d in rank_differences(&a, &b)? {
        writeln!(out, "| {} | {} | {} | {} |", d.team, d.first, d.second, d.abs_diff())?;
    }
    Ok(())
}

fn cmd_simulate(matrix: &ScoreMatrix, n: u64, seed: u64, out_path: Option<&PathBuf>, out: &mut dyn Write) -> CmdResult {
    if let Some(path) = out_path {
        std::fs::write(path, dump_matrix(matrix)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let (dt, dr) = ranked(matrix, SchemeKind::Discrete)?;
    let (ct, cr) = ranked(matrix, SchemeKind::Continuous)?;
    writeln!(out, "Simulated {} teams, {n} games per pair, seed {seed}.\n", matrix.len())?;
    writeln!(
        out,
        "| Team | Discrete points | Discrete rank | Continuous points | Continuous rank |\n|---|---:|---:|---:|---:|"
    )?;
    for (d, c) in dt.rows.iter().zip(&ct.rows) {
        writeln!(
            out,
            "| {} | {:.0} | {} | {:.4} | {} |",
            d.team,
            d.points,
            dr.rank_of(&d.team).expect("ranked"),
            c.points,
            cr.rank_of(&c.team).expect("ranked"),
        )?;
    }
    writeln!(out, "\nL1 distance (discrete vs continuous): {}", l1_distance(&dr, &cr)?)?;
    Ok(())
}

fn parse_assignment(s: &str) -> Result<ParamOverride, Failure> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("expected NAME=VALUE, got {s:?}")))?;
    let (name, value) = (name.trim(), value.trim());
    if !crate::challenge::is_number(value) {
        return Err(Failure::Usage(format!("invalid number {value:?} for {name}")));
    }
    let v: f64 = value.parse().map_err(|_| Failure::Usage(format!("invalid number {value:?}")))?;
    Ok(ParamOverride::new(name, v)?)
}

fn cmd_challenge(cmd: ChallengeCommand, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        ChallengeCommand::Parse { command, registry, strict } => {
            let text = if command == "-" { read_input("-", stdin)? } else { command };
            let overrides = parse_change_command(&text)?;
            let mut reg = ParamRegistry::weather();
            if let Some(path) = registry {
                let file = std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                reg.extend(ParamRegistry::from_json(&file)?)?;
            }
            for o in &overrides {
                writeln!(out, "{o}")?;
            }
            writeln!(out, "canonical: {}", emit_change_command(&overrides)?)?;
            let report = validate(&overrides, &reg, strict);
            for f in &report.findings {
                writeln!(err, "{f}")?;
            }
            if report.has_errors() {
                return Err(Failure::Usage(format!("{} validation finding(s)", report.findings.len())));
            }
            Ok(())
        }
        ChallengeCommand::Emit { set } => {
            let overrides = set.iter().map(|s| parse_assignment(s)).collect::<Result<Vec<_>, _>>()?;
            writeln!(out, "{}", emit_change_command(&overrides)?)?;
            Ok(())
        }
        ChallengeCommand::Conf { on, off: _, set } => {
            let overrides = set.iter().map(|s| parse_assignment(s)).collect::<Result<Vec<_>, _>>()?;
            for (i, o) in overrides.iter().enumerate() {
                if overrides[..i].iter().any(|p| p.name() == o.name()) {
                    return Err(ChallengeError::DuplicateParam(o.name().to_string()).into());
                }
            }
            out.write_all(emit_server_conf(on, &overrides).as_bytes())?;
            Ok(())
        }
    }
}

/// Writes the report; exit code 3 when any audited cell disagrees.
fn cmd_report(set: &FixtureSet, out: &mut dyn Write) -> CmdResult {
    let outcome = build_report(set)?;
    out.write_all(outcome.markdown.as_bytes())?;
    if outcome.mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(outcome.mismatches.join("\n")))
    }
}

/// Report command over an arbitrary fixture set, for fault-injection runs.
pub fn run_report(set: &FixtureSet, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match cmd_report(set, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(stderr, "verification failed:\n{msg}");
            EXIT_MISMATCH
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}
