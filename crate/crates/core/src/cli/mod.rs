//! Command-line front end: `check`, `solve`, `sweep`, `oracle`, `gen`.
//!
//! Exit status: 0 on success (for `check`, only when every edge is
//! certified), then [`exit::IO`], [`exit::USAGE`], [`exit::PARSE`],
//! [`exit::CERTIFICATION`], [`exit::SIZE`] and [`exit::NUMERIC`].

pub mod generate;
pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::oracle::{brute_force_min, brute_force_minimax, OracleError, TermPolicy};
use crate::reduction::{solve, Policy, SolveError};
use crate::submodularity::{certify_with_scan, CertificateStatus};
use generate::{GenerateError, GridParams, RandomParams};
use problem::{read_problem, write_problem, Problem, ProblemError};
use report::{
    CertificateCounts, EdgeCertificate, OracleSummary, Report, SolutionSummary, SweepTrend,
};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const CERTIFICATION: i32 = 4;
    pub const SIZE: i32 = 5;
    pub const NUMERIC: i32 = 6;
}

/// Exponents scanned to find a witness for uncertified terms.
pub const WITNESS_GRID: [f64; 9] = [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0, 64.0];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Generate(_) => exit::USAGE,
            CliError::Problem(ProblemError::Io { .. }) | CliError::Io { .. } => exit::IO,
            CliError::Problem(_) => exit::PARSE,
            CliError::Solve(
                SolveError::Certification { .. } | SolveError::NotSubmodular { .. },
            ) => exit::CERTIFICATION,
            CliError::Solve(SolveError::Numeric { .. })
            | CliError::Oracle(OracleError::Numeric(_)) => exit::NUMERIC,
            CliError::Solve(SolveError::Energy(_)) | CliError::Oracle(OracleError::Energy(_)) => {
                exit::USAGE
            }
            CliError::Oracle(OracleError::TooLarge(_)) => exit::SIZE,
        }
    }
}

fn parse_p(s: &str) -> Result<f64, String> {
    let p: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if p.is_finite() && p >= 1.0 {
        Ok(p)
    } else {
        Err(format!("p must be a finite real >= 1 (got {s})"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Certified,
    #[value(name = "per-p")]
    PerP,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Certified => Policy::RequireCertified,
            PolicyArg::PerP => Policy::AllowPerPCheck,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TermsArg {
    Any,
    Submodular,
    Certified,
}

impl From<TermsArg> for TermPolicy {
    fn from(t: TermsArg) -> Self {
        match t {
            TermsArg::Any => TermPolicy::Any,
            TermsArg::Submodular => TermPolicy::Submodular,
            TermsArg::Certified => TermPolicy::Certified,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lpcut",
    version,
    about = "Binary labeling with l_p-norm objectives via minimum cuts"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify every pairwise term for all exponents p >= 1.
    Check { file: PathBuf },
    /// Minimize the l_p objective for one exponent.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, value_enum, default_value_t = PolicyArg::Certified)]
        policy: PolicyArg,
    },
    /// Solve for several exponents and compare the results.
    Sweep {
        file: PathBuf,
        #[arg(long, value_parser = parse_p, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
        p: Vec<f64>,
        #[arg(long, value_enum, default_value_t = PolicyArg::Certified)]
        policy: PolicyArg,
    },
    /// Exhaustive minimization (at most 20 vertices).
    Oracle {
        file: PathBuf,
        #[arg(long, value_parser = parse_p, default_value = "1")]
        p: f64,
    },
    /// Write a generated problem file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GenOutput {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Noisy binary image on a 4-connected grid.
    #[command(name = "grid_denoise", alias = "grid-denoise")]
    GridDenoise {
        #[arg(long, default_value_t = 8)]
        width: usize,
        #[arg(long, default_value_t = 8)]
        height: usize,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 0.35)]
        smoothness: f64,
        #[arg(long, default_value_t = 1.0)]
        data_weight: f64,
        #[command(flatten)]
        output: GenOutput,
    },
    /// Random graph with uniformly drawn terms.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        edge_factor: f64,
        #[arg(long, value_enum, default_value_t = TermsArg::Certified)]
        terms: TermsArg,
        #[command(flatten)]
        output: GenOutput,
    },
}

fn base_report(command: &str, problem: &Problem) -> Result<Report, CliError> {
    let e = &problem.energy;
    let mut counts = CertificateCounts::default();
    let mut certificates = Vec::with_capacity(e.edge_count());
    for (edge, (i, j, t)) in e.edges().enumerate() {
        let certificate = certify_with_scan(t, &WITNESS_GRID).map_err(SolveError::from)?;
        match certificate.status {
            CertificateStatus::CertifiedAllP => counts.certified_all_p += 1,
            CertificateStatus::SubmodularUncertified => counts.submodular_uncertified += 1,
            CertificateStatus::NotSubmodular => counts.not_submodular += 1,
        }
        certificates.push(EdgeCertificate {
            edge,
            i,
            j,
            term: t.values(),
            certificate,
        });
    }
    Ok(Report {
        command: command.to_string(),
        vertex_count: e.vertex_count(),
        edge_count: e.edge_count(),
        grid: problem.grid,
        certificate_counts: counts,
        certificates,
        policy: None,
        solutions: Vec::new(),
        sweep: None,
        oracle: None,
    })
}

/// Certificate report; the second value is the exit status
/// (0 iff every term is certified for all p).
pub fn cmd_check(problem: &Problem) -> Result<(Report, i32), CliError> {
    let report = base_report("check", problem)?;
    let status = if report.all_certified() {
        exit::SUCCESS
    } else {
        exit::CERTIFICATION
    };
    Ok((report, status))
}

fn timed_solve(problem: &Problem, p: f64, policy: Policy) -> Result<SolutionSummary, SolveError> {
    let start = Instant::now();
    let s = solve(&problem.energy, p, policy)?;
    Ok(SolutionSummary::new(
        &s,
        start.elapsed().as_secs_f64() * 1e3,
    ))
}

pub fn cmd_solve(problem: &Problem, p: f64, policy: Policy) -> Result<Report, CliError> {
    let mut report = base_report("solve", problem)?;
    report.policy = Some(policy);
    report.solutions.push(timed_solve(problem, p, policy)?);
    Ok(report)
}

/// Solves every exponent in `ps` (concurrently); rows come back in `ps` order.
pub fn cmd_sweep(problem: &Problem, ps: &[f64], policy: Policy) -> Result<Report, CliError> {
    if ps.is_empty() {
        return Err(CliError::Usage("sweep needs at least one p".into()));
    }
    let mut report = base_report("sweep", problem)?;
    report.policy = Some(policy);
    let mut ordered: Vec<f64> = ps.to_vec();
    ordered.sort_by(f64::total_cmp);
    let solutions = ordered
        .par_iter()
        .map(|&p| timed_solve(problem, p, policy))
        .collect::<Result<Vec<_>, _>>()?;
    let max_terms: Vec<f64> = solutions.iter().map(|s| s.max_term).collect();
    report.sweep = Some(SweepTrend {
        max_term_non_increasing: max_terms
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-9 * w[0].abs().max(1.0)),
        max_term_first: max_terms[0],
        max_term_last: *max_terms.last().expect("non-empty sweep"),
    });
    report.solutions = solutions;
    Ok(report)
}

pub fn cmd_oracle(problem: &Problem, p: f64) -> Result<Report, CliError> {
    let mut report = base_report("oracle", problem)?;
    let min = brute_force_min(&problem.energy, p)?;
    let minimax = brute_force_minimax(&problem.energy)?;
    report.oracle = Some(OracleSummary {
        p,
        min_value: min.min_value,
        minimizers: min.minimizers.iter().map(ToString::to_string).collect(),
        minimax_value: minimax.min_value,
        minimax_labelings: minimax.minimizers.iter().map(ToString::to_string).collect(),
    });
    Ok(report)
}

pub fn cmd_gen(kind: &GenKind) -> Result<(Problem, GenOutput), CliError> {
    match kind {
        GenKind::GridDenoise {
            width,
            height,
            noise,
            smoothness,
            data_weight,
            output,
        } => {
            let params = GridParams {
                width: *width,
                height: *height,
                noise: *noise,
                smoothness: *smoothness,
                data_weight: *data_weight,
            };
            let g = generate::grid_denoise(&params, output.seed)?;
            Ok((g.problem, output.clone()))
        }
        GenKind::Random {
            n,
            edge_factor,
            terms,
            output,
        } => {
            let params = RandomParams {
                n: *n,
                edge_factor: *edge_factor,
                terms: (*terms).into(),
            };
            Ok((generate::random(&params, output.seed)?, output.clone()))
        }
    }
}

fn load(path: &Path) -> Result<Problem, CliError> {
    Ok(read_problem(path)?)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let emit = |report: &Report, out: &mut dyn Write| -> Result<(), CliError> {
        let text = match cli.format {
            Format::Text => report.to_text(),
            Format::Structured => report.to_json(),
        };
        out.write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
    };
    match &cli.command {
        Command::Check { file } => {
            let (report, status) = cmd_check(&load(file)?)?;
            emit(&report, out)?;
            Ok(status)
        }
        Command::Solve { file, p, policy } => {
            emit(&cmd_solve(&load(file)?, *p, (*policy).into())?, out)?;
            Ok(exit::SUCCESS)
        }
        Command::Sweep { file, p, policy } => {
            emit(&cmd_sweep(&load(file)?, p, (*policy).into())?, out)?;
            Ok(exit::SUCCESS)
        }
        Command::Oracle { file, p } => {
            emit(&cmd_oracle(&load(file)?, *p)?, out)?;
            Ok(exit::SUCCESS)
        }
        Command::Gen { kind } => {
            let (problem, output) = cmd_gen(kind)?;
            match &output.out {
                Some(path) => write_problem(path, &problem).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => out
                    .write_all(problem::format_problem(&problem).as_bytes())
                    .map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    })?,
            }
            Ok(exit::SUCCESS)
        }
    }
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return exit::USAGE;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return exit::SUCCESS;
        }
    };
    match execute(&cli, out) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
