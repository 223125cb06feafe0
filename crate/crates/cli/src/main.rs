//! `drgeom`: build spaces from description files and run verification
//! suites. Exit status 0 when every check passes, 1 when a check fails,
//! 2 on configuration or usage errors.

mod config;
mod report;
mod suites;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use drgeom::clifford::build_module;
use drgeom::damek_ricci::DRSpace;
use drgeom::einstein::jacobi_trace;
use drgeom::BigRational;

use config::{Mode, RunConfig, SpaceSel};
use report::Report;
use suites::Suite;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Parser)]
#[command(name = "drgeom", version, about = "Curvature checks for Damek-Ricci spaces and the Cayley plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    /// The 15-dimensional space with m = 6 and its (-1)-subspace.
    Example33,
}

#[derive(Subcommand)]
enum Command {
    /// Print dimensions, Clifford-axiom status and the Einstein constant.
    Build {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a verification suite and write a line-delimited JSON report.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Built-in space instead of (or matching) the config file.
        #[arg(long, value_enum)]
        space: Option<Preset>,
        /// Curvature sign of the Cayley plane: 1 for OP^2, -1 for OH^2.
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<i64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long)]
        tol: Option<f64>,
        /// Report file; without it the report goes to stdout and the
        /// summary to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn cmd_build(path: &PathBuf) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match config::load(path)? {
        SpaceSel::DamekRicci { m, mult_plus, mult_minus } => {
            let rep = build_module(m, mult_plus, mult_minus).map_err(|e| CliError::Config(e.to_string()))?;
            let axioms = rep.axiom_residual();
            let sp = DRSpace::new(rep);
            let c1 = suites::einstein_constant_exact(&sp);
            if c1 != suites::einstein_constant_traced(&sp) {
                return Err(CliError::Internal("traced Einstein constant disagrees with the formula".into()));
            }
            writeln!(stdout, "damek_ricci m = {m}, blocks (+{mult_plus}, -{mult_minus})")?;
            writeln!(stdout, "dim {}, c1 = {c1}", sp.dim_s())?;
            writeln!(stdout, "a 1, v {}, z {m}", sp.dim_v())?;
            let status = if axioms.is_exact() { "exact" } else { "FAILED" };
            writeln!(
                stdout,
                "clifford axioms {status} (skew {}, square {}, anticommute {})",
                axioms.skew, axioms.square, axioms.anticommute
            )?;
        }
        SpaceSel::Cayley { epsilon } => {
            let name = if epsilon == 1 { "OP^2" } else { "OH^2" };
            writeln!(stdout, "cayley {name}, epsilon = {epsilon}")?;
            writeln!(stdout, "dim 16, c1 = {}", jacobi_trace::<BigRational>(epsilon))?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    config: Option<PathBuf>,
    suite: Suite,
    space: Option<Preset>,
    epsilon: Option<i64>,
    samples: Option<usize>,
    seed: Option<u64>,
    mode: Mode,
    tol: Option<f64>,
    out: Option<PathBuf>,
) -> Result<bool, CliError> {
    let sel = config.as_ref().map(|p| config::load(p)).transpose()?;
    let cfg = RunConfig::new(sel, matches!(space, Some(Preset::Example33)), epsilon, samples, seed, mode, tol)?;
    let start = Instant::now();
    let checks = suites::run(suite, &cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    let report = Report { suite: suite.name().to_string(), config: cfg, checks };
    match out {
        Some(path) => {
            let file = File::create(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            report.write_jsonl(&mut w)?;
            w.flush()?;
            report.write_summary(&mut io::stdout().lock(), elapsed)?;
        }
        None => {
            report.write_jsonl(&mut io::stdout().lock())?;
            report.write_summary(&mut io::stderr().lock(), elapsed)?;
        }
    }
    Ok(report.failed() == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { config } => cmd_build(&config).map(|()| true),
        Command::Verify { config, suite, space, epsilon, samples, seed, mode, tol, out } => {
            cmd_verify(config, suite, space, epsilon, samples, seed, mode, tol, out)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("drgeom: {e}");
            ExitCode::from(match e {
                CliError::Config(_) => 2,
                _ => 1,
            })
        }
    }
}
