//! `gausswig` executable: `verify`, `wigner` and `tower`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gausswig_cli::config::RunConfig;
use gausswig_cli::report::Report;
use gausswig_cli::run::{run_tower, run_verify, run_wigner};
use gausswig_cli::CliError;

#[derive(Parser)]
#[command(name = "gausswig", version, about = "Wigner transforms over Gaussian measures: checks and exports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Corrected,
    Printed,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; absent fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path: report file for verify/tower, directory for wigner.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the pipeline tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    s_variant: Option<Variant>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Runs every check and writes a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Exports Wig(φ, ψ) as CSV grids in the Lebesgue and Γ₂ pictures.
    Wigner {
        #[command(flatten)]
        common: Common,
        /// First state: vacuum, hermite:α₁,…,α_m or shifted-vacuum:ξ…,η….
        #[arg(long, default_value = "vacuum")]
        state: String,
        /// Second state, same syntax.
        #[arg(long, default_value = "vacuum")]
        state2: String,
    },
    /// Per-level checks along the chain of truncations.
    Tower {
        #[command(flatten)]
        common: Common,
        /// Highest level; defaults to min(3, spectrum length).
        #[arg(long)]
        m_max: Option<usize>,
    },
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(t) = common.tol {
        cfg.tolerances.pipeline = t;
    }
    if let Some(v) = common.s_variant {
        cfg.s_variant = match v {
            Variant::Corrected => "corrected",
            Variant::Printed => "printed",
        }
        .into();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("GAUSSWIG_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("GAUSSWIG_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn emit(report: &Report, out: &Option<PathBuf>) -> Result<(), CliError> {
    let text = report.to_json();
    match out {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => println!("{text}"),
    }
    for e in &report.entries {
        let status = if e.pass { "PASS" } else { "FAIL" };
        match (&e.residual, &e.error) {
            (_, Some(err)) => eprintln!("{status} {} error: {err}", e.check_id),
            (Some(r), None) => eprintln!("{status} {} residual={r:e} tol={:e}", e.check_id, e.tolerance),
            (None, None) => eprintln!("{status} {}", e.check_id),
        }
    }
    eprintln!("{}/{} checks passed", report.summary.passed, report.summary.total);
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Verify { common } => {
            let cfg = load(&common)?;
            let report = run_verify(&cfg)?;
            emit(&report, &common.out)?;
            Ok(report.all_pass())
        }
        Command::Tower { common, m_max } => {
            let cfg = load(&common)?;
            let m_max = m_max.unwrap_or_else(|| cfg.spectrum.len().min(3));
            let report = run_tower(&cfg, m_max)?;
            emit(&report, &common.out)?;
            Ok(report.all_pass())
        }
        Command::Wigner { common, state, state2 } => {
            let cfg = load(&common)?;
            let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let summary = run_wigner(&cfg, &state, &state2, &out)?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            Ok(summary.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gausswig: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
