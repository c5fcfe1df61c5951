//! holonomy-lab: batch experiments for holonomy-core.
//!
//! Exit codes: 0 success, 2 invalid input, 3 acceptance failure.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Invalid;
use config::{ExperimentConfig, Overrides};

#[derive(Debug, Parser)]
#[command(name = "holonomy-lab", version, about = "Holonomy of disks in hyperbolic space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Holonomy of a geodesic triangle against Psi of its signed area.
    TriangleHolonomy {
        /// Slice coordinates x1,y1;x2,y2;x3,y3.
        #[arg(long, allow_hyphen_values = true)]
        vertices: Option<String>,
    },
    /// Properties 1-4 of the ordered subdivision for steps 0..=depth.
    SubdivisionAudit {
        /// Swap two triangles of the last level before auditing.
        #[arg(long)]
        corrupt_order: bool,
    },
    /// Convergence table of the fiber curve for n = 1..=depth.
    Theorem,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::TriangleHolonomy { .. } => "triangle-holonomy",
            Command::SubdivisionAudit { .. } => "subdivision-audit",
            Command::Theorem => "theorem",
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HOLONOMY_LAB_THREADS") else { return Ok(()) };
    let n: usize = v.parse().ok().filter(|n| *n > 0).ok_or_else(|| format!("HOLONOMY_LAB_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    init_threads().map_err(Invalid)?;
    let cfg = ExperimentConfig::resolve(cli.command.name(), &cli.overrides).map_err(Invalid)?;
    log::info!("{cfg:?}");
    let outcome = match &cli.command {
        Command::TriangleHolonomy { vertices } => commands::triangle_holonomy(&cfg, vertices.as_deref())?,
        Command::SubdivisionAudit { corrupt_order } => commands::subdivision_audit(&cfg, *corrupt_order)?,
        Command::Theorem => commands::theorem(&cfg)?,
    };
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("acceptance checks failed");
            ExitCode::from(3)
        }
        Err(e) if e.is::<Invalid>() => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
