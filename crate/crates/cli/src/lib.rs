//! Model files, the `dynq` command driver, and JSON reports.

use std::path::PathBuf;

use clap::{Args, Parser};
use thiserror::Error;

pub mod commands;
pub mod model;
pub mod report;
pub mod texpr;

pub use commands::{run, Command};
pub use model::{build_model, canonical, load_model, parse_model_str, Model, ModelFile};
pub use report::{Check, Report, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("schema violation at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("cannot parse {field} at position {pos}: {msg}")]
    Parse { field: String, pos: usize, msg: String },
    #[error("{entry} = {index} is out of range (must be < {bound})")]
    Index { entry: String, index: usize, bound: usize },
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("{0}")]
    Missing(String),
    #[error("expression error at position {pos}: {msg}")]
    Expr { pos: usize, msg: String },
    #[error(transparent)]
    Lie(#[from] liealg::LieError),
    #[error(transparent)]
    Dynr(#[from] dynr::DynrError),
    #[error(transparent)]
    Geom(#[from] geom::GeomError),
    #[error(transparent)]
    Fedosov(#[from] fedosov::FedosovError),
    #[error(transparent)]
    Quantize(#[from] quantize::QuantizeError),
}

#[derive(Debug, Parser)]
#[command(name = "dynq", about = "Quantization of triangular dynamical r-matrices")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Model file (JSON).
    #[arg(long, short, global = true)]
    pub model: Option<PathBuf>,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

/// Exit status: 0 when every residual vanishes, 1 when some check fails,
/// 2 when the command could not run.
pub fn main_with(cli: Cli) -> i32 {
    let Some(path) = cli.common.model.as_ref() else {
        eprintln!("error: --model <FILE> is required");
        return 2;
    };
    let outcome = load_model(path).and_then(|m| run(&cli.command, &m));
    match outcome {
        Ok(report) => {
            print!("{}", report.to_text());
            if let Some(out) = &cli.common.json {
                if let Err(e) = std::fs::write(out, report.to_json()) {
                    eprintln!("error: cannot write {}: {e}", out.display());
                    return 2;
                }
            }
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
