//! `sqtile`: generation, classification, realization and rendering.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sqtile", version, about = "Spherical tilings by congruent quadrangles")]
pub struct Cli {
    /// Worker threads (defaults to all cores); never changes report content.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Enumerate quadrangulations and print the degree-class row.
    Gen(GenArgs),
    /// Classify charts over a pseudo-double wheel or over all generated maps.
    Classify(ClassifyArgs),
    /// Realize a chart on the unit sphere.
    Realize(RealizeArgs),
    /// Draw a chart or a realized tiling as SVG.
    Render(RenderArgs),
    /// Export a named chart as JSON.
    Chart(ChartArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Q2,
    Q3,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub faces: usize,
    #[arg(long, value_enum, default_value = "q2")]
    pub class: Class,
    /// Planar code output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Verify and count an externally produced planar code file instead.
    #[arg(long)]
    pub ingest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Face count of the pseudo-double wheel.
    #[arg(long, conflicts_with_all = ["all_maps", "replay"])]
    pub pdw: Option<usize>,
    /// Face count for `--all-maps`.
    #[arg(long, requires = "all_maps")]
    pub faces: Option<usize>,
    #[arg(long = "type", default_value_t = 2, value_parser = parse_type)]
    pub tile_type: u8,
    /// Require convex tiles (all angles below π).
    #[arg(long)]
    pub convex: bool,
    /// Survey every generated Q2 map with `--faces` faces.
    #[arg(long)]
    pub all_maps: bool,
    /// JSON-lines report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Extra forbidden-pattern JSON files, used with their mirror images.
    #[arg(long = "patterns", num_args = 1.., conflicts_with = "replay")]
    pub patterns: Vec<PathBuf>,
    /// Re-run a stored report and compare it line by line.
    #[arg(long, conflicts_with_all = ["pdw", "all_maps"])]
    pub replay: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChartSource {
    /// `P<F>`, `Q<F>` or `A`.
    #[arg(long, conflicts_with = "chart")]
    pub named: Option<String>,
    /// Chart JSON file.
    #[arg(long)]
    pub chart: Option<PathBuf>,
    /// Tile type for `P<F>`.
    #[arg(long = "type", default_value_t = 2, value_parser = parse_type)]
    pub tile_type: u8,
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    #[command(flatten)]
    pub source: ChartSource,
    /// Angles `α,β,γ,δ` in units of π; fractions like `1/3` are accepted.
    #[arg(long)]
    pub params: Option<String>,
    /// Search closing angles among convex tiles only.
    #[arg(long)]
    pub convex: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed_face: usize,
    /// Tiling JSON output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Orthographic SVG output file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: ChartSource,
    /// Tiling JSON written by `realize`.
    #[arg(long, conflicts_with_all = ["named", "chart"])]
    pub tiling: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChartArgs {
    #[command(flatten)]
    pub source: ChartSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_type(s: &str) -> Result<u8, String> {
    match s {
        "2" => Ok(2),
        "4" => Ok(4),
        _ => Err(format!("tile type must be 2 or 4, got {s}")),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Fail {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Usage(_) | Fail::Io { .. } => 1,
            Fail::Invariant(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("PDW_CLASSIFY_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("worker pool already set: {e}");
        }
    }
    let res = match &cli.cmd {
        Cmd::Gen(a) => commands::gen(a),
        Cmd::Classify(a) => commands::classify(a),
        Cmd::Realize(a) => commands::realize(a),
        Cmd::Render(a) => commands::render(a),
        Cmd::Chart(a) => commands::chart(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
