//! `rct`: validate, analyze and optimize regional clock trees.
//!
//! Exit status: 0 clean, 1 model violation, 2 I/O or schema error (including
//! bad arguments), 3 search guard exceeded.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rct", version, about = "Regional clock tree analysis and delay-line tap optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check library, floorplan and routed topology against every model rule.
    Validate(RegionArgs),
    /// Report natural delays, arrivals, costs, feasibility and electrical
    /// totals at every corner.
    Analyze(AnalyzeArgs),
    /// Choose delay-line taps.
    Optimize(OptimizeArgs),
    /// Draw the routed tree as DOT or SVG.
    Render(RenderArgs),
    /// Largest feasible column count for a homogeneous region.
    SweepSize(SweepArgs),
    /// Per-corner feasibility of a region.
    Feasibility(FeasibilityArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Block library document.
    #[arg(long)]
    pub library: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run metadata sidecar (timing, arguments); kept out of the main output.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RegionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Floorplan document.
    #[arg(long)]
    pub floorplan: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    /// `ones`, `local`, `optimized`, or a path to a JSON array of 1-based taps.
    #[arg(long, default_value = "local")]
    pub assignment: String,
    /// Report only this corner.
    #[arg(long)]
    pub corner: Option<String>,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ObjectiveArgs {
    /// Defaults to `windowed` when a window is configured, else `g`.
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveKind>,
    /// Window override: `COLSxROWS`, `COLSxROWS/STRIDE` or
    /// `COLSxROWS/SCOLSxSROWS`; `none` disables the floorplan's window.
    #[arg(long)]
    pub window: Option<String>,
    /// Optimize at this corner instead of the corner of record.
    #[arg(long = "optimize-corner")]
    pub optimize_corner: Option<String>,
    /// Branch-and-bound node budget for dense pair sets.
    #[arg(long, default_value_t = 50_000_000)]
    pub node_limit: u64,
}

#[derive(Args, Debug, Clone)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    #[arg(long, value_enum, default_value_t = Method::Global)]
    pub method: Method,
    /// Largest full space the oracle may enumerate; required with
    /// `--method oracle`.
    #[arg(long, required_if_eq("method", "oracle"))]
    pub oracle_limit: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct RenderArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub floorplan: PathBuf,
    #[arg(long, value_enum, default_value_t = Diagram::Svg)]
    pub format: Diagram,
    /// Annotate nodes with taps and arrivals of this assignment (see
    /// `analyze --assignment`).
    #[arg(long)]
    pub assignment: Option<String>,
    /// Corner for delays; defaults to the corner of record.
    #[arg(long)]
    pub corner: Option<String>,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Block type; defaults to the first one in the library.
    #[arg(long = "type")]
    pub type_id: Option<String>,
    #[arg(long)]
    pub rows: u32,
    /// Corner; defaults to every library corner.
    #[arg(long)]
    pub corner: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct FeasibilityArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    /// Corner; defaults to every library corner.
    #[arg(long)]
    pub corner: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagram {
    Dot,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveKind {
    L,
    G,
    Windowed,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Local,
    Global,
    Oracle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (name, common) = match &cli.command {
        Command::Validate(a) => ("validate", &a.common),
        Command::Analyze(a) => ("analyze", &a.region.common),
        Command::Optimize(a) => ("optimize", &a.region.common),
        Command::Render(a) => ("render", &a.common),
        Command::SweepSize(a) => ("sweep-size", &a.common),
        Command::Feasibility(a) => ("feasibility", &a.region.common),
    };
    let result = match &cli.command {
        Command::Validate(a) => commands::validate(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Optimize(a) => commands::optimize(a),
        Command::Render(a) => commands::render(a),
        Command::SweepSize(a) => commands::sweep_size(a),
        Command::Feasibility(a) => commands::feasibility(a),
    };
    let code = match result {
        Ok(output) => match commands::emit(common.out.as_deref(), &output.body) {
            Ok(()) => output.code,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            for line in e.to_string().lines() {
                eprintln!("error: {line}");
            }
            e.exit_code()
        }
    };
    if let Some(meta) = &common.meta {
        if let Err(e) = commands::write_meta(meta, name, code, started.elapsed()) {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(code)
}
