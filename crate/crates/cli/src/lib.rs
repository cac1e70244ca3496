//! Command-line front end: scene files in, complexity tables, split
//! manifests and evaluation reports out.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 validation or domain
//! error.

pub mod analyze;
pub mod error;
pub mod evaluate;
pub mod scene;
pub mod scores;
pub mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use polyroof::geometry;
use polyroof::metrics::{DEFAULT_IOU_THRESHOLD, DEFAULT_POINT_RADIUS};
use polyroof::EvalConfig;

pub use error::{CliError, Result};

/// Overrides the geometry epsilon (squared pixels).
pub const EPSILON_ENV: &str = "POLYROOF_EPSILON";

#[derive(Debug, Parser)]
#[command(
    name = "polyroof-eval",
    version,
    about = "Roof wireframe complexity analysis and evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-building complexity features and per-dataset means
    Analyze(AnalyzeCmd),
    /// Complexity-stratified train/val/test split of scenes
    Split(SplitCmd),
    /// Score predicted scenes against ground truth
    Evaluate(EvaluateCmd),
    /// Histogram of PCA scores per dataset
    Histogram(HistogramCmd),
}

#[derive(Debug, Args)]
pub struct AnalyzeCmd {
    /// Scene files or directories, optionally as LABEL=PATH
    #[arg(required = true)]
    pub inputs: Vec<String>,
    /// Output directory for buildings.csv, summary.csv and pca_model.json
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Fit the PCA complexity model and score every building
    #[arg(long, conflicts_with = "pca_model")]
    pub fit_pca: bool,
    /// With --fit-pca, fit one model per dataset label
    #[arg(long, requires = "fit_pca")]
    pub pca_per_dataset: bool,
    /// Score buildings with a previously fitted model
    #[arg(long)]
    pub pca_model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitCmd {
    /// buildings.csv written by `analyze`
    pub input: PathBuf,
    /// Train, validation and test fractions
    #[arg(long, value_delimiter = ',', default_value = "0.7,0.15,0.15")]
    pub ratios: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub bins: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Use only rows of this dataset label
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long, default_value = "manifest.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateCmd {
    /// Directory of ground-truth scene files
    #[arg(long)]
    pub gt: PathBuf,
    /// Directory of predicted scene files
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long, default_value_t = DEFAULT_IOU_THRESHOLD)]
    pub iou_threshold: f64,
    /// Corner matching radius in pixels
    #[arg(long, default_value_t = DEFAULT_POINT_RADIUS)]
    pub point_radius: f64,
    /// Resample roof-segment boundaries at this spacing for line distances
    #[arg(long)]
    pub densify: Option<f64>,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Row label in summary.csv (defaults to the prediction directory name)
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HistogramCmd {
    /// buildings.csv written by `analyze`
    pub input: PathBuf,
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
    /// Histogram scene means instead of buildings
    #[arg(long)]
    pub per_scene: bool,
    #[arg(long, default_value = "histogram.csv")]
    pub out: PathBuf,
}

/// Applies `POLYROOF_EPSILON` when set.
pub fn apply_epsilon_env() -> Result<()> {
    let Ok(raw) = std::env::var(EPSILON_ENV) else {
        return Ok(());
    };
    match raw.trim().parse::<f64>() {
        Ok(eps) if eps.is_finite() && eps > 0.0 => {
            geometry::set_epsilon(eps);
            Ok(())
        }
        _ => Err(CliError::Usage(format!(
            "{EPSILON_ENV} must be a positive number, got {raw:?}"
        ))),
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {v}")))
    }
}

pub fn run(cli: Cli) -> Result<()> {
    apply_epsilon_env()?;
    match cli.command {
        Command::Analyze(c) => {
            let pca = match (c.fit_pca, c.pca_per_dataset, c.pca_model) {
                (true, true, _) => analyze::PcaMode::FitPerDataset,
                (true, false, _) => analyze::PcaMode::FitJoint,
                (false, _, Some(p)) => analyze::PcaMode::Load(p),
                _ => analyze::PcaMode::None,
            };
            let args = analyze::AnalyzeArgs {
                inputs: c.inputs.iter().map(|s| analyze::parse_input(s)).collect(),
                out: c.out,
                pca,
            };
            let a = analyze::analyze(&args)?;
            analyze::write_analysis(&a, &args.out)
        }
        Command::Split(c) => {
            let m = scores::split(&c.input, &c.ratios, c.bins, c.seed, c.dataset.as_deref())?;
            std::fs::write(&c.out, scores::manifest_json(&m)).map_err(|e| CliError::io(&c.out, e))
        }
        Command::Evaluate(c) => {
            let iou_threshold = c.iou_threshold;
            if !(iou_threshold > 0.0 && iou_threshold <= 1.0) {
                return Err(CliError::Usage(format!(
                    "--iou-threshold must be in (0, 1], got {iou_threshold}"
                )));
            }
            let config = EvalConfig {
                iou_threshold,
                point_radius: positive("--point-radius", c.point_radius)?,
                densify: c.densify.map(|d| positive("--densify", d)).transpose()?,
            };
            let args = evaluate::EvaluateArgs {
                gt: c.gt,
                pred: c.pred,
                out: c.out,
                config,
                threads: c.threads,
                label: c.label,
            };
            let (reports, summary) = evaluate::evaluate(&args)?;
            evaluate::write_reports(&args.out, &reports, &summary)
        }
        Command::Histogram(c) => scores::write_histogram(&c.input, c.bins, c.per_scene, &c.out),
    }
}
