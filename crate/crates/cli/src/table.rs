//! CSV tables read and written by the subcommands.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// One row of `buildings.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildingRow {
    pub dataset: String,
    pub scene_id: String,
    pub building_id: String,
    pub num_vertices: usize,
    pub point_degree: f64,
    pub convexity: f64,
    pub compactness: f64,
    pub pca_score: Option<f64>,
}

/// The columns of an analysis file that scoring commands need.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub line: u64,
    pub dataset: String,
    pub scene_id: Option<String>,
    pub pca_score: Option<f64>,
}

pub const DEFAULT_DATASET: &str = "dataset";

/// Reads `pca_score` (required), `dataset` and `scene_id` (optional) by
/// header name.
pub fn read_scores(path: &Path) -> Result<Vec<ScoreRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => CliError::Usage(format!("{}: {e}", path.display())),
        _ => CliError::csv(path, &e),
    })?;
    let headers = rdr.headers().map_err(|e| CliError::csv(path, &e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let score_col = col("pca_score").ok_or_else(|| CliError::Parse {
        path: path.to_path_buf(),
        line: 1,
        column: 0,
        message: "missing column pca_score".into(),
    })?;
    let (dataset_col, scene_col) = (col("dataset"), col("scene_id"));
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::csv(path, &e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |c: Option<usize>| c.and_then(|c| rec.get(c)).map(|s| s.trim().to_string());
        let raw = field(Some(score_col)).unwrap_or_default();
        let pca_score = if raw.is_empty() {
            None
        } else {
            Some(
                raw.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Parse {
                        path: path.to_path_buf(),
                        line: line as usize,
                        column: score_col + 1,
                        message: format!("pca_score {raw:?} is not a finite number"),
                    })?,
            )
        };
        rows.push(ScoreRow {
            line,
            dataset: field(dataset_col).unwrap_or_else(|| DEFAULT_DATASET.to_string()),
            scene_id: field(scene_col),
            pca_score,
        });
    }
    Ok(rows)
}

/// Fixed two-decimal formatting for summary tables; never prints `-0.00`.
pub fn fixed2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub const MISSING: &str = "—";

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let wrap = |e: csv::Error| CliError::Usage(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.write_record(r).map_err(wrap)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
