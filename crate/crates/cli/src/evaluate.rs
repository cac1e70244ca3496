use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use polyroof::metrics::{aggregate, evaluate_scene, DatasetSummary};
use polyroof::{EvalConfig, EvalReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::scene::{load_scene, scene_files, Scene};
use crate::table::{fixed2, write_csv, MISSING};

pub const SUMMARY_HEADER: [&str; 7] = [
    "Configuration",
    "Point Pos. Acc.",
    "Line Dist. Acc.",
    "Building F1-Score",
    "Roof F1-Score",
    "Recon Score",
    "Recon Score (scene mean)",
];

const SCENE_HEADER: [&str; 12] = [
    "scene_id",
    "point_pos_acc",
    "point_match_rate",
    "line_dist_acc",
    "building_f1",
    "roof_f1",
    "reconstruction_score",
    "area_segmentation_score",
    "n_gt_buildings",
    "n_pred_buildings",
    "n_gt_segments",
    "n_pred_segments",
];

#[derive(Debug, Clone)]
pub struct EvaluateArgs {
    pub gt: PathBuf,
    pub pred: PathBuf,
    pub out: PathBuf,
    pub config: EvalConfig,
    /// Worker threads; 0 picks the number of cores.
    pub threads: usize,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SceneReport {
    pub scene_id: String,
    pub config: EvalConfig,
    pub report: EvalReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub label: String,
    pub config: EvalConfig,
    #[serde(flatten)]
    pub summary: DatasetSummary,
}

fn load_dir(dir: &Path) -> Result<BTreeMap<String, Scene>> {
    if !dir.is_dir() {
        return Err(CliError::Usage(format!("{}: not a directory", dir.display())));
    }
    let files = scene_files(dir)?;
    let loaded: Vec<Result<Scene>> = files.par_iter().map(|p| load_scene(p)).collect();
    let mut out = BTreeMap::new();
    for s in loaded {
        let s = s?;
        if let Some(prev) = out.get(&s.scene_id) {
            let prev: &Scene = prev;
            return Err(CliError::invalid(
                &s.path,
                format!("scene id {:?} already used by {}", s.scene_id, prev.path.display()),
            ));
        }
        out.insert(s.scene_id.clone(), s);
    }
    Ok(out)
}

fn missing(from: &BTreeMap<String, Scene>, other: &BTreeMap<String, Scene>) -> Vec<String> {
    from.keys().filter(|k| !other.contains_key(*k)).cloned().collect()
}

/// Scores every scene pair; reports come back sorted by scene id.
pub fn evaluate(args: &EvaluateArgs) -> Result<(Vec<SceneReport>, RunSummary)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", args.threads)))?;
    pool.install(|| {
        let gt = load_dir(&args.gt)?;
        let pred = load_dir(&args.pred)?;
        let (no_pred, no_gt) = (missing(&gt, &pred), missing(&pred, &gt));
        if !no_pred.is_empty() || !no_gt.is_empty() {
            let mut msg = String::from("ground truth and prediction scene ids differ");
            if !no_pred.is_empty() {
                msg += &format!("; missing from {}: {}", args.pred.display(), no_pred.join(", "));
            }
            if !no_gt.is_empty() {
                msg += &format!("; missing from {}: {}", args.gt.display(), no_gt.join(", "));
            }
            return Err(CliError::Usage(msg));
        }
        let pairs: Vec<(&Scene, &Scene)> = gt.values().zip(pred.values()).collect();
        let results: Vec<Result<SceneReport>> = pairs
            .par_iter()
            .map(|(g, p)| {
                let report = evaluate_scene(&g.buildings, &p.buildings, &args.config)
                    .map_err(|e| CliError::Domain(format!("scene {}: {e}", g.scene_id)))?;
                Ok(SceneReport {
                    scene_id: g.scene_id.clone(),
                    config: args.config,
                    report,
                })
            })
            .collect();
        let reports = results.into_iter().collect::<Result<Vec<_>>>()?;
        let summary = aggregate(&reports.iter().map(|r| r.report).collect::<Vec<_>>());
        let label = args.label.clone().unwrap_or_else(|| {
            args.pred
                .file_name()
                .map_or_else(|| "pred".into(), |s| s.to_string_lossy().into_owned())
        });
        Ok((
            reports,
            RunSummary {
                label,
                config: args.config,
                summary,
            },
        ))
    })
}

fn file_stem_for(scene_id: &str) -> String {
    scene_id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub fn summary_row(s: &RunSummary) -> Vec<String> {
    let m = &s.summary.micro;
    vec![
        s.label.clone(),
        fixed2(m.point_pos_acc),
        m.line_dist_acc.map_or_else(|| MISSING.to_string(), fixed2),
        fixed2(m.building_f1),
        fixed2(m.roof_f1),
        fixed2(m.reconstruction_score),
        fixed2(s.summary.macro_means.reconstruction_score),
    ]
}

pub fn write_reports(out: &Path, reports: &[SceneReport], summary: &RunSummary) -> Result<()> {
    let scenes_dir = out.join("scenes");
    std::fs::create_dir_all(&scenes_dir).map_err(|e| CliError::io(&scenes_dir, e))?;
    for r in reports {
        let path = scenes_dir.join(format!("{}.json", file_stem_for(&r.scene_id)));
        let json = serde_json::to_string_pretty(r).expect("reports serialize") + "\n";
        std::fs::write(&path, json).map_err(|e| CliError::io(&path, e))?;
    }
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let (m, c) = (&r.report, &r.report.counts);
            vec![
                r.scene_id.clone(),
                m.point_pos_acc.to_string(),
                m.point_match_rate.to_string(),
                opt(m.line_dist_acc),
                m.building_f1.to_string(),
                m.roof_f1.to_string(),
                m.reconstruction_score.to_string(),
                m.area_segmentation_score.to_string(),
                c.n_gt_buildings.to_string(),
                c.n_pred_buildings.to_string(),
                c.n_gt_segments.to_string(),
                c.n_pred_segments.to_string(),
            ]
        })
        .collect();
    write_csv(&out.join("scenes.csv"), &SCENE_HEADER, &rows)?;
    write_csv(&out.join("summary.csv"), &SUMMARY_HEADER, &[summary_row(summary)])?;
    let path = out.join("summary.json");
    let json = serde_json::to_string_pretty(summary).expect("summaries serialize") + "\n";
    std::fs::write(&path, json).map_err(|e| CliError::io(&path, e))
}
