use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use polyroof::complexity::{featurize, pca_score};
use polyroof::{ComplexityRecord, PcaModel};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::scene::{load_scene, scene_files, Scene};
use crate::table::{fixed2, write_csv, BuildingRow, MISSING};

pub const SUMMARY_HEADER: [&str; 6] = [
    "Dataset",
    "Num. Vertices",
    "Point Degree",
    "Convexity",
    "Compactness",
    "PCA Score",
];

/// How buildings get a PCA score.
#[derive(Debug, Clone)]
pub enum PcaMode {
    None,
    /// Fit one model on every building.
    FitJoint,
    /// Fit one model per dataset label.
    FitPerDataset,
    Load(PathBuf),
}

#[derive(Debug, Clone)]
pub struct AnalyzeArgs {
    /// `(label, path)` pairs; a path is a scene file or a directory of them.
    pub inputs: Vec<(String, PathBuf)>,
    pub out: PathBuf,
    pub pca: PcaMode,
}

/// Splits `label=path`; a bare path is labelled by its file stem.
pub fn parse_input(arg: &str) -> (String, PathBuf) {
    if let Some((label, path)) = arg.split_once('=') {
        if !label.is_empty() && !path.is_empty() {
            return (label.to_string(), PathBuf::from(path));
        }
    }
    let p = PathBuf::from(arg);
    let label = p
        .file_stem()
        .map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
    (label, p)
}

pub struct Analysis {
    /// Dataset labels in order of first appearance.
    pub datasets: Vec<String>,
    pub rows: Vec<BuildingRow>,
    pub models: BTreeMap<String, PcaModel>,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Analysis> {
    let mut jobs: Vec<(usize, PathBuf)> = Vec::new();
    let mut datasets: Vec<String> = Vec::new();
    for (label, path) in &args.inputs {
        if !path.exists() {
            return Err(CliError::Usage(format!(
                "{}: no such file or directory",
                path.display()
            )));
        }
        let d = datasets.iter().position(|x| x == label).unwrap_or_else(|| {
            datasets.push(label.clone());
            datasets.len() - 1
        });
        jobs.extend(scene_files(path)?.into_iter().map(|p| (d, p)));
    }
    let loaded: Vec<Result<Scene>> = jobs.par_iter().map(|(_, p)| load_scene(p)).collect();
    let mut per_dataset: Vec<BTreeMap<String, Scene>> = vec![BTreeMap::new(); datasets.len()];
    for ((d, path), scene) in jobs.iter().zip(loaded) {
        let scene = scene?;
        if let Some(prev) = per_dataset[*d].get(&scene.scene_id) {
            return Err(CliError::invalid(
                path,
                format!("scene id {:?} already used by {}", scene.scene_id, prev.path.display()),
            ));
        }
        per_dataset[*d].insert(scene.scene_id.clone(), scene);
    }

    let mut records: Vec<(usize, ComplexityRecord)> = Vec::new();
    for (d, scenes) in per_dataset.iter().enumerate() {
        for s in scenes.values() {
            records.extend(s.buildings.iter().map(|b| (d, featurize(&s.scene_id, b, &s.wireframe))));
        }
    }

    let mut models = BTreeMap::new();
    let fit = |rs: Vec<[f64; 4]>, what: &str| {
        PcaModel::fit(&rs).map_err(|e| CliError::Domain(format!("cannot fit PCA on {what}: {e}")))
    };
    match &args.pca {
        PcaMode::None => {}
        PcaMode::FitJoint => {
            models.insert(
                String::new(),
                fit(records.iter().map(|r| r.1.features()).collect(), "all buildings")?,
            );
        }
        PcaMode::FitPerDataset => {
            for (d, label) in datasets.iter().enumerate() {
                let rs = records.iter().filter(|r| r.0 == d).map(|r| r.1.features()).collect();
                models.insert(label.clone(), fit(rs, &format!("dataset {label}"))?);
            }
        }
        PcaMode::Load(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let m: PcaModel = serde_json::from_str(&text).map_err(|e| CliError::json(path, &e))?;
            models.insert(String::new(), m);
        }
    }
    let rows = records
        .into_iter()
        .map(|(d, mut r)| {
            let model = models.get(&datasets[d]).or_else(|| models.get(""));
            r.pca_score = model.map(|m| pca_score(m, &r));
            BuildingRow {
                dataset: datasets[d].clone(),
                scene_id: r.scene_id,
                building_id: r.building_id,
                num_vertices: r.num_vertices,
                point_degree: r.point_degree,
                convexity: r.convexity,
                compactness: r.compactness,
                pca_score: r.pca_score,
            }
        })
        .collect();
    Ok(Analysis { datasets, rows, models })
}

/// Per-dataset means, two decimals, in the order of `SUMMARY_HEADER`.
pub fn summary_rows(a: &Analysis) -> Vec<Vec<String>> {
    a.datasets
        .iter()
        .map(|label| {
            let rows: Vec<&BuildingRow> = a.rows.iter().filter(|r| &r.dataset == label).collect();
            let mean = |f: &dyn Fn(&BuildingRow) -> f64| {
                if rows.is_empty() {
                    MISSING.to_string()
                } else {
                    fixed2(rows.iter().map(|r| f(r)).sum::<f64>() / rows.len() as f64)
                }
            };
            let scores: Vec<f64> = rows.iter().filter_map(|r| r.pca_score).collect();
            let pca = if scores.is_empty() {
                MISSING.to_string()
            } else {
                fixed2(scores.iter().sum::<f64>() / scores.len() as f64)
            };
            vec![
                label.clone(),
                mean(&|r| r.num_vertices as f64),
                mean(&|r| r.point_degree),
                mean(&|r| r.convexity),
                mean(&|r| r.compactness),
                pca,
            ]
        })
        .collect()
}

pub fn write_analysis(a: &Analysis, out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let path = out.join("buildings.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    for r in &a.rows {
        w.serialize(r)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    if a.rows.is_empty() {
        w.write_record([
            "dataset",
            "scene_id",
            "building_id",
            "num_vertices",
            "point_degree",
            "convexity",
            "compactness",
            "pca_score",
        ])
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    write_csv(&out.join("summary.csv"), &SUMMARY_HEADER, &summary_rows(a))?;

    if !a.models.is_empty() {
        let path = out.join("pca_model.json");
        let json = match a.models.get("") {
            Some(m) if a.models.len() == 1 => serde_json::to_string_pretty(m),
            _ => serde_json::to_string_pretty(&a.models),
        }
        .expect("models serialize");
        std::fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}
