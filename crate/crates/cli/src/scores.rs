//! `split` and `histogram`: commands that consume a scored analysis file.

use std::collections::BTreeMap;
use std::path::Path;

use polyroof::complexity::{histogram_in_range, stratified_split_scenes};
use polyroof::SplitManifest;

use crate::error::{CliError, Result};
use crate::table::{read_scores, write_csv, ScoreRow};

fn require_score(path: &Path, r: &ScoreRow) -> Result<f64> {
    r.pca_score.ok_or_else(|| {
        CliError::invalid(
            path,
            format!(
                "line {}: empty pca_score; analyze with --fit-pca or --pca-model first",
                r.line
            ),
        )
    })
}

fn require_scene<'a>(path: &Path, r: &'a ScoreRow) -> Result<&'a str> {
    r.scene_id.as_deref().ok_or_else(|| CliError::Parse {
        path: path.to_path_buf(),
        line: 1,
        column: 0,
        message: "missing column scene_id".into(),
    })
}

/// Mean building score per scene id, sorted by id.
fn scene_means(path: &Path, rows: &[&ScoreRow]) -> Result<Vec<(String, f64)>> {
    let mut acc: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for r in rows {
        let s = require_score(path, r)?;
        let e = acc.entry(require_scene(path, r)?).or_default();
        e.0 += s;
        e.1 += 1;
    }
    Ok(acc
        .into_iter()
        .map(|(id, (sum, n))| (id.to_string(), sum / n as f64))
        .collect())
}

pub fn split(input: &Path, ratios: &[f64], bins: usize, seed: u64, dataset: Option<&str>) -> Result<SplitManifest> {
    let ratios: [f64; 3] = ratios.try_into().map_err(|_| {
        CliError::Usage(format!(
            "--ratios takes exactly 3 values (train,val,test), got {}",
            ratios.len()
        ))
    })?;
    let rows = read_scores(input)?;
    let selected: Vec<&ScoreRow> = match dataset {
        Some(d) => rows.iter().filter(|r| r.dataset == d).collect(),
        None => {
            let mut labels: Vec<&str> = rows.iter().map(|r| r.dataset.as_str()).collect();
            labels.sort();
            labels.dedup();
            if labels.len() > 1 {
                return Err(CliError::Usage(format!(
                    "{} holds several datasets ({}); choose one with --dataset",
                    input.display(),
                    labels.join(", ")
                )));
            }
            rows.iter().collect()
        }
    };
    let scenes = scene_means(input, &selected)?;
    stratified_split_scenes(&scenes, ratios, bins, seed).map_err(|e| CliError::Domain(e.to_string()))
}

pub fn manifest_json(m: &SplitManifest) -> String {
    serde_json::to_string_pretty(m).expect("manifests serialize") + "\n"
}

/// Histogram of PCA scores with shared bin edges; one count column per
/// dataset label, in order of first appearance.
pub fn histogram_table(input: &Path, bins: usize, per_scene: bool) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    if bins == 0 {
        return Err(CliError::Usage("--bins must be at least 1".into()));
    }
    let rows = read_scores(input)?;
    let mut labels: Vec<String> = Vec::new();
    for r in &rows {
        if !labels.contains(&r.dataset) {
            labels.push(r.dataset.clone());
        }
    }
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(labels.len());
    for label in &labels {
        let mine: Vec<&ScoreRow> = rows.iter().filter(|r| &r.dataset == label).collect();
        values.push(if per_scene {
            scene_means(input, &mine)?.into_iter().map(|s| s.1).collect()
        } else {
            mine.iter().map(|r| require_score(input, r)).collect::<Result<_>>()?
        });
    }
    let all = values.iter().flatten();
    let lo = all.clone().copied().fold(f64::INFINITY, f64::min);
    let hi = all.copied().fold(f64::NEG_INFINITY, f64::max);
    let mut header = vec!["bin_lo".to_string(), "bin_hi".to_string()];
    header.extend(labels.iter().cloned());
    if !lo.is_finite() {
        return Ok((header, Vec::new()));
    }
    let hists = values
        .iter()
        .map(|v| histogram_in_range(v, bins, lo, hi).map_err(|e| CliError::Domain(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let table = (0..bins)
        .map(|b| {
            let mut row = vec![hists[0][b].lo.to_string(), hists[0][b].hi.to_string()];
            row.extend(hists.iter().map(|h| h[b].count.to_string()));
            row
        })
        .collect();
    Ok((header, table))
}

pub fn write_histogram(input: &Path, bins: usize, per_scene: bool, out: &Path) -> Result<()> {
    let (header, rows) = histogram_table(input, bins, per_scene)?;
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(out, &header, &rows)
}
