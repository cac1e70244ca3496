//! Building complexity features, the PCA complexity score, score
//! histograms, and complexity-balanced dataset splits.
//!
//! The complexity score is the projection of the z-scored feature vector
//! (vertex count, point degree, convexity, compactness) onto the *second*
//! principal component, rescaled to 0-100 with the min/max projection of the
//! fitting set. Raw projections are available through
//! [`PcaModel::project`].

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{compactness, convexity};
use crate::wireframe::{BuildingInstance, Wireframe};

pub const FEATURE_NAMES: [&str; 4] = ["num_vertices", "point_degree", "convexity", "compactness"];

/// Minimum number of records for a PCA fit.
pub const MIN_PCA_RECORDS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexityError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("feature {feature} has zero variance")]
    DegenerateVariance { feature: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("building {building_id} of scene {scene_id} has no pca score")]
    Unscored { scene_id: String, building_id: String },
}

pub type Result<T> = std::result::Result<T, ComplexityError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRecord {
    pub scene_id: String,
    pub building_id: String,
    pub num_vertices: usize,
    pub point_degree: f64,
    pub convexity: f64,
    pub compactness: f64,
    pub pca_score: Option<f64>,
}

impl ComplexityRecord {
    pub fn features(&self) -> [f64; 4] {
        [
            self.num_vertices as f64,
            self.point_degree,
            self.convexity,
            self.compactness,
        ]
    }
}

/// Complexity features of one building. Degrees are taken from the full
/// scene wireframe the building was derived from.
pub fn featurize(scene_id: &str, b: &BuildingInstance, w: &Wireframe) -> ComplexityRecord {
    let degrees = w.degrees();
    let ids: Vec<usize> = b.corners.iter().map(|c| c.id).filter(|&i| i < degrees.len()).collect();
    let point_degree = if ids.is_empty() {
        0.0
    } else {
        ids.iter().map(|&i| degrees[i] as f64).sum::<f64>() / ids.len() as f64
    };
    ComplexityRecord {
        scene_id: scene_id.to_string(),
        building_id: b.building_id.clone(),
        num_vertices: b.corners.len(),
        point_degree,
        convexity: convexity(&b.outline),
        compactness: compactness(&b.outline),
        pca_score: None,
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching unit
/// eigenvectors as rows.
pub fn jacobi_eigen<const N: usize>(matrix: &[[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut a = *matrix;
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = a.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs())).max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0_f64;
        for p in 0..N {
            for q in (p + 1)..N {
                off = off.max(a[p][q].abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]).then(i.cmp(&j)));
    let mut values = [0.0; N];
    let mut vectors = [[0.0; N]; N];
    for (r, &i) in order.iter().enumerate() {
        values[r] = a[i][i];
        for k in 0..N {
            vectors[r][k] = v[k][i];
        }
    }
    (values, vectors)
}

/// Standardized PCA over the four complexity features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub feature_means: [f64; 4],
    pub feature_stds: [f64; 4],
    /// Rows are principal components, by descending eigenvalue.
    pub components: [[f64; 4]; 4],
    pub eigenvalues: [f64; 4],
    /// Second-component projection range over the fitting set.
    pub score_min: f64,
    pub score_max: f64,
}

impl PcaModel {
    /// Fits on raw feature rows.
    pub fn fit(rows: &[[f64; 4]]) -> Result<Self> {
        let n = rows.len();
        if n < MIN_PCA_RECORDS {
            return Err(ComplexityError::InsufficientData(format!(
                "PCA needs at least {MIN_PCA_RECORDS} records, got {n}"
            )));
        }
        let nf = n as f64;
        let mut means = [0.0; 4];
        for row in rows {
            for k in 0..4 {
                means[k] += row[k];
            }
        }
        means.iter_mut().for_each(|m| *m /= nf);
        let mut stds = [0.0; 4];
        for row in rows {
            for k in 0..4 {
                stds[k] += (row[k] - means[k]).powi(2);
            }
        }
        for k in 0..4 {
            stds[k] = (stds[k] / (nf - 1.0)).sqrt();
            if !(stds[k] > 1e-12 * (1.0 + means[k].abs())) {
                return Err(ComplexityError::DegenerateVariance {
                    feature: FEATURE_NAMES[k],
                });
            }
        }
        let mut cov = [[0.0; 4]; 4];
        for row in rows {
            let z: [f64; 4] = std::array::from_fn(|k| (row[k] - means[k]) / stds[k]);
            for i in 0..4 {
                for j in 0..4 {
                    cov[i][j] += z[i] * z[j];
                }
            }
        }
        cov.iter_mut().flatten().for_each(|c| *c /= nf - 1.0);
        let (mut eigenvalues, mut components) = jacobi_eigen(&cov);
        for value in eigenvalues.iter_mut() {
            *value = value.max(0.0);
        }
        for comp in components.iter_mut() {
            let lead = (0..4).fold(0, |best, k| if comp[k].abs() > comp[best].abs() { k } else { best });
            if comp[lead] < 0.0 {
                comp.iter_mut().for_each(|x| *x = -*x);
            }
        }
        let mut model = Self {
            feature_means: means,
            feature_stds: stds,
            components,
            eigenvalues,
            score_min: 0.0,
            score_max: 0.0,
        };
        let (lo, hi) = rows
            .iter()
            .map(|r| model.project(r)[1])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p), hi.max(p)));
        model.score_min = lo;
        model.score_max = hi;
        Ok(model)
    }

    pub fn standardize(&self, features: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|k| (features[k] - self.feature_means[k]) / self.feature_stds[k])
    }

    /// Raw projections onto all four components.
    pub fn project(&self, features: &[f64; 4]) -> [f64; 4] {
        let z = self.standardize(features);
        std::array::from_fn(|c| (0..4).map(|k| self.components[c][k] * z[k]).sum())
    }

    /// Second-component projection rescaled to 0-100 and clamped.
    pub fn score_features(&self, features: &[f64; 4]) -> f64 {
        let span = self.score_max - self.score_min;
        if !(span > 0.0) {
            return 0.0;
        }
        (100.0 * (self.project(features)[1] - self.score_min) / span).clamp(0.0, 100.0)
    }
}

pub fn fit_pca(records: &[ComplexityRecord]) -> Result<PcaModel> {
    let rows: Vec<[f64; 4]> = records.iter().map(ComplexityRecord::features).collect();
    PcaModel::fit(&rows)
}

pub fn pca_score(m: &PcaModel, r: &ComplexityRecord) -> f64 {
    m.score_features(&r.features())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width histogram over `[min, max]` of the scores.
pub fn histogram(scores: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if scores.is_empty() {
        return Err(ComplexityError::InsufficientData("no scores to histogram".into()));
    }
    let (lo, hi) = scores.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
        (lo.min(s), hi.max(s))
    });
    histogram_in_range(scores, bins, lo, hi)
}

/// Equal-width histogram over a caller-chosen range; values outside the
/// range are clamped into the first or last bin. The maximum value lands in
/// the last bin.
pub fn histogram_in_range(scores: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(ComplexityError::InvalidArgument("bins must be at least 1".into()));
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(ComplexityError::InvalidArgument(format!("non-finite score {s}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(ComplexityError::InvalidArgument(format!("invalid range [{lo}, {hi}]")));
    }
    let width = hi - lo;
    let edge = |k: usize| {
        if k == bins {
            hi
        } else {
            lo + width * k as f64 / bins as f64
        }
    };
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|k| HistogramBin {
            lo: edge(k),
            hi: edge(k + 1),
            count: 0,
        })
        .collect();
    for &s in scores {
        let idx = if width > 0.0 {
            (((s - lo) / width) * bins as f64).floor().clamp(0.0, (bins - 1) as f64) as usize
        } else {
            bins - 1
        };
        out[idx].count += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub ratios: [f64; 3],
    pub bins: usize,
    pub bin_edges: Vec<f64>,
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

fn validate_ratios(ratios: [f64; 3]) -> Result<()> {
    if ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(ComplexityError::InvalidArgument(format!(
            "ratios must be positive, got {ratios:?}"
        )));
    }
    let sum: f64 = ratios.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(ComplexityError::InvalidArgument(format!(
            "ratios must sum to 1, got {sum}"
        )));
    }
    Ok(())
}

/// Mean building score per scene, sorted by scene id.
pub fn scene_scores(records: &[ComplexityRecord]) -> Result<Vec<(String, f64)>> {
    let mut acc: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for r in records {
        let s = r.pca_score.ok_or_else(|| ComplexityError::Unscored {
            scene_id: r.scene_id.clone(),
            building_id: r.building_id.clone(),
        })?;
        let e = acc.entry(r.scene_id.as_str()).or_default();
        e.0 += s;
        e.1 += 1;
    }
    Ok(acc
        .into_iter()
        .map(|(id, (sum, n))| (id.to_string(), sum / n as f64))
        .collect())
}

/// Largest-remainder apportionment of `n` items; equal remainders are
/// ordered by `tie_order` (a permutation of split indices).
fn apportion(n: usize, ratios: [f64; 3], tie_order: &[usize; 3]) -> [usize; 3] {
    let ideal: [f64; 3] = std::array::from_fn(|j| ratios[j] * n as f64);
    let mut counts: [usize; 3] = std::array::from_fn(|j| (ideal[j] + 1e-9).floor() as usize);
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = tie_order.to_vec();
    let frac = |j: usize| ideal[j] - counts[j] as f64;
    order.sort_by(|&a, &b| {
        let (fa, fb) = (frac(a), frac(b));
        if (fa - fb).abs() <= 1e-9 {
            std::cmp::Ordering::Equal
        } else {
            fb.total_cmp(&fa)
        }
    });
    for &j in order.iter().take(n.saturating_sub(assigned)) {
        counts[j] += 1;
    }
    counts
}

fn tie_order(rng: &mut ChaCha8Rng) -> [usize; 3] {
    let mut order = [0, 1, 2];
    order.shuffle(rng);
    order
}

fn manifest_from(
    seed: u64,
    ratios: [f64; 3],
    bins: usize,
    bin_edges: Vec<f64>,
    mut splits: [Vec<String>; 3],
) -> SplitManifest {
    splits.iter_mut().for_each(|s| s.sort());
    let [train, val, test] = splits;
    SplitManifest {
        seed,
        ratios,
        bins,
        bin_edges,
        train,
        val,
        test,
    }
}

/// Splits scenes into train/val/test so that every complexity quantile bin
/// is represented in proportion to `ratios`.
///
/// Scenes are ranked by score and cut into `bins` equal-count bins. Each
/// bin is shuffled with a ChaCha8 generator seeded by `seed`. Every bin
/// gives each split either the floor or the ceiling of its proportional
/// share, and the ceilings are distributed so the global split sizes equal
/// the largest-remainder apportionment of the whole set.
pub fn stratified_split_scenes(
    scenes: &[(String, f64)],
    ratios: [f64; 3],
    bins: usize,
    seed: u64,
) -> Result<SplitManifest> {
    validate_ratios(ratios)?;
    if bins == 0 {
        return Err(ComplexityError::InvalidArgument("bins must be at least 1".into()));
    }
    if let Some((id, s)) = scenes.iter().find(|(_, s)| !s.is_finite()) {
        return Err(ComplexityError::InvalidArgument(format!(
            "scene {id} has non-finite score {s}"
        )));
    }
    let n = scenes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ties = tie_order(&mut rng);
    let targets = apportion(n, ratios, &ties);
    if let Some(j) = targets.iter().position(|&t| t == 0) {
        let name = ["train", "val", "test"][j];
        return Err(ComplexityError::InsufficientData(format!(
            "{n} scenes leave the {name} split empty"
        )));
    }

    let mut ranked: Vec<&(String, f64)> = scenes.iter().collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let nbins = bins.min(n);
    let bounds: Vec<usize> = (0..=nbins).map(|b| b * n / nbins).collect();
    let mut bin_edges: Vec<f64> = (0..nbins).map(|b| ranked[bounds[b]].1).collect();
    bin_edges.push(ranked[n - 1].1);

    let mut members: Vec<Vec<&str>> = (0..nbins)
        .map(|b| ranked[bounds[b]..bounds[b + 1]].iter().map(|s| s.0.as_str()).collect())
        .collect();
    for m in members.iter_mut() {
        m.shuffle(&mut rng);
    }

    let alloc = allocate_bins(&members, ratios, targets, &ties, true)
        .or_else(|| allocate_bins(&members, ratios, targets, &ties, false))
        .ok_or_else(|| ComplexityError::InsufficientData("no balanced allocation exists".into()))?;

    let mut splits: [Vec<String>; 3] = Default::default();
    for (m, counts) in members.iter().zip(&alloc) {
        let mut it = m.iter();
        for (j, &c) in counts.iter().enumerate() {
            splits[j].extend(it.by_ref().take(c).map(|s| s.to_string()));
        }
    }
    Ok(manifest_from(seed, ratios, bins, bin_edges, splits))
}

/// Per-bin split counts. `prefer_coverage` first hands extra scenes to
/// splits a bin would otherwise miss; returns `None` if the global targets
/// cannot be met that way.
fn allocate_bins(
    members: &[Vec<&str>],
    ratios: [f64; 3],
    targets: [usize; 3],
    ties: &[usize; 3],
    prefer_coverage: bool,
) -> Option<Vec<[usize; 3]>> {
    let mut alloc: Vec<[usize; 3]> = Vec::with_capacity(members.len());
    let mut fracs: Vec<[f64; 3]> = Vec::with_capacity(members.len());
    let mut leftover: Vec<usize> = Vec::with_capacity(members.len());
    for m in members {
        let ideal: [f64; 3] = std::array::from_fn(|j| ratios[j] * m.len() as f64);
        let floor: [usize; 3] = std::array::from_fn(|j| (ideal[j] + 1e-9).floor() as usize);
        fracs.push(std::array::from_fn(|j| ideal[j] - floor[j] as f64));
        leftover.push(m.len() - floor.iter().sum::<usize>());
        alloc.push(floor);
    }
    let mut demand: [i64; 3] =
        std::array::from_fn(|j| targets[j] as i64 - alloc.iter().map(|a| a[j] as i64).sum::<i64>());
    if demand.iter().any(|&d| d < 0) {
        return None;
    }
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| leftover[b].cmp(&leftover[a]).then(a.cmp(&b)));
    for b in order {
        let mut cand: Vec<usize> = ties.iter().copied().filter(|&j| demand[j] > 0).collect();
        let rank = |j: usize| ties.iter().position(|&t| t == j).unwrap_or(0);
        let covers = |j: usize| prefer_coverage && members[b].len() >= 3 && alloc[b][j] == 0;
        cand.sort_by(|&x, &y| {
            covers(y)
                .cmp(&covers(x))
                .then(demand[y].cmp(&demand[x]))
                .then(fracs[b][y].total_cmp(&fracs[b][x]))
                .then(rank(x).cmp(&rank(y)))
        });
        if cand.len() < leftover[b] {
            return None;
        }
        for &j in cand.iter().take(leftover[b]) {
            alloc[b][j] += 1;
            demand[j] -= 1;
        }
    }
    demand.iter().all(|&d| d == 0).then_some(alloc)
}

/// Stratified split over building records; scenes are scored by the mean
/// of their buildings' scores and never divided between splits.
pub fn stratified_split(
    records: &[ComplexityRecord],
    ratios: [f64; 3],
    bins: usize,
    seed: u64,
) -> Result<SplitManifest> {
    stratified_split_scenes(&scene_scores(records)?, ratios, bins, seed)
}

/// Unstratified baseline: one seeded shuffle of all scenes, cut by the same
/// global split sizes as [`stratified_split_scenes`].
pub fn random_split_scenes(scenes: &[(String, f64)], ratios: [f64; 3], seed: u64) -> Result<SplitManifest> {
    validate_ratios(ratios)?;
    let n = scenes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ties = tie_order(&mut rng);
    let targets = apportion(n, ratios, &ties);
    if targets.contains(&0) {
        return Err(ComplexityError::InsufficientData(format!(
            "{n} scenes leave a split empty"
        )));
    }
    let mut ids: Vec<&str> = scenes.iter().map(|s| s.0.as_str()).collect();
    ids.sort();
    ids.shuffle(&mut rng);
    let mut it = ids.into_iter();
    let splits: [Vec<String>; 3] = std::array::from_fn(|j| it.by_ref().take(targets[j]).map(String::from).collect());
    Ok(manifest_from(seed, ratios, 1, Vec::new(), splits))
}
