//! Instance matching and the roof-reconstruction scores: point position
//! accuracy, line distance accuracy, building and roof-segment F1,
//! reconstruction score and the combined area-segmentation score.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assignment::min_cost_assignment;
use crate::geometry::{self, GeometryError, Point2, PolygonRing};
use crate::wireframe::BuildingInstance;

pub const DEFAULT_IOU_THRESHOLD: f64 = 0.5;
pub const DEFAULT_POINT_RADIUS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchPair {
    pub gt: usize,
    pub pred: usize,
    pub iou: f64,
}

/// One-to-one matching between ground-truth and predicted instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSet {
    /// Sorted by ground-truth index.
    pub pairs: Vec<MatchPair>,
    pub unmatched_gt: Vec<usize>,
    pub unmatched_pred: Vec<usize>,
    pub iou_threshold: f64,
}

impl MatchSet {
    pub fn total_iou(&self) -> f64 {
        self.pairs.iter().map(|p| p.iou).sum()
    }
}

/// Maximum-total-IoU matching on a precomputed `gt x pred` IoU matrix.
/// Entries below `threshold` can never be paired.
pub fn match_iou_matrix(ious: &[Vec<f64>], n_pred: usize, threshold: f64) -> MatchSet {
    let n_gt = ious.len();
    let cost: Vec<Vec<f64>> = ious
        .iter()
        .map(|row| row.iter().map(|&v| if v >= threshold { -v } else { 0.0 }).collect())
        .collect();
    let assignment = if n_pred == 0 {
        vec![None; n_gt]
    } else {
        min_cost_assignment(&cost)
    };
    let mut pairs = Vec::new();
    let mut pred_used = vec![false; n_pred];
    for (g, a) in assignment.into_iter().enumerate() {
        if let Some(p) = a {
            if ious[g][p] >= threshold {
                pairs.push(MatchPair {
                    gt: g,
                    pred: p,
                    iou: ious[g][p],
                });
                pred_used[p] = true;
            }
        }
    }
    let matched_gt: Vec<bool> = (0..n_gt).map(|g| pairs.iter().any(|p| p.gt == g)).collect();
    MatchSet {
        unmatched_gt: (0..n_gt).filter(|&g| !matched_gt[g]).collect(),
        unmatched_pred: (0..n_pred).filter(|&p| !pred_used[p]).collect(),
        pairs,
        iou_threshold: threshold,
    }
}

pub fn iou_matrix(gt: &[&PolygonRing], pred: &[&PolygonRing]) -> Result<Vec<Vec<f64>>, GeometryError> {
    gt.iter()
        .map(|g| pred.iter().map(|p| geometry::iou(g, p)).collect())
        .collect()
}

/// Matches polygons by optimal assignment on their IoU matrix.
pub fn match_instances(
    gt: &[PolygonRing],
    pred: &[PolygonRing],
    iou_threshold: f64,
) -> Result<MatchSet, GeometryError> {
    let g: Vec<&PolygonRing> = gt.iter().collect();
    let p: Vec<&PolygonRing> = pred.iter().collect();
    Ok(match_iou_matrix(&iou_matrix(&g, &p)?, pred.len(), iou_threshold))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointAccuracy {
    /// RMSE over matched pairs; 0 when nothing matched.
    pub rmse: f64,
    /// matched / max(|gt|, |pred|); 0 when nothing matched.
    pub match_rate: f64,
    pub matched: usize,
    pub sum_squared_error: f64,
}

/// Pairs points one-to-one within `radius`, maximizing the number of pairs
/// and then minimizing the total squared distance.
pub fn point_position_accuracy(gt: &[Point2], pred: &[Point2], radius: f64) -> PointAccuracy {
    let none = PointAccuracy {
        rmse: 0.0,
        match_rate: 0.0,
        matched: 0,
        sum_squared_error: 0.0,
    };
    if gt.is_empty() || pred.is_empty() || !(radius > 0.0) {
        return none;
    }
    let r2 = radius * radius;
    let n = gt.len();
    // Points farther apart than `radius` never pair, so each connected
    // component of the within-radius graph is solved on its own.
    let mut parent: Vec<usize> = (0..n + pred.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (g, a) in gt.iter().enumerate() {
        for (p, b) in pred.iter().enumerate() {
            if a.distance_squared(*b) <= r2 {
                let (x, y) = (root(&mut parent, g), root(&mut parent, n + p));
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for g in 0..n {
        groups.entry(root(&mut parent, g)).or_default().0.push(g);
    }
    for p in 0..pred.len() {
        if let Some(e) = groups.get_mut(&root(&mut parent, n + p)) {
            e.1.push(p);
        }
    }
    let mut assigned: Vec<Option<usize>> = vec![None; n];
    for (gs, ps) in groups.values() {
        match (gs.len(), ps.len()) {
            (_, 0) => {}
            (1, 1) => assigned[gs[0]] = Some(ps[0]),
            (k, l) => {
                // Every admissible pair is worth more than any total of
                // squared errors, so the assignment first maximizes the
                // pair count.
                let bonus = r2 * (k.min(l) as f64 + 1.0) + 1.0;
                let cost: Vec<Vec<f64>> = gs
                    .iter()
                    .map(|&g| {
                        ps.iter()
                            .map(|&p| {
                                let d2 = gt[g].distance_squared(pred[p]);
                                if d2 <= r2 {
                                    d2 - bonus
                                } else {
                                    0.0
                                }
                            })
                            .collect()
                    })
                    .collect();
                for (i, a) in min_cost_assignment(&cost).into_iter().enumerate() {
                    if let Some(j) = a {
                        if gt[gs[i]].distance_squared(pred[ps[j]]) <= r2 {
                            assigned[gs[i]] = Some(ps[j]);
                        }
                    }
                }
            }
        }
    }
    let mut matched = 0;
    let mut sum = 0.0;
    for (g, a) in assigned.iter().enumerate() {
        if let Some(p) = *a {
            matched += 1;
            sum += gt[g].distance_squared(pred[p]);
        }
    }
    if matched == 0 {
        return none;
    }
    PointAccuracy {
        rmse: (sum / matched as f64).sqrt(),
        match_rate: matched as f64 / gt.len().max(pred.len()) as f64,
        matched,
        sum_squared_error: sum,
    }
}

/// Largest distance from a point of `a` to its nearest point of `b`.
pub fn directed_hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    a.iter()
        .map(|p| b.iter().map(|q| p.distance(*q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Symmetric discrete Hausdorff distance between two point sets.
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "hausdorff needs non-empty inputs");
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Discrete Fréchet distance between two polylines (coupling DP, two rows).
pub fn frechet_discrete(a: &[Point2], b: &[Point2]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "frechet needs non-empty inputs");
    let m = b.len();
    let mut prev = vec![0.0; m];
    let mut cur = vec![0.0; m];
    for (i, pa) in a.iter().enumerate() {
        for (j, pb) in b.iter().enumerate() {
            let d = pa.distance(*pb);
            cur[j] = match (i, j) {
                (0, 0) => d,
                (0, _) => d.max(cur[j - 1]),
                (_, 0) => d.max(prev[0]),
                _ => d.max(prev[j].min(prev[j - 1]).min(cur[j - 1])),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

/// Closed vertex sequence of `ring`, optionally densified so no step along
/// an edge exceeds `densify` pixels.
pub fn boundary_sequence(ring: &PolygonRing, densify: Option<f64>) -> Vec<Point2> {
    let mut out = Vec::with_capacity(ring.len() + 1);
    for (a, b) in ring.edges() {
        out.push(a);
        if let Some(step) = densify.filter(|s| *s > 0.0) {
            let k = (a.distance(b) / step).ceil() as usize;
            for s in 1..k {
                out.push(a.lerp(b, s as f64 / k as f64));
            }
        }
    }
    out.push(ring.vertices()[0]);
    out
}

/// `pred` rotated to start at its vertex nearest to `gt`'s first vertex.
pub fn align_start(gt: &PolygonRing, pred: &PolygonRing) -> Vec<Point2> {
    let anchor = gt.vertices()[0];
    let v = pred.vertices();
    let start = (0..v.len())
        .min_by(|&a, &b| v[a].distance_squared(anchor).total_cmp(&v[b].distance_squared(anchor)))
        .unwrap_or(0);
    let mut out = v.to_vec();
    out.rotate_left(start);
    out
}

/// Mean of Hausdorff and Fréchet distance for one matched polygon pair.
pub fn pair_line_distance(gt: &PolygonRing, pred: &PolygonRing, densify: Option<f64>) -> f64 {
    let a = boundary_sequence(gt, densify);
    let rotated = PolygonRing::from_ccw_unchecked(align_start(gt, pred));
    let b = boundary_sequence(&rotated, densify);
    0.5 * (hausdorff(&a, &b) + frechet_discrete(&a, &b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineDistance {
    /// `None` when there are no matched pairs.
    pub mean: Option<f64>,
    pub pairs: usize,
    pub sum: f64,
}

/// Mean over matched pairs of the per-pair Hausdorff/Fréchet average.
pub fn line_distance_accuracy(
    matches: &MatchSet,
    gt: &[PolygonRing],
    pred: &[PolygonRing],
    densify: Option<f64>,
) -> LineDistance {
    let sum: f64 = matches
        .pairs
        .iter()
        .map(|p| pair_line_distance(&gt[p.gt], &pred[p.pred], densify))
        .sum();
    let pairs = matches.pairs.len();
    LineDistance {
        mean: (pairs > 0).then(|| sum / pairs as f64),
        pairs,
        sum,
    }
}

/// F1 in percent from a true-positive count and instance totals.
pub fn f1_from_counts(tp: usize, n_gt: usize, n_pred: usize) -> f64 {
    if tp == 0 {
        return 0.0;
    }
    let fp = n_pred.saturating_sub(tp);
    let fn_ = n_gt.saturating_sub(tp);
    100.0 * (2 * tp) as f64 / (2 * tp + fp + fn_) as f64
}

pub fn instance_f1(matches: &MatchSet, n_gt: usize, n_pred: usize) -> f64 {
    f1_from_counts(matches.pairs.len(), n_gt, n_pred)
}

/// Harmonic mean of building and roof-segment F1 (percent).
pub fn reconstruction_score(building_f1: f64, roof_f1: f64) -> f64 {
    let s = building_f1 + roof_f1;
    if s <= 0.0 {
        0.0
    } else {
        2.0 * building_f1 * roof_f1 / s
    }
}

/// Sum of the three F1 values given as fractions; in `[0, 3]`.
pub fn area_segmentation_score(building_f1: f64, roof_f1: f64, reconstruction: f64) -> f64 {
    building_f1 + roof_f1 + reconstruction
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub iou_threshold: f64,
    pub point_radius: f64,
    pub densify: Option<f64>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            iou_threshold: DEFAULT_IOU_THRESHOLD,
            point_radius: DEFAULT_POINT_RADIUS,
            densify: None,
        }
    }
}

/// Raw counts and sums behind a report; pooled for dataset-level values.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalCounts {
    pub n_gt_buildings: usize,
    pub n_pred_buildings: usize,
    pub n_matched_buildings: usize,
    pub n_gt_segments: usize,
    pub n_pred_segments: usize,
    pub n_matched_segments: usize,
    pub n_gt_points: usize,
    pub n_pred_points: usize,
    pub n_matched_points: usize,
    pub n_line_pairs: usize,
    pub sum_squared_point_error: f64,
    pub sum_line_distance: f64,
}

impl EvalCounts {
    fn add(&mut self, o: &EvalCounts) {
        self.n_gt_buildings += o.n_gt_buildings;
        self.n_pred_buildings += o.n_pred_buildings;
        self.n_matched_buildings += o.n_matched_buildings;
        self.n_gt_segments += o.n_gt_segments;
        self.n_pred_segments += o.n_pred_segments;
        self.n_matched_segments += o.n_matched_segments;
        self.n_gt_points += o.n_gt_points;
        self.n_pred_points += o.n_pred_points;
        self.n_matched_points += o.n_matched_points;
        self.n_line_pairs += o.n_line_pairs;
        self.sum_squared_point_error += o.sum_squared_point_error;
        self.sum_line_distance += o.sum_line_distance;
    }
}

/// One row of results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Pixels.
    pub point_pos_acc: f64,
    pub point_match_rate: f64,
    /// Pixels; `None` when no roof segment was matched.
    pub line_dist_acc: Option<f64>,
    pub building_f1: f64,
    pub roof_f1: f64,
    pub reconstruction_score: f64,
    pub area_segmentation_score: f64,
    pub counts: EvalCounts,
}

impl EvalReport {
    /// Derives every metric from pooled counts.
    pub fn from_counts(c: EvalCounts) -> Self {
        let building_f1 = f1_from_counts(c.n_matched_buildings, c.n_gt_buildings, c.n_pred_buildings);
        let roof_f1 = f1_from_counts(c.n_matched_segments, c.n_gt_segments, c.n_pred_segments);
        let recon = reconstruction_score(building_f1, roof_f1);
        let point_pos_acc = if c.n_matched_points > 0 {
            (c.sum_squared_point_error / c.n_matched_points as f64).sqrt()
        } else {
            0.0
        };
        let denom = c.n_gt_points.max(c.n_pred_points);
        Self {
            point_pos_acc,
            point_match_rate: if denom > 0 {
                c.n_matched_points as f64 / denom as f64
            } else {
                0.0
            },
            line_dist_acc: (c.n_line_pairs > 0).then(|| c.sum_line_distance / c.n_line_pairs as f64),
            building_f1,
            roof_f1,
            reconstruction_score: recon,
            area_segmentation_score: area_segmentation_score(building_f1 / 100.0, roof_f1 / 100.0, recon / 100.0),
            counts: c,
        }
    }
}

fn ring_refs<'a>(buildings: &[&'a BuildingInstance]) -> Vec<&'a PolygonRing> {
    buildings.iter().map(|b| &b.outline).collect()
}

/// Scores one scene: buildings are matched on their outlines, roof segments
/// only inside matched building pairs, corner points likewise.
///
/// Buildings are visited in a canonical geometric order, so the result does
/// not depend on the order of `gt`, `pred`, or their segments.
pub fn evaluate_scene(
    gt: &[BuildingInstance],
    pred: &[BuildingInstance],
    cfg: &EvalConfig,
) -> Result<EvalReport, GeometryError> {
    let gt = canonical_order(gt);
    let pred = canonical_order(pred);
    let mut c = EvalCounts {
        n_gt_buildings: gt.len(),
        n_pred_buildings: pred.len(),
        n_gt_segments: gt.iter().map(|b| b.segments.len()).sum(),
        n_pred_segments: pred.iter().map(|b| b.segments.len()).sum(),
        n_gt_points: gt.iter().map(|b| b.corners.len()).sum(),
        n_pred_points: pred.iter().map(|b| b.corners.len()).sum(),
        ..EvalCounts::default()
    };
    let ious = iou_matrix(&ring_refs(&gt), &ring_refs(&pred))?;
    let buildings = match_iou_matrix(&ious, pred.len(), cfg.iou_threshold);
    c.n_matched_buildings = buildings.pairs.len();
    for pair in &buildings.pairs {
        let (g, p) = (gt[pair.gt], pred[pair.pred]);
        let gs = sorted_segments(g);
        let ps = sorted_segments(p);
        let seg_ious = iou_matrix(&gs, &ps)?;
        let segs = match_iou_matrix(&seg_ious, ps.len(), cfg.iou_threshold);
        c.n_matched_segments += segs.pairs.len();
        for sp in &segs.pairs {
            c.sum_line_distance += pair_line_distance(gs[sp.gt], ps[sp.pred], cfg.densify);
            c.n_line_pairs += 1;
        }
        let acc = point_position_accuracy(&g.corner_points(), &p.corner_points(), cfg.point_radius);
        c.n_matched_points += acc.matched;
        c.sum_squared_point_error += acc.sum_squared_error;
    }
    Ok(EvalReport::from_counts(c))
}

fn ring_key(r: &PolygonRing) -> Vec<Point2> {
    r.canonical().vertices().to_vec()
}

fn cmp_rings(a: &PolygonRing, b: &PolygonRing) -> std::cmp::Ordering {
    let (ka, kb) = (ring_key(a), ring_key(b));
    for (p, q) in ka.iter().zip(&kb) {
        let o = geometry::lex_cmp(*p, *q);
        if o.is_ne() {
            return o;
        }
    }
    ka.len().cmp(&kb.len())
}

fn canonical_order(buildings: &[BuildingInstance]) -> Vec<&BuildingInstance> {
    let mut v: Vec<&BuildingInstance> = buildings.iter().collect();
    v.sort_by(|a, b| cmp_rings(&a.outline, &b.outline));
    v
}

fn sorted_segments(b: &BuildingInstance) -> Vec<&PolygonRing> {
    let mut v: Vec<&PolygonRing> = b.segments.iter().map(|s| &s.ring).collect();
    v.sort_by(|a, b| cmp_rings(a, b));
    v
}

/// Per-scene means of the headline metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroMeans {
    pub point_pos_acc: f64,
    pub line_dist_acc: Option<f64>,
    pub building_f1: f64,
    pub roof_f1: f64,
    pub reconstruction_score: f64,
    pub area_segmentation_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n_scenes: usize,
    /// Metrics recomputed from pooled counts across scenes.
    pub micro: EvalReport,
    pub macro_means: MacroMeans,
}

/// Aggregates scene reports in the order given; callers fix the order
/// (e.g. by scene id) for reproducible floating-point sums.
pub fn aggregate(reports: &[EvalReport]) -> DatasetSummary {
    let mut pooled = EvalCounts::default();
    for r in reports {
        pooled.add(&r.counts);
    }
    let n = reports.len();
    let mean = |f: &dyn Fn(&EvalReport) -> f64| {
        if n == 0 {
            0.0
        } else {
            reports.iter().map(f).sum::<f64>() / n as f64
        }
    };
    let lines: Vec<f64> = reports.iter().filter_map(|r| r.line_dist_acc).collect();
    DatasetSummary {
        n_scenes: n,
        micro: EvalReport::from_counts(pooled),
        macro_means: MacroMeans {
            point_pos_acc: mean(&|r| r.point_pos_acc),
            line_dist_acc: (!lines.is_empty()).then(|| lines.iter().sum::<f64>() / lines.len() as f64),
            building_f1: mean(&|r| r.building_f1),
            roof_f1: mean(&|r| r.roof_f1),
            reconstruction_score: mean(&|r| r.reconstruction_score),
            area_segmentation_score: mean(&|r| r.area_segmentation_score),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wireframe::{Corner, RoofSegment};

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn square_at(x: f64, y: f64, s: f64) -> PolygonRing {
        PolygonRing::new(vec![p(x, y), p(x + s, y), p(x + s, y + s), p(x, y + s)]).unwrap()
    }

    #[test]
    fn instance_matching_examples() {
        let a = square_at(0.0, 0.0, 1.0);
        let m = match_instances(std::slice::from_ref(&a), std::slice::from_ref(&a), 0.5).unwrap();
        assert_eq!(
            m.pairs,
            vec![MatchPair {
                gt: 0,
                pred: 0,
                iou: 1.0
            }]
        );

        let shifted = square_at(0.5, 0.0, 1.0);
        let m = match_instances(std::slice::from_ref(&a), &[shifted], 0.5).unwrap();
        assert!(m.pairs.is_empty());
        assert_eq!((m.unmatched_gt.clone(), m.unmatched_pred.clone()), (vec![0], vec![0]));

        let m = match_iou_matrix(&[vec![0.9, 0.6], vec![0.7, 0.8]], 2, 0.5);
        assert_eq!(
            m.pairs.iter().map(|x| (x.gt, x.pred)).collect::<Vec<_>>(),
            vec![(0, 0), (1, 1)]
        );
        assert!((m.total_iou() - 1.7).abs() < 1e-12);

        let m = match_instances(&[], &[a], 0.5).unwrap();
        assert!(m.pairs.is_empty() && m.unmatched_pred == vec![0]);
    }

    #[test]
    fn sub_threshold_pairs_are_never_used() {
        // The only way to match both rows would use a 0.4 entry.
        let m = match_iou_matrix(&[vec![0.9, 0.4], vec![0.95, 0.0]], 2, 0.5);
        assert_eq!(m.pairs.len(), 1);
        assert!(m.pairs.iter().all(|x| x.iou >= 0.5));
        assert_eq!(m.pairs[0].iou, 0.95);
    }

    #[test]
    fn point_accuracy_examples() {
        let g = [p(0.0, 0.0), p(5.0, 5.0)];
        let a = point_position_accuracy(&g, &g, 5.0);
        assert_eq!((a.rmse, a.match_rate), (0.0, 1.0));
        let pr = [p(0.5, 0.0), p(5.0, 5.5)];
        let a = point_position_accuracy(&g, &pr, 2.0);
        assert!((a.rmse - 0.5).abs() < 1e-12);
        assert_eq!(a.match_rate, 1.0);
        let far = [p(100.0, 100.0)];
        let a = point_position_accuracy(&g, &far, 2.0);
        assert_eq!((a.rmse, a.match_rate, a.matched), (0.0, 0.0, 0));
    }

    #[test]
    fn point_matching_prefers_more_pairs() {
        // Greedy nearest would pair (0,0)-(1,0) and strand (2,0).
        let g = [p(0.0, 0.0), p(2.0, 0.0)];
        let pr = [p(1.0, 0.0), p(-0.9, 0.0)];
        let a = point_position_accuracy(&g, &pr, 1.0);
        assert_eq!(a.matched, 2);
    }

    #[test]
    fn distances() {
        let a = [p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)];
        let b = [p(0.0, 1.0), p(1.0, 2.0), p(2.0, 1.0)];
        assert_eq!(hausdorff(&a, &a), 0.0);
        assert_eq!(frechet_discrete(&a, &a), 0.0);
        assert_eq!(hausdorff(&[p(0.0, 0.0)], &[p(3.0, 4.0)]), 5.0);
        assert_eq!(frechet_discrete(&a, &b), 2.0);
        assert!(frechet_discrete(&a, &b) >= hausdorff(&a, &b));
        // reversed order changes Fréchet but not Hausdorff
        let rev: Vec<Point2> = a.iter().rev().copied().collect();
        assert_eq!(hausdorff(&a, &rev), 0.0);
        assert_eq!(frechet_discrete(&a, &rev), 2.0);
    }

    #[test]
    fn f1_and_scores() {
        let m = match_iou_matrix(&[vec![1.0, 0.0], vec![0.0, 0.1]], 2, 0.5);
        assert_eq!(instance_f1(&m, 2, 2), 50.0);
        assert_eq!(f1_from_counts(3, 3, 3), 100.0);
        assert_eq!(f1_from_counts(0, 3, 3), 0.0);
        assert_eq!(reconstruction_score(100.0, 100.0), 100.0);
        assert_eq!(reconstruction_score(0.0, 73.0), 0.0);
        assert_eq!(reconstruction_score(0.0, 0.0), 0.0);
        assert!((reconstruction_score(89.38, 89.68) - 89.53).abs() < 0.01);
        assert_eq!(area_segmentation_score(1.0, 1.0, 1.0), 3.0);
        assert_eq!(area_segmentation_score(0.0, 0.0, 0.0), 0.0);
        assert_eq!(area_segmentation_score(0.5, 0.5, 0.5), 1.5);
    }

    #[test]
    fn line_distance_examples() {
        let rings = vec![square_at(0.0, 0.0, 10.0), square_at(20.0, 0.0, 10.0)];
        let m = match_instances(&rings, &rings, 0.5).unwrap();
        let ld = line_distance_accuracy(&m, &rings, &rings, None);
        assert_eq!(ld.mean, Some(0.0));
        let none = match_instances(&rings, &[], 0.5).unwrap();
        let ld = line_distance_accuracy(&none, &rings, &[], None);
        assert_eq!((ld.mean, ld.pairs), (None, 0));
        // a uniform shift gives Hausdorff = Fréchet = shift
        let moved: Vec<PolygonRing> = rings.iter().map(|r| r.map(|q| q.add(p(1.0, 0.0))).unwrap()).collect();
        let m = match_instances(&rings, &moved, 0.5).unwrap();
        let ld = line_distance_accuracy(&m, &rings, &moved, None);
        assert!((ld.mean.unwrap() - 1.0).abs() < 1e-12);
        let dense = line_distance_accuracy(&m, &rings, &moved, Some(0.25));
        assert!((dense.mean.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn densified_sequence() {
        let seq = boundary_sequence(&square_at(0.0, 0.0, 1.0), Some(0.5));
        assert_eq!(seq.len(), 9);
        assert_eq!(seq[0], seq[8]);
        assert_eq!(seq[1], p(0.5, 0.0));
    }

    fn building(id: &str, x: f64, y: f64) -> BuildingInstance {
        let left = square_at(x, y, 10.0);
        let right = square_at(x + 10.0, y, 10.0);
        let outline = PolygonRing::new(vec![p(x, y), p(x + 20.0, y), p(x + 20.0, y + 10.0), p(x, y + 10.0)]).unwrap();
        let corners = [
            (x, y),
            (x + 10.0, y),
            (x + 20.0, y),
            (x + 20.0, y + 10.0),
            (x + 10.0, y + 10.0),
            (x, y + 10.0),
        ]
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| Corner { id: i, point: p(a, b) })
        .collect();
        BuildingInstance::new(
            id,
            outline,
            vec![
                RoofSegment {
                    segment_id: "s0".into(),
                    ring: left,
                },
                RoofSegment {
                    segment_id: "s1".into(),
                    ring: right,
                },
            ],
            corners,
        )
        .unwrap()
    }

    fn shift(b: &BuildingInstance, dx: f64) -> BuildingInstance {
        let m = |r: &PolygonRing| r.map(|q| q.add(p(dx, 0.0))).unwrap();
        BuildingInstance {
            building_id: b.building_id.clone(),
            outline: m(&b.outline),
            segments: b
                .segments
                .iter()
                .map(|s| RoofSegment {
                    segment_id: s.segment_id.clone(),
                    ring: m(&s.ring),
                })
                .collect(),
            corners: b
                .corners
                .iter()
                .map(|c| Corner {
                    id: c.id,
                    point: c.point.add(p(dx, 0.0)),
                })
                .collect(),
        }
    }

    #[test]
    fn scene_identity_shift_and_empty() {
        let gt = vec![building("a", 0.0, 0.0), building("b", 50.0, 0.0)];
        let r = evaluate_scene(&gt, &gt, &EvalConfig::default()).unwrap();
        assert_eq!(r.point_pos_acc, 0.0);
        assert_eq!(r.line_dist_acc, Some(0.0));
        assert_eq!(
            (r.building_f1, r.roof_f1, r.reconstruction_score),
            (100.0, 100.0, 100.0)
        );
        assert_eq!(r.area_segmentation_score, 3.0);

        let pred: Vec<BuildingInstance> = gt.iter().map(|b| shift(b, 1.0)).collect();
        let r = evaluate_scene(&gt, &pred, &EvalConfig::default()).unwrap();
        assert!((r.point_pos_acc - 1.0).abs() < 1e-12);
        assert_eq!((r.building_f1, r.roof_f1), (100.0, 100.0));

        let r = evaluate_scene(&gt, &[], &EvalConfig::default()).unwrap();
        assert_eq!((r.building_f1, r.roof_f1, r.area_segmentation_score), (0.0, 0.0, 0.0));
        assert_eq!(r.line_dist_acc, None);
        assert_eq!(r.counts.n_line_pairs, 0);
    }

    #[test]
    fn scene_order_does_not_matter() {
        let gt = vec![
            building("a", 0.0, 0.0),
            building("b", 50.0, 0.0),
            building("c", 0.0, 40.0),
        ];
        let pred: Vec<BuildingInstance> = gt.iter().take(2).map(|b| shift(b, 0.7)).collect();
        let cfg = EvalConfig::default();
        let r1 = evaluate_scene(&gt, &pred, &cfg).unwrap();
        let mut gt2 = gt.clone();
        gt2.reverse();
        let mut pred2 = pred.clone();
        pred2.reverse();
        for b in pred2.iter_mut() {
            b.segments.reverse();
        }
        let r2 = evaluate_scene(&gt2, &pred2, &cfg).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn aggregation_pools_counts() {
        let gt = vec![building("a", 0.0, 0.0)];
        let good = evaluate_scene(&gt, &gt, &EvalConfig::default()).unwrap();
        let empty = evaluate_scene(&gt, &[], &EvalConfig::default()).unwrap();
        let s = aggregate(&[good, empty]);
        assert_eq!(s.n_scenes, 2);
        // 1 TP, 1 FN, 0 FP -> F1 = 2/3
        assert!((s.micro.building_f1 - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.macro_means.building_f1, 50.0);
        assert_eq!(s.macro_means.reconstruction_score, 50.0);
        assert_eq!(s.macro_means.line_dist_acc, Some(0.0));
    }
}
