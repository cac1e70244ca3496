//! Polygon primitives: rings, area, perimeter, hulls, shape-regularity
//! measures and exact intersection area for simple (possibly non-convex)
//! polygons.

use std::f64::consts::PI;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance, in squared pixels, for collinearity and clipping tests.
pub const DEFAULT_EPSILON: f64 = 1e-9;

static EPSILON_BITS: AtomicU64 = AtomicU64::new(DEFAULT_EPSILON.to_bits());

/// Current library-wide geometric tolerance (squared pixels).
pub fn epsilon() -> f64 {
    f64::from_bits(EPSILON_BITS.load(Ordering::Relaxed))
}

/// Overrides the library-wide tolerance. Non-positive or non-finite values
/// are ignored.
pub fn set_epsilon(eps: f64) {
    if eps.is_finite() && eps > 0.0 {
        EPSILON_BITS.store(eps.to_bits(), Ordering::Relaxed);
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("vertex {0} repeats vertex {1}")]
    RepeatedVertex(usize, usize),
    #[error("edges {0} and {1} intersect")]
    SelfIntersection(usize, usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("clipping could not resolve overlapping edges near ({x}, {y})")]
    NumericalDegeneracy { x: f64, y: f64 },
}

pub type Result<T> = std::result::Result<T, GeometryError>;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance_squared(self, o: Point2) -> f64 {
        let d = self.sub(o);
        d.dot(d)
    }

    pub fn distance(self, o: Point2) -> f64 {
        self.distance_squared(o).sqrt()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(v: [f64; 2]) -> Self {
        Point2::new(v[0], v[1])
    }
}

impl From<(f64, f64)> for Point2 {
    fn from(v: (f64, f64)) -> Self {
        Point2::new(v.0, v.1)
    }
}

/// Orientation of `c` relative to the directed line `a -> b`, scaled so the
/// tolerance behaves like an absolute squared-pixel bound for short edges.
fn orient(a: Point2, b: Point2, c: Point2) -> i8 {
    let ab = b.sub(a);
    let ac = c.sub(a);
    let cr = ab.cross(ac);
    let tol = epsilon() * (1.0 + ab.norm() * ac.norm());
    if cr > tol {
        1
    } else if cr < -tol {
        -1
    } else {
        0
    }
}

fn on_segment_collinear(a: Point2, b: Point2, p: Point2) -> bool {
    let d = b.sub(a);
    let t = p.sub(a).dot(d);
    t >= 0.0 && t <= d.dot(d)
}

/// Closed-segment intersection test (touching counts).
pub(crate) fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    (o1 == 0 && on_segment_collinear(a, b, c))
        || (o2 == 0 && on_segment_collinear(a, b, d))
        || (o3 == 0 && on_segment_collinear(c, d, a))
        || (o4 == 0 && on_segment_collinear(c, d, b))
}

fn signed_area(points: &[Point2]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += points[i].cross(points[(i + 1) % n]);
    }
    acc / 2.0
}

/// A closed simple polygon stored counter-clockwise, without a repeated
/// closing vertex and without collinear runs.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonRing {
    vertices: Vec<Point2>,
}

impl PolygonRing {
    /// Validates and normalizes a ring: drops consecutive duplicates and
    /// collinear vertices, reverses clockwise input, then checks simplicity.
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        let len_tol = epsilon().sqrt();
        let mut pts: Vec<Point2> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last().is_none_or(|q: &Point2| q.distance(p) > len_tol) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts[0].distance(pts[pts.len() - 1]) <= len_tol {
            pts.pop();
        }
        let pts = remove_collinear(pts);
        if pts.len() < 3 {
            return Err(GeometryError::TooFewVertices(pts.len()));
        }
        let mut pts = pts;
        let a = signed_area(&pts);
        if a.abs() <= epsilon() {
            return Err(GeometryError::DegenerateInput("zero-area ring"));
        }
        if a < 0.0 {
            pts.reverse();
        }
        check_simple(&pts)?;
        Ok(Self { vertices: pts })
    }

    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(v[i], v[i+1])`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Applies `f` to every vertex and re-validates the result.
    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox_of(&self.vertices)
    }

    /// The same ring rotated to start at the lexicographically smallest
    /// vertex. Useful for order-independent comparisons.
    pub fn canonical(&self) -> Self {
        let start = self
            .vertices
            .iter()
            .enumerate()
            .min_by(|a, b| lex_cmp(*a.1, *b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut v = self.vertices.clone();
        v.rotate_left(start);
        Self { vertices: v }
    }

    /// Crossing-number containment test; boundary points are unspecified.
    pub fn contains(&self, p: Point2) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

pub(crate) fn lex_cmp(a: Point2, b: Point2) -> std::cmp::Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}

pub(crate) fn bbox_of(points: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

fn remove_collinear(mut pts: Vec<Point2>) -> Vec<Point2> {
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let drop = (0..n).find(|&i| orient(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]) == 0);
        match drop {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

fn check_simple(pts: &[Point2]) -> Result<()> {
    let n = pts.len();
    let len_tol = epsilon().sqrt();
    for i in 0..n {
        for j in (i + 1)..n {
            if pts[i].distance(pts[j]) <= len_tol {
                return Err(GeometryError::RepeatedVertex(j, i));
            }
        }
    }
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return Err(GeometryError::SelfIntersection(i, j));
            }
        }
    }
    Ok(())
}

/// Shoelace area of the ring (strictly positive).
pub fn area(p: &PolygonRing) -> f64 {
    signed_area(&p.vertices)
}

pub fn perimeter(p: &PolygonRing) -> f64 {
    p.edges().map(|(a, b)| a.distance(b)).sum()
}

/// Convex hull by monotone chain; collinear boundary points are dropped.
pub fn convex_hull(points: &[Point2]) -> Result<PolygonRing> {
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite(i));
    }
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| lex_cmp(*a, *b));
    pts.dedup();
    if pts.len() < 3 {
        return Err(GeometryError::DegenerateInput("fewer than 3 distinct points"));
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(GeometryError::DegenerateInput("all points collinear"));
    }
    Ok(PolygonRing::from_ccw_unchecked(hull))
}

/// Area over convex-hull area, in percent. 100 iff the ring is convex.
pub fn convexity(p: &PolygonRing) -> f64 {
    let hull = convex_hull(&p.vertices).expect("valid ring has a non-degenerate hull");
    (100.0 * area(p) / area(&hull)).min(100.0)
}

/// Polsby-Popper circularity `4*pi*A / P^2`, in percent.
pub fn compactness(p: &PolygonRing) -> f64 {
    let per = perimeter(p);
    100.0 * 4.0 * PI * area(p) / (per * per)
}

#[derive(Clone, Copy)]
enum Location {
    Inside,
    Outside,
    /// On the boundary, running along an edge with the given direction.
    Along(Point2),
}

fn locate(poly: &PolygonRing, m: Point2, dir: Point2) -> Result<Location> {
    let len_tol_sq = epsilon();
    let mut along: Option<Point2> = None;
    let tol = len_tol_sq.sqrt();
    let dir_sq = dir.dot(dir);
    for (a, b) in poly.edges() {
        if m.x < a.x.min(b.x) - tol || m.x > a.x.max(b.x) + tol || m.y < a.y.min(b.y) - tol || m.y > a.y.max(b.y) + tol
        {
            continue;
        }
        let e = b.sub(a);
        let l2 = e.dot(e);
        let t = (m.sub(a).dot(e) / l2).clamp(0.0, 1.0);
        if m.distance_squared(a.lerp(b, t)) > len_tol_sq {
            continue;
        }
        let cr = dir.cross(e);
        if cr * cr > 1e-12 * dir_sq * l2 {
            // Crossing the boundary at the fragment midpoint only happens for
            // vanishing fragments; fall back to containment.
            continue;
        }
        match along {
            Some(prev) if prev.dot(e) < 0.0 => {
                return Err(GeometryError::NumericalDegeneracy { x: m.x, y: m.y });
            }
            _ => along = Some(e),
        }
    }
    Ok(match along {
        Some(e) => Location::Along(e),
        None if poly.contains(m) => Location::Inside,
        None => Location::Outside,
    })
}

/// Twice the signed boundary integral of the parts of `subject`'s boundary
/// lying inside `clip`. Shared boundary stretches running the same way in
/// both rings are included only when `keep_shared` is set, so a shared edge
/// is counted exactly once across the two passes.
fn boundary_inside(subject: &PolygonRing, clip: &PolygonRing, keep_shared: bool) -> Result<f64> {
    let (clo, chi) = clip.bbox();
    let tol = epsilon().sqrt();
    let mut acc = 0.0;
    let mut ts: Vec<f64> = Vec::new();
    for (p, q) in subject.edges() {
        let d = q.sub(p);
        let dd = d.dot(d);
        ts.clear();
        ts.push(0.0);
        ts.push(1.0);
        let elo = Point2::new(p.x.min(q.x), p.y.min(q.y));
        let ehi = Point2::new(p.x.max(q.x), p.y.max(q.y));
        if ehi.x < clo.x - tol || elo.x > chi.x + tol || ehi.y < clo.y - tol || elo.y > chi.y + tol {
            continue;
        }
        {
            for (r, s) in clip.edges() {
                if r.x.max(s.x) < elo.x || r.x.min(s.x) > ehi.x || r.y.max(s.y) < elo.y || r.y.min(s.y) > ehi.y {
                    continue;
                }
                let e = s.sub(r);
                let denom = d.cross(e);
                let rp = r.sub(p);
                if denom.abs() > 1e-12 * d.norm() * e.norm() {
                    let t = rp.cross(e) / denom;
                    let u = rp.cross(d) / denom;
                    if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
                        ts.push(t.clamp(0.0, 1.0));
                    }
                } else if rp.cross(d).abs() <= epsilon() * (1.0 + d.norm() * rp.norm()) {
                    for w in [r, s] {
                        let t = w.sub(p).dot(d) / dd;
                        if (0.0..=1.0).contains(&t) {
                            ts.push(t);
                        }
                    }
                }
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);
        for w in ts.windows(2) {
            let (a, b) = (p.lerp(q, w[0]), p.lerp(q, w[1]));
            if a == b {
                continue;
            }
            let m = p.lerp(q, 0.5 * (w[0] + w[1]));
            let take = match locate(clip, m, d)? {
                Location::Inside => true,
                Location::Outside => false,
                Location::Along(e) => keep_shared && e.dot(d) > 0.0,
            };
            if take {
                acc += a.cross(b);
            }
        }
    }
    Ok(acc)
}

/// Exact area of `a ∩ b` for simple polygons, convex or not.
///
/// The intersection boundary is made of the pieces of each ring that lie
/// inside the other; integrating `x dy` over those pieces gives the area
/// without building the clipped polygon. Coincident edges are resolved by
/// direction: same-direction overlaps bound the intersection and are counted
/// once, opposite-direction overlaps separate the two interiors.
pub fn intersection_area(a: &PolygonRing, b: &PolygonRing) -> Result<f64> {
    let (alo, ahi) = a.bbox();
    let (blo, bhi) = b.bbox();
    if ahi.x < blo.x || bhi.x < alo.x || ahi.y < blo.y || bhi.y < alo.y {
        return Ok(0.0);
    }
    let twice = boundary_inside(a, b, true)? + boundary_inside(b, a, false)?;
    let upper = area(a).min(area(b));
    Ok((twice / 2.0).clamp(0.0, upper))
}

/// Intersection over union in `[0, 1]`.
pub fn iou(a: &PolygonRing, b: &PolygonRing) -> Result<f64> {
    let inter = intersection_area(a, b)?;
    let union = area(a) + area(b) - inter;
    if union <= 0.0 {
        return Ok(0.0);
    }
    Ok((inter / union).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(pts: &[(f64, f64)]) -> PolygonRing {
        PolygonRing::new(pts.iter().map(|&p| p.into()).collect()).unwrap()
    }

    fn unit_square() -> PolygonRing {
        ring(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    fn l_shape() -> PolygonRing {
        ring(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn areas() {
        assert_eq!(area(&unit_square()), 1.0);
        assert_eq!(area(&l_shape()), 3.0);
        assert_eq!(area(&ring(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)])), 6.0);
    }

    #[test]
    fn perimeters() {
        assert_eq!(perimeter(&unit_square()), 4.0);
        assert_eq!(perimeter(&ring(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)])), 12.0);
        assert_eq!(perimeter(&l_shape()), 8.0);
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let cw = ring(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
        assert!(signed_area(cw.vertices()) > 0.0);
        assert_eq!(cw.canonical(), unit_square().canonical());
    }

    #[test]
    fn cleaning_drops_collinear_and_closing_vertex() {
        let r = ring(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]);
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn invalid_rings() {
        let mk = |pts: &[(f64, f64)]| PolygonRing::new(pts.iter().map(|&p| p.into()).collect());
        assert!(matches!(
            mk(&[(0.0, 0.0), (1.0, 0.0)]),
            Err(GeometryError::TooFewVertices(2))
        ));
        assert!(matches!(
            mk(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]),
            Err(GeometryError::TooFewVertices(_))
        ));
        assert!(matches!(
            mk(&[(0.0, 0.0), (f64::NAN, 0.0), (1.0, 1.0)]),
            Err(GeometryError::NonFinite(1))
        ));
        // bow tie
        assert!(matches!(
            mk(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]),
            Err(GeometryError::SelfIntersection(..)) | Err(GeometryError::DegenerateInput(_))
        ));
        // figure eight through a shared vertex
        assert!(matches!(
            mk(&[
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 1.0),
                (2.0, 1.0),
                (2.0, 2.0),
                (1.0, 2.0),
                (1.0, 1.0),
                (0.0, 1.0)
            ]),
            Err(GeometryError::RepeatedVertex(..))
        ));
    }

    #[test]
    fn hulls() {
        let sq = unit_square();
        assert_eq!(convex_hull(sq.vertices()).unwrap().canonical(), sq.canonical());
        let hull = convex_hull(l_shape().vertices()).unwrap();
        let expected = ring(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        assert_eq!(hull.canonical(), expected.canonical());
        let mut pts = sq.vertices().to_vec();
        pts.push(Point2::new(0.5, 0.5));
        pts.push(Point2::new(0.5, 0.0));
        assert_eq!(convex_hull(&pts).unwrap().canonical(), sq.canonical());
        let line: Vec<Point2> = (0..5).map(|i| Point2::new(i as f64, 2.0 * i as f64)).collect();
        assert!(matches!(convex_hull(&line), Err(GeometryError::DegenerateInput(_))));
    }

    #[test]
    fn shape_regularity() {
        assert_eq!(convexity(&unit_square()), 100.0);
        assert!(close(convexity(&l_shape()), 100.0 * 3.0 / 3.5, 1e-12));
        assert!(close(compactness(&unit_square()), 100.0 * PI / 4.0, 1e-12));
        let n = 64;
        let gon: Vec<Point2> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Point2::new(t.cos(), t.sin())
            })
            .collect();
        let c = compactness(&PolygonRing::new(gon).unwrap());
        let analytic = 100.0 * (PI / n as f64) / (PI / n as f64).tan();
        assert!(close(c, analytic, 1e-9));
        assert!(c > 99.5 && c < 100.0);
    }

    #[test]
    fn intersections() {
        let sq = unit_square();
        assert!(close(intersection_area(&sq, &sq).unwrap(), 1.0, 1e-12));
        let shifted = sq.map(|p| p.add(Point2::new(0.5, 0.0))).unwrap();
        assert!(close(intersection_area(&sq, &shifted).unwrap(), 0.5, 1e-12));
        assert!(close(intersection_area(&l_shape(), &sq).unwrap(), 1.0, 1e-12));
        assert!(close(intersection_area(&sq, &l_shape()).unwrap(), 1.0, 1e-12));
        let far = sq.map(|p| p.add(Point2::new(5.0, 5.0))).unwrap();
        assert_eq!(intersection_area(&sq, &far).unwrap(), 0.0);
        // edge-adjacent squares share a boundary but no area
        let right = sq.map(|p| p.add(Point2::new(1.0, 0.0))).unwrap();
        assert!(close(intersection_area(&sq, &right).unwrap(), 0.0, 1e-12));
        // nested
        let big = sq.map(|p| p.scale(4.0).sub(Point2::new(1.0, 1.0))).unwrap();
        assert!(close(intersection_area(&big, &sq).unwrap(), 1.0, 1e-12));
        // vertex touching an edge interior
        let diamond = ring(&[(0.5, 1.0), (1.0, 1.5), (0.5, 2.0), (0.0, 1.5)]);
        assert!(close(intersection_area(&sq, &diamond).unwrap(), 0.0, 1e-12));
    }

    #[test]
    fn non_convex_intersection() {
        // Two L-shapes overlapping in two disjoint pieces.
        let u = ring(&[
            (0.0, 0.0),
            (3.0, 0.0),
            (3.0, 3.0),
            (2.0, 3.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 3.0),
            (0.0, 3.0),
        ]);
        let bar = ring(&[(-1.0, 2.0), (4.0, 2.0), (4.0, 2.5), (-1.0, 2.5)]);
        assert!(close(intersection_area(&u, &bar).unwrap(), 1.0, 1e-12));
        assert!(close(intersection_area(&bar, &u).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn ious() {
        let sq = unit_square();
        assert_eq!(iou(&sq, &sq).unwrap(), 1.0);
        let far = sq.map(|p| p.add(Point2::new(3.0, 0.0))).unwrap();
        assert_eq!(iou(&sq, &far).unwrap(), 0.0);
        let shifted = sq.map(|p| p.add(Point2::new(0.5, 0.0))).unwrap();
        assert!(close(iou(&sq, &shifted).unwrap(), 0.5 / 1.5, 1e-12));
    }

    #[test]
    fn epsilon_override_roundtrip() {
        let old = epsilon();
        set_epsilon(-1.0);
        assert_eq!(epsilon(), old);
        set_epsilon(f64::NAN);
        assert_eq!(epsilon(), old);
    }
}
