//! Planar vertex/edge roof graphs, their bounded faces (roof segments), and
//! grouping of faces into building instances.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::geometry::{self, area, GeometryError, Point2, PolygonRing};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WireframeError {
    #[error("wireframe has no vertices")]
    EmptyGraph,
    #[error("edge {edge} references vertex {index}, but only {len} vertices exist")]
    IndexOutOfRange { edge: usize, index: usize, len: usize },
    #[error("edge {0} is a self-loop")]
    SelfLoop(usize),
    #[error("edges {0} and {1} connect the same vertices")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} has no incident edge")]
    IsolatedVertex(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("edges {0} and {1} cross")]
    NonPlanarInput(usize, usize),
    #[error("edge {0} does not separate two different faces")]
    DanglingEdge(usize),
    #[error("building {building}: {message}")]
    InvalidBuilding { building: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T> = std::result::Result<T, WireframeError>;

/// Vertex/edge roof annotation of one scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Wireframe {
    vertices: Vec<Point2>,
    edges: Vec<(usize, usize)>,
}

impl Wireframe {
    /// Checks indices, self-loops, duplicate and isolated vertices. Planarity
    /// is checked by [`Wireframe::check_planar`] and by face extraction.
    pub fn new(vertices: Vec<Point2>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(WireframeError::EmptyGraph);
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(WireframeError::NonFinite(i));
        }
        let n = vertices.len();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::with_capacity(edges.len());
        let mut touched = vec![false; n];
        for (k, &(i, j)) in edges.iter().enumerate() {
            for idx in [i, j] {
                if idx >= n {
                    return Err(WireframeError::IndexOutOfRange {
                        edge: k,
                        index: idx,
                        len: n,
                    });
                }
            }
            if i == j {
                return Err(WireframeError::SelfLoop(k));
            }
            if let Some(prev) = seen.insert((i.min(j), i.max(j)), k) {
                return Err(WireframeError::DuplicateEdge(prev, k));
            }
            touched[i] = true;
            touched[j] = true;
        }
        if let Some(v) = touched.iter().position(|t| !t) {
            return Err(WireframeError::IsolatedVertex(v));
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Mean number of incident edges per vertex.
    pub fn point_degree_mean(&self) -> Result<f64> {
        if self.vertices.is_empty() {
            return Err(WireframeError::EmptyGraph);
        }
        Ok(2.0 * self.edges.len() as f64 / self.vertices.len() as f64)
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for &(i, j) in &self.edges {
            uf.union(i, j);
        }
        (0..self.vertices.len()).filter(|&v| uf.find(v) == v).count()
    }

    /// Rejects edges that cross, overlap, or touch other than at a shared
    /// endpoint index.
    pub fn check_planar(&self) -> Result<()> {
        let seg = |k: usize| {
            let (i, j) = self.edges[k];
            (self.vertices[i], self.vertices[j])
        };
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        let min_x = |k: usize| {
            let (a, b) = seg(k);
            a.x.min(b.x)
        };
        order.sort_by(|&a, &b| min_x(a).total_cmp(&min_x(b)).then(a.cmp(&b)));
        for (oi, &e1) in order.iter().enumerate() {
            let (a, b) = seg(e1);
            let hi_x = a.x.max(b.x);
            let (ylo, yhi) = (a.y.min(b.y), a.y.max(b.y));
            for &e2 in &order[oi + 1..] {
                let (c, d) = seg(e2);
                if c.x.min(d.x) > hi_x {
                    break;
                }
                if c.y.max(d.y) < ylo || c.y.min(d.y) > yhi {
                    continue;
                }
                let (i1, j1) = self.edges[e1];
                let (i2, j2) = self.edges[e2];
                let shared = [i1, j1].iter().find(|v| **v == i2 || **v == j2).copied();
                let (lo, hi) = (e1.min(e2), e1.max(e2));
                match shared {
                    Some(s) => {
                        // Only a collinear overlap is a conflict here.
                        let o1 = if s == i1 { j1 } else { i1 };
                        let o2 = if s == i2 { j2 } else { i2 };
                        let p = self.vertices[s];
                        let u = self.vertices[o1].sub(p);
                        let w = self.vertices[o2].sub(p);
                        let tol = geometry::epsilon() * (1.0 + u.norm() * w.norm());
                        if u.cross(w).abs() <= tol && u.dot(w) > 0.0 {
                            return Err(WireframeError::NonPlanarInput(lo, hi));
                        }
                    }
                    None => {
                        if geometry::segments_intersect(a, b, c, d) {
                            return Err(WireframeError::NonPlanarInput(lo, hi));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// One bounded face of a planar subdivision.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    /// Cleaned counter-clockwise ring (collinear pass-through vertices dropped).
    pub ring: PolygonRing,
    /// Wireframe vertex indices around the face, counter-clockwise.
    pub cycle: Vec<usize>,
    /// Coordinates of `cycle`.
    pub cycle_points: Vec<Point2>,
    /// `edges[i]` joins `cycle[i]` and `cycle[i + 1]`.
    pub edges: Vec<usize>,
}

struct HalfEdges {
    /// Half-edge `2k` runs along edge `k` as given, `2k + 1` runs backwards.
    next: Vec<usize>,
}

impl HalfEdges {
    fn build(w: &Wireframe) -> Self {
        let n = w.vertices.len();
        let m = w.edges.len();
        let origin = |h: usize| {
            let (i, j) = w.edges[h / 2];
            if h.is_multiple_of(2) {
                i
            } else {
                j
            }
        };
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
        for h in 0..2 * m {
            outgoing[origin(h)].push(h);
        }
        let mut slot = vec![0usize; 2 * m];
        for (v, list) in outgoing.iter_mut().enumerate() {
            let p = w.vertices[v];
            list.sort_by(|&a, &b| {
                let da = w.vertices[origin(a ^ 1)].sub(p);
                let db = w.vertices[origin(b ^ 1)].sub(p);
                da.y.atan2(da.x).total_cmp(&db.y.atan2(db.x)).then(a.cmp(&b))
            });
            for (s, &h) in list.iter().enumerate() {
                slot[h] = s;
            }
        }
        let mut next = vec![0usize; 2 * m];
        for h in 0..2 * m {
            let twin = h ^ 1;
            let list = &outgoing[origin(twin)];
            // First outgoing edge clockwise from the twin keeps the face on the left.
            next[h] = list[(slot[twin] + list.len() - 1) % list.len()];
        }
        Self { next }
    }
}

/// All bounded faces of the subdivision, each counter-clockwise, in a
/// canonical order that does not depend on the edge-list order.
pub fn extract_faces(w: &Wireframe) -> Result<Vec<Face>> {
    w.check_planar()?;
    let he = HalfEdges::build(w);
    let m = w.edges.len();
    let origin = |h: usize| {
        let (i, j) = w.edges[h / 2];
        if h.is_multiple_of(2) {
            i
        } else {
            j
        }
    };
    let mut face_of = vec![usize::MAX; 2 * m];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..2 * m {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cycle = Vec::new();
        let mut h = start;
        while face_of[h] == usize::MAX {
            face_of[h] = id;
            cycle.push(h);
            h = he.next[h];
        }
        cycles.push(cycle);
    }
    for k in 0..m {
        if face_of[2 * k] == face_of[2 * k + 1] {
            return Err(WireframeError::DanglingEdge(k));
        }
    }
    let mut faces = Vec::new();
    for cycle in cycles {
        let cycle_points: Vec<Point2> = cycle.iter().map(|&h| w.vertices[origin(h)]).collect();
        let twice: f64 = (0..cycle_points.len())
            .map(|i| cycle_points[i].cross(cycle_points[(i + 1) % cycle_points.len()]))
            .sum();
        if twice <= 0.0 {
            continue;
        }
        let ring = PolygonRing::new(cycle_points.clone())?;
        // Start the cycle at its lexicographically smallest vertex.
        let start = (0..cycle_points.len())
            .min_by(|&a, &b| geometry::lex_cmp(cycle_points[a], cycle_points[b]))
            .unwrap_or(0);
        let mut ids: Vec<usize> = cycle.iter().map(|&h| origin(h)).collect();
        let mut edges: Vec<usize> = cycle.iter().map(|&h| h / 2).collect();
        let mut pts = cycle_points;
        ids.rotate_left(start);
        edges.rotate_left(start);
        pts.rotate_left(start);
        faces.push(Face {
            ring: ring.canonical(),
            cycle: ids,
            cycle_points: pts,
            edges,
        });
    }
    faces.sort_by(|a, b| cmp_points(&a.cycle_points, &b.cycle_points));
    Ok(faces)
}

fn cmp_points(a: &[Point2], b: &[Point2]) -> std::cmp::Ordering {
    for (p, q) in a.iter().zip(b) {
        let o = geometry::lex_cmp(*p, *q);
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Pairs of faces sharing at least one full wireframe edge, `(i, j)` with
/// `i < j`, sorted.
pub fn face_adjacency(faces: &[Face]) -> Vec<(usize, usize)> {
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (f, face) in faces.iter().enumerate() {
        for &e in &face.edges {
            by_edge.entry(e).or_default().push(f);
        }
    }
    let mut pairs: Vec<(usize, usize)> = by_edge
        .into_values()
        .filter(|fs| fs.len() == 2 && fs[0] != fs[1])
        .map(|fs| (fs[0].min(fs[1]), fs[0].max(fs[1])))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoofSegment {
    pub segment_id: String,
    pub ring: PolygonRing,
}

/// A wireframe vertex belonging to a building.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner {
    pub id: usize,
    pub point: Point2,
}

/// A connected group of roof segments and its outline.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildingInstance {
    pub building_id: String,
    pub outline: PolygonRing,
    pub segments: Vec<RoofSegment>,
    /// Distinct wireframe vertices of the building, sorted by index.
    pub corners: Vec<Corner>,
}

impl BuildingInstance {
    /// Validated constructor for externally supplied buildings.
    pub fn new(
        building_id: impl Into<String>,
        outline: PolygonRing,
        segments: Vec<RoofSegment>,
        mut corners: Vec<Corner>,
    ) -> Result<Self> {
        let building_id = building_id.into();
        let invalid = |message: String| WireframeError::InvalidBuilding {
            building: building_id.clone(),
            message,
        };
        if segments.is_empty() {
            return Err(invalid("no roof segments".into()));
        }
        let mut ids = HashSet::new();
        for s in &segments {
            if !ids.insert(s.segment_id.as_str()) {
                return Err(invalid(format!("duplicate segment id {:?}", s.segment_id)));
            }
        }
        let outline_area = area(&outline);
        for s in &segments {
            let a = area(&s.ring);
            let inside = geometry::intersection_area(&s.ring, &outline)?;
            let tol = geometry::epsilon().sqrt() * (1.0 + geometry::perimeter(&s.ring)) + 1e-9 * outline_area;
            if a - inside > tol {
                return Err(invalid(format!(
                    "segment {:?} extends outside the outline",
                    s.segment_id
                )));
            }
        }
        corners.sort_by_key(|c| c.id);
        corners.dedup_by_key(|c| c.id);
        Ok(Self {
            building_id,
            outline,
            segments,
            corners,
        })
    }

    pub fn corner_points(&self) -> Vec<Point2> {
        self.corners.iter().map(|c| c.point).collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so component roots stay deterministic.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Groups faces into buildings: connected components of the adjacency
/// relation, ordered by their first face. Segment ids follow face order.
pub fn assemble_buildings(faces: &[Face], adjacency: &[(usize, usize)]) -> Result<Vec<BuildingInstance>> {
    let mut uf = UnionFind::new(faces.len());
    for &(a, b) in adjacency {
        if a < faces.len() && b < faces.len() {
            uf.union(a, b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for f in 0..faces.len() {
        let root = uf.find(f);
        groups.entry(root).or_default().push(f);
    }
    let mut out = Vec::with_capacity(groups.len());
    for (b, members) in groups.into_values().enumerate() {
        let building_id = format!("b{b}");
        let outline = trace_outline(faces, &members).map_err(|e| match e {
            WireframeError::Geometry(g) => WireframeError::InvalidBuilding {
                building: building_id.clone(),
                message: format!("outline is not a simple polygon: {g}"),
            },
            other => other,
        })?;
        let segments = members
            .iter()
            .enumerate()
            .map(|(s, &f)| RoofSegment {
                segment_id: format!("s{s}"),
                ring: faces[f].ring.clone(),
            })
            .collect();
        let mut corners: Vec<Corner> = members
            .iter()
            .flat_map(|&f| {
                faces[f]
                    .cycle
                    .iter()
                    .zip(&faces[f].cycle_points)
                    .map(|(&id, &point)| Corner { id, point })
            })
            .collect();
        corners.sort_by_key(|c| c.id);
        corners.dedup_by_key(|c| c.id);
        out.push(BuildingInstance {
            building_id,
            outline,
            segments,
            corners,
        });
    }
    Ok(out)
}

/// Drops edges shared by two member faces and walks the remaining boundary
/// from its lexicographically smallest vertex.
fn trace_outline(faces: &[Face], members: &[usize]) -> Result<PolygonRing> {
    if let [only] = members {
        return Ok(faces[*only].ring.clone());
    }
    let mut uses: HashMap<usize, usize> = HashMap::new();
    for &f in members {
        for &e in &faces[f].edges {
            *uses.entry(e).or_default() += 1;
        }
    }
    // from -> [(to, from_point, to_point)]
    let mut outgoing: HashMap<usize, Vec<(usize, Point2, Point2)>> = HashMap::new();
    let mut start: Option<(usize, Point2)> = None;
    let mut total = 0usize;
    for &f in members {
        let face = &faces[f];
        let n = face.cycle.len();
        for i in 0..n {
            if uses[&face.edges[i]] != 1 {
                continue;
            }
            let (u, v) = (face.cycle[i], face.cycle[(i + 1) % n]);
            let (pu, pv) = (face.cycle_points[i], face.cycle_points[(i + 1) % n]);
            outgoing.entry(u).or_default().push((v, pu, pv));
            total += 1;
            if start.is_none_or(|(_, p)| geometry::lex_cmp(pu, p).is_lt()) {
                start = Some((u, pu));
            }
        }
    }
    let Some((start, _)) = start else {
        return Err(GeometryError::DegenerateInput("building has no boundary").into());
    };
    let mut ring = Vec::new();
    let mut prev_point: Option<Point2> = None;
    let mut at = start;
    loop {
        let options = &outgoing[&at];
        let (to, p_at, _) = match prev_point {
            Some(prev) if options.len() > 1 => {
                // Pinch vertex: first boundary edge clockwise from the way back.
                let here = options[0].1;
                let back = prev.sub(here);
                let back_angle = back.y.atan2(back.x);
                *options
                    .iter()
                    .min_by(|a, b| {
                        let ang = |o: &(usize, Point2, Point2)| {
                            let d = o.2.sub(here);
                            (back_angle - d.y.atan2(d.x)).rem_euclid(std::f64::consts::TAU)
                        };
                        ang(a).total_cmp(&ang(b))
                    })
                    .unwrap()
            }
            _ => options[0],
        };
        ring.push(p_at);
        prev_point = Some(p_at);
        at = to;
        if at == start || ring.len() > total {
            break;
        }
    }
    Ok(PolygonRing::new(ring)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn square() -> Wireframe {
        Wireframe::new(
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        )
        .unwrap()
    }

    fn two_squares() -> Wireframe {
        Wireframe::new(
            pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (0.0, 1.0)]),
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)],
        )
        .unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(square().point_degree_mean().unwrap(), 2.0);
        let w = two_squares();
        // edge-incidence oracle
        let mut deg = [0usize; 6];
        for &(i, j) in w.edges() {
            deg[i] += 1;
            deg[j] += 1;
        }
        let oracle = deg.iter().sum::<usize>() as f64 / 6.0;
        assert_eq!(w.point_degree_mean().unwrap(), oracle);
        assert!((oracle - 14.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(Wireframe::new(vec![], vec![]), Err(WireframeError::EmptyGraph));
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(
            Wireframe::new(p.clone(), vec![(0, 5)]),
            Err(WireframeError::IndexOutOfRange { .. })
        ));
        assert_eq!(
            Wireframe::new(p.clone(), vec![(1, 1)]),
            Err(WireframeError::SelfLoop(0))
        );
        assert_eq!(
            Wireframe::new(p.clone(), vec![(0, 1), (1, 2), (1, 0)]),
            Err(WireframeError::DuplicateEdge(0, 2))
        );
        assert_eq!(Wireframe::new(p, vec![(0, 1)]), Err(WireframeError::IsolatedVertex(2)));
    }

    #[test]
    fn faces_of_simple_graphs() {
        let f = extract_faces(&square()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(area(&f[0].ring), 1.0);

        let f = extract_faces(&two_squares()).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|x| area(&x.ring) == 1.0));

        let diag = Wireframe::new(
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
            vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)],
        )
        .unwrap();
        let f = extract_faces(&diag).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|x| x.ring.len() == 3 && area(&x.ring) == 0.5));
    }

    #[test]
    fn crossing_edges_rejected() {
        let w = Wireframe::new(
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
            vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
        )
        .unwrap();
        assert!(matches!(extract_faces(&w), Err(WireframeError::NonPlanarInput(4, 5))));
        // overlapping collinear edges sharing an endpoint
        let w = Wireframe::new(
            pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 1.0)]),
            vec![(0, 1), (0, 2), (2, 3), (3, 1)],
        )
        .unwrap();
        assert!(matches!(extract_faces(&w), Err(WireframeError::NonPlanarInput(..))));
    }

    #[test]
    fn dangling_edge_rejected() {
        let w = Wireframe::new(
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (3.0, 3.0)]),
            vec![(0, 1), (1, 2), (2, 3), (3, 0), (2, 4)],
        )
        .unwrap();
        assert_eq!(extract_faces(&w), Err(WireframeError::DanglingEdge(4)));
        // a bridge between two squares
        let w = Wireframe::new(
            pts(&[
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 1.0),
                (0.0, 1.0),
                (3.0, 0.0),
                (4.0, 0.0),
                (4.0, 1.0),
                (3.0, 1.0),
            ]),
            vec![(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (1, 4)],
        )
        .unwrap();
        assert_eq!(extract_faces(&w), Err(WireframeError::DanglingEdge(8)));
    }

    #[test]
    fn assembly() {
        let faces = extract_faces(&square()).unwrap();
        let b = assemble_buildings(&faces, &face_adjacency(&faces)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].segments.len(), 1);
        assert_eq!(b[0].outline, faces[0].ring);

        let faces = extract_faces(&two_squares()).unwrap();
        let adj = face_adjacency(&faces);
        assert_eq!(adj, vec![(0, 1)]);
        let b = assemble_buildings(&faces, &adj).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].segments.len(), 2);
        assert_eq!(b[0].corners.len(), 6);
        let rect = PolygonRing::new(pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)])).unwrap();
        assert_eq!(b[0].outline.canonical(), rect.canonical());

        let w = Wireframe::new(
            pts(&[
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 1.0),
                (0.0, 1.0),
                (3.0, 0.0),
                (4.0, 0.0),
                (4.0, 1.0),
                (3.0, 1.0),
            ]),
            vec![(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)],
        )
        .unwrap();
        let faces = extract_faces(&w).unwrap();
        let b = assemble_buildings(&faces, &face_adjacency(&faces)).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.segments.len() == 1));
        assert_eq!(b[0].building_id, "b0");
        assert_eq!(b[1].segments[0].segment_id, "s0");
    }

    #[test]
    fn vertex_touching_faces_stay_separate() {
        // Two squares meeting at (1, 1) only.
        let w = Wireframe::new(
            pts(&[
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 1.0),
                (0.0, 1.0),
                (2.0, 1.0),
                (2.0, 2.0),
                (1.0, 2.0),
            ]),
            vec![(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 2)],
        )
        .unwrap();
        let faces = extract_faces(&w).unwrap();
        assert_eq!(faces.len(), 2);
        assert!(face_adjacency(&faces).is_empty());
        assert_eq!(assemble_buildings(&faces, &[]).unwrap().len(), 2);
    }

    #[test]
    fn t_junction_faces() {
        // A 2x1 block split into a left square and two right quarter-squares.
        let w = Wireframe::new(
            pts(&[
                (0.0, 0.0),
                (1.0, 0.0),
                (2.0, 0.0),
                (2.0, 0.5),
                (2.0, 1.0),
                (1.0, 1.0),
                (0.0, 1.0),
                (1.0, 0.5),
            ]),
            vec![
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 0),
                (1, 7),
                (7, 5),
                (7, 3),
            ],
        )
        .unwrap();
        let faces = extract_faces(&w).unwrap();
        assert_eq!(faces.len(), 10 - 8 + 1);
        // left face keeps the T-junction vertex in its cycle but not its ring
        let left = faces.iter().find(|f| f.cycle.contains(&0)).unwrap();
        assert_eq!(left.cycle.len(), 5);
        assert_eq!(left.ring.len(), 4);
        let total: f64 = faces.iter().map(|f| area(&f.ring)).sum();
        assert_eq!(total, 2.0);
        let b = assemble_buildings(&faces, &face_adjacency(&faces)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(area(&b[0].outline), 2.0);
        assert_eq!(b[0].outline.len(), 4);
        assert_eq!(b[0].corners.len(), 8);
    }

    #[test]
    fn building_validation() {
        let sq = PolygonRing::new(pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap();
        let big = PolygonRing::new(pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)])).unwrap();
        let seg = |id: &str, r: &PolygonRing| RoofSegment {
            segment_id: id.into(),
            ring: r.clone(),
        };
        assert!(BuildingInstance::new("a", sq.clone(), vec![], vec![]).is_err());
        assert!(BuildingInstance::new("a", sq.clone(), vec![seg("x", &sq), seg("x", &sq)], vec![]).is_err());
        assert!(BuildingInstance::new("a", sq.clone(), vec![seg("x", &big)], vec![]).is_err());
        assert!(BuildingInstance::new("a", big, vec![seg("x", &sq)], vec![]).is_ok());
    }
}
