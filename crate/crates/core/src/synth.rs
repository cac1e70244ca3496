//! Seeded generators for synthetic polygons and roof wireframes, used by
//! the test suites and for benchmarking.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use rand::Rng;

use crate::geometry::{Point2, PolygonRing};
use crate::wireframe::Wireframe;

/// Star-shaped simple polygon: strictly increasing angles around `center`,
/// radii drawn from `[r_min, r_max]`.
pub fn star_polygon<R: Rng>(rng: &mut R, n: usize, center: Point2, r_min: f64, r_max: f64) -> PolygonRing {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let pts = angles
            .iter()
            .map(|&a| {
                let r = rng.gen_range(r_min..=r_max);
                Point2::new(center.x + r * a.cos(), center.y + r * a.sin())
            })
            .collect();
        if let Ok(ring) = PolygonRing::new(pts) {
            return ring;
        }
    }
}

/// Convex polygon with `n` vertices on a circle.
pub fn convex_polygon<R: Rng>(rng: &mut R, n: usize, center: Point2, radius: f64) -> PolygonRing {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let pts = angles
            .iter()
            .map(|&a| Point2::new(center.x + radius * a.cos(), center.y + radius * a.sin()))
            .collect();
        if let Ok(ring) = PolygonRing::new(pts) {
            if ring.len() == n {
                return ring;
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: i64,
    y0: i64,
    x1: i64,
    y1: i64,
}

/// Random guillotine partition of a `width x height` rectangle at `origin`
/// into at most `max_rects` axis-aligned rectangles no thinner than
/// `min_size`. Returns rectangles as `(x0, y0, x1, y1)`.
pub fn guillotine_rects<R: Rng>(
    rng: &mut R,
    origin: (i64, i64),
    width: i64,
    height: i64,
    max_rects: usize,
    min_size: i64,
) -> Vec<(i64, i64, i64, i64)> {
    let mut rects = vec![Rect {
        x0: origin.0,
        y0: origin.1,
        x1: origin.0 + width,
        y1: origin.1 + height,
    }];
    let mut attempts = 0;
    while rects.len() < max_rects && attempts < 20 * max_rects {
        attempts += 1;
        let i = rng.gen_range(0..rects.len());
        let r = rects[i];
        let vertical = rng.gen_bool(0.5);
        let (lo, hi) = if vertical { (r.x0, r.x1) } else { (r.y0, r.y1) };
        if hi - lo < 2 * min_size {
            continue;
        }
        let cut = rng.gen_range(lo + min_size..=hi - min_size);
        let (a, b) = if vertical {
            (Rect { x1: cut, ..r }, Rect { x0: cut, ..r })
        } else {
            (Rect { y1: cut, ..r }, Rect { y0: cut, ..r })
        };
        rects[i] = a;
        rects.push(b);
    }
    rects.into_iter().map(|r| (r.x0, r.y0, r.x1, r.y1)).collect()
}

/// Wireframe of a set of interior-disjoint axis-aligned rectangles on an
/// integer grid. Rectangle sides are split at every vertex lying on them.
pub fn rects_to_wireframe(rects: &[(i64, i64, i64, i64)]) -> Wireframe {
    let mut corners: BTreeSet<(i64, i64)> = BTreeSet::new();
    for &(x0, y0, x1, y1) in rects {
        corners.extend([(x0, y0), (x1, y0), (x1, y1), (x0, y1)]);
    }
    let index: BTreeMap<(i64, i64), usize> = corners.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(x0, y0, x1, y1) in rects {
        let sides = [
            ((x0, y0), (x1, y0)),
            ((x1, y0), (x1, y1)),
            ((x0, y1), (x1, y1)),
            ((x0, y0), (x0, y1)),
        ];
        for (a, b) in sides {
            let mut on: Vec<(i64, i64)> = corners
                .iter()
                .copied()
                .filter(|&(x, y)| {
                    if a.0 == b.0 {
                        x == a.0 && y >= a.1 && y <= b.1
                    } else {
                        y == a.1 && x >= a.0 && x <= b.0
                    }
                })
                .collect();
            on.sort();
            for w in on.windows(2) {
                let (i, j) = (index[&w[0]], index[&w[1]]);
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    let vertices = corners.iter().map(|&(x, y)| Point2::new(x as f64, y as f64)).collect();
    Wireframe::new(vertices, edges.into_iter().collect()).expect("rectangle partitions form valid wireframes")
}

/// Random rectilinear scene: `buildings` blocks laid out on a grid of
/// cells. Each block is a main rectangle with an optional wing attached to
/// its right side, both guillotine-partitioned into roof segments; a block
/// has between 1 and `max_rects` segments (at least 2 with a wing).
pub fn rectilinear_scene<R: Rng>(rng: &mut R, buildings: usize, max_rects: usize) -> Wireframe {
    let cell = 200;
    let cols = (buildings as f64).sqrt().ceil().max(1.0) as i64;
    let mut rects = Vec::new();
    for b in 0..buildings as i64 {
        let (cx, cy) = ((b % cols) * cell, (b / cols) * cell);
        let w = rng.gen_range(50..=110);
        let h = rng.gen_range(50..=110);
        let ox = cx + rng.gen_range(0..=(cell - 70 - w));
        let oy = cy + rng.gen_range(0..=(cell - 10 - h));
        let total = rng.gen_range(1..=max_rects.max(1));
        if total >= 2 && rng.gen_bool(0.6) {
            let ww = rng.gen_range(20..=60);
            let wh = rng.gen_range(20..=h);
            let wy = oy + rng.gen_range(0..=(h - wh));
            let wing = rng.gen_range(1..total);
            rects.extend(guillotine_rects(rng, (ox, oy), w, h, total - wing, 10));
            rects.extend(guillotine_rects(rng, (ox + w, wy), ww, wh, wing, 10));
        } else {
            rects.extend(guillotine_rects(rng, (ox, oy), w, h, total, 10));
        }
    }
    rects_to_wireframe(&rects)
}

/// Copy of `w` with every vertex moved by `f`.
pub fn perturb(w: &Wireframe, f: impl Fn(usize, Point2) -> Point2) -> Wireframe {
    let vertices = w.vertices().iter().enumerate().map(|(i, &p)| f(i, p)).collect();
    Wireframe::new(vertices, w.edges().to_vec()).expect("perturbation keeps topology")
}
