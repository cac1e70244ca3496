#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use polyroof::geometry::Point2;
use polyroof::synth::{perturb, rectilinear_scene};
use polyroof::Wireframe;
use polyroof_eval::scene::SceneDocument;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_polyroof-eval"));
    c.env_remove("POLYROOF_EPSILON");
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn scene_wireframe(seed: u64, buildings: usize, max_rects: usize) -> Wireframe {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rectilinear_scene(&mut rng, buildings, max_rects)
}

/// Writes `n` synthetic scenes to `dir`, each passed through `f`.
pub fn write_scenes(
    dir: &Path,
    n: usize,
    seed: u64,
    buildings: usize,
    max_rects: usize,
    f: impl Fn(usize, Point2) -> Point2,
) {
    std::fs::create_dir_all(dir).unwrap();
    for k in 0..n {
        let w = perturb(&scene_wireframe(seed.wrapping_add(k as u64), buildings, max_rects), &f);
        let doc = SceneDocument::from_wireframe(format!("scene_{k:04}"), 1024, 1024, &w);
        doc.write(&dir.join(format!("scene_{k:04}.json"))).unwrap();
    }
}

pub const UNIT_SQUARE: &str = r#"{
  "schema_version": 1,
  "scene_id": "unit",
  "width": 4,
  "height": 4,
  "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
  "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]
}
"#;

pub fn summary_line(path: &Path, row: usize) -> Vec<String> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().nth(row).unwrap().split(',').map(str::to_string).collect()
}
