//! On-disk scene format: one UTF-8 JSON document per scene.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "scene_id": "tile_0001",
//!   "width": 512, "height": 512,
//!   "vertices": [[0, 0], [10, 0], [10, 10], [0, 10]],
//!   "edges": [[0, 1], [1, 2], [2, 3], [3, 0]],
//!   "buildings": [
//!     {"building_id": "b0", "outline": [0, 1, 2, 3],
//!      "segments": [{"segment_id": "s0", "ring": [0, 1, 2, 3]}]}
//!   ]
//! }
//! ```
//!
//! `buildings` is optional. Without it, buildings are derived from the faces
//! of the wireframe.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};

use polyroof::geometry::{Point2, PolygonRing};
use polyroof::wireframe::{assemble_buildings, extract_faces, face_adjacency, Corner, RoofSegment};
use polyroof::{BuildingInstance, Wireframe};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub segment_id: String,
    pub ring: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingDoc {
    pub building_id: String,
    pub outline: Vec<usize>,
    pub segments: Vec<SegmentDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub schema_version: u32,
    pub scene_id: String,
    pub width: u32,
    pub height: u32,
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buildings: Option<Vec<BuildingDoc>>,
}

/// A parsed and validated scene.
#[derive(Debug, Clone)]
pub struct Scene {
    pub path: PathBuf,
    pub scene_id: String,
    pub wireframe: Wireframe,
    pub buildings: Vec<BuildingInstance>,
}

impl SceneDocument {
    pub fn from_wireframe(scene_id: impl Into<String>, width: u32, height: u32, w: &Wireframe) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scene_id: scene_id.into(),
            width,
            height,
            vertices: w.vertices().iter().map(|p| [p.x, p.y]).collect(),
            edges: w.edges().iter().map(|&(i, j)| [i, j]).collect(),
            buildings: None,
        }
    }

    /// Records explicit buildings whose ring vertices all occur in the
    /// wireframe; `None` if some vertex does not.
    pub fn with_buildings(mut self, buildings: &[BuildingInstance]) -> Option<Self> {
        let index: HashMap<(u64, u64), usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| ((v[0].to_bits(), v[1].to_bits()), i))
            .collect();
        let ring = |r: &PolygonRing| -> Option<Vec<usize>> {
            r.vertices()
                .iter()
                .map(|p| index.get(&(p.x.to_bits(), p.y.to_bits())).copied())
                .collect()
        };
        let mut docs = Vec::with_capacity(buildings.len());
        for b in buildings {
            let segments = b
                .segments
                .iter()
                .map(|s| {
                    Some(SegmentDoc {
                        segment_id: s.segment_id.clone(),
                        ring: ring(&s.ring)?,
                    })
                })
                .collect::<Option<Vec<_>>>()?;
            docs.push(BuildingDoc {
                building_id: b.building_id.clone(),
                outline: ring(&b.outline)?,
                segments,
            });
        }
        self.buildings = Some(docs);
        Some(self)
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let doc: SceneDocument = serde_json::from_str(text).map_err(|e| CliError::json(path, &e))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line: 1,
                column: 1,
                message: format!(
                    "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                    doc.schema_version
                ),
            });
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(path, &text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scene documents always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }

    /// Builds the wireframe and the building list, validating every index,
    /// ring and containment relation.
    pub fn into_scene(self, path: &Path) -> Result<Scene> {
        let invalid = |m: String| CliError::invalid(path, format!("scene {}: {m}", self.scene_id));
        let vertices: Vec<Point2> = self.vertices.iter().map(|&v| v.into()).collect();
        let edges = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let wireframe = Wireframe::new(vertices, edges).map_err(|e| invalid(e.to_string()))?;
        let buildings = match &self.buildings {
            None => {
                let faces = extract_faces(&wireframe).map_err(|e| invalid(e.to_string()))?;
                assemble_buildings(&faces, &face_adjacency(&faces)).map_err(|e| invalid(e.to_string()))?
            }
            Some(docs) => {
                wireframe.check_planar().map_err(|e| invalid(e.to_string()))?;
                explicit_buildings(&wireframe, docs).map_err(invalid)?
            }
        };
        Ok(Scene {
            path: path.to_path_buf(),
            scene_id: self.scene_id,
            wireframe,
            buildings,
        })
    }
}

fn explicit_buildings(w: &Wireframe, docs: &[BuildingDoc]) -> std::result::Result<Vec<BuildingInstance>, String> {
    let verts = w.vertices();
    let ring = |idx: &[usize], what: &str| -> std::result::Result<PolygonRing, String> {
        if let Some(&i) = idx.iter().find(|&&i| i >= verts.len()) {
            return Err(format!("{what} references vertex {i} of {}", verts.len()));
        }
        PolygonRing::new(idx.iter().map(|&i| verts[i]).collect()).map_err(|e| format!("{what}: {e}"))
    };
    let mut ids = HashSet::new();
    let mut out = Vec::with_capacity(docs.len());
    for b in docs {
        if !ids.insert(b.building_id.as_str()) {
            return Err(format!("duplicate building id {:?}", b.building_id));
        }
        let outline = ring(&b.outline, &format!("building {:?} outline", b.building_id))?;
        let mut corner_ids: BTreeSet<usize> = b.outline.iter().copied().collect();
        let mut segments = Vec::with_capacity(b.segments.len());
        for s in &b.segments {
            let r = ring(
                &s.ring,
                &format!("building {:?} segment {:?}", b.building_id, s.segment_id),
            )?;
            corner_ids.extend(s.ring.iter().copied());
            segments.push(RoofSegment {
                segment_id: s.segment_id.clone(),
                ring: r,
            });
        }
        let corners = corner_ids
            .into_iter()
            .map(|id| Corner { id, point: verts[id] })
            .collect();
        out.push(BuildingInstance::new(b.building_id.clone(), outline, segments, corners).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// Scene files in `dir` (`*.json`, non-recursive), sorted by path. A file
/// path is returned as is.
pub fn scene_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let entries = std::fs::read_dir(path).map_err(|e| CliError::io(path, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let p = entry.map_err(|e| CliError::io(path, e))?.path();
        if p.is_file() && p.extension().is_some_and(|x| x == "json") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

pub fn load_scene(path: &Path) -> Result<Scene> {
    SceneDocument::read(path)?.into_scene(path)
}
