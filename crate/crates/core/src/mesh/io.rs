use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PolygonalMesh;
use crate::{Error, Point, Result};

pub const MESH_FORMAT: &str = "vemeig-mesh";
pub const MESH_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct MeshFile {
    format: String,
    version: u32,
    vertices: Vec<Point>,
    cells: Vec<Vec<usize>>,
}

/// Write a mesh as JSON. Coordinates use shortest round-trip decimal form,
/// so `read_mesh(write_mesh(m)) == m` bit for bit.
pub fn write_mesh(mesh: &PolygonalMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(mesh))?;
    Ok(())
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<PolygonalMesh> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text)
}

pub(crate) fn to_json(mesh: &PolygonalMesh) -> String {
    // one vertex / cell per line keeps files diffable
    let mut s = String::new();
    s.push_str(&format!(
        "{{\"format\":\"{MESH_FORMAT}\",\"version\":{MESH_VERSION},\n\"vertices\":[\n"
    ));
    let nv = mesh.vertices().len();
    for (i, p) in mesh.vertices().iter().enumerate() {
        s.push_str(&serde_json::to_string(p).expect("finite coordinates"));
        s.push_str(if i + 1 < nv { ",\n" } else { "\n" });
    }
    s.push_str("],\n\"cells\":[\n");
    let nc = mesh.cells().len();
    for (i, c) in mesh.cells().iter().enumerate() {
        s.push_str(&serde_json::to_string(c).expect("integers"));
        s.push_str(if i + 1 < nc { ",\n" } else { "\n" });
    }
    s.push_str("]}\n");
    s
}

fn line_of(text: &str, needle: &str) -> usize {
    text.find(needle)
        .map(|pos| text[..pos].matches('\n').count() + 1)
        .unwrap_or(1)
}

pub(crate) fn from_json(text: &str) -> Result<PolygonalMesh> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        field: format!("column {}", e.column()),
        reason: e.to_string(),
    })?;
    if file.format != MESH_FORMAT {
        return Err(Error::Parse {
            line: line_of(text, "\"format\""),
            field: "format".into(),
            reason: format!("expected \"{MESH_FORMAT}\", found \"{}\"", file.format),
        });
    }
    if file.version != MESH_VERSION {
        return Err(Error::Parse {
            line: line_of(text, "\"version\""),
            field: "version".into(),
            reason: format!("unsupported version {}", file.version),
        });
    }
    PolygonalMesh::new(file.vertices, file.cells)
}
