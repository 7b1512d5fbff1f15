//! Polygonal meshes of the unit square.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::polygeom::ElementGeometry;
use crate::{Error, Point, Result};

mod io;
mod structured;
mod voronoi;

pub use io::{read_mesh, write_mesh, MESH_FORMAT, MESH_VERSION};
pub use structured::{default_hex_columns, generate_structured};
pub use voronoi::{generate_voronoi, DEFAULT_LLOYD_ITERS};

/// Tolerance for "lies on the boundary of the unit square".
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshKind {
    Triangle,
    Square,
    Voronoi,
    Hexagon,
    Dyadic,
}

impl MeshKind {
    pub fn letter(self) -> char {
        match self {
            MeshKind::Triangle => 'T',
            MeshKind::Square => 'S',
            MeshKind::Voronoi => 'V',
            MeshKind::Hexagon => 'H',
            MeshKind::Dyadic => 'D',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeshKind::Triangle => "triangle",
            MeshKind::Square => "square",
            MeshKind::Voronoi => "voronoi",
            MeshKind::Hexagon => "hexagon",
            MeshKind::Dyadic => "dyadic",
        }
    }
}

impl std::str::FromStr for MeshKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" | "triangle" | "triangles" => Ok(MeshKind::Triangle),
            "s" | "square" | "squares" => Ok(MeshKind::Square),
            "v" | "voronoi" => Ok(MeshKind::Voronoi),
            "h" | "hexagon" | "hexagons" => Ok(MeshKind::Hexagon),
            "d" | "dyadic" => Ok(MeshKind::Dyadic),
            other => Err(Error::Parameter(format!("unknown mesh kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for MeshKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A mesh family member: kind plus its refinement parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshFamily {
    /// `N` subdivisions per side, each square cut along the (i,j)-(i+1,j+1) diagonal.
    Triangle { n: usize },
    /// `N × N` squares.
    Square { n: usize },
    /// `N × N` squares with every edge midpoint inserted (octagons).
    Dyadic { n: usize },
    /// `n` hexagons across, `m` rows, clipped to the square.
    Hexagon { n: usize, m: usize },
    /// Clipped Voronoi diagram of `p` random generators.
    Voronoi { p: usize, seed: u64, lloyd_iters: usize },
}

impl MeshFamily {
    pub fn kind(&self) -> MeshKind {
        match self {
            MeshFamily::Triangle { .. } => MeshKind::Triangle,
            MeshFamily::Square { .. } => MeshKind::Square,
            MeshFamily::Dyadic { .. } => MeshKind::Dyadic,
            MeshFamily::Hexagon { .. } => MeshKind::Hexagon,
            MeshFamily::Voronoi { .. } => MeshKind::Voronoi,
        }
    }

    /// The refinement parameter reported in tables (`N`, `m` or `P`).
    pub fn level(&self) -> usize {
        match *self {
            MeshFamily::Triangle { n } | MeshFamily::Square { n } | MeshFamily::Dyadic { n } => n,
            MeshFamily::Hexagon { m, .. } => m,
            MeshFamily::Voronoi { p, .. } => p,
        }
    }

    /// Family member of `kind` at table level `level`; hexagon column
    /// counts and the Voronoi relaxation use their defaults.
    pub fn from_level(kind: MeshKind, level: usize, seed: u64) -> Self {
        match kind {
            MeshKind::Triangle => MeshFamily::Triangle { n: level },
            MeshKind::Square => MeshFamily::Square { n: level },
            MeshKind::Dyadic => MeshFamily::Dyadic { n: level },
            MeshKind::Hexagon => MeshFamily::Hexagon {
                n: default_hex_columns(level),
                m: level,
            },
            MeshKind::Voronoi => MeshFamily::Voronoi {
                p: level,
                seed,
                lloyd_iters: DEFAULT_LLOYD_ITERS,
            },
        }
    }

    pub fn generate(&self) -> Result<PolygonalMesh> {
        match *self {
            MeshFamily::Voronoi {
                p,
                seed,
                lloyd_iters,
            } => generate_voronoi(p, seed, lloyd_iters),
            other => generate_structured(other),
        }
    }
}

/// A conforming polygonal mesh of `[0,1]²` with CCW cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalMesh {
    vertices: Vec<Point>,
    cells: Vec<Vec<usize>>,
    boundary_vertex: Vec<bool>,
    h_max: f64,
}

pub(crate) fn on_boundary(p: Point) -> bool {
    p[0].abs() <= BOUNDARY_TOL
        || (p[0] - 1.0).abs() <= BOUNDARY_TOL
        || p[1].abs() <= BOUNDARY_TOL
        || (p[1] - 1.0).abs() <= BOUNDARY_TOL
}

/// Both endpoints on the same side of the square.
fn on_same_side(p: Point, q: Point) -> bool {
    let t = BOUNDARY_TOL;
    (p[0].abs() <= t && q[0].abs() <= t)
        || ((p[0] - 1.0).abs() <= t && (q[0] - 1.0).abs() <= t)
        || (p[1].abs() <= t && q[1].abs() <= t)
        || ((p[1] - 1.0).abs() <= t && (q[1] - 1.0).abs() <= t)
}

impl PolygonalMesh {
    /// Build and validate a mesh. Boundary flags and `h_max` are derived.
    pub fn new(vertices: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let nv = vertices.len();
        for (i, p) in vertices.iter().enumerate() {
            if !p.iter().all(|c| c.is_finite() && *c >= -BOUNDARY_TOL && *c <= 1.0 + BOUNDARY_TOL) {
                return Err(Error::Validation(format!(
                    "vertex {i} ({}, {}) lies outside the unit square",
                    p[0], p[1]
                )));
            }
        }
        let mut h_max = 0.0f64;
        let mut area = 0.0;
        let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() < 3 {
                return Err(Error::Validation(format!("cell {c} has fewer than 3 vertices")));
            }
            if let Some(&bad) = cell.iter().find(|&&v| v >= nv) {
                return Err(Error::Validation(format!(
                    "cell {c} references vertex {bad} but only {nv} vertices exist"
                )));
            }
            let mut sorted = cell.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("cell {c} has duplicate vertex indices")));
            }
            let pts: Vec<Point> = cell.iter().map(|&v| vertices[v]).collect();
            let geom = ElementGeometry::new(&pts)
                .map_err(|e| Error::Validation(format!("cell {c}: {e}")))?;
            h_max = h_max.max(geom.diameter);
            area += geom.area;
            for i in 0..cell.len() {
                let (a, b) = (cell[i], cell[(i + 1) % cell.len()]);
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        if (area - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "cell areas sum to {area:.16} instead of 1"
            )));
        }
        for (&(a, b), &count) in &edge_count {
            if count > 2 {
                return Err(Error::Validation(format!(
                    "edge ({a}, {b}) is shared by {count} cells"
                )));
            }
            if count == 1 && !on_same_side(vertices[a], vertices[b]) {
                return Err(Error::Validation(format!(
                    "edge ({a}, {b}) belongs to a single cell but is not on the boundary"
                )));
            }
        }
        let euler = nv as i64 - edge_count.len() as i64 + cells.len() as i64;
        if euler != 1 {
            return Err(Error::Validation(format!(
                "Euler characteristic V - E + C = {euler}, expected 1"
            )));
        }
        let boundary_vertex = vertices.iter().map(|&p| on_boundary(p)).collect();
        Ok(PolygonalMesh {
            vertices,
            cells,
            boundary_vertex,
            h_max,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn boundary_vertex(&self) -> &[bool] {
        &self.boundary_vertex
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Maximum element diameter.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn cell_points(&self, c: usize) -> Vec<Point> {
        self.cells[c].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn cell_geometry(&self, c: usize) -> ElementGeometry {
        ElementGeometry::new(&self.cell_points(c)).expect("validated at construction")
    }

    /// Unique undirected edges `(min, max)` with the number of adjacent cells.
    pub fn edges(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for cell in &self.cells {
            for i in 0..cell.len() {
                let (a, b) = (cell[i], cell[(i + 1) % cell.len()]);
                *out.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }
}

/// Shape-regularity summary of a mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshStats {
    pub num_vertices: usize,
    pub num_cells: usize,
    pub num_edges: usize,
    pub num_boundary_vertices: usize,
    pub h_max: f64,
    /// `min h_e / h_E` over all element edges.
    pub min_edge_to_h: f64,
    pub min_area: f64,
    /// Number of cells per edge count.
    pub cell_edge_histogram: BTreeMap<usize, usize>,
}

pub fn mesh_stats(mesh: &PolygonalMesh) -> MeshStats {
    let mut min_edge_to_h = f64::INFINITY;
    let mut min_area = f64::INFINITY;
    let mut hist = BTreeMap::new();
    for c in 0..mesh.num_cells() {
        let g = mesh.cell_geometry(c);
        min_area = min_area.min(g.area);
        for e in &g.edges {
            min_edge_to_h = min_edge_to_h.min(e.length / g.diameter);
        }
        *hist.entry(g.num_vertices()).or_insert(0) += 1;
    }
    MeshStats {
        num_vertices: mesh.num_vertices(),
        num_cells: mesh.num_cells(),
        num_edges: mesh.num_edges(),
        num_boundary_vertices: mesh.boundary_vertex().iter().filter(|&&b| b).count(),
        h_max: mesh.h_max(),
        min_edge_to_h,
        min_area,
        cell_edge_histogram: hist,
    }
}

/// Clip a polygon against the half-plane `n . x <= c` (Sutherland–Hodgman step).
pub(crate) fn clip_half_plane(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let m = poly.len();
    for i in 0..m {
        let p = poly[i];
        let q = poly[(i + 1) % m];
        let dp = n[0] * p[0] + n[1] * p[1] - c;
        let dq = n[0] * q[0] + n[1] * q[1] - c;
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let t = dp / (dp - dq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Clip a polygon to the unit square; intersection points land exactly on the sides.
pub(crate) fn clip_to_unit_square(poly: &[Point]) -> Vec<Point> {
    let mut p = clip_half_plane(poly, [-1.0, 0.0], 0.0);
    p = clip_half_plane(&p, [1.0, 0.0], 1.0);
    p = clip_half_plane(&p, [0.0, -1.0], 0.0);
    p = clip_half_plane(&p, [0.0, 1.0], 1.0);
    for v in &mut p {
        for c in v.iter_mut() {
            if c.abs() <= BOUNDARY_TOL {
                *c = 0.0;
            } else if (*c - 1.0).abs() <= BOUNDARY_TOL {
                *c = 1.0;
            }
        }
    }
    p
}

/// Turn a list of independently computed polygons into a conforming mesh:
/// points closer than `merge_tol` are merged (which also collapses
/// degenerate short edges) and repeated consecutive vertices are dropped.
pub(crate) fn mesh_from_polygons(polys: &[Vec<Point>], merge_tol: f64) -> Result<PolygonalMesh> {
    let cs = merge_tol.max(f64::MIN_POSITIVE) * 4.0;
    let key = |p: Point| ((p[0] / cs).floor() as i64, (p[1] / cs).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut vertices: Vec<Point> = Vec::new();
    let mut cells = Vec::with_capacity(polys.len());
    for (pi, poly) in polys.iter().enumerate() {
        let mut cell: Vec<usize> = Vec::with_capacity(poly.len());
        for &p in poly {
            let (kx, ky) = key(p);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = buckets.get(&(kx + dx, ky + dy)) {
                        for &v in list {
                            let q = vertices[v];
                            if (p[0] - q[0]).hypot(p[1] - q[1]) <= merge_tol {
                                found = Some(v);
                                break 'search;
                            }
                        }
                    }
                }
            }
            let v = found.unwrap_or_else(|| {
                vertices.push(p);
                buckets.entry((kx, ky)).or_default().push(vertices.len() - 1);
                vertices.len() - 1
            });
            if cell.last() != Some(&v) {
                cell.push(v);
            }
        }
        while cell.len() > 1 && cell.first() == cell.last() {
            cell.pop();
        }
        if cell.len() < 3 {
            return Err(Error::Generation {
                generator: pi,
                reason: "cell collapsed to fewer than 3 vertices".into(),
            });
        }
        cells.push(cell);
    }
    PolygonalMesh::new(vertices, cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_clockwise_cell() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let err = PolygonalMesh::new(v, vec![vec![0, 3, 2, 1]]).unwrap_err();
        assert!(matches!(err, Error::Validation(ref s) if s.contains("cell 0")), "{err}");
    }

    #[test]
    fn rejects_duplicate_index() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let err = PolygonalMesh::new(v, vec![vec![0, 1, 2, 2, 3]]).unwrap_err();
        assert!(matches!(err, Error::Validation(ref s) if s.contains("duplicate")), "{err}");
    }

    #[test]
    fn rejects_hanging_node() {
        // left cell split in two, right cell unaware of the midpoint at (0.5, 0.5)
        let v = vec![
            [0.0, 0.0],
            [0.5, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.5, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
            [0.0, 0.5],
        ];
        let cells = vec![vec![0, 1, 6, 7], vec![7, 6, 4, 5], vec![1, 2, 3, 4]];
        assert!(PolygonalMesh::new(v, cells).is_err());
    }

    #[test]
    fn clipping_keeps_area() {
        let big = vec![[-0.5, -0.5], [1.5, -0.5], [1.5, 1.5], [-0.5, 1.5]];
        let c = clip_to_unit_square(&big);
        assert!((crate::polygeom::signed_area(&c) - 1.0).abs() < 1e-15);
    }
}
