use super::{clip_to_unit_square, mesh_from_polygons, MeshFamily, PolygonalMesh};
use crate::{Error, Point, Result};

/// Column count paired with `m` hexagon rows: the even integer nearest to
/// `m·√3/2`, which keeps the hexagons close to regular.
pub fn default_hex_columns(m: usize) -> usize {
    let target = m as f64 * 3f64.sqrt() / 2.0;
    let n = 2 * ((target / 2.0).round() as usize);
    n.max(2)
}

/// Generate a structured family member (everything but Voronoi).
pub fn generate_structured(family: MeshFamily) -> Result<PolygonalMesh> {
    match family {
        MeshFamily::Triangle { n } => {
            check_level(n, 1)?;
            Ok(triangles(n))
        }
        MeshFamily::Square { n } => {
            check_level(n, 1)?;
            Ok(squares(n))
        }
        MeshFamily::Dyadic { n } => {
            check_level(n, 1)?;
            Ok(dyadic(n))
        }
        MeshFamily::Hexagon { n, m } => {
            if n < 2 || m < 2 {
                return Err(Error::Parameter(format!(
                    "hexagon mesh needs n >= 2 and m >= 2, got {n} x {m}"
                )));
            }
            hexagons(n, m)
        }
        MeshFamily::Voronoi { .. } => Err(Error::Parameter(
            "Voronoi meshes are produced by generate_voronoi".into(),
        )),
    }
}

fn check_level(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::Parameter(format!("level must be >= {min}, got {n}")));
    }
    Ok(())
}

fn grid_vertices(n: usize) -> Vec<Point> {
    let mut v = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            v.push([i as f64 / n as f64, j as f64 / n as f64]);
        }
    }
    v
}

fn squares(n: usize) -> PolygonalMesh {
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    PolygonalMesh::new(grid_vertices(n), cells).expect("square grid is valid")
}

fn triangles(n: usize) -> PolygonalMesh {
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            cells.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    PolygonalMesh::new(grid_vertices(n), cells).expect("triangle grid is valid")
}

fn dyadic(n: usize) -> PolygonalMesh {
    // half-step lattice without the cell centres (odd, odd)
    let m = 2 * n;
    let mut index = vec![usize::MAX; (m + 1) * (m + 1)];
    let mut vertices = Vec::with_capacity((3 * n + 1) * (n + 1));
    for j in 0..=m {
        for i in 0..=m {
            if i % 2 == 1 && j % 2 == 1 {
                continue;
            }
            index[j * (m + 1) + i] = vertices.len();
            vertices.push([i as f64 / m as f64, j as f64 / m as f64]);
        }
    }
    let id = |i: usize, j: usize| index[j * (m + 1) + i];
    let mut cells = Vec::with_capacity(n * n);
    for cj in 0..n {
        for ci in 0..n {
            let (i, j) = (2 * ci, 2 * cj);
            cells.push(vec![
                id(i, j),
                id(i + 1, j),
                id(i + 2, j),
                id(i + 2, j + 1),
                id(i + 2, j + 2),
                id(i + 1, j + 2),
                id(i, j + 2),
                id(i, j + 1),
            ]);
        }
    }
    PolygonalMesh::new(vertices, cells).expect("dyadic grid is valid")
}

/// Pointy-top hexagons: `m + 1` rows centred on `y = j/m`, even rows centred
/// on `x = i/n`, odd rows shifted by half a column; everything clipped to the
/// square so the first and last rows and columns become cut polygons.
fn hexagons(n: usize, m: usize) -> Result<PolygonalMesh> {
    let half_w = 0.5 / n as f64;
    let radius = 2.0 / (3.0 * m as f64);
    let mut polys = Vec::new();
    for j in 0..=m {
        let cy = j as f64 / m as f64;
        let (count, shift) = if j % 2 == 0 { (n + 1, 0.0) } else { (n, 0.5) };
        for i in 0..count {
            let cx = (i as f64 + shift) / n as f64;
            let hex = [
                [cx, cy - radius],
                [cx + half_w, cy - 0.5 * radius],
                [cx + half_w, cy + 0.5 * radius],
                [cx, cy + radius],
                [cx - half_w, cy + 0.5 * radius],
                [cx - half_w, cy - 0.5 * radius],
            ]
            .map(|p| p.map(snap));
            let clipped = clip_to_unit_square(&hex);
            if clipped.len() >= 3 && crate::polygeom::signed_area(&clipped) > 1e-14 {
                polys.push(clipped);
            }
        }
    }
    mesh_from_polygons(&polys, 1e-10 * half_w)
}

fn snap(c: f64) -> f64 {
    let r = c.round();
    if (c - r).abs() <= super::BOUNDARY_TOL {
        r
    } else {
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::mesh_stats;

    #[test]
    fn square_counts() {
        let m = generate_structured(MeshFamily::Square { n: 4 }).unwrap();
        assert_eq!(m.num_vertices(), 25);
        assert_eq!(m.num_cells(), 16);
        assert!((m.h_max() - 2f64.sqrt() / 4.0).abs() < 1e-15);
        let s = mesh_stats(&m);
        assert!((s.min_edge_to_h - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn triangle_counts() {
        let m = generate_structured(MeshFamily::Triangle { n: 4 }).unwrap();
        assert_eq!(m.num_vertices(), 25);
        assert_eq!(m.num_cells(), 32);
        let interior = m.boundary_vertex().iter().filter(|b| !**b).count();
        assert_eq!(interior, 9);
    }

    #[test]
    fn dyadic_counts() {
        for n in [1, 2, 4, 8] {
            let m = generate_structured(MeshFamily::Dyadic { n }).unwrap();
            assert_eq!(m.num_vertices(), (3 * n + 1) * (n + 1));
            assert_eq!(m.num_cells(), n * n);
            assert!(m.cells().iter().all(|c| c.len() == 8));
            let nb = m.boundary_vertex().iter().filter(|b| **b).count();
            assert_eq!(nb, 8 * n);
        }
        let s = mesh_stats(&generate_structured(MeshFamily::Dyadic { n: 4 }).unwrap());
        assert!((s.min_edge_to_h - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn hexagon_mesh_is_mostly_hexagons() {
        let m = generate_structured(MeshFamily::Hexagon { n: 8, m: 10 }).unwrap();
        let s = mesh_stats(&m);
        assert_eq!(s.num_cells, 94);
        assert!(s.cell_edge_histogram[&6] > s.num_cells / 2);
    }

    #[test]
    fn bad_levels() {
        assert!(generate_structured(MeshFamily::Square { n: 0 }).is_err());
        assert!(generate_structured(MeshFamily::Hexagon { n: 1, m: 4 }).is_err());
    }

    #[test]
    fn hex_column_defaults() {
        let got: Vec<usize> = [10, 20, 30, 40, 50, 60, 70, 80]
            .iter()
            .map(|&m| default_hex_columns(m))
            .collect();
        assert_eq!(got, vec![8, 18, 26, 34, 44, 52, 60, 70]);
    }
}
