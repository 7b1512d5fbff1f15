use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{clip_half_plane, mesh_from_polygons, PolygonalMesh};
use crate::polygeom::signed_area;
use crate::{Error, Point, Result};

pub const DEFAULT_LLOYD_ITERS: usize = 3;

fn unit_square() -> Vec<Point> {
    vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
}

fn dist2(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Voronoi cell of `sites[i]` clipped to the unit square, by successive
/// half-plane cuts against the nearest sites. Stops once the next site is
/// farther than twice the cell's radius, since its bisector cannot cut.
fn voronoi_cell(sites: &[Point], i: usize, order: &mut Vec<usize>) -> Vec<Point> {
    let g = sites[i];
    order.clear();
    order.extend((0..sites.len()).filter(|&j| j != i));
    order.sort_by(|&a, &b| dist2(g, sites[a]).total_cmp(&dist2(g, sites[b])).then(a.cmp(&b)));
    let mut cell = unit_square();
    for &j in order.iter() {
        let r2 = cell.iter().map(|&p| dist2(g, p)).fold(0.0, f64::max);
        let d2 = dist2(g, sites[j]);
        if d2 > 4.0 * r2 {
            break;
        }
        let s = sites[j];
        let n = [s[0] - g[0], s[1] - g[1]];
        let mid = [0.5 * (s[0] + g[0]), 0.5 * (s[1] + g[1])];
        cell = clip_half_plane(&cell, n, n[0] * mid[0] + n[1] * mid[1]);
        if cell.len() < 3 {
            break;
        }
    }
    cell
}

fn centroid(poly: &[Point]) -> Point {
    let a = signed_area(poly);
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let c = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * c;
        cy += (p[1] + q[1]) * c;
    }
    [cx / (6.0 * a), cy / (6.0 * a)]
}

fn all_cells(sites: &[Point]) -> Result<Vec<Vec<Point>>> {
    let mut order = Vec::with_capacity(sites.len());
    let mut cells = Vec::with_capacity(sites.len());
    for i in 0..sites.len() {
        let cell = voronoi_cell(sites, i, &mut order);
        if cell.len() < 3 || !(signed_area(&cell) > 0.0) {
            return Err(Error::Generation {
                generator: i,
                reason: "empty Voronoi cell after clipping".into(),
            });
        }
        cells.push(cell);
    }
    Ok(cells)
}

/// Clipped Voronoi mesh of `p` uniformly random generators in `[0,1]²`,
/// relaxed by `lloyd_iters` centroidal sweeps. Deterministic in its arguments.
pub fn generate_voronoi(p: usize, seed: u64, lloyd_iters: usize) -> Result<PolygonalMesh> {
    if p < 4 {
        return Err(Error::Parameter(format!("Voronoi mesh needs P >= 4, got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sites: Vec<Point> = (0..p).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
    let mut cells = all_cells(&sites)?;
    for _ in 0..lloyd_iters {
        sites = cells.iter().map(|c| centroid(c)).collect();
        cells = all_cells(&sites)?;
    }
    let h = 1.0 / (p as f64).sqrt();
    mesh_from_polygons(&cells, 1e-10 * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::mesh_stats;

    #[test]
    fn cell_count_and_area() {
        let m = generate_voronoi(50, 1, 3).unwrap();
        assert_eq!(m.num_cells(), 50);
        let s = mesh_stats(&m);
        assert!(s.min_area > 0.0);
        let euler = m.num_vertices() as i64 - m.num_edges() as i64 + m.num_cells() as i64;
        assert_eq!(euler, 1);
    }

    #[test]
    fn deterministic() {
        let a = generate_voronoi(100, 1, 3).unwrap();
        let b = generate_voronoi(100, 1, 3).unwrap();
        assert_eq!(a, b);
        let bits = |m: &PolygonalMesh| -> Vec<u64> {
            m.vertices().iter().flat_map(|p| p.map(f64::to_bits)).collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn too_few_generators() {
        assert!(matches!(generate_voronoi(3, 1, 0), Err(Error::Parameter(_))));
    }
}
