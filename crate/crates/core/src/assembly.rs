//! Global DOF numbering and assembly of the interior-DOF pencil `(A, B)`.
//!
//! Global edge DOFs run from the lower-numbered to the higher-numbered
//! vertex, so a cell traversing an edge the other way reads them reversed.
//! Dirichlet conditions are imposed by dropping every DOF on a boundary
//! vertex or boundary edge (an edge with one adjacent cell).

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::mesh::PolygonalMesh;
use crate::vem::{build_local, tag_element, DofLayout};
use crate::{Error, Result};

/// Largest order for which a dense copy of an assembled matrix is allowed.
pub const DENSE_CAPACITY: usize = 20_000;

#[derive(Debug, Clone)]
pub struct GlobalDofMap {
    pub k: usize,
    /// Total DOFs including boundary ones.
    pub n_total: usize,
    /// Interior (free) DOFs, `N_h`.
    pub n_free: usize,
    /// Per cell, local DOF -> free index (`None` for Dirichlet DOFs).
    pub cell_dofs: Vec<Vec<Option<usize>>>,
    /// Per cell, local DOF -> index into the full numbering.
    pub cell_full: Vec<Vec<usize>>,
    /// Free index -> full index.
    pub free_to_full: Vec<usize>,
}

impl GlobalDofMap {
    pub fn new(mesh: &PolygonalMesh, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("degree must be >= 1".into()));
        }
        let edges = mesh.edges();
        let per_edge = k - 1;
        let n_int = k * (k - 1) / 2;
        let nv = mesh.num_vertices();
        let edge_index: HashMap<(usize, usize), usize> =
            edges.keys().enumerate().map(|(i, &e)| (e, i)).collect();
        let n_total = nv + edges.len() * per_edge + mesh.num_cells() * n_int;

        let mut fixed = vec![false; n_total];
        for (v, &b) in mesh.boundary_vertex().iter().enumerate() {
            fixed[v] = b;
        }
        for (i, (_, &count)) in edges.iter().enumerate() {
            if count == 1 {
                for j in 0..per_edge {
                    fixed[nv + i * per_edge + j] = true;
                }
            }
        }
        let mut full_to_free = vec![None; n_total];
        let mut free_to_full = Vec::new();
        for (i, &f) in fixed.iter().enumerate() {
            if !f {
                full_to_free[i] = Some(free_to_full.len());
                free_to_full.push(i);
            }
        }

        let mut orientation: HashMap<(usize, usize), (usize, bool)> = HashMap::new();
        let mut cell_full = Vec::with_capacity(mesh.num_cells());
        for (c, cell) in mesh.cells().iter().enumerate() {
            let layout = DofLayout::new(cell.len(), k);
            let mut map = vec![0usize; layout.n_dofs()];
            for (i, &v) in cell.iter().enumerate() {
                map[layout.vertex(i)] = v;
            }
            for e in 0..cell.len() {
                let (a, b) = (cell[e], cell[(e + 1) % cell.len()]);
                let key = (a.min(b), a.max(b));
                let forward = a < b;
                if let Some(&(other, fwd)) = orientation.get(&key) {
                    if fwd == forward {
                        return Err(Error::Assembly(
                            key.0,
                            key.1,
                            format!("cells {other} and {c} traverse the edge in the same direction"),
                        ));
                    }
                } else {
                    orientation.insert(key, (c, forward));
                }
                let base = nv + edge_index[&key] * per_edge;
                for j in 0..per_edge {
                    let g = if forward { j } else { per_edge - 1 - j };
                    map[layout.edge(e, j)] = base + g;
                }
            }
            let base = nv + edges.len() * per_edge + c * n_int;
            for beta in 0..n_int {
                map[layout.internal(beta)] = base + beta;
            }
            cell_full.push(map);
        }
        let cell_dofs = cell_full
            .iter()
            .map(|m| m.iter().map(|&g| full_to_free[g]).collect())
            .collect();
        Ok(GlobalDofMap {
            k,
            n_total,
            n_free: free_to_full.len(),
            cell_dofs,
            cell_full,
            free_to_full,
        })
    }
}

/// Symmetric sparse matrix storing the upper triangle (diagonal included)
/// in compressed rows with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymmetric {
    /// Build from triplets; lower-triangle entries are mirrored, duplicates summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        for t in triplets.iter_mut() {
            if t.0 > t.1 {
                *t = (t.1, t.0, t.2);
            }
        }
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().expect("nonempty") += v;
            } else {
                row_ptr[i + 1] += 1;
                col_idx.push(j);
                values.push(v);
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseSymmetric {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored (upper-triangle) entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Upper-triangle row `i`: `(j, a_ij)` for `j >= i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    /// All stored entries `(i, j, a_ij)` with `i <= j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let mut acc = 0.0;
            for (j, v) in self.row(i) {
                acc += v * x[j];
                if j != i {
                    y[j] += v * x[i];
                }
            }
            y[i] += acc;
        }
        y
    }

    /// `P A Pᵀ` where `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> SparseSymmetric {
        let mut inv = vec![0usize; self.n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let t = self.iter().map(|(i, j, v)| (inv[i], inv[j], v)).collect();
        SparseSymmetric::from_triplets(self.n, t)
    }

    /// Adjacency lists of the off-diagonal pattern.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, j, _) in self.iter() {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    /// Fails with a capacity error above [`DENSE_CAPACITY`].
    pub fn extract_dense_check(&self) -> Result<()> {
        if self.n > DENSE_CAPACITY {
            return Err(Error::Capacity(format!(
                "dense copy of order {} exceeds the limit {DENSE_CAPACITY}; use the sparse solver or a coarser mesh",
                self.n
            )));
        }
        Ok(())
    }

    pub fn extract_dense(&self) -> Result<DMatrix<f64>> {
        self.extract_dense_check()?;
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        Ok(m)
    }

    /// Matrix Market coordinate format, lower triangle, 1-based.
    pub fn write_matrix_market(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
        writeln!(w, "{} {} {}", self.n, self.n, self.nnz())?;
        let mut entries: Vec<(usize, usize, f64)> = self.iter().map(|(i, j, v)| (j, i, v)).collect();
        entries.sort_unstable_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        for (i, j, v) in entries {
            writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
        }
        Ok(())
    }
}

/// The discrete pencil on interior DOFs.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub a: SparseSymmetric,
    pub b: SparseSymmetric,
    pub dofs: GlobalDofMap,
    pub alpha: f64,
}

impl Pencil {
    pub fn n(&self) -> usize {
        self.a.n()
    }
}

/// Assemble stiffness and mass over all cells. Element matrices are built
/// in parallel and accumulated in cell order, so the result is independent
/// of the thread count.
pub fn assemble(mesh: &PolygonalMesh, k: usize, alpha: f64) -> Result<Pencil> {
    let dofs = GlobalDofMap::new(mesh, k)?;
    let locals: Vec<Result<(DMatrix<f64>, DMatrix<f64>)>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let geom = mesh.cell_geometry(c);
            build_local(&geom, k, alpha)
                .map(|(b, _)| (b.a_loc, b.b_loc))
                .map_err(|e| tag_element(e, c))
        })
        .collect();
    let mut ta = Vec::new();
    let mut tb = Vec::new();
    for (c, local) in locals.into_iter().enumerate() {
        let (al, bl) = local?;
        if al.iter().chain(bl.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Element {
                element: c,
                reason: "non-finite local matrix entry".into(),
            });
        }
        let map = &dofs.cell_dofs[c];
        for (li, gi) in map.iter().enumerate() {
            let Some(gi) = *gi else { continue };
            for (lj, gj) in map.iter().enumerate() {
                let Some(gj) = *gj else { continue };
                if gi <= gj {
                    ta.push((gi, gj, al[(li, lj)]));
                    tb.push((gi, gj, bl[(li, lj)]));
                }
            }
        }
    }
    let n = dofs.n_free;
    Ok(Pencil {
        a: SparseSymmetric::from_triplets(n, ta),
        b: SparseSymmetric::from_triplets(n, tb),
        dofs,
        alpha,
    })
}

/// Per-degree summary used by reports: `N_h` for each `k`.
pub fn dof_counts(mesh: &PolygonalMesh, degrees: &[usize]) -> Result<BTreeMap<usize, usize>> {
    degrees
        .iter()
        .map(|&k| GlobalDofMap::new(mesh, k).map(|d| (k, d.n_free)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured, MeshFamily};

    #[test]
    fn dof_counts_match_known_values() {
        let s4 = generate_structured(MeshFamily::Square { n: 4 }).unwrap();
        let c = dof_counts(&s4, &[1, 2, 3, 4]).unwrap();
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![9, 49, 105, 177]);
        let t4 = generate_structured(MeshFamily::Triangle { n: 4 }).unwrap();
        let c = dof_counts(&t4, &[1, 2, 3, 4]).unwrap();
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![9, 81, 185, 321]);
        let d8 = generate_structured(MeshFamily::Dyadic { n: 8 }).unwrap();
        assert_eq!(GlobalDofMap::new(&d8, 2).unwrap().n_free, 449);
        let h = generate_structured(MeshFamily::Hexagon { n: 8, m: 10 }).unwrap();
        let c = dof_counts(&h, &[1, 2, 3, 4]).unwrap();
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![150, 487, 918, 1443]);
    }

    #[test]
    fn shared_edge_dofs_reversed() {
        let s = generate_structured(MeshFamily::Square { n: 2 }).unwrap();
        let d = GlobalDofMap::new(&s, 4).unwrap();
        // cells 0 and 1 share the vertical edge x = 0.5, y in [0, 0.5]
        let l = DofLayout::new(4, 4);
        let right_of_0: Vec<usize> = (0..3).map(|j| d.cell_full[0][l.edge(1, j)]).collect();
        let left_of_1: Vec<usize> = (0..3).map(|j| d.cell_full[1][l.edge(3, j)]).collect();
        let mut rev = left_of_1.clone();
        rev.reverse();
        assert_eq!(right_of_0, rev);
    }

    #[test]
    fn sparse_ops() {
        let m = SparseSymmetric::from_triplets(
            3,
            vec![(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 2.0), (2, 2, 1.0), (0, 0, 1.0)],
        );
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 0), -2.0);
        assert_eq!(m.get(2, 0), 0.0);
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]), vec![1.0, 0.0, 1.0]);
        let d = m.extract_dense().unwrap();
        assert_eq!(d[(0, 1)], d[(1, 0)]);
        let p = m.permuted(&[2, 0, 1]);
        assert_eq!(p.get(0, 0), 1.0);
        assert_eq!(p.get(1, 2), -2.0);
        let mut out = Vec::new();
        m.write_matrix_market(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n"));
    }

    #[test]
    fn assembled_pencil_is_symmetric_and_finite() {
        let s = generate_structured(MeshFamily::Square { n: 3 }).unwrap();
        let p = assemble(&s, 2, 1.0).unwrap();
        let a = p.a.extract_dense().unwrap();
        assert!(a.iter().all(|x| x.is_finite()));
        let ev = a.symmetric_eigenvalues();
        assert!(ev.min() > 0.0);
    }

    #[test]
    fn p1_triangles_match_fem_stencil() {
        // uniform right-triangle P1: interior stiffness row is the 5-point stencil
        let t = generate_structured(MeshFamily::Triangle { n: 4 }).unwrap();
        let p = assemble(&t, 1, 1.0).unwrap();
        for i in 0..p.n() {
            assert!((p.a.get(i, i) - 4.0).abs() < 1e-12);
        }
    }
}
