use nalgebra::DVector;
use rayon::prelude::*;

use super::{reverse_cuthill_mckee, EnvelopeCholesky, PivotPolicy};
use crate::assembly::{assemble, GlobalDofMap};
use crate::mesh::PolygonalMesh;
use crate::polygeom::{polygon_quadrature, ScaledMonomialBasis};
use crate::vem::{build_local, tag_element, LocalVemBlocks};
use crate::{Point, Result};

/// `-Δu = f` in the square, `u = 0` on the boundary, with known `u`.
pub struct SourceProblem<'a> {
    pub f: &'a (dyn Fn(Point) -> f64 + Sync),
    pub u: &'a (dyn Fn(Point) -> f64 + Sync),
    pub grad_u: &'a (dyn Fn(Point) -> Point + Sync),
}

#[derive(Debug, Clone)]
pub struct SourceSolution {
    pub n_dofs: usize,
    pub h_max: f64,
    /// Broken seminorm `|u - Π∇u_h|_{1,h}`.
    pub h1_error: f64,
    /// `‖u - Π⁰u_h‖_0`.
    pub l2_error: f64,
    /// Interior DOF values.
    pub dofs: Vec<f64>,
}

fn polynomial(basis: &ScaledMonomialBasis, coeffs: &DVector<f64>, x: Point) -> (f64, Point) {
    let v: f64 = basis.eval(x).iter().zip(coeffs.iter()).map(|(m, c)| m * c).sum();
    let g = basis
        .grad(x)
        .iter()
        .zip(coeffs.iter())
        .fold([0.0, 0.0], |acc, (g, c)| [acc[0] + c * g[0], acc[1] + c * g[1]]);
    (v, g)
}

fn local(mesh: &PolygonalMesh, c: usize, k: usize, alpha: f64) -> Result<(LocalVemBlocks, ScaledMonomialBasis)> {
    let geom = mesh.cell_geometry(c);
    let (blocks, _) = build_local(&geom, k, alpha).map_err(|e| tag_element(e, c))?;
    Ok((blocks, ScaledMonomialBasis::new(&geom, k)))
}

/// Solve the source problem with the load `∫ f Π⁰φ_i` and report errors of
/// the projected discrete solution.
pub fn solve_source(mesh: &PolygonalMesh, k: usize, alpha: f64, problem: &SourceProblem) -> Result<SourceSolution> {
    let pencil = assemble(mesh, k, alpha)?;
    let dofs: &GlobalDofMap = &pencil.dofs;
    let n = dofs.n_free;
    let quad_degree = 2 * k + 6;

    let loads: Vec<Result<Vec<(usize, f64)>>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let (blocks, basis) = local(mesh, c, k, alpha)?;
            let geom = mesh.cell_geometry(c);
            let mut fm = DVector::zeros(basis.dim());
            for (x, w) in polygon_quadrature(&geom, quad_degree) {
                let fx = (problem.f)(x) * w;
                for (a, m) in basis.eval(x).into_iter().enumerate() {
                    fm[a] += fx * m;
                }
            }
            let fl = blocks.p0_star.transpose() * fm;
            Ok(dofs.cell_dofs[c]
                .iter()
                .zip(fl.iter())
                .filter_map(|(g, &v)| g.map(|g| (g, v)))
                .collect())
        })
        .collect();
    let mut rhs = vec![0.0; n];
    for l in loads {
        for (g, v) in l? {
            rhs[g] += v;
        }
    }

    let perm = reverse_cuthill_mckee(&pencil.a.adjacency());
    let chol = EnvelopeCholesky::factor(&pencil.a.permuted(&perm), PivotPolicy::Definite)?;
    let mut t: Vec<f64> = perm.iter().map(|&old| rhs[old]).collect();
    chol.solve(&mut t);
    let mut uh = vec![0.0; n];
    for (new, &old) in perm.iter().enumerate() {
        uh[old] = t[new];
    }

    let errs: Vec<Result<(f64, f64)>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let (blocks, basis) = local(mesh, c, k, alpha)?;
            let geom = mesh.cell_geometry(c);
            let ul = DVector::from_iterator(
                dofs.cell_dofs[c].len(),
                dofs.cell_dofs[c].iter().map(|g| g.map_or(0.0, |g| uh[g])),
            );
            let cn = &blocks.pnabla_star * &ul;
            let c0 = &blocks.p0_star * &ul;
            let (mut e1, mut e0) = (0.0, 0.0);
            for (x, w) in polygon_quadrature(&geom, quad_degree) {
                let (_, g) = polynomial(&basis, &cn, x);
                let (v0, _) = polynomial(&basis, &c0, x);
                let gu = (problem.grad_u)(x);
                e1 += w * ((gu[0] - g[0]).powi(2) + (gu[1] - g[1]).powi(2));
                e0 += w * ((problem.u)(x) - v0).powi(2);
            }
            Ok((e1, e0))
        })
        .collect();
    let (mut e1, mut e0) = (0.0, 0.0);
    for e in errs {
        let (a, b) = e?;
        e1 += a;
        e0 += b;
    }
    Ok(SourceSolution {
        n_dofs: n,
        h_max: mesh.h_max(),
        h1_error: e1.sqrt(),
        l2_error: e0.sqrt(),
        dofs: uh,
    })
}
