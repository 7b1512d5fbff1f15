//! Local enhanced virtual element space of order `k` on one polygon.
//!
//! Degrees of freedom, in local order:
//!
//! 1. values at the vertices (CCW);
//! 2. values at the `k - 1` interior Gauss–Lobatto nodes of each edge,
//!    edge `e` running from vertex `e` to vertex `e + 1`;
//! 3. area-normalized moments `(1/|E|) ∫_E v m_α`, `|α| <= k - 2`, graded-lex.
//!
//! Projector matrices follow the usual VEM matrix notation: `D` holds the
//! DOFs of the scaled monomials, `Π∇* = G⁻¹ B` the coefficient form of the
//! energy projector and `Π⁰* = H⁻¹ C` that of the L² projector.

use nalgebra::DMatrix;

use crate::polygeom::{
    exponents, monomial_index, monomial_moments, poly_dim, ElementGeometry, MomentTable,
    ScaledMonomialBasis,
};
use crate::quadrature::gauss_lobatto;
use crate::{Error, Result};

pub const MAX_DEGREE: usize = 4;

/// Default dofi-dofi stabilization scaling.
pub const DEFAULT_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofLayout {
    pub k: usize,
    pub n_v: usize,
}

impl DofLayout {
    pub fn new(n_v: usize, k: usize) -> Self {
        DofLayout { k, n_v }
    }

    /// Interior nodes per edge.
    pub fn per_edge(&self) -> usize {
        self.k - 1
    }

    /// Internal moments, `dim P_{k-2}`.
    pub fn n_internal(&self) -> usize {
        self.k * (self.k - 1) / 2
    }

    /// `N_E`.
    pub fn n_dofs(&self) -> usize {
        self.n_v + self.n_v * self.per_edge() + self.n_internal()
    }

    pub fn vertex(&self, i: usize) -> usize {
        i
    }

    pub fn edge(&self, e: usize, j: usize) -> usize {
        self.n_v + e * self.per_edge() + j
    }

    pub fn internal(&self, beta: usize) -> usize {
        self.n_v * self.k + beta
    }

    /// DOF index of node `q ∈ 0..=k` on edge `e` (`q = 0, k` are the endpoints).
    pub fn edge_node(&self, e: usize, q: usize) -> usize {
        if q == 0 {
            self.vertex(e)
        } else if q == self.k {
            self.vertex((e + 1) % self.n_v)
        } else {
            self.edge(e, q - 1)
        }
    }
}

/// Parameters `t ∈ (0,1)` of the `k - 1` interior edge nodes.
pub fn edge_node_params(k: usize) -> Vec<f64> {
    let r = gauss_lobatto(k + 1);
    r.nodes[1..k].iter().map(|&x| 0.5 * (x + 1.0)).collect()
}

#[derive(Debug, Clone)]
pub struct LocalVemBlocks {
    pub layout: DofLayout,
    /// `N_E × n_k`: DOFs of the scaled monomials.
    pub d: DMatrix<f64>,
    /// `n_k × N_E`: coefficients of `Π∇ φ_i`.
    pub pnabla_star: DMatrix<f64>,
    /// `N_E × N_E`: `Π∇` acting on DOF vectors, `D Π∇*`.
    pub pnabla: DMatrix<f64>,
    /// `n_k × N_E`: coefficients of `Π⁰ φ_i`.
    pub p0_star: DMatrix<f64>,
    pub a_loc: DMatrix<f64>,
    pub b_loc: DMatrix<f64>,
}

fn element_error(reason: impl Into<String>) -> Error {
    // the caller knows the element index and rewrites it
    Error::Element {
        element: usize::MAX,
        reason: reason.into(),
    }
}

pub(crate) fn tag_element(err: Error, element: usize) -> Error {
    match err {
        Error::Element { reason, .. } => Error::Element { element, reason },
        other => other,
    }
}

/// Energy projector. Returns `(Π∇*, Π∇, D)`.
pub fn build_projector_pinabla(
    geom: &ElementGeometry,
    moments: &MomentTable,
    k: usize,
) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    if !(1..=MAX_DEGREE).contains(&k) {
        return Err(Error::Parameter(format!("degree {k} outside 1..={MAX_DEGREE}")));
    }
    let basis = ScaledMonomialBasis::new(geom, k);
    let layout = DofLayout::new(geom.num_vertices(), k);
    let nk = poly_dim(k);
    let ne = layout.n_dofs();
    let area = geom.area;
    let h = geom.diameter;
    let ex = exponents(k);
    let lobatto = gauss_lobatto(k + 1);
    let params: Vec<f64> = lobatto.nodes.iter().map(|&x| 0.5 * (x + 1.0)).collect();

    let mut d = DMatrix::zeros(ne, nk);
    for (i, &v) in geom.vertices.iter().enumerate() {
        for (a, m) in basis.eval(v).into_iter().enumerate() {
            d[(layout.vertex(i), a)] = m;
        }
    }
    for (e, edge) in geom.edges.iter().enumerate() {
        for j in 0..layout.per_edge() {
            let x = edge.point_at(params[j + 1]);
            for (a, m) in basis.eval(x).into_iter().enumerate() {
                d[(layout.edge(e, j), a)] = m;
            }
        }
    }
    for beta in 0..layout.n_internal() {
        for a in 0..nk {
            d[(layout.internal(beta), a)] = moments.h[(beta, a)] / area;
        }
    }

    // B[α][i] = a^E(φ_i, m_α) for α > 0, plus the constant-mode closure in row 0
    let mut b = DMatrix::zeros(nk, ne);
    for (e, edge) in geom.edges.iter().enumerate() {
        for q in 0..=k {
            let x = edge.point_at(params[q]);
            let w = 0.5 * lobatto.weights[q] * edge.length;
            let dof = layout.edge_node(e, q);
            if k == 1 {
                b[(0, dof)] += w;
            }
            for (a, g) in basis.grad(x).into_iter().enumerate().skip(1) {
                b[(a, dof)] += w * (g[0] * edge.normal[0] + g[1] * edge.normal[1]);
            }
        }
    }
    if k >= 2 {
        b[(0, layout.internal(0))] = area;
        for (a, &(ax, ay)) in ex.iter().enumerate() {
            if ax >= 2 {
                let beta = monomial_index(ax - 2, ay);
                b[(a, layout.internal(beta))] -= (ax * (ax - 1)) as f64 * area / (h * h);
            }
            if ay >= 2 {
                let beta = monomial_index(ax, ay - 2);
                b[(a, layout.internal(beta))] -= (ay * (ay - 1)) as f64 * area / (h * h);
            }
        }
    }

    let g = &b * &d;
    let lu = g.lu();
    let pnabla_star = lu
        .solve(&b)
        .filter(|p| p.iter().all(|x| x.is_finite()))
        .ok_or_else(|| element_error("energy projector system is singular"))?;
    let pnabla = &d * &pnabla_star;
    Ok((pnabla_star, pnabla, d))
}

/// L² projector of the enhanced space: moments up to degree `k - 2` come from
/// the internal DOFs, moments of degree `k - 1` and `k` from `Π∇`.
pub fn build_projector_pi0(
    geom: &ElementGeometry,
    moments: &MomentTable,
    k: usize,
    pnabla_star: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let layout = DofLayout::new(geom.num_vertices(), k);
    let nk = poly_dim(k);
    let ne = layout.n_dofs();
    let n_low = layout.n_internal();
    let hp = &moments.h * pnabla_star;
    let mut c = DMatrix::zeros(nk, ne);
    for a in 0..nk {
        if a < n_low {
            c[(a, layout.internal(a))] = geom.area;
        } else {
            c.row_mut(a).copy_from(&hp.row(a));
        }
    }
    let chol = moments
        .h
        .clone()
        .cholesky()
        .ok_or_else(|| element_error("monomial mass matrix H is not positive definite"))?;
    Ok(refine_left_inverse(chol.solve(&c), d))
}

/// One step `X ← (2I - X D) X` for a computed left inverse of `D`. The
/// defect `X D - I` of a solve is `O(cond · ε)` and the step squares it, so
/// polynomials are reproduced to rounding; the error component on the
/// complement of `range D` is left as it was.
fn refine_left_inverse(x: DMatrix<f64>, d: &DMatrix<f64>) -> DMatrix<f64> {
    let defect = &x * d - DMatrix::<f64>::identity(x.nrows(), x.nrows());
    &x - defect * &x
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// Consistency part `a^E(Π∇u, Π∇v)` plus dofi-dofi stabilization
/// `α (I - Π∇)ᵀ (I - Π∇)`.
pub fn local_stiffness(blocks: &LocalVemBlocks, moments: &MomentTable, alpha: f64) -> DMatrix<f64> {
    let ps = &blocks.pnabla_star;
    let consistency = ps.transpose() * &moments.g_tilde * ps;
    let n = blocks.pnabla.nrows();
    let r = DMatrix::identity(n, n) - &blocks.pnabla;
    symmetrize(consistency + (r.transpose() * r) * alpha)
}

/// `b^E(Π⁰u, Π⁰v)`, with no stabilization term.
pub fn local_mass(blocks: &LocalVemBlocks, moments: &MomentTable) -> DMatrix<f64> {
    let p0 = &blocks.p0_star;
    symmetrize(p0.transpose() * &moments.h * p0)
}

/// Build all local matrices of one element.
pub fn build_local(geom: &ElementGeometry, k: usize, alpha: f64) -> Result<(LocalVemBlocks, MomentTable)> {
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!("stabilization alpha must be positive, got {alpha}")));
    }
    let moments = monomial_moments(geom, k);
    let (pnabla_star, pnabla, d) = build_projector_pinabla(geom, &moments, k)?;
    let p0_star = build_projector_pi0(geom, &moments, k, &pnabla_star, &d)?;
    let mut blocks = LocalVemBlocks {
        layout: DofLayout::new(geom.num_vertices(), k),
        d,
        pnabla_star,
        pnabla,
        p0_star,
        a_loc: DMatrix::zeros(0, 0),
        b_loc: DMatrix::zeros(0, 0),
    };
    blocks.a_loc = local_stiffness(&blocks, &moments, alpha);
    blocks.b_loc = local_mass(&blocks, &moments);
    Ok((blocks, moments))
}

/// DOF vector of a polynomial given by its coefficients in the scaled basis
/// (the rows of `D` combined).
pub fn interpolate_polynomial(blocks: &LocalVemBlocks, coeffs: &[f64]) -> Vec<f64> {
    let c = nalgebra::DVector::from_column_slice(coeffs);
    (&blocks.d * c).iter().copied().collect()
}
