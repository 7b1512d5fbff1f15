//! Kernel detection for the mass matrix and solvers for `A x = λ B x`.
//!
//! `A` is symmetric positive definite and `B` only semidefinite, so both
//! solvers work with the reciprocal pencil `M = L⁻¹ B L⁻ᵀ` (`A = L Lᵀ`):
//! the eigenvalues `μ = 1/λ` of `M` are finite, and the kernel of `B`
//! (the infinite eigenvalues) collapses onto `μ = 0`.

mod dense;
mod envelope;
mod ordering;
mod source;
mod subspace;

pub use dense::{solve_dense, DenseSpectrum};
pub use envelope::{negative_inertia, EnvelopeCholesky, PivotPolicy};
pub use ordering::{bandwidth, reverse_cuthill_mckee};
pub use source::{solve_source, SourceProblem, SourceSolution};
pub use subspace::solve_subspace;

use crate::assembly::SparseSymmetric;
use crate::{Error, Result};

/// Orders above this use subspace iteration unless told otherwise.
pub const DEFAULT_DENSE_LIMIT: usize = 1500;

/// Warn when the spectral gap around the kernel cluster is smaller than this.
pub const GAP_WARN_RATIO: f64 = 1e3;

/// Relative residual bound `‖Ax - λBx‖ <= tol ‖Ax‖` accepted for eigenpairs.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// `dim ker B = N_h - rank B`, counting eigenvalues of `B` below
/// `τ = n · ε · max diag`.
///
/// The count is Sylvester's inertia of `B - τI` from an envelope `L D Lᵀ`
/// factorization in RCM order. A diagonal-threshold pivoted Cholesky of `B`
/// itself misplaces pivots that sit within rounding of `τ`, since the
/// Schur-complement diagonals lose their accuracy to cancellation; the
/// shifted factorization moves every kernel mode a full `τ` below zero.
pub fn kernel_dimension(b: &SparseSymmetric) -> Result<usize> {
    let n = b.n();
    if n == 0 {
        return Ok(0);
    }
    let max_diag = b.diagonal().into_iter().fold(0.0, f64::max);
    if b.diagonal().iter().any(|&d| d < -1e-10 * max_diag) {
        return Err(Error::NotPsd("negative diagonal entry".into()));
    }
    let tol = n as f64 * f64::EPSILON * max_diag;
    let perm = reverse_cuthill_mckee(&b.adjacency());
    negative_inertia(&b.permuted(&perm), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Dense,
    Subspace,
}

#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Number of smallest eigenpairs wanted.
    pub n_eigs: usize,
    /// Use the dense solver up to this order.
    pub dense_limit: usize,
    /// Ritz residual tolerance relative to the dominant `μ`.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            n_eigs: 10,
            dense_limit: DEFAULT_DENSE_LIMIT,
            tol: 1e-11,
            max_iters: 500,
        }
    }
}

/// Smallest eigenpairs of the pencil, ascending, with `Bᵀ`-normalized
/// eigenvectors on the interior DOFs.
#[derive(Debug, Clone)]
pub struct PencilSolution {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖Ax - λBx‖ / ‖Ax‖` per pair.
    pub residuals: Vec<f64>,
    pub solver: SolverKind,
    /// Only available from the dense solver.
    pub spectrum: Option<DenseSpectrum>,
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `‖Ax - λBx‖ / ‖Ax‖`.
pub fn relative_residual(a: &SparseSymmetric, b: &SparseSymmetric, lambda: f64, x: &[f64]) -> f64 {
    let ax = a.matvec(x);
    let bx = b.matvec(x);
    let r: Vec<f64> = ax.iter().zip(&bx).map(|(p, q)| p - lambda * q).collect();
    norm(&r) / norm(&ax)
}

/// Pick the dense or subspace solver by size.
pub fn solve_pencil(a: &SparseSymmetric, b: &SparseSymmetric, opts: &EigenOptions) -> Result<PencilSolution> {
    if a.n() != b.n() {
        return Err(Error::Parameter(format!("pencil orders differ: {} vs {}", a.n(), b.n())));
    }
    if opts.n_eigs == 0 || opts.n_eigs > a.n() {
        return Err(Error::Parameter(format!(
            "requested {} eigenpairs of a pencil of order {}",
            opts.n_eigs,
            a.n()
        )));
    }
    let p = subspace::block_size(opts.n_eigs);
    if a.n() <= opts.dense_limit || a.n() <= 2 * p {
        solve_dense(a, b, opts.n_eigs)
    } else {
        solve_subspace(a, b, opts)
    }
}

/// Exact Dirichlet eigenvalues `(i² + j²) π²` of the unit square, ascending,
/// with multiplicity. Returned divided by `π²`.
pub fn exact_eigenvalues_over_pi2(count: usize) -> Vec<f64> {
    let mut m = 1usize;
    loop {
        let mut v: Vec<usize> = (1..=m)
            .flat_map(|i| (1..=m).map(move |j| i * i + j * j))
            .collect();
        v.sort_unstable();
        // all values <= m² + 1 are complete once m is large enough
        if v.len() >= count && v[count - 1] <= m * m + 1 {
            return v[..count].iter().map(|&x| x as f64).collect();
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_list() {
        let e = exact_eigenvalues_over_pi2(12);
        assert_eq!(e, vec![2.0, 5.0, 5.0, 8.0, 10.0, 10.0, 13.0, 13.0, 17.0, 17.0, 18.0, 20.0]);
    }
}
