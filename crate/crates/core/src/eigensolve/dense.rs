use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::{Mat, Par, Side};

use super::{relative_residual, PencilSolution, SolverKind, GAP_WARN_RATIO};
use crate::assembly::SparseSymmetric;
use crate::{Error, Result};

/// Full spectrum summary of `M = L⁻¹ B L⁻ᵀ` from the dense solver.
#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    /// Eigenvalues of `M`, descending.
    pub mu: Vec<f64>,
    /// Eigenvalues of `M` treated as zero: `|μ| <= n ε μ_max`.
    pub kernel_dim: usize,
    /// Smallest `μ` above the threshold over the largest `|μ|` inside it.
    pub gap_ratio: f64,
}

impl DenseSpectrum {
    pub fn gap_is_clear(&self) -> bool {
        self.gap_ratio >= GAP_WARN_RATIO
    }
}

fn to_dense(m: &SparseSymmetric) -> Result<Mat<f64>> {
    m.extract_dense_check()?;
    let mut d = Mat::<f64>::zeros(m.n(), m.n());
    for (i, j, v) in m.iter() {
        d[(i, j)] = v;
        d[(j, i)] = v;
    }
    Ok(d)
}

/// Dense generalized solve through the Cholesky factor of `A`.
pub fn solve_dense(a: &SparseSymmetric, b: &SparseSymmetric, n_eigs: usize) -> Result<PencilSolution> {
    let n = a.n();
    let par = Par::Seq;
    let ad = to_dense(a)?;
    let llt = ad
        .llt(Side::Lower)
        .map_err(|_| Error::Coercivity(format!("stiffness matrix of order {n} is not positive definite")))?;
    let l = llt.L();
    let mut x = to_dense(b)?;
    solve_lower_triangular_in_place(l, x.as_mut(), par);
    let mut m = x.transpose().to_owned();
    solve_lower_triangular_in_place(l, m.as_mut(), par);
    let m = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let eig = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("dense symmetric eigensolver: {e:?}")))?;
    let s = eig.S().column_vector();
    // descending μ
    let order: Vec<usize> = (0..n).rev().collect();
    let mu: Vec<f64> = order.iter().map(|&i| s[i]).collect();

    let mu_max = mu[0];
    if !(mu_max > 0.0) {
        return Err(Error::NotPsd("mass matrix has no positive eigenvalue".into()));
    }
    let tau = n as f64 * f64::EPSILON * mu_max;
    if let Some(&neg) = mu.iter().find(|&&m| m < -tau) {
        return Err(Error::NotPsd(format!(
            "pencil has eigenvalue 1/λ = {neg:e} below -{tau:e}"
        )));
    }
    let inside: Vec<f64> = mu.iter().copied().filter(|m| m.abs() <= tau).collect();
    let above_min = mu.iter().copied().filter(|&m| m > tau).fold(f64::INFINITY, f64::min);
    let kernel_dim = inside.len();
    let gap_ratio = if kernel_dim == 0 {
        above_min / tau
    } else {
        let worst = inside.iter().fold(0.0f64, |acc, m| acc.max(m.abs()));
        above_min / worst.max(f64::EPSILON * mu_max)
    };
    if gap_ratio < GAP_WARN_RATIO {
        log::warn!("kernel cluster of B is not well separated: gap ratio {gap_ratio:.3e}");
    }
    if n_eigs > n - kernel_dim {
        return Err(Error::Parameter(format!(
            "only {} finite eigenvalues exist, {n_eigs} requested",
            n - kernel_dim
        )));
    }

    let mut y = Mat::<f64>::from_fn(n, n_eigs, |i, j| eig.U()[(i, order[j])]);
    solve_upper_triangular_in_place(l.transpose(), y.as_mut(), par);
    let mut eigenvalues = Vec::with_capacity(n_eigs);
    let mut eigenvectors = Vec::with_capacity(n_eigs);
    let mut residuals = Vec::with_capacity(n_eigs);
    for j in 0..n_eigs {
        let lambda = 1.0 / mu[j];
        let xs = normalize_b(b, (0..n).map(|i| y[(i, j)]).collect());
        residuals.push(relative_residual(a, b, lambda, &xs));
        eigenvalues.push(lambda);
        eigenvectors.push(xs);
    }
    Ok(PencilSolution {
        eigenvalues,
        eigenvectors,
        residuals,
        solver: SolverKind::Dense,
        spectrum: Some(DenseSpectrum {
            mu,
            kernel_dim,
            gap_ratio,
        }),
    })
}

/// Scale so that `xᵀ B x = 1`, with the largest component positive.
pub(crate) fn normalize_b(b: &SparseSymmetric, mut x: Vec<f64>) -> Vec<f64> {
    let bx = b.matvec(&x);
    let s = super::dot(&x, &bx).sqrt();
    let big = x.iter().copied().fold(0.0f64, |a, v| if v.abs() > a.abs() { v } else { a });
    let s = if big < 0.0 { -s } else { s };
    if s != 0.0 {
        for v in x.iter_mut() {
            *v /= s;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> SparseSymmetric {
        SparseSymmetric::from_triplets(v.len(), v.iter().enumerate().map(|(i, &x)| (i, i, x)).collect())
    }

    #[test]
    fn diagonal_pencil_with_kernel() {
        let a = diag(&[1.0, 2.0, 3.0, 4.0]);
        let b = diag(&[1.0, 0.0, 1.0, 0.0]);
        let s = solve_dense(&a, &b, 2).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-14);
        let sp = s.spectrum.unwrap();
        assert_eq!(sp.kernel_dim, 2);
        assert!(sp.gap_is_clear());
        assert!(solve_dense(&a, &b, 3).is_err());
    }

    #[test]
    fn indefinite_stiffness_is_coercivity_error() {
        let a = diag(&[1.0, -1.0]);
        let b = diag(&[1.0, 1.0]);
        assert!(matches!(solve_dense(&a, &b, 1), Err(Error::Coercivity(_))));
    }
}
