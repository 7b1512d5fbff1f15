use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dense::normalize_b;
use super::{relative_residual, reverse_cuthill_mckee, EigenOptions, EnvelopeCholesky, PencilSolution, PivotPolicy, SolverKind};
use crate::assembly::SparseSymmetric;
use crate::{Error, Result};

/// Block size for `wanted` eigenpairs; the slack keeps the convergence
/// factor `λ_wanted / λ_{p+1}` small and covers clusters.
pub(crate) fn block_size(wanted: usize) -> usize {
    2 * wanted + 8
}

struct ReciprocalOperator {
    chol: EnvelopeCholesky,
    b: SparseSymmetric,
}

impl ReciprocalOperator {
    /// `L⁻¹ B L⁻ᵀ y`.
    fn apply(&self, y: &[f64]) -> Vec<f64> {
        let mut t = y.to_vec();
        self.chol.solve_upper(&mut t);
        let mut z = self.b.matvec(&t);
        self.chol.solve_lower(&mut z);
        z
    }

    fn apply_block(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let cols: Vec<Vec<f64>> = (0..y.ncols())
            .into_par_iter()
            .map(|j| self.apply(y.column(j).as_slice()))
            .collect();
        DMatrix::from_fn(y.nrows(), y.ncols(), |i, j| cols[j][i])
    }
}

fn orthonormalize(m: DMatrix<f64>) -> DMatrix<f64> {
    let p = m.ncols();
    let qr = m.qr();
    let q = qr.q();
    q.columns(0, p).into_owned()
}

/// Subspace iteration with Rayleigh–Ritz on `M = L⁻¹ P B Pᵀ L⁻ᵀ`, where `P`
/// is the RCM permutation and `P A Pᵀ = L Lᵀ` an envelope factorization.
pub fn solve_subspace(a: &SparseSymmetric, b: &SparseSymmetric, opts: &EigenOptions) -> Result<PencilSolution> {
    let n = a.n();
    let wanted = opts.n_eigs;
    let p = block_size(wanted).min(n);
    let perm = reverse_cuthill_mckee(&a.adjacency());
    let ap = a.permuted(&perm);
    let chol = EnvelopeCholesky::factor(&ap, PivotPolicy::Definite)?;
    log::debug!("envelope factor: n = {n}, stored entries = {}", chol.envelope_size());
    let op = ReciprocalOperator {
        chol,
        b: b.permuted(&perm),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut y = orthonormalize(DMatrix::from_fn(n, p, |_, _| rng.gen::<f64>() - 0.5));
    let mut converged = false;
    let mut theta = Vec::new();
    let mut ritz = DMatrix::zeros(n, p);
    for iter in 0..opts.max_iters {
        let w = op.apply_block(&y);
        let h = y.transpose() * &w;
        let h = (&h + h.transpose()) * 0.5;
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let v = DMatrix::from_fn(p, p, |i, j| eig.eigenvectors[(i, order[j])]);
        theta = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        ritz = &y * &v;
        let mw = &w * &v;
        let scale = theta[0].abs();
        let worst = (0..wanted)
            .map(|j| (mw.column(j) - ritz.column(j) * theta[j]).norm())
            .fold(0.0, f64::max);
        log::trace!("subspace iteration {iter}: worst residual {:.3e}", worst / scale);
        if worst <= opts.tol * scale {
            converged = true;
            break;
        }
        y = orthonormalize(mw);
    }
    if !converged {
        return Err(Error::NoConvergence(format!(
            "subspace iteration for {wanted} eigenpairs of order {n} did not converge in {} iterations",
            opts.max_iters
        )));
    }

    let mut eigenvalues = Vec::with_capacity(wanted);
    let mut eigenvectors = Vec::with_capacity(wanted);
    let mut residuals = Vec::with_capacity(wanted);
    for j in 0..wanted {
        if !(theta[j] > 0.0) {
            return Err(Error::NoConvergence(format!("Ritz value {j} is not positive")));
        }
        let mut t = ritz.column(j).iter().copied().collect::<Vec<_>>();
        op.chol.solve_upper(&mut t);
        let mut x = vec![0.0; n];
        for (new, &old) in perm.iter().enumerate() {
            x[old] = t[new];
        }
        let x = normalize_b(b, x);
        let lambda = 1.0 / theta[j];
        let r = relative_residual(a, b, lambda, &x);
        if r > super::RESIDUAL_TOL {
            return Err(Error::NoConvergence(format!(
                "eigenpair {j} has relative residual {r:e}"
            )));
        }
        eigenvalues.push(lambda);
        eigenvectors.push(x);
        residuals.push(r);
    }
    Ok(PencilSolution {
        eigenvalues,
        eigenvectors,
        residuals,
        solver: SolverKind::Subspace,
        spectrum: None,
    })
}
