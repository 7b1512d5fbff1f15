//! Row-oriented envelope (skyline) Cholesky factorization `A = L Lᵀ`.

use crate::assembly::SparseSymmetric;
use crate::{Error, Result};

/// Row `i` of `L` is stored densely from column `first[i]` to the diagonal.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    n: usize,
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
    /// Number of pivots set to zero (semidefinite mode only).
    pub zero_pivots: usize,
}

/// How to treat non-positive pivots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PivotPolicy {
    /// Fail on any pivot `<= 0`.
    Definite,
    /// Pivots `<= tol` become zero columns; pivots below `-neg_tol` fail.
    Semidefinite { tol: f64, neg_tol: f64 },
}

impl EnvelopeCholesky {
    pub fn factor(a: &SparseSymmetric, policy: PivotPolicy) -> Result<Self> {
        let n = a.n();
        let mut first: Vec<usize> = (0..n).collect();
        for (i, j, _) in a.iter() {
            // stored entry (i, j), i <= j, is L's row j, column i
            first[j] = first[j].min(i);
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0usize;
        for (i, &f) in first.iter().enumerate() {
            start.push(total);
            total += i - f + 1;
        }
        start.push(total);
        let mut values = vec![0.0; total];
        for (i, j, v) in a.iter() {
            values[start[j] + (i - first[j])] = v;
        }

        let mut zero_pivots = 0;
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = values.split_at_mut(start[i]);
            let row_i = &mut rest[..i - fi + 1];
            for j in fi..i {
                let fj = first[j];
                let row_j = &done[start[j]..start[j] + (j - fj + 1)];
                let djj = row_j[j - fj];
                if djj == 0.0 {
                    row_i[j - fi] = 0.0;
                    continue;
                }
                let lo = fi.max(fj);
                let dot: f64 = row_i[lo - fi..j - fi]
                    .iter()
                    .zip(&row_j[lo - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                row_i[j - fi] = (row_i[j - fi] - dot) / djj;
            }
            let sq: f64 = row_i[..i - fi].iter().map(|x| x * x).sum();
            let d = row_i[i - fi] - sq;
            row_i[i - fi] = match policy {
                PivotPolicy::Definite => {
                    if !(d > 0.0) {
                        return Err(Error::Coercivity(format!(
                            "non-positive pivot {d:e} at row {i} of {n}"
                        )));
                    }
                    d.sqrt()
                }
                PivotPolicy::Semidefinite { tol, neg_tol } => {
                    if d < -neg_tol {
                        return Err(Error::NotPsd(format!(
                            "pivot {d:e} at row {i} of {n} is below -{neg_tol:e}"
                        )));
                    }
                    if d <= tol {
                        zero_pivots += 1;
                        0.0
                    } else {
                        d.sqrt()
                    }
                }
            };
        }
        Ok(EnvelopeCholesky {
            n,
            first,
            start,
            values,
            zero_pivots,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored entries of `L`.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[self.start[i]..self.start[i + 1]]
    }

    /// Solve `L y = b` in place.
    pub fn solve_lower(&self, b: &mut [f64]) {
        for i in 0..self.n {
            let fi = self.first[i];
            let r = self.row(i);
            let dot: f64 = r[..i - fi].iter().zip(&b[fi..i]).map(|(x, y)| x * y).sum();
            b[i] = (b[i] - dot) / r[i - fi];
        }
    }

    /// Solve `Lᵀ x = y` in place.
    pub fn solve_upper(&self, y: &mut [f64]) {
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let r = self.row(i);
            let xi = y[i] / r[i - fi];
            y[i] = xi;
            for (yk, l) in y[fi..i].iter_mut().zip(&r[..i - fi]) {
                *yk -= l * xi;
            }
        }
    }

    /// Solve `A x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        self.solve_lower(b);
        self.solve_upper(b);
    }
}

/// Number of negative eigenvalues of `a - shift·I` by Sylvester's law of
/// inertia, from an envelope `L D Lᵀ` factorization without pivoting.
pub fn negative_inertia(a: &SparseSymmetric, shift: f64) -> Result<usize> {
    let n = a.n();
    let mut first: Vec<usize> = (0..n).collect();
    for (i, j, _) in a.iter() {
        first[j] = first[j].min(i);
    }
    let mut start = Vec::with_capacity(n + 1);
    let mut total = 0usize;
    for (i, &f) in first.iter().enumerate() {
        start.push(total);
        total += i - f + 1;
    }
    start.push(total);
    let mut values = vec![0.0; total];
    for (i, j, v) in a.iter() {
        values[start[j] + (i - first[j])] = v;
    }
    let mut d = vec![0.0; n];
    let mut u = Vec::new();
    let mut negative = 0;
    for i in 0..n {
        let fi = first[i];
        let (done, rest) = values.split_at_mut(start[i]);
        let row_i = &mut rest[..i - fi + 1];
        // u_j = (L D)_ij, overwritten by L_ij once d_j is applied
        u.clear();
        u.extend_from_slice(&row_i[..i - fi]);
        for j in fi..i {
            let fj = first[j];
            let row_j = &done[start[j]..start[j] + (j - fj + 1)];
            let lo = fi.max(fj);
            let dot: f64 = u[lo - fi..j - fi]
                .iter()
                .zip(&row_j[lo - fj..j - fj])
                .map(|(x, y)| x * y)
                .sum();
            u[j - fi] -= dot;
        }
        let mut di = row_i[i - fi] - shift;
        for j in fi..i {
            let l = u[j - fi] / d[j];
            di -= l * u[j - fi];
            row_i[j - fi] = l;
        }
        if di == 0.0 || !di.is_finite() {
            return Err(Error::NotPsd(format!("shifted factorization broke down at row {i} of {n}")));
        }
        row_i[i - fi] = di;
        d[i] = di;
        if di < 0.0 {
            negative += 1;
        }
    }
    Ok(negative)
}
