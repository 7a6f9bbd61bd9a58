//! Orthogonal matching pursuit with a full least-squares refit after every
//! atom, so the residual stays orthogonal to the selected subspace.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use super::SparseSolution;
use crate::error::{Error, Result};
use crate::linalg::least_squares;

/// Greedily select at most `n_nonzero` dictionary columns approximating
/// `target`, stopping early once the residual norm drops to `residual_tol`.
///
/// Atoms are scored by `|column . residual| / ||column||`; ties go to the
/// lowest column index. The returned coefficient matrix has one column.
pub fn omp(
    dictionary: ArrayView2<'_, f64>,
    target: ArrayView1<'_, f64>,
    n_nonzero: usize,
    residual_tol: f64,
) -> Result<SparseSolution> {
    let (m, n) = dictionary.dim();
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if target.len() != m {
        return Err(Error::dim(format!(
            "target has {} entries for a dictionary with {} rows",
            target.len(),
            m
        )));
    }
    if n_nonzero == 0 || n_nonzero > n.min(m) {
        return Err(Error::InfeasibleSparsity {
            requested: n_nonzero,
            max: n.min(m),
        });
    }
    let col_norms: Vec<f64> = (0..n)
        .map(|j| {
            let c = dictionary.column(j);
            c.dot(&c).sqrt()
        })
        .collect();
    if col_norms.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroDictionary);
    }

    let mut support: Vec<usize> = Vec::with_capacity(n_nonzero);
    let mut coef = Array1::<f64>::zeros(0);
    let mut residual = target.to_owned();
    let mut converged = false;

    while support.len() < n_nonzero {
        if residual.dot(&residual).sqrt() <= residual_tol {
            converged = true;
            break;
        }
        let mut best = None;
        let mut best_score = 0.0;
        for (j, &norm) in col_norms.iter().enumerate() {
            if norm == 0.0 || support.contains(&j) {
                continue;
            }
            let score = dictionary.column(j).dot(&residual).abs() / norm;
            if score > best_score {
                best_score = score;
                best = Some(j);
            }
        }
        let Some(j) = best else {
            // Residual is orthogonal to every remaining atom.
            break;
        };
        support.push(j);
        let sub = gather_columns(dictionary, &support);
        coef = least_squares(sub.view(), target)?;
        residual = target.to_owned() - sub.dot(&coef);
    }
    if residual.dot(&residual).sqrt() <= residual_tol || support.len() == n_nonzero {
        converged = true;
    }

    let mut s = Array2::<f64>::zeros((n, 1));
    for (k, &j) in support.iter().enumerate() {
        s[[j, 0]] = coef[k];
    }
    let iterations = support.len();
    Ok(SparseSolution::from_coefficients(s, iterations, converged))
}

fn gather_columns(a: ArrayView2<'_, f64>, cols: &[usize]) -> Array2<f64> {
    let mut out = Array2::<f64>::zeros((a.nrows(), cols.len()));
    for (k, &j) in cols.iter().enumerate() {
        out.column_mut(k).assign(&a.column(j));
    }
    out
}
