//! Sparse regression back ends for sensor selection: orthogonal matching
//! pursuit for a single target vector and block-coordinate multi-task lasso
//! for shared row sparsity across several targets.

mod lasso;
mod omp;

pub use lasso::{multitask_alpha_max, multitask_lasso, multitask_objective};
pub use omp::omp;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

/// Rows with L2 norm at or below this are treated as exactly zero when the
/// row support is extracted.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Output of a sparse solver: an `n x q` coefficient matrix whose nonzero
/// rows mark selected dictionary atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSolution {
    /// Coefficients, one row per dictionary atom, one column per task.
    pub s: Array2<f64>,
    /// Indices of rows with L2 norm above [`SUPPORT_TOL`], ascending.
    pub row_support: Vec<usize>,
    /// Atoms added (OMP) or sweeps executed (lasso).
    pub iterations: usize,
    /// False when the solver hit its iteration budget before its stopping
    /// rule fired.
    pub converged: bool,
}

impl SparseSolution {
    pub(crate) fn from_coefficients(s: Array2<f64>, iterations: usize, converged: bool) -> Self {
        let row_support = row_support(&s);
        SparseSolution {
            s,
            row_support,
            iterations,
            converged,
        }
    }
}

/// Indices of rows of `s` with L2 norm above [`SUPPORT_TOL`].
pub fn row_support(s: &Array2<f64>) -> Vec<usize> {
    s.rows()
        .into_iter()
        .enumerate()
        .filter(|(_, row)| row.dot(row).sqrt() > SUPPORT_TOL)
        .map(|(j, _)| j)
        .collect()
}
