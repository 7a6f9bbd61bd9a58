//! Least squares, pseudoinverse, and the small direct solvers the classifier
//! stack needs.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use super::svd::jacobi_svd;
use crate::error::{Error, Result};

/// Default relative cutoff: singular values below `rcond * sigma_max` are
/// treated as zero.
pub const DEFAULT_RCOND: f64 = 1e-12;

/// Minimum-norm least-squares solution plus conditioning diagnostics.
#[derive(Debug, Clone)]
pub struct LstsqSolution {
    /// One solution column per right-hand-side column.
    pub solution: Array2<f64>,
    /// sigma_max / sigma_min over the retained spectrum; infinite when the
    /// matrix is rank deficient at the cutoff.
    pub condition: f64,
    /// Number of singular values above the cutoff.
    pub rank: usize,
}

/// Minimum-norm `x` minimizing `||A x - b||_2`.
pub fn least_squares(a: ArrayView2<'_, f64>, b: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
    let rhs = b
        .to_owned()
        .into_shape((b.len(), 1))
        .expect("vector reshapes to a column");
    let out = least_squares_multi(a, rhs.view())?;
    Ok(out.solution.column(0).to_owned())
}

/// Minimum-norm least squares with one solve per right-hand-side column,
/// sharing a single SVD of `a`.
pub fn least_squares_multi(
    a: ArrayView2<'_, f64>,
    b: ArrayView2<'_, f64>,
) -> Result<LstsqSolution> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if b.nrows() != m {
        return Err(Error::dim(format!(
            "rhs has {} rows but the matrix has {m}",
            b.nrows()
        )));
    }
    let svd = jacobi_svd(a)?;
    let sigma_max = svd.singular_values[0];
    let cutoff = DEFAULT_RCOND * sigma_max;

    // x = V diag(1/sigma) U^T b over the retained spectrum.
    let ut_b = svd.left_modes.t().dot(&b); // r x l
    let mut scaled = ut_b;
    let mut rank = 0;
    let mut sigma_min = f64::INFINITY;
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            rank += 1;
            sigma_min = sigma_min.min(s);
            scaled.row_mut(k).mapv_inplace(|x| x / s);
        } else {
            scaled.row_mut(k).fill(0.0);
        }
    }
    let solution = svd.right_modes.dot(&scaled); // n x l
    let condition = if rank == 0 || rank < n.min(m) {
        f64::INFINITY
    } else {
        sigma_max / sigma_min
    };
    Ok(LstsqSolution {
        solution,
        condition,
        rank,
    })
}

/// Moore-Penrose pseudoinverse with singular values below
/// `rcond * sigma_max` treated as zero.
pub fn pseudoinverse(a: ArrayView2<'_, f64>, rcond: f64) -> Result<Array2<f64>> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let svd = jacobi_svd(a)?;
    let cutoff = rcond * svd.singular_values[0];
    // A^+ = V diag(1/sigma) U^T
    let mut ut = svd.left_modes.t().to_owned(); // r x m
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            ut.row_mut(k).mapv_inplace(|x| x / s);
        } else {
            ut.row_mut(k).fill(0.0);
        }
    }
    Ok(svd.right_modes.dot(&ut)) // n x m
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub(crate) fn cholesky(a: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::dim("cholesky needs a square matrix".to_string()));
    }
    let mut l = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::SingularMatrix);
                }
                l[[i, j]] = sum.sqrt();
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    Ok(l)
}

/// Solve `L X = B` with L lower triangular (forward substitution).
pub(crate) fn solve_lower(l: &Array2<f64>, b: ArrayView2<'_, f64>) -> Array2<f64> {
    let n = l.nrows();
    let cols = b.ncols();
    let mut x = b.to_owned();
    for c in 0..cols {
        for i in 0..n {
            let mut sum = x[[i, c]];
            for k in 0..i {
                sum -= l[[i, k]] * x[[k, c]];
            }
            x[[i, c]] = sum / l[[i, i]];
        }
    }
    x
}

/// Solve `L^T x = b` with L lower triangular (back substitution).
pub(crate) fn solve_lower_transpose(l: &Array2<f64>, b: ArrayView1<'_, f64>) -> Array1<f64> {
    let n = l.nrows();
    let mut x = b.to_owned();
    for i in (0..n).rev() {
        let mut sum = x[i];
        for k in (i + 1)..n {
            sum -= l[[k, i]] * x[k];
        }
        x[i] = sum / l[[i, i]];
    }
    x
}

/// Orthonormalize the columns of `a` in place with modified Gram-Schmidt,
/// run twice for stability. Columns that cancel to (near) zero are left as
/// zeros; callers feed full-rank sketches.
pub(crate) fn orthonormalize_columns(a: &mut Array2<f64>) {
    let (m, n) = a.dim();
    for _pass in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let proj: f64 = (0..m).map(|i| a[[i, k]] * a[[i, j]]).sum();
                for i in 0..m {
                    a[[i, j]] -= proj * a[[i, k]];
                }
            }
            let norm: f64 = (0..m).map(|i| a[[i, j]] * a[[i, j]]).sum::<f64>().sqrt();
            if norm > 1e-300 {
                for i in 0..m {
                    a[[i, j]] /= norm;
                }
            }
        }
    }
}
