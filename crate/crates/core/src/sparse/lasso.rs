//! Multi-task lasso solved by block coordinate descent. The group penalty on
//! coefficient rows forces every task to share one sensor support.
//!
//! Objective, for `D` of size `r x n` and targets `W` of size `r x q`:
//!
//! ```text
//! f(S) = (1 / (2 r)) * ||D S - W||_F^2 + alpha * sum_j ||S[j, :]||_2
//! ```

use ndarray::{Array1, Array2, ArrayView2};

use super::SparseSolution;
use crate::error::{Error, Result};

/// Minimize the multi-task lasso objective over `S` (`n x q`).
///
/// One iteration is a full sweep over coefficient rows. Convergence is
/// declared when the largest coefficient change in a sweep drops below
/// `tol * max(1, ||S||_max)`.
pub fn multitask_lasso(
    dictionary: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
    alpha: f64,
    max_iter: usize,
    tol: f64,
) -> Result<SparseSolution> {
    let (r, n) = check_problem(dictionary, targets)?;
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha { alpha });
    }
    let q = targets.ncols();
    let rf = r as f64;
    let col_sq: Vec<f64> = (0..n)
        .map(|j| {
            let c = dictionary.column(j);
            c.dot(&c)
        })
        .collect();

    let mut s = Array2::<f64>::zeros((n, q));
    let mut residual = targets.to_owned();
    let mut converged = false;
    let mut sweeps = 0;
    #[cfg(debug_assertions)]
    let mut prev_objective = f64::INFINITY;

    for _ in 0..max_iter {
        sweeps += 1;
        let mut max_change = 0.0_f64;
        let mut max_coef = 0.0_f64;
        for (j, &csq) in col_sq.iter().enumerate() {
            if csq == 0.0 {
                continue;
            }
            let d = dictionary.column(j);
            let old = s.row(j).to_owned();
            // z = d_j^T (residual + d_j old) without forming the rank-1 term.
            let mut z = d.dot(&residual);
            z.scaled_add(csq, &old);
            let z_norm = z.dot(&z).sqrt();
            let new = if z_norm <= alpha * rf {
                Array1::<f64>::zeros(q)
            } else {
                z * ((1.0 - alpha * rf / z_norm) / csq)
            };
            let diff = &old - &new;
            let step = diff.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if step > 0.0 {
                for (i, di) in d.iter().enumerate() {
                    residual.row_mut(i).scaled_add(*di, &diff);
                }
                s.row_mut(j).assign(&new);
            }
            max_change = max_change.max(step);
            max_coef = new.iter().fold(max_coef, |m, v| m.max(v.abs()));
        }
        #[cfg(debug_assertions)]
        {
            let objective = objective_from_residual(&residual, &s, alpha, rf);
            debug_assert!(
                objective <= prev_objective + 1e-12 * prev_objective.abs().max(1.0),
                "objective rose from {prev_objective} to {objective}"
            );
            prev_objective = objective;
        }
        if max_change <= tol * max_coef.max(1.0) {
            converged = true;
            break;
        }
    }

    Ok(SparseSolution::from_coefficients(s, sweeps, converged))
}

/// Smallest `alpha` for which the all-zero solution is optimal.
pub fn multitask_alpha_max(
    dictionary: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
) -> Result<f64> {
    let (r, n) = check_problem(dictionary, targets)?;
    let rf = r as f64;
    let mut best = 0.0_f64;
    for j in 0..n {
        let z = dictionary.column(j).dot(&targets);
        best = best.max(z.dot(&z).sqrt() / rf);
    }
    Ok(best)
}

/// Value of the multi-task lasso objective at `s`.
pub fn multitask_objective(
    dictionary: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
    s: &Array2<f64>,
    alpha: f64,
) -> Result<f64> {
    let (r, n) = check_problem(dictionary, targets)?;
    if s.dim() != (n, targets.ncols()) {
        return Err(Error::dim(format!(
            "coefficients are {:?}, expected ({}, {})",
            s.dim(),
            n,
            targets.ncols()
        )));
    }
    let residual = targets.to_owned() - dictionary.dot(s);
    Ok(objective_from_residual(&residual, s, alpha, r as f64))
}

fn objective_from_residual(residual: &Array2<f64>, s: &Array2<f64>, alpha: f64, rf: f64) -> f64 {
    let fit: f64 = residual.iter().map(|v| v * v).sum();
    let penalty: f64 = s
        .rows()
        .into_iter()
        .map(|row| row.dot(&row).sqrt())
        .sum();
    fit / (2.0 * rf) + alpha * penalty
}

fn check_problem(
    dictionary: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
) -> Result<(usize, usize)> {
    let (r, n) = dictionary.dim();
    if r == 0 || n == 0 || targets.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if targets.nrows() != r {
        return Err(Error::dim(format!(
            "targets have {} rows for a dictionary with {} rows",
            targets.nrows(),
            r
        )));
    }
    Ok((r, n))
}
