//! Householder QR with greedy column pivoting.
//!
//! At step k the remaining column with the largest residual 2-norm (after
//! projecting out the pivots chosen so far) becomes the next pivot; ties
//! within `PIVOT_TIE_REL` go to the lowest column index. An optional
//! per-column penalty turns the same loop into the cost-sensitive variant
//! used by the optimizers.

use ndarray::ArrayView2;

use crate::error::{Error, Result};

/// Relative tolerance under which two pivot scores count as tied.
pub const PIVOT_TIE_REL: f64 = 1e-12;

/// When a downdated squared column norm falls below this fraction of the
/// value it had at its last fresh computation, recompute it from the matrix
/// to guard against cancellation.
const NORM_REFRESH_RATIO: f64 = 1e-6;

/// Pivot order and diagonal magnitudes from a column-pivoted QR run.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotedQrResult {
    /// Chosen column indices, in selection order.
    pub pivots: Vec<usize>,
    /// |R_kk| for each pivot step, i.e. the residual norm of the chosen
    /// column at the moment it was selected.
    pub r_diagonal: Vec<f64>,
}

/// Column-pivoted Householder QR, stopping after `max_pivots` pivots.
pub fn pivoted_qr(a: ArrayView2<'_, f64>, max_pivots: usize) -> Result<PivotedQrResult> {
    pivoted_qr_with_penalty(a, max_pivots, None)
}

/// Greedy pivoted QR where the step-k selection score of a remaining column
/// `j` is `residual_norm_j - penalty[j]`. `penalty = None` is plain QR;
/// index the penalty by original column position.
pub(crate) fn pivoted_qr_with_penalty(
    a: ArrayView2<'_, f64>,
    max_pivots: usize,
    penalty: Option<&[f64]>,
) -> Result<PivotedQrResult> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if max_pivots > m.min(n) {
        return Err(Error::MaxPivotsTooLarge {
            requested: max_pivots,
            max: m.min(n),
        });
    }
    if let Some(p) = penalty {
        if p.len() != n {
            return Err(Error::dim(format!(
                "penalty length {} does not match {} columns",
                p.len(),
                n
            )));
        }
    }

    // Work on a copy with one matrix column per contiguous row.
    let mut w = ndarray::Array2::<f64>::zeros((n, m));
    w.assign(&a.t());
    let mut perm: Vec<usize> = (0..n).collect();
    let mut norms_sq: Vec<f64> = (0..n).map(|j| dot(w.row(j).as_slice().unwrap(), w.row(j).as_slice().unwrap())).collect();
    let mut fresh_sq = norms_sq.clone();

    let mut pivots = Vec::with_capacity(max_pivots);
    let mut r_diagonal = Vec::with_capacity(max_pivots);

    for k in 0..max_pivots {
        // Refresh norms that have downdated far enough to be untrustworthy.
        for j in k..n {
            if fresh_sq[j] > 0.0 && norms_sq[j] < NORM_REFRESH_RATIO * fresh_sq[j] {
                let row = w.row(j);
                let col = &row.as_slice().unwrap()[k..];
                let recomputed = dot(col, col);
                norms_sq[j] = recomputed;
                fresh_sq[j] = recomputed;
            }
        }

        let score = |j: usize| -> f64 {
            let norm = norms_sq[j].max(0.0).sqrt();
            match penalty {
                Some(p) => norm - p[perm[j]],
                None => norm,
            }
        };

        let mut best = f64::NEG_INFINITY;
        for j in k..n {
            let s = score(j);
            if s > best {
                best = s;
            }
        }
        // Lowest index within the tie tolerance of the best score wins.
        let cutoff = best - PIVOT_TIE_REL * best.abs();
        let mut chosen = k;
        for j in k..n {
            if score(j) >= cutoff {
                chosen = j;
                break;
            }
        }

        if chosen != k {
            swap_rows(&mut w, k, chosen);
            perm.swap(k, chosen);
            norms_sq.swap(k, chosen);
            fresh_sq.swap(k, chosen);
        }

        // Householder reflector annihilating rows k+1..m of the pivot column.
        let alpha = {
            let row = w.row(k);
            let col = &row.as_slice().unwrap()[k..];
            dot(col, col).sqrt()
        };
        pivots.push(perm[k]);
        r_diagonal.push(alpha);

        if alpha > 0.0 {
            let sign = if w[[k, k]] >= 0.0 { 1.0 } else { -1.0 };
            let mut v: Vec<f64> = w.row(k).as_slice().unwrap()[k..].to_vec();
            v[0] += sign * alpha;
            let vtv = dot(&v, &v);
            if vtv > 0.0 {
                let beta = 2.0 / vtv;
                for j in (k + 1)..n {
                    let col = &mut w.row_mut(j).into_slice().unwrap()[k..];
                    let s = dot(&v, col);
                    let factor = beta * s;
                    for (c, vv) in col.iter_mut().zip(v.iter()) {
                        *c -= factor * vv;
                    }
                }
            }
            let col_k = &mut w.row_mut(k).into_slice().unwrap()[k..];
            col_k[0] = -sign * alpha;
            for c in col_k.iter_mut().skip(1) {
                *c = 0.0;
            }
        }

        // Downdate running squared norms by the new row-k component.
        for j in (k + 1)..n {
            let head = w[[j, k]];
            norms_sq[j] = (norms_sq[j] - head * head).max(0.0);
        }
    }

    Ok(PivotedQrResult { pivots, r_diagonal })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn swap_rows(w: &mut ndarray::Array2<f64>, i: usize, j: usize) {
    let cols = w.ncols();
    for c in 0..cols {
        let tmp = w[[i, c]];
        w[[i, c]] = w[[j, c]];
        w[[j, c]] = tmp;
    }
}
