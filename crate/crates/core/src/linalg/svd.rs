//! Singular value decomposition via one-sided (Hestenes) Jacobi rotations.
//!
//! Rotations are applied to column pairs until all pairs are numerically
//! orthogonal; column norms then give the singular values. Accuracy is close
//! to machine precision, which the downstream pseudoinverse and least-squares
//! paths rely on.

use ndarray::{s, Array1, Array2, ArrayView2};

use crate::error::{Error, Result};

/// Pairwise-orthogonality tolerance: a column pair (i, j) is rotated while
/// |<b_i, b_j>| exceeds this fraction of ||b_i|| * ||b_j||.
const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;

/// Economy SVD factors, singular values in descending order.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Left singular vectors, `rows x r`, orthonormal columns.
    pub left_modes: Array2<f64>,
    /// Singular values, non-negative, descending.
    pub singular_values: Array1<f64>,
    /// Right singular vectors, `cols x r`.
    pub right_modes: Array2<f64>,
}

impl SvdResult {
    /// Keep the leading `r` triplets.
    pub fn truncate(mut self, r: usize) -> SvdResult {
        self.left_modes = self.left_modes.slice(s![.., ..r]).to_owned();
        self.singular_values = self.singular_values.slice(s![..r]).to_owned();
        self.right_modes = self.right_modes.slice(s![.., ..r]).to_owned();
        self
    }

    /// Number of triplets held.
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }
}

/// Top-`r` singular triplets of a dense matrix.
pub fn truncated_svd(a: ArrayView2<'_, f64>, r: usize) -> Result<SvdResult> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let max = m.min(n);
    if r < 1 || r > max {
        return Err(Error::RankTooLarge { requested: r, max });
    }
    Ok(jacobi_svd(a)?.truncate(r))
}

/// Full economy SVD (rank `min(rows, cols)` triplets).
pub(crate) fn jacobi_svd(a: ArrayView2<'_, f64>) -> Result<SvdResult> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if m >= n {
        let mut b = a.to_owned();
        let (u, sigma, v) = one_sided_jacobi(&mut b);
        Ok(SvdResult {
            left_modes: u,
            singular_values: sigma,
            right_modes: v,
        })
    } else {
        // Work on the transpose so the rotated side has the fewer columns.
        let mut b = a.t().to_owned();
        let (u, sigma, v) = one_sided_jacobi(&mut b);
        Ok(SvdResult {
            left_modes: v,
            singular_values: sigma,
            right_modes: u,
        })
    }
}

/// Orthogonalize the columns of `b` (p x q, p >= q) in place. Returns
/// (U p x q, sigma q, V q x q) with `b_input = U * diag(sigma) * V^T`.
fn one_sided_jacobi(b: &mut Array2<f64>) -> (Array2<f64>, Array1<f64>, Array2<f64>) {
    let (p, q) = b.dim();
    debug_assert!(p >= q);
    let mut v = Array2::<f64>::eye(q);

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..q {
            for j in (i + 1)..q {
                let mut aii = 0.0;
                let mut ajj = 0.0;
                let mut aij = 0.0;
                for k in 0..p {
                    let bi = b[[k, i]];
                    let bj = b[[k, j]];
                    aii += bi * bi;
                    ajj += bj * bj;
                    aij += bi * bj;
                }
                if aii == 0.0 || ajj == 0.0 {
                    continue;
                }
                if aij.abs() <= JACOBI_TOL * (aii * ajj).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (ajj - aii) / (2.0 * aij);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..p {
                    let bi = b[[k, i]];
                    let bj = b[[k, j]];
                    b[[k, i]] = c * bi - s * bj;
                    b[[k, j]] = s * bi + c * bj;
                }
                for k in 0..q {
                    let vi = v[[k, i]];
                    let vj = v[[k, j]];
                    v[[k, i]] = c * vi - s * vj;
                    v[[k, j]] = s * vi + c * vj;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Singular values are the column norms; sort descending, stable on ties.
    let sigma: Vec<f64> = (0..q)
        .map(|j| b.column(j).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&a, &c| sigma[c].partial_cmp(&sigma[a]).unwrap().then(a.cmp(&c)));

    let mut u = Array2::<f64>::zeros((p, q));
    let mut v_sorted = Array2::<f64>::zeros((q, q));
    let mut sigma_sorted = Array1::<f64>::zeros(q);
    for (dst, &src) in order.iter().enumerate() {
        sigma_sorted[dst] = sigma[src];
        v_sorted.column_mut(dst).assign(&v.column(src));
        if sigma[src] > 0.0 {
            let inv = 1.0 / sigma[src];
            for k in 0..p {
                u[[k, dst]] = b[[k, src]] * inv;
            }
        }
    }
    complete_zero_columns(&mut u, &sigma_sorted);

    (u, sigma_sorted, v_sorted)
}

/// Replace the columns belonging to zero singular values with an orthonormal
/// completion so U keeps orthonormal columns. Zero values sit at the end of
/// the sorted spectrum, so column `j` only needs projecting against `0..j`.
fn complete_zero_columns(u: &mut Array2<f64>, sigma: &Array1<f64>) {
    let (p, q) = u.dim();
    for j in 0..q {
        if sigma[j] > 0.0 {
            continue;
        }
        'candidates: for cand in 0..p {
            let mut col = vec![0.0; p];
            col[cand] = 1.0;
            // Two projection passes keep the completion orthogonal.
            for _ in 0..2 {
                for other in 0..j {
                    let proj: f64 = (0..p).map(|k| u[[k, other]] * col[k]).sum();
                    for k in 0..p {
                        col[k] -= proj * u[[k, other]];
                    }
                }
            }
            let norm: f64 = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.5 {
                for k in 0..p {
                    u[[k, j]] = col[k] / norm;
                }
                break 'candidates;
            }
        }
    }
}
