//! Symmetric eigendecomposition by cyclic two-sided Jacobi rotations.

use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) and matching eigenvector columns of a symmetric
/// matrix. The input is symmetrized as `(A + A^T) / 2` before iteration.
pub fn symmetric_eigen(a: ArrayView2<'_, f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if m != n {
        return Err(Error::dim(format!("symmetric_eigen needs square input, got {m}x{n}")));
    }

    let mut s = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            s[[i, j]] = 0.5 * (a[[i, j]] + a[[j, i]]);
        }
    }
    let mut v = Array2::<f64>::eye(n);

    let scale = (0..n).map(|i| s[[i, i]].abs()).fold(0.0_f64, f64::max).max(1e-300);
    let stop = 1e-14 * scale;

    for _sweep in 0..MAX_SWEEPS {
        let mut max_off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(s[[p, q]].abs());
            }
        }
        if max_off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = s[[p, q]];
                if apq.abs() <= stop * 1e-2 {
                    continue;
                }
                let theta = (s[[q, q]] - s[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                // Rotate rows/columns p and q of S.
                for k in 0..n {
                    let skp = s[[k, p]];
                    let skq = s[[k, q]];
                    s[[k, p]] = c * skp - sn * skq;
                    s[[k, q]] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let spk = s[[p, k]];
                    let sqk = s[[q, k]];
                    s[[p, k]] = c * spk - sn * sqk;
                    s[[q, k]] = sn * spk + c * sqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - sn * vkq;
                    v[[k, q]] = sn * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| s[[i, i]]).collect();
    order.sort_by(|&a, &b| diag[b].partial_cmp(&diag[a]).unwrap().then(a.cmp(&b)));

    let mut values = Array1::<f64>::zeros(n);
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = diag[src];
        vectors.column_mut(dst).assign(&v.column(src));
    }
    Ok((values, vectors))
}
