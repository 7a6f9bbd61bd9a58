//! Independent oracles for the integration tests. Everything here is
//! deliberately written with different algorithms than the library: greedy
//! selection by explicit projection instead of Householder downdating,
//! spectra from the Gram matrix instead of one-sided rotations, first-order
//! instead of coordinate methods for the lasso, and exhaustive search where
//! the problem is small enough.

#![allow(dead_code)]

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

/// Greedy residual-norm pivoting by explicit projection. At each step the
/// chosen columns are orthonormalized from scratch (modified Gram-Schmidt)
/// and every remaining column's residual norm is recomputed in full.
/// `penalty` subtracts a per-column amount from the scores.
pub fn greedy_projection_pivots(
    a: ArrayView2<'_, f64>,
    k: usize,
    penalty: Option<&[f64]>,
) -> (Vec<usize>, Vec<f64>) {
    let n = a.ncols();
    let mut basis: Vec<Array1<f64>> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut norms_at_choice = Vec::new();
    for _ in 0..k {
        let mut best_score = f64::NEG_INFINITY;
        let mut best_j = usize::MAX;
        let mut best_norm = 0.0;
        for j in 0..n {
            if chosen.contains(&j) {
                continue;
            }
            let norm = residual_norm(a.column(j), &basis);
            let score = match penalty {
                Some(p) => norm - p[j],
                None => norm,
            };
            // Mirror the library's tie rule: strictly better, or tie within
            // 1e-12 relative resolved to the lowest index (iteration order
            // ascending makes the first hit the winner).
            if score > best_score + 1e-12 * score.abs() {
                best_score = score;
                best_j = j;
                best_norm = norm;
            }
        }
        let residual = residual_vector(a.column(best_j), &basis);
        let rnorm = residual.dot(&residual).sqrt();
        if rnorm > 0.0 {
            basis.push(&residual / rnorm);
        }
        chosen.push(best_j);
        norms_at_choice.push(best_norm);
    }
    (chosen, norms_at_choice)
}

fn residual_vector(col: ArrayView1<'_, f64>, basis: &[Array1<f64>]) -> Array1<f64> {
    let mut r = col.to_owned();
    // Two projection passes for orthogonality at working precision.
    for _ in 0..2 {
        for b in basis {
            let c = r.dot(b);
            r.scaled_add(-c, b);
        }
    }
    r
}

fn residual_norm(col: ArrayView1<'_, f64>, basis: &[Array1<f64>]) -> f64 {
    let r = residual_vector(col, basis);
    r.dot(&r).sqrt()
}

/// Singular values of `a` via a two-sided Jacobi eigensolve of the Gram
/// matrix A^T A (or A A^T, whichever is smaller), descending.
pub fn gram_singular_values(a: ArrayView2<'_, f64>) -> Vec<f64> {
    let (m, n) = a.dim();
    let gram = if n <= m {
        a.t().dot(&a)
    } else {
        a.dot(&a.t())
    };
    let mut eigs = jacobi_eigenvalues(gram);
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigs.into_iter().map(|e| e.max(0.0).sqrt()).collect()
}

/// Eigenvalues of a symmetric matrix by classic two-sided Jacobi sweeps.
pub fn jacobi_eigenvalues(mut s: Array2<f64>) -> Vec<f64> {
    let n = s.nrows();
    for _sweep in 0..200 {
        let mut off = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(s[[i, j]].abs());
            }
        }
        let scale = (0..n).fold(0.0_f64, |m, i| m.max(s[[i, i]].abs()));
        if off <= 1e-15 * scale.max(1e-300) {
            break;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let apq = s[[i, j]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (s[[j, j]] - s[[i, i]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let ski = s[[k, i]];
                    let skj = s[[k, j]];
                    s[[k, i]] = c * ski - sn * skj;
                    s[[k, j]] = sn * ski + c * skj;
                }
                for k in 0..n {
                    let sik = s[[i, k]];
                    let sjk = s[[j, k]];
                    s[[i, k]] = c * sik - sn * sjk;
                    s[[j, k]] = sn * sik + c * sjk;
                }
            }
        }
    }
    (0..n).map(|i| s[[i, i]]).collect()
}

/// Dense solve by Gaussian elimination with partial pivoting. Panics on a
/// numerically singular matrix; oracle use only.
pub fn gaussian_solve(a: &Array2<f64>, b: &Array1<f64>) -> Array1<f64> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(b.len(), n);
    let mut m = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let mut piv = k;
        for i in (k + 1)..n {
            if m[[i, k]].abs() > m[[piv, k]].abs() {
                piv = i;
            }
        }
        assert!(m[[piv, k]].abs() > 1e-300, "oracle matrix is singular");
        if piv != k {
            for j in 0..n {
                let t = m[[k, j]];
                m[[k, j]] = m[[piv, j]];
                m[[piv, j]] = t;
            }
            x.swap(k, piv);
        }
        for i in (k + 1)..n {
            let f = m[[i, k]] / m[[k, k]];
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m[[i, j]] -= f * m[[k, j]];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= m[[i, j]] * x[j];
        }
        x[i] = s / m[[i, i]];
    }
    x
}

/// Least squares through the normal equations, solved by Gaussian
/// elimination. Adequate as an oracle for well-conditioned systems.
pub fn normal_equation_lstsq(a: ArrayView2<'_, f64>, b: ArrayView1<'_, f64>) -> Array1<f64> {
    let ata = a.t().dot(&a);
    let atb = a.t().dot(&b);
    gaussian_solve(&ata, &atb)
}

/// Best k-sparse support by exhaustive search: for every k-subset of
/// columns, fit least squares and keep the subset with the smallest
/// residual. Returns (sorted support, residual norm).
pub fn exhaustive_best_support(
    d: ArrayView2<'_, f64>,
    w: ArrayView1<'_, f64>,
    k: usize,
) -> (Vec<usize>, f64) {
    let n = d.ncols();
    let mut best: (Vec<usize>, f64) = (Vec::new(), f64::INFINITY);
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let sub = gather_columns(d, &subset);
        let coef = normal_equation_lstsq(sub.view(), w);
        let resid = &w.to_owned() - &sub.dot(&coef);
        let rn = resid.dot(&resid).sqrt();
        if rn < best.1 {
            best = (subset.clone(), rn);
        }
        // Next k-combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] != i + n - k {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Multi-task lasso by plain proximal gradient (ISTA) with a fixed step.
/// Slow but entirely first-order; run it long enough and the objective is a
/// reliable reference for the optimum.
pub fn ista_multitask(
    d: ArrayView2<'_, f64>,
    w: ArrayView2<'_, f64>,
    alpha: f64,
    iterations: usize,
) -> Array2<f64> {
    let (r, n) = d.dim();
    let q = w.ncols();
    let rf = r as f64;
    // Lipschitz constant of the smooth part: lambda_max(D^T D) / r.
    let sigma = gram_singular_values(d);
    let lip = sigma[0] * sigma[0] / rf;
    let step = 1.0 / lip;
    let mut s = Array2::<f64>::zeros((n, q));
    for _ in 0..iterations {
        // Gradient of (1/(2r)) ||D s - w||_F^2.
        let resid = d.dot(&s) - w.to_owned();
        let grad = d.t().dot(&resid) / rf;
        let z = &s - &(grad * step);
        // Row-wise group soft threshold at alpha * step.
        for j in 0..n {
            let row = z.row(j);
            let norm = row.dot(&row).sqrt();
            let factor = if norm > alpha * step {
                1.0 - alpha * step / norm
            } else {
                0.0
            };
            for t in 0..q {
                s[[j, t]] = z[[j, t]] * factor;
            }
        }
    }
    s
}

pub fn gather_columns(a: ArrayView2<'_, f64>, cols: &[usize]) -> Array2<f64> {
    let mut out = Array2::<f64>::zeros((a.nrows(), cols.len()));
    for (k, &j) in cols.iter().enumerate() {
        out.column_mut(k).assign(&a.column(j));
    }
    out
}

pub fn frobenius(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Path to a file in the repository `fixtures/` directory.
pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}
