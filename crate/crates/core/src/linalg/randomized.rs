//! Randomized SVD: Gaussian range finder with optional subspace iterations,
//! then an exact SVD of the small projected matrix.

use ndarray::ArrayView2;

use super::solve::orthonormalize_columns;
use super::svd::{jacobi_svd, SvdResult};
use crate::error::{Error, Result};
use crate::utils::{streams, SeededRng};

/// Top-`r` singular triplets from a seeded Gaussian sketch. Deterministic for
/// a fixed seed: the test matrix is drawn from the ChaCha20 stream in
/// row-major fill order.
pub fn randomized_svd(
    a: ArrayView2<'_, f64>,
    r: usize,
    n_oversamples: usize,
    n_power_iters: usize,
    seed: u64,
) -> Result<SvdResult> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let max = m.min(n);
    if r < 1 || r + n_oversamples > max {
        return Err(Error::RankTooLarge {
            requested: r + n_oversamples,
            max,
        });
    }

    let l = r + n_oversamples;
    let mut rng = SeededRng::with_stream(seed, streams::RANGE_FINDER);
    let omega = rng.normal_matrix(n, l);

    let mut q = a.dot(&omega); // m x l
    orthonormalize_columns(&mut q);
    for _ in 0..n_power_iters {
        let mut z = a.t().dot(&q); // n x l
        orthonormalize_columns(&mut z);
        q = a.dot(&z); // m x l
        orthonormalize_columns(&mut q);
    }

    let b = q.t().dot(&a); // l x n
    let small = jacobi_svd(b.view())?;
    let left = q.dot(&small.left_modes); // m x min(l, n)
    Ok(SvdResult {
        left_modes: left,
        singular_values: small.singular_values,
        right_modes: small.right_modes,
    }
    .truncate(r))
}
