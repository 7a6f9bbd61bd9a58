//! Deterministic synthetic datasets used by fixtures, tests, and the CLI.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::utils::{streams, SeededRng};

/// `(x_train, y_train, x_test, y_test)` as produced by [`train_test_split`].
pub type LabeledSplit = (Array2<f64>, Vec<usize>, Array2<f64>, Vec<usize>);

/// Monomial snapshot matrix: row i holds x^i evaluated on `n_points`
/// equispaced points of [0, 1]. Shape `r x n_points`, so each basis function
/// acts as one training example.
pub fn vandermonde(n_points: usize, r: usize) -> Result<Array2<f64>> {
    if n_points < 2 || r < 1 {
        return Err(Error::InvalidParams(format!(
            "vandermonde needs n_points >= 2 and r >= 1, got {n_points}, {r}"
        )));
    }
    let grid = equispaced_grid(n_points);
    let mut out = Array2::<f64>::zeros((r, n_points));
    for (j, &x) in grid.iter().enumerate() {
        let mut power = 1.0;
        for i in 0..r {
            out[[i, j]] = power;
            power *= x;
        }
    }
    Ok(out)
}

/// Equispaced points on [0, 1] inclusive.
pub fn equispaced_grid(n_points: usize) -> Array1<f64> {
    let step = 1.0 / (n_points - 1) as f64;
    Array1::from_iter((0..n_points).map(|i| i as f64 * step))
}

/// Random matrix of the given rank: product of two seeded Gaussian factors.
pub fn low_rank(m: usize, n: usize, rank: usize, seed: u64) -> Result<Array2<f64>> {
    if m == 0 || n == 0 || rank == 0 || rank > m.min(n) {
        return Err(Error::InvalidParams(format!(
            "low_rank needs 1 <= rank <= min({m}, {n}), got {rank}"
        )));
    }
    let mut rng = SeededRng::with_stream(seed, streams::DATA_GEN);
    let a = rng.normal_matrix(m, rank);
    let b = rng.normal_matrix(rank, n);
    Ok(a.dot(&b))
}

/// Two spherical Gaussian classes whose means sit `separation` apart along
/// the first feature. Labels alternate 0, 1, 0, 1, ...
pub fn two_gaussians(
    per_class: usize,
    n_features: usize,
    separation: f64,
    seed: u64,
) -> Result<(Array2<f64>, Vec<usize>)> {
    if per_class == 0 || n_features == 0 {
        return Err(Error::InvalidParams(
            "two_gaussians needs per_class >= 1 and n_features >= 1".into(),
        ));
    }
    if !separation.is_finite() || separation < 0.0 {
        return Err(Error::InvalidParams(format!(
            "separation must be finite and non-negative, got {separation}"
        )));
    }
    let mut rng = SeededRng::with_stream(seed, streams::DATA_GEN);
    let m = 2 * per_class;
    let mut x = Array2::<f64>::zeros((m, n_features));
    let mut y = Vec::with_capacity(m);
    for i in 0..m {
        let class = i % 2;
        let shift = if class == 0 {
            -separation / 2.0
        } else {
            separation / 2.0
        };
        for j in 0..n_features {
            x[[i, j]] = rng.standard_normal();
        }
        x[[i, 0]] += shift;
        y.push(class);
    }
    Ok((x, y))
}

/// Deterministic shuffled split into train and test rows.
pub fn train_test_split(
    x: &Array2<f64>,
    y: &[usize],
    train_frac: f64,
    seed: u64,
) -> Result<LabeledSplit> {
    let m = x.nrows();
    if y.len() != m {
        return Err(Error::dim(format!("{} labels for {m} rows", y.len())));
    }
    if !(train_frac > 0.0 && train_frac <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "train_frac must lie in (0, 1], got {train_frac}"
        )));
    }
    let mut order: Vec<usize> = (0..m).collect();
    let mut rng = SeededRng::with_stream(seed, streams::TRAIN_TEST_SPLIT);
    rng.shuffle(&mut order);
    let n_train = ((train_frac * m as f64).round() as usize).clamp(1, m);
    let take = |idx: &[usize]| -> (Array2<f64>, Vec<usize>) {
        let mut xs = Array2::<f64>::zeros((idx.len(), x.ncols()));
        let mut ys = Vec::with_capacity(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            xs.row_mut(k).assign(&x.row(i));
            ys.push(y[i]);
        }
        (xs, ys)
    };
    let (x_train, y_train) = take(&order[..n_train]);
    let (x_test, y_test) = take(&order[n_train..]);
    Ok((x_train, y_train, x_test, y_test))
}
