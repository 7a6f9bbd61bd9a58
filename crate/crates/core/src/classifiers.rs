//! Linear classifiers usable as the decision stage of a sensor-selecting
//! classification model. The built-in choice is regularized LDA.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky, solve_lower, solve_lower_transpose, symmetric_eigen};

/// A classifier exposing the linear weights that sensor selection needs.
///
/// `fit` takes samples as rows; labels are arbitrary `usize` values. The
/// weight matrix has one column per discriminant direction.
pub trait LinearClassifier {
    fn fit(&mut self, x: ArrayView2<'_, f64>, y: &[usize]) -> Result<()>;
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<usize>>;
    /// Discriminant directions, `n_features x n_directions`.
    fn weights(&self) -> Result<Array2<f64>>;
}

/// Default shrinkage mixed into the within-class scatter.
pub const DEFAULT_SHRINKAGE: f64 = 1e-4;

/// Linear discriminant analysis with a shrinkage-regularized within-class
/// scatter and nearest-centroid prediction in the discriminant space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lda {
    shrinkage: f64,
    state: Option<LdaState>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LdaState {
    /// `n_features x q` discriminant directions, unit columns.
    directions: Array2<f64>,
    /// Class centroids projected into the discriminant space, one row per
    /// class in `labels` order.
    projected_centroids: Array2<f64>,
    labels: Vec<usize>,
}

impl Default for Lda {
    fn default() -> Self {
        Lda::new(DEFAULT_SHRINKAGE).expect("default shrinkage is valid")
    }
}

impl Lda {
    /// `shrinkage` blends the within-class scatter with a scaled identity:
    /// `(1 - s) * Sw + s * (tr(Sw) / n_features) * I`. Must lie in `[0, 1)`.
    pub fn new(shrinkage: f64) -> Result<Self> {
        if !shrinkage.is_finite() || !(0.0..1.0).contains(&shrinkage) {
            return Err(Error::InvalidParams(format!(
                "shrinkage must be in [0, 1), got {shrinkage}"
            )));
        }
        Ok(Lda {
            shrinkage,
            state: None,
        })
    }

    pub fn shrinkage(&self) -> f64 {
        self.shrinkage
    }

    /// Labels seen during fit, ascending.
    pub fn labels(&self) -> Result<&[usize]> {
        Ok(&self.state.as_ref().ok_or(Error::NotFitted)?.labels)
    }

    /// Number of discriminant directions, `min(n_classes - 1, n_features)`.
    pub fn n_directions(&self) -> Result<usize> {
        Ok(self.state.as_ref().ok_or(Error::NotFitted)?.directions.ncols())
    }
}

impl LinearClassifier for Lda {
    fn fit(&mut self, x: ArrayView2<'_, f64>, y: &[usize]) -> Result<()> {
        let (m, r) = x.dim();
        if m == 0 || r == 0 {
            return Err(Error::EmptyMatrix);
        }
        if y.len() != m {
            return Err(Error::dim(format!(
                "{} labels for {} samples",
                y.len(),
                m
            )));
        }
        crate::utils::validate_finite("classifier training data", x.iter())?;

        let mut labels: Vec<usize> = y.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let c = labels.len();
        if c < 2 {
            return Err(Error::SingleClass);
        }
        let class_of: Vec<usize> = y
            .iter()
            .map(|lbl| labels.binary_search(lbl).expect("label seen during dedup"))
            .collect();

        let mut counts = vec![0usize; c];
        let mut means = Array2::<f64>::zeros((c, r));
        for (i, &k) in class_of.iter().enumerate() {
            counts[k] += 1;
            means.row_mut(k).scaled_add(1.0, &x.row(i));
        }
        for (k, &count) in counts.iter().enumerate() {
            means.row_mut(k).mapv_inplace(|v| v / count as f64);
        }
        let grand_mean = x.mean_axis(Axis(0)).expect("m > 0");

        let mf = m as f64;
        let mut s_w = Array2::<f64>::zeros((r, r));
        for (i, &k) in class_of.iter().enumerate() {
            let d = &x.row(i) - &means.row(k);
            accumulate_outer(&mut s_w, &d, 1.0 / mf);
        }
        let mut s_b = Array2::<f64>::zeros((r, r));
        for (k, &count) in counts.iter().enumerate() {
            let d = &means.row(k) - &grand_mean;
            accumulate_outer(&mut s_b, &d, count as f64 / mf);
        }

        let trace: f64 = (0..r).map(|i| s_w[[i, i]]).sum();
        let ridge = self.shrinkage * trace / r as f64;
        let mut s_w_reg = s_w * (1.0 - self.shrinkage);
        for i in 0..r {
            s_w_reg[[i, i]] += ridge;
        }

        // Generalized eigenproblem Sb v = lambda Sw v via Cholesky Sw = L L^T.
        let l = cholesky(s_w_reg.view())?;
        let t = solve_lower(&l, s_b.view());
        let msym = solve_lower(&l, t.t());
        let (_, vectors) = symmetric_eigen(msym.view())?;

        let q = (c - 1).min(r);
        let mut directions = Array2::<f64>::zeros((r, q));
        for j in 0..q {
            let mut v = solve_lower_transpose(&l, vectors.column(j));
            let norm = v.dot(&v).sqrt();
            if norm > 0.0 {
                v.mapv_inplace(|e| e / norm);
            }
            fix_sign(&mut v);
            directions.column_mut(j).assign(&v);
        }

        let projected_centroids = means.dot(&directions);
        self.state = Some(LdaState {
            directions,
            projected_centroids,
            labels,
        });
        Ok(())
    }

    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<usize>> {
        let state = self.state.as_ref().ok_or(Error::NotFitted)?;
        if x.ncols() != state.directions.nrows() {
            return Err(Error::dim(format!(
                "{} features at predict time, classifier was fit with {}",
                x.ncols(),
                state.directions.nrows()
            )));
        }
        crate::utils::validate_finite("classifier input", x.iter())?;
        let projected = x.dot(&state.directions);
        let mut out = Vec::with_capacity(projected.nrows());
        for row in projected.rows() {
            let mut best = 0usize;
            let mut best_dist = f64::INFINITY;
            for (k, centroid) in state.projected_centroids.rows().into_iter().enumerate() {
                let d = &row - &centroid;
                let dist = d.dot(&d);
                // Strict inequality keeps the smallest label on ties.
                if dist < best_dist {
                    best_dist = dist;
                    best = k;
                }
            }
            out.push(state.labels[best]);
        }
        Ok(out)
    }

    fn weights(&self) -> Result<Array2<f64>> {
        Ok(self
            .state
            .as_ref()
            .ok_or(Error::NotFitted)?
            .directions
            .clone())
    }
}

fn accumulate_outer(acc: &mut Array2<f64>, d: &Array1<f64>, scale: f64) {
    let n = d.len();
    for i in 0..n {
        let di = d[i] * scale;
        if di == 0.0 {
            continue;
        }
        for j in 0..n {
            acc[[i, j]] += di * d[j];
        }
    }
}

fn fix_sign(v: &mut Array1<f64>) {
    let mut best = 0.0_f64;
    let mut best_val = 0.0_f64;
    for &e in v.iter() {
        if e.abs() > best {
            best = e.abs();
            best_val = e;
        }
    }
    if best_val < 0.0 {
        v.mapv_inplace(|e| -e);
    }
}
