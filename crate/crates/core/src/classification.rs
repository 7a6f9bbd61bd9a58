//! SSPOC: sparse sensor placement optimized for classification. The fit
//! pipeline is: fit a basis, train a classifier on basis-projected features,
//! recover a sparse sensor weighting that reproduces the classifier's
//! discriminant directions, pick sensors from its nonzero rows, then refit
//! the classifier on raw data restricted to those sensors.

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::basis::{BasisSpec, FittedBasis};
use crate::classifiers::{Lda, LinearClassifier};
use crate::error::{Error, Result};
use crate::linalg::{pseudoinverse, DEFAULT_RCOND};
use crate::sparse::{multitask_lasso, omp, SparseSolution};
use crate::utils::warnings;

/// Row-norm threshold for automatic sensor selection.
pub const DEFAULT_THRESHOLD: f64 = 1e-10;
/// Default l1 penalty for the multi-class sparse recovery problem.
pub const DEFAULT_L1_PENALTY: f64 = 0.1;
/// Residual tolerance at which OMP stops early.
pub const OMP_RESIDUAL_TOL: f64 = 1e-10;
/// Sweep budget for the multi-task lasso.
pub const LASSO_MAX_ITER: usize = 1000;
/// Coefficient-change tolerance for the multi-task lasso.
pub const LASSO_TOL: f64 = 1e-8;

/// Configuration for [`Sspoc`]. The classifier instance acts as a prototype:
/// it is cloned once for the feature-space fit and once for the sensor-space
/// refit, so both share hyperparameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SspocConfig<C = Lda> {
    pub basis: BasisSpec,
    pub classifier: C,
    /// Requested sensor count; `None` selects automatically by thresholding
    /// row norms of the sparse solution.
    pub n_sensors: Option<usize>,
    pub threshold: f64,
    pub l1_penalty: f64,
}

impl Default for SspocConfig<Lda> {
    fn default() -> Self {
        SspocConfig {
            basis: BasisSpec::default(),
            classifier: Lda::default(),
            n_sensors: None,
            threshold: DEFAULT_THRESHOLD,
            l1_penalty: DEFAULT_L1_PENALTY,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SspocState<C> {
    basis: FittedBasis,
    feature_classifier: C,
    /// Discriminant directions in mode space, `r x q`.
    w: Array2<f64>,
    s: SparseSolution,
    selected: Vec<usize>,
    refit_classifier: C,
}

/// The SSPOC estimator, generic over the linear classifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sspoc<C: LinearClassifier + Clone = Lda> {
    config: SspocConfig<C>,
    state: Option<SspocState<C>>,
}

impl Default for Sspoc<Lda> {
    fn default() -> Self {
        Sspoc::new(SspocConfig::default())
    }
}

impl<C: LinearClassifier + Clone> Sspoc<C> {
    pub fn new(config: SspocConfig<C>) -> Self {
        Sspoc {
            config,
            state: None,
        }
    }

    pub fn config(&self) -> &SspocConfig<C> {
        &self.config
    }

    /// Run the full pipeline on labeled snapshots (rows are examples).
    pub fn fit(&mut self, x: ArrayView2<'_, f64>, y: &[usize]) -> Result<&mut Self> {
        self.check_params()?;
        let (m, n) = x.dim();
        if m == 0 || n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if y.len() != m {
            return Err(Error::dim(format!("{} labels for {m} samples", y.len())));
        }
        if let Some(p) = self.config.n_sensors {
            check_sensor_count(p, n)?;
        }
        let basis = FittedBasis::fit(&self.config.basis, x)?;
        self.state = Some(self.fit_downstream(basis, x, y)?);
        Ok(self)
    }

    /// Everything after the basis: features, classifier, sparse recovery,
    /// selection, refit. Shared by `fit` and `update_n_basis_modes`.
    fn fit_downstream(
        &self,
        basis: FittedBasis,
        x: ArrayView2<'_, f64>,
        y: &[usize],
    ) -> Result<SspocState<C>> {
        let psi = basis.active_matrix();
        let r = psi.ncols();
        let n = psi.nrows();

        // Features are basis coordinates: psi_pinv x per example.
        let pinv = pseudoinverse(psi, DEFAULT_RCOND)?;
        let features = x.dot(&pinv.t());
        let mut feature_classifier = self.config.classifier.clone();
        feature_classifier.fit(features.view(), y)?;
        let w = feature_classifier.weights()?;
        if w.nrows() != r {
            return Err(Error::dim(format!(
                "classifier returned {} weight rows for {r} modes",
                w.nrows()
            )));
        }
        let q = w.ncols();

        // Recover sensor weights s with psi^T s ~= w, sparse in rows of s.
        let dictionary = psi.t();
        let s = if q == 1 {
            let budget = self.config.n_sensors.unwrap_or(r).min(r.min(n));
            omp(dictionary, w.column(0), budget, OMP_RESIDUAL_TOL)?
        } else {
            multitask_lasso(
                dictionary,
                w.view(),
                self.config.l1_penalty,
                LASSO_MAX_ITER,
                LASSO_TOL,
            )?
        };

        if s.row_support.is_empty() {
            return Err(Error::NoSensorsSelected);
        }
        let mut selected =
            select_sensors_from_solution(&s, self.config.n_sensors, self.config.threshold);
        if self.config.n_sensors.is_none() {
            cap_sensor_count(&mut selected, r * q);
        }
        if selected.is_empty() {
            return Err(Error::NoSensorsSelected);
        }

        let refit_classifier = refit_on_sensors(&self.config.classifier, x, y, &selected)?;
        Ok(SspocState {
            basis,
            feature_classifier,
            w,
            s,
            selected,
            refit_classifier,
        })
    }

    fn check_params(&self) -> Result<()> {
        let t = self.config.threshold;
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidParams(format!(
                "threshold must be finite and non-negative, got {t}"
            )));
        }
        Ok(())
    }

    fn state(&self) -> Result<&SspocState<C>> {
        self.state.as_ref().ok_or(Error::NotFitted)
    }

    pub fn basis(&self) -> Result<&FittedBasis> {
        Ok(&self.state()?.basis)
    }

    /// Selected sensor locations, most discriminative first.
    pub fn selected_sensors(&self) -> Result<&[usize]> {
        Ok(&self.state()?.selected)
    }

    /// The sparse recovery solution the sensors were drawn from.
    pub fn sparse_solution(&self) -> Result<&SparseSolution> {
        Ok(&self.state()?.s)
    }

    /// Feature-space discriminant directions, `r x q`.
    pub fn weights(&self) -> Result<&Array2<f64>> {
        Ok(&self.state()?.w)
    }

    /// Predict labels from measurements taken at the selected sensors, in
    /// `selected_sensors` order.
    pub fn predict(&self, x_sub: ArrayView2<'_, f64>) -> Result<Vec<usize>> {
        let state = self.state()?;
        if x_sub.ncols() != state.selected.len() {
            return Err(Error::dim(format!(
                "{} measurement columns for {} selected sensors",
                x_sub.ncols(),
                state.selected.len()
            )));
        }
        state.refit_classifier.predict(x_sub)
    }

    /// Reselect `n_sensors` from the stored sparse solution (no
    /// re-optimization) and refit the classifier on the new subsample.
    pub fn update_sensors(
        &mut self,
        n_sensors: usize,
        x: ArrayView2<'_, f64>,
        y: &[usize],
    ) -> Result<&mut Self> {
        let state = self.state()?;
        let n = state.basis.n_locations();
        check_sensor_count(n_sensors, n)?;
        check_training_data(x, y, n)?;
        let selected =
            select_sensors_from_solution(&state.s, Some(n_sensors), self.config.threshold);
        let refit_classifier = refit_on_sensors(&self.config.classifier, x, y, &selected)?;
        let state = self.state.as_mut().expect("checked above");
        state.selected = selected;
        state.refit_classifier = refit_classifier;
        self.config.n_sensors = Some(n_sensors);
        Ok(self)
    }

    /// Shrink the basis to `r` modes and redo everything downstream of it:
    /// features, classifier, sparse recovery, selection, refit. The basis is
    /// not refit, but training data is needed for the classifier stages.
    pub fn update_n_basis_modes(
        &mut self,
        r: usize,
        x: ArrayView2<'_, f64>,
        y: &[usize],
    ) -> Result<&mut Self> {
        let state = self.state()?;
        check_training_data(x, y, state.basis.n_locations())?;
        let basis = state.basis.shrunk(r)?;
        self.state = Some(self.fit_downstream(basis, x, y)?);
        Ok(self)
    }
}

/// Pick sensors from the row norms of a sparse solution.
///
/// With `n_sensors` given, the top rows by descending norm are returned,
/// padding past the threshold when the solution has too few strong rows
/// (with a warning). Otherwise every row with norm above `threshold` is
/// returned, descending. Ties break to the lower index.
pub fn select_sensors_from_solution(
    s: &SparseSolution,
    n_sensors: Option<usize>,
    threshold: f64,
) -> Vec<usize> {
    let norms: Vec<f64> = s
        .s
        .rows()
        .into_iter()
        .map(|row| row.dot(&row).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&a, &b| {
        norms[b]
            .partial_cmp(&norms[a])
            .expect("row norms are finite")
            .then(a.cmp(&b))
    });
    match n_sensors {
        Some(p) => {
            let p = p.min(order.len());
            let strong = order.iter().take(p).filter(|&&j| norms[j] > threshold).count();
            if strong < p {
                warnings::emit(format!(
                    "only {strong} of {p} requested sensors exceed the row-norm threshold \
                     {threshold:.1e}; padding with the largest remaining rows"
                ));
            }
            order.truncate(p);
            order
        }
        None => order
            .into_iter()
            .filter(|&j| norms[j] > threshold)
            .collect(),
    }
}

/// Order basis modes by `sigma_k * ||w[k, :]||_2`, descending. Callers can
/// reorder the mode matrix by this before re-running selection to bias it
/// toward discriminative modes.
pub fn reweighted_mode_order(
    singular_values: ArrayView1<'_, f64>,
    w: ArrayView2<'_, f64>,
) -> Result<Vec<usize>> {
    if singular_values.len() != w.nrows() {
        return Err(Error::dim(format!(
            "{} singular values for {} weight rows",
            singular_values.len(),
            w.nrows()
        )));
    }
    let scores: Vec<f64> = w
        .rows()
        .into_iter()
        .zip(singular_values.iter())
        .map(|(row, &sigma)| sigma * row.dot(&row).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("scores are finite")
            .then(a.cmp(&b))
    });
    Ok(order)
}

fn cap_sensor_count(selected: &mut Vec<usize>, cap: usize) {
    if selected.len() > cap {
        warnings::emit(format!(
            "automatic selection produced {} sensors; keeping the strongest {cap}",
            selected.len()
        ));
        selected.truncate(cap);
    }
}

fn check_sensor_count(p: usize, n: usize) -> Result<()> {
    if p < 1 || p > n {
        return Err(Error::OutOfRange {
            what: "n_sensors",
            value: p,
            min: 1,
            max: n,
        });
    }
    Ok(())
}

fn check_training_data(x: ArrayView2<'_, f64>, y: &[usize], n: usize) -> Result<()> {
    if x.ncols() != n {
        return Err(Error::dim(format!(
            "training rows have {} entries for {n} candidate locations",
            x.ncols()
        )));
    }
    if y.len() != x.nrows() {
        return Err(Error::dim(format!(
            "{} labels for {} samples",
            y.len(),
            x.nrows()
        )));
    }
    Ok(())
}

fn refit_on_sensors<C: LinearClassifier + Clone>(
    prototype: &C,
    x: ArrayView2<'_, f64>,
    y: &[usize],
    sensors: &[usize],
) -> Result<C> {
    let mut sub = Array2::<f64>::zeros((x.nrows(), sensors.len()));
    for (k, &j) in sensors.iter().enumerate() {
        sub.column_mut(k).assign(&x.column(j));
    }
    let mut refit = prototype.clone();
    refit.fit(sub.view(), y)?;
    Ok(refit)
}
