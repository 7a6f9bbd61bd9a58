//! SSPOR: sparse sensor placement optimized for reconstruction. Fit a basis
//! to snapshot data, rank candidate locations, then recover full states from
//! measurements taken at the leading sensors.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::basis::{BasisSpec, FittedBasis};
use crate::error::{Error, Result};
use crate::linalg::least_squares_multi;
use crate::optimizers::{ccqr_rank, qr_rank, OptimizerSpec, SensorRanking};
use crate::utils::{rmse, warnings};

/// Reconstructions whose least-squares condition estimate exceeds this are
/// flagged as ill conditioned.
pub const CONDITION_FLAG_THRESHOLD: f64 = 1e12;

/// Configuration for [`Sspor`]. `n_sensors = None` defaults to the number of
/// meaningful (QR-pivoted) locations at fit time.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SsporConfig {
    pub basis: BasisSpec,
    pub optimizer: OptimizerSpec,
    pub n_sensors: Option<usize>,
    pub seed: u64,
}

/// Full states recovered from sparse measurements, with conditioning
/// diagnostics for the underlying least-squares solve.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// One reconstructed state per measurement row, `k x n`.
    pub states: Array2<f64>,
    /// Condition estimate of the sensors-by-modes system.
    pub condition: f64,
    /// True when `condition` exceeds [`CONDITION_FLAG_THRESHOLD`]; the
    /// states are then the minimum-norm solution.
    pub ill_conditioned: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SsporState {
    basis: FittedBasis,
    ranking: SensorRanking,
    n_sensors: usize,
}

/// The SSPOR estimator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sspor {
    config: SsporConfig,
    state: Option<SsporState>,
}

impl Default for Sspor {
    fn default() -> Self {
        Sspor::new(SsporConfig::default())
    }
}

impl Sspor {
    pub fn new(config: SsporConfig) -> Self {
        Sspor {
            config,
            state: None,
        }
    }

    pub fn config(&self) -> &SsporConfig {
        &self.config
    }

    /// Fit the basis on `x` (rows are examples) and rank sensor locations.
    pub fn fit(&mut self, x: ArrayView2<'_, f64>) -> Result<&mut Self> {
        let basis = FittedBasis::fit(&self.config.basis, x)?;
        let n = basis.n_locations();
        if let Some(p) = self.config.n_sensors {
            check_sensor_count(p, n)?;
        }
        let ranking = rank_basis(&basis, &self.config.optimizer, self.config.seed)?;
        let n_sensors = self.config.n_sensors.unwrap_or(ranking.n_meaningful());
        warn_if_oversampled(n_sensors, ranking.n_meaningful());
        self.state = Some(SsporState {
            basis,
            ranking,
            n_sensors,
        });
        Ok(self)
    }

    fn state(&self) -> Result<&SsporState> {
        self.state.as_ref().ok_or(Error::NotFitted)
    }

    pub fn basis(&self) -> Result<&FittedBasis> {
        Ok(&self.state()?.basis)
    }

    pub fn ranking(&self) -> Result<&SensorRanking> {
        Ok(&self.state()?.ranking)
    }

    pub fn n_sensors(&self) -> Result<usize> {
        Ok(self.state()?.n_sensors)
    }

    /// The first `n_sensors` ranked locations.
    pub fn selected_sensors(&self) -> Result<&[usize]> {
        let state = self.state()?;
        Ok(state.ranking.selected(state.n_sensors))
    }

    /// Change the number of active sensors without refitting. Counts past the
    /// meaningful pivots dip into the seeded random tail and warn.
    pub fn set_n_sensors(&mut self, p: usize) -> Result<&mut Self> {
        let n = self.state()?.basis.n_locations();
        check_sensor_count(p, n)?;
        warn_if_oversampled(p, self.state()?.ranking.n_meaningful());
        self.state.as_mut().expect("checked above").n_sensors = p;
        Ok(self)
    }

    /// Recover full states from measurements at the selected sensors, one
    /// row per example, with conditioning diagnostics.
    pub fn reconstruct(&self, measurements: ArrayView2<'_, f64>) -> Result<Reconstruction> {
        let state = self.state()?;
        self.reconstruct_at(state.n_sensors, measurements)
    }

    /// Recover a single full state from one measurement vector. Conditioning
    /// problems surface through the warning channel; use [`Sspor::reconstruct`]
    /// for explicit diagnostics.
    pub fn predict(&self, y: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        let row = y
            .to_owned()
            .into_shape((1, y.len()))
            .expect("vector reshapes to a row");
        let recon = self.reconstruct(row.view())?;
        Ok(recon.states.index_axis(Axis(0), 0).to_owned())
    }

    fn reconstruct_at(
        &self,
        p: usize,
        measurements: ArrayView2<'_, f64>,
    ) -> Result<Reconstruction> {
        let state = self.state()?;
        if measurements.ncols() != p {
            return Err(Error::dim(format!(
                "measurements have {} columns for {} active sensors",
                measurements.ncols(),
                p
            )));
        }
        crate::utils::validate_finite("measurements", measurements.iter())?;
        let psi = state.basis.active_matrix();
        let sensors = state.ranking.selected(p);
        let c_psi = select_rows(psi, sensors);
        let solve = least_squares_multi(c_psi.view(), measurements.t())?;
        let states = psi.dot(&solve.solution).t().to_owned();
        let ill_conditioned = solve.condition > CONDITION_FLAG_THRESHOLD;
        if ill_conditioned {
            warnings::emit(format!(
                "sensor system condition estimate {:.3e} exceeds {CONDITION_FLAG_THRESHOLD:.0e}; \
                 returning the minimum-norm reconstruction",
                solve.condition
            ));
        }
        Ok(Reconstruction {
            states,
            condition: solve.condition,
            ill_conditioned,
        })
    }

    /// RMSE of full-state reconstruction over `test` rows, one value per
    /// entry of `sensor_range`. The model's own sensor count is untouched.
    pub fn reconstruction_error(
        &self,
        test: ArrayView2<'_, f64>,
        sensor_range: &[usize],
    ) -> Result<Vec<f64>> {
        let state = self.state()?;
        let n = state.basis.n_locations();
        if test.ncols() != n {
            return Err(Error::dim(format!(
                "test rows have {} entries for {} candidate locations",
                test.ncols(),
                n
            )));
        }
        let mut out = Vec::with_capacity(sensor_range.len());
        for &p in sensor_range {
            check_sensor_count(p, n)?;
            warn_if_oversampled(p, state.ranking.n_meaningful());
            let sensors = state.ranking.selected(p);
            let measurements = select_columns(test, sensors);
            let recon = self.reconstruct_at(p, measurements.view())?;
            out.push(rmse(test, recon.states.view())?);
        }
        Ok(out)
    }

    /// Shrink the basis to `r` modes and recompute the ranking; the basis
    /// itself is not refit, so no training data is needed.
    pub fn update_n_basis_modes(&mut self, r: usize) -> Result<&mut Self> {
        let state = self.state()?;
        let basis = state.basis.shrunk(r)?;
        let ranking = rank_basis(&basis, &self.config.optimizer, self.config.seed)?;
        let n_sensors = state.n_sensors;
        warn_if_oversampled(n_sensors, ranking.n_meaningful());
        self.state = Some(SsporState {
            basis,
            ranking,
            n_sensors,
        });
        Ok(self)
    }
}

fn rank_basis(
    basis: &FittedBasis,
    optimizer: &OptimizerSpec,
    seed: u64,
) -> Result<SensorRanking> {
    let psi = basis.active_matrix();
    match optimizer {
        OptimizerSpec::Qr => qr_rank(psi, seed),
        OptimizerSpec::Ccqr(cost) => ccqr_rank(psi, cost, seed),
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

fn warn_if_oversampled(p: usize, n_meaningful: usize) {
    if p > n_meaningful {
        warnings::emit(format!(
            "only the first {n_meaningful} sensor locations are meaningful; \
             sensors beyond that come from the seeded random tail"
        ));
    }
}

fn select_rows(a: ArrayView2<'_, f64>, rows: &[usize]) -> Array2<f64> {
    let mut out = Array2::<f64>::zeros((rows.len(), a.ncols()));
    for (k, &i) in rows.iter().enumerate() {
        out.row_mut(k).assign(&a.row(i));
    }
    out
}

fn select_columns(a: ArrayView2<'_, f64>, cols: &[usize]) -> Array2<f64> {
    let mut out = Array2::<f64>::zeros((a.nrows(), cols.len()));
    for (k, &j) in cols.iter().enumerate() {
        out.column_mut(k).assign(&a.column(j));
    }
    out
}
