//! Low-dimensional representations of snapshot data: Identity (raw
//! snapshots), SVD modes, and random Gaussian projections, with cheap mode
//! shrinking after the fit.

use std::sync::Arc;

use ndarray::{s, Array1, Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{randomized_svd, truncated_svd};
use crate::utils::{streams, validate_finite, SeededRng};

/// Oversampling and subspace-iteration defaults used when an SVD basis is
/// fit with the randomized solver.
pub const RSVD_OVERSAMPLES: usize = 10;
pub const RSVD_POWER_ITERS: usize = 2;

/// Which basis to fit and how many modes to keep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BasisSpec {
    /// Use the raw snapshots as modes. `n_basis_modes = None` keeps all of
    /// them.
    Identity { n_basis_modes: Option<usize> },
    /// Right singular vectors of the snapshot matrix, exact or randomized.
    Svd {
        n_basis_modes: usize,
        randomized: bool,
        seed: u64,
    },
    /// Seeded i.i.d. Gaussian modes with entry variance 1/r, so projected
    /// squared norms are unbiased.
    RandomProjection { n_basis_modes: usize, seed: u64 },
}

impl Default for BasisSpec {
    fn default() -> Self {
        BasisSpec::Identity {
            n_basis_modes: None,
        }
    }
}

impl BasisSpec {
    pub fn svd(n_basis_modes: usize) -> Self {
        BasisSpec::Svd {
            n_basis_modes,
            randomized: false,
            seed: 0,
        }
    }
}

/// A fitted mode matrix `psi` (`n_locations x r_max`) plus the number of
/// currently active modes. Shrinking is a metadata change; the mode matrix is
/// shared and never recomputed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedBasis {
    spec: BasisSpec,
    modes: Arc<Array2<f64>>,
    singular_values: Option<Array1<f64>>,
    active_modes: usize,
}

impl FittedBasis {
    /// Fit the basis described by `spec` to a snapshot matrix with rows as
    /// examples and columns as candidate sensor locations.
    pub fn fit(spec: &BasisSpec, x: ArrayView2<'_, f64>) -> Result<Self> {
        let (m, n) = x.dim();
        if m == 0 || n == 0 {
            return Err(Error::EmptyMatrix);
        }
        validate_finite("snapshot matrix", x.iter())?;

        let (modes, singular_values) = match spec {
            BasisSpec::Identity { n_basis_modes } => {
                let r = n_basis_modes.unwrap_or(m);
                if r < 1 || r > m {
                    return Err(Error::TooManyModes {
                        requested: r,
                        max: m,
                    });
                }
                (x.t().slice(s![.., ..r]).to_owned(), None)
            }
            BasisSpec::Svd {
                n_basis_modes,
                randomized,
                seed,
            } => {
                let r = *n_basis_modes;
                if r < 1 || r > m.min(n) {
                    return Err(Error::TooManyModes {
                        requested: r,
                        max: m.min(n),
                    });
                }
                let svd = if *randomized {
                    let oversamples = RSVD_OVERSAMPLES.min(m.min(n) - r);
                    randomized_svd(x, r, oversamples, RSVD_POWER_ITERS, *seed)?
                } else {
                    truncated_svd(x, r)?
                };
                let mut modes = svd.right_modes;
                fix_column_signs(&mut modes);
                (modes, Some(svd.singular_values))
            }
            BasisSpec::RandomProjection { n_basis_modes, seed } => {
                let r = *n_basis_modes;
                if r < 1 {
                    return Err(Error::TooManyModes {
                        requested: r,
                        max: n,
                    });
                }
                let mut rng = SeededRng::with_stream(*seed, streams::RANDOM_PROJECTION);
                let scale = 1.0 / (r as f64).sqrt();
                let mut modes = rng.normal_matrix(n, r);
                modes.mapv_inplace(|v| v * scale);
                (modes, None)
            }
        };

        // Canonical C layout so arithmetic is bitwise identical before and
        // after a serialization round trip (deserialized arrays are standard
        // layout; matrix products accumulate in layout-dependent order).
        let modes = if modes.is_standard_layout() {
            modes
        } else {
            modes.as_standard_layout().into_owned()
        };
        let active_modes = modes.ncols();
        Ok(FittedBasis {
            spec: spec.clone(),
            modes: Arc::new(modes),
            singular_values,
            active_modes,
        })
    }

    /// Leading `r` mode columns; serves `psi_r` without recomputation.
    pub fn matrix_representation(&self, r: usize) -> Result<ArrayView2<'_, f64>> {
        if r < 1 || r > self.r_max() {
            return Err(Error::TooManyModes {
                requested: r,
                max: self.r_max(),
            });
        }
        Ok(self.modes.slice(s![.., ..r]))
    }

    /// The currently active mode matrix.
    pub fn active_matrix(&self) -> ArrayView2<'_, f64> {
        self.modes.slice(s![.., ..self.active_modes])
    }

    /// Copy of this basis with `r` active modes. Growing beyond the current
    /// active count requires a refit and is an explicit error.
    pub fn shrunk(&self, r: usize) -> Result<FittedBasis> {
        if r < 1 || r > self.active_modes {
            return Err(Error::TooManyModes {
                requested: r,
                max: self.active_modes,
            });
        }
        let mut out = self.clone();
        out.active_modes = r;
        Ok(out)
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn active_modes(&self) -> usize {
        self.active_modes
    }

    /// Mode count available without refitting.
    pub fn r_max(&self) -> usize {
        self.modes.ncols()
    }

    /// Number of candidate sensor locations.
    pub fn n_locations(&self) -> usize {
        self.modes.nrows()
    }

    /// Singular values of the data, present for SVD bases.
    pub fn singular_values(&self) -> Option<&Array1<f64>> {
        self.singular_values.as_ref()
    }
}

/// Flip each column so its largest-magnitude entry is positive, making SVD
/// mode signs deterministic across fits.
fn fix_column_signs(modes: &mut Array2<f64>) {
    for mut col in modes.columns_mut() {
        let mut best = 0.0_f64;
        let mut best_val = 0.0_f64;
        for &v in col.iter() {
            if v.abs() > best {
                best = v.abs();
                best_val = v;
            }
        }
        if best_val < 0.0 {
            col.mapv_inplace(|v| -v);
        }
    }
}
