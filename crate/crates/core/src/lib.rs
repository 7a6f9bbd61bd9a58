//! Data-driven sparse sensor placement.
//!
//! Given snapshot data, this crate selects near-optimal measurement
//! locations for two tasks: full-state reconstruction from few point
//! measurements (SSPOR) and signal classification from few point
//! measurements (SSPOC). The moving parts are composable: a basis
//! ([`basis::BasisSpec`]), a selection optimizer ([`optimizers`]), sparse
//! regression back ends ([`sparse`]), and linear classifiers
//! ([`classifiers`]), glued together by the two estimators
//! [`reconstruction::Sspor`] and [`classification::Sspoc`].
//!
//! Everything randomized takes an explicit seed and is bit-reproducible
//! across runs; see [`utils::SeededRng`].

pub mod basis;
pub mod classification;
pub mod classifiers;
pub mod error;
pub mod io;
pub mod linalg;
pub mod optimizers;
pub mod reconstruction;
pub mod sparse;
pub mod utils;

pub use error::{Error, Result};

pub use basis::{BasisSpec, FittedBasis};
pub use classification::{Sspoc, SspocConfig};
pub use classifiers::{Lda, LinearClassifier};
pub use optimizers::{CostVector, OptimizerSpec, SensorRanking};
pub use reconstruction::{Reconstruction, Sspor, SsporConfig};
