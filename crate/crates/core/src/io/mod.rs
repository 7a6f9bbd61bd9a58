//! Dataset files, synthetic generators, result documents, and model
//! persistence.

pub mod dataset;
pub mod generate;
pub mod persist;
pub mod result;
