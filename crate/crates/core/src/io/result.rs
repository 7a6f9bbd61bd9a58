//! The JSON document every CLI command emits: parameters in, results out,
//! enough to reproduce the run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version tag written into every document.
pub const SCHEMA_VERSION: &str = "1";

/// One point of a reconstruction error sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub n_sensors: usize,
    pub rmse: f64,
}

/// Machine-readable output of a CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    pub command: String,
    /// Every parameter needed to reproduce the run, including seeds.
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub selected_sensors: Vec<usize>,
    pub error_curve: Option<Vec<ErrorPoint>>,
    pub accuracy: Option<f64>,
    pub timing_ms: u64,
}

impl ResultDocument {
    pub fn new(command: impl Into<String>) -> Self {
        ResultDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.into(),
            parameters: BTreeMap::new(),
            selected_sensors: Vec::new(),
            error_curve: None,
            accuracy: None,
            timing_ms: 0,
        }
    }

    pub fn set_parameter(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidParams(format!("serialization failed: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ParseError {
            line: e.line(),
            message: e.to_string(),
        })
    }
}
