//! Versioned JSON persistence for fitted models. Matrices are stored as
//! plain JSON numbers, which serde_json prints at full round-trip precision.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::classification::Sspoc;
use crate::classifiers::Lda;
use crate::error::{Error, Result};
use crate::reconstruction::Sspor;

/// Bump when the serialized model layout changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ModelDocument<T> {
    format_version: u32,
    kind: String,
    model: T,
}

pub fn save_sspor(path: impl AsRef<Path>, model: &Sspor) -> Result<()> {
    save(path, "sspor", model)
}

pub fn load_sspor(path: impl AsRef<Path>) -> Result<Sspor> {
    load(path, "sspor")
}

pub fn save_sspoc(path: impl AsRef<Path>, model: &Sspoc<Lda>) -> Result<()> {
    save(path, "sspoc", model)
}

pub fn load_sspoc(path: impl AsRef<Path>) -> Result<Sspoc<Lda>> {
    load(path, "sspoc")
}

fn save<T: Serialize>(path: impl AsRef<Path>, kind: &str, model: &T) -> Result<()> {
    let doc = ModelDocument {
        format_version: FORMAT_VERSION,
        kind: kind.to_string(),
        model,
    };
    let text = serde_json::to_string(&doc)
        .map_err(|e| Error::InvalidParams(format!("model serialization failed: {e}")))?;
    fs::write(path, text)?;
    Ok(())
}

fn load<T: DeserializeOwned>(path: impl AsRef<Path>, kind: &str) -> Result<T> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let doc: ModelDocument<T> = serde_json::from_str(&text).map_err(|e| Error::ParseError {
        line: e.line(),
        message: e.to_string(),
    })?;
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::InvalidParams(format!(
            "model format version {} is not supported (expected {FORMAT_VERSION})",
            doc.format_version
        )));
    }
    if doc.kind != kind {
        return Err(Error::InvalidParams(format!(
            "file holds a {:?} model, expected {kind:?}",
            doc.kind
        )));
    }
    Ok(doc.model)
}
