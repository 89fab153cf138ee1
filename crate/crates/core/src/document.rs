//! Persisted form of a credal partition.
//!
//! ```json
//! { "version": 1, "method": "ecm", "c": 3, "n": 150,
//!   "focal": [[0,0,0],[1,0,0],...], "mass": [[...], ...],
//!   "criterion": 38.97, "params": {...}, "prototypes": {...}, "seed": 0 }
//! ```
//!
//! Numbers are written with the shortest representation that parses back to
//! the same `f64`, so a document reproduces the in-memory partition exactly.
//! Unknown fields are ignored when reading.

use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::focal::FocalMatrix;
use crate::partition::{CredalPartition, Diagnostics, Prototypes, ViewWeights};

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CredalDocument {
    pub version: u32,
    pub method: String,
    pub c: usize,
    pub n: usize,
    pub focal: Vec<Vec<u8>>,
    pub mass: Vec<Vec<f64>>,
    /// `null` when the partition carries no criterion.
    pub criterion: Option<f64>,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default)]
    pub prototypes: Option<Prototypes>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view_weights: Option<ViewWeights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

impl From<&CredalPartition> for CredalDocument {
    fn from(p: &CredalPartition) -> Self {
        let criterion = p.criterion();
        Self {
            version: DOCUMENT_VERSION,
            method: p.method().to_string(),
            c: p.c(),
            n: p.n(),
            focal: p.focal().rows(),
            mass: p.mass().rows().into_iter().map(|r| r.to_vec()).collect(),
            criterion: criterion.is_finite().then_some(criterion),
            params: p.params().clone(),
            prototypes: p.prototypes().cloned(),
            seed: p.seed(),
            view_weights: p.view_weights().cloned(),
            diagnostics: Some(p.diagnostics().clone()),
        }
    }
}

impl CredalDocument {
    pub fn into_partition(self) -> Result<CredalPartition> {
        if self.version != DOCUMENT_VERSION {
            return Err(Error::InvalidData(format!("unsupported document version {}", self.version)));
        }
        let focal = FocalMatrix::from_rows(&self.focal)?;
        if focal.c() != self.c {
            return Err(Error::ShapeMismatch(format!("c = {} but focal rows have {} columns", self.c, focal.c())));
        }
        if self.mass.len() != self.n {
            return Err(Error::ShapeMismatch(format!("n = {} but mass has {} rows", self.n, self.mass.len())));
        }
        let f = focal.len();
        if let Some(i) = self.mass.iter().position(|r| r.len() != f) {
            return Err(Error::ShapeMismatch(format!("mass row {i} does not have {f} entries")));
        }
        let flat: Vec<f64> = self.mass.into_iter().flatten().collect();
        let mass = Array2::from_shape_vec((self.n, f), flat).expect("row lengths checked");
        let mut p = CredalPartition::new(mass, focal, self.method)?
            .with_criterion(self.criterion.unwrap_or(f64::NAN))
            .with_params(self.params)
            .with_diagnostics(self.diagnostics.unwrap_or_default());
        if let Some(protos) = self.prototypes {
            p = p.with_prototypes(protos);
        }
        if let Some(w) = self.view_weights {
            p = p.with_view_weights(w);
        }
        if let Some(seed) = self.seed {
            p = p.with_seed(seed);
        }
        Ok(p)
    }
}

pub fn to_json(partition: &CredalPartition) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&CredalDocument::from(partition))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<CredalPartition> {
    serde_json::from_str::<CredalDocument>(text)?.into_partition()
}

pub fn write_json(partition: &CredalPartition, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(partition)?).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn read_json(path: &Path) -> Result<CredalPartition> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    from_json(&text)
}
