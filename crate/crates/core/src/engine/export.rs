//! JSON export and import of fact tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{FactState, FactTable, Provenance};
use crate::condition::{Dnf, PrimeQuery};
use crate::polygon::NewtonPolygon;

pub const EXPORT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("malformed fact table: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported fact table version {0}")]
    Version(u32),
    #[error("fact {index}: {message}")]
    Invalid { index: usize, message: String },
}

/// Serialized form of a [`FactTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactTableDocument {
    pub version: u32,
    pub gmax: u32,
    pub context: PrimeQuery,
    pub axioms: Vec<String>,
    pub facts: Vec<FactRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactRecord {
    pub g: u32,
    pub polygon: NewtonPolygon,
    pub label: String,
    pub status: String,
    pub condition: Dnf,
    pub dim_lo_some: Option<u32>,
    pub dim_hi_all: u32,
    pub empty_ct: bool,
    pub trace: Provenance,
}

impl FactRecord {
    fn of(f: super::Fact<'_>) -> Self {
        FactRecord {
            g: f.g(),
            polygon: f.polygon.clone(),
            label: f.polygon.format(),
            status: f.status_label().to_string(),
            condition: f.state.occurs.clone(),
            dim_lo_some: f.state.dim_lo_some,
            dim_hi_all: f.state.dim_hi_all,
            empty_ct: f.state.empty_ct,
            trace: f.provenance.clone(),
        }
    }
}

impl FactTable {
    /// The exported record of one fact.
    pub fn record(&self, polygon: &NewtonPolygon) -> Result<FactRecord, super::EngineError> {
        let f = self.get(polygon)?;
        Ok(FactRecord::of(f))
    }

    pub fn to_document(&self) -> FactTableDocument {
        FactTableDocument {
            version: EXPORT_VERSION,
            gmax: self.gmax,
            context: self.query,
            axioms: self.axioms.clone(),
            facts: self.facts().map(FactRecord::of).collect(),
        }
    }

    /// Canonical serialization: facts in key order, fixed field order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("fact table serializes")
    }

    pub fn from_document(doc: FactTableDocument) -> Result<Self, ExportError> {
        if doc.version != EXPORT_VERSION {
            return Err(ExportError::Version(doc.version));
        }
        let mut keys: Vec<NewtonPolygon> = Vec::with_capacity(doc.facts.len());
        let mut states = Vec::with_capacity(doc.facts.len());
        let mut provenance = Vec::with_capacity(doc.facts.len());
        for (index, rec) in doc.facts.into_iter().enumerate() {
            let bad = |message: String| ExportError::Invalid { index, message };
            if rec.polygon.genus() != rec.g || rec.g == 0 || rec.g > doc.gmax {
                return Err(bad(format!(
                    "genus {} does not fit polygon {}",
                    rec.g, rec.polygon
                )));
            }
            if keys.last().is_some_and(|k| *k >= rec.polygon) {
                return Err(bad("facts are not in canonical key order".into()));
            }
            let expected = if rec.condition.is_false() {
                "unknown"
            } else {
                "yes"
            };
            if rec.status != expected {
                return Err(bad(format!(
                    "status {:?} contradicts condition {}",
                    rec.status, rec.condition
                )));
            }
            if rec.label != rec.polygon.format() {
                return Err(bad(format!("label {:?} does not match polygon", rec.label)));
            }
            keys.push(rec.polygon);
            states.push(FactState {
                occurs: rec.condition,
                dim_lo_some: rec.dim_lo_some,
                dim_hi_all: rec.dim_hi_all,
                empty_ct: rec.empty_ct,
            });
            provenance.push(rec.trace);
        }
        Ok(FactTable {
            gmax: doc.gmax,
            query: doc.context,
            axioms: doc.axioms,
            keys,
            states,
            provenance,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ExportError> {
        Self::from_document(serde_json::from_str(text)?)
    }
}
