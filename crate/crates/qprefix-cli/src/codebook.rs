//! Codebook files: JSON with decimal-string amplitudes.
//!
//! Amplitudes are serialized as decimal strings rather than binary floats
//! so files stay diff-able and platform-stable; they are parsed at full
//! double precision.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use qprefix::analysis::CodeSet;
use qprefix::bits::BitString;
use qprefix::{Complex, QVector};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodebookFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub vectors: Vec<CodebookVector>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodebookVector {
    pub label: String,
    pub terms: Vec<CodebookTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodebookTerm {
    /// Bit string; the empty string denotes λ.
    pub string: String,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Error)]
pub enum CodebookError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unsupported format_version {found} (expected {FORMAT_VERSION})")]
    Version { found: u32 },

    #[error("codebook has no vectors")]
    Empty,

    #[error("vector {label:?}: {message}")]
    Vector { label: String, message: String },
}

impl CodebookFile {
    pub fn from_json(text: &str) -> Result<Self, CodebookError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("codebook serializes")
    }

    /// Build from labelled vectors, rendering amplitudes as shortest
    /// round-trip decimals.
    pub fn from_vectors<'a, I>(vectors: I) -> Self
    where
        I: IntoIterator<Item = (String, &'a QVector)>,
    {
        CodebookFile {
            format_version: FORMAT_VERSION,
            metadata: BTreeMap::new(),
            vectors: vectors
                .into_iter()
                .map(|(label, v)| CodebookVector {
                    label,
                    terms: v
                        .terms()
                        .map(|(s, a)| CodebookTerm {
                            string: if s.is_empty() {
                                String::new()
                            } else {
                                s.to_string()
                            },
                            re: format!("{:?}", a.re),
                            im: format!("{:?}", a.im),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Validate and convert into labelled vectors.
    pub fn parse_vectors(&self) -> Result<Vec<(String, QVector)>, CodebookError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CodebookError::Version {
                found: self.format_version,
            });
        }
        if self.vectors.is_empty() {
            return Err(CodebookError::Empty);
        }
        let mut out = Vec::with_capacity(self.vectors.len());
        for vector in &self.vectors {
            let fail = |message: String| CodebookError::Vector {
                label: vector.label.clone(),
                message,
            };
            let mut terms = Vec::with_capacity(vector.terms.len());
            for term in &vector.terms {
                let s = BitString::parse(&term.string)
                    .map_err(|e| fail(format!("bad string {:?}: {e}", term.string)))?;
                let re: f64 = term
                    .re
                    .trim()
                    .parse()
                    .map_err(|_| fail(format!("bad decimal re {:?}", term.re)))?;
                let im: f64 = term
                    .im
                    .trim()
                    .parse()
                    .map_err(|_| fail(format!("bad decimal im {:?}", term.im)))?;
                terms.push((s, Complex::new(re, im)));
            }
            let v = QVector::from_terms(terms);
            if v.is_zero() {
                return Err(fail("vector is zero".into()));
            }
            out.push((vector.label.clone(), v));
        }
        Ok(out)
    }

    /// Validate and convert into a [`CodeSet`].
    pub fn to_code_set(&self) -> Result<CodeSet, CodebookError> {
        let labelled = self.parse_vectors()?;
        let (labels, vectors): (Vec<_>, Vec<_>) = labelled.into_iter().unzip();
        CodeSet::with_labels(vectors, labels).map_err(|e| CodebookError::Vector {
            label: String::new(),
            message: e.to_string(),
        })
    }
}
