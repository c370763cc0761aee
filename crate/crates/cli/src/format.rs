//! JSON file formats: dictionaries, construction bundles and solution lists.
//!
//! Numbers go through `serde_json`, which prints the shortest decimal that
//! parses back to the same `f64`, so every file round-trips exactly.

use std::collections::BTreeMap;
use std::path::Path;

use lsa_core::constructions::ConstructionBundle;
use lsa_core::solvers::{Query, SolutionList};
use lsa_core::{Complex64, Dictionary, DEFAULT_COLUMN_NORM_TOL};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: &str = "lsa/1";

fn schema() -> String {
    SCHEMA.to_string()
}

/// One vector entry: a bare number when real, `[re, im]` when complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> Complex64 {
        match self {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    fn encode(z: Complex64, complex: bool) -> Self {
        if complex {
            Entry::Complex([z.re, z.im])
        } else {
            Entry::Real(z.re)
        }
    }
}

pub fn encode_vector<'a>(values: impl IntoIterator<Item = &'a Complex64>, complex: bool) -> Vec<Entry> {
    values.into_iter().map(|&z| Entry::encode(z, complex)).collect()
}

pub fn decode_vector(entries: &[Entry]) -> DVector<Complex64> {
    DVector::from_iterator(entries.len(), entries.iter().map(|e| e.value()))
}

fn is_real<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> bool {
    values.into_iter().all(|z| z.im == 0.0)
}

fn check_schema(found: &str) -> Result<(), CliError> {
    if found != SCHEMA {
        return Err(CliError::Input(format!("unsupported schema {found:?}, expected {SCHEMA:?}")));
    }
    Ok(())
}

/// An `m × n` dictionary stored column by column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DictionaryFile {
    #[serde(default = "schema")]
    pub schema: String,
    pub m: usize,
    pub n: usize,
    pub complex: bool,
    pub columns: Vec<Vec<Entry>>,
}

impl DictionaryFile {
    pub fn from_dictionary(dict: &Dictionary) -> Self {
        let complex = !dict.is_real();
        Self {
            schema: schema(),
            m: dict.m(),
            n: dict.n_atoms(),
            complex,
            columns: dict
                .matrix()
                .column_iter()
                .map(|col| encode_vector(col.iter(), complex))
                .collect(),
        }
    }

    /// Validates shape and entry kinds, then column norms.
    pub fn to_dictionary(&self) -> Result<Dictionary, CliError> {
        check_schema(&self.schema)?;
        if self.columns.len() != self.n {
            return Err(CliError::Input(format!("n = {} but {} columns given", self.n, self.columns.len())));
        }
        for (j, col) in self.columns.iter().enumerate() {
            if col.len() != self.m {
                return Err(CliError::Input(format!("column {j} has {} entries, expected m = {}", col.len(), self.m)));
            }
            if let Some(i) = col.iter().position(|e| matches!(e, Entry::Complex(_)) != self.complex) {
                let kind = if self.complex { "an [re, im] pair" } else { "a number" };
                return Err(CliError::Input(format!("entry ({i}, {j}) is not {kind}")));
            }
        }
        let mat = DMatrix::from_fn(self.m, self.n, |i, j| self.columns[j][i].value());
        Ok(Dictionary::new(mat, false, DEFAULT_COLUMN_NORM_TOL)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledVector {
    pub label: String,
    pub vector: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionEntry {
    pub target: String,
    pub support: Vec<usize>,
    /// Full length-`n` coefficient vector.
    pub coefficients: Vec<Entry>,
}

/// Targets and side data written next to a constructed dictionary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleFile {
    #[serde(default = "schema")]
    pub schema: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    pub targets: Vec<LabeledVector>,
    #[serde(default)]
    pub coefficient_vectors: Vec<LabeledVector>,
    #[serde(default)]
    pub solutions: Vec<SolutionEntry>,
    #[serde(default)]
    pub predicted: serde_json::Value,
}

impl BundleFile {
    pub fn from_bundle(bundle: &ConstructionBundle) -> Result<Self, CliError> {
        let complex = !bundle.dictionary.is_real()
            || !bundle.targets.iter().all(|t| is_real(t.vector.iter()))
            || !bundle.coefficient_vectors.iter().all(|v| is_real(v.coefficients.iter()))
            || !bundle.solutions.iter().all(|s| is_real(s.coefficients.iter()));
        Ok(Self {
            schema: schema(),
            name: bundle.name.clone(),
            parameters: bundle.parameters.clone(),
            targets: bundle
                .targets
                .iter()
                .map(|t| LabeledVector {
                    label: t.label.clone(),
                    vector: encode_vector(t.vector.iter(), complex),
                })
                .collect(),
            coefficient_vectors: bundle
                .coefficient_vectors
                .iter()
                .map(|v| LabeledVector {
                    label: v.label.clone(),
                    vector: encode_vector(v.coefficients.iter(), complex),
                })
                .collect(),
            solutions: bundle
                .solutions
                .iter()
                .map(|s| SolutionEntry {
                    target: s.target.clone(),
                    support: s.support().indices().to_vec(),
                    coefficients: encode_vector(s.coefficients.iter(), complex),
                })
                .collect(),
            predicted: serde_json::to_value(&bundle.predicted)?,
        })
    }

    /// The target with `label`, or the first one.
    pub fn target(&self, label: Option<&str>) -> Result<DVector<Complex64>, CliError> {
        check_schema(&self.schema)?;
        let found = match label {
            Some(l) => self.targets.iter().find(|t| t.label == l),
            None => self.targets.first(),
        };
        found
            .map(|t| decode_vector(&t.vector))
            .ok_or_else(|| CliError::Input(format!("no target {:?} in file", label.unwrap_or("<first>"))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionRecord {
    pub support: Vec<usize>,
    /// Aligned with `support`.
    pub coefficients: Vec<Entry>,
    pub residual: f64,
    pub coeffs_unique: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionListFile {
    pub schema: String,
    pub query: Query,
    pub optimal_residual: f64,
    pub finite: bool,
    pub support_count: usize,
    pub restricted_counts: BTreeMap<usize, usize>,
    pub solutions: Vec<SolutionRecord>,
}

impl SolutionListFile {
    pub fn new(list: &SolutionList, complex: bool) -> Self {
        Self {
            schema: schema(),
            query: list.query,
            optimal_residual: list.optimal_residual,
            finite: list.finite,
            support_count: list.support_count,
            restricted_counts: list.restricted_counts.clone(),
            solutions: list
                .solutions
                .iter()
                .map(|s| SolutionRecord {
                    support: s.support.indices().to_vec(),
                    coefficients: encode_vector(s.coefficients.iter(), complex),
                    residual: s.residual,
                    coeffs_unique: s.coeffs_unique,
                })
                .collect(),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn read_dictionary(path: &Path) -> Result<Dictionary, CliError> {
    read_json::<DictionaryFile>(path)?.to_dictionary()
}
