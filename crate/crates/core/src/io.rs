//! JSON file formats: symmetry specs, correlation sets, matrices and reports.
//!
//! Every file carries `"version": "v1"`. Matrices are row-major lists of
//! `[re, im]` pairs; floats are written in shortest round-trip form, so
//! values survive a write/read cycle bit for bit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::opspace::{self, HermitianOperator, HilbertSpace, PauliString};
use crate::reconstruction::CorrelationSet;
use crate::simulate::ReductionReport;
use crate::symmetry::SymmetrySpec;

pub const FORMAT_VERSION: &str = "v1";

fn default_version() -> String {
    FORMAT_VERSION.to_string()
}

fn default_local_dim() -> usize {
    2
}

fn check_version(v: &str) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::InvalidParameter(format!(
            "unsupported format version {v:?}, expected {FORMAT_VERSION:?}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRecord {
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let data = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
            .collect();
        MatrixRecord { dim, data }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.dim * self.dim {
            return Err(Error::DimensionMismatch { rows: self.data.len(), cols: 1, dim: self.dim * self.dim });
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.data[i * self.dim + j];
            Complex64::new(re, im)
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTerm {
    pub string: String,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorEntry {
    PauliSum { terms: Vec<PauliTerm> },
    Dense { matrix: MatrixRecord },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DiscreteEntry {
    PauliString { string: String },
    Dense { matrix: MatrixRecord },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySpecFile {
    #[serde(default = "default_version")]
    pub version: String,
    pub num_sites: usize,
    #[serde(default = "default_local_dim")]
    pub local_dim: usize,
    /// Must be set when both lists are empty.
    #[serde(default)]
    pub trivial: bool,
    #[serde(default)]
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub discrete_elements: Vec<DiscreteEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracy_tol: Option<f64>,
}

impl SymmetrySpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("symmetry spec: {e}")))
    }

    pub fn to_spec(&self) -> Result<SymmetrySpec> {
        check_version(&self.version)?;
        let space = HilbertSpace::new(self.num_sites, self.local_dim)?;
        space.require_qubits()?;
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let ctx = |e: Error| Error::InvalidParameter(format!("generators[{k}]: {e}"));
                match g {
                    GeneratorEntry::PauliSum { terms } => {
                        let terms = terms
                            .iter()
                            .map(|t| Ok((t.string.parse::<PauliString>()?, t.coefficient)))
                            .collect::<Result<Vec<_>>>()
                            .map_err(ctx)?;
                        opspace::pauli_sum(space, &terms).map_err(ctx)
                    }
                    GeneratorEntry::Dense { matrix } => {
                        HermitianOperator::new(space, matrix.to_matrix().map_err(ctx)?).map_err(ctx)
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let discrete = self
            .discrete_elements
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let ctx = |e: Error| Error::InvalidParameter(format!("discrete_elements[{k}]: {e}"));
                match d {
                    DiscreteEntry::PauliString { string } => {
                        let p: PauliString = string.parse().map_err(ctx)?;
                        Ok(opspace::materialize_pauli(&p, space).map_err(ctx)?.into_matrix())
                    }
                    DiscreteEntry::Dense { matrix } => matrix.to_matrix().map_err(ctx),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = if generators.is_empty() && discrete.is_empty() {
            if !self.trivial {
                return Err(Error::InvalidParameter(
                    "no generators or discrete elements; set \"trivial\": true for the trivial group".into(),
                ));
            }
            SymmetrySpec::trivial(space)
        } else {
            SymmetrySpec::new(space, generators, discrete)?
        };
        Ok(match self.degeneracy_tol {
            Some(tol) => spec.with_degeneracy_tol(tol),
            None => spec,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationEntry {
    pub pauli: String,
    pub value: f64,
}

/// Correlation values, optionally with the simulation provenance that
/// produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFile {
    #[serde(default = "default_version")]
    pub version: String,
    pub num_sites: usize,
    pub values: Vec<CorrelationEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots_per_string: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_state: Option<MatrixRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_state_fidelity_after_reconstruction: Option<f64>,
}

impl CorrelationFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("correlation file: {e}")))
    }

    pub fn from_set(g: &CorrelationSet) -> Self {
        CorrelationFile {
            version: default_version(),
            num_sites: g.space().num_sites(),
            values: g
                .values()
                .iter()
                .map(|(p, v)| CorrelationEntry { pauli: p.to_string(), value: *v })
                .collect(),
            shots_per_string: None,
            seed: None,
            true_state: None,
            true_state_fidelity_after_reconstruction: None,
        }
    }

    /// Labels may be letters or digits; a string listed twice is an error.
    pub fn to_set(&self) -> Result<CorrelationSet> {
        check_version(&self.version)?;
        let space = HilbertSpace::qubits(self.num_sites)?;
        let mut values = BTreeMap::new();
        for entry in &self.values {
            let p: PauliString = entry.pauli.parse()?;
            if values.insert(p.clone(), entry.value).is_some() {
                return Err(Error::InvalidCorrelation {
                    label: p.to_string(),
                    reason: "listed more than once".into(),
                });
            }
        }
        CorrelationSet::new(space, values)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McsoFile {
    pub version: String,
    pub num_sites: usize,
    pub mcso_dim: usize,
    pub orthonormal_basis: Vec<MatrixRecord>,
    pub minimal_basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDiagnostics {
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub trace: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default = "default_version")]
    pub version: String,
    pub num_sites: usize,
    pub state: MatrixRecord,
    #[serde(default)]
    pub psd_repaired: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<StateDiagnostics>,
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("state file: {e}")))?;
        check_version(&file.version)?;
        Ok(file)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: String,
    #[serde(flatten)]
    pub report: ReductionReport,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file records serialize");
    s.push('\n');
    s
}
