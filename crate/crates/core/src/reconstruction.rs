//! Minimal reconstruction basis, correlation sets and the linear map that
//! rebuilds a symmetric state from its correlation functions.

use std::collections::BTreeMap;

use log::warn;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::opspace::{pauli_expectation, DensityOperator, HermitianOperator, HilbertSpace, PauliString};
use crate::symmetry::ObservableSubspace;

/// Projection norm below which a Pauli string is treated as orthogonal to the subspace.
pub const DEFAULT_COEFF_TOL: f64 = 1e-10;

const VALUE_TOL: f64 = 1e-9;

/// Expectation values of Pauli strings, `G_P = ⟨P⟩_ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationSet {
    space: HilbertSpace,
    values: BTreeMap<PauliString, f64>,
}

impl CorrelationSet {
    /// Values must lie in `[-1, 1]` (up to `1e-9`) and the identity string,
    /// when present, must be 1.
    pub fn new(space: HilbertSpace, values: BTreeMap<PauliString, f64>) -> Result<Self> {
        space.require_qubits()?;
        for (p, &v) in &values {
            if p.len() != space.num_sites() {
                return Err(Error::LengthMismatch { expected: space.num_sites(), got: p.len() });
            }
            let invalid = |reason: String| Error::InvalidCorrelation { label: p.to_string(), reason };
            if !v.is_finite() {
                return Err(invalid(format!("{v} is not finite")));
            }
            if v.abs() > 1.0 + VALUE_TOL {
                return Err(invalid(format!("|{v}| exceeds 1")));
            }
            if p.is_identity() && (v - 1.0).abs() > VALUE_TOL {
                return Err(invalid(format!("identity expectation must be 1, got {v}")));
            }
        }
        Ok(CorrelationSet { space, values })
    }

    pub fn from_pairs<I>(space: HilbertSpace, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        Self::new(space, pairs.into_iter().collect())
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn values(&self) -> &BTreeMap<PauliString, f64> {
        &self.values
    }

    pub fn get(&self, p: &PauliString) -> Option<f64> {
        self.values.get(p).copied()
    }

    /// Lookup by letter or digit label.
    pub fn get_label(&self, label: &str) -> Option<f64> {
        label.parse::<PauliString>().ok().and_then(|p| self.get(&p))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a·self + b·other` over the keys of `self`; both must share keys.
    pub fn affine_combination(&self, a: f64, other: &CorrelationSet, b: f64) -> Result<CorrelationSet> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .map(|(p, &v)| {
                let w = other
                    .get(p)
                    .ok_or_else(|| Error::MissingCorrelations(vec![p.to_string()]))?;
                Ok((p.clone(), a * v + b * w))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        CorrelationSet::new(self.space, values)
    }
}

/// Pauli coefficients `tr(B P) / 2^m` of `b` for every string in lexicographic order.
fn pauli_coefficients(b: &CMatrix, num_sites: usize) -> Vec<f64> {
    let n = b.nrows() as f64;
    PauliString::all(num_sites)
        .map(|p| pauli_expectation(b, &p).re / n)
        .collect()
}

/// Per-string coefficient tables `c[i][P]` for the subspace basis.
fn coefficient_table(subspace: &ObservableSubspace) -> Vec<Vec<f64>> {
    let m = subspace.space().num_sites();
    subspace
        .basis()
        .iter()
        .map(|b| pauli_coefficients(b.matrix(), m))
        .collect()
}

/// Norm of the projection of the unit-norm string `P / √n` onto the subspace,
/// for every string in lexicographic order.
fn projection_norms(subspace: &ObservableSubspace, table: &[Vec<f64>]) -> Vec<f64> {
    let m = subspace.space().num_sites();
    let sqrt_n = (subspace.space().dim() as f64).sqrt();
    (0..1usize << (2 * m))
        .map(|k| {
            // ⟨B_i, P/√n⟩ = c_{i,P} · √n
            table
                .iter()
                .map(|row| (row[k] * sqrt_n).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// The Pauli strings whose orthogonal projection onto the subspace has norm
/// above `coeff_tol`, in lexicographic order.
///
/// This set does not depend on which orthonormal basis of the subspace is
/// used, which is what makes it the unique minimal reconstruction basis.
pub fn minimal_reconstruction_basis(subspace: &ObservableSubspace, coeff_tol: f64) -> Vec<PauliString> {
    let m = subspace.space().num_sites();
    let table = coefficient_table(subspace);
    projection_norms(subspace, &table)
        .into_iter()
        .enumerate()
        .filter(|&(_, norm)| norm > coeff_tol)
        .map(|(k, _)| PauliString::from_index(m, k))
        .collect()
}

/// Coefficient operators `B_P` with `ρ = Σ_P ⟨P⟩_ρ B_P` for every `ρ` in the subspace.
#[derive(Clone, Debug)]
pub struct ReconstructionMap {
    subspace: ObservableSubspace,
    entries: BTreeMap<PauliString, HermitianOperator>,
}

impl ReconstructionMap {
    pub fn subspace(&self) -> &ObservableSubspace {
        &self.subspace
    }

    pub fn entries(&self) -> &BTreeMap<PauliString, HermitianOperator> {
        &self.entries
    }

    pub fn entry(&self, p: &PauliString) -> Option<&HermitianOperator> {
        self.entries.get(p)
    }

    /// The minimal reconstruction basis, i.e. the keys.
    pub fn basis(&self) -> Vec<PauliString> {
        self.entries.keys().cloned().collect()
    }
}

/// Builds `B_P = Σ_i c_{i,P} B_i` with `c_{i,P} = tr(B_i P) / 2^m` over the
/// orthonormal basis `{B_i}` of the subspace.
pub fn build_reconstruction_map(subspace: &ObservableSubspace, coeff_tol: f64) -> ReconstructionMap {
    let space = subspace.space();
    let m = space.num_sites();
    let n = space.dim();
    let table = coefficient_table(subspace);
    let norms = projection_norms(subspace, &table);
    let entries = norms
        .iter()
        .enumerate()
        .filter(|&(_, &norm)| norm > coeff_tol)
        .map(|(k, _)| {
            let mut acc = CMatrix::zeros(n, n);
            for (row, b) in table.iter().zip(subspace.basis()) {
                if row[k] != 0.0 {
                    acc += b.matrix().scale(row[k]);
                }
            }
            (PauliString::from_index(m, k), HermitianOperator::from_computed(space, acc))
        })
        .collect();
    ReconstructionMap {
        subspace: subspace.clone(),
        entries,
    }
}

/// `⟨P⟩_ρ` for each `P` in `basis`.
pub fn correlations_of(rho: &DensityOperator, basis: &[PauliString]) -> Result<CorrelationSet> {
    let space = rho.space();
    space.require_qubits()?;
    let values = basis
        .iter()
        .map(|p| {
            if p.len() != space.num_sites() {
                return Err(Error::LengthMismatch { expected: space.num_sites(), got: p.len() });
            }
            // Rounding can push |⟨P⟩| a hair past 1.
            Ok((p.clone(), pauli_expectation(rho.matrix(), p).re.clamp(-1.0, 1.0)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    CorrelationSet::new(space, values)
}

/// `Σ_P g(P) B_P`. The result is the raw linear reconstruction; it is the
/// projection of the measured state onto the subspace and need not be positive.
pub fn reconstruct(map: &ReconstructionMap, g: &CorrelationSet) -> Result<HermitianOperator> {
    let space = map.subspace.space();
    if g.space() != space {
        return Err(Error::SpaceMismatch);
    }
    let missing: Vec<String> = map
        .entries
        .keys()
        .filter(|p| g.get(p).is_none())
        .map(|p| p.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingCorrelations(missing));
    }
    let extra: Vec<String> = g
        .values()
        .keys()
        .filter(|p| !map.entries.contains_key(*p))
        .map(|p| p.to_string())
        .collect();
    if !extra.is_empty() {
        warn!("ignoring correlations outside the minimal basis: {}", extra.join(" "));
    }
    let n = space.dim();
    let mut acc = CMatrix::zeros(n, n);
    for (p, b) in &map.entries {
        acc += b.matrix().scale(g.values[p]);
    }
    Ok(HermitianOperator::from_computed(space, acc))
}

/// Clips negative eigenvalues to zero and renormalizes to unit trace.
pub fn psd_repair(a: &HermitianOperator) -> Result<DensityOperator> {
    let trace = a.trace();
    if trace <= 0.0 {
        return Err(Error::NonPositiveTrace(trace));
    }
    let (values, vectors) = linalg::eigh(a.matrix());
    let clipped_trace: f64 = values.iter().map(|v| v.max(0.0)).sum();
    if clipped_trace <= 0.0 {
        return Err(Error::NonPositiveTrace(clipped_trace));
    }
    let m = linalg::apply_spectral(&values, &vectors, |v| v.max(0.0) / clipped_trace);
    Ok(DensityOperator::from_computed(a.space(), m))
}
