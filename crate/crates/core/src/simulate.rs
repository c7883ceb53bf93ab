//! Symmetric test states, finite-shot correlation estimates and the
//! measurement-count reduction a symmetry buys.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::opspace::{pauli_expectation, DensityOperator, PauliString};
use crate::reconstruction::{minimal_reconstruction_basis, CorrelationSet, DEFAULT_COEFF_TOL};
use crate::symmetry::{commutant, default_rank_tol, ObservableSubspace, SymmetrySpec};

/// Margin added above `|λ_min|` when shifting a random operator into the PSD cone.
pub const PSD_SHIFT: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShotPlan {
    shots_per_string: u64,
    seed: u64,
}

impl ShotPlan {
    pub fn new(shots_per_string: u64, seed: u64) -> Result<Self> {
        if shots_per_string == 0 {
            return Err(Error::InvalidParameter("shots per string must be at least 1".into()));
        }
        Ok(ShotPlan { shots_per_string, seed })
    }

    pub fn shots_per_string(&self) -> u64 {
        self.shots_per_string
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// SplitMix64 finalizer.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A random state fixed by `spec`: standard-normal coefficients on the
/// commutant basis, shifted by `|λ_min| + 0.01` times the identity and
/// normalized to unit trace.
pub fn random_symmetric_state(spec: &SymmetrySpec, seed: u64) -> Result<DensityOperator> {
    random_state_in(&commutant(spec, default_rank_tol(spec.space()))?, seed)
}

/// As [`random_symmetric_state`], with the commutant already computed.
pub fn random_state_in(subspace: &ObservableSubspace, seed: u64) -> Result<DensityOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = subspace.space().dim();
    let mut a = CMatrix::zeros(n, n);
    for b in subspace.basis() {
        let w: f64 = StandardNormal.sample(&mut rng);
        a += b.matrix().scale(w);
    }
    let a = (&a + a.adjoint()).scale(0.5);
    let lambda_min = linalg::eigvalsh(&a)[0];
    let shifted = a + CMatrix::identity(n, n).scale(lambda_min.abs() + PSD_SHIFT);
    let trace = shifted.trace().re;
    Ok(DensityOperator::from_computed(subspace.space(), shifted.unscale(trace)))
}

/// Simulates `N` two-outcome measurements of each Pauli string.
///
/// Outcome `+1` has probability `(1 + ⟨P⟩)/2`; the estimate is the sample
/// mean. The all-identity string is always exactly 1. Each string draws
/// from its own stream, seeded by the plan seed mixed with the string's
/// lexicographic index, so results do not depend on evaluation order.
pub fn sample_correlations(rho: &DensityOperator, basis: &[PauliString], plan: &ShotPlan) -> Result<CorrelationSet> {
    let space = rho.space();
    space.require_qubits()?;
    let n = plan.shots_per_string;
    let mut values = BTreeMap::new();
    for p in basis {
        if p.len() != space.num_sites() {
            return Err(Error::LengthMismatch { expected: space.num_sites(), got: p.len() });
        }
        if p.is_identity() {
            values.insert(p.clone(), 1.0);
            continue;
        }
        let exact = pauli_expectation(rho.matrix(), p).re.clamp(-1.0, 1.0);
        let prob_plus = (1.0 + exact) / 2.0;
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(plan.seed, p.index() as u64));
        let dist = Binomial::new(n, prob_plus)
            .map_err(|e| Error::Numerical(format!("binomial({n}, {prob_plus}): {e}")))?;
        let plus = dist.sample(&mut rng);
        let mean = (2.0 * plus as f64 - n as f64) / n as f64;
        values.insert(p.clone(), mean);
    }
    CorrelationSet::new(space, values)
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.space() != sigma.space() {
        return Err(Error::SpaceMismatch);
    }
    let (values, vectors) = linalg::eigh(rho.matrix());
    let sqrt_rho = linalg::apply_spectral(&values, &vectors, |v| v.max(0.0).sqrt());
    let inner = &sqrt_rho * sigma.matrix() * &sqrt_rho;
    let inner = (&inner + inner.adjoint()).scale(0.5);
    let root_trace: f64 = linalg::eigvalsh(&inner).iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub full_count: usize,
    pub mcso_dim: usize,
    pub minimal_basis_size: usize,
    pub reduction_factor: f64,
}

/// How many correlation functions a symmetric state needs compared to a generic one.
pub fn reduction_report(spec: &SymmetrySpec) -> Result<ReductionReport> {
    let space = spec.space();
    let subspace = commutant(spec, default_rank_tol(space))?;
    let basis = minimal_reconstruction_basis(&subspace, DEFAULT_COEFF_TOL);
    let full_count = 1usize << (2 * space.num_sites());
    Ok(ReductionReport {
        full_count,
        mcso_dim: subspace.dim(),
        minimal_basis_size: basis.len(),
        reduction_factor: full_count as f64 / basis.len() as f64,
    })
}
