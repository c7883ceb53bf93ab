//! Ising chain, cat states and the 8-vertex form of two-site reduced states.
//!
//! The 8-vertex parameters are displayed in the basis order
//! `{↑↑, ↓↓, ↑↓, ↓↑}`; everything else uses the computational order
//! `{↑↑, ↑↓, ↓↑, ↓↓}`. [`VERTEX8_ORDER`] maps the former to the latter.

use std::collections::BTreeMap;
use std::fmt;

use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::opspace::{self, partial_trace, DensityOperator, HermitianOperator, HilbertSpace, PauliString};
use crate::reconstruction::{
    build_reconstruction_map, correlations_of, psd_repair, reconstruct, CorrelationSet, DEFAULT_COEFF_TOL,
};
use crate::simulate::{fidelity, sample_correlations, ShotPlan};
use crate::symmetry::{
    self, check_product_group_reduction, check_tensor_generator_reduction, commutant, default_rank_tol,
    SymmetrySpec, SYMMETRY_TOL,
};

/// Computational index of each 8-vertex display row.
pub const VERTEX8_ORDER: [usize; 4] = [0, 3, 1, 2];

/// Correlation labels (digit form) that determine an 8-vertex state.
pub const VERTEX8_KEYS: [&str; 8] = ["00", "03", "30", "33", "11", "22", "12", "21"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsingParameters {
    pub num_sites: usize,
    pub coupling: f64,
    pub field: f64,
    /// Adds the bond between the last and first site.
    pub periodic: bool,
}

impl IsingParameters {
    pub fn new(num_sites: usize, coupling: f64, field: f64) -> Result<Self> {
        if num_sites < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 sites, got {num_sites}")));
        }
        if !coupling.is_finite() || coupling <= 0.0 {
            return Err(Error::InvalidParameter(format!("coupling J must be positive, got {coupling}")));
        }
        if !field.is_finite() {
            return Err(Error::InvalidParameter(format!("field g must be finite, got {field}")));
        }
        Ok(IsingParameters { num_sites, coupling, field, periodic: false })
    }

    pub fn periodic(mut self, periodic: bool) -> Self {
        self.periodic = periodic;
        self
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::qubits(self.num_sites)
    }
}

/// `H = -J Σ_j σ_z^j σ_z^{j+1} + g Σ_j σ_z^j`, open chain unless `periodic`.
pub fn ising_hamiltonian(p: &IsingParameters) -> Result<HermitianOperator> {
    let space = p.space()?;
    let m = p.num_sites;
    let spin = |idx: usize, site: usize| if (idx >> (m - 1 - site)) & 1 == 0 { 1.0 } else { -1.0 };
    let mut bonds: Vec<(usize, usize)> = (0..m - 1).map(|j| (j, j + 1)).collect();
    if p.periodic && m > 2 {
        bonds.push((m - 1, 0));
    }
    let diag: Vec<f64> = (0..space.dim())
        .map(|idx| {
            let coupling: f64 = bonds.iter().map(|&(a, b)| spin(idx, a) * spin(idx, b)).sum();
            let field: f64 = (0..m).map(|j| spin(idx, j)).sum();
            -p.coupling * coupling + p.field * field
        })
        .collect();
    HermitianOperator::from_real_diagonal(space, &diag)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatStateSpec {
    alpha: Complex64,
    beta: Complex64,
    num_sites: usize,
}

impl CatStateSpec {
    pub fn new(alpha: Complex64, beta: Complex64, num_sites: usize) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        if num_sites == 0 {
            return Err(Error::InvalidParameter("cat state needs at least one site".into()));
        }
        Ok(CatStateSpec { alpha, beta, num_sites })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }
}

/// `α|↑…↑⟩ + β|↓…↓⟩`.
pub fn cat_state_vector(spec: &CatStateSpec) -> CVector {
    let n = 1usize << spec.num_sites;
    let mut psi = CVector::zeros(n);
    psi[0] = spec.alpha;
    psi[n - 1] += spec.beta;
    psi
}

pub fn cat_state(spec: &CatStateSpec) -> Result<DensityOperator> {
    let space = HilbertSpace::qubits(spec.num_sites)?;
    DensityOperator::pure(space, &cat_state_vector(spec))
}

/// Parameters of a two-site state with `σ_z ⊗ σ_z` symmetry.
///
/// `z1` is the entry `⟨↓↓|ρ|↑↑⟩` and `z2` the entry `⟨↓↑|ρ|↑↓⟩`; their
/// conjugates sit above the diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex8Parameters {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Vertex8Parameters {
    pub fn trace(&self) -> f64 {
        self.r1 + self.r2 + self.r3 + self.r4
    }

    /// Violations of the positivity conditions `r_i ≥ 0`, `|z1|² ≤ r1 r2`, `|z2|² ≤ r3 r4`.
    pub fn psd_violations(&self) -> Vec<String> {
        let tol = 1e-12;
        let mut out = Vec::new();
        for (name, r) in [("r1", self.r1), ("r2", self.r2), ("r3", self.r3), ("r4", self.r4)] {
            if r < -tol {
                out.push(format!("{name} = {r} is negative"));
            }
        }
        if self.z1.norm_sqr() > self.r1 * self.r2 + tol {
            out.push(format!("|z1|^2 = {} exceeds r1*r2 = {}", self.z1.norm_sqr(), self.r1 * self.r2));
        }
        if self.z2.norm_sqr() > self.r3 * self.r4 + tol {
            out.push(format!("|z2|^2 = {} exceeds r3*r4 = {}", self.z2.norm_sqr(), self.r3 * self.r4));
        }
        out
    }

    /// Reads the parameters off a two-site matrix in computational order.
    /// Entries outside the 8-vertex pattern are ignored.
    pub fn from_matrix(m: &CMatrix) -> Self {
        Vertex8Parameters {
            r1: m[(0, 0)].re,
            r2: m[(3, 3)].re,
            r3: m[(1, 1)].re,
            r4: m[(2, 2)].re,
            z1: m[(3, 0)],
            z2: m[(2, 1)],
        }
    }
}

fn required(g: &CorrelationSet, label: &str) -> Option<f64> {
    g.get_label(label)
}

/// Applies the closed-form expressions
/// `r1 = (G33 + G30 + G03 + 1)/4`, `r2 = (G33 - G30 - G03 + 1)/4`,
/// `r3 = (G30 - G33 - G03 + 1)/4`, `r4 = (G03 - G33 - G30 + 1)/4`,
/// `z1 = (G11 - G22 + iG12 + iG21)/4`, `z2 = (G11 + G22 + iG21 - iG12)/4`.
pub fn vertex8_from_correlations(g: &CorrelationSet) -> Result<Vertex8Parameters> {
    if g.space().num_sites() != 2 {
        return Err(Error::LengthMismatch { expected: 2, got: g.space().num_sites() });
    }
    let missing: Vec<String> = VERTEX8_KEYS
        .iter()
        .filter(|k| required(g, k).is_none())
        .map(|k| k.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingCorrelations(missing));
    }
    let v = |k: &str| required(g, k).unwrap_or_default();
    let g00 = v("00");
    if (g00 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidCorrelation { label: "00".into(), reason: format!("expected 1, got {g00}") });
    }
    let (g03, g30, g33) = (v("03"), v("30"), v("33"));
    let (g11, g22, g12, g21) = (v("11"), v("22"), v("12"), v("21"));
    let i = Complex64::new(0.0, 1.0);
    Ok(Vertex8Parameters {
        r1: (g33 + g30 + g03 + 1.0) / 4.0,
        r2: (g33 - g30 - g03 + 1.0) / 4.0,
        r3: (g30 - g33 - g03 + 1.0) / 4.0,
        r4: (g03 - g33 - g30 + 1.0) / 4.0,
        z1: (c(g11) - c(g22) + i * g12 + i * g21) / 4.0,
        z2: (c(g11) + c(g22) + i * g21 - i * g12) / 4.0,
    })
}

/// Assembles the two-site matrix in computational order. Violated positivity
/// conditions are logged, not rejected.
pub fn vertex8_to_matrix(v: &Vertex8Parameters) -> HermitianOperator {
    for violation in v.psd_violations() {
        warn!("8-vertex form is not positive: {violation}");
    }
    let mut display = CMatrix::zeros(4, 4);
    display[(0, 0)] = c(v.r1);
    display[(1, 1)] = c(v.r2);
    display[(2, 2)] = c(v.r3);
    display[(3, 3)] = c(v.r4);
    display[(1, 0)] = v.z1;
    display[(0, 1)] = v.z1.conj();
    display[(3, 2)] = v.z2;
    display[(2, 3)] = v.z2.conj();
    let mut m = CMatrix::zeros(4, 4);
    for a in 0..4 {
        for b in 0..4 {
            m[(VERTEX8_ORDER[a], VERTEX8_ORDER[b])] = display[(a, b)];
        }
    }
    let space = HilbertSpace::qubits(2).expect("two qubits");
    HermitianOperator::new(space, m).expect("assembled from conjugate pairs")
}

/// Uniform mixture over the eigenvectors whose eigenvalues lie within
/// `degeneracy_tol` of the minimum.
pub fn ground_state(h: &HermitianOperator, degeneracy_tol: f64) -> DensityOperator {
    let (values, vectors) = linalg::eigh(h.matrix());
    let lowest = values[0];
    let count = values.iter().filter(|&&v| v - lowest <= degeneracy_tol).count();
    let weight = 1.0 / count as f64;
    let m = linalg::apply_spectral(&values, &vectors, |v| if v - lowest <= degeneracy_tol { weight } else { 0.0 });
    DensityOperator::from_computed(h.space(), m)
}

/// `exp(-βH) / tr exp(-βH)`, evaluated with the lowest energy subtracted.
pub fn thermal_state(h: &HermitianOperator, inv_temperature: f64) -> Result<DensityOperator> {
    if !inv_temperature.is_finite() || inv_temperature < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature must be finite and non-negative, got {inv_temperature}"
        )));
    }
    let (values, vectors) = linalg::eigh(h.matrix());
    let lowest = values[0];
    let z: f64 = values.iter().map(|v| (-inv_temperature * (v - lowest)).exp()).sum();
    let m = linalg::apply_spectral(&values, &vectors, |v| (-inv_temperature * (v - lowest)).exp() / z);
    Ok(DensityOperator::from_computed(h.space(), m))
}

/// Block shape of a two-site reduced state, decided by the symmetry of the
/// full state it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexForm {
    /// Full state conserves total `Σ σ_z`: no `↑↑`/`↓↓` coherence.
    SixVertex,
    /// Full state is fixed by `⊗ σ_z` only.
    EightVertex,
    /// As `EightVertex`, with both coherences vanishing.
    EightVertexDiagonal,
    General,
}

impl fmt::Display for VertexForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexForm::SixVertex => "6-vertex",
            VertexForm::EightVertex => "8-vertex",
            VertexForm::EightVertexDiagonal => "8-vertex (diagonal)",
            VertexForm::General => "general",
        })
    }
}

fn total_sz(space: HilbertSpace) -> Result<HermitianOperator> {
    let m = space.num_sites();
    let terms: Vec<(PauliString, f64)> = (0..m)
        .map(|j| {
            let mut labels = vec![opspace::Pauli::I; m];
            labels[j] = opspace::Pauli::Z;
            (PauliString::new(labels), 1.0)
        })
        .collect();
    opspace::pauli_sum(space, &terms)
}

fn parity(space: HilbertSpace) -> Result<HermitianOperator> {
    let p = PauliString::new(vec![opspace::Pauli::Z; space.num_sites()]);
    opspace::materialize_pauli(&p, space)
}

pub fn classify_vertex_form(full: &DensityOperator, reduced: &Vertex8Parameters) -> Result<VertexForm> {
    let space = full.space();
    let conserves = |a: HermitianOperator| -> Result<bool> {
        Ok(symmetry::is_symmetric(full, &SymmetrySpec::generated_by(a), SYMMETRY_TOL)?.symmetric)
    };
    if conserves(total_sz(space)?)? {
        return Ok(VertexForm::SixVertex);
    }
    if conserves(parity(space)?)? {
        let diagonal = reduced.z1.norm() <= SYMMETRY_TOL && reduced.z2.norm() <= SYMMETRY_TOL;
        return Ok(if diagonal { VertexForm::EightVertexDiagonal } else { VertexForm::EightVertex });
    }
    Ok(VertexForm::General)
}

/// Which state of the chain the demo reduces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DemoState {
    Cat { alpha: Complex64, beta: Complex64 },
    Ground,
    Thermal { inv_temperature: f64 },
}

#[derive(Clone, Debug)]
pub struct DemoConfig {
    pub params: IsingParameters,
    pub state: DemoState,
    pub shots: Option<ShotPlan>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex8Record {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub z1: [f64; 2],
    pub z2: [f64; 2],
}

impl From<&Vertex8Parameters> for Vertex8Record {
    fn from(v: &Vertex8Parameters) -> Self {
        Vertex8Record {
            r1: v.r1,
            r2: v.r2,
            r3: v.r3,
            r4: v.r4,
            z1: [v.z1.re, v.z1.im],
            z2: [v.z2.re, v.z2.im],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionCheckRecord {
    pub applicable: bool,
    pub holds: bool,
    pub max_residual: Option<f64>,
    pub note: Option<String>,
}

impl ReductionCheckRecord {
    fn from_result(r: Result<symmetry::ReductionCheck>) -> Self {
        match r {
            Ok(check) => ReductionCheckRecord {
                applicable: true,
                holds: check.holds,
                max_residual: Some(check.check.max_residual()),
                note: None,
            },
            Err(e) => ReductionCheckRecord {
                applicable: false,
                holds: false,
                max_residual: None,
                note: Some(e.to_string()),
            },
        }
    }

    fn skipped(note: &str) -> Self {
        ReductionCheckRecord { applicable: false, holds: false, max_residual: None, note: Some(note.into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledRecord {
    pub shots_per_string: u64,
    pub seed: u64,
    pub mcsqcf: BTreeMap<String, f64>,
    pub vertex8: Vertex8Record,
    pub fidelity_after_psd_repair: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub state: String,
    pub num_sites: usize,
    pub coupling: f64,
    pub field: f64,
    pub periodic: bool,
    /// Exact correlations of the reduced state, digit labels.
    pub mcsqcf: BTreeMap<String, f64>,
    pub vertex8: Vertex8Record,
    pub classification: String,
    pub product_group_reduction: ReductionCheckRecord,
    pub tensor_generator_reduction: ReductionCheckRecord,
    pub sampled: Option<SampledRecord>,
}

fn digit_map(g: &CorrelationSet) -> BTreeMap<String, f64> {
    g.values().iter().map(|(p, v)| (p.digits(), *v)).collect()
}

fn z_op(num_sites: usize, labels: impl Fn(usize) -> opspace::Pauli) -> Result<HermitianOperator> {
    let p = PauliString::new((0..num_sites).map(labels).collect());
    opspace::materialize_pauli(&p, HilbertSpace::qubits(num_sites)?)
}

/// Builds the requested state of the chain, reduces it to sites 0 and 1, and
/// reports the 8-vertex parameters, the correlation set, both
/// reduced-symmetry checks and, if a shot plan is given, a sampled
/// reconstruction.
pub fn run_ising_demo(config: &DemoConfig) -> Result<DemoReport> {
    let p = config.params;
    let m = p.num_sites;
    let h = ising_hamiltonian(&p)?;

    let (label, full, pure_vector) = match config.state {
        DemoState::Cat { alpha, beta } => {
            if !m.is_multiple_of(2) {
                return Err(Error::InvalidParameter(format!(
                    "the cat-state demo needs an even number of sites, got {m}"
                )));
            }
            let spec = CatStateSpec::new(alpha, beta, m)?;
            ("cat".to_string(), cat_state(&spec)?, Some(cat_state_vector(&spec)))
        }
        DemoState::Ground => {
            let rho = ground_state(&h, 1e-9);
            let (values, vectors) = linalg::eigh(h.matrix());
            let unique = values.len() < 2 || values[1] - values[0] > 1e-9;
            ("ground".to_string(), rho, unique.then(|| vectors.column(0).into_owned()))
        }
        DemoState::Thermal { inv_temperature } => {
            (format!("thermal(beta={inv_temperature})"), thermal_state(&h, inv_temperature)?, None)
        }
    };

    let reduced = partial_trace(&full, &[0, 1])?;
    let two = HilbertSpace::qubits(2)?;
    let zz_spec = SymmetrySpec::generated_by(z_op(2, |_| opspace::Pauli::Z)?);
    let map = build_reconstruction_map(&commutant(&zz_spec, default_rank_tol(two))?, DEFAULT_COEFF_TOL);
    let basis = map.basis();
    let exact = correlations_of(&reduced, &basis)?;
    let vertex8 = vertex8_from_correlations(&exact)?;
    let classification = classify_vertex_form(&full, &vertex8)?;

    let (product_group_reduction, tensor_generator_reduction) = if m < 3 {
        let note = "needs at least one traced site";
        (ReductionCheckRecord::skipped(note), ReductionCheckRecord::skipped(note))
    } else {
        let rest = m - 2;
        let (spec1, spec2) = match config.state {
            DemoState::Cat { .. } => (zz_spec.clone(), SymmetrySpec::generated_by(z_op(rest, |_| opspace::Pauli::Z)?)),
            _ => (
                SymmetrySpec::generated_by(total_sz(two)?),
                SymmetrySpec::generated_by(total_sz(HilbertSpace::qubits(rest)?)?),
            ),
        };
        let product = ReductionCheckRecord::from_result(check_product_group_reduction(
            &full,
            &spec1,
            &spec2,
            &[0, 1],
            SYMMETRY_TOL,
        ));
        let tensor = match &pure_vector {
            Some(psi) => ReductionCheckRecord::from_result(check_tensor_generator_reduction(
                psi,
                &z_op(2, |_| opspace::Pauli::Z)?,
                &z_op(rest, |_| opspace::Pauli::Z)?,
                SYMMETRY_TOL,
            )),
            None => ReductionCheckRecord::skipped("state is mixed"),
        };
        (product, tensor)
    };

    let sampled = match &config.shots {
        None => None,
        Some(plan) => {
            let g = sample_correlations(&reduced, &basis, plan)?;
            let v = vertex8_from_correlations(&g)?;
            let repaired = psd_repair(&reconstruct(&map, &g)?)?;
            Some(SampledRecord {
                shots_per_string: plan.shots_per_string(),
                seed: plan.seed(),
                mcsqcf: digit_map(&g),
                vertex8: (&v).into(),
                fidelity_after_psd_repair: fidelity(&repaired, &reduced)?,
            })
        }
    };

    Ok(DemoReport {
        state: label,
        num_sites: m,
        coupling: p.coupling,
        field: p.field,
        periodic: p.periodic,
        mcsqcf: digit_map(&exact),
        vertex8: (&vertex8).into(),
        classification: classification.to_string(),
        product_group_reduction,
        tensor_generator_reduction,
        sampled,
    })
}
