//! Symmetry groups and their fixed-point spaces of observables.
//!
//! A group is given by Hermitian generators `A` of one-parameter subgroups
//! `exp(-itA)` together with finitely many discrete unitaries. The space of
//! observables fixed by the group is the intersection of the commutants of
//! the generators with the fixed-point spaces of the discrete elements.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::opspace::{
    self, embed, materialize_pauli, DensityOperator, HermitianOperator, HilbertSpace, PauliString,
};

/// Relative gap below which eigenvalues are merged into one block.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Largest finite group accepted for the discrete part of a spec.
pub const MAX_GROUP_ORDER: usize = 64;

pub const UNITARY_TOL: f64 = 1e-10;

/// Residual bound used by the convenience checks.
pub const SYMMETRY_TOL: f64 = 1e-9;


#[derive(Clone, Debug)]
pub struct SymmetrySpec {
    space: HilbertSpace,
    generators: Vec<HermitianOperator>,
    discrete_elements: Vec<CMatrix>,
    degeneracy_tol: f64,
}

impl SymmetrySpec {
    /// Non-trivial group. Use [`SymmetrySpec::trivial`] for the trivial group.
    pub fn new(
        space: HilbertSpace,
        generators: Vec<HermitianOperator>,
        discrete_elements: Vec<CMatrix>,
    ) -> Result<Self> {
        if generators.is_empty() && discrete_elements.is_empty() {
            return Err(Error::EmptySymmetry);
        }
        if generators.iter().any(|g| g.space() != space) {
            return Err(Error::SpaceMismatch);
        }
        let n = space.dim();
        for u in &discrete_elements {
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::DimensionMismatch { rows: u.nrows(), cols: u.ncols(), dim: n });
            }
            let residual = (u * u.adjoint() - CMatrix::identity(n, n)).norm();
            if residual > UNITARY_TOL {
                return Err(Error::NotUnitary { residual });
            }
        }
        Ok(SymmetrySpec {
            space,
            generators,
            discrete_elements,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
        })
    }

    pub fn trivial(space: HilbertSpace) -> Self {
        SymmetrySpec {
            space,
            generators: Vec::new(),
            discrete_elements: Vec::new(),
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
        }
    }

    /// One generator.
    pub fn generated_by(generator: HermitianOperator) -> Self {
        SymmetrySpec {
            space: generator.space(),
            generators: vec![generator],
            discrete_elements: Vec::new(),
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
        }
    }

    /// Generators given as Pauli-string labels with unit coefficient, e.g. `["ZZ"]`.
    pub fn from_pauli_generators(space: HilbertSpace, generators: &[&[(&str, f64)]]) -> Result<Self> {
        let ops = generators
            .iter()
            .map(|terms| {
                let terms = terms
                    .iter()
                    .map(|(s, w)| Ok((s.parse::<PauliString>()?, *w)))
                    .collect::<Result<Vec<_>>>()?;
                opspace::pauli_sum(space, &terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, ops, Vec::new())
    }

    pub fn with_degeneracy_tol(mut self, tol: f64) -> Self {
        self.degeneracy_tol = tol;
        self
    }

    pub fn with_generator(mut self, generator: HermitianOperator) -> Result<Self> {
        if generator.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        self.generators.push(generator);
        Ok(self)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn generators(&self) -> &[HermitianOperator] {
        &self.generators
    }

    pub fn discrete_elements(&self) -> &[CMatrix] {
        &self.discrete_elements
    }

    pub fn degeneracy_tol(&self) -> f64 {
        self.degeneracy_tol
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty() && self.discrete_elements.is_empty()
    }
}

/// Eigenvalue clusters of a Hermitian operator and the eigenbasis ordering them.
#[derive(Clone, Debug)]
pub struct SpectralBlocks {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Columns are eigenvectors, grouped block by block.
    pub basis_change: CMatrix,
}

impl SpectralBlocks {
    /// Block index of every eigenvector column.
    pub fn labels(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .enumerate()
            .flat_map(|(b, &n)| std::iter::repeat_n(b, n))
            .collect()
    }
}

/// Groups the spectrum of `a` into blocks of (near-)equal eigenvalues.
///
/// Neighbouring sorted eigenvalues join one block when their gap is at most
/// `degeneracy_tol · max(1, spectral radius)`. A block's eigenvalue is the mean
/// of its members.
pub fn spectral_blocks(a: &HermitianOperator, degeneracy_tol: f64) -> SpectralBlocks {
    let (values, vectors) = linalg::eigh(a.matrix());
    let radius = values.iter().fold(0.0f64, |r, v| r.max(v.abs()));
    let gap = degeneracy_tol * radius.max(1.0);
    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > gap {
            let members = &values[start..k];
            eigenvalues.push(members.iter().sum::<f64>() / members.len() as f64);
            multiplicities.push(k - start);
            start = k;
        }
    }
    SpectralBlocks {
        eigenvalues,
        multiplicities,
        basis_change: vectors,
    }
}

/// `Σ n_i²`, the real dimension of the Hermitian commutant of one generator.
pub fn commutant_dim_from_blocks(blocks: &SpectralBlocks) -> usize {
    blocks.multiplicities.iter().map(|n| n * n).sum()
}

/// An orthonormal (under `tr(AB)`) basis of a subspace of Hermitian operators.
#[derive(Clone, Debug)]
pub struct ObservableSubspace {
    space: HilbertSpace,
    basis: Vec<HermitianOperator>,
    source_spec: SymmetrySpec,
}

impl ObservableSubspace {
    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn basis(&self) -> &[HermitianOperator] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn source_spec(&self) -> &SymmetrySpec {
        &self.source_spec
    }

    /// Same subspace, different orthonormal basis. `basis` is trusted to be
    /// orthonormal and to span the same space.
    pub fn with_basis(&self, basis: Vec<HermitianOperator>) -> Result<Self> {
        if basis.len() != self.basis.len() || basis.iter().any(|b| b.space() != self.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(ObservableSubspace {
            space: self.space,
            basis,
            source_spec: self.source_spec.clone(),
        })
    }
}

/// Orthogonal projectors on operator space whose common fixed points are the commutant.
enum Constraint {
    Pinching { vectors: CMatrix, labels: Vec<usize> },
    GroupAverage { elements: Vec<CMatrix> },
}

impl Constraint {
    fn apply(&self, b: &CMatrix) -> CMatrix {
        match self {
            Constraint::Pinching { vectors, labels } => {
                let mut rotated = vectors.adjoint() * b * vectors;
                for i in 0..labels.len() {
                    for j in 0..labels.len() {
                        if labels[i] != labels[j] {
                            rotated[(i, j)] = Complex64::new(0.0, 0.0);
                        }
                    }
                }
                vectors * rotated * vectors.adjoint()
            }
            Constraint::GroupAverage { elements } => {
                let mut acc = CMatrix::zeros(b.nrows(), b.ncols());
                for g in elements {
                    acc += g * b * g.adjoint();
                }
                acc.unscale(elements.len() as f64)
            }
        }
    }
}

/// Removes a global phase so that projectively equal unitaries compare equal.
fn phase_normalized(u: &CMatrix) -> CMatrix {
    let pivot = u
        .iter()
        .find(|z| z.norm() > 1e-6)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    u * (pivot.conj() / pivot.norm())
}

/// Closure of the discrete elements under multiplication, modulo global phase.
fn generate_group(elements: &[CMatrix], n: usize) -> Result<Vec<CMatrix>> {
    let gens: Vec<CMatrix> = elements.iter().map(phase_normalized).collect();
    let mut group = vec![CMatrix::identity(n, n)];
    let mut frontier = 0;
    while frontier < group.len() {
        let current = group[frontier].clone();
        frontier += 1;
        for g in &gens {
            let candidate = phase_normalized(&(g * &current));
            if !group.iter().any(|h| (h - &candidate).norm() < 1e-8) {
                group.push(candidate);
                if group.len() > MAX_GROUP_ORDER {
                    return Err(Error::GroupTooLarge { limit: MAX_GROUP_ORDER });
                }
            }
        }
    }
    Ok(group)
}

fn constraints(spec: &SymmetrySpec) -> Result<Vec<Constraint>> {
    let mut out = Vec::new();
    for g in &spec.generators {
        let blocks = spectral_blocks(g, spec.degeneracy_tol);
        // A single block means the generator is a multiple of the identity.
        if blocks.multiplicities.len() > 1 {
            out.push(Constraint::Pinching {
                labels: blocks.labels(),
                vectors: blocks.basis_change,
            });
        }
    }
    if !spec.discrete_elements.is_empty() {
        let elements = generate_group(&spec.discrete_elements, spec.space.dim())?;
        if elements.len() > 1 {
            out.push(Constraint::GroupAverage { elements });
        }
    }
    Ok(out)
}

/// Projects every Pauli string (scaled to unit norm) with `project` and keeps
/// the Gram-Schmidt residuals above `rank_tol`, in lexicographic order.
fn pauli_span(space: HilbertSpace, rank_tol: f64, project: impl Fn(&CMatrix) -> CMatrix) -> Result<Vec<CMatrix>> {
    let n = space.dim();
    let unit = 1.0 / (n as f64).sqrt();
    let mut basis: Vec<CMatrix> = Vec::new();
    for p in PauliString::all(space.num_sites()) {
        let start = materialize_pauli(&p, space)?.into_matrix().scale(unit);
        let mut v = linalg::symmetrize(&project(&start));
        // Classical Gram-Schmidt, applied twice.
        for _ in 0..2 {
            for b in &basis {
                let coeff = linalg::real_dot(b, &v);
                v -= b.scale(coeff);
            }
        }
        let norm = v.norm();
        if norm > rank_tol {
            basis.push(v.unscale(norm));
        }
        if basis.len() == n * n {
            break;
        }
    }
    Ok(basis)
}

/// Intersects the span of an orthonormal `basis` with the range of a
/// constraint projector `P`.
///
/// The Gram matrix of `(1 - P)` on the basis has the squared sines of the
/// principal angles as eigenvalues; eigenvectors with eigenvalue at most
/// `tol` span the intersection.
fn intersect(basis: &[CMatrix], constraint: &Constraint, tol: f64) -> Vec<CMatrix> {
    let d = basis.len();
    let images: Vec<CMatrix> = basis.iter().map(|b| constraint.apply(b)).collect();
    let gram = DMatrix::from_fn(d, d, |k, l| {
        let delta = if k == l { 1.0 } else { 0.0 };
        delta - 0.5 * (linalg::real_dot(&basis[k], &images[l]) + linalg::real_dot(&basis[l], &images[k]))
    });
    let eig = gram.symmetric_eigen();
    (0..d)
        .filter(|&j| eig.eigenvalues[j] <= tol)
        .map(|j| {
            let mut v = CMatrix::zeros(basis[0].nrows(), basis[0].ncols());
            for (k, b) in basis.iter().enumerate() {
                v += b.scale(eig.eigenvectors[(k, j)]);
            }
            v
        })
        .collect()
}

/// Default rank tolerance `1e-10 · n`.
pub fn default_rank_tol(space: HilbertSpace) -> f64 {
    1e-10 * space.dim() as f64
}

/// Orthonormal basis of `{B Hermitian : [A_k, B] = 0, u B u† = B}`.
///
/// Each generator contributes its pinching projector and the discrete
/// elements their group average. The range of the first projector is
/// intersected exactly with the ranges of the others; a direction survives
/// when its squared distance from a range is at most `rank_tol`. The final
/// basis comes from projecting each Pauli string, in lexicographic order,
/// onto the result and orthonormalizing, dropping residuals below
/// `rank_tol`, so it does not depend on how the subspace was found.
pub fn commutant(spec: &SymmetrySpec, rank_tol: f64) -> Result<ObservableSubspace> {
    let space = spec.space;
    space.require_qubits()?;
    let constraints = constraints(spec)?;
    let basis = match constraints.split_first() {
        None => pauli_span(space, rank_tol, |b| b.clone())?,
        Some((first, rest)) => {
            let mut current = pauli_span(space, rank_tol, |b| first.apply(b))?;
            for c in rest {
                if current.is_empty() {
                    break;
                }
                current = intersect(&current, c, rank_tol);
            }
            if rest.is_empty() {
                current
            } else {
                let project = |b: &CMatrix| {
                    let mut acc = CMatrix::zeros(b.nrows(), b.ncols());
                    for w in &current {
                        acc += w.scale(linalg::real_dot(w, b));
                    }
                    acc
                };
                pauli_span(space, rank_tol, project)?
            }
        }
    };
    Ok(ObservableSubspace {
        space,
        basis: basis
            .into_iter()
            .map(|m| HermitianOperator::from_computed(space, m))
            .collect(),
        source_spec: spec.clone(),
    })
}

/// Orthogonal projection `Σ_i ⟨a, B_i⟩ B_i`.
pub fn project_onto(subspace: &ObservableSubspace, a: &HermitianOperator) -> Result<HermitianOperator> {
    if a.space() != subspace.space {
        return Err(Error::SpaceMismatch);
    }
    let n = subspace.space.dim();
    let mut acc = CMatrix::zeros(n, n);
    for b in &subspace.basis {
        acc += b.matrix().scale(opspace::hs_inner(b, a)?);
    }
    Ok(HermitianOperator::from_computed(subspace.space, acc))
}

/// Outcome of a symmetry test with per-element Frobenius residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryCheck {
    pub symmetric: bool,
    /// `‖[A_k, ρ]‖` per generator.
    pub generator_residuals: Vec<f64>,
    /// `‖u ρ u† − ρ‖` per discrete element.
    pub discrete_residuals: Vec<f64>,
}

impl SymmetryCheck {
    pub fn max_residual(&self) -> f64 {
        self.generator_residuals
            .iter()
            .chain(&self.discrete_residuals)
            .fold(0.0, |m, &r| m.max(r))
    }
}

pub fn is_symmetric_operator(a: &HermitianOperator, spec: &SymmetrySpec, tol: f64) -> Result<SymmetryCheck> {
    if a.space() != spec.space {
        return Err(Error::SpaceMismatch);
    }
    let generator_residuals: Vec<f64> = spec
        .generators
        .iter()
        .map(|g| g.commutator_norm(a.matrix()))
        .collect();
    let discrete_residuals: Vec<f64> = spec
        .discrete_elements
        .iter()
        .map(|u| (u * a.matrix() * u.adjoint() - a.matrix()).norm())
        .collect();
    let mut check = SymmetryCheck {
        symmetric: false,
        generator_residuals,
        discrete_residuals,
    };
    check.symmetric = check.max_residual() <= tol;
    Ok(check)
}

/// Whether `u ρ u† = ρ` for every element of the group described by `spec`.
pub fn is_symmetric(rho: &DensityOperator, spec: &SymmetrySpec, tol: f64) -> Result<SymmetryCheck> {
    is_symmetric_operator(rho.operator(), spec, tol)
}

/// Result of checking that a symmetry survives the partial trace.
#[derive(Clone, Debug)]
pub struct ReductionCheck {
    pub holds: bool,
    pub reduced: DensityOperator,
    pub check: SymmetryCheck,
}

fn lift_spec(spec: &SymmetrySpec, sites: &[usize], space: HilbertSpace) -> Result<(Vec<HermitianOperator>, Vec<CMatrix>)> {
    let gens = spec
        .generators
        .iter()
        .map(|g| embed(g, sites, space))
        .collect::<Result<Vec<_>>>()?;
    let discrete = spec
        .discrete_elements
        .iter()
        .map(|u| opspace::embed_matrix(u, sites, space))
        .collect::<Result<Vec<_>>>()?;
    Ok((gens, discrete))
}

/// Checks that a state symmetric under the product group `U₁ ⊗ U₂` reduces to
/// a state symmetric under `U₁`.
///
/// `part1` lists the sites of the first factor (strictly increasing); `spec1`
/// acts on those sites and `spec2` on the remaining ones, in site order. The
/// product group is generated by `A ⊗ 1`, `1 ⊗ B` and `u ⊗ 1`, `1 ⊗ v`.
/// A state that is not symmetric under the product group is reported as
/// [`Error::PreconditionViolated`], separate from a failed check.
pub fn check_product_group_reduction(
    rho: &DensityOperator,
    spec1: &SymmetrySpec,
    spec2: &SymmetrySpec,
    part1: &[usize],
    tol: f64,
) -> Result<ReductionCheck> {
    let space = rho.space();
    let m = space.num_sites();
    let part2: Vec<usize> = (0..m).filter(|s| !part1.contains(s)).collect();
    if spec1.space.num_sites() != part1.len() || spec2.space.num_sites() != part2.len() {
        return Err(Error::InvalidSites(format!(
            "factor specs cover {} + {} sites, partition is {} + {}",
            spec1.space.num_sites(),
            spec2.space.num_sites(),
            part1.len(),
            part2.len()
        )));
    }
    let (mut gens, mut discrete) = lift_spec(spec1, part1, space)?;
    let (gens2, discrete2) = lift_spec(spec2, &part2, space)?;
    gens.extend(gens2);
    discrete.extend(discrete2);
    let product = if gens.is_empty() && discrete.is_empty() {
        SymmetrySpec::trivial(space)
    } else {
        SymmetrySpec::new(space, gens, discrete)?
    };
    let pre = is_symmetric(rho, &product, tol)?;
    if !pre.symmetric {
        return Err(Error::PreconditionViolated(format!(
            "state is not symmetric under the product group (residual {:.3e})",
            pre.max_residual()
        )));
    }
    let reduced = opspace::partial_trace(rho, part1)?;
    let check = is_symmetric(&reduced, spec1, tol)?;
    Ok(ReductionCheck {
        holds: check.symmetric,
        reduced,
        check,
    })
}

/// Checks that for an eigenvector `|ψ⟩` of `A₁ ⊗ A₂` with nonzero eigenvalue,
/// the reduction of `|ψ⟩⟨ψ|` onto the sites of `A₁` commutes with `A₁`.
///
/// `A₁` acts on the leading sites, `A₂` on the rest. A zero eigenvalue
/// (`|λ| ≤ tol`) is rejected with [`Error::ZeroEigenvalue`].
pub fn check_tensor_generator_reduction(
    psi: &CVector,
    a1: &HermitianOperator,
    a2: &HermitianOperator,
    tol: f64,
) -> Result<ReductionCheck> {
    let a = opspace::tensor(&[a1.clone(), a2.clone()])?;
    let space = a.space();
    if psi.len() != space.dim() {
        return Err(Error::DimensionMismatch { rows: psi.len(), cols: 1, dim: space.dim() });
    }
    let rho = DensityOperator::pure(space, psi)?;
    let a_psi = a.matrix() * psi;
    let lambda = psi.dotc(&a_psi).re;
    let residual = (&a_psi - psi * Complex64::new(lambda, 0.0)).norm();
    let scale = a.matrix().norm().max(1.0);
    if residual > tol * scale {
        return Err(Error::NotEigenvector { residual });
    }
    if lambda.abs() <= tol {
        return Err(Error::ZeroEigenvalue { eigenvalue: lambda });
    }
    let keep: Vec<usize> = (0..a1.space().num_sites()).collect();
    let reduced = opspace::partial_trace(&rho, &keep)?;
    let check = is_symmetric(&reduced, &SymmetrySpec::generated_by(a1.clone()), tol)?;
    Ok(ReductionCheck {
        holds: check.symmetric,
        reduced,
        check,
    })
}

/// Real-valued Gram matrix of operators, for diagnostics and tests.
pub fn gram_matrix(ops: &[HermitianOperator]) -> DMatrix<f64> {
    DMatrix::from_fn(ops.len(), ops.len(), |i, j| {
        linalg::real_dot(ops[i].matrix(), ops[j].matrix())
    })
}
