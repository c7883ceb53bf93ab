//! Hermitian operator spaces over many-site spin systems.
//!
//! Operators are dense complex matrices in the computational basis, with the
//! lexicographic order `|↑…↑⟩, |↑…↓⟩, …` and site 0 as the leftmost factor.
//! Sites are indexed from 0 throughout the library.

mod pauli;

pub use pauli::{Pauli, PauliString};

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};

/// Tolerance for the trace and positivity invariants of a density operator.
pub const DENSITY_TOL: f64 = 1e-10;

/// Relative tolerance for Hermiticity at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    num_sites: usize,
    local_dim: usize,
}

impl HilbertSpace {
    pub fn new(num_sites: usize, local_dim: usize) -> Result<Self> {
        if num_sites == 0 || local_dim == 0 {
            return Err(Error::InvalidSpace(format!(
                "num_sites={num_sites}, local_dim={local_dim} must be positive"
            )));
        }
        let dim = (local_dim as u64).checked_pow(num_sites as u32);
        match dim {
            Some(d) if d <= 1 << 24 => Ok(HilbertSpace { num_sites, local_dim }),
            _ => Err(Error::InvalidSpace(format!(
                "{local_dim}^{num_sites} is too large for dense matrices"
            ))),
        }
    }

    /// Spin-1/2 chain of `num_sites` sites.
    pub fn qubits(num_sites: usize) -> Result<Self> {
        Self::new(num_sites, 2)
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.num_sites as u32)
    }

    pub(crate) fn require_qubits(&self) -> Result<()> {
        if self.local_dim != 2 {
            return Err(Error::UnsupportedLocalDim(self.local_dim));
        }
        Ok(())
    }

    fn check_dims(&self, m: &CMatrix) -> Result<()> {
        let dim = self.dim();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                rows: m.nrows(),
                cols: m.ncols(),
                dim,
            });
        }
        Ok(())
    }
}

/// An element of the real vector space of Hermitian operators on a space.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
    space: HilbertSpace,
}

impl HermitianOperator {
    /// Fails if `matrix` deviates from its adjoint by more than
    /// `1e-12 · max(max |entry|, 1)`. The input is never symmetrized.
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        space.check_dims(&matrix)?;
        let residual = linalg::hermiticity_residual(&matrix);
        if residual > HERMITIAN_TOL * linalg::max_abs(&matrix).max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        Ok(HermitianOperator { matrix, space })
    }

    /// For matrices produced by Hermiticity-preserving arithmetic; only the
    /// rounding residue is removed.
    pub(crate) fn from_computed(space: HilbertSpace, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), space.dim());
        HermitianOperator {
            matrix: linalg::symmetrize(&matrix),
            space,
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let n = space.dim();
        HermitianOperator {
            matrix: CMatrix::identity(n, n),
            space,
        }
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let n = space.dim();
        HermitianOperator {
            matrix: CMatrix::zeros(n, n),
            space,
        }
    }

    pub fn from_real_diagonal(space: HilbertSpace, diag: &[f64]) -> Result<Self> {
        let n = space.dim();
        if diag.len() != n {
            return Err(Error::DimensionMismatch { rows: diag.len(), cols: diag.len(), dim: n });
        }
        let matrix = CMatrix::from_fn(n, n, |i, j| if i == j { c(diag[i]) } else { c(0.0) });
        Ok(HermitianOperator { matrix, space })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `sqrt(tr(A²))`.
    pub fn hs_norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        HermitianOperator {
            matrix: self.matrix.scale(factor),
            space: self.space,
        }
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn commutator_norm(&self, other: &CMatrix) -> f64 {
        (&self.matrix * other - other * &self.matrix).norm()
    }

    fn same_space(&self, other: &HermitianOperator) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.space, rhs.space, "operators act on different spaces");
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
            space: self.space,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;

    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.space, rhs.space, "operators act on different spaces");
        HermitianOperator {
            matrix: &self.matrix - &rhs.matrix,
            space: self.space,
        }
    }
}

impl Mul<&HermitianOperator> for f64 {
    type Output = HermitianOperator;

    fn mul(self, rhs: &HermitianOperator) -> HermitianOperator {
        rhs.scaled(self)
    }
}

/// A unit-trace positive semidefinite Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotDensity(format!("trace is {trace}")));
        }
        let min = op.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::NotDensity(format!("minimum eigenvalue is {min:.3e}")));
        }
        Ok(DensityOperator { op })
    }

    pub fn from_matrix(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(space, matrix)?)
    }

    pub(crate) fn from_computed(space: HilbertSpace, matrix: CMatrix) -> Self {
        DensityOperator {
            op: HermitianOperator::from_computed(space, matrix),
        }
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `psi`.
    pub fn pure(space: HilbertSpace, psi: &CVector) -> Result<Self> {
        if psi.len() != space.dim() {
            return Err(Error::DimensionMismatch { rows: psi.len(), cols: 1, dim: space.dim() });
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotDensity(format!("state vector has norm {norm}")));
        }
        Ok(Self::from_computed(space, psi * psi.adjoint()))
    }

    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let n = space.dim();
        Self::from_computed(space, CMatrix::identity(n, n).unscale(n as f64))
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn space(&self) -> HilbertSpace {
        self.op.space()
    }
}

/// Dense Kronecker product of the single-site Pauli matrices, site 0 leftmost.
pub fn materialize_pauli(p: &PauliString, space: HilbertSpace) -> Result<HermitianOperator> {
    space.require_qubits()?;
    if p.len() != space.num_sites() {
        return Err(Error::LengthMismatch { expected: space.num_sites(), got: p.len() });
    }
    let mut matrix = CMatrix::identity(1, 1);
    for label in p.labels() {
        let m = label.matrix();
        let local = CMatrix::from_fn(2, 2, |i, j| m[i][j]);
        matrix = matrix.kronecker(&local);
    }
    Ok(HermitianOperator { matrix, space })
}

/// Hilbert–Schmidt inner product `tr(AB)`.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    a.same_space(b)?;
    // tr(AB) = Σ_ij A_ij B_ji = Σ_ij conj(A_ji) B_ji for Hermitian A.
    let z: Complex64 = a.matrix.iter().zip(b.matrix.iter()).map(|(x, y)| x.conj() * y).sum();
    debug_assert!(z.im.abs() <= 1e-12 * (1.0 + a.hs_norm() * b.hs_norm()));
    Ok(z.re)
}

/// `⟨A⟩_ρ = tr(ρA)`.
pub fn expectation(rho: &DensityOperator, a: &HermitianOperator) -> Result<f64> {
    hs_inner(rho.operator(), a)
}

/// `tr(ρ P)` in O(dim) without materializing `P`.
pub fn pauli_expectation(m: &CMatrix, p: &PauliString) -> Complex64 {
    let (flip, sign, n_y) = p.masks();
    // tr(MP) = Σ_r M[r, c] P[c, r] with c = r ^ flip.
    (0..m.nrows())
        .map(|r| {
            let (col, _) = pauli::entry(r, flip, sign, n_y);
            let (_, value) = pauli::entry(col, flip, sign, n_y);
            m[(r, col)] * value
        })
        .sum()
}

fn check_sites(sites: &[usize], num_sites: usize) -> Result<Vec<usize>> {
    if sites.is_empty() {
        return Err(Error::InvalidSites("site set is empty".into()));
    }
    if sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSites(format!("{sites:?} is not strictly increasing")));
    }
    if let Some(&s) = sites.iter().find(|&&s| s >= num_sites) {
        return Err(Error::InvalidSites(format!("site {s} out of range for {num_sites} sites")));
    }
    Ok((0..num_sites).filter(|s| !sites.contains(s)).collect())
}

/// Partial trace of any operator over the complement of `keep`.
pub fn partial_trace_operator(a: &HermitianOperator, keep: &[usize]) -> Result<HermitianOperator> {
    let space = a.space();
    space.require_qubits()?;
    let m = space.num_sites();
    let traced = check_sites(keep, m)?;
    let kept_dim = 1usize << keep.len();
    let traced_dim = 1usize << traced.len();
    let full = a.matrix();
    let mut out = CMatrix::zeros(kept_dim, kept_dim);
    for t in 0..traced_dim {
        let rows: Vec<usize> = (0..kept_dim)
            .map(|k| linalg::compose_index(m, keep, &traced, k, t))
            .collect();
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &rj) in rows.iter().enumerate() {
                out[(i, j)] += full[(ri, rj)];
            }
        }
    }
    let reduced = HilbertSpace::qubits(keep.len())?;
    Ok(HermitianOperator::from_computed(reduced, out))
}

/// Reduced density operator on the sites in `keep` (strictly increasing, 0-based).
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let op = partial_trace_operator(rho.operator(), keep)?;
    Ok(DensityOperator { op })
}

/// Kronecker product in list order.
pub fn tensor(ops: &[HermitianOperator]) -> Result<HermitianOperator> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyTensor)?;
    let local_dim = first.space.local_dim();
    let mut num_sites = first.space.num_sites();
    let mut matrix = first.matrix.clone();
    for op in rest {
        if op.space.local_dim() != local_dim {
            return Err(Error::SpaceMismatch);
        }
        num_sites += op.space.num_sites();
        matrix = matrix.kronecker(&op.matrix);
    }
    let space = HilbertSpace::new(num_sites, local_dim)?;
    Ok(HermitianOperator { matrix, space })
}

/// `op` acting on `sites` of `space`, identity elsewhere.
pub fn embed(op: &HermitianOperator, sites: &[usize], space: HilbertSpace) -> Result<HermitianOperator> {
    if op.space.num_sites() != sites.len() {
        return Err(Error::LengthMismatch { expected: sites.len(), got: op.space.num_sites() });
    }
    let matrix = embed_matrix(&op.matrix, sites, space)?;
    Ok(HermitianOperator { matrix, space })
}

/// Any square matrix on `sites`, tensored with the identity on the complement.
pub fn embed_matrix(local: &CMatrix, sites: &[usize], space: HilbertSpace) -> Result<CMatrix> {
    space.require_qubits()?;
    let m = space.num_sites();
    let rest = check_sites(sites, m)?;
    let sub_dim = 1usize << sites.len();
    if local.nrows() != sub_dim || local.ncols() != sub_dim {
        return Err(Error::DimensionMismatch { rows: local.nrows(), cols: local.ncols(), dim: sub_dim });
    }
    let rest_dim = 1usize << rest.len();
    let n = space.dim();
    let mut matrix = CMatrix::zeros(n, n);
    for t in 0..rest_dim {
        for i in 0..sub_dim {
            let ri = linalg::compose_index(m, sites, &rest, i, t);
            for j in 0..sub_dim {
                let rj = linalg::compose_index(m, sites, &rest, j, t);
                matrix[(ri, rj)] = local[(i, j)];
            }
        }
    }
    Ok(matrix)
}

/// Hermitian operator from a weighted sum of Pauli strings.
pub fn pauli_sum(space: HilbertSpace, terms: &[(PauliString, f64)]) -> Result<HermitianOperator> {
    let mut acc = HermitianOperator::zeros(space);
    for (p, w) in terms {
        let term = materialize_pauli(p, space)?;
        acc.matrix += term.matrix.scale(*w);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn q(m: usize) -> HilbertSpace {
        HilbertSpace::qubits(m).unwrap()
    }

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn basis_state(m: usize, idx: usize) -> CVector {
        let mut v = CVector::zeros(1 << m);
        v[idx] = c(1.0);
        v
    }

    #[test]
    fn z_and_zz_are_diagonal() {
        let z = materialize_pauli(&ps("Z"), q(1)).unwrap();
        assert_eq!(z.matrix(), &CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(-1.0)])));
        let zz = materialize_pauli(&ps("ZZ"), q(2)).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| zz.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
        assert_abs_diff_eq!(zz.matrix().iter().map(|z| z.norm()).sum::<f64>(), 4.0);
    }

    #[test]
    fn xy_matches_symbolic_expansion() {
        // X⊗Y = [[0, Y], [Y, 0]] with Y = [[0,-i],[i,0]].
        let xy = materialize_pauli(&ps("XY"), q(2)).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 3)] = -i;
        expected[(1, 2)] = i;
        expected[(2, 1)] = -i;
        expected[(3, 0)] = i;
        assert_eq!(xy.matrix(), &expected);
    }

    #[test]
    fn materialize_rejects_bad_inputs() {
        assert!(matches!(
            materialize_pauli(&ps("ZZ"), q(3)),
            Err(Error::LengthMismatch { expected: 3, got: 2 })
        ));
        let qutrit = HilbertSpace::new(1, 3).unwrap();
        assert!(matches!(materialize_pauli(&ps("Z"), qutrit), Err(Error::UnsupportedLocalDim(3))));
    }

    #[test]
    fn row_entry_agrees_with_dense_matrix() {
        for p in PauliString::all(3) {
            let dense = materialize_pauli(&p, q(3)).unwrap();
            for r in 0..8 {
                let (col, v) = p.row_entry(r);
                assert_eq!(dense.matrix()[(r, col)], v, "{p} row {r}");
            }
        }
    }

    #[test]
    fn pauli_orthogonality_exhaustive() {
        for m in 1..=3 {
            let all: Vec<_> = PauliString::all(m)
                .map(|p| materialize_pauli(&p, q(m)).unwrap())
                .collect();
            for (i, a) in all.iter().enumerate() {
                for (j, b) in all.iter().enumerate() {
                    let expected = if i == j { (1 << m) as f64 } else { 0.0 };
                    assert_abs_diff_eq!(hs_inner(a, b).unwrap(), expected, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn single_site_inner_products() {
        let z = materialize_pauli(&ps("Z"), q(1)).unwrap();
        let x = materialize_pauli(&ps("X"), q(1)).unwrap();
        let y = materialize_pauli(&ps("Y"), q(1)).unwrap();
        assert_eq!(hs_inner(&z, &z).unwrap(), 2.0);
        assert_eq!(hs_inner(&x, &y).unwrap(), 0.0);
        let zz = materialize_pauli(&ps("ZZ"), q(2)).unwrap();
        assert!(matches!(hs_inner(&z, &zz), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn hermiticity_is_enforced() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        assert!(matches!(HermitianOperator::new(q(1), m), Err(Error::NotHermitian { .. })));
        let bad_shape = CMatrix::zeros(3, 3);
        assert!(matches!(
            HermitianOperator::new(q(1), bad_shape),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_invariants() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.1);
        m[(1, 1)] = c(-0.1);
        assert!(matches!(DensityOperator::from_matrix(q(1), m), Err(Error::NotDensity(_))));
        let m2 = CMatrix::identity(2, 2);
        assert!(DensityOperator::from_matrix(q(1), m2).is_err());
    }

    #[test]
    fn expectation_examples() {
        let up_up = DensityOperator::pure(q(2), &basis_state(2, 0)).unwrap();
        let zz = materialize_pauli(&ps("ZZ"), q(2)).unwrap();
        assert_abs_diff_eq!(expectation(&up_up, &zz).unwrap(), 1.0);
        assert_abs_diff_eq!(expectation(&up_up, &HermitianOperator::identity(q(2))).unwrap(), 1.0);
        let mixed = DensityOperator::maximally_mixed(q(2));
        for p in PauliString::all(2).skip(1) {
            let op = materialize_pauli(&p, q(2)).unwrap();
            assert_abs_diff_eq!(expectation(&mixed, &op).unwrap(), 0.0);
        }
        assert_abs_diff_eq!(expectation(&mixed, &HermitianOperator::identity(q(2))).unwrap(), 1.0);
    }

    #[test]
    fn fast_pauli_expectation_matches_dense() {
        let up_up = DensityOperator::pure(q(2), &basis_state(2, 1)).unwrap();
        for p in PauliString::all(2) {
            let dense = expectation(&up_up, &materialize_pauli(&p, q(2)).unwrap()).unwrap();
            assert_abs_diff_eq!(pauli_expectation(up_up.matrix(), &p).re, dense, epsilon = 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut r1 = CMatrix::zeros(2, 2);
        r1[(0, 0)] = c(0.7);
        r1[(1, 1)] = c(0.3);
        r1[(0, 1)] = Complex64::new(0.1, 0.2);
        r1[(1, 0)] = Complex64::new(0.1, -0.2);
        let r2 = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.25), c(0.75)]));
        let rho = DensityOperator::from_matrix(q(2), r1.kronecker(&r2)).unwrap();
        let left = partial_trace(&rho, &[0]).unwrap();
        assert!((left.matrix() - &r1).norm() < 1e-15);
        let right = partial_trace(&rho, &[1]).unwrap();
        assert!((right.matrix() - &r2).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let mut psi = CVector::zeros(4);
        psi[0] = c(std::f64::consts::FRAC_1_SQRT_2);
        psi[3] = c(std::f64::consts::FRAC_1_SQRT_2);
        let rho = DensityOperator::pure(q(2), &psi).unwrap();
        let red = partial_trace(&rho, &[0]).unwrap();
        assert!((red.matrix() - CMatrix::identity(2, 2).scale(0.5)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_cat_state_brute_force() {
        let (a, b) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let mut psi = CVector::zeros(16);
        psi[0] = a;
        psi[15] = b;
        let rho = DensityOperator::pure(q(4), &psi).unwrap();
        let red = partial_trace(&rho, &[0, 1]).unwrap();
        // Brute force: ρ̃[i,j] = Σ_t ρ[4i + t, 4j + t].
        let mut oracle = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                for t in 0..4 {
                    oracle[(i, j)] += rho.matrix()[(4 * i + t, 4 * j + t)];
                }
            }
        }
        assert!((red.matrix() - &oracle).norm() < 1e-15);
        let diag: Vec<f64> = (0..4).map(|i| red.matrix()[(i, i)].re).collect();
        assert_abs_diff_eq!(diag[0], 0.36, epsilon = 1e-15);
        assert_abs_diff_eq!(diag[3], 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(red.matrix()[(0, 3)].norm(), 0.0);
    }

    #[test]
    fn partial_trace_rejects_bad_site_sets() {
        let rho = DensityOperator::maximally_mixed(q(3));
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::InvalidSites(_))));
        assert!(matches!(partial_trace(&rho, &[1, 0]), Err(Error::InvalidSites(_))));
        assert!(matches!(partial_trace(&rho, &[0, 3]), Err(Error::InvalidSites(_))));
        assert!(matches!(partial_trace(&rho, &[1, 1]), Err(Error::InvalidSites(_))));
    }

    #[test]
    fn tensor_examples() {
        let z = materialize_pauli(&ps("Z"), q(1)).unwrap();
        let i2 = HermitianOperator::identity(q(1));
        assert_eq!(tensor(std::slice::from_ref(&z)).unwrap(), z);
        assert_eq!(tensor(&[i2.clone(), i2]).unwrap(), HermitianOperator::identity(q(2)));
        assert_eq!(
            tensor(&[z.clone(), z]).unwrap(),
            materialize_pauli(&ps("ZZ"), q(2)).unwrap()
        );
        assert!(matches!(tensor(&[]), Err(Error::EmptyTensor)));
    }

    #[test]
    fn embed_matches_tensor_with_identity() {
        let x = materialize_pauli(&ps("X"), q(1)).unwrap();
        let e = embed(&x, &[1], q(3)).unwrap();
        assert_eq!(e, materialize_pauli(&ps("IXI"), q(3)).unwrap());
        let xy = materialize_pauli(&ps("XY"), q(2)).unwrap();
        let e = embed(&xy, &[0, 2], q(3)).unwrap();
        assert_eq!(e, materialize_pauli(&ps("XIY"), q(3)).unwrap());
    }

    #[test]
    fn pauli_sum_builds_total_spin() {
        let s = pauli_sum(q(2), &[(ps("ZI"), 1.0), (ps("IZ"), 1.0)]).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| s.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![2.0, 0.0, 0.0, -2.0]);
    }
}
