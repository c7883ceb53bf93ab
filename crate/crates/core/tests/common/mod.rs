#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use symrecon::linalg::{eigh, CMatrix, CVector};
use symrecon::opspace::{materialize_pauli, pauli_sum, HermitianOperator, HilbertSpace, PauliString};
use symrecon::symmetry::SymmetrySpec;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(m: usize) -> HilbertSpace {
    HilbertSpace::qubits(m).unwrap()
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    let v = CVector::from_fn(n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let norm = v.norm();
    v.unscale(norm)
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, space: HilbertSpace) -> HermitianOperator {
    let g = gaussian_matrix(rng, space.dim());
    HermitianOperator::new(space, (&g + g.adjoint()).scale(0.5)).unwrap()
}

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    gaussian_matrix(rng, n).qr().q()
}

/// `U diag(values) U†` with a random unitary `U`.
pub fn hermitian_with_spectrum(rng: &mut ChaCha8Rng, space: HilbertSpace, values: &[f64]) -> HermitianOperator {
    let u = random_unitary(rng, space.dim());
    let d = CMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j { Complex64::new(values[i], 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    let m = &u * d * u.adjoint();
    HermitianOperator::new(space, (&m + m.adjoint()).scale(0.5)).unwrap()
}

pub fn random_density(rng: &mut ChaCha8Rng, space: HilbertSpace) -> symrecon::opspace::DensityOperator {
    let g = gaussian_matrix(rng, space.dim());
    let m = &g * g.adjoint();
    let t = m.trace().re;
    let m = m.unscale(t);
    symrecon::opspace::DensityOperator::from_matrix(space, (&m + m.adjoint()).scale(0.5)).unwrap()
}

pub fn pauli(label: &str) -> PauliString {
    label.parse().unwrap()
}

pub fn pauli_op(label: &str) -> HermitianOperator {
    let p = pauli(label);
    materialize_pauli(&p, q(p.len())).unwrap()
}

fn site_string(m: usize, sites: &[usize], letter: char) -> PauliString {
    let s: String = (0..m).map(|j| if sites.contains(&j) { letter } else { 'I' }).collect();
    pauli(&s)
}

/// `Σ_j σ_z^j`.
pub fn total_sz(m: usize) -> HermitianOperator {
    let terms: Vec<(PauliString, f64)> = (0..m).map(|j| (site_string(m, &[j], 'Z'), 1.0)).collect();
    pauli_sum(q(m), &terms).unwrap()
}

/// `Σ_j σ_z^j σ_z^{j+1}` on an open chain; `σ_z` alone for one site.
pub fn zz_chain(m: usize) -> HermitianOperator {
    if m == 1 {
        return pauli_op("Z");
    }
    let terms: Vec<(PauliString, f64)> = (0..m - 1).map(|j| (site_string(m, &[j, j + 1], 'Z'), 1.0)).collect();
    pauli_sum(q(m), &terms).unwrap()
}

pub fn all_z(m: usize) -> PauliString {
    site_string(m, &(0..m).collect::<Vec<_>>(), 'Z')
}

/// The four spec families used across the suites: trivial, ZZ-type,
/// global spin flip `⊗σ_z` and total `S_z`.
pub fn spec_families(m: usize) -> Vec<(&'static str, SymmetrySpec)> {
    let flip = materialize_pauli(&all_z(m), q(m)).unwrap().into_matrix();
    vec![
        ("trivial", SymmetrySpec::trivial(q(m))),
        ("zz", SymmetrySpec::generated_by(zz_chain(m))),
        ("flip", SymmetrySpec::new(q(m), vec![], vec![flip]).unwrap()),
        ("total-sz", SymmetrySpec::generated_by(total_sz(m))),
    ]
}

/// Dimension over ℂ of `{X : AX = XA}` from the singular values of the
/// commutator superoperator `X ↦ AX − XA` acting on column-stacked `X`.
pub fn brute_force_commutant_dim(a: &CMatrix) -> usize {
    let n = a.nrows();
    let mut sup = DMatrix::<Complex64>::zeros(n * n, n * n);
    // vec(AX) = (I ⊗ A) vec(X), vec(XA) = (Aᵀ ⊗ I) vec(X), column-major vec.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                sup[(i + j * n, k + j * n)] += a[(i, k)];
                sup[(i + j * n, i + k * n)] -= a[(k, j)];
            }
        }
    }
    let sv = sup.singular_values();
    let scale = sv.max().max(1.0);
    sv.iter().filter(|s| **s <= 1e-9 * scale).count()
}

/// Eigenvector of `a` belonging to the `k`-th smallest eigenvalue.
pub fn eigvec(a: &CMatrix, k: usize) -> (f64, CVector) {
    let (values, vectors) = eigh(a);
    (values[k], vectors.column(k).into_owned())
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
