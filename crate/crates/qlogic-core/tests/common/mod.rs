//! Seeded random generators shared by the integration suites.
#![allow(dead_code)] // each test binary uses a subset of these helpers

use qlogic_core::linalg::{self, Complex64, ComplexMatrix};
use qlogic_core::projlattice::{self, Projection};
use qlogic_core::spectral::Observable;
use qlogic_core::TolerancePolicy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let entries = (0..dim * dim).map(|_| rand_c(rng)).collect();
    ComplexMatrix::from_entries(dim, entries).expect("finite entries")
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let b = random_matrix(rng, dim);
    b.add(&b.adjoint()).scale(Complex64::new(0.5, 0.0))
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| rand_c(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random unitary via Gram-Schmidt on generic random vectors.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < dim {
        let mut v = random_vector(rng, dim);
        for u in &cols {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut m = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m.set(i, j, z);
        }
    }
    m
}

pub fn random_projection(rng: &mut ChaCha8Rng, dim: usize, tol: &TolerancePolicy) -> Projection {
    let k = rng.gen_range(0..=dim);
    if k == 0 {
        return Projection::zero(dim);
    }
    let vecs: Vec<Vec<Complex64>> = (0..k).map(|_| random_vector(rng, dim)).collect();
    Projection::onto_span(&vecs, dim, tol).expect("span projector")
}

pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let b = random_matrix(rng, dim);
    let psd = b.mul(&b.adjoint());
    let tr = psd.trace().re;
    psd.scale(Complex64::new(1.0 / tr, 0.0))
}

pub fn random_vector_state(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let v = random_vector(rng, dim);
    ComplexMatrix::outer(&v, &v)
}

/// Random observable with eigenvalues drawn from a small integer set, so
/// degenerate spectra occur with sizeable probability.
pub fn random_observable(rng: &mut ChaCha8Rng, dim: usize, tol: &TolerancePolicy) -> Observable {
    let u = random_unitary(rng, dim);
    let values: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2i32..=2) as f64).collect();
    let m = u.mul(&ComplexMatrix::diag(&values)).mul(&u.adjoint());
    // Round-off symmetrization keeps the Hermiticity check happy.
    let m = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
    Observable::new(m, tol).expect("hermitian by construction")
}

/// Family of observables diagonal in a common random basis; mutually
/// commuting by construction.
pub fn random_commuting_family(
    rng: &mut ChaCha8Rng,
    dim: usize,
    n: usize,
    tol: &TolerancePolicy,
) -> (Vec<Observable>, Vec<Vec<f64>>) {
    let (obs, diags, _) = random_commuting_family_with_basis(rng, dim, n, tol);
    (obs, diags)
}

/// Like [`random_commuting_family`], also returning the diagonalizing
/// unitary (columns are the common eigenbasis).
pub fn random_commuting_family_with_basis(
    rng: &mut ChaCha8Rng,
    dim: usize,
    n: usize,
    tol: &TolerancePolicy,
) -> (Vec<Observable>, Vec<Vec<f64>>, ComplexMatrix) {
    let u = random_unitary(rng, dim);
    let mut obs = Vec::new();
    let mut diags = Vec::new();
    for _ in 0..n {
        let values: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2i32..=2) as f64).collect();
        let m = u.mul(&ComplexMatrix::diag(&values)).mul(&u.adjoint());
        let m = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
        obs.push(Observable::new(m, tol).expect("hermitian"));
        diags.push(values);
    }
    (obs, diags, u)
}

/// Conjunction probability oracle for a commuting family:
/// `Tr[E^{X1}(x1) ... E^{Xn}(xn) rho]`.
pub fn born_conjunction_oracle(obs: &[Observable], cutoffs: &[f64], rho: &ComplexMatrix) -> f64 {
    // For commuting observables the conjunction probability is
    // Tr[E^{X1}(x1) ... E^{Xn}(xn) rho].
    let dim = rho.dim();
    let mut prod = ComplexMatrix::identity(dim);
    for (x, &c) in obs.iter().zip(cutoffs) {
        prod = prod.mul(qlogic_core::spectral::spectral_family(x, c).matrix());
    }
    prod.mul(rho).trace().re
}

pub fn leq(p: &Projection, q: &Projection, tol: &TolerancePolicy) -> bool {
    projlattice::leq(p, q, tol).expect("same dimension")
}

/// Projector onto the intersection of eigenspaces, computed through the
/// kernel route `ker Σ(I - P_i)` — independent of the lattice meet.
pub fn intersection_via_kernel(
    projs: &[&Projection],
    dim: usize,
    tol: &TolerancePolicy,
) -> ComplexMatrix {
    let id = ComplexMatrix::identity(dim);
    let complements: Vec<ComplexMatrix> = projs.iter().map(|p| id.sub(p.matrix())).collect();
    linalg::kernel_projector(&complements, dim, tol).expect("kernel projector")
}
