//! Finite-dimensional von Neumann algebra machinery: commutants, generated
//! algebras via the double commutant, the set commutator com(A) through its
//! joint-kernel characterization, and cyclic subspaces.

use alloc::vec::Vec;

use crate::linalg::{self, Complex64, ComplexMatrix};
use crate::projlattice::Projection;
use crate::{Error, TolerancePolicy};

/// Basis of a self-adjoint unital algebra of matrices, orthonormal under the
/// Hilbert-Schmidt inner product.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    dim: usize,
    basis: Vec<ComplexMatrix>,
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Dimension of the algebra as a linear space.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// True iff `m` lies in the linear span of the basis, decided by the
    /// Hilbert-Schmidt projection residual against `op_eq`.
    pub fn span_contains(&self, m: &ComplexMatrix, tol: &TolerancePolicy) -> bool {
        if m.dim() != self.dim {
            return false;
        }
        let mut residual = m.clone();
        for b in &self.basis {
            // HS inner product <b, residual> = Tr[b† residual].
            let coeff = b.adjoint().mul(&residual).trace();
            residual = residual.sub(&b.scale(coeff));
        }
        residual.max_abs() <= tol.op_eq * (1.0 + m.max_abs())
    }
}

/// Row-major vectorization: `vec(G X - X G) = (G ⊗ I - I ⊗ Gᵀ) vec(X)`.
fn mat_of(dim: usize, v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_entries(dim, v.to_vec()).expect("finite kernel-basis entries")
}

fn commutation_superop(g: &ComplexMatrix) -> ComplexMatrix {
    let dim = g.dim();
    let id = ComplexMatrix::identity(dim);
    linalg::tensor_product(g, &id).sub(&linalg::tensor_product(&id, &g.transpose()))
}

/// Commutant of the generators in B(H): an orthonormal basis of
/// `{X : XG = GX for all G}`, computed as the joint null space of the
/// commutation maps over matrix space. Generators are closed under adjoint
/// before solving.
pub fn commutant(
    generators: &[ComplexMatrix],
    dim: usize,
    tol: &TolerancePolicy,
) -> Result<AlgebraBasis, Error> {
    let mut supers = Vec::new();
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch);
        }
        supers.push(commutation_superop(g));
        supers.push(commutation_superop(&g.adjoint()));
    }
    let null = linalg::kernel_basis(&supers, dim * dim, tol)?;
    Ok(AlgebraBasis {
        dim,
        basis: null.iter().map(|v| mat_of(dim, v)).collect(),
    })
}

/// Von Neumann algebra generated by the given matrices: the double commutant.
pub fn generated_algebra(
    generators: &[ComplexMatrix],
    dim: usize,
    tol: &TolerancePolicy,
) -> Result<AlgebraBasis, Error> {
    let first = commutant(generators, dim, tol)?;
    commutant(&first.basis, dim, tol)
}

/// Set commutator `com(A)`: projector onto
/// `{ψ : [A,B]ψ = 0 for all A,B in the generated algebra}`, computed from
/// pairwise commutators of the algebra basis (bilinearity makes basis pairs
/// equivalent to all pairs).
pub fn set_commutator(
    generators: &[ComplexMatrix],
    dim: usize,
    tol: &TolerancePolicy,
) -> Result<Projection, Error> {
    let alg = generated_algebra(generators, dim, tol)?;
    let mut comms = Vec::new();
    for (i, a) in alg.basis.iter().enumerate() {
        for b in alg.basis.iter().skip(i + 1) {
            comms.push(a.commutator(b));
        }
    }
    let k = linalg::kernel_projector(&comms, dim, tol)?;
    Ok(Projection::from_matrix_unchecked(k))
}

/// Cyclic subspace `C(A_1,...,A_n, ρ) = ({A_i}'' ρ H)⊥⊥` as a projection:
/// the span of algebra elements applied to the support vectors of `ρ`.
pub fn cyclic_subspace(
    generators: &[ComplexMatrix],
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<Projection, Error> {
    let dim = rho.dim();
    if !rho.is_density(tol) {
        return Err(Error::NotDensityMatrix);
    }
    let alg = generated_algebra(generators, dim, tol)?;
    // Support vectors of rho: eigenvectors with non-negligible eigenvalue.
    let (values, vecs) = linalg::eig_vectors(rho, tol)?;
    let lam_max = values.iter().fold(0.0f64, |a, &b| a.max(b));
    let cutoff = tol.rank_rel * lam_max;
    let mut spanning = Vec::new();
    for (k, &l) in values.iter().enumerate() {
        if l > cutoff && l > 0.0 {
            let v: Vec<Complex64> = (0..dim).map(|r| vecs.get(r, k)).collect();
            for b in &alg.basis {
                spanning.push(b.matvec(&v));
            }
        }
    }
    Projection::onto_span(&spanning, dim, tol)
}
