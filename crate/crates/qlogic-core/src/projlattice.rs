//! Lattice operations on the projections of Q(H): orthocomplement, meet,
//! join, order, Sasaki implication, logical equivalence, commutation, and the
//! two-element commutator com(P,Q).

use alloc::vec::Vec;

use crate::linalg::{self, Complex64, ComplexMatrix};
use crate::{Error, TolerancePolicy};

/// Idempotent Hermitian matrix, an element of the logic Q(H).
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: ComplexMatrix,
}

impl Projection {
    /// Wrap a matrix, checking `P² = P = P†` within `op_eq`.
    pub fn new(matrix: ComplexMatrix, tol: &TolerancePolicy) -> Result<Self, Error> {
        if !matrix.is_hermitian(tol) {
            return Err(Error::NotProjection);
        }
        if !matrix.mul(&matrix).approx_eq(&matrix, tol) {
            return Err(Error::NotProjection);
        }
        Ok(Projection { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Projection {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projection {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    /// Rank-one projector onto a single (nonzero) vector.
    pub fn onto_vector(v: &[Complex64], tol: &TolerancePolicy) -> Result<Self, Error> {
        let m = linalg::projector_onto_columnspan(&[v.to_vec()], v.len(), tol)?;
        Ok(Projection { matrix: m })
    }

    /// Projector onto the span of the given vectors.
    pub fn onto_span(
        vectors: &[Vec<Complex64>],
        dim: usize,
        tol: &TolerancePolicy,
    ) -> Result<Self, Error> {
        let m = linalg::projector_onto_columnspan(vectors, dim, tol)?;
        Ok(Projection { matrix: m })
    }

    /// Wrap without validity checks; for internal constructions whose output
    /// is a projection by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Projection { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Rank, via the trace (exact for projections at these tolerances).
    pub fn rank(&self) -> usize {
        libm::round(self.matrix.trace().re) as usize
    }

    pub fn approx_eq(&self, rhs: &Self, tol: &TolerancePolicy) -> bool {
        self.matrix.approx_eq(&rhs.matrix, tol)
    }

    pub fn is_zero(&self, tol: &TolerancePolicy) -> bool {
        self.matrix.max_abs() <= tol.op_eq
    }

    pub fn is_identity(&self, tol: &TolerancePolicy) -> bool {
        self.matrix
            .approx_eq(&ComplexMatrix::identity(self.dim()), tol)
    }

    /// Columns of the matrix; they span the range of the projection.
    pub(crate) fn range_columns(&self) -> Vec<Vec<Complex64>> {
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|i| self.matrix.get(i, j)).collect())
            .collect()
    }
}

/// Orthocomplement `P⊥ = I - P`.
pub fn ortho(p: &Projection) -> Projection {
    Projection::from_matrix_unchecked(ComplexMatrix::identity(p.dim()).sub(p.matrix()))
}

/// Join `P ∨ Q`: projector onto the closed span of the two ranges.
pub fn join(p: &Projection, q: &Projection, tol: &TolerancePolicy) -> Result<Projection, Error> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch);
    }
    // A numerically-zero operand contributes no columns; feeding its noise
    // into the relative rank cutoff would resurrect it to full rank.
    let mut cols = Vec::new();
    if !p.is_zero(tol) {
        cols.extend(p.range_columns());
    }
    if !q.is_zero(tol) {
        cols.extend(q.range_columns());
    }
    Projection::onto_span(&cols, p.dim(), tol)
}

/// Meet `P ∧ Q`: projector onto the intersection of the two ranges, computed
/// as the De Morgan dual of the join.
pub fn meet(p: &Projection, q: &Projection, tol: &TolerancePolicy) -> Result<Projection, Error> {
    Ok(ortho(&join(&ortho(p), &ortho(q), tol)?))
}

/// Order `P ≤ Q`, i.e. range inclusion, tested as `QPQ... ` -> `PQP = P`.
pub fn leq(p: &Projection, q: &Projection, tol: &TolerancePolicy) -> Result<bool, Error> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch);
    }
    let pqp = p.matrix().mul(q.matrix()).mul(p.matrix());
    Ok(pqp.approx_eq(p.matrix(), tol))
}

/// Sasaki implication `P ⇒ Q = P⊥ ∨ (P ∧ Q)`.
pub fn sasaki_implies(
    p: &Projection,
    q: &Projection,
    tol: &TolerancePolicy,
) -> Result<Projection, Error> {
    join(&ortho(p), &meet(p, q, tol)?, tol)
}

/// Logical equivalence `P ↔ Q = (P ⇒ Q) ∧ (Q ⇒ P)`.
pub fn logical_equiv(
    p: &Projection,
    q: &Projection,
    tol: &TolerancePolicy,
) -> Result<Projection, Error> {
    meet(
        &sasaki_implies(p, q, tol)?,
        &sasaki_implies(q, p, tol)?,
        tol,
    )
}

/// Commutation `P ∘| Q`, i.e. `[P,Q] = 0` within `op_eq`.
pub fn commutes(p: &Projection, q: &Projection, tol: &TolerancePolicy) -> Result<bool, Error> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch);
    }
    Ok(p.matrix().commutator(q.matrix()).max_abs() <= tol.op_eq)
}

/// Two-element commutator
/// `com(P,Q) = (P∧Q) ∨ (P∧Q⊥) ∨ (P⊥∧Q) ∨ (P⊥∧Q⊥)`.
pub fn marsden_com(
    p: &Projection,
    q: &Projection,
    tol: &TolerancePolicy,
) -> Result<Projection, Error> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch);
    }
    let (pc, qc) = (ortho(p), ortho(q));
    let a = meet(p, q, tol)?;
    let b = meet(p, &qc, tol)?;
    let c = meet(&pc, q, tol)?;
    let d = meet(&pc, &qc, tol)?;
    join(&join(&a, &b, tol)?, &join(&c, &d, tol)?, tol)
}
