//! Dense complex linear algebra: Hermitian eigendecomposition, Kronecker
//! products, partial trace over the probe factor, and span/kernel projectors.
//!
//! Everything is double precision; rank decisions go through singular values
//! against `rank_rel * (largest singular value)`, never exact zero tests.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, TolerancePolicy};

pub type Complex64 = num_complex::Complex<f64>;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square matrix of complex numbers, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C_ONE);
        }
        m
    }

    /// Build from a row-major entry list; must be `dim * dim` long and finite.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self, Error> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch);
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFiniteEntry);
        }
        Ok(ComplexMatrix { dim, data: entries })
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == C_ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Max-entry norm `max_ij |m_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(0.0, |a, b| if b > a { b } else { a })
    }

    /// Matrix commutator `[self, rhs] = self*rhs - rhs*self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(v.len(), self.dim);
        let n = self.dim;
        let mut out = vec![C_ZERO; n];
        for (i, out_i) in out.iter_mut().enumerate() {
            let mut acc = C_ZERO;
            for (j, vj) in v.iter().enumerate() {
                acc += self.get(i, j) * vj;
            }
            *out_i = acc;
        }
        out
    }

    /// Outer product `v w†` embedded as a dim x dim matrix.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        debug_assert_eq!(v.len(), w.len());
        let n = v.len();
        let mut m = Self::zeros(n);
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m.set(i, j, vi * wj.conj());
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: &TolerancePolicy) -> bool {
        self.sub(&self.adjoint()).max_abs() <= tol.op_eq
    }

    /// True iff `self` and `rhs` agree within `op_eq` in the max-entry norm.
    pub fn approx_eq(&self, rhs: &Self, tol: &TolerancePolicy) -> bool {
        self.dim == rhs.dim && self.sub(rhs).max_abs() <= tol.op_eq
    }

    /// Positive semidefinite within `op_eq` (Hermitian and min eigenvalue
    /// above `-op_eq`).
    pub fn is_positive(&self, tol: &TolerancePolicy) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match hermitian_eig(self, tol) {
            Ok(pairs) => pairs.iter().all(|(l, _)| *l >= -tol.op_eq),
            Err(_) => false,
        }
    }

    /// Density matrix test: positive with unit trace within `op_eq`.
    pub fn is_density(&self, tol: &TolerancePolicy) -> bool {
        self.is_positive(tol) && libm::fabs(self.trace().re - 1.0) <= tol.op_eq
    }
}

/// Kronecker product with the system factor first: the row index of the
/// result is `i_a * dim(b) + i_b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for ia in 0..da {
        for ja in 0..da {
            let x = a.get(ia, ja);
            if x == C_ZERO {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out.set(ia * db + ib, ja * db + jb, x * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// Partial trace over the probe (second) tensor factor.
pub fn partial_trace_probe(
    m: &ComplexMatrix,
    sys_dim: usize,
    probe_dim: usize,
) -> Result<ComplexMatrix, Error> {
    if m.dim() != sys_dim * probe_dim {
        return Err(Error::DimensionMismatch);
    }
    let mut out = ComplexMatrix::zeros(sys_dim);
    for i in 0..sys_dim {
        for j in 0..sys_dim {
            let mut acc = C_ZERO;
            for k in 0..probe_dim {
                acc += m.get(i * probe_dim + k, j * probe_dim + k);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Returns `(eigenvalue, eigenprojector)` pairs with strictly increasing
/// eigenvalues after clustering within `eig_cluster * (1 + max|entry|)`.
/// The projectors are mutually orthogonal and sum to the identity.
pub fn hermitian_eig(
    m: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<Vec<(f64, ComplexMatrix)>, Error> {
    if !m.is_hermitian(tol) {
        return Err(Error::NotHermitian);
    }
    let (values, vectors) = jacobi_eig(m);
    let cluster_tol = tol.eig_cluster * (1.0 + m.max_abs());

    // Sort eigenpairs, then merge eigenvalues within the cluster tolerance
    // into a single eigenprojector.
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());

    let mut out: Vec<(f64, ComplexMatrix)> = Vec::new();
    let mut idx = 0;
    while idx < n {
        let mut members = vec![order[idx]];
        while idx + 1 < n && values[order[idx + 1]] - values[order[idx]] <= cluster_tol {
            idx += 1;
            members.push(order[idx]);
        }
        idx += 1;
        let lambda = members.iter().map(|&k| values[k]).sum::<f64>() / members.len() as f64;
        let mut proj = ComplexMatrix::zeros(n);
        for &k in &members {
            let col: Vec<Complex64> = (0..n).map(|r| vectors.get(r, k)).collect();
            proj = proj.add(&ComplexMatrix::outer(&col, &col));
        }
        out.push((lambda, proj));
    }
    Ok(out)
}

/// Cyclic Jacobi eigensolver for Hermitian matrices. Returns the raw
/// eigenvalues and the unitary of eigenvectors (as columns), unsorted.
fn jacobi_eig(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.max_abs().max(1.0);
    let conv = 1e-14 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a.get(p, q);
                if z.norm() > off {
                    off = z.norm();
                }
            }
        }
        if off <= conv {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a.get(p, q);
                let abs_z = z.norm();
                if abs_z <= conv * 1e-2 {
                    continue;
                }
                // Phase that makes the (p,q) entry real positive, then a
                // real Jacobi rotation zeroing it.
                let phase = z / Complex64::new(abs_z, 0.0);
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * abs_z);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;

                // R acts on coordinates (p,q):
                //   r_pp = c, r_pq = s, r_qp = -s * conj(phase), r_qq = c * conj(phase)
                let r_pp = Complex64::new(c, 0.0);
                let r_pq = Complex64::new(s, 0.0);
                let r_qp = -Complex64::new(s, 0.0) * phase.conj();
                let r_qq = Complex64::new(c, 0.0) * phase.conj();

                // A <- R† A R ; V <- V R
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * r_pp + akq * r_qp);
                    a.set(k, q, akp * r_pq + akq * r_qq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, r_pp.conj() * apk + r_qp.conj() * aqk);
                    a.set(q, k, r_pq.conj() * apk + r_qq.conj() * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * r_pp + vkq * r_qp);
                    v.set(k, q, vkp * r_pq + vkq * r_qq);
                }
            }
        }
    }

    let values = (0..n).map(|i| a.get(i, i).re).collect();
    (values, v)
}

/// Hermitian eigendecomposition without clustering: raw eigenvalues and the
/// unitary of eigenvectors as columns.
pub(crate) fn eig_vectors(
    m: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<(Vec<f64>, ComplexMatrix), Error> {
    if !m.is_hermitian(tol) {
        return Err(Error::NotHermitian);
    }
    Ok(jacobi_eig(m))
}

/// Orthonormal basis of the joint kernel of the given matrices.
pub(crate) fn kernel_basis(
    ms: &[ComplexMatrix],
    dim: usize,
    tol: &TolerancePolicy,
) -> Result<Vec<Vec<Complex64>>, Error> {
    for m in ms {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch);
        }
    }
    // A numerically-zero operator imposes no constraint; feeding its noise
    // into the relative cutoff would turn it into a full-rank constraint.
    let ms: Vec<&ComplexMatrix> = ms.iter().filter(|m| m.max_abs() > tol.op_eq).collect();
    if ms.is_empty() {
        return Ok((0..dim)
            .map(|i| {
                let mut v = vec![C_ZERO; dim];
                v[i] = C_ONE;
                v
            })
            .collect());
    }
    let mut g = ComplexMatrix::zeros(dim);
    for m in &ms {
        g = g.add(&m.adjoint().mul(m));
    }
    let (values, vecs) = jacobi_eig(&g);
    // Kernel decision on the singular values of the PSD Gram itself; square
    // roots would amplify machine-epsilon eigenvalue noise past the cutoff.
    let sigma_max = values.iter().fold(0.0f64, |a, &l| a.max(l));
    let cutoff = tol.rank_rel * sigma_max;
    let mut basis = Vec::new();
    for (k, &l) in values.iter().enumerate() {
        if l <= cutoff {
            basis.push((0..dim).map(|r| vecs.get(r, k)).collect());
        }
    }
    Ok(basis)
}

/// Projector onto the column span of the given vectors. Rank is decided by
/// singular values against `rank_rel * sigma_max`; an empty list yields the
/// zero matrix.
pub fn projector_onto_columnspan(
    vectors: &[Vec<Complex64>],
    dim: usize,
    tol: &TolerancePolicy,
) -> Result<ComplexMatrix, Error> {
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch);
        }
    }
    if vectors.is_empty() {
        return Ok(ComplexMatrix::zeros(dim));
    }
    // Gram-style: M = sum_v v v† is PSD with the same range as the span;
    // its eigenvalues are squared singular values of the stacked matrix.
    let mut m = ComplexMatrix::zeros(dim);
    for v in vectors {
        m = m.add(&ComplexMatrix::outer(v, v));
    }
    range_projector_of_psd(&m, tol)
}

/// Projector onto the range of a PSD matrix. The rank decision uses the
/// singular values of the PSD matrix itself (its eigenvalues) against
/// `rank_rel * sigma_max`; taking square roots first would amplify
/// machine-epsilon eigenvalue noise above the relative cutoff.
fn range_projector_of_psd(
    m: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ComplexMatrix, Error> {
    let pairs = hermitian_eig(m, tol)?;
    let sigma_max = pairs.iter().map(|(l, _)| l.max(0.0)).fold(0.0f64, f64::max);
    let cutoff = tol.rank_rel * sigma_max;
    let mut proj = ComplexMatrix::zeros(m.dim());
    for (l, p) in &pairs {
        if *l > cutoff && *l > 0.0 {
            proj = proj.add(p);
        }
    }
    Ok(proj)
}

/// Projector onto the joint kernel of the given matrices. An empty list
/// yields the identity (everything is in the kernel of no condition).
pub fn kernel_projector(
    ms: &[ComplexMatrix],
    dim: usize,
    tol: &TolerancePolicy,
) -> Result<ComplexMatrix, Error> {
    for m in ms {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch);
        }
    }
    // Numerically-zero operators impose no constraint (see kernel_basis).
    let ms: Vec<&ComplexMatrix> = ms.iter().filter(|m| m.max_abs() > tol.op_eq).collect();
    if ms.is_empty() {
        return Ok(ComplexMatrix::identity(dim));
    }
    // ker(m_1) ∩ ... ∩ ker(m_k) = ker(sum m_i† m_i), a PSD matrix whose small
    // singular directions are the joint kernel.
    let mut g = ComplexMatrix::zeros(dim);
    for m in &ms {
        g = g.add(&m.adjoint().mul(m));
    }
    // Rank decision on the singular values of the PSD matrix itself (its
    // eigenvalues); see range_projector_of_psd for why no square roots.
    let pairs = hermitian_eig(&g, tol)?;
    let sigma_max = pairs.iter().map(|(l, _)| l.max(0.0)).fold(0.0f64, f64::max);
    let cutoff = tol.rank_rel * sigma_max;
    let mut proj = ComplexMatrix::zeros(dim);
    for (l, p) in &pairs {
        if *l <= cutoff {
            proj = proj.add(p);
        }
    }
    Ok(proj)
}
