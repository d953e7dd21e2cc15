//! Observables with cached eigendecompositions, spectral families E^X(λ),
//! interval projections, eigen-atoms, bounded function application, and the
//! correspondence with quantum reals (Dedekind-cut spectral families).

use alloc::vec::Vec;

use crate::linalg::{self, ComplexMatrix};
use crate::projlattice::{self, Projection};
use crate::{Error, TolerancePolicy};

/// Hermitian matrix with its spectral decomposition cached at construction.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: Vec<f64>,
    eigenprojectors: Vec<Projection>,
    cluster_tol: f64,
}

impl Observable {
    /// Build from a Hermitian matrix; eigenvalues within the scaled cluster
    /// tolerance are merged into one eigenprojector.
    pub fn new(matrix: ComplexMatrix, tol: &TolerancePolicy) -> Result<Self, Error> {
        let pairs = linalg::hermitian_eig(&matrix, tol)?;
        let cluster_tol = tol.eig_cluster * (1.0 + matrix.max_abs());
        Ok(Observable {
            matrix,
            spectrum: pairs.iter().map(|(l, _)| *l).collect(),
            eigenprojectors: pairs
                .into_iter()
                .map(|(_, p)| Projection::from_matrix_unchecked(p))
                .collect(),
            cluster_tol,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Strictly increasing eigenvalues.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Eigenprojectors, parallel to `spectrum`.
    pub fn eigenprojectors(&self) -> &[Projection] {
        &self.eigenprojectors
    }
}

/// Spectral family `E^X(λ)`: sum of eigenprojectors with eigenvalue ≤ λ.
/// Eigenvalues within the clustering tolerance of λ count as ≤; right
/// continuity must hold when λ is a spectral point known only to round-off.
pub fn spectral_family(x: &Observable, lam: f64) -> Projection {
    let mut acc = ComplexMatrix::zeros(x.dim());
    for (l, p) in x.spectrum.iter().zip(&x.eigenprojectors) {
        if *l <= lam + x.cluster_tol {
            acc = acc.add(p.matrix());
        }
    }
    Projection::from_matrix_unchecked(acc)
}

/// Interval projection `E^X((a,b]) = E^X(b) - E^X(a)`.
pub fn interval_projection(x: &Observable, a: f64, b: f64) -> Result<Projection, Error> {
    if a >= b {
        return Err(Error::EmptyInterval);
    }
    let eb = spectral_family(x, b);
    let ea = spectral_family(x, a);
    Ok(Projection::from_matrix_unchecked(
        eb.matrix().sub(ea.matrix()),
    ))
}

/// `δ(X)`: half the minimum spectral gap, capped at 1. A singleton spectrum
/// has no gaps; we take the cap.
pub fn delta(x: &Observable) -> f64 {
    let mut best = 1.0f64;
    for pair in x.spectrum.windows(2) {
        let half_gap = (pair[1] - pair[0]) / 2.0;
        if half_gap < best {
            best = half_gap;
        }
    }
    best
}

/// Truth value of `X = v`: the eigenprojector of `v` when `v` is a spectral
/// point, zero otherwise. Off-spectrum values within the window
/// `(v-δ, v+δ]` of some eigenvalue still read as "X equals v", which is
/// false; only `|v - λ| ≤ eig_cluster` snaps to the eigenprojector.
pub fn eigen_atom(x: &Observable, v: f64) -> Projection {
    for (l, p) in x.spectrum.iter().zip(&x.eigenprojectors) {
        if libm::fabs(v - l) <= x.cluster_tol {
            return p.clone();
        }
    }
    Projection::zero(x.dim())
}

/// `f(X) = Σ f(λ_i) P_i`, re-clustered so equal values merge.
pub fn apply_function(
    x: &Observable,
    f: impl Fn(f64) -> f64,
    tol: &TolerancePolicy,
) -> Result<Observable, Error> {
    let mut acc = ComplexMatrix::zeros(x.dim());
    for (l, p) in x.spectrum.iter().zip(&x.eigenprojectors) {
        let fl = f(*l);
        if !fl.is_finite() {
            return Err(Error::UndefinedAtSpectrum);
        }
        acc = acc.add(&p.matrix().scale(linalg::Complex64::new(fl, 0.0)));
    }
    Observable::new(acc, tol)
}

/// Finite Dedekind-cut presentation of an observable: cut points with the
/// cumulative spectral projections at them.
#[derive(Debug, Clone)]
pub struct QuantumReal {
    cut_points: Vec<f64>,
    cut_projections: Vec<Projection>,
}

impl QuantumReal {
    /// Build from parallel lists; cut points must be strictly increasing,
    /// projections monotone with the last equal to the identity.
    pub fn new(
        cut_points: Vec<f64>,
        cut_projections: Vec<Projection>,
        tol: &TolerancePolicy,
    ) -> Result<Self, Error> {
        if cut_points.is_empty() || cut_points.len() != cut_projections.len() {
            return Err(Error::NotDedekindCut);
        }
        for pair in cut_points.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::NotDedekindCut);
            }
        }
        for pair in cut_projections.windows(2) {
            if !projlattice::leq(&pair[0], &pair[1], tol)? {
                return Err(Error::NotDedekindCut);
            }
        }
        if !cut_projections.last().unwrap().is_identity(tol) {
            return Err(Error::NotDedekindCut);
        }
        Ok(QuantumReal {
            cut_points,
            cut_projections,
        })
    }

    pub fn cut_points(&self) -> &[f64] {
        &self.cut_points
    }

    pub fn cut_projections(&self) -> &[Projection] {
        &self.cut_projections
    }

    /// The cut projection at `r`: the step function evaluated from the
    /// stored points (0 below the least cut point).
    pub fn at(&self, r: f64) -> Projection {
        let dim = self.cut_projections[0].dim();
        let mut current = Projection::zero(dim);
        for (point, proj) in self.cut_points.iter().zip(&self.cut_projections) {
            if *point <= r {
                current = proj.clone();
            }
        }
        current
    }
}

/// Takeuti correspondence, observable to quantum real: one cut per spectral
/// point, carrying the cumulative spectral family there.
pub fn to_quantum_real(x: &Observable) -> QuantumReal {
    let mut cut_projections = Vec::new();
    let mut acc = ComplexMatrix::zeros(x.dim());
    for p in &x.eigenprojectors {
        acc = acc.add(p.matrix());
        cut_projections.push(Projection::from_matrix_unchecked(acc.clone()));
    }
    QuantumReal {
        cut_points: x.spectrum.clone(),
        cut_projections,
    }
}

/// Takeuti correspondence, quantum real to observable: step heights of the
/// cut family become eigenprojectors, cut points the eigenvalues.
pub fn from_quantum_real(u: &QuantumReal, tol: &TolerancePolicy) -> Result<Observable, Error> {
    // Re-validate: callers may construct QuantumReal values manually.
    let u = QuantumReal::new(u.cut_points.clone(), u.cut_projections.clone(), tol)?;
    let dim = u.cut_projections[0].dim();
    let mut acc = ComplexMatrix::zeros(dim);
    let mut prev = ComplexMatrix::zeros(dim);
    for (point, proj) in u.cut_points.iter().zip(&u.cut_projections) {
        let step = proj.matrix().sub(&prev);
        acc = acc.add(&step.scale(linalg::Complex64::new(*point, 0.0)));
        prev = proj.matrix().clone();
    }
    Observable::new(acc, tol)
}
