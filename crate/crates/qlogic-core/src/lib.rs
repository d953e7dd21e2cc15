//! Finite-dimensional quantum logic engine.
//!
//! Dense complex linear algebra, the projection lattice of a Hilbert space,
//! finite von Neumann algebra machinery, spectral families, an observational
//! proposition language with projection-valued truth values and Born
//! probabilities, joint probability distributions for jointly determinate
//! observables, and measuring processes with their POVMs.
//!
//! The crate is `no_std` (with `alloc`); all state is immutable after
//! construction and every operation is a pure function.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod jointdist;
pub mod linalg;
pub mod measurement;
pub mod opalgebra;
pub mod proplang;
pub mod spectral;
pub mod truth;

pub use linalg::{Complex64, ComplexMatrix};
pub use projlattice::Projection;
pub use spectral::{Observable, QuantumReal};

pub mod projlattice;

use core::fmt;

/// Numerical tolerance policy shared by every operation in the crate.
///
/// `eig_cluster` is a base value; eigenvalue clustering scales it by
/// `1 + max|entry|` of the matrix being decomposed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Absolute eigenvalue-merge threshold (before per-matrix scaling).
    pub eig_cluster: f64,
    /// Relative singular-value cutoff for rank decisions.
    pub rank_rel: f64,
    /// Operator-equality threshold in the max-entry norm.
    pub op_eq: f64,
    /// Probability clamp slack around [0, 1].
    pub prob_clip: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        // Double precision at dims up to ~64.
        TolerancePolicy {
            eig_cluster: 1e-8,
            rank_rel: 1e-10,
            op_eq: 1e-8,
            prob_clip: 1e-10,
        }
    }
}

impl TolerancePolicy {
    /// Policy with `op_eq` replaced, other fields at their defaults.
    pub fn with_op_eq(op_eq: f64) -> Self {
        TolerancePolicy {
            op_eq,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let ok = |v: f64| v > 0.0 && v < 1e-2;
        if ok(self.eig_cluster) && ok(self.rank_rel) && ok(self.op_eq) && ok(self.prob_clip) {
            Ok(())
        } else {
            Err(Error::InvalidTolerance)
        }
    }
}

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    NotHermitian,
    DimensionMismatch,
    NotProjection,
    NotDensityMatrix,
    NotUnitary,
    EmptyInterval,
    UndefinedAtSpectrum,
    NotDedekindCut,
    UnknownObservable(alloc::string::String),
    UnknownState(alloc::string::String),
    ProbabilityOutOfRange(f64),
    NotJointlyDeterminate,
    NotATautology,
    MalformedPovm,
    InvalidTolerance,
    NonFiniteEntry,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian => write!(f, "matrix is not Hermitian"),
            Error::DimensionMismatch => write!(f, "dimension mismatch"),
            Error::NotProjection => write!(f, "matrix is not a projection"),
            Error::NotDensityMatrix => write!(f, "state is not a density matrix"),
            Error::NotUnitary => write!(f, "matrix is not unitary"),
            Error::EmptyInterval => write!(f, "interval is empty"),
            Error::UndefinedAtSpectrum => write!(f, "function undefined at a spectral point"),
            Error::NotDedekindCut => write!(f, "cut family violates Dedekind-cut invariants"),
            Error::UnknownObservable(n) => write!(f, "unknown observable `{n}`"),
            Error::UnknownState(n) => write!(f, "unknown state `{n}`"),
            Error::ProbabilityOutOfRange(p) => {
                write!(f, "probability {p} outside [0,1] beyond clamp slack")
            }
            Error::NotJointlyDeterminate => write!(f, "observables are not jointly determinate"),
            Error::NotATautology => write!(f, "propositional skeleton is not a tautology"),
            Error::MalformedPovm => write!(f, "POVM violates positivity or monotonicity"),
            Error::InvalidTolerance => write!(f, "tolerance values must lie in (0, 1e-2)"),
            Error::NonFiniteEntry => write!(f, "matrix entry is NaN or infinite"),
        }
    }
}
