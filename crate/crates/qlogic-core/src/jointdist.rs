//! Joint probability distribution functions for jointly determinate
//! observables: existence, construction from eigen-atom meets, moment
//! identities, and the diagonal-mass equality test.

use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::ComplexMatrix;
use crate::projlattice::{self, Projection};
use crate::spectral::Observable;
use crate::truth;
use crate::{Error, TolerancePolicy};

/// Discrete joint distribution over the spectral grid of a tuple of
/// observables. Masses are listed for every grid point, in mixed-radix
/// order with the first axis fastest.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    axes: Vec<(String, Vec<f64>)>,
    masses: Vec<(Vec<f64>, f64)>,
}

impl JointDistribution {
    pub fn axes(&self) -> &[(String, Vec<f64>)] {
        &self.axes
    }

    /// `(spectral tuple, mass)` pairs; masses sum to 1.
    pub fn masses(&self) -> &[(Vec<f64>, f64)] {
        &self.masses
    }

    /// Cumulative distribution function at the given point.
    pub fn cdf(&self, point: &[f64]) -> f64 {
        self.masses
            .iter()
            .filter(|(t, _)| t.iter().zip(point).all(|(v, x)| v <= x))
            .map(|(_, p)| p)
            .sum()
    }

    /// Marginal distribution along one axis: `(value, mass)` pairs.
    pub fn marginal(&self, axis: usize) -> Vec<(f64, f64)> {
        let values = &self.axes[axis].1;
        values
            .iter()
            .map(|&v| {
                let mass = self
                    .masses
                    .iter()
                    .filter(|(t, _)| t[axis] == v)
                    .map(|(_, p)| p)
                    .sum();
                (v, mass)
            })
            .collect()
    }
}

/// Joint determinateness test: `Tr[com(X_1,...,X_n) ρ] = 1` within
/// `prob_clip`.
pub fn jpd_exists(
    xs: &[&Observable],
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    if !rho.is_density(tol) {
        return Err(Error::NotDensityMatrix);
    }
    let com = truth::joint_projection(xs, tol)?;
    let p = truth::probability_of_projection(&com, rho, tol)?;
    Ok(p >= 1.0 - tol.prob_clip)
}

/// Construct the joint probability distribution: point masses at spectral
/// tuples, `mass(t) = Tr[(⋀_i ⟦X_i = t_i⟧) ρ]`. The meet is order
/// independent, so the masses are well defined on the determinate support.
pub fn jpd(
    named_xs: &[(&str, &Observable)],
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<JointDistribution, Error> {
    let xs: Vec<&Observable> = named_xs.iter().map(|(_, x)| *x).collect();
    if !jpd_exists(&xs, rho, tol)? {
        return Err(Error::NotJointlyDeterminate);
    }
    let dim = xs[0].dim();

    let mut masses: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut tuple = alloc::vec![0usize; xs.len()];
    let mut total = 0.0f64;
    loop {
        let mut term = Projection::identity(dim);
        for (x, &idx) in xs.iter().zip(&tuple) {
            term = projlattice::meet(&term, &x.eigenprojectors()[idx], tol)?;
            if term.is_zero(tol) {
                break;
            }
        }
        let mut mass = if term.is_zero(tol) {
            0.0
        } else {
            term.matrix().mul(rho).trace().re
        };
        // Round-off can push a true zero slightly negative; anything worse
        // means the existence precondition failed numerically.
        if mass < 0.0 {
            if mass >= -1e-12 {
                mass = 0.0;
            } else {
                return Err(Error::NotJointlyDeterminate);
            }
        }
        let point: Vec<f64> = xs
            .iter()
            .zip(&tuple)
            .map(|(x, &idx)| x.spectrum()[idx])
            .collect();
        total += mass;
        masses.push((point, mass));

        let mut k = 0;
        loop {
            if k == xs.len() {
                if total <= 0.0 || libm::fabs(total - 1.0) > 1e-6 {
                    return Err(Error::NotJointlyDeterminate);
                }
                for (_, p) in &mut masses {
                    *p /= total;
                }
                return Ok(JointDistribution {
                    axes: named_xs
                        .iter()
                        .map(|(n, x)| (String::from(*n), x.spectrum().to_vec()))
                        .collect(),
                    masses,
                });
            }
            tuple[k] += 1;
            if tuple[k] < xs[k].spectrum().len() {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
    }
}

/// Polynomial in n variables as a sum of monomials
/// `coeff * x_1^e_1 ... x_n^e_n`.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(coeff, exps)| {
                coeff
                    * exps
                        .iter()
                        .zip(point)
                        .map(|(&e, &x)| libm::pow(x, e as f64))
                        .product::<f64>()
            })
            .sum()
    }
}

/// Moment identity of the joint distribution: returns
/// `(Tr[p(f_1(X_1),...,f_n(X_n)) ρ], Σ_t mass(t) p(f_1(t_1),...,f_n(t_n)))`.
/// The operator substitution multiplies factors in the written order.
pub fn moment_check(
    named_xs: &[(&str, &Observable)],
    rho: &ComplexMatrix,
    fs: &[&dyn Fn(f64) -> f64],
    p: &Polynomial,
    tol: &TolerancePolicy,
) -> Result<(f64, f64), Error> {
    if fs.len() != named_xs.len() {
        return Err(Error::DimensionMismatch);
    }
    let dist = jpd(named_xs, rho, tol)?;
    let dim = named_xs[0].1.dim();

    // Transformed observables f_i(X_i).
    let transformed: Vec<crate::spectral::Observable> = named_xs
        .iter()
        .zip(fs)
        .map(|((_, x), f)| crate::spectral::apply_function(x, f, tol))
        .collect::<Result<_, _>>()?;

    let mut op = ComplexMatrix::zeros(dim);
    for (coeff, exps) in &p.terms {
        let mut factor = ComplexMatrix::identity(dim);
        for (x, &e) in transformed.iter().zip(exps) {
            for _ in 0..e {
                factor = factor.mul(x.matrix());
            }
        }
        op = op.add(&factor.scale(crate::linalg::Complex64::new(*coeff, 0.0)));
    }
    let lhs = op.mul(rho).trace().re;

    let rhs = dist
        .masses
        .iter()
        .map(|(point, mass)| {
            let fpoint: Vec<f64> = point.iter().zip(fs).map(|(&t, f)| f(t)).collect();
            mass * p.eval(&fpoint)
        })
        .sum();
    Ok((lhs, rhs))
}

/// Mass of the diagonal `{x = y}` of a two-observable joint distribution.
pub fn diagonal_mass(
    x: (&str, &Observable),
    y: (&str, &Observable),
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<f64, Error> {
    let dist = jpd(&[x, y], rho, tol)?;
    let scale = dist
        .axes
        .iter()
        .flat_map(|(_, vs)| vs.iter())
        .fold(0.0f64, |a, &b| a.max(libm::fabs(b)));
    let same = tol.eig_cluster * (1.0 + scale);
    Ok(dist
        .masses
        .iter()
        .filter(|(t, _)| libm::fabs(t[0] - t[1]) <= same)
        .map(|(_, p)| p)
        .sum())
}
