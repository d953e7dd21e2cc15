//! Projection-valued truth assignment for observational propositions,
//! Born probabilities, holds-in-state, contextual well-formedness, and
//! transfer-principle instance checks.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::ComplexMatrix;
use crate::opalgebra;
use crate::projlattice::{self, Projection};
use crate::proplang::{self, Prop};
use crate::spectral::{self, Observable};
use crate::{Error, TolerancePolicy};

/// Named observables and states on a common Hilbert space.
#[derive(Debug, Clone)]
pub struct Model {
    dim: usize,
    observables: BTreeMap<String, Observable>,
    states: BTreeMap<String, ComplexMatrix>,
    tol: TolerancePolicy,
}

impl Model {
    pub fn new(dim: usize, tol: TolerancePolicy) -> Result<Self, Error> {
        tol.validate()?;
        Ok(Model {
            dim,
            observables: BTreeMap::new(),
            states: BTreeMap::new(),
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> &TolerancePolicy {
        &self.tol
    }

    pub fn add_observable(&mut self, name: &str, obs: Observable) -> Result<(), Error> {
        if obs.dim() != self.dim {
            return Err(Error::DimensionMismatch);
        }
        self.observables.insert(name.into(), obs);
        Ok(())
    }

    pub fn add_state(&mut self, name: &str, rho: ComplexMatrix) -> Result<(), Error> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch);
        }
        if !rho.is_density(&self.tol) {
            return Err(Error::NotDensityMatrix);
        }
        self.states.insert(name.into(), rho);
        Ok(())
    }

    pub fn observable(&self, name: &str) -> Result<&Observable, Error> {
        self.observables
            .get(name)
            .ok_or_else(|| Error::UnknownObservable(name.into()))
    }

    pub fn state(&self, name: &str) -> Result<&ComplexMatrix, Error> {
        self.states
            .get(name)
            .ok_or_else(|| Error::UnknownState(name.into()))
    }

    pub fn observables(&self) -> &BTreeMap<String, Observable> {
        &self.observables
    }

    pub fn states(&self) -> &BTreeMap<String, ComplexMatrix> {
        &self.states
    }
}

/// Truth value ⟦φ⟧: recursive evaluation by rules (T1)-(T5) and (D2).
pub fn truth_value(ast: &Prop, model: &Model) -> Result<Projection, Error> {
    let tol = &model.tol;
    match ast {
        Prop::Leq(name, x) => Ok(spectral::spectral_family(model.observable(name)?, *x)),
        Prop::EqConst(name, x) => Ok(spectral::eigen_atom(model.observable(name)?, *x)),
        Prop::InInterval(name, a, b) => {
            spectral::interval_projection(model.observable(name)?, *a, *b)
        }
        Prop::EqObs(a, b) => equality_projection(model.observable(a)?, model.observable(b)?, tol),
        Prop::Joint(names) => {
            let obs: Vec<&Observable> = names
                .iter()
                .map(|n| model.observable(n))
                .collect::<Result<_, _>>()?;
            joint_projection(&obs, tol)
        }
        Prop::Not(inner) => Ok(projlattice::ortho(&truth_value(inner, model)?)),
        Prop::And(l, r) => projlattice::meet(&truth_value(l, model)?, &truth_value(r, model)?, tol),
        Prop::Or(l, r) => projlattice::join(&truth_value(l, model)?, &truth_value(r, model)?, tol),
    }
}

/// Truth value of `X = Y` (T5): projector onto
/// `{ψ : E^X(λ)ψ = E^Y(λ)ψ for all λ}`. Both spectral families are step
/// functions, so sampling λ at the union of the spectra is exact.
pub fn equality_projection(
    x: &Observable,
    y: &Observable,
    tol: &TolerancePolicy,
) -> Result<Projection, Error> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch);
    }
    let mut lambdas: Vec<f64> = x.spectrum().iter().chain(y.spectrum()).copied().collect();
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let diffs: Vec<ComplexMatrix> = lambdas
        .iter()
        .map(|&l| {
            spectral::spectral_family(x, l)
                .matrix()
                .sub(spectral::spectral_family(y, l).matrix())
        })
        .collect();
    let k = crate::linalg::kernel_projector(&diffs, x.dim(), tol)?;
    Ok(Projection::from_matrix_unchecked(k))
}

/// Truth value of joint determinateness (T4): the set commutator of the
/// algebra generated by the observables.
pub fn joint_projection(xs: &[&Observable], tol: &TolerancePolicy) -> Result<Projection, Error> {
    let dim = match xs.first() {
        Some(x) => x.dim(),
        None => return Err(Error::DimensionMismatch),
    };
    if xs.iter().any(|x| x.dim() != dim) {
        return Err(Error::DimensionMismatch);
    }
    let gens: Vec<ComplexMatrix> = xs.iter().map(|x| x.matrix().clone()).collect();
    opalgebra::set_commutator(&gens, dim, tol)
}

/// Finite-spectrum joint determinateness as the paper's explicit sup:
/// the join over all spectral tuples of the meet of eigen-atoms.
pub fn finite_joint_sup(xs: &[&Observable], tol: &TolerancePolicy) -> Result<Projection, Error> {
    let dim = match xs.first() {
        Some(x) => x.dim(),
        None => return Err(Error::DimensionMismatch),
    };
    if xs.iter().any(|x| x.dim() != dim) {
        return Err(Error::DimensionMismatch);
    }
    let mut acc = Projection::zero(dim);
    let mut tuple = alloc::vec![0usize; xs.len()];
    loop {
        let mut term = Projection::identity(dim);
        for (x, &idx) in xs.iter().zip(&tuple) {
            let atom = &x.eigenprojectors()[idx];
            term = projlattice::meet(&term, atom, tol)?;
            if term.is_zero(tol) {
                break;
            }
        }
        acc = projlattice::join(&acc, &term, tol)?;
        // Advance the mixed-radix tuple over the spectra.
        let mut k = 0;
        loop {
            if k == xs.len() {
                return Ok(acc);
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

/// Finite-spectrum equality as the paper's explicit sup:
/// the join over `x ∈ Sp(X)` of `⟦X=x⟧ ∧ ⟦Y=x⟧`.
pub fn finite_equality_sup(
    x: &Observable,
    y: &Observable,
    tol: &TolerancePolicy,
) -> Result<Projection, Error> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch);
    }
    let mut acc = Projection::zero(x.dim());
    for (v, px) in x.spectrum().iter().zip(x.eigenprojectors()) {
        let py = spectral::eigen_atom(y, *v);
        let term = projlattice::meet(px, &py, tol)?;
        acc = projlattice::join(&acc, &term, tol)?;
    }
    Ok(acc)
}

/// Born probability (P1): `Tr[⟦φ⟧ρ]`, clamped into [0,1] within `prob_clip`.
pub fn probability(ast: &Prop, model: &Model, state_name: &str) -> Result<f64, Error> {
    let rho = model.state(state_name)?;
    let t = truth_value(ast, model)?;
    probability_of_projection(&t, rho, &model.tol)
}

pub(crate) fn probability_of_projection(
    p: &Projection,
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<f64, Error> {
    let raw = p.matrix().mul(rho).trace().re;
    if raw < -tol.prob_clip || raw > 1.0 + tol.prob_clip {
        return Err(Error::ProbabilityOutOfRange(raw));
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// `φ` holds in `ρ` iff its probability is 1 (within `prob_clip`).
pub fn holds(ast: &Prop, model: &Model, state_name: &str) -> Result<bool, Error> {
    Ok(probability(ast, model, state_name)? >= 1.0 - model.tol.prob_clip)
}

/// Contextual well-formedness: the observables named in `φ` are jointly
/// determinate in the state. Single-name (or closed) propositions are always
/// well-formed.
pub fn well_formed(ast: &Prop, model: &Model, state_name: &str) -> Result<bool, Error> {
    let rho = model.state(state_name)?;
    let names: Vec<String> = proplang::names_in(ast).into_iter().collect();
    if names.len() <= 1 {
        // Resolve names anyway so unknown observables still error.
        for n in &names {
            model.observable(n)?;
        }
        return Ok(true);
    }
    let obs: Vec<&Observable> = names
        .iter()
        .map(|n| model.observable(n))
        .collect::<Result<_, _>>()?;
    let com = joint_projection(&obs, &model.tol)?;
    let p = probability_of_projection(&com, rho, &model.tol)?;
    Ok(p >= 1.0 - model.tol.prob_clip)
}

/// Transfer-principle instance check: if the propositional skeleton of `φ`
/// (distinct atoms as independent Boolean variables) is a classical
/// tautology, verify `com(X_1,...,X_n) ≤ ⟦φ⟧` and return the result.
/// A non-tautological skeleton makes the check vacuous and errors.
pub fn transfer_check(ast: &Prop, model: &Model) -> Result<bool, Error> {
    let mut atoms: Vec<&Prop> = Vec::new();
    collect_atoms(ast, &mut atoms);
    if !is_tautology(ast, &atoms) {
        return Err(Error::NotATautology);
    }
    let names: Vec<String> = proplang::names_in(ast).into_iter().collect();
    let com = if names.is_empty() {
        Projection::identity(model.dim)
    } else {
        let obs: Vec<&Observable> = names
            .iter()
            .map(|n| model.observable(n))
            .collect::<Result<_, _>>()?;
        joint_projection(&obs, &model.tol)?
    };
    let t = truth_value(ast, model)?;
    projlattice::leq(&com, &t, &model.tol)
}

fn collect_atoms<'a>(ast: &'a Prop, atoms: &mut Vec<&'a Prop>) {
    match ast {
        Prop::Not(inner) => collect_atoms(inner, atoms),
        Prop::And(l, r) | Prop::Or(l, r) => {
            collect_atoms(l, atoms);
            collect_atoms(r, atoms);
        }
        atom => {
            if !atoms.contains(&atom) {
                atoms.push(atom);
            }
        }
    }
}

fn eval_skeleton(ast: &Prop, atoms: &[&Prop], assignment: u32) -> bool {
    match ast {
        Prop::Not(inner) => !eval_skeleton(inner, atoms, assignment),
        Prop::And(l, r) => {
            eval_skeleton(l, atoms, assignment) && eval_skeleton(r, atoms, assignment)
        }
        Prop::Or(l, r) => {
            eval_skeleton(l, atoms, assignment) || eval_skeleton(r, atoms, assignment)
        }
        atom => {
            let idx = atoms.iter().position(|a| *a == atom).unwrap();
            assignment & (1 << idx) != 0
        }
    }
}

fn is_tautology(ast: &Prop, atoms: &[&Prop]) -> bool {
    let n = atoms.len();
    (0..(1u32 << n)).all(|assignment| eval_skeleton(ast, atoms, assignment))
}
