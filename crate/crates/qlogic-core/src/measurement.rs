//! Measuring processes (K, σ, U, M): Heisenberg-picture meter, output
//! distributions, POVM extraction with the (P1)-(P3) property checks,
//! measurement-in-state predicates and their equivalence, and
//! simultaneous-measurability verification.

use alloc::vec::Vec;

use crate::linalg::{self, Complex64, ComplexMatrix};
use crate::opalgebra;
use crate::projlattice::Projection;
use crate::spectral::{self, Observable};
use crate::truth;
use crate::{Error, TolerancePolicy};

/// A measuring process: probe state `sigma`, interaction unitary `u` on
/// system⊗probe (system-major Kronecker ordering), and probe meter `meter`.
#[derive(Debug, Clone)]
pub struct MeasuringProcess {
    sys_dim: usize,
    probe_dim: usize,
    sigma: ComplexMatrix,
    u: ComplexMatrix,
    meter: Observable,
}

impl MeasuringProcess {
    pub fn new(
        sys_dim: usize,
        probe_dim: usize,
        sigma: ComplexMatrix,
        u: ComplexMatrix,
        meter: ComplexMatrix,
        tol: &TolerancePolicy,
    ) -> Result<Self, Error> {
        if sigma.dim() != probe_dim
            || meter.dim() != probe_dim
            || u.dim() != sys_dim * probe_dim
            || sys_dim == 0
            || probe_dim == 0
        {
            return Err(Error::DimensionMismatch);
        }
        if !sigma.is_density(tol) {
            return Err(Error::NotDensityMatrix);
        }
        let gram = u.adjoint().mul(&u);
        if !gram.approx_eq(&ComplexMatrix::identity(u.dim()), tol) {
            return Err(Error::NotUnitary);
        }
        let meter = Observable::new(meter, tol)?;
        Ok(MeasuringProcess {
            sys_dim,
            probe_dim,
            sigma,
            u,
            meter,
        })
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn sigma(&self) -> &ComplexMatrix {
        &self.sigma
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn meter(&self) -> &Observable {
        &self.meter
    }

    /// Same process reading the transformed meter `f(M)`.
    pub fn with_meter_function(
        &self,
        f: &dyn Fn(f64) -> f64,
        tol: &TolerancePolicy,
    ) -> Result<Self, Error> {
        let meter = spectral::apply_function(&self.meter, f, tol)?;
        let mut out = self.clone();
        out.meter = meter;
        Ok(out)
    }

    fn composite_state(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        linalg::tensor_product(rho, &self.sigma)
    }
}

/// Cumulative operator-valued distribution function: `Π(x)` is zero below
/// the first cut and `cumulative[i]` for the largest cut `≤ x`.
#[derive(Debug, Clone)]
pub struct Povm {
    cuts: Vec<f64>,
    cumulative: Vec<ComplexMatrix>,
}

impl Povm {
    /// Validates (P1) and (P2): strictly increasing cuts, every value
    /// positive, operator increments positive, top value the identity.
    pub fn new(
        cuts: Vec<f64>,
        cumulative: Vec<ComplexMatrix>,
        tol: &TolerancePolicy,
    ) -> Result<Self, Error> {
        if cuts.is_empty() || cuts.len() != cumulative.len() {
            return Err(Error::MalformedPovm);
        }
        let dim = cumulative[0].dim();
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedPovm);
        }
        for m in &cumulative {
            if m.dim() != dim || !m.is_positive(tol) {
                return Err(Error::MalformedPovm);
            }
        }
        for w in cumulative.windows(2) {
            if !w[1].sub(&w[0]).is_positive(tol) {
                return Err(Error::MalformedPovm);
            }
        }
        let top = cumulative.last().expect("non-empty");
        if !top.approx_eq(&ComplexMatrix::identity(dim), tol) {
            return Err(Error::MalformedPovm);
        }
        Ok(Povm { cuts, cumulative })
    }

    pub fn cut_points(&self) -> &[f64] {
        &self.cuts
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.cumulative
    }

    pub fn dim(&self) -> usize {
        self.cumulative[0].dim()
    }

    pub fn at(&self, x: f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for (c, m) in self.cuts.iter().zip(&self.cumulative) {
            if *c <= x {
                out = m.clone();
            }
        }
        out
    }
}

/// Heisenberg-picture meter `M(Δt) = U†(I⊗M)U` on the composite space.
pub fn meter_heisenberg(mp: &MeasuringProcess, tol: &TolerancePolicy) -> Result<Observable, Error> {
    let id_sys = ComplexMatrix::identity(mp.sys_dim);
    let m0 = linalg::tensor_product(&id_sys, mp.meter.matrix());
    let moved = mp.u.adjoint().mul(&m0).mul(&mp.u);
    Observable::new(moved, tol)
}

/// Output distribution function `Pr{x ≤ x ‖ ρ} = Tr[E^{M(Δt)}(x)(ρ⊗σ)]`.
pub fn output_distribution(
    mp: &MeasuringProcess,
    rho: &ComplexMatrix,
    x: f64,
    tol: &TolerancePolicy,
) -> Result<f64, Error> {
    if rho.dim() != mp.sys_dim {
        return Err(Error::DimensionMismatch);
    }
    if !rho.is_density(tol) {
        return Err(Error::NotDensityMatrix);
    }
    let mh = meter_heisenberg(mp, tol)?;
    let e = spectral::spectral_family(&mh, x);
    truth::probability_of_projection(&e, &mp.composite_state(rho), tol)
}

/// POVM of the process: `Π(x) = Tr_K[E^{M(Δt)}(x)(I⊗σ)]`, returned as a
/// cumulative distribution over the meter spectrum; (P1)/(P2) are checked
/// on construction.
pub fn povm(mp: &MeasuringProcess, tol: &TolerancePolicy) -> Result<Povm, Error> {
    let mh = meter_heisenberg(mp, tol)?;
    let id_sigma = linalg::tensor_product(&ComplexMatrix::identity(mp.sys_dim), &mp.sigma);
    let mut cumulative = Vec::new();
    for &x in mh.spectrum() {
        let e = spectral::spectral_family(&mh, x);
        let traced =
            linalg::partial_trace_probe(&e.matrix().mul(&id_sigma), mp.sys_dim, mp.probe_dim)?;
        cumulative.push(traced);
    }
    Povm::new(mh.spectrum().to_vec(), cumulative, tol)
}

/// (P3): `Tr[Π(x)ρ]` matches the output distribution at every cut point.
pub fn povm_consistent(
    mp: &MeasuringProcess,
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    let pi = povm(mp, tol)?;
    for &x in pi.cut_points() {
        let lhs = pi.at(x).mul(rho).trace().re;
        let rhs = output_distribution(mp, rho, x, tol)?;
        if libm::fabs(lhs - rhs) > 1e-8 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A(0) =_{ρ⊗σ} M(Δt)`: the equality projection of `A⊗I` and the
/// Heisenberg meter holds with probability one in `ρ⊗σ`.
pub fn measures_in(
    mp: &MeasuringProcess,
    a: &Observable,
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    if a.dim() != mp.sys_dim || rho.dim() != mp.sys_dim {
        return Err(Error::DimensionMismatch);
    }
    if !rho.is_density(tol) {
        return Err(Error::NotDensityMatrix);
    }
    let a0 = Observable::new(
        linalg::tensor_product(a.matrix(), &ComplexMatrix::identity(mp.probe_dim)),
        tol,
    )?;
    let mh = meter_heisenberg(mp, tol)?;
    let eq = truth::equality_projection(&a0, &mh, tol)?;
    let p = truth::probability_of_projection(&eq, &mp.composite_state(rho), tol)?;
    Ok(p >= 1.0 - tol.prob_clip)
}

fn grid_union(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = a.iter().chain(b).copied().collect();
    grid.sort_by(|x, y| x.partial_cmp(y).expect("finite spectra"));
    grid.dedup();
    grid
}

/// Weak measurement: `Tr[Π(x)E^A(y)ρ] = Tr[E^A(min{x,y})ρ]` over the union
/// grid of `Sp(A)` and the POVM cut points.
pub fn weakly_measures(
    mp: &MeasuringProcess,
    a: &Observable,
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    if a.dim() != mp.sys_dim || rho.dim() != mp.sys_dim {
        return Err(Error::DimensionMismatch);
    }
    if !rho.is_density(tol) {
        return Err(Error::NotDensityMatrix);
    }
    let pi = povm(mp, tol)?;
    let grid = grid_union(a.spectrum(), pi.cut_points());
    for &x in &grid {
        for &y in &grid {
            let ea_y = spectral::spectral_family(a, y);
            let lhs = pi.at(x).mul(ea_y.matrix()).mul(rho).trace().re;
            let ea_min = spectral::spectral_family(a, if x < y { x } else { y });
            let rhs = ea_min.matrix().mul(rho).trace().re;
            if libm::fabs(lhs - rhs) > 1e-8 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Born statistical formula: the output distribution equals
/// `Tr[E^A(x)ρ]` at every grid point.
pub fn bsf_holds(
    mp: &MeasuringProcess,
    a: &Observable,
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    if a.dim() != mp.sys_dim || rho.dim() != mp.sys_dim {
        return Err(Error::DimensionMismatch);
    }
    let mh = meter_heisenberg(mp, tol)?;
    let grid = grid_union(a.spectrum(), mh.spectrum());
    for &x in &grid {
        let lhs = output_distribution(mp, rho, x, tol)?;
        let rhs = spectral::spectral_family(a, x).matrix().mul(rho).trace().re;
        if libm::fabs(lhs - rhs) > 1e-8 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The three equivalent conditions of the measurement theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub measures: bool,
    pub weak: bool,
    pub bsf: bool,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        self.measures == self.weak && self.weak == self.bsf
    }
}

/// Orthonormal basis of the range of a projection.
fn range_basis(p: &Projection, tol: &TolerancePolicy) -> Result<Vec<Vec<Complex64>>, Error> {
    let (values, vecs) = linalg::eig_vectors(p.matrix(), tol)?;
    let dim = p.dim();
    let mut basis = Vec::new();
    for (k, &l) in values.iter().enumerate() {
        if l > 0.5 {
            basis.push((0..dim).map(|r| vecs.get(r, k)).collect());
        }
    }
    Ok(basis)
}

/// Evaluates (i) measures-in, (ii) weak measurement, and (iii) BSF over
/// vector states of the cyclic subspace `C(A,ρ)`. BSF is linear in
/// `|ψ⟩⟨ψ|` restricted to the subspace, so basis vectors and the pairwise
/// superpositions `(eᵢ±eⱼ)/√2`, `(eᵢ±i·eⱼ)/√2` decide it.
pub fn equivalence_suite(
    mp: &MeasuringProcess,
    a: &Observable,
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<EquivalenceReport, Error> {
    let measures = measures_in(mp, a, rho, tol)?;
    let weak = weakly_measures(mp, a, rho, tol)?;

    let cyc = opalgebra::cyclic_subspace(&[a.matrix().clone()], rho, tol)?;
    let basis = range_basis(&cyc, tol)?;
    let dim = a.dim();
    let mut states: Vec<Vec<Complex64>> = basis.clone();
    let inv = 1.0 / libm::sqrt(2.0);
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            for phase in [
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
            ] {
                let v: Vec<Complex64> = (0..dim)
                    .map(|r| (basis[i][r] + phase * basis[j][r]) * inv)
                    .collect();
                states.push(v);
            }
        }
    }
    let mut bsf = true;
    for v in &states {
        let psi = ComplexMatrix::outer(v, v);
        if !bsf_holds(mp, a, &psi, tol)? {
            bsf = false;
            break;
        }
    }
    Ok(EquivalenceReport {
        measures,
        weak,
        bsf,
    })
}

/// The process measures `A` in every state iff `Π(x) = E^A(x)` at every
/// grid point.
pub fn measures_everywhere_iff(
    mp: &MeasuringProcess,
    a: &Observable,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    if a.dim() != mp.sys_dim {
        return Err(Error::DimensionMismatch);
    }
    let pi = povm(mp, tol)?;
    let grid = grid_union(a.spectrum(), pi.cut_points());
    for &x in &grid {
        let ea = spectral::spectral_family(a, x);
        if !pi.at(x).approx_eq(ea.matrix(), tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A` and `B` are simultaneously measurable in `ρ` by the meter output:
/// the process with meter `f(M)` measures `A` and with `g(M)` measures `B`.
pub fn simultaneous_check(
    mp: &MeasuringProcess,
    f: &dyn Fn(f64) -> f64,
    g: &dyn Fn(f64) -> f64,
    a: &Observable,
    b: &Observable,
    rho: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    let mp_f = mp.with_meter_function(f, tol)?;
    let mp_g = mp.with_meter_function(g, tol)?;
    Ok(measures_in(&mp_f, a, rho, tol)? && measures_in(&mp_g, b, rho, tol)?)
}

/// Candidate two-axis POVM `Π(x,y)`: `values[i][j]` is the cumulative mass
/// up to `(x_cuts[i], y_cuts[j])`.
#[derive(Debug, Clone)]
pub struct TwoAxisPovm {
    pub x_cuts: Vec<f64>,
    pub y_cuts: Vec<f64>,
    pub values: Vec<Vec<ComplexMatrix>>,
}

impl TwoAxisPovm {
    fn validate(&self, tol: &TolerancePolicy) -> Result<usize, Error> {
        if self.x_cuts.is_empty()
            || self.y_cuts.is_empty()
            || self.values.len() != self.x_cuts.len()
            || self.values.iter().any(|row| row.len() != self.y_cuts.len())
            || self.x_cuts.windows(2).any(|w| w[0] >= w[1])
            || self.y_cuts.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::MalformedPovm);
        }
        let dim = self.values[0][0].dim();
        for row in &self.values {
            for m in row {
                if m.dim() != dim || !m.is_positive(tol) {
                    return Err(Error::MalformedPovm);
                }
            }
        }
        // Monotone in each axis separately.
        for row in &self.values {
            for w in row.windows(2) {
                if !w[1].sub(&w[0]).is_positive(tol) {
                    return Err(Error::MalformedPovm);
                }
            }
        }
        for i in 1..self.values.len() {
            for j in 0..self.y_cuts.len() {
                if !self.values[i][j]
                    .sub(&self.values[i - 1][j])
                    .is_positive(tol)
                {
                    return Err(Error::MalformedPovm);
                }
            }
        }
        let top = &self.values[self.x_cuts.len() - 1][self.y_cuts.len() - 1];
        if !top.approx_eq(&ComplexMatrix::identity(dim), tol) {
            return Err(Error::MalformedPovm);
        }
        Ok(dim)
    }
}

/// Compression scope for [`theorem_main_verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Marginal limits match `E^A`, `E^B` on `C(A,B,ρ)`.
    Determinate,
    /// X-limits match on `C(A,ρ)`, Y-limits on `C(B,ρ)`.
    Simultaneous,
}

/// Verifies a supplied two-axis POVM candidate: the marginal limits
/// `lim_y Π(x,y)` and `lim_x Π(x,y)` agree with the spectral families of
/// `A` and `B` after compression to the relevant cyclic subspace.
pub fn theorem_main_verify(
    pi2: &TwoAxisPovm,
    a: &Observable,
    b: &Observable,
    rho: &ComplexMatrix,
    mode: VerifyMode,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    let dim = pi2.validate(tol)?;
    if a.dim() != dim || b.dim() != dim || rho.dim() != dim {
        return Err(Error::DimensionMismatch);
    }
    let (c_x, c_y) = match mode {
        VerifyMode::Determinate => {
            let c =
                opalgebra::cyclic_subspace(&[a.matrix().clone(), b.matrix().clone()], rho, tol)?;
            (c.clone(), c)
        }
        VerifyMode::Simultaneous => (
            opalgebra::cyclic_subspace(&[a.matrix().clone()], rho, tol)?,
            opalgebra::cyclic_subspace(&[b.matrix().clone()], rho, tol)?,
        ),
    };
    let last_y = pi2.y_cuts.len() - 1;
    for (i, &x) in pi2.x_cuts.iter().enumerate() {
        let limit = &pi2.values[i][last_y];
        let diff = limit.sub(spectral::spectral_family(a, x).matrix());
        if diff.mul(c_x.matrix()).max_abs() > tol.op_eq {
            return Ok(false);
        }
    }
    let last_x = pi2.x_cuts.len() - 1;
    for (j, &y) in pi2.y_cuts.iter().enumerate() {
        let limit = &pi2.values[last_x][j];
        let diff = limit.sub(spectral::spectral_family(b, y).matrix());
        if diff.mul(c_y.matrix()).max_abs() > tol.op_eq {
            return Ok(false);
        }
    }
    Ok(true)
}
