//! Phase-space dynamics: `H(q, p) = ½ pᵀM(q)⁻¹p + V(q)`, the Hamiltonian
//! vector field `X_H = J dH`, the Legendre transform, and the one-step
//! integrators.
//!
//! Only `rk4-reference` is non-symplectic; it exists as a control so tests
//! can tell structure preservation apart from plain accuracy.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{dot, max_abs, CotangentValue, Manifold, ManifoldPoint, TangentValue};
use crate::systems::MechanicalSystem;

/// A point `z = (q, p)` of `T*Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    q: ManifoldPoint,
    p: CotangentValue,
}

impl PhaseState {
    pub fn new(q: ManifoldPoint, p: CotangentValue) -> Result<Self> {
        if p.base() != &q {
            return Err(Error::invalid("momentum is not based at q"));
        }
        Ok(PhaseState { q, p })
    }

    /// Canonicalize `q` and attach `p`.
    pub fn from_coords(manifold: &Manifold, q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        let q = ManifoldPoint::new(manifold.clone(), q)?;
        let p = CotangentValue::new(q.clone(), p)?;
        Ok(PhaseState { q, p })
    }

    pub(crate) fn from_canonical(manifold: &Manifold, q: Vec<f64>, p: Vec<f64>) -> Self {
        let q = ManifoldPoint::from_canonical(manifold, q);
        let p = CotangentValue::new(q.clone(), p).expect("momentum length matches dimension");
        PhaseState { q, p }
    }

    pub fn q(&self) -> &ManifoldPoint {
        &self.q
    }

    pub fn p(&self) -> &CotangentValue {
        &self.p
    }

    pub fn manifold(&self) -> &Manifold {
        self.q.manifold()
    }

    /// Same position, momentum negated.
    pub fn with_reversed_momentum(&self) -> Self {
        PhaseState {
            q: self.q.clone(),
            p: self.p.scaled(-1.0),
        }
    }
}

/// The canonical symplectic form on `R^n × R^n`, applied as
/// `(a, b) ↦ (b, −a)`. Never stored as a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticStructure {
    pub dim: usize,
}

impl SymplecticStructure {
    pub fn new(dim: usize) -> Self {
        SymplecticStructure { dim }
    }

    pub fn apply(&self, a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
        assert_eq!(a.len(), self.dim);
        assert_eq!(b.len(), self.dim);
        (b.to_vec(), a.iter().map(|x| -x).collect())
    }

    /// Apply to a stacked `2n` vector `(a, b)`.
    pub fn apply_stacked(&self, z: &[f64]) -> Vec<f64> {
        let (a, b) = z.split_at(self.dim);
        let (x, y) = self.apply(a, b);
        x.into_iter().chain(y).collect()
    }

    /// `‖DᵀJD − J‖∞` for a `2n × 2n` matrix `D`.
    pub fn defect(&self, d: &DMatrix<f64>) -> f64 {
        let n2 = 2 * self.dim;
        assert_eq!(d.shape(), (n2, n2));
        let mut jd = DMatrix::zeros(n2, n2);
        for c in 0..n2 {
            let col: Vec<f64> = d.column(c).iter().copied().collect();
            jd.set_column(c, &DVector::from_vec(self.apply_stacked(&col)));
        }
        let mut j = DMatrix::zeros(n2, n2);
        for c in 0..n2 {
            let mut e = vec![0.0; n2];
            e[c] = 1.0;
            j.set_column(c, &DVector::from_vec(self.apply_stacked(&e)));
        }
        (d.transpose() * jd - j).abs().max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    SymplecticEuler,
    Verlet,
    ImplicitMidpoint,
    Rk4Reference,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::SymplecticEuler,
        Method::Verlet,
        Method::ImplicitMidpoint,
        Method::Rk4Reference,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::SymplecticEuler => "symplectic-euler",
            Method::Verlet => "verlet",
            Method::ImplicitMidpoint => "implicit-midpoint",
            Method::Rk4Reference => "rk4-reference",
        }
    }

    pub fn is_symplectic(&self) -> bool {
        !matches!(self, Method::Rk4Reference)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnsupportedMethod(format!("unknown integrator `{s}`")))
    }
}

/// Uniformly sampled solution curve of `X_H`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub method: Method,
    pub step: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &PhaseState {
        self.states.last().expect("trajectory holds at least the initial state")
    }

    pub fn energies(&self, system: &MechanicalSystem) -> Result<Vec<f64>> {
        self.states
            .iter()
            .map(|s| evaluate_hamiltonian(system, s))
            .collect()
    }
}

fn check_state(system: &MechanicalSystem, s: &PhaseState) -> Result<()> {
    system.check_point(&s.q)
}

/// `M(q)⁻¹ p` by Cholesky.
pub(crate) fn inverse_mass_apply(system: &MechanicalSystem, q: &[f64], p: &[f64]) -> Result<Vec<f64>> {
    let m = system.mass_at(q);
    let chol = m.cholesky().ok_or_else(|| {
        Error::Numerical(format!("mass matrix of `{}` is not positive definite", system.name()))
    })?;
    Ok(chol.solve(&DVector::from_column_slice(p)).as_slice().to_vec())
}

pub(crate) fn mass_apply(system: &MechanicalSystem, q: &[f64], v: &[f64]) -> Vec<f64> {
    (system.mass_at(q) * DVector::from_column_slice(v))
        .as_slice()
        .to_vec()
}

pub(crate) fn hamiltonian_at(system: &MechanicalSystem, q: &[f64], p: &[f64]) -> Result<f64> {
    let v = inverse_mass_apply(system, q, p)?;
    Ok(0.5 * dot(p, &v) + system.potential_at(q))
}

pub fn evaluate_hamiltonian(system: &MechanicalSystem, s: &PhaseState) -> Result<f64> {
    check_state(system, s)?;
    hamiltonian_at(system, s.q.coords(), s.p.components())
}

/// Central differences with step `1e-5·(1 + ‖coords‖∞)`, taken along the
/// chart so circle components wrap.
pub fn grad_fd(f: impl Fn(&ManifoldPoint) -> f64, q: &ManifoldPoint) -> Result<Vec<f64>> {
    let manifold = q.manifold();
    grad_fd_coords(manifold, q.coords(), |c| {
        f(&ManifoldPoint::from_canonical(manifold, c.to_vec()))
    })
}

pub(crate) fn grad_fd_coords(
    manifold: &Manifold,
    coords: &[f64],
    mut f: impl FnMut(&[f64]) -> f64,
) -> Result<Vec<f64>> {
    let n = manifold.dim();
    let delta = 1e-5 * (1.0 + max_abs(coords));
    let mut grad = Vec::with_capacity(n);
    let mut e = vec![0.0; n];
    for i in 0..n {
        e[i] = delta;
        let plus = f(&manifold.retract_coords(coords, &e));
        e[i] = -delta;
        let minus = f(&manifold.retract_coords(coords, &e));
        e[i] = 0.0;
        if !(plus.is_finite() && minus.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite function value near coordinate {i}"
            )));
        }
        grad.push((plus - minus) / (2.0 * delta));
    }
    Ok(grad)
}

/// `∇V(q)`: analytic when supplied, finite differences otherwise.
pub(crate) fn potential_gradient_at(system: &MechanicalSystem, q: &[f64]) -> Result<Vec<f64>> {
    match system.analytic_gradient_at(q) {
        Some(g) => Ok(g),
        None => grad_fd_coords(system.manifold(), q, |c| system.potential_at(c)),
    }
}

/// `∇_q H` at fixed `p`.
fn position_gradient(system: &MechanicalSystem, q: &[f64], p: &[f64]) -> Result<Vec<f64>> {
    if system.has_constant_mass() {
        potential_gradient_at(system, q)
    } else {
        let mut failure = None;
        let g = grad_fd_coords(system.manifold(), q, |c| match hamiltonian_at(system, c, p) {
            Ok(h) => h,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        });
        match failure {
            Some(e) => Err(e),
            None => g,
        }
    }
}

/// `(q̇, ṗ)` in chart components.
pub(crate) fn vector_field_at(
    system: &MechanicalSystem,
    q: &[f64],
    p: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let dq_h = position_gradient(system, q, p)?;
    let dp_h = inverse_mass_apply(system, q, p)?;
    Ok(SymplecticStructure::new(dq_h.len()).apply(&dq_h, &dp_h))
}

/// `X_H(z) = J (∇_q H, ∇_p H) = (M⁻¹p, −∇_q H)`.
pub fn hamiltonian_vector_field(
    system: &MechanicalSystem,
    s: &PhaseState,
) -> Result<(TangentValue, Vec<f64>)> {
    check_state(system, s)?;
    let (qdot, pdot) = vector_field_at(system, s.q.coords(), s.p.components())?;
    Ok((TangentValue::new(s.q.clone(), qdot)?, pdot))
}

/// `(∇_q H, ∇_p H)`. Closed form for constant-mass systems with an analytic
/// potential gradient; otherwise both halves by central differences of `H`.
pub fn energy_differential(system: &MechanicalSystem, s: &PhaseState) -> Result<(Vec<f64>, Vec<f64>)> {
    check_state(system, s)?;
    let (q, p) = (s.q.coords(), s.p.components());
    if system.has_constant_mass() && system.has_analytic_gradient() {
        let dq = potential_gradient_at(system, q)?;
        let dp = inverse_mass_apply(system, q, p)?;
        return Ok((dq, dp));
    }
    let mut failure = None;
    let mut h = |qq: &[f64], pp: &[f64]| match hamiltonian_at(system, qq, pp) {
        Ok(v) => v,
        Err(e) => {
            failure = Some(e);
            f64::NAN
        }
    };
    let dq = grad_fd_coords(system.manifold(), q, |c| h(c, p));
    let delta = 1e-5 * (1.0 + max_abs(p));
    let mut dp = Vec::with_capacity(p.len());
    let mut pp = p.to_vec();
    for i in 0..p.len() {
        pp[i] = p[i] + delta;
        let plus = h(q, &pp);
        pp[i] = p[i] - delta;
        let minus = h(q, &pp);
        pp[i] = p[i];
        dp.push((plus - minus) / (2.0 * delta));
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((dq?, dp))
}

/// `dH(X_H) = ∇_qH·∇_pH − ∇_pH·∇_qH`, evaluated as the differential of `H`
/// applied to the vector field.
pub fn directional_energy_change(system: &MechanicalSystem, s: &PhaseState) -> Result<f64> {
    let (dq, dp) = energy_differential(system, s)?;
    let (qdot, pdot) = hamiltonian_vector_field(system, s)?;
    Ok(dot(&dq, qdot.components()) + dot(&dp, &pdot))
}

/// `p = M(q) v`.
pub fn legendre(system: &MechanicalSystem, q: &ManifoldPoint, v: &TangentValue) -> Result<PhaseState> {
    system.check_point(q)?;
    if v.base() != q {
        return Err(Error::invalid("velocity is not based at q"));
    }
    let p = mass_apply(system, q.coords(), v.components());
    Ok(PhaseState {
        q: q.clone(),
        p: CotangentValue::new(q.clone(), p)?,
    })
}

/// `v = M(q)⁻¹ p`.
pub fn legendre_inverse(system: &MechanicalSystem, s: &PhaseState) -> Result<TangentValue> {
    check_state(system, s)?;
    let v = inverse_mass_apply(system, s.q.coords(), s.p.components())?;
    TangentValue::new(s.q.clone(), v)
}

fn require_separable(system: &MechanicalSystem, method: Method) -> Result<()> {
    if !system.has_constant_mass() {
        return Err(Error::UnsupportedMethod(format!(
            "{method} needs a constant mass matrix; `{}` has a configuration-dependent one",
            system.name()
        )));
    }
    Ok(())
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step size must be positive, got {h}")));
    }
    Ok(())
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

/// Kick then drift: `p' = p − h∇V(q)`, `q' = q ⊕ h M⁻¹p'`.
pub fn step_symplectic_euler(system: &MechanicalSystem, s: &PhaseState, h: f64) -> Result<PhaseState> {
    check_state(system, s)?;
    check_step(h)?;
    require_separable(system, Method::SymplecticEuler)?;
    let manifold = system.manifold();
    let q = s.q.coords();
    let p_new = axpy(-h, &potential_gradient_at(system, q)?, s.p.components());
    let v = inverse_mass_apply(system, q, &p_new)?;
    let q_new = manifold.retract_coords(q, &v.iter().map(|x| h * x).collect::<Vec<_>>());
    Ok(PhaseState::from_canonical(manifold, q_new, p_new))
}

/// Kick–drift–kick Störmer–Verlet.
pub fn step_verlet(system: &MechanicalSystem, s: &PhaseState, h: f64) -> Result<PhaseState> {
    check_state(system, s)?;
    check_step(h)?;
    require_separable(system, Method::Verlet)?;
    let manifold = system.manifold();
    let q = s.q.coords();
    let p_half = axpy(-0.5 * h, &potential_gradient_at(system, q)?, s.p.components());
    let v = inverse_mass_apply(system, q, &p_half)?;
    let q_new = manifold.retract_coords(q, &v.iter().map(|x| h * x).collect::<Vec<_>>());
    let p_new = axpy(-0.5 * h, &potential_gradient_at(system, &q_new)?, &p_half);
    Ok(PhaseState::from_canonical(manifold, q_new, p_new))
}

/// Fixed-point tolerance, relative to `1 + ‖w‖∞`: the finite-difference
/// `∇_q H` is only accurate to roughly `ulp(H)/δ`, so an absolute bound
/// is out of reach for energetic states.
const MIDPOINT_TOL: f64 = 1e-12;
const MIDPOINT_MAX_ITER: usize = 100;
const MIDPOINT_STALL_LIMIT: usize = 20;

/// Solves `w = G(w)` for the implicit midpoint increment
/// `w = (chart displacement of q', p')`.
struct MidpointProblem<'a> {
    system: &'a MechanicalSystem,
    q: &'a [f64],
    p: &'a [f64],
    h: f64,
}

impl MidpointProblem<'_> {
    fn map(&self, w: &[f64]) -> Result<Vec<f64>> {
        let n = self.p.len();
        let manifold = self.system.manifold();
        let half: Vec<f64> = w[..n].iter().map(|u| 0.5 * u).collect();
        let q_mid = manifold.retract_coords(self.q, &half);
        let p_mid: Vec<f64> = self.p.iter().zip(&w[n..]).map(|(a, b)| 0.5 * (a + b)).collect();
        let (qdot, pdot) = vector_field_at(self.system, &q_mid, &p_mid)?;
        let mut out: Vec<f64> = qdot.iter().map(|x| self.h * x).collect();
        out.extend(axpy(self.h, &pdot, self.p));
        Ok(out)
    }

    fn residual(&self, w: &[f64]) -> Result<Vec<f64>> {
        Ok(w.iter().zip(self.map(w)?).map(|(a, b)| a - b).collect())
    }

    fn solve(&self, guess: Vec<f64>) -> Result<(Vec<f64>, f64)> {
        let mut w = guess;
        let mut prev = f64::INFINITY;
        let mut stalled = 0;
        let mut polished = 0;
        let mut iterations = 0;
        while iterations < MIDPOINT_MAX_ITER {
            iterations += 1;
            let next = self.map(&w)?;
            let r = w.iter().zip(&next).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if !r.is_finite() {
                break;
            }
            if r <= MIDPOINT_TOL * (1.0 + max_abs(&next)) {
                // keep iterating while still contracting, down to roundoff
                if r == 0.0 || r > 0.25 * prev || polished >= 3 {
                    return Ok((next, r));
                }
                polished += 1;
            }
            if r >= prev {
                stalled += 1;
            }
            prev = r;
            w = next;
            if stalled >= MIDPOINT_STALL_LIMIT {
                return self.newton(w, iterations);
            }
        }
        Err(Error::Convergence {
            residual: prev,
            iterations,
            step: None,
        })
    }

    fn newton(&self, mut w: Vec<f64>, mut iterations: usize) -> Result<(Vec<f64>, f64)> {
        let n2 = w.len();
        let mut prev = f64::INFINITY;
        let mut polished = 0;
        while iterations < MIDPOINT_MAX_ITER {
            iterations += 1;
            let f = self.residual(&w)?;
            let r = max_abs(&f);
            let tol = MIDPOINT_TOL * (1.0 + max_abs(&w));
            if r <= tol && (r == 0.0 || r > 0.25 * prev || polished >= 3) {
                return Ok((w, r));
            }
            if r <= tol {
                polished += 1;
            }
            prev = r;
            let mut jac = DMatrix::zeros(n2, n2);
            for c in 0..n2 {
                let eps = 1e-7 * (1.0 + w[c].abs());
                let mut wp = w.clone();
                wp[c] += eps;
                let mut wm = w.clone();
                wm[c] -= eps;
                let fp = self.residual(&wp)?;
                let fm = self.residual(&wm)?;
                for r in 0..n2 {
                    jac[(r, c)] = (fp[r] - fm[r]) / (2.0 * eps);
                }
            }
            let delta = jac
                .lu()
                .solve(&DVector::from_vec(f))
                .ok_or_else(|| Error::Numerical("singular midpoint Jacobian".into()))?;
            for (x, d) in w.iter_mut().zip(delta.iter()) {
                *x -= d;
            }
        }
        Err(Error::Convergence {
            residual: prev,
            iterations,
            step: None,
        })
    }
}

/// Implicit midpoint: `z' = z ⊕ h X_H((z + z')/2)`, with the position
/// average taken as the shortest-arc chart midpoint.
pub fn step_implicit_midpoint(
    system: &MechanicalSystem,
    s: &PhaseState,
    h: f64,
) -> Result<PhaseState> {
    step_implicit_midpoint_with_residual(system, s, h).map(|(z, _)| z)
}

/// As [`step_implicit_midpoint`], also returning the final fixed-point
/// residual.
pub fn step_implicit_midpoint_with_residual(
    system: &MechanicalSystem,
    s: &PhaseState,
    h: f64,
) -> Result<(PhaseState, f64)> {
    check_state(system, s)?;
    check_step(h)?;
    let manifold = system.manifold();
    let (q, p) = (s.q.coords(), s.p.components());
    let problem = MidpointProblem { system, q, p, h };
    let (qdot, pdot) = vector_field_at(system, q, p)?;
    let mut guess: Vec<f64> = qdot.iter().map(|x| h * x).collect();
    guess.extend(axpy(h, &pdot, p));
    let (w, residual) = problem.solve(guess)?;
    let n = p.len();
    let q_new = manifold.retract_coords(q, &w[..n]);
    Ok((PhaseState::from_canonical(manifold, q_new, w[n..].to_vec()), residual))
}

/// Classical fourth-order Runge–Kutta in chart coordinates.
pub fn step_rk4(system: &MechanicalSystem, s: &PhaseState, h: f64) -> Result<PhaseState> {
    check_state(system, s)?;
    check_step(h)?;
    let manifold = system.manifold();
    let (q, p) = (s.q.coords(), s.p.components());
    let stage = |a: f64, k: &(Vec<f64>, Vec<f64>)| -> Result<(Vec<f64>, Vec<f64>)> {
        let qs = manifold.retract_coords(q, &k.0.iter().map(|x| a * x).collect::<Vec<_>>());
        let ps = axpy(a, &k.1, p);
        vector_field_at(system, &qs, &ps)
    };
    let k1 = vector_field_at(system, q, p)?;
    let k2 = stage(0.5 * h, &k1)?;
    let k3 = stage(0.5 * h, &k2)?;
    let k4 = stage(h, &k3)?;
    let combine = |a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..a.len())
            .map(|i| h / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
            .collect()
    };
    let dq = combine(&k1.0, &k2.0, &k3.0, &k4.0);
    let dp = combine(&k1.1, &k2.1, &k3.1, &k4.1);
    let q_new = manifold.retract_coords(q, &dq);
    let p_new: Vec<f64> = p.iter().zip(&dp).map(|(a, b)| a + b).collect();
    Ok(PhaseState::from_canonical(manifold, q_new, p_new))
}

pub fn step(system: &MechanicalSystem, s: &PhaseState, h: f64, method: Method) -> Result<PhaseState> {
    match method {
        Method::SymplecticEuler => step_symplectic_euler(system, s, h),
        Method::Verlet => step_verlet(system, s, h),
        Method::ImplicitMidpoint => step_implicit_midpoint(system, s, h),
        Method::Rk4Reference => step_rk4(system, s, h),
    }
}

/// `n_steps` steps of `method` from `s0`; `n_steps + 1` states.
pub fn integrate(
    system: &MechanicalSystem,
    s0: &PhaseState,
    h: f64,
    n_steps: usize,
    method: Method,
) -> Result<Trajectory> {
    check_state(system, s0)?;
    check_step(h)?;
    if !system.has_constant_mass() && matches!(method, Method::SymplecticEuler | Method::Verlet) {
        require_separable(system, method)?;
    }
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(s0.clone());
    for i in 0..n_steps {
        let next = step(system, &states[i], h, method).map_err(|e| e.at_step(i))?;
        states.push(next);
    }
    Ok(Trajectory {
        times: (0..=n_steps).map(|i| i as f64 * h).collect(),
        states,
        method,
        step: h,
    })
}

/// One-step Jacobian in chart coordinates `(δq, δp)`, by central
/// differences with step `delta`.
pub fn step_jacobian(
    system: &MechanicalSystem,
    s: &PhaseState,
    h: f64,
    method: Method,
    delta: f64,
) -> Result<DMatrix<f64>> {
    check_state(system, s)?;
    let n = system.dim();
    let manifold = system.manifold();
    let base = step(system, s, h, method)?;
    let mut jac = DMatrix::zeros(2 * n, 2 * n);
    let offset = |k: usize, e: f64| -> Result<Vec<f64>> {
        let mut dq = vec![0.0; n];
        let mut p = s.p.components().to_vec();
        if k < n {
            dq[k] = e;
        } else {
            p[k - n] += e;
        }
        let q = manifold.retract_coords(s.q.coords(), &dq);
        let out = step(system, &PhaseState::from_canonical(manifold, q, p), h, method)?;
        let mut d = base.q.displacement_to(&out.q);
        d.extend(
            out.p
                .components()
                .iter()
                .zip(base.p.components())
                .map(|(a, b)| a - b),
        );
        Ok(d)
    };
    for k in 0..2 * n {
        let plus = offset(k, delta)?;
        let minus = offset(k, -delta)?;
        for r in 0..2 * n {
            jac[(r, k)] = (plus[r] - minus[r]) / (2.0 * delta);
        }
    }
    Ok(jac)
}

/// `‖DᵀJD − J‖∞` of the finite-difference one-step Jacobian.
pub fn symplecticity_defect(
    system: &MechanicalSystem,
    s: &PhaseState,
    h: f64,
    method: Method,
) -> Result<f64> {
    let d = step_jacobian(system, s, h, method, 1e-6)?;
    Ok(SymplecticStructure::new(system.dim()).defect(&d))
}
