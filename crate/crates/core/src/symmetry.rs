//! Continuous symmetries and their conserved quantities.
//!
//! A [`GroupAction`] moves phase states by a cotangent lift; its momentum
//! map is the Noether charge that stays constant along any flow whose
//! Hamiltonian is invariant. The Euler top is handled in reduced body-frame
//! variables `Π`, where `Π̇ = Π × Ω`, `Ω_k = Π_k / I_k`, and `‖Π‖²` is a
//! Casimir.

use nalgebra::{Rotation3, Unit, Vector3};

use crate::error::{Error, Result};
use crate::hamiltonian::{evaluate_hamiltonian, PhaseState, Trajectory};
use crate::manifold::Manifold;
use crate::sweep::{self, Execution};
use crate::systems::MechanicalSystem;

/// One-parameter symmetry group acting on `T*Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupAction {
    /// `q ↦ q + δ·d` on `R³`; momenta unchanged.
    Translation { direction: [f64; 3] },
    /// `(q, p) ↦ (R q, R p)` on `R³`, `R` a rotation by `δ` about `axis`.
    /// Its momentum map is the full angular momentum `q × p`.
    Rotation { axis: [f64; 3] },
    /// Shift of one circle coordinate (tangent index `component`).
    PhaseRotation { component: usize },
}

fn unit(v: [f64; 3]) -> Result<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::invalid("group direction must be a nonzero finite vector"));
    }
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

impl GroupAction {
    pub fn translation(direction: [f64; 3]) -> Result<Self> {
        Ok(GroupAction::Translation {
            direction: unit(direction)?,
        })
    }

    pub fn rotation(axis: [f64; 3]) -> Result<Self> {
        Ok(GroupAction::Rotation { axis: unit(axis)? })
    }

    pub fn phase_rotation(component: usize) -> Self {
        GroupAction::PhaseRotation { component }
    }

    fn check_compatible(&self, manifold: &Manifold) -> Result<()> {
        match self {
            GroupAction::Translation { .. } | GroupAction::Rotation { .. } => {
                if manifold != &Manifold::Euclidean(3) {
                    return Err(Error::invalid(format!(
                        "translations and rotations act on euclidean:3, not {manifold}"
                    )));
                }
            }
            GroupAction::PhaseRotation { component } => {
                if !manifold.circle_components().contains(component) {
                    return Err(Error::invalid(format!(
                        "component {component} of {manifold} is not a circle"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The group element with parameter `delta`, lifted to phase space.
    pub fn apply(&self, s: &PhaseState, delta: f64) -> Result<PhaseState> {
        let manifold = s.manifold();
        self.check_compatible(manifold)?;
        let q = s.q().coords();
        let p = s.p().components();
        match self {
            GroupAction::Translation { direction } => {
                let q: Vec<f64> = q.iter().zip(direction).map(|(x, d)| x + delta * d).collect();
                PhaseState::from_coords(manifold, q, p.to_vec())
            }
            GroupAction::Rotation { axis } => {
                let r = Rotation3::from_axis_angle(&Unit::new_unchecked(Vector3::from(*axis)), delta);
                let q = r * Vector3::from_column_slice(q);
                let p = r * Vector3::from_column_slice(p);
                PhaseState::from_coords(manifold, q.as_slice().to_vec(), p.as_slice().to_vec())
            }
            GroupAction::PhaseRotation { component } => {
                let mut u = vec![0.0; manifold.dim()];
                u[*component] = delta;
                let q = s.q().retract(&u)?;
                PhaseState::from_coords(manifold, q.coords().to_vec(), p.to_vec())
            }
        }
    }
}

/// Value of a momentum map `μ: T*Q → 𝔤*`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumMapValue {
    pub charge: Vec<f64>,
}

/// Translation: `p·d`. Rotation: `q × p`. Phase rotation: `p_i`.
pub fn momentum_map(action: &GroupAction, s: &PhaseState) -> Result<MomentumMapValue> {
    action.check_compatible(s.manifold())?;
    let q = s.q().coords();
    let p = s.p().components();
    let charge = match action {
        GroupAction::Translation { direction } => {
            vec![p.iter().zip(direction).map(|(a, b)| a * b).sum()]
        }
        GroupAction::Rotation { .. } => {
            let l = Vector3::from_column_slice(q).cross(&Vector3::from_column_slice(p));
            vec![l.x, l.y, l.z]
        }
        GroupAction::PhaseRotation { component } => vec![p[*component]],
    };
    Ok(MomentumMapValue { charge })
}

/// `|H(g_δ · s) − H(s)| / (1 + |H(s)|)`.
pub fn check_invariance(
    system: &MechanicalSystem,
    action: &GroupAction,
    s: &PhaseState,
    delta: f64,
) -> Result<f64> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::invalid("invariance check needs delta > 0"));
    }
    let h0 = evaluate_hamiltonian(system, s)?;
    let h1 = evaluate_hamiltonian(system, &action.apply(s, delta)?)?;
    Ok((h1 - h0).abs() / (1.0 + h0.abs()))
}

pub const INVARIANCE_DELTAS: [f64; 3] = [1e-3, 1e-2, 1e-1];
pub const INVARIANCE_TOL: f64 = 1e-10;
pub const INVARIANCE_SAMPLES: usize = 100;

/// Declares `system` invariant under `action` when [`check_invariance`]
/// stays within `1e-10` for every delta in [`INVARIANCE_DELTAS`] at 100
/// reproducible random states.
pub fn is_invariant(
    exec: Execution,
    system: &MechanicalSystem,
    action: &GroupAction,
    seed: u64,
) -> Result<bool> {
    action.check_compatible(system.manifold())?;
    let states = sweep::random_states(system, INVARIANCE_SAMPLES, 2.0, seed);
    let worst = sweep::max_abs(exec, &states, |s| {
        INVARIANCE_DELTAS
            .iter()
            .try_fold(0.0f64, |m, d| Ok(m.max(check_invariance(system, action, s, *d)?)))
    })?;
    Ok(worst <= INVARIANCE_TOL)
}

/// `max_t ‖μ(s_t) − μ(s_0)‖∞`.
pub fn noether_drift(_system: &MechanicalSystem, action: &GroupAction, traj: &Trajectory) -> Result<f64> {
    let first = traj
        .states
        .first()
        .ok_or_else(|| Error::invalid("empty trajectory"))?;
    let mu0 = momentum_map(action, first)?.charge;
    let mut drift: f64 = 0.0;
    for s in &traj.states {
        let mu = momentum_map(action, s)?.charge;
        for (a, b) in mu.iter().zip(&mu0) {
            drift = drift.max((a - b).abs());
        }
    }
    Ok(drift)
}

/// Reduced Euler-top state: body angular momentum and principal moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyAngularMomentum {
    pub pi: [f64; 3],
    pub inertia: [f64; 3],
}

impl BodyAngularMomentum {
    pub fn new(pi: [f64; 3], inertia: [f64; 3]) -> Result<Self> {
        if inertia.iter().any(|i| !(*i > 0.0 && i.is_finite())) {
            return Err(Error::invalid("principal moments of inertia must be positive"));
        }
        if pi.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite angular momentum"));
        }
        Ok(BodyAngularMomentum { pi, inertia })
    }

    pub fn with_pi(&self, pi: [f64; 3]) -> Self {
        BodyAngularMomentum { pi, inertia: self.inertia }
    }

    /// `Ω_k = Π_k / I_k`.
    pub fn angular_velocity(&self) -> [f64; 3] {
        std::array::from_fn(|k| self.pi[k] / self.inertia[k])
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `Π̇ = Π × Ω`.
pub fn euler_top_rhs(b: &BodyAngularMomentum) -> [f64; 3] {
    cross(b.pi, b.angular_velocity())
}

/// `‖Π‖²`.
pub fn casimir(b: &BodyAngularMomentum) -> f64 {
    b.pi.iter().map(|x| x * x).sum()
}

/// `½ Σ Π_k² / I_k`.
pub fn rotational_energy(b: &BodyAngularMomentum) -> f64 {
    0.5 * (0..3).map(|k| b.pi[k] * b.pi[k] / b.inertia[k]).sum::<f64>()
}

const TOP_TOL: f64 = 1e-12;
const TOP_MAX_ITER: usize = 100;

/// Implicit midpoint `Π' = Π + h f((Π + Π')/2)`; `n + 1` samples including
/// `Π0`. Both the Casimir and the energy are quadratic, so the scheme
/// preserves them up to the solver tolerance.
pub fn integrate_euler_top(b0: &BodyAngularMomentum, h: f64, n: usize) -> Result<Vec<[f64; 3]>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step must be positive, got {h}")));
    }
    BodyAngularMomentum::new(b0.pi, b0.inertia)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(b0.pi);
    let mut current = b0.pi;
    for step in 0..n {
        current = midpoint_top_step(b0, current, h).map_err(|e| e.at_step(step))?;
        out.push(current);
    }
    Ok(out)
}

fn midpoint_top_step(b: &BodyAngularMomentum, pi: [f64; 3], h: f64) -> Result<[f64; 3]> {
    let f = |x: [f64; 3]| euler_top_rhs(&b.with_pi(x));
    let k0 = f(pi);
    let mut guess: [f64; 3] = std::array::from_fn(|k| pi[k] + h * k0[k]);
    let mut prev = f64::INFINITY;
    let mut polished = 0;
    for iteration in 0..TOP_MAX_ITER {
        let mid: [f64; 3] = std::array::from_fn(|k| 0.5 * (pi[k] + guess[k]));
        let fm = f(mid);
        let next: [f64; 3] = std::array::from_fn(|k| pi[k] + h * fm[k]);
        let r = (0..3).fold(0.0f64, |m, k| m.max((next[k] - guess[k]).abs()));
        if !r.is_finite() {
            return Err(Error::Convergence {
                residual: r,
                iterations: iteration,
                step: None,
            });
        }
        if r <= TOP_TOL {
            if r == 0.0 || r > 0.25 * prev || polished >= 3 {
                return Ok(next);
            }
            polished += 1;
        }
        prev = r;
        guess = next;
    }
    Err(Error::Convergence {
        residual: prev,
        iterations: TOP_MAX_ITER,
        step: None,
    })
}
