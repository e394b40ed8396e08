//! Batch evaluation over independent inputs.
//!
//! Property sweeps (identities checked at many random states) and ensembles
//! of trajectories are embarrassingly parallel. With the `parallel` feature
//! these run on the rayon pool; without it, or with
//! [`Execution::Sequential`], they run on the calling thread. Results are
//! returned in input order either way, so outputs do not depend on the
//! execution mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hamiltonian::{directional_energy_change, integrate, Method, PhaseState, Trajectory};
use crate::systems::MechanicalSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

pub fn map<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

pub fn try_map<T, U, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// `max_i |f(item_i)|`.
pub fn max_abs<T, F>(exec: Execution, items: &[T], f: F) -> Result<f64>
where
    T: Sync,
    F: Fn(&T) -> Result<f64> + Sync + Send,
{
    Ok(try_map(exec, items, f)?
        .into_iter()
        .fold(0.0, |m: f64, x| m.max(x.abs())))
}

/// Reproducible random phase states: canonical positions from
/// [`crate::Manifold::sample_coords`], momenta uniform in
/// `[-momentum_scale, momentum_scale]`.
pub fn random_states(
    system: &MechanicalSystem,
    count: usize,
    momentum_scale: f64,
    seed: u64,
) -> Vec<PhaseState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let manifold = system.manifold();
    (0..count)
        .map(|_| {
            let q = manifold.sample_coords(&mut rng);
            let p = (0..manifold.dim())
                .map(|_| rng.gen_range(-momentum_scale..=momentum_scale))
                .collect();
            PhaseState::from_canonical(manifold, q, p)
        })
        .collect()
}

/// Largest `|dH(X_H)|` over `states`.
pub fn energy_identity_sweep(
    exec: Execution,
    system: &MechanicalSystem,
    states: &[PhaseState],
) -> Result<f64> {
    max_abs(exec, states, |s| directional_energy_change(system, s))
}

/// One trajectory per initial state.
pub fn integrate_many(
    exec: Execution,
    system: &MechanicalSystem,
    starts: &[PhaseState],
    h: f64,
    n_steps: usize,
    method: Method,
) -> Result<Vec<Trajectory>> {
    try_map(exec, starts, |s| integrate(system, s, h, n_steps, method))
}

/// `max_t |H(t) − H(0)|` for each trajectory of an ensemble.
pub fn energy_drifts(
    exec: Execution,
    system: &MechanicalSystem,
    trajectories: &[Trajectory],
) -> Result<Vec<f64>> {
    try_map(exec, trajectories, |t| {
        let e = t.energies(system)?;
        Ok(e.iter().fold(0.0, |m: f64, x| m.max((x - e[0]).abs())))
    })
}
