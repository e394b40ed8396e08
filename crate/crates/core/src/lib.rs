//! Geometric mechanics toolkit.
//!
//! Mechanical systems live on configuration manifolds ([`manifold`]) and are
//! described by a mass matrix and a potential ([`systems`]). The same system
//! can be simulated from the stationary-action side ([`lagrangian`]) or as a
//! symplectic flow on phase space ([`hamiltonian`]); [`symmetry`] checks the
//! conserved quantities that continuous symmetries produce, including the
//! reduced Euler top. [`sweep`] runs batches of independent evaluations,
//! in parallel when the `parallel` feature is on.

pub mod cli;
pub mod error;
pub mod hamiltonian;
pub mod lagrangian;
pub mod manifold;
pub mod output;
pub mod sweep;
pub mod symmetry;
pub mod systems;

pub use error::{Error, Result};
pub use hamiltonian::{Method, PhaseState, Trajectory};
pub use manifold::{CotangentValue, Manifold, ManifoldPoint, TangentValue};
pub use systems::{build_system, MechanicalSystem, SystemConfig};
