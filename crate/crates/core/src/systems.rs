//! Catalog of finite-dimensional mechanical systems.
//!
//! Every system is a manifold together with a mass matrix `M(q)` and a
//! potential `V(q)`; the Lagrangian `½ vᵀM v − V` and the Hamiltonian
//! `½ pᵀM⁻¹p + V` are both induced from these two functions. Potentials are
//! offset so the rest configuration has `V = 0`, and pendulum angles are
//! measured counterclockwise from the downward vertical.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::PhaseState;
use crate::manifold::{CotangentValue, Manifold, ManifoldPoint};

type MassFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
type PotentialFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradientFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Manifold + mass matrix + potential. Cheap to clone.
#[derive(Clone)]
pub struct MechanicalSystem {
    name: String,
    manifold: Manifold,
    mass_matrix: Arc<MassFn>,
    constant_mass: bool,
    potential: Arc<PotentialFn>,
    potential_gradient: Option<Arc<GradientFn>>,
}

impl fmt::Debug for MechanicalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MechanicalSystem")
            .field("name", &self.name)
            .field("manifold", &self.manifold)
            .field("constant_mass", &self.constant_mass)
            .field("analytic_gradient", &self.potential_gradient.is_some())
            .finish()
    }
}

impl MechanicalSystem {
    /// Functions receive canonical chart coordinates.
    pub fn new(
        name: impl Into<String>,
        manifold: Manifold,
        mass_matrix: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
        potential: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        MechanicalSystem {
            name: name.into(),
            manifold,
            mass_matrix: Arc::new(mass_matrix),
            constant_mass: false,
            potential: Arc::new(potential),
            potential_gradient: None,
        }
    }

    /// Declare `M` independent of `q`. Enables the explicit splitting
    /// integrators and the closed-form action derivative.
    pub fn with_constant_mass(mut self) -> Self {
        self.constant_mass = true;
        self
    }

    pub fn with_potential_gradient(
        mut self,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.potential_gradient = Some(Arc::new(gradient));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn has_constant_mass(&self) -> bool {
        self.constant_mass
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.potential_gradient.is_some()
    }

    pub(crate) fn check_point(&self, q: &ManifoldPoint) -> Result<()> {
        if q.manifold() != &self.manifold {
            return Err(Error::invalid(format!(
                "point on {} but system `{}` lives on {}",
                q.manifold(),
                self.name,
                self.manifold
            )));
        }
        Ok(())
    }

    pub fn mass_matrix(&self, q: &ManifoldPoint) -> Result<DMatrix<f64>> {
        self.check_point(q)?;
        Ok(self.mass_at(q.coords()))
    }

    pub fn potential(&self, q: &ManifoldPoint) -> Result<f64> {
        self.check_point(q)?;
        Ok(self.potential_at(q.coords()))
    }

    /// Analytic `∇V`, when the system supplies one.
    pub fn potential_gradient(&self, q: &ManifoldPoint) -> Result<Option<Vec<f64>>> {
        self.check_point(q)?;
        Ok(self.potential_gradient.as_ref().map(|g| g(q.coords())))
    }

    pub(crate) fn mass_at(&self, coords: &[f64]) -> DMatrix<f64> {
        (self.mass_matrix)(coords)
    }

    pub(crate) fn potential_at(&self, coords: &[f64]) -> f64 {
        (self.potential)(coords)
    }

    pub(crate) fn analytic_gradient_at(&self, coords: &[f64]) -> Option<Vec<f64>> {
        self.potential_gradient.as_ref().map(|g| g(coords))
    }
}

/// Name plus numeric parameters, as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
}

impl SystemConfig {
    pub fn new(name: impl Into<String>, params: &[(&str, f64)]) -> Self {
        SystemConfig {
            name: name.into(),
            parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Entry of the system catalog.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub manifold: &'static str,
    pub parameters: &'static [&'static str],
    pub summary: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "free-particle",
        manifold: "euclidean:3",
        parameters: &["m"],
        summary: "point mass, V = 0",
    },
    CatalogEntry {
        name: "harmonic-particle",
        manifold: "euclidean:3",
        parameters: &["m", "k"],
        summary: "point mass in the central potential V = k|q|^2/2",
    },
    CatalogEntry {
        name: "pendulum",
        manifold: "circle",
        parameters: &["m", "l", "g"],
        summary: "planar pendulum, V = m g l (1 - cos theta)",
    },
    CatalogEntry {
        name: "double-pendulum",
        manifold: "product(circle,circle)",
        parameters: &["m1", "m2", "l1", "l2", "g"],
        summary: "planar double pendulum on the torus",
    },
];

fn catalog_entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// Look up `names` in `config`, checking positivity (`g` may be zero) and
/// rejecting parameters the system does not use.
fn read_params<const N: usize>(config: &SystemConfig, names: [&str; N]) -> Result<[f64; N]> {
    for key in config.parameters.keys() {
        if !names.contains(&key.as_str()) {
            return Err(Error::Config {
                parameter: key.clone(),
                message: format!("not a parameter of `{}`", config.name),
            });
        }
    }
    let mut out = [0.0; N];
    for (slot, name) in out.iter_mut().zip(names) {
        let value = *config.parameters.get(name).ok_or_else(|| Error::Config {
            parameter: name.to_string(),
            message: format!("required by `{}`", config.name),
        })?;
        let ok = if name == "g" {
            value.is_finite() && value >= 0.0
        } else {
            value.is_finite() && value > 0.0
        };
        if !ok {
            return Err(Error::Config {
                parameter: name.to_string(),
                message: format!("invalid value {value}"),
            });
        }
        *slot = value;
    }
    Ok(out)
}

pub fn build_system(config: &SystemConfig) -> Result<MechanicalSystem> {
    if catalog_entry(&config.name).is_none() {
        return Err(Error::Config {
            parameter: "system".into(),
            message: format!("unknown system `{}`", config.name),
        });
    }
    let sys = match config.name.as_str() {
        "free-particle" => {
            let [m] = read_params(config, ["m"])?;
            MechanicalSystem::new(
                "free-particle",
                Manifold::Euclidean(3),
                move |_| DMatrix::identity(3, 3) * m,
                |_| 0.0,
            )
            .with_constant_mass()
            .with_potential_gradient(|_| vec![0.0; 3])
        }
        "harmonic-particle" => {
            let [m, k] = read_params(config, ["m", "k"])?;
            MechanicalSystem::new(
                "harmonic-particle",
                Manifold::Euclidean(3),
                move |_| DMatrix::identity(3, 3) * m,
                move |q| 0.5 * k * q.iter().map(|x| x * x).sum::<f64>(),
            )
            .with_constant_mass()
            .with_potential_gradient(move |q| q.iter().map(|x| k * x).collect())
        }
        "pendulum" => {
            let [m, l, g] = read_params(config, ["m", "l", "g"])?;
            MechanicalSystem::new(
                "pendulum",
                Manifold::Circle,
                move |_| DMatrix::from_element(1, 1, m * l * l),
                move |q| m * g * l * (1.0 - q[0].cos()),
            )
            .with_constant_mass()
            .with_potential_gradient(move |q| vec![m * g * l * q[0].sin()])
        }
        "double-pendulum" => {
            let [m1, m2, l1, l2, g] = read_params(config, ["m1", "m2", "l1", "l2", "g"])?;
            MechanicalSystem::new(
                "double-pendulum",
                Manifold::torus(),
                move |q| {
                    let c = m2 * l1 * l2 * (q[0] - q[1]).cos();
                    DMatrix::from_row_slice(2, 2, &[(m1 + m2) * l1 * l1, c, c, m2 * l2 * l2])
                },
                move |q| {
                    (m1 + m2) * g * l1 * (1.0 - q[0].cos()) + m2 * g * l2 * (1.0 - q[1].cos())
                },
            )
            .with_potential_gradient(move |q| {
                vec![(m1 + m2) * g * l1 * q[0].sin(), m2 * g * l2 * q[1].sin()]
            })
        }
        _ => unreachable!("catalog membership checked above"),
    };
    Ok(sys)
}

/// Small-amplitude pendulum period `2π√(l/g)`. The mass does not enter.
pub fn pendulum_small_period(_m: f64, l: f64, g: f64) -> Result<f64> {
    if !(l > 0.0 && g > 0.0) {
        return Err(Error::invalid("pendulum period needs l > 0 and g > 0"));
    }
    Ok(TAU * (l / g).sqrt())
}

/// Closed-form harmonic oscillator state at time `t`:
/// `q = q0 cos ωt + p0/(mω) sin ωt`, `p = p0 cos ωt − m ω q0 sin ωt`.
pub fn harmonic_reference(m: f64, k: f64, q0: &[f64], p0: &[f64], t: f64) -> Result<PhaseState> {
    if !(m > 0.0 && k > 0.0) {
        return Err(Error::invalid("harmonic reference needs m > 0 and k > 0"));
    }
    if q0.len() != p0.len() {
        return Err(Error::invalid("q0 and p0 lengths differ"));
    }
    let omega = (k / m).sqrt();
    let (s, c) = (omega * t).sin_cos();
    let q: Vec<f64> = q0
        .iter()
        .zip(p0)
        .map(|(q, p)| q * c + p / (m * omega) * s)
        .collect();
    let p: Vec<f64> = q0
        .iter()
        .zip(p0)
        .map(|(q, p)| p * c - m * omega * q * s)
        .collect();
    let base = ManifoldPoint::new(Manifold::Euclidean(q.len()), q)?;
    let p = CotangentValue::new(base.clone(), p)?;
    PhaseState::new(base, p)
}
