//! Stationary-action dynamics.
//!
//! A path is sampled at uniformly spaced times and the action
//! `S = ∫ L(q, q̇) dt` is replaced by a sum of per-segment discrete
//! Lagrangians. Physical paths are the stationary points of that sum:
//! [`solve_bvp`] finds one between fixed endpoints by Newton iteration, and
//! [`integrate_variational`] marches forward by solving the discrete
//! Euler–Lagrange equation one node at a time.
//!
//! Velocities are wrapped chart displacements divided by the step, so
//! paths may cross the `0/2π` seam of circle factors freely.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hamiltonian::{inverse_mass_apply, mass_apply, potential_gradient_at};
use crate::manifold::{chart_displacement, dot, max_abs, Manifold, ManifoldPoint, TangentValue};
use crate::systems::MechanicalSystem;

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 20;
/// Smallest accepted `min|u_ii| / max|u_ii|` of the LU factor before the
/// action Hessian is treated as singular.
const CONJUGATE_PIVOT_RATIO: f64 = 1e-10;

/// Per-segment quadrature of the action integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// `h·L(q_i ⊕ d/2, d/h)` with `d` the chart displacement. Its discrete
    /// flow coincides with the implicit midpoint rule for constant mass.
    #[default]
    Midpoint,
    /// `h/2·(L(q_i, d/h) + L(q_{i+1}, d/h))`. Its discrete flow coincides
    /// with Störmer–Verlet for constant mass.
    Trapezoidal,
}

/// Samples `(t_i, q_i)`, `i = 0..=N`, with uniform step.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePath {
    times: Vec<f64>,
    points: Vec<ManifoldPoint>,
}

impl DiscretePath {
    /// Points are canonicalized; `times[i] = t0 + i·h`.
    pub fn new(t0: f64, h: f64, points: Vec<ManifoldPoint>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid(format!("path step must be positive, got {h}")));
        }
        let times = (0..points.len()).map(|i| t0 + i as f64 * h).collect();
        Self::from_samples(times, points)
    }

    pub fn from_samples(times: Vec<f64>, points: Vec<ManifoldPoint>) -> Result<Self> {
        if times.len() != points.len() {
            return Err(Error::invalid("times and points differ in length"));
        }
        if points.is_empty() {
            return Err(Error::invalid("empty path"));
        }
        let manifold = points[0].manifold().clone();
        let mut canonical = Vec::with_capacity(points.len());
        for p in &points {
            if p.manifold() != &manifold {
                return Err(Error::invalid("path points on different manifolds"));
            }
            canonical.push(crate::manifold::canonicalize(p)?);
        }
        if times.len() > 1 {
            let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
            if h.is_nan() || h <= 0.0 {
                return Err(Error::invalid("times must be strictly increasing"));
            }
            for (i, t) in times.iter().enumerate() {
                if (t - (times[0] + i as f64 * h)).abs() > 1e-12 * (1.0 + t.abs()) {
                    return Err(Error::invalid("times are not uniformly spaced"));
                }
            }
        }
        Ok(DiscretePath {
            times,
            points: canonical,
        })
    }

    /// `q_i = qa ⊕ (i/N)·chart_displacement(qa, qb)` on `[0, T]`.
    pub fn interpolate(qa: &ManifoldPoint, qb: &ManifoldPoint, t_final: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("interpolation needs at least one segment"));
        }
        let d = chart_displacement(qa, qb)?;
        let mut points: Vec<ManifoldPoint> = (0..n)
            .map(|i| {
                let s = i as f64 / n as f64;
                qa.retract_unchecked(&d.iter().map(|x| s * x).collect::<Vec<_>>())
            })
            .collect();
        points.push(qb.clone());
        Self::new(0.0, t_final / n as f64, points)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[ManifoldPoint] {
        &self.points
    }

    pub fn manifold(&self) -> &Manifold {
        self.points[0].manifold()
    }

    /// Number of segments `N`.
    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            return 0.0;
        }
        (self.times[self.times.len() - 1] - self.times[0]) / self.segments() as f64
    }

    fn max_coord(&self) -> f64 {
        self.points
            .iter()
            .map(|p| max_abs(p.coords()))
            .fold(0.0, f64::max)
    }
}

/// Variation `r_i` with fixed (zero) endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PathVariation {
    components: Vec<Vec<f64>>,
}

impl PathVariation {
    pub fn new(components: Vec<Vec<f64>>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::invalid("variation needs at least two nodes"));
        }
        let first = &components[0];
        let last = &components[components.len() - 1];
        if first.iter().chain(last).any(|x| *x != 0.0) {
            return Err(Error::invalid("variation must vanish at both endpoints"));
        }
        let dim = first.len();
        if components.iter().any(|c| c.len() != dim) {
            return Err(Error::invalid("variation components differ in length"));
        }
        Ok(PathVariation { components })
    }

    pub fn zero(nodes: usize, dim: usize) -> Self {
        PathVariation {
            components: vec![vec![0.0; dim]; nodes],
        }
    }

    /// Unit variation at interior `node` along chart direction `component`.
    pub fn unit(nodes: usize, dim: usize, node: usize, component: usize) -> Result<Self> {
        if node == 0 || node + 1 >= nodes || component >= dim {
            return Err(Error::invalid("unit variation must sit on an interior node"));
        }
        let mut v = Self::zero(nodes, dim);
        v.components[node][component] = 1.0;
        Ok(v)
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// `α·self + other`.
    pub fn axpy(&self, alpha: f64, other: &PathVariation) -> Result<PathVariation> {
        if self.components.len() != other.components.len() {
            return Err(Error::invalid("variations of different length"));
        }
        PathVariation::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| alpha * x + y).collect())
                .collect(),
        )
    }
}

/// Discrete action with its per-segment contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionValue {
    pub value: f64,
    pub per_segment: Vec<f64>,
}

/// `L(q, v) = ½ vᵀM(q)v − V(q)`.
pub fn evaluate_lagrangian(system: &MechanicalSystem, q: &ManifoldPoint, v: &TangentValue) -> Result<f64> {
    system.check_point(q)?;
    if v.base() != q {
        return Err(Error::invalid("velocity is not based at q"));
    }
    Ok(lagrangian_at(system, q.coords(), v.components()))
}

fn lagrangian_at(system: &MechanicalSystem, q: &[f64], v: &[f64]) -> f64 {
    0.5 * dot(v, &mass_apply(system, q, v)) - system.potential_at(q)
}

/// The action functional of one system under one quadrature.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteAction<'a> {
    system: &'a MechanicalSystem,
    quadrature: Quadrature,
}

impl<'a> DiscreteAction<'a> {
    pub fn new(system: &'a MechanicalSystem, quadrature: Quadrature) -> Self {
        DiscreteAction { system, quadrature }
    }

    pub fn system(&self) -> &MechanicalSystem {
        self.system
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    fn manifold(&self) -> &Manifold {
        self.system.manifold()
    }

    /// Closed-form partial derivatives apply when `M` is constant and `⊕`
    /// is coordinate addition.
    fn closed_form(&self) -> bool {
        self.system.has_constant_mass() && self.manifold().is_flat()
    }

    fn check_path(&self, path: &DiscretePath) -> Result<()> {
        self.system.check_point(&path.points[0])
    }

    /// `L_d(a, b)` over one segment of length `h`.
    fn segment(&self, a: &[f64], b: &[f64], h: f64) -> f64 {
        let m = self.manifold();
        let d = m.displacement_coords(a, b);
        let v: Vec<f64> = d.iter().map(|x| x / h).collect();
        match self.quadrature {
            Quadrature::Midpoint => {
                let half: Vec<f64> = d.iter().map(|x| 0.5 * x).collect();
                h * lagrangian_at(self.system, &m.retract_coords(a, &half), &v)
            }
            Quadrature::Trapezoidal => {
                0.5 * h * (lagrangian_at(self.system, a, &v) + lagrangian_at(self.system, b, &v))
            }
        }
    }

    /// `(∂L_d/∂a, ∂L_d/∂b)` in chart directions.
    fn segment_partials(&self, a: &[f64], b: &[f64], h: f64, eps: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let m = self.manifold();
        if self.closed_form() {
            let d = m.displacement_coords(a, b);
            let kinetic: Vec<f64> = mass_apply(self.system, a, &d).iter().map(|x| x / h).collect();
            let (ga, gb) = match self.quadrature {
                Quadrature::Midpoint => {
                    let half: Vec<f64> = d.iter().map(|x| 0.5 * x).collect();
                    let g = potential_gradient_at(self.system, &m.retract_coords(a, &half))?;
                    (g.clone(), g)
                }
                Quadrature::Trapezoidal => (
                    potential_gradient_at(self.system, a)?,
                    potential_gradient_at(self.system, b)?,
                ),
            };
            let da = kinetic.iter().zip(&ga).map(|(k, g)| -k - 0.5 * h * g).collect();
            let db = kinetic.iter().zip(&gb).map(|(k, g)| k - 0.5 * h * g).collect();
            return Ok((da, db));
        }
        let n = m.dim();
        let mut e = vec![0.0; n];
        let mut da = Vec::with_capacity(n);
        let mut db = Vec::with_capacity(n);
        for i in 0..n {
            e[i] = eps;
            let ap = m.retract_coords(a, &e);
            let bp = m.retract_coords(b, &e);
            e[i] = -eps;
            let am = m.retract_coords(a, &e);
            let bm = m.retract_coords(b, &e);
            e[i] = 0.0;
            da.push((self.segment(&ap, b, h) - self.segment(&am, b, h)) / (2.0 * eps));
            db.push((self.segment(a, &bp, h) - self.segment(a, &bm, h)) / (2.0 * eps));
        }
        if da.iter().chain(&db).any(|x| !x.is_finite()) {
            return Err(Error::Numerical("non-finite action derivative".into()));
        }
        Ok((da, db))
    }

    fn eps(&self, path: &DiscretePath) -> f64 {
        1e-6 * (1.0 + path.max_coord())
    }

    pub fn evaluate(&self, path: &DiscretePath) -> Result<ActionValue> {
        self.check_path(path)?;
        if path.segments() == 0 {
            return Err(Error::invalid("action of a single-point path is undefined"));
        }
        let h = path.step();
        let per_segment: Vec<f64> = path
            .points
            .windows(2)
            .map(|w| self.segment(w[0].coords(), w[1].coords(), h))
            .collect();
        Ok(ActionValue {
            value: per_segment.iter().sum(),
            per_segment,
        })
    }

    /// `∂S/∂q_i` for every node, endpoints included.
    pub fn node_gradients(&self, path: &DiscretePath) -> Result<Vec<Vec<f64>>> {
        self.check_path(path)?;
        if path.segments() == 0 {
            return Err(Error::invalid("gradient of a single-point path is undefined"));
        }
        let h = path.step();
        let eps = self.eps(path);
        let dim = self.manifold().dim();
        let mut grad = vec![vec![0.0; dim]; path.points.len()];
        for (i, w) in path.points.windows(2).enumerate() {
            let (da, db) = self.segment_partials(w[0].coords(), w[1].coords(), h, eps)?;
            for k in 0..dim {
                grad[i][k] += da[k];
                grad[i + 1][k] += db[k];
            }
        }
        Ok(grad)
    }

    /// `d/dε S(q ⊕ εr)` at `ε = 0`, as `Σ_i ∂S/∂q_i · r_i`.
    pub fn directional_derivative(&self, path: &DiscretePath, r: &PathVariation) -> Result<f64> {
        if r.components.len() != path.points.len() || r.components[0].len() != self.manifold().dim() {
            return Err(Error::invalid(format!(
                "variation has {} nodes of size {}, path has {} nodes of dimension {}",
                r.components.len(),
                r.components[0].len(),
                path.points.len(),
                self.manifold().dim()
            )));
        }
        let grad = self.node_gradients(path)?;
        Ok(grad.iter().zip(&r.components).map(|(g, v)| dot(g, v)).sum())
    }

    /// Interior-node gradient, `N − 1` entries.
    pub fn gradient(&self, path: &DiscretePath) -> Result<Vec<Vec<f64>>> {
        if path.segments() < 2 {
            return Err(Error::invalid("action gradient needs at least two segments"));
        }
        let mut g = self.node_gradients(path)?;
        g.pop();
        g.remove(0);
        Ok(g)
    }

    fn interior_residual(&self, path: &DiscretePath) -> Result<(Vec<f64>, f64)> {
        let flat: Vec<f64> = self.gradient(path)?.into_iter().flatten().collect();
        let r = max_abs(&flat);
        Ok((flat, r))
    }

    /// Interior-node Hessian. Kinetic blocks are exact for constant mass;
    /// the rest uses three-colour central differences of the gradient (each
    /// node only couples to its neighbours).
    fn interior_hessian(&self, path: &DiscretePath) -> Result<DMatrix<f64>> {
        let dim = self.manifold().dim();
        let n_int = path.segments() - 1;
        let size = n_int * dim;
        let h = path.step();
        let mut hess = DMatrix::zeros(size, size);
        let closed = self.closed_form();
        if closed {
            let m = self.system.mass_at(path.points[0].coords());
            for i in 0..n_int {
                for r in 0..dim {
                    for c in 0..dim {
                        hess[(i * dim + r, i * dim + c)] += 2.0 * m[(r, c)] / h;
                        if i + 1 < n_int {
                            hess[(i * dim + r, (i + 1) * dim + c)] -= m[(r, c)] / h;
                            hess[((i + 1) * dim + r, i * dim + c)] -= m[(r, c)] / h;
                        }
                    }
                }
            }
        }
        // gradient minus its exactly-known kinetic part
        let remainder = |p: &DiscretePath| -> Result<Vec<Vec<f64>>> {
            let mut g = self.gradient(p)?;
            if closed {
                let pts = &p.points;
                for (i, gi) in g.iter_mut().enumerate() {
                    let node = i + 1;
                    let d_prev = pts[node - 1].displacement_to(&pts[node]);
                    let d_next = pts[node].displacement_to(&pts[node + 1]);
                    let diff: Vec<f64> = d_prev.iter().zip(&d_next).map(|(a, b)| a - b).collect();
                    let k = mass_apply(self.system, pts[node].coords(), &diff);
                    for (x, kk) in gi.iter_mut().zip(&k) {
                        *x -= kk / h;
                    }
                }
            }
            Ok(g)
        };
        let eps = 1e-5 * (1.0 + path.max_coord());
        for color in 0..3 {
            for comp in 0..dim {
                let shifted = |sign: f64| -> Result<DiscretePath> {
                    let mut pts = path.points.clone();
                    let mut e = vec![0.0; dim];
                    e[comp] = sign * eps;
                    for (j, p) in pts.iter_mut().enumerate().take(n_int + 1).skip(1) {
                        if (j - 1) % 3 == color {
                            *p = p.retract_unchecked(&e);
                        }
                    }
                    Ok(DiscretePath {
                        times: path.times.clone(),
                        points: pts,
                    })
                };
                let gp = remainder(&shifted(1.0)?)?;
                let gm = remainder(&shifted(-1.0)?)?;
                for row in 0..n_int {
                    for col in row.saturating_sub(1)..(row + 2).min(n_int) {
                        if col % 3 != color {
                            continue;
                        }
                        for r in 0..dim {
                            hess[(row * dim + r, col * dim + comp)] +=
                                (gp[row][r] - gm[row][r]) / (2.0 * eps);
                        }
                    }
                }
            }
        }
        Ok(hess)
    }

    /// Stationary path between fixed endpoints.
    pub fn solve_bvp(
        &self,
        qa: &ManifoldPoint,
        qb: &ManifoldPoint,
        t_final: f64,
        n: usize,
        initial_guess: Option<&DiscretePath>,
    ) -> Result<DiscretePath> {
        self.system.check_point(qa)?;
        self.system.check_point(qb)?;
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::invalid(format!("T must be positive, got {t_final}")));
        }
        if n < 2 {
            return Err(Error::invalid("boundary value problem needs N >= 2"));
        }
        let mut path = match initial_guess {
            Some(g) => {
                if g.segments() != n {
                    return Err(Error::invalid("initial guess has the wrong number of segments"));
                }
                if (g.step() - t_final / n as f64).abs() > 1e-12 * (1.0 + g.step()) {
                    return Err(Error::invalid("initial guess has the wrong time step"));
                }
                let mut g = g.clone();
                g.points[0] = crate::manifold::canonicalize(qa)?;
                g.points[n] = crate::manifold::canonicalize(qb)?;
                g
            }
            None => DiscretePath::interpolate(qa, qb, t_final, n)?,
        };
        self.check_path(&path)?;
        let dim = self.manifold().dim();
        let (mut g, mut r) = self.interior_residual(&path)?;
        let mut iterations = 0;
        while r > NEWTON_TOL {
            if iterations == NEWTON_MAX_ITER {
                return Err(Error::Convergence {
                    residual: r,
                    iterations,
                    step: None,
                });
            }
            iterations += 1;
            let lu = self.interior_hessian(&path)?.lu();
            let u = lu.u();
            let diag = u.diagonal();
            let max_pivot = diag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let min_pivot = diag.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
            let ratio = if max_pivot > 0.0 { min_pivot / max_pivot } else { 0.0 };
            if ratio.is_nan() || ratio < CONJUGATE_PIVOT_RATIO {
                return Err(Error::ConjugatePoint { pivot_ratio: ratio });
            }
            let delta = lu
                .solve(&DVector::from_vec(g.clone()))
                .ok_or(Error::ConjugatePoint { pivot_ratio: ratio })?;
            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..=MAX_HALVINGS {
                let mut trial = path.clone();
                for (i, p) in trial.points[1..n].iter_mut().enumerate() {
                    let step: Vec<f64> = (0..dim).map(|k| -alpha * delta[i * dim + k]).collect();
                    *p = p.retract_unchecked(&step);
                }
                let (tg, tr) = self.interior_residual(&trial)?;
                if tr < r {
                    accepted = Some((trial, tg, tr));
                    break;
                }
                alpha *= 0.5;
            }
            match accepted {
                Some((p, tg, tr)) => {
                    path = p;
                    g = tg;
                    r = tr;
                }
                None => {
                    return Err(Error::Convergence {
                        residual: r,
                        iterations,
                        step: None,
                    })
                }
            }
        }
        Ok(path)
    }

    /// Gradient at `node` as a function of the next point.
    fn node_residual(&self, prev: &[f64], cur: &[f64], next: &[f64], h: f64, eps: f64) -> Result<Vec<f64>> {
        let (_, db) = self.segment_partials(prev, cur, h, eps)?;
        let (da, _) = self.segment_partials(cur, next, h, eps)?;
        Ok(db.iter().zip(&da).map(|(a, b)| a + b).collect())
    }

    /// March the discrete Euler–Lagrange equations from `(q0, q1)`.
    pub fn integrate(&self, q0: &ManifoldPoint, q1: &ManifoldPoint, h: f64, steps: usize) -> Result<DiscretePath> {
        self.system.check_point(q0)?;
        self.system.check_point(q1)?;
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid(format!("step must be positive, got {h}")));
        }
        if steps == 0 {
            return Err(Error::invalid("variational integration needs at least one step"));
        }
        let m = self.manifold();
        let mut pts: Vec<Vec<f64>> = vec![
            crate::manifold::canonicalize(q0)?.coords().to_vec(),
            crate::manifold::canonicalize(q1)?.coords().to_vec(),
        ];
        for i in 1..steps {
            let (prev, cur) = (&pts[i - 1], &pts[i]);
            let eps = 1e-6 * (1.0 + max_abs(cur));
            let guess = m.displacement_coords(prev, cur);
            let next = solve_local(
                |u| self.node_residual(prev, cur, &m.retract_coords(cur, u), h, eps),
                guess,
            )
            .map_err(|e| e.at_step(i))?;
            pts.push(m.retract_coords(cur, &next));
        }
        DiscretePath::new(
            0.0,
            h,
            pts.into_iter()
                .map(|c| ManifoldPoint::from_canonical(m, c))
                .collect(),
        )
    }

    /// Second node `q1` whose discrete Legendre transform at `q0` gives
    /// `p0 = −∂L_d/∂a (q0, q1)`.
    pub fn second_node_from_momentum(&self, q0: &ManifoldPoint, p0: &[f64], h: f64) -> Result<ManifoldPoint> {
        self.system.check_point(q0)?;
        if p0.len() != self.manifold().dim() {
            return Err(Error::invalid("momentum length does not match dimension"));
        }
        let m = self.manifold();
        let a = q0.coords();
        let eps = 1e-6 * (1.0 + max_abs(a));
        let guess: Vec<f64> = inverse_mass_apply(self.system, a, p0)?
            .iter()
            .map(|v| h * v)
            .collect();
        let u = solve_local(
            |u| {
                let (da, _) = self.segment_partials(a, &m.retract_coords(a, u), h, eps)?;
                Ok(da.iter().zip(p0).map(|(d, p)| -d - p).collect())
            },
            guess,
        )?;
        Ok(q0.retract_unchecked(&u))
    }
}

/// Newton on a small square system `F(u) = 0` with a finite-difference
/// Jacobian; polishes past the tolerance while still contracting.
fn solve_local(f: impl Fn(&[f64]) -> Result<Vec<f64>>, mut u: Vec<f64>) -> Result<Vec<f64>> {
    let n = u.len();
    let mut prev = f64::INFINITY;
    let mut polished = 0;
    for iteration in 0..NEWTON_MAX_ITER {
        let fu = f(&u)?;
        let r = max_abs(&fu);
        if !r.is_finite() {
            return Err(Error::Convergence {
                residual: r,
                iterations: iteration,
                step: None,
            });
        }
        if r <= NEWTON_TOL {
            if r == 0.0 || r > 0.25 * prev || polished >= 2 {
                return Ok(u);
            }
            polished += 1;
        }
        prev = r;
        let mut jac = DMatrix::zeros(n, n);
        for c in 0..n {
            let eps = 1e-7 * (1.0 + u[c].abs());
            let mut up = u.clone();
            up[c] += eps;
            let mut um = u.clone();
            um[c] -= eps;
            let (fp, fm) = (f(&up)?, f(&um)?);
            for r in 0..n {
                jac[(r, c)] = (fp[r] - fm[r]) / (2.0 * eps);
            }
        }
        let delta = jac
            .lu()
            .solve(&DVector::from_vec(fu))
            .ok_or_else(|| Error::Numerical("singular discrete Euler–Lagrange Jacobian".into()))?;
        for (x, d) in u.iter_mut().zip(delta.iter()) {
            *x -= d;
        }
    }
    let r = max_abs(&f(&u)?);
    if r <= NEWTON_TOL {
        return Ok(u);
    }
    Err(Error::Convergence {
        residual: r,
        iterations: NEWTON_MAX_ITER,
        step: None,
    })
}

/// Midpoint-rule action.
pub fn discrete_action(system: &MechanicalSystem, path: &DiscretePath) -> Result<ActionValue> {
    DiscreteAction::new(system, Quadrature::Midpoint).evaluate(path)
}

pub fn directional_action_derivative(
    system: &MechanicalSystem,
    path: &DiscretePath,
    r: &PathVariation,
) -> Result<f64> {
    DiscreteAction::new(system, Quadrature::Midpoint).directional_derivative(path, r)
}

pub fn action_gradient(system: &MechanicalSystem, path: &DiscretePath) -> Result<Vec<Vec<f64>>> {
    DiscreteAction::new(system, Quadrature::Midpoint).gradient(path)
}

pub fn solve_bvp(
    system: &MechanicalSystem,
    qa: &ManifoldPoint,
    qb: &ManifoldPoint,
    t_final: f64,
    n: usize,
    initial_guess: Option<&DiscretePath>,
) -> Result<DiscretePath> {
    DiscreteAction::new(system, Quadrature::Midpoint).solve_bvp(qa, qb, t_final, n, initial_guess)
}

pub fn integrate_variational(
    system: &MechanicalSystem,
    q0: &ManifoldPoint,
    q1: &ManifoldPoint,
    h: f64,
    steps: usize,
) -> Result<DiscretePath> {
    DiscreteAction::new(system, Quadrature::Midpoint).integrate(q0, q1, h, steps)
}
