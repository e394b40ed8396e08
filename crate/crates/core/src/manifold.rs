//! Configuration spaces as chart-coordinate spaces.
//!
//! A [`Manifold`] is built from Euclidean factors, circles and the rotation
//! group, combined by products. Points carry raw chart coordinates; circle
//! coordinates are angles in radians reduced to `[0, 2π)` and rotations are
//! unit quaternions `(w, x, y, z)` with the first nonzero component positive.
//! Tangent and cotangent components are always `dim` long, so a rotation
//! contributes four coordinates but three tangent components.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Manifold {
    Euclidean(usize),
    Circle,
    RotationGroup3,
    Product(Vec<Manifold>),
}

/// Elementary factor of a (possibly nested) product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Atom {
    Real { coord: usize },
    Angle { coord: usize },
    Rotation { coord: usize, tangent: usize },
}

impl Manifold {
    pub fn torus() -> Self {
        Manifold::Product(vec![Manifold::Circle, Manifold::Circle])
    }

    /// Chart (tangent) dimension.
    pub fn dim(&self) -> usize {
        match self {
            Manifold::Euclidean(n) => *n,
            Manifold::Circle => 1,
            Manifold::RotationGroup3 => 3,
            Manifold::Product(parts) => parts.iter().map(Manifold::dim).sum(),
        }
    }

    /// Number of stored coordinates; differs from `dim` only for rotations.
    pub fn coord_len(&self) -> usize {
        match self {
            Manifold::Euclidean(n) => *n,
            Manifold::Circle => 1,
            Manifold::RotationGroup3 => 4,
            Manifold::Product(parts) => parts.iter().map(Manifold::coord_len).sum(),
        }
    }

    /// True when coordinates and tangent components line up one to one and
    /// `⊕` is plain addition followed by angle reduction.
    pub fn is_flat(&self) -> bool {
        match self {
            Manifold::RotationGroup3 => false,
            Manifold::Product(parts) => parts.iter().all(Manifold::is_flat),
            _ => true,
        }
    }

    pub(crate) fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut 0, &mut 0, &mut out);
        out
    }

    fn collect_atoms(&self, coord: &mut usize, tangent: &mut usize, out: &mut Vec<Atom>) {
        match self {
            Manifold::Euclidean(n) => {
                for _ in 0..*n {
                    out.push(Atom::Real { coord: *coord });
                    *coord += 1;
                    *tangent += 1;
                }
            }
            Manifold::Circle => {
                out.push(Atom::Angle { coord: *coord });
                *coord += 1;
                *tangent += 1;
            }
            Manifold::RotationGroup3 => {
                out.push(Atom::Rotation {
                    coord: *coord,
                    tangent: *tangent,
                });
                *coord += 4;
                *tangent += 3;
            }
            Manifold::Product(parts) => {
                for part in parts {
                    part.collect_atoms(coord, tangent, out);
                }
            }
        }
    }

    /// Tangent indices that belong to circle factors.
    pub fn circle_components(&self) -> Vec<usize> {
        let mut idx = Vec::new();
        let mut tangent = 0;
        for atom in self.atoms() {
            match atom {
                Atom::Angle { .. } => {
                    idx.push(tangent);
                    tangent += 1;
                }
                Atom::Real { .. } => tangent += 1,
                Atom::Rotation { .. } => tangent += 3,
            }
        }
        idx
    }

    fn canonicalize_coords(&self, coords: &mut [f64]) {
        for atom in self.atoms() {
            match atom {
                Atom::Real { .. } => {}
                Atom::Angle { coord } => coords[coord] = wrap_angle(coords[coord]),
                Atom::Rotation { coord, .. } => canonical_quaternion(&mut coords[coord..coord + 4]),
            }
        }
    }

    /// `coords ⊕ u`: move along `u` in the chart and canonicalize.
    pub(crate) fn retract_coords(&self, coords: &[f64], u: &[f64]) -> Vec<f64> {
        let mut out = coords.to_vec();
        let mut tangent = 0;
        for atom in self.atoms() {
            match atom {
                Atom::Real { coord } | Atom::Angle { coord } => {
                    out[coord] += u[tangent];
                    tangent += 1;
                }
                Atom::Rotation { coord, .. } => {
                    let q = quat(&coords[coord..coord + 4]);
                    let step = UnitQuaternion::from_scaled_axis(Vector3::new(
                        u[tangent],
                        u[tangent + 1],
                        u[tangent + 2],
                    ));
                    let r = q * step;
                    out[coord..coord + 4].copy_from_slice(&[r.w, r.i, r.j, r.k]);
                    tangent += 3;
                }
            }
        }
        self.canonicalize_coords(&mut out);
        out
    }

    pub(crate) fn displacement_coords(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for atom in self.atoms() {
            match atom {
                Atom::Real { coord } => out.push(b[coord] - a[coord]),
                Atom::Angle { coord } => out.push(wrapped_difference(a[coord], b[coord])),
                Atom::Rotation { coord, .. } => {
                    let qa = quat(&a[coord..coord + 4]);
                    let qb = quat(&b[coord..coord + 4]);
                    let v = rotation_log(qa.inverse() * qb);
                    out.extend_from_slice(&[v.x, v.y, v.z]);
                }
            }
        }
        out
    }

    /// Draw canonical coordinates. Euclidean components are uniform in
    /// `[-2, 2]`, angles uniform on the circle, rotations Haar-uniform.
    pub fn sample_coords<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.coord_len()];
        for atom in self.atoms() {
            match atom {
                Atom::Real { coord } => out[coord] = rng.gen_range(-2.0..2.0),
                Atom::Angle { coord } => out[coord] = rng.gen_range(0.0..TAU),
                Atom::Rotation { coord, .. } => loop {
                    let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                    let n2: f64 = v.iter().map(|x| x * x).sum();
                    if n2 > 1e-4 && n2 <= 1.0 {
                        out[coord..coord + 4].copy_from_slice(&v);
                        break;
                    }
                },
            }
        }
        self.canonicalize_coords(&mut out);
        out
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ManifoldPoint {
        ManifoldPoint {
            manifold: self.clone(),
            coords: self.sample_coords(rng),
        }
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed shortest difference `b - a` on the circle, in `(-π, π]`.
pub fn wrapped_difference(a: f64, b: f64) -> f64 {
    let r = (b - a).rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn quat(c: &[f64]) -> UnitQuaternion<f64> {
    UnitQuaternion::new_unchecked(Quaternion::new(c[0], c[1], c[2], c[3]))
}

fn canonical_quaternion(c: &mut [f64]) {
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    // already-unit quaternions are left bit-identical so canonicalization is idempotent
    if (norm - 1.0).abs() > 4.0 * f64::EPSILON {
        for x in c.iter_mut() {
            *x /= norm;
        }
    }
    if let Some(first) = c.iter().find(|x| **x != 0.0) {
        if *first < 0.0 {
            for x in c.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Rotation vector (axis times angle, angle in `[0, π]`) of a unit quaternion.
fn rotation_log(q: UnitQuaternion<f64>) -> Vector3<f64> {
    let (mut w, mut v) = (q.w, Vector3::new(q.i, q.j, q.k));
    if w < 0.0 {
        w = -w;
        v = -v;
    }
    let s = v.norm();
    if s < 1e-12 {
        // second-order series of 2·atan2(s, w)/s
        return v * (2.0 / w) * (1.0 - s * s / (3.0 * w * w));
    }
    v * (2.0 * s.atan2(w) / s)
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::Euclidean(n) => write!(f, "euclidean:{n}"),
            Manifold::Circle => write!(f, "circle"),
            Manifold::RotationGroup3 => write!(f, "so3"),
            Manifold::Product(parts) => {
                write!(f, "product(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for Manifold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "circle" {
            return Ok(Manifold::Circle);
        }
        if s == "so3" {
            return Ok(Manifold::RotationGroup3);
        }
        if let Some(n) = s.strip_prefix("euclidean:") {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad euclidean dimension in `{s}`")))?;
            return Ok(Manifold::Euclidean(n));
        }
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            let mut parts = Vec::new();
            let mut depth = 0usize;
            let mut start = 0;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => {
                        depth = depth
                            .checked_sub(1)
                            .ok_or_else(|| Error::invalid(format!("unbalanced `{s}`")))?
                    }
                    ',' if depth == 0 => {
                        parts.push(inner[start..i].parse()?);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            if depth != 0 {
                return Err(Error::invalid(format!("unbalanced `{s}`")));
            }
            parts.push(inner[start..].parse()?);
            if parts.len() < 2 {
                return Err(Error::invalid("product needs at least two factors"));
            }
            return Ok(Manifold::Product(parts));
        }
        Err(Error::invalid(format!("unknown manifold `{s}`")))
    }
}

/// A configuration `q` in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint {
    manifold: Manifold,
    coords: Vec<f64>,
}

impl ManifoldPoint {
    /// Wrap coordinates as given, checking only their count.
    pub fn raw(manifold: Manifold, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != manifold.coord_len() {
            return Err(Error::invalid(format!(
                "{manifold} expects {} coordinates, got {}",
                manifold.coord_len(),
                coords.len()
            )));
        }
        Ok(ManifoldPoint { manifold, coords })
    }

    /// Build a canonical point.
    pub fn new(manifold: Manifold, coords: Vec<f64>) -> Result<Self> {
        canonicalize(&Self::raw(manifold, coords)?)
    }

    /// Internal constructor for coordinates already known to be canonical.
    pub(crate) fn from_canonical(manifold: &Manifold, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), manifold.coord_len());
        ManifoldPoint {
            manifold: manifold.clone(),
            coords,
        }
    }

    pub fn origin(manifold: Manifold) -> Self {
        let mut coords = vec![0.0; manifold.coord_len()];
        for atom in manifold.atoms() {
            if let Atom::Rotation { coord, .. } = atom {
                coords[coord] = 1.0;
            }
        }
        ManifoldPoint { manifold, coords }
    }

    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    /// `self ⊕ u`.
    pub fn retract(&self, u: &[f64]) -> Result<Self> {
        if u.len() != self.dim() {
            return Err(Error::invalid(format!(
                "tangent step has {} components, manifold dimension is {}",
                u.len(),
                self.dim()
            )));
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite tangent step"));
        }
        Ok(self.retract_unchecked(u))
    }

    pub(crate) fn retract_unchecked(&self, u: &[f64]) -> Self {
        ManifoldPoint {
            manifold: self.manifold.clone(),
            coords: self.manifold.retract_coords(&self.coords, u),
        }
    }

    pub(crate) fn displacement_to(&self, other: &ManifoldPoint) -> Vec<f64> {
        self.manifold.displacement_coords(&self.coords, &other.coords)
    }
}

/// Tangent vector `v ∈ T_q Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentValue {
    base: ManifoldPoint,
    components: Vec<f64>,
}

/// Covector `p ∈ T*_q Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentValue {
    base: ManifoldPoint,
    components: Vec<f64>,
}

macro_rules! fiber_value {
    ($ty:ident, $what:literal) => {
        impl $ty {
            pub fn new(base: ManifoldPoint, components: Vec<f64>) -> Result<Self> {
                if components.len() != base.dim() {
                    return Err(Error::invalid(format!(
                        "{} has {} components, base dimension is {}",
                        $what,
                        components.len(),
                        base.dim()
                    )));
                }
                Ok($ty { base, components })
            }

            pub fn zero(base: ManifoldPoint) -> Self {
                let n = base.dim();
                $ty {
                    base,
                    components: vec![0.0; n],
                }
            }

            pub fn base(&self) -> &ManifoldPoint {
                &self.base
            }

            pub fn components(&self) -> &[f64] {
                &self.components
            }

            pub fn scaled(&self, alpha: f64) -> Self {
                $ty {
                    base: self.base.clone(),
                    components: self.components.iter().map(|c| alpha * c).collect(),
                }
            }
        }
    };
}

fiber_value!(TangentValue, "tangent value");
fiber_value!(CotangentValue, "cotangent value");

impl TangentValue {
    pub fn add(&self, other: &TangentValue) -> Result<TangentValue> {
        if self.base != other.base {
            return Err(Error::invalid("tangent values at different base points"));
        }
        Ok(TangentValue {
            base: self.base.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// Reduce a point to canonical coordinates.
pub fn canonicalize(point: &ManifoldPoint) -> Result<ManifoldPoint> {
    if point.coords.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite coordinates"));
    }
    let mut coords = point.coords.clone();
    for atom in point.manifold.atoms() {
        if let Atom::Rotation { coord, .. } = atom {
            let n2: f64 = coords[coord..coord + 4].iter().map(|x| x * x).sum();
            if n2 == 0.0 {
                return Err(Error::invalid("zero quaternion"));
            }
        }
    }
    point.manifold.canonicalize_coords(&mut coords);
    Ok(ManifoldPoint {
        manifold: point.manifold.clone(),
        coords,
    })
}

/// Shortest chart difference from `a` to `b`: componentwise `b - a` on
/// Euclidean factors, wrapped into `(-π, π]` on circles, and the rotation
/// vector of `a⁻¹ b` on rotation factors.
pub fn chart_displacement(a: &ManifoldPoint, b: &ManifoldPoint) -> Result<Vec<f64>> {
    if a.manifold != b.manifold {
        return Err(Error::invalid(format!(
            "points on different manifolds: {} vs {}",
            a.manifold, b.manifold
        )));
    }
    Ok(a.displacement_to(b))
}

/// `a ⊕ ½·chart_displacement(a, b)`, the shortest-arc midpoint.
pub fn chart_midpoint(a: &ManifoldPoint, b: &ManifoldPoint) -> Result<ManifoldPoint> {
    let half: Vec<f64> = chart_displacement(a, b)?.iter().map(|d| 0.5 * d).collect();
    Ok(a.retract_unchecked(&half))
}

/// The natural pairing `p(v) = p · v`.
pub fn pair(p: &CotangentValue, v: &TangentValue) -> Result<f64> {
    if p.base != v.base {
        return Err(Error::invalid("covector and vector at different base points"));
    }
    Ok(dot(&p.components, &v.components))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
