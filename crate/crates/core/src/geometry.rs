//! Scenes, surfaces, specular reflection and sphere bounce points.
//!
//! Coordinates: the lower plate is the plane z = 0 with the vacuum above it.
//! The sphere centre sits on the +z axis at height a + R. For the pendulum the
//! wedge apex is the origin, y is the translation-invariant direction and the
//! upper plate is the half-plane through the y axis tilted by θ.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::brent_root;
use crate::paths::SphereFamily;

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self * (1.0 / self.norm())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self * -1.0
    }
}

/// Geometry of the bodies bounding the vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scene {
    ParallelPlates { a: f64 },
    /// `a` is the height of the upper plate's midpoint, `w` its width.
    Pendulum { a: f64, w: f64, theta: f64 },
    SpherePlate { a: f64, radius: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Scene {
    pub fn parallel_plates(a: f64) -> Result<Self> {
        let s = Scene::ParallelPlates { a };
        s.validate()?;
        Ok(s)
    }

    pub fn pendulum(a: f64, w: f64, theta: f64) -> Result<Self> {
        let s = Scene::Pendulum { a, w, theta };
        s.validate()?;
        Ok(s)
    }

    pub fn sphere_plate(a: f64, radius: f64) -> Result<Self> {
        let s = Scene::SpherePlate { a, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Scene::ParallelPlates { a } => positive("a", a),
            Scene::Pendulum { a, w, theta } => {
                positive("a", a)?;
                positive("w", w)?;
                if !(theta > 0.0 && theta < FRAC_PI_2) {
                    return Err(Error::invalid(format!("tilt must lie in (0, π/2), got {theta}")));
                }
                if a / theta.sin() - 0.5 * w <= 0.0 {
                    return Err(Error::invalid("upper plate touches the lower plate (a/sinθ − w/2 ≤ 0)"));
                }
                Ok(())
            }
            Scene::SpherePlate { a, radius } => {
                positive("a", a)?;
                positive("R", radius)
            }
        }
    }

    /// Gap between the bodies: plate separation, pendulum midpoint height or sphere tip gap.
    pub fn gap(&self) -> f64 {
        match *self {
            Scene::ParallelPlates { a } | Scene::Pendulum { a, .. } | Scene::SpherePlate { a, .. } => a,
        }
    }

    pub fn sphere_centre(&self) -> Option<Vec3> {
        match *self {
            Scene::SpherePlate { a, radius } => Some(Vec3::new(0.0, 0.0, a + radius)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceId {
    LowerPlate,
    UpperPlate,
    Sphere,
}

/// Evaluation point: `coord` is ρ (sphere–plate) or x (plates, pendulum) on the
/// lower plate, `z ≥ 0` the offset into the vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub surface: SurfaceId,
    pub coord: f64,
    pub z: f64,
}

impl SurfacePoint {
    pub fn on_plate(coord: f64) -> Self {
        SurfacePoint { surface: SurfaceId::LowerPlate, coord, z: 0.0 }
    }

    pub fn offset(self, z: f64) -> Self {
        SurfacePoint { z, ..self }
    }

    pub fn position(&self) -> Vec3 {
        Vec3::new(self.coord, 0.0, self.z)
    }
}

fn check_unit(name: &str, v: Vec3) -> Result<()> {
    if (v.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::invalid(format!("{name} is not a unit vector (|v| = {})", v.norm())));
    }
    Ok(())
}

/// Mirror image of an incoming direction: `d − 2(d·n)n`.
pub fn specular_reflect(direction: Vec3, normal: Vec3) -> Result<Vec3> {
    check_unit("direction", direction)?;
    check_unit("normal", normal)?;
    let dn = direction.dot(normal);
    if dn > UNIT_TOL {
        return Err(Error::invalid("direction is outgoing (d·n > 0)"));
    }
    Ok(direction - normal * (2.0 * dn))
}

/// Outward normal (into the vacuum) of `surface` at `point`.
pub fn surface_normal(scene: &Scene, surface: SurfaceId, point: Vec3) -> Result<Vec3> {
    let tol = 1e-9 * scene.gap().max(point.norm());
    let off = |d: f64| Error::invalid(format!("point is {d:e} away from the {surface:?} surface"));
    match (surface, *scene) {
        (SurfaceId::LowerPlate, _) => {
            if point.z.abs() > tol {
                return Err(off(point.z));
            }
            Ok(Vec3::new(0.0, 0.0, 1.0))
        }
        (SurfaceId::UpperPlate, Scene::ParallelPlates { a }) => {
            if (point.z - a).abs() > tol {
                return Err(off(point.z - a));
            }
            Ok(Vec3::new(0.0, 0.0, -1.0))
        }
        (SurfaceId::UpperPlate, Scene::Pendulum { a, w, theta }) => {
            let n = Vec3::new(theta.sin(), 0.0, -theta.cos());
            let along = Vec3::new(theta.cos(), 0.0, theta.sin());
            let d = point.dot(n);
            let s = point.dot(along) - a / theta.sin();
            if d.abs() > tol {
                return Err(off(d));
            }
            if s.abs() > 0.5 * w + tol {
                return Err(Error::invalid("point lies beyond the edge of the upper plate"));
            }
            Ok(n)
        }
        (SurfaceId::Sphere, Scene::SpherePlate { radius, .. }) => {
            let c = scene.sphere_centre().expect("sphere scene");
            let r = point - c;
            if (r.norm() - radius).abs() > tol {
                return Err(off(r.norm() - radius));
            }
            Ok(r * (1.0 / r.norm()))
        }
        (s, sc) => Err(Error::invalid(format!("scene {sc:?} has no surface {s:?}"))),
    }
}

/// Which specularity problem a single sphere bounce solves, in the meridian plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereBounce {
    /// Normal incidence: the ray returns to its start.
    Retro,
    /// The ray leaves towards the mirror image of its start in the plate.
    ToImage,
    /// The ray leaves straight down onto the plate.
    Vertical,
}

/// A specular bounce on the sphere, described in the meridian plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereReflection {
    pub point: Vec3,
    /// Polar angle of the bounce point measured from the south pole.
    pub polar_angle: f64,
    /// Cosine of the incidence angle.
    pub cos_incidence: f64,
    /// `n × (u_in + u_out)`, zero for an exact specular bounce.
    pub residual: f64,
}

fn meridian_point(a: f64, radius: f64, phi: f64) -> (f64, f64) {
    (radius * phi.sin(), a + radius - radius * phi.cos())
}

fn unit2(v: (f64, f64)) -> (f64, f64) {
    let n = v.0.hypot(v.1);
    (v.0 / n, v.1 / n)
}

/// Specularity residual at polar angle `phi` for a ray from `(rho, z)`.
fn specular_residual(a: f64, radius: f64, rho: f64, z: f64, kind: SphereBounce, phi: f64) -> f64 {
    let s = meridian_point(a, radius, phi);
    let n = (phi.sin(), -phi.cos());
    let u1 = unit2((rho - s.0, z - s.1));
    let u2 = match kind {
        SphereBounce::Retro => u1,
        SphereBounce::ToImage => unit2((rho - s.0, -z - s.1)),
        SphereBounce::Vertical => (0.0, -1.0),
    };
    let sum = (u1.0 + u2.0, u1.1 + u2.1);
    n.0 * sum.1 - n.1 * sum.0
}

/// Bounce point on the sphere for a ray starting at `(rho, 0, z)`.
///
/// `z` may be negative: mirrored families are evaluated at the image of the
/// start point in the plate.
pub fn sphere_bounce(scene: &Scene, rho: f64, z: f64, kind: SphereBounce) -> Result<SphereReflection> {
    let Scene::SpherePlate { a, radius } = *scene else {
        return Err(Error::invalid("sphere bounce needs a sphere–plate scene"));
    };
    if rho < 0.0 {
        return Err(Error::invalid("radial coordinate must be non-negative"));
    }
    let phi = if rho == 0.0 {
        0.0
    } else if kind == SphereBounce::Retro {
        rho.atan2(a + radius - z)
    } else {
        let lo = 1e-9f64.min(1e-3 * rho / (a + radius));
        let hi = FRAC_PI_2 - 1e-9;
        let f = |phi: f64| specular_residual(a, radius, rho, z, kind, phi);
        brent_root(f, lo, hi, 1e-15, 200).map_err(|e| Error::NoPath {
            family: format!("{kind:?}"),
            reason: format!("no specular point on the sphere ({e})"),
        })?
    };
    let (sx, sz) = meridian_point(a, radius, phi);
    let u1 = unit2((rho - sx, z - sz));
    let cos_incidence = u1.0 * phi.sin() - u1.1 * phi.cos();
    if cos_incidence <= 0.0 {
        return Err(Error::NoPath { family: format!("{kind:?}"), reason: "bounce point is shadowed".into() });
    }
    Ok(SphereReflection {
        point: Vec3::new(sx, 0.0, sz),
        polar_angle: phi,
        cos_incidence,
        residual: specular_residual(a, radius, rho, z, kind, phi),
    })
}

/// Bounce point on the sphere for `family` starting at `start`.
///
/// 1s/3s are retro-reflections, 2 heads for the image of the start point,
/// 3p/5p bounce straight down onto the plate. 3s and 5p use the mirrored start.
pub fn sphere_reflection_point(scene: &Scene, start: &SurfacePoint, family: SphereFamily) -> Result<SphereReflection> {
    let kind = match family {
        SphereFamily::OneS | SphereFamily::ThreeS => SphereBounce::Retro,
        SphereFamily::Two => SphereBounce::ToImage,
        SphereFamily::ThreeP | SphereFamily::FiveP => SphereBounce::Vertical,
    };
    let z = if family.mirrored() { -start.z } else { start.z };
    sphere_bounce(scene, start.coord, z, kind).map_err(|e| match e {
        Error::NoPath { reason, .. } => Error::NoPath { family: family.label().to_string(), reason },
        other => other,
    })
}
