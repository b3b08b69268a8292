//! Enlargement factors: 3-D pencil tracing and wavefront-curvature propagation.

use crate::error::{Error, Result};
use crate::geometry::{specular_reflect, surface_normal, Scene, SurfaceId, Vec3};

/// Angular half-width of the traced pencil.
pub const PENCIL_DELTA: f64 = 5e-4;

fn hit_distance(scene: &Scene, surface: SurfaceId, origin: Vec3, dir: Vec3) -> Option<f64> {
    match surface {
        SurfaceId::LowerPlate => (dir.z < 0.0).then(|| -origin.z / dir.z),
        SurfaceId::Sphere => {
            let (c, r) = match *scene {
                Scene::SpherePlate { radius, .. } => (scene.sphere_centre()?, radius),
                _ => return None,
            };
            let oc = origin - c;
            let b = oc.dot(dir);
            let dist = oc.norm();
            let cc = (dist - r) * (dist + r);
            let disc = b * b - cc;
            if disc < 0.0 {
                return None;
            }
            // nearer root, written to avoid cancellation
            let q = -(b + disc.sqrt().copysign(b));
            let t = if b > 0.0 { cc / q } else { q.min(cc / q) };
            (t > 0.0).then_some(t)
        }
        SurfaceId::UpperPlate => None,
    }
}

/// Follows a ray through `bounces` and returns the last bounce point and outgoing direction.
pub fn trace(scene: &Scene, origin: Vec3, dir: Vec3, bounces: &[SurfaceId]) -> Result<(Vec3, Vec3)> {
    let (mut o, mut d) = (origin, dir);
    for &s in bounces {
        let t = hit_distance(scene, s, o, d).ok_or_else(|| Error::NoPath {
            family: format!("{bounces:?}"),
            reason: format!("traced ray misses the {s:?} surface"),
        })?;
        let p = o + d * t;
        let p = if s == SurfaceId::LowerPlate { Vec3::new(p.x, p.y, 0.0) } else { p };
        let n = match s {
            SurfaceId::Sphere => {
                let c = scene.sphere_centre().expect("sphere scene");
                (p - c).normalized()
            }
            _ => surface_normal(scene, s, p)?,
        };
        d = specular_reflect(d.normalized(), n)?;
        o = p;
    }
    Ok((o, d))
}

/// Δ = dΩ/dA for the closed path that leaves `start` along `dir` and returns to `start`.
///
/// Rays perturbed by ±δ, ±2δ about two axes orthogonal to `dir` are traced and
/// intersected with the plane through `start` normal to the returning central ray;
/// the Jacobian uses the fourth-order central difference.
pub fn pencil_delta(scene: &Scene, start: Vec3, dir: Vec3, bounces: &[SurfaceId], label: &str) -> Result<f64> {
    let dir = dir.normalized();
    let (_, d_final) = trace(scene, start, dir, bounces)?;
    let mut e1 = dir.cross(Vec3::new(0.0, 1.0, 0.0));
    if e1.norm() < 1e-8 {
        e1 = dir.cross(Vec3::new(1.0, 0.0, 0.0));
    }
    let e1 = e1.normalized();
    let e2 = dir.cross(e1);
    let end = |axis: Vec3, s: f64| -> Result<Vec3> {
        let (c, sn) = ((s * PENCIL_DELTA).cos(), (s * PENCIL_DELTA).sin());
        let (o, d) = trace(scene, start, dir * c + axis * sn, bounces)?;
        let t = (start - o).dot(d_final) / d.dot(d_final);
        Ok(o + d * t)
    };
    let jac = |axis: Vec3| -> Result<Vec3> {
        let near = end(axis, 1.0)? - end(axis, -1.0)?;
        let far = end(axis, 2.0)? - end(axis, -2.0)?;
        Ok((near * 8.0 - far) * (1.0 / (12.0 * PENCIL_DELTA)))
    };
    let (j1, j2) = (jac(e1)?, jac(e2)?);
    let area = j1.cross(j2).norm();
    let scale = j1.norm().max(j2.norm());
    if !(area > 1e-12 * scale * scale) {
        return Err(Error::Caustic { family: label.to_string(), z: start.z });
    }
    Ok(1.0 / area)
}

/// Step of a wavefront-curvature propagation along a meridional path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WavefrontStep {
    Propagate(f64),
    /// Convex spherical mirror of the given radius at the given incidence cosine.
    SphereMirror { radius: f64, cos_incidence: f64 },
}

/// Δ for a point source followed by `steps`, from tangential and sagittal
/// beam widths per unit solid angle (Coddington's equations).
pub fn wavefront_delta(steps: &[WavefrontStep]) -> f64 {
    // (width, curvature radius) for tangential and sagittal sections
    let mut t = (0.0f64, 0.0f64);
    let mut s = (0.0f64, 0.0f64);
    for step in steps {
        match *step {
            WavefrontStep::Propagate(d) => {
                for sec in [&mut t, &mut s] {
                    if sec.1 == 0.0 {
                        *sec = (d, d);
                    } else {
                        *sec = (sec.0 * (sec.1 + d) / sec.1, sec.1 + d);
                    }
                }
            }
            WavefrontStep::SphereMirror { radius, cos_incidence } => {
                t.1 = 1.0 / (1.0 / t.1 + 2.0 / (radius * cos_incidence));
                s.1 = 1.0 / (1.0 / s.1 + 2.0 * cos_incidence / radius);
            }
        }
    }
    1.0 / (t.0 * s.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_propagation_is_inverse_square() {
        let d = wavefront_delta(&[WavefrontStep::Propagate(1.5), WavefrontStep::Propagate(0.5)]);
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn retro_reflection_closed_form() {
        let (a, r, rho, z) = (0.4, 1.3, 0.7, 0.02);
        let scene = Scene::sphere_plate(a, r).unwrap();
        let x = Vec3::new(rho, 0.0, z);
        let c = scene.sphere_centre().unwrap();
        let big_d = (c - x).norm();
        let closed = (r / (2.0 * (big_d - r) * big_d)).powi(2);
        let pencil = pencil_delta(&scene, x, c - x, &[SurfaceId::Sphere], "1s").unwrap();
        assert!((pencil / closed - 1.0).abs() < 1e-7, "{pencil} {closed}");
        let d = big_d - r;
        let wave = wavefront_delta(&[
            WavefrontStep::Propagate(d),
            WavefrontStep::SphereMirror { radius: r, cos_incidence: 1.0 },
            WavefrontStep::Propagate(d),
        ]);
        assert!((wave / closed - 1.0).abs() < 1e-13);
    }

    #[test]
    fn plate_bounce_preserves_flat_delta() {
        let scene = Scene::sphere_plate(1.0, 1.0).unwrap();
        let x = Vec3::new(0.3, 0.0, 0.5);
        let dir = Vec3::new(0.0, 0.0, -1.0);
        // straight down, back up: closed path length 1
        let d = pencil_delta(&scene, x, dir, &[SurfaceId::LowerPlate], "flat").unwrap();
        assert!((d - 1.0).abs() < 1e-7);
    }
}
