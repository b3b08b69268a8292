//! Path lengths, enlargement factors and the differentiated kernel Δ^{1/2}·w(ℓ).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sphere_bounce, Scene, SphereBounce, SurfaceId, SurfacePoint, Vec3};
use crate::numerics::{second_derivative_one_sided, Derivative, Jet2};
use crate::paths::family::{FamilyKind, PathFamily, SphereFamily};
use crate::paths::pencil::{pencil_delta, wavefront_delta, WavefrontStep};
use crate::thermal::{thermal_weight, thermal_weight_jet};

/// Weight multiplying Δ^{1/2}: 1/ℓ at T = 0, coth(ℓ/β̃)/β̃ at finite T, 1/β̃ in the classical limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Weight {
    ZeroTemperature,
    Thermal { beta_tilde: f64 },
    Classical { beta_tilde: f64 },
}

impl Weight {
    pub fn value(&self, ell: f64) -> f64 {
        match *self {
            Weight::ZeroTemperature => 1.0 / ell,
            Weight::Thermal { beta_tilde } => thermal_weight(ell, beta_tilde),
            Weight::Classical { beta_tilde } => 1.0 / beta_tilde,
        }
    }

    pub fn jet(&self, ell: Jet2) -> Jet2 {
        match *self {
            Weight::ZeroTemperature => ell.recip(),
            Weight::Thermal { beta_tilde } => thermal_weight_jet(ell, beta_tilde),
            Weight::Classical { beta_tilde } => Jet2::constant(1.0 / beta_tilde),
        }
    }
}

/// Length and Δ^{1/2} as jets in z for families with closed forms.
fn closed_form(scene: &Scene, family: &PathFamily, coord: f64, z: Jet2) -> Option<(Jet2, Jet2)> {
    let (ell, half) = match (family.kind, *scene) {
        (FamilyKind::Plate { pair, z_sign }, Scene::ParallelPlates { a }) => {
            let ell = z.scale(2.0 * z_sign as f64) + 2.0 * pair as f64 * a;
            (ell, ell.recip())
        }
        (FamilyKind::WedgeOdd { k, z_sign }, Scene::Pendulum { theta, .. }) => {
            let kt = k as f64 * theta;
            let ell = z.scale(2.0 * z_sign as f64 * kt.cos()) + 2.0 * coord * kt.sin();
            (ell, ell.recip())
        }
        (FamilyKind::WedgeEven { k }, Scene::Pendulum { theta, .. }) => {
            let r = (z * z + coord * coord).sqrt();
            let ell = r.scale(2.0 * (k as f64 * theta).sin());
            (ell, ell.recip())
        }
        (FamilyKind::Sphere(f @ (SphereFamily::OneS | SphereFamily::ThreeS)), Scene::SpherePlate { a, radius }) => {
            let z = if f.mirrored() { -z } else { z };
            let h = -z + (a + radius);
            let big_d = (h * h + coord * coord).sqrt();
            let gap = big_d - radius;
            let ell = gap.scale(2.0);
            let half = (gap * big_d).recip().scale(0.5 * radius);
            (ell, half)
        }
        _ => return None,
    };
    Some((ell, half))
}

fn check_scene(scene: &Scene, family: &PathFamily) -> Result<()> {
    let ok = matches!(
        (family.kind, scene),
        (FamilyKind::Plate { .. }, Scene::ParallelPlates { .. })
            | (FamilyKind::WedgeOdd { .. } | FamilyKind::WedgeEven { .. }, Scene::Pendulum { .. })
            | (FamilyKind::Sphere(_), Scene::SpherePlate { .. })
    );
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(format!("family {} does not belong to scene {scene:?}", family.label)))
    }
}

/// Geometry of a pencil-traced sphere family at one point.
struct Traced {
    length: f64,
    delta: f64,
}

fn traced(scene: &Scene, family: &PathFamily, coord: f64, z: f64, fixed: Option<Vec3>) -> Result<Traced> {
    let FamilyKind::Sphere(f) = family.kind else { unreachable!("only sphere families are traced") };
    let Scene::SpherePlate { radius, .. } = *scene else { unreachable!() };
    let z = if f.mirrored() { -z } else { z };
    let x = Vec3::new(coord, 0.0, z);
    let (kind, bounces): (SphereBounce, &[SurfaceId]) = match f {
        SphereFamily::Two => (SphereBounce::ToImage, &[SurfaceId::Sphere, SurfaceId::LowerPlate]),
        SphereFamily::ThreeP | SphereFamily::FiveP => {
            (SphereBounce::Vertical, &[SurfaceId::Sphere, SurfaceId::LowerPlate, SurfaceId::Sphere])
        }
        _ => unreachable!("closed-form family"),
    };
    let s = match fixed {
        Some(p) => p,
        None => sphere_bounce(scene, coord, z, kind).map_err(|e| match e {
            Error::NoPath { reason, .. } => Error::NoPath { family: family.label.clone(), reason },
            other => other,
        })?.point,
    };
    let d1 = (s - x).norm();
    if fixed.is_some() {
        // bounce held at its z = 0 position; Δ from wavefront curvature with the bisector incidence
        let image = Vec3::new(coord, 0.0, -z);
        let d2 = (image - s).norm();
        let n = (s - scene.sphere_centre().expect("sphere")).normalized();
        let u1 = (x - s).normalized();
        let cos_i = match kind {
            SphereBounce::ToImage => (u1 + (image - s).normalized()).normalized().dot(n),
            _ => (u1 + Vec3::new(0.0, 0.0, -1.0)).normalized().dot(n),
        };
        let mirror = WavefrontStep::SphereMirror { radius, cos_incidence: cos_i };
        return Ok(match kind {
            SphereBounce::ToImage => Traced {
                length: d1 + d2,
                delta: wavefront_delta(&[WavefrontStep::Propagate(d1), mirror, WavefrontStep::Propagate(d2)]),
            },
            _ => Traced {
                length: 2.0 * d1 + 2.0 * s.z,
                delta: wavefront_delta(&[
                    WavefrontStep::Propagate(d1),
                    mirror,
                    WavefrontStep::Propagate(2.0 * s.z),
                    mirror,
                    WavefrontStep::Propagate(d1),
                ]),
            },
        });
    }
    let length = match kind {
        SphereBounce::ToImage => d1 + (Vec3::new(coord, 0.0, -z) - s).norm(),
        _ => 2.0 * d1 + 2.0 * s.z,
    };
    let delta = pencil_delta(scene, x, s - x, bounces, &family.label)?;
    Ok(Traced { length, delta })
}

/// Closed-path length ℓ_r at `point` (offset `point.z` from the plate).
pub fn path_length(scene: &Scene, family: &PathFamily, point: &SurfacePoint) -> Result<f64> {
    check_scene(scene, family)?;
    match closed_form(scene, family, point.coord, Jet2::constant(point.z)) {
        Some((ell, _)) => positive_length(family, ell.v),
        None => positive_length(family, traced(scene, family, point.coord, point.z, None)?.length),
    }
}

/// Δ_r^{1/2} at `point`; exactly 1/ℓ for flat families.
pub fn enlargement_half(scene: &Scene, family: &PathFamily, point: &SurfacePoint) -> Result<f64> {
    check_scene(scene, family)?;
    match closed_form(scene, family, point.coord, Jet2::constant(point.z)) {
        Some((_, half)) => Ok(half.v),
        None => Ok(traced(scene, family, point.coord, point.z, None)?.delta.sqrt()),
    }
}

/// Δ_r^{1/2} from wavefront-curvature propagation, an independent route to [`enlargement_half`].
pub fn enlargement_half_wavefront(scene: &Scene, family: &PathFamily, point: &SurfacePoint) -> Result<f64> {
    check_scene(scene, family)?;
    let FamilyKind::Sphere(f) = family.kind else {
        return enlargement_half(scene, family, point);
    };
    let Scene::SpherePlate { radius, .. } = *scene else { unreachable!() };
    let z = if f.mirrored() { -point.z } else { point.z };
    let x = Vec3::new(point.coord, 0.0, z);
    let kind = match f {
        SphereFamily::OneS | SphereFamily::ThreeS => SphereBounce::Retro,
        SphereFamily::Two => SphereBounce::ToImage,
        SphereFamily::ThreeP | SphereFamily::FiveP => SphereBounce::Vertical,
    };
    let b = sphere_bounce(scene, point.coord, z, kind)?;
    let d1 = (b.point - x).norm();
    let mirror = WavefrontStep::SphereMirror { radius, cos_incidence: b.cos_incidence };
    let steps = match kind {
        SphereBounce::Retro => vec![WavefrontStep::Propagate(d1), mirror, WavefrontStep::Propagate(d1)],
        SphereBounce::ToImage => {
            let d2 = (Vec3::new(point.coord, 0.0, -z) - b.point).norm();
            vec![WavefrontStep::Propagate(d1), mirror, WavefrontStep::Propagate(d2)]
        }
        SphereBounce::Vertical => vec![
            WavefrontStep::Propagate(d1),
            mirror,
            WavefrontStep::Propagate(2.0 * b.point.z),
            mirror,
            WavefrontStep::Propagate(d1),
        ],
    };
    Ok(wavefront_delta(&steps).sqrt())
}

fn positive_length(family: &PathFamily, ell: f64) -> Result<f64> {
    if ell > 0.0 && ell.is_finite() {
        Ok(ell)
    } else {
        Err(Error::NoPath { family: family.label.clone(), reason: format!("non-positive path length {ell:e}") })
    }
}

/// The function z ↦ Δ_r^{1/2}(z)·w(ℓ_r(z)) at a fixed surface point.
#[derive(Debug, Clone, PartialEq)]
pub struct PathKernel {
    pub scene: Scene,
    pub family: PathFamily,
    pub point: SurfacePoint,
    pub weight: Weight,
    /// Hold the sphere bounce point at its z = 0 position (family 2 only).
    pub fixed_bounce: bool,
    fixed_point: Option<Vec3>,
    length0: f64,
}

impl PathKernel {
    pub fn new(scene: &Scene, family: &PathFamily, coord: f64, weight: Weight) -> Result<Self> {
        check_scene(scene, family)?;
        let point = SurfacePoint::on_plate(coord);
        let length0 = path_length(scene, family, &point)?;
        Ok(PathKernel {
            scene: *scene,
            family: family.clone(),
            point,
            weight,
            fixed_bounce: false,
            fixed_point: None,
            length0,
        })
    }

    /// Switches on the fixed-bounce-point evaluation, available for family 2.
    pub fn with_fixed_bounce(mut self) -> Result<Self> {
        if self.family.kind != FamilyKind::Sphere(SphereFamily::Two) {
            return Err(Error::invalid("fixed bounce point is only offered for family 2"));
        }
        let b = sphere_bounce(&self.scene, self.point.coord, 0.0, SphereBounce::ToImage)?;
        self.fixed_bounce = true;
        self.fixed_point = Some(b.point);
        Ok(self)
    }

    /// ℓ_r at z = 0.
    pub fn surface_length(&self) -> f64 {
        self.length0
    }

    pub fn has_closed_form(&self) -> bool {
        closed_form(&self.scene, &self.family, self.point.coord, Jet2::constant(0.0)).is_some()
    }

    /// Upper end of the z window on which the kernel is smooth and positive.
    pub fn window(&self) -> f64 {
        0.25 * self.length0
    }

    /// Default initial differentiation step, ℓ_r(0)/40.
    pub fn default_step(&self) -> f64 {
        self.length0 / 40.0
    }

    pub fn length(&self, z: f64) -> Result<f64> {
        path_length(&self.scene, &self.family, &self.point.offset(z))
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        if let Some((ell, half)) = closed_form(&self.scene, &self.family, self.point.coord, Jet2::constant(z)) {
            let ell = positive_length(&self.family, ell.v)?;
            return Ok(half.v * self.weight.value(ell));
        }
        let t = traced(&self.scene, &self.family, self.point.coord, z, self.fixed_point)?;
        let ell = positive_length(&self.family, t.length)?;
        Ok(t.delta.sqrt() * self.weight.value(ell))
    }

    /// Exact ∂²_z at z = 0 for closed-form families.
    pub fn exact_curvature(&self) -> Option<f64> {
        let (ell, half) = closed_form(&self.scene, &self.family, self.point.coord, Jet2::variable(0.0))?;
        Some((half * self.weight.jet(ell)).d2)
    }

    /// ∂²_z g at z = 0: exact for closed forms, one-sided stencil otherwise.
    pub fn curvature(&self) -> Result<Derivative> {
        match self.exact_curvature() {
            Some(v) => Ok(Derivative { value: v, error: 4.0 * f64::EPSILON * v.abs() }),
            None => second_normal_derivative(self, self.default_step()),
        }
    }
}

/// One-sided ∂²_z of the kernel at z = 0, starting from step `h` and refining.
pub fn second_normal_derivative(kernel: &PathKernel, h: f64) -> Result<Derivative> {
    if 4.0 * h > kernel.window() {
        return Err(Error::invalid(format!("step {h:e} leaves the kernel window [0, {:e}]", kernel.window())));
    }
    second_derivative_one_sided(|z| kernel.eval(z), h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::family::{path_families, plate_even_families};

    #[test]
    fn plate_lengths() {
        let s = Scene::parallel_plates(1.0).unwrap();
        let f = PathFamily::from_label(&s, "1u").unwrap();
        let p = SurfacePoint::on_plate(0.0);
        assert_eq!(path_length(&s, &f, &p).unwrap(), 2.0);
        let f3 = PathFamily::from_label(&s, "3u").unwrap();
        assert_eq!(enlargement_half(&s, &f3, &p).unwrap(), 0.5);
    }

    #[test]
    fn pendulum_even_length() {
        let theta = std::f64::consts::FRAC_PI_6;
        let s = Scene::pendulum(1.0, 0.5, theta).unwrap();
        let f = PathFamily::from_label(&s, "2u").unwrap();
        let l = path_length(&s, &f, &SurfacePoint::on_plate(2.0)).unwrap();
        assert!((l - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_tip_length() {
        let s = Scene::sphere_plate(1.0, 1.0).unwrap();
        let f = PathFamily::sphere(SphereFamily::OneS);
        assert_eq!(path_length(&s, &f, &SurfacePoint::on_plate(0.0)).unwrap(), 2.0);
    }

    #[test]
    fn flat_identity_and_null_even() {
        let s = Scene::parallel_plates(0.7).unwrap();
        for f in path_families(&s, 9).iter().chain(plate_even_families(8).iter()) {
            for z in [0.0, 0.01, 0.05] {
                let p = SurfacePoint::on_plate(0.0).offset(z);
                let l = path_length(&s, f, &p).unwrap();
                let h = enlargement_half(&s, f, &p).unwrap();
                assert!((l * h - 1.0).abs() < 1e-14);
            }
        }
        for f in plate_even_families(8) {
            let k = PathKernel::new(&s, &f, 0.0, Weight::ZeroTemperature).unwrap();
            assert_eq!(k.exact_curvature().unwrap(), 0.0);
        }
    }

    #[test]
    fn wrong_scene_is_rejected() {
        let s = Scene::parallel_plates(1.0).unwrap();
        let f = PathFamily::sphere(SphereFamily::Two);
        assert!(path_length(&s, &f, &SurfacePoint::on_plate(0.0)).is_err());
    }
}
