use std::f64::consts::FRAC_PI_2;

use casimir_optics::geometry::{
    specular_reflect, sphere_bounce, sphere_reflection_point, Scene, SphereBounce, SurfacePoint, Vec3,
};
use casimir_optics::paths::{
    enlargement_half, path_families, path_length, pencil_delta, plate_even_families, second_normal_derivative,
    PathFamily, PathKernel, SphereFamily, Weight,
};
use proptest::prelude::*;

/// Specularity residual for a bounce that leaves straight down, written out from scratch.
fn vertical_residual(a: f64, r: f64, rho: f64, phi: f64) -> f64 {
    let (sx, sz) = (r * phi.sin(), a + r - r * phi.cos());
    let (nx, nz) = (phi.sin(), -phi.cos());
    let (dx, dz) = (rho - sx, -sz);
    let d = dx.hypot(dz);
    let (ux, uz) = (dx / d, dz / d - 1.0);
    nx * uz - nz * ux
}

/// Golden-section minimum of f on [lo, hi].
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    0.5 * (lo + hi)
}

/// ∂²_z of R/(4(D − R)²D) with D = √((a + R − z)² + ρ²), differentiated by hand.
fn one_s_curvature(a: f64, r: f64, rho: f64) -> f64 {
    let u = a + r;
    let d = u.hypot(rho);
    let (dz, dzz) = (-u / d, rho * rho / d.powi(3));
    let e = d - r;
    let h1 = -2.0 / (e.powi(3) * d) - 1.0 / (e * e * d * d);
    let h2 = 6.0 / (e.powi(4) * d) + 4.0 / (e.powi(3) * d * d) + 2.0 / (e * e * d.powi(3));
    0.25 * r * (h2 * dz * dz + h1 * dzz)
}

#[test]
fn three_p_bounce_minimizes_path_length() {
    let (a, r, rho) = (1.0, 1.0, 0.5);
    let scene = Scene::sphere_plate(a, r).unwrap();
    let b = sphere_reflection_point(&scene, &SurfacePoint::on_plate(rho), SphereFamily::ThreeP).unwrap();
    // ℓ = 2|x − S| + 2 S_z for the plate–sphere–plate–sphere–plate loop
    let length = |phi: f64| {
        let (sx, sz) = (r * phi.sin(), a + r - r * phi.cos());
        2.0 * (rho - sx).hypot(sz) + 2.0 * sz
    };
    let phi = golden_min(length, 1e-9, FRAC_PI_2 - 1e-9);
    assert!((b.polar_angle - phi).abs() < 1e-7, "{} {phi}", b.polar_angle);
    assert!((b.polar_angle - 0.161_537_424_457_976_5).abs() < 1e-12, "{}", b.polar_angle);
    assert!(vertical_residual(a, r, rho, b.polar_angle).abs() < 1e-12);
}

#[test]
fn three_p_bounce_is_unique() {
    let (a, r) = (0.3, 1.0);
    let scene = Scene::sphere_plate(a, r).unwrap();
    let mut rng = 0x2545_f491_4f6c_dd1du64;
    for _ in 0..100 {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        let rho = 5.0 * r * ((rng >> 11) as f64 / (1u64 << 53) as f64).max(1e-6);
        let grid: Vec<f64> = (0..=4000).map(|i| 1e-9 + (FRAC_PI_2 - 2e-9) * i as f64 / 4000.0).collect();
        let vals: Vec<f64> = grid.iter().map(|&p| vertical_residual(a, r, rho, p)).collect();
        let changes = vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
        assert_eq!(changes, 1, "rho = {rho}");
        let b = sphere_bounce(&scene, rho, 0.0, SphereBounce::Vertical).unwrap();
        assert!(b.residual.abs() < 1e-12 * r);
        assert!(vertical_residual(a, r, rho, b.polar_angle).abs() < 1e-10);
    }
}

#[test]
fn three_p_bounce_continuous_on_axis() {
    let scene = Scene::sphere_plate(0.5, 1.0).unwrap();
    let mut prev = f64::INFINITY;
    for rho in [1e-2, 1e-4, 1e-6, 1e-8] {
        let b = sphere_bounce(&scene, rho, 0.0, SphereBounce::Vertical).unwrap();
        assert!(b.polar_angle < prev);
        prev = b.polar_angle;
    }
    assert!(prev < 1e-7);
    let axis = sphere_bounce(&scene, 0.0, 0.0, SphereBounce::Vertical).unwrap();
    assert_eq!(axis.polar_angle, 0.0);
}

#[test]
fn one_s_curvature_matches_hand_derivative() {
    let scene = Scene::sphere_plate(1.0, 1.0).unwrap();
    let f = PathFamily::sphere(SphereFamily::OneS);
    for rho in [0.0, 0.3, 1.0, 2.5] {
        let k = PathKernel::new(&scene, &f, rho, Weight::ZeroTemperature).unwrap();
        let exact = one_s_curvature(1.0, 1.0, rho);
        let jet = k.exact_curvature().unwrap();
        assert!((jet / exact - 1.0).abs() < 1e-12, "rho={rho}: {jet} {exact}");
        let stencil = second_normal_derivative(&k, k.default_step()).unwrap();
        assert!((stencil.value / exact - 1.0).abs() < 1e-6, "rho={rho}: {stencil:?} {exact}");
    }
}

#[test]
fn family_two_flat_limit() {
    let scene = Scene::sphere_plate(1.0, 1e6).unwrap();
    let f = PathFamily::sphere(SphereFamily::Two);
    let p = SurfacePoint::on_plate(0.5);
    let ratio = enlargement_half(&scene, &f, &p).unwrap() * path_length(&scene, &f, &p).unwrap();
    assert!((ratio - 1.0).abs() < 1e-5, "{ratio}");
}

#[test]
fn family_two_changes_sign_once() {
    let scene = Scene::sphere_plate(0.1, 1.0).unwrap();
    let f = PathFamily::sphere(SphereFamily::Two);
    let vals: Vec<f64> = (0..=90)
        .map(|i| {
            let rho = 0.1 + 0.01 * i as f64;
            PathKernel::new(&scene, &f, rho, Weight::ZeroTemperature).unwrap().curvature().unwrap().value
        })
        .collect();
    let flips: Vec<usize> = (1..vals.len()).filter(|&i| vals[i - 1].signum() != vals[i].signum()).collect();
    assert_eq!(flips.len(), 1);
    let at = 0.1 + 0.01 * flips[0] as f64;
    assert!((0.2..=0.7).contains(&at), "{at}");
}

#[test]
fn shadowed_family_is_no_path() {
    // far from the axis the bounce sits at the sphere's equator and leaves no room to move off the plate
    let scene = Scene::sphere_plate(0.1, 1.0).unwrap();
    let f = PathFamily::sphere(SphereFamily::ThreeP);
    let e = PathKernel::new(&scene, &f, 50.0, Weight::ZeroTemperature).and_then(|k| k.curvature()).unwrap_err();
    assert!(e.is_no_path(), "{e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_is_an_involution(
        dx in -1.0..1.0f64, dy in -1.0..1.0f64, dz in -1.0..-0.05f64,
        nx in -0.5..0.5f64, ny in -0.5..0.5f64,
    ) {
        let n = Vec3::new(nx, ny, 1.0).normalized();
        let d = Vec3::new(dx, dy, dz).normalized();
        prop_assume!(d.dot(n) < -1e-3);
        let r = specular_reflect(d, n).unwrap();
        prop_assert!((r.dot(n) + d.dot(n)).abs() < 1e-14);
        let back = specular_reflect(r, n * -1.0).unwrap();
        prop_assert!((back - d).norm() < 1e-14);
    }

    #[test]
    fn flat_families_have_unit_product(a in 0.1..5.0f64, zf in 0.0..0.2f64, order in 1u32..30) {
        let scene = Scene::parallel_plates(a).unwrap();
        for f in path_families(&scene, order).iter().chain(plate_even_families(order).iter()) {
            let p = SurfacePoint::on_plate(0.0).offset(zf * a);
            let prod = enlargement_half(&scene, f, &p).unwrap() * path_length(&scene, f, &p).unwrap();
            prop_assert!((prod - 1.0).abs() < 1e-14, "{} {prod}", f.label);
        }
    }

    #[test]
    fn paired_plate_families_agree(a in 0.1..5.0f64, n in 0usize..12) {
        let scene = Scene::parallel_plates(a).unwrap();
        let fams = path_families(&scene, 2 * n as u32 + 4);
        let (p, q) = (&fams[2 * n], &fams[2 * n + 1]);
        let d = |f: &PathFamily| PathKernel::new(&scene, f, 0.0, Weight::ZeroTemperature).unwrap().curvature().unwrap().value;
        let (x, y) = (d(p), d(q));
        prop_assert!((x / y - 1.0).abs() < 1e-10, "{} {} {x} {y}", p.label, q.label);
    }

    #[test]
    fn pencil_matches_one_s_closed_form(a in 0.05..2.0f64, r in 0.2..3.0f64, t in 0.0..3.0f64) {
        let scene = Scene::sphere_plate(a, r).unwrap();
        let f = PathFamily::sphere(SphereFamily::OneS);
        let x = SurfacePoint::on_plate(t * r);
        let closed = enlargement_half(&scene, &f, &x).unwrap().powi(2);
        let pos = x.position();
        let c = scene.sphere_centre().unwrap();
        let pencil = pencil_delta(&scene, pos, c - pos, &[casimir_optics::geometry::SurfaceId::Sphere], "1s").unwrap();
        prop_assert!((pencil / closed - 1.0).abs() < 1e-6, "{pencil} {closed}");
    }

    #[test]
    fn specular_points_satisfy_reflection_law(a in 0.05..2.0f64, t in 0.0..5.0f64, kind in 0usize..3) {
        let scene = Scene::sphere_plate(a, 1.0).unwrap();
        let family = [SphereFamily::OneS, SphereFamily::Two, SphereFamily::ThreeP][kind];
        let start = SurfacePoint::on_plate(t);
        if let Ok(b) = sphere_reflection_point(&scene, &start, family) {
            prop_assert!(b.residual.abs() < 1e-12);
            // incidence and reflection angles about the sphere normal
            let c = scene.sphere_centre().unwrap();
            let n = (b.point - c).normalized();
            let u_in = (start.position() - b.point).normalized();
            let u_out = match family {
                SphereFamily::OneS => u_in,
                SphereFamily::Two => (Vec3::new(t, 0.0, 0.0) - b.point).normalized(),
                _ => Vec3::new(0.0, 0.0, -1.0),
            };
            prop_assert!((u_in.dot(n) - u_out.dot(n)).abs() < 1e-10);
            prop_assert!(n.dot(u_in.cross(u_out)).abs() < 1e-10);
        }
    }
}

#[test]
fn sphere_family_listing() {
    let scene = Scene::sphere_plate(0.1, 1.0).unwrap();
    let labels: Vec<String> = path_families(&scene, 5).into_iter().map(|f| f.label).collect();
    assert_eq!(labels, ["1s", "3s", "2", "3p", "5p"]);
}
