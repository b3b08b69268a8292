//! Force on the plate below a sphere and the f-factor.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{weighted_pressure_term, Contribution, ForceReport};
use crate::error::{Error, Result};
use crate::geometry::Scene;
use crate::numerics::special::zeta;
use crate::numerics::{try_integrate_with_breaks, NeumaierSum, QuadOptions};
use crate::paths::{path_families, FamilyKind, PathFamily, SphereFamily, Weight};

/// Controls for the radial force quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereForceOptions {
    /// Upper end of the radial quadrature; 1000·max(a, √(aR)) when unset.
    pub rho_max: Option<f64>,
    /// Tolerance relative to the larger of the family force and the proximity-force scale π³R/720a³.
    pub rel_tol: f64,
    /// Hold the family-2 bounce point fixed while differentiating.
    pub fixed_bounce: bool,
}

impl Default for SphereForceOptions {
    fn default() -> Self {
        SphereForceOptions { rho_max: None, rel_tol: 1e-7, fixed_bounce: false }
    }
}

/// |F| in the proximity-force approximation, π³R/720a³.
fn pfa_scale(a: f64, radius: f64) -> f64 {
    PI.powi(3) * radius / (720.0 * a.powi(3))
}

fn sphere_params(scene: &Scene) -> Result<(f64, f64)> {
    match *scene {
        Scene::SpherePlate { a, radius } => Ok((a, radius)),
        _ => Err(Error::invalid("expected a sphere–plate scene")),
    }
}

/// Pressure of one family at radius ρ; a missing path contributes zero.
fn family_pressure(scene: &Scene, family: &PathFamily, rho: f64, weight: Weight, fixed: bool) -> Result<Option<f64>> {
    let result = if fixed && family.kind == FamilyKind::Sphere(SphereFamily::Two) {
        crate::paths::PathKernel::new(scene, family, rho, weight)
            .and_then(|k| k.with_fixed_bounce())
            .and_then(|k| k.curvature())
            .map(|d| super::family_prefactor(family) * d.value)
    } else {
        weighted_pressure_term(scene, family, rho, weight).map(|d| d.value)
    };
    match result {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_no_path() => Ok(None),
        Err(e) => Err(e),
    }
}

struct FamilyForce {
    value: f64,
    error: f64,
    tail: f64,
    missing: usize,
    warning: Option<String>,
}

fn family_force(scene: &Scene, family: &PathFamily, weight: Weight, opts: &SphereForceOptions) -> Result<FamilyForce> {
    let (a, radius) = sphere_params(scene)?;
    let s = (a * radius).sqrt();
    let rho_max = opts.rho_max.unwrap_or(1000.0 * a.max(s));
    if !(rho_max > 0.0) {
        return Err(Error::invalid("rho_max must be positive"));
    }
    let mut breaks = vec![0.0];
    for b in [0.25 * s, s, 2.0 * s, 4.0 * s, 10.0 * s, 0.5 * radius, radius, 2.0 * radius, 30.0 * s, 100.0 * s] {
        if b > 0.0 && b < rho_max {
            breaks.push(b);
        }
    }
    breaks.push(rho_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    add_existence_edges(scene, family, weight, opts.fixed_bounce, &mut breaks)?;

    let mut missing = 0usize;
    let q = try_integrate_with_breaks(
        |rho| {
            Ok(match family_pressure(scene, family, rho, weight, opts.fixed_bounce)? {
                Some(p) => 2.0 * PI * rho * p,
                None => {
                    missing += 1;
                    0.0
                }
            })
        },
        &breaks,
        QuadOptions { rel_tol: opts.rel_tol, abs_tol: opts.rel_tol * pfa_scale(a, radius), max_panels: 4000 },
    )?;
    if !q.converged {
        return Err(Error::numeric(
            format!("radial force quadrature for family {}", family.label),
            format!("error estimate {:e} after {} panels", q.error, q.panels),
        ));
    }
    let (tail, warning) = radial_tail(scene, family, weight, opts.fixed_bounce, rho_max)?;
    Ok(FamilyForce { value: q.value + tail, error: q.error, tail, missing, warning })
}

/// Inserts the radii where the family appears or disappears, so that no panel straddles the jump.
fn add_existence_edges(
    scene: &Scene,
    family: &PathFamily,
    weight: Weight,
    fixed: bool,
    breaks: &mut Vec<f64>,
) -> Result<()> {
    if family.is_flat() || family.kind == FamilyKind::Sphere(SphereFamily::OneS) {
        return Ok(());
    }
    let exists = |rho: f64| -> Result<bool> { Ok(family_pressure(scene, family, rho, weight, fixed)?.is_some()) };
    // sample each existing panel a few times before bisecting
    let mut nodes = Vec::new();
    for w in breaks.windows(2) {
        for k in 0..8 {
            nodes.push(w[0] + (w[1] - w[0]) * k as f64 / 8.0);
        }
    }
    nodes.push(*breaks.last().expect("at least two breaks"));
    let mut flags = Vec::with_capacity(nodes.len());
    for &n in &nodes {
        flags.push(exists(n)?);
    }
    let mut edges = Vec::new();
    for i in 1..nodes.len() {
        if flags[i] != flags[i - 1] {
            let (mut lo, mut hi) = (nodes[i - 1], nodes[i]);
            while hi - lo > 1e-13 * hi {
                let mid = 0.5 * (lo + hi);
                if exists(mid)? == flags[i - 1] {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            edges.push(lo);
            edges.push(hi);
        }
    }
    breaks.extend(edges);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    Ok(())
}

/// 2π∫_{ρmax}^∞ ρ P dρ assuming P ∝ ρ^{−α}, α fitted on the last decade.
fn radial_tail(
    scene: &Scene,
    family: &PathFamily,
    weight: Weight,
    fixed: bool,
    rho_max: f64,
) -> Result<(f64, Option<String>)> {
    let end = family_pressure(scene, family, rho_max, weight, fixed)?;
    let start = family_pressure(scene, family, 0.1 * rho_max, weight, fixed)?;
    let Some(p_end) = end else { return Ok((0.0, None)) };
    if p_end == 0.0 {
        return Ok((0.0, None));
    }
    let mut warning = None;
    let alpha = match start {
        Some(p0) if p0 != 0.0 && p0.signum() == p_end.signum() => {
            let alpha = (p0 / p_end).ln() / 10f64.ln();
            if alpha > 2.5 {
                alpha
            } else {
                warning = Some(format!("{}: fitted radial decay exponent {alpha:.2}; tail uses 6", family.label));
                6.0
            }
        }
        _ => 6.0,
    };
    Ok((2.0 * PI * p_end * rho_max * rho_max / (alpha - 2.0), warning))
}

/// Force on the plate from `families`, integrating ρ from 0 to ρ_max plus a power-law tail.
pub fn plate_force_sphere_with(
    scene: &Scene,
    families: &[PathFamily],
    weight: Weight,
    opts: &SphereForceOptions,
) -> Result<(f64, ForceReport)> {
    sphere_params(scene)?;
    let per_family: Vec<Result<FamilyForce>> =
        families.par_iter().map(|f| family_force(scene, f, weight, opts)).collect();
    let mut report = ForceReport::default();
    let mut sum = NeumaierSum::new();
    let mut tail = 0.0;
    for (family, r) in families.iter().zip(per_family) {
        let f = r?;
        sum.add(f.value);
        tail += f.tail;
        report.quadrature_error += f.error;
        if f.missing > 0 {
            report.warnings.push(format!("{}: no classical path at {} quadrature nodes", family.label, f.missing));
        }
        report.warnings.extend(f.warning);
        report.contributions.push(Contribution {
            label: family.label.clone(),
            group: family.group,
            value: f.value,
            partial_sum: sum.value(),
            error: f.error,
        });
    }
    // radial tails are already inside each contribution
    report.tail_correction = 0.0;
    report.quadrature_error += 0.01 * tail.abs();
    let last_group = report.contributions.last().map(|c| c.group);
    report.truncation_estimate =
        report.contributions.iter().filter(|c| Some(c.group) == last_group).map(|c| c.value).sum::<f64>().abs();
    Ok((report.total(), report))
}

/// Zero-temperature force on the plate summed over families up to `max_order` reflections.
pub fn plate_force_sphere(
    scene: &Scene,
    max_order: u32,
    rho_max: Option<f64>,
    tol: f64,
) -> Result<(f64, ForceReport)> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let opts = SphereForceOptions { rho_max, rel_tol: tol, fixed_bounce: false };
    plate_force_sphere_with(scene, &path_families(scene, max_order), Weight::ZeroTemperature, &opts)
}

/// Normalization that makes f(0) = 1 for a truncated family set.
///
/// In the a/R → 0 limit each family reproduces a fixed share of the
/// proximity-force sum ζ(4): 1s and 3s give 1/2 each, 3p and 5p give 1/32
/// each, family 2 gives nothing at leading order.
pub fn f_normalization(families: &[PathFamily]) -> f64 {
    let share: f64 = families
        .iter()
        .map(|f| match f.kind {
            FamilyKind::Sphere(SphereFamily::OneS | SphereFamily::ThreeS) => 0.5,
            FamilyKind::Sphere(SphereFamily::ThreeP | SphereFamily::FiveP) => 1.0 / 32.0,
            _ => 0.0,
        })
        .sum();
    share / zeta(4.0)
}

/// f = F/(−π³R/720a³) divided by the truncation normalization, for a family subset.
pub fn f_factor_families(scene: &Scene, families: &[PathFamily], opts: &SphereForceOptions) -> Result<f64> {
    let (a, radius) = sphere_params(scene)?;
    let norm = f_normalization(families);
    if norm == 0.0 {
        return Err(Error::invalid("family set has no leading-order share; f is undefined"));
    }
    let (force, _) = plate_force_sphere_with(scene, families, Weight::ZeroTemperature, opts)?;
    Ok(-force / pfa_scale(a, radius) / norm)
}

/// f(a/R) with every family up to `max_order` reflections.
pub fn f_factor(a: f64, radius: f64, max_order: u32) -> Result<f64> {
    let scene = Scene::sphere_plate(a, radius)?;
    if a / radius > 1.0 {
        return Err(Error::invalid("f-factor is defined for a/R in (0, 1]"));
    }
    f_factor_families(&scene, &path_families(&scene, max_order), &SphereForceOptions::default())
}

/// Per-family pressures on the plate along `rho`; `None` where a family has no path.
pub fn pressure_profile(
    scene: &Scene,
    families: &[PathFamily],
    weight: Weight,
    rho: &[f64],
) -> Result<Vec<Vec<Option<f64>>>> {
    sphere_params(scene)?;
    rho.par_iter()
        .map(|&r| families.iter().map(|f| family_pressure(scene, f, r, weight, false)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_shares() {
        let s = Scene::sphere_plate(0.1, 1.0).unwrap();
        let all = path_families(&s, 5);
        assert!((f_normalization(&all) * zeta(4.0) - 17.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn one_s_three_s_force() {
        let (a, r) = (0.5, 1.0);
        let s = Scene::sphere_plate(a, r).unwrap();
        let fams: Vec<_> = ["1s", "3s"].iter().map(|l| PathFamily::from_label(&s, l).unwrap()).collect();
        let (f, _) = plate_force_sphere_with(&s, &fams, Weight::ZeroTemperature, &SphereForceOptions::default()).unwrap();
        let expect = -r / (8.0 * PI * a.powi(3));
        assert!((f / expect - 1.0).abs() < 1e-4, "{f} {expect}");
    }
}
