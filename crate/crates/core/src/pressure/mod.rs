//! Casimir pressure as a sum over reflection families, plus the derived
//! sphere–plate force, f-factor and pendulum pipelines.

mod pendulum;
mod sphere;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Scene, SurfacePoint};
use crate::numerics::sum::{local_exponent, power_law_tail};
use crate::numerics::{try_integrate, Derivative, NeumaierSum, QuadOptions};
use crate::paths::{path_families, PathFamily, PathKernel, Weight};

pub use pendulum::{energy_from_force, pendulum_energy_torque, pendulum_force, pendulum_limits, PendulumEnergy};
pub use sphere::{
    f_factor, f_factor_families, f_normalization, plate_force_sphere, plate_force_sphere_with, pressure_profile,
    SphereForceOptions,
};

/// One family's share of a pressure or force.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub label: String,
    pub group: u32,
    pub value: f64,
    pub partial_sum: f64,
    /// Error estimate of the normal derivative or quadrature behind `value`.
    pub error: f64,
}

/// Per-family breakdown and diagnostics of a summed pressure or force.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ForceReport {
    pub contributions: Vec<Contribution>,
    /// Families with no classical path at the evaluation point.
    pub absent: Vec<String>,
    /// Magnitude of the last included family group.
    pub truncation_estimate: f64,
    /// Power-law estimate of the omitted groups, already included in the total.
    pub tail_correction: f64,
    pub quadrature_error: f64,
    pub warnings: Vec<String>,
}

impl ForceReport {
    pub fn contribution(&self, label: &str) -> Option<&Contribution> {
        self.contributions.iter().find(|c| c.label == label)
    }

    /// Sum of contributions with the tail correction.
    pub fn total(&self) -> f64 {
        self.contributions.last().map_or(0.0, |c| c.partial_sum) + self.tail_correction
    }

    fn push(&mut self, sum: &mut NeumaierSum, label: &str, group: u32, value: f64, error: f64) {
        sum.add(value);
        self.contributions.push(Contribution {
            label: label.to_string(),
            group,
            value,
            partial_sum: sum.value(),
            error,
        });
    }

    /// Groups' summed values in order of first appearance, with completeness flags.
    fn group_sums(&self, families: &[PathFamily]) -> Vec<(u32, f64, bool)> {
        let mut out: Vec<(u32, f64, bool)> = Vec::new();
        for c in &self.contributions {
            match out.last_mut() {
                Some(last) if last.0 == c.group => last.1 += c.value,
                _ => out.push((c.group, c.value, false)),
            }
        }
        for g in out.iter_mut() {
            let present = self.contributions.iter().filter(|c| c.group == g.0).count();
            let expected = families.iter().filter(|f| f.group == g.0).count();
            g.2 = present == expected.max(1) && expected >= 2;
        }
        out
    }
}

/// Prefactor (−1)^{n_r}·multiplicity/(16π²) that turns ∂²_z g into a pressure.
pub fn family_prefactor(family: &PathFamily) -> f64 {
    family.sign() * family.multiplicity as f64 / (16.0 * PI * PI)
}

/// Pressure of one family at `coord` with the given weight, with its error estimate.
pub fn weighted_pressure_term(scene: &Scene, family: &PathFamily, coord: f64, weight: Weight) -> Result<Derivative> {
    let kernel = PathKernel::new(scene, family, coord, weight)?;
    let d = kernel.curvature()?;
    let k = family_prefactor(family);
    Ok(Derivative { value: k * d.value, error: (k * d.error).abs() })
}

/// Zero-temperature pressure of one family at an on-surface point.
pub fn pressure_term(scene: &Scene, family: &PathFamily, point: &SurfacePoint) -> Result<f64> {
    if point.z != 0.0 {
        return Err(Error::invalid("pressure is evaluated on the plate surface (z = 0)"));
    }
    Ok(weighted_pressure_term(scene, family, point.coord, Weight::ZeroTemperature)?.value)
}

/// Sums family pressures at `coord`.
///
/// With `tail` set, complete family groups are assumed to decay as a power of
/// the group index; the exponent is read off the last two complete groups and
/// the omitted groups are added by Euler–Maclaurin.
pub fn sum_pressure(
    scene: &Scene,
    coord: f64,
    families: &[PathFamily],
    weight: Weight,
    tail: bool,
) -> Result<(f64, ForceReport)> {
    let mut report = ForceReport::default();
    let mut sum = NeumaierSum::new();
    for family in families {
        match weighted_pressure_term(scene, family, coord, weight) {
            Ok(d) => {
                if d.error > 1e-6 * d.value.abs() && d.value != 0.0 {
                    report.warnings.push(format!(
                        "{}: derivative error estimate {:.1e} exceeds 1e-6 relative",
                        family.label,
                        d.error / d.value.abs()
                    ));
                }
                report.push(&mut sum, &family.label, family.group, d.value, d.error);
            }
            Err(e) if e.is_no_path() => report.absent.push(family.label.clone()),
            Err(e) => return Err(e),
        }
    }
    let groups = report.group_sums(families);
    report.truncation_estimate = groups.last().map_or(0.0, |g| g.1.abs());
    if tail {
        report.tail_correction = group_tail(&groups, &mut report.warnings);
    }
    Ok((report.total(), report))
}

fn group_tail(groups: &[(u32, f64, bool)], warnings: &mut Vec<String>) -> f64 {
    let complete: Vec<&(u32, f64, bool)> = groups.iter().filter(|g| g.2).collect();
    if complete.len() < 2 {
        return 0.0;
    }
    let (prev, last) = (complete[complete.len() - 2], complete[complete.len() - 1]);
    let Some(p) = local_exponent(prev.1, prev.0 as f64, last.1, last.0 as f64) else {
        warnings.push("group terms change sign; no tail correction applied".into());
        return 0.0;
    };
    if p <= 1.5 {
        warnings.push(format!("group terms decay too slowly (exponent {p:.2}); no tail correction applied"));
        return 0.0;
    }
    // groups beyond the last complete one, minus any partial group already summed
    let included_after: f64 = groups.iter().filter(|g| g.0 > last.0).map(|g| g.1).sum();
    power_law_tail(last.1, last.0 as f64, p) - included_after
}

/// Total zero-temperature pressure at an on-surface point, summed up to `max_order` reflections.
pub fn total_pressure(scene: &Scene, point: &SurfacePoint, max_order: u32) -> Result<(f64, ForceReport)> {
    if max_order < 1 {
        return Err(Error::invalid("max_order must be at least 1"));
    }
    let families = path_families(scene, max_order);
    let tail = matches!(scene, Scene::ParallelPlates { .. });
    sum_pressure(scene, point.coord, &families, Weight::ZeroTemperature, tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffParams {
    /// Wavenumber cutoff Λ.
    pub lambda: f64,
}

impl CutoffParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(CutoffParams { lambda })
        } else {
            Err(Error::invalid(format!("cutoff must be positive, got {lambda}")))
        }
    }
}

/// Coefficient of k³ in the coincidence limit ∂_{z'}∂_z of ±sin(k s)/(4π s),
/// with s = z' − z (direct path) or s = z' + z (single reflection).
///
/// Only the s² term of the Taylor series survives the limit; its mixed
/// derivative is −2 for s = z' − z and +2 for s = z' + z.
fn coincidence_coefficient(reflected: bool) -> f64 {
    // sin(k s)/s = k − k³ s²/6 + …
    let s2_coefficient = -1.0 / 6.0;
    let (sign, mixed) = if reflected { (-1.0, 2.0) } else { (1.0, -2.0) };
    sign * s2_coefficient * mixed / (4.0 * PI)
}

/// Cutoff-dependent zero- and one-reflection pressures (P0, P1).
///
/// Both come from ∫ dk e^{−k/Λ} (1/2π) ∂_{z'}∂_z G_k at coincidence, integrated numerically.
pub fn regulated_self_pressure(cutoff: CutoffParams) -> Result<(f64, f64)> {
    let lambda = cutoff.lambda;
    let integral = |reflected: bool| -> Result<f64> {
        let c = coincidence_coefficient(reflected);
        // k = Λu; e^{−u} u³ is negligible beyond u = 200
        let q = try_integrate(
            |u: f64| Ok((-u).exp() * c * u.powi(3) / (2.0 * PI)),
            0.0,
            200.0,
            QuadOptions { rel_tol: 1e-14, abs_tol: 0.0, max_panels: 500 },
        )?;
        Ok(q.value * lambda.powi(4))
    };
    Ok((integral(false)?, integral(true)?))
}
