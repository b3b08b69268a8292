//! Tilted-plate pendulum: force per unit length, energy and torque.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{weighted_pressure_term, Contribution, ForceReport};
use crate::error::{Error, Result};
use crate::geometry::Scene;
use crate::numerics::{try_integrate, NeumaierSum, QuadOptions};
use crate::paths::{PathFamily, Weight};

fn pendulum_params(scene: &Scene) -> Result<(f64, f64, f64)> {
    match *scene {
        Scene::Pendulum { a, w, theta } => Ok((a, w, theta)),
        _ => Err(Error::invalid("expected a pendulum scene")),
    }
}

/// Integration limits on the lower plate, x_m = (a/sinθ − w/2)/cosθ and x_M = (a/sinθ + w/2)/cosθ.
pub fn pendulum_limits(scene: &Scene) -> Result<(f64, f64)> {
    let (a, w, theta) = pendulum_params(scene)?;
    let (s, c) = theta.sin_cos();
    let lo = (a / s - 0.5 * w) / c;
    let hi = (a / s + 0.5 * w) / c;
    if !(lo > 0.0) {
        return Err(Error::invalid(format!("lower integration limit {lo:e} is not positive")));
    }
    Ok((lo, hi))
}

/// Force per unit y-length on the lower plate, ∫_{x_m}^{x_M} P(x) dx for each family.
pub fn pendulum_force(scene: &Scene, families: &[PathFamily], tol: f64) -> Result<(f64, ForceReport)> {
    let (lo, hi) = pendulum_limits(scene)?;
    let mut report = ForceReport::default();
    let mut sum = NeumaierSum::new();
    for family in families {
        let q = try_integrate(
            |x| Ok(weighted_pressure_term(scene, family, x, Weight::ZeroTemperature)?.value),
            lo,
            hi,
            QuadOptions { rel_tol: tol, abs_tol: 0.0, max_panels: 2000 },
        );
        let q = match q {
            Ok(q) => q,
            Err(e) if e.is_no_path() => {
                report.absent.push(family.label.clone());
                continue;
            }
            Err(e) => return Err(e),
        };
        if !q.converged {
            return Err(Error::numeric(
                format!("pendulum force quadrature for family {}", family.label),
                format!("error estimate {:e}", q.error),
            ));
        }
        sum.add(q.value);
        report.quadrature_error += q.error;
        report.contributions.push(Contribution {
            label: family.label.clone(),
            group: family.group,
            value: q.value,
            partial_sum: sum.value(),
            error: q.error,
        });
    }
    let last = report.contributions.last().map(|c| c.group);
    report.truncation_estimate =
        report.contributions.iter().filter(|c| Some(c.group) == last).map(|c| c.value).sum::<f64>().abs();
    Ok((report.total(), report))
}

/// E(a) = ∫_a^∞ F(a′) da′, so that F = −dE/da and E(∞) = 0.
///
/// Integrated in t = a/a′ ∈ (0, 1]; `force` must fall faster than 1/a′.
pub fn energy_from_force<F>(mut force: F, a: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a > 0.0) {
        return Err(Error::invalid("gap must be positive"));
    }
    let q = try_integrate(|t| Ok(force(a / t)? * a / (t * t)), 0.0, 1.0, QuadOptions::rel(tol))?;
    if !q.converged {
        return Err(Error::numeric("energy integral over the gap", format!("error estimate {:e}", q.error)));
    }
    Ok(q.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendulumEnergy {
    /// Energy per unit y-length.
    pub energy: f64,
    /// T = −∂E/∂θ
    pub torque: f64,
    pub torque_error: f64,
}

fn energy_at(a: f64, w: f64, theta: f64, families: &[PathFamily], tol: f64) -> Result<f64> {
    energy_from_force(
        |a2| {
            let scene = Scene::pendulum(a2, w, theta)?;
            Ok(pendulum_force(&scene, families, 0.1 * tol)?.0)
        },
        a,
        tol,
    )
}

/// Energy per unit length and torque −∂E/∂θ (central differences with one Richardson step).
pub fn pendulum_energy_torque(scene: &Scene, families: &[PathFamily], tol: f64) -> Result<PendulumEnergy> {
    let (a, w, theta) = pendulum_params(scene)?;
    let energy = energy_at(a, w, theta, families, tol)?;
    let mut h = 0.05 * theta.min(FRAC_PI_2 - theta);
    while Scene::pendulum(a, w, theta + h).is_err() {
        h *= 0.5;
        if h < 1e-8 * theta {
            return Err(Error::invalid("no room to vary θ inside the valid geometry"));
        }
    }
    let diff = |h: f64| -> Result<f64> {
        Ok(-(energy_at(a, w, theta + h, families, tol)? - energy_at(a, w, theta - h, families, tol)?) / (2.0 * h))
    };
    let (d1, d2) = (diff(h)?, diff(0.5 * h)?);
    let torque = (4.0 * d2 - d1) / 3.0;
    Ok(PendulumEnergy { energy, torque, torque_error: (torque - d2).abs() })
}
