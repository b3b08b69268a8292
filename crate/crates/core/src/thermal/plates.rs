//! Parallel-plate free energy from the reflection expansion.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{bracket, bracket_derivative, bracket_series, nu_constant, nu_integrand, ThermalParams, BRACKET_SWITCH};
use crate::error::{Error, Result};
use crate::numerics::special::hurwitz_zeta;
use crate::numerics::NeumaierSum;

/// Terms of the parallel-plate free energy. `total` excludes the
/// temperature-independent Casimir energy, which sits in `casimir_energy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyBreakdown {
    /// Black-body term −π²VT⁴/90.
    pub f0: f64,
    /// Odd reflections, independent of a.
    pub f_odd: f64,
    /// Even reflections 2, 4, 6, …
    pub f_even: f64,
    pub total: f64,
    /// E = −π²S/1440a³
    pub casimir_energy: f64,
    /// Terms summed explicitly before the asymptotic tail.
    pub n_terms: usize,
}

fn n_terms(tau: f64, n_max: usize) -> usize {
    n_max.max((40.0 / tau).ceil() as usize).max(1)
}

/// Σ_{n≥1} B(nτ)/(2(nτ)⁴), with the large-n tail in closed form.
fn even_sum(tau: f64, n: usize) -> f64 {
    let mut s: NeumaierSum = (1..=n).map(|k| nu_integrand(k as f64 * tau)).collect();
    let q = n as f64 + 1.0;
    // B(x) → x − 2
    s.add(hurwitz_zeta(3.0, q) / (2.0 * tau.powi(3)));
    s.add(-hurwitz_zeta(4.0, q) / tau.powi(4));
    s.value()
}

/// d/dx [B(x)/(2x³)]
fn q_prime(x: f64) -> f64 {
    if x < BRACKET_SWITCH {
        let c = bracket_series();
        let x2 = x * x;
        let mut acc = 0.0;
        for n in (2..c.len() - 1).rev() {
            acc = acc * x2 + c[n] * (2 * n - 3) as f64 / 2.0;
        }
        acc
    } else {
        bracket_derivative(x) / (2.0 * x.powi(3)) - 3.0 * bracket(x) / (2.0 * x.powi(4))
    }
}

/// Free energy of a plate pair with gap `a`, plate area `area` and total volume `volume`.
///
/// At least `n_max` even-reflection terms are summed (never fewer than 40/τ);
/// the remainder uses the large-argument form of the bracket.
pub fn plates_free_energy(
    a: f64,
    area: f64,
    volume: f64,
    params: ThermalParams,
    n_max: usize,
) -> Result<FreeEnergyBreakdown> {
    if !(a > 0.0 && area > 0.0 && volume >= 0.0) {
        return Err(Error::invalid("gap and area must be positive, volume non-negative"));
    }
    let casimir_energy = -PI * PI * area / (1440.0 * a.powi(3));
    if params.is_zero() {
        return Ok(FreeEnergyBreakdown {
            f0: 0.0,
            f_odd: 0.0,
            f_even: 0.0,
            total: 0.0,
            casimir_energy,
            n_terms: 0,
        });
    }
    let t = params.temperature;
    let bt = params.beta_tilde;
    let tau = params.tau(a);
    let n = n_terms(tau, n_max);
    let f0 = -PI * PI * volume * t.powi(4) / 90.0;
    let f_odd = PI * t.powi(3) * area * nu_constant(1e-9)? / 2.0;
    let f_even = -area * a / (PI * PI * bt.powi(4)) * even_sum(tau, n);
    Ok(FreeEnergyBreakdown { f0, f_odd, f_even, total: f0 + f_odd + f_even, casimir_energy, n_terms: n })
}

/// Force per unit area between the plates, −∂(E + F)/∂a / S, with black-body
/// pressure equal on both faces.
pub fn plates_free_energy_force(a: f64, params: ThermalParams, n_max: usize) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid("gap must be positive"));
    }
    let zero_t = -PI * PI / (480.0 * a.powi(4));
    if params.is_zero() {
        return Ok(zero_t);
    }
    let bt = params.beta_tilde;
    let tau = params.tau(a);
    let n = n_terms(tau, n_max);
    let mut s: NeumaierSum = (1..=n).map(|k| q_prime(k as f64 * tau)).collect();
    let q = n as f64 + 1.0;
    // q′(x) → −1/x³ + 3/x⁴
    s.add(-hurwitz_zeta(3.0, q) / tau.powi(3));
    s.add(3.0 * hurwitz_zeta(4.0, q) / tau.powi(4));
    Ok(zero_t + s.value() / (PI * PI * bt.powi(4)))
}

/// Σ_n B(nτ)/(2(nτ)⁴) − (ν/τ − 1/90); tends to zero as τ → 0.
pub fn plates_low_t_residual(tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::invalid("tau must be positive"));
    }
    let nu = nu_constant(1e-9)?;
    Ok(even_sum(tau, n_terms(tau, 0)) - (nu / tau - 1.0 / 90.0))
}
