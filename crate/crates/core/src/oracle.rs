//! Exact parallel-plate results, derived without the reflection expansion.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::special::{bernoulli_numbers, Ratio};
use crate::numerics::{try_integrate, NeumaierSum, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    /// Dimensionally continued transverse integral with a zeta-regularized mode sum.
    ZetaModeSum,
    /// Sum over Matsubara frequencies of a one-dimensional κ integral.
    MatsubaraSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub method: OracleMethod,
    /// Estimated absolute numerical error.
    pub error: f64,
}

/// ζ(−3) = −B₄/4 as an exact fraction.
fn zeta_minus_three() -> Ratio {
    let b4 = bernoulli_numbers(4)[4];
    Ratio::new(-b4.num, 4 * b4.den)
}

/// Γ(s − 1)/Γ(s) at s = −1/2, from Γ(x + 1) = xΓ(x).
fn transverse_gamma_ratio() -> f64 {
    1.0 / (-1.5)
}

/// Zero-temperature Casimir pressure between Dirichlet plates at separation `a`.
///
/// E/S = ½ Σ_n ∫d²k/(2π)² √(k² + (nπ/a)²). The transverse integral continues to
/// −(nπ/a)³/(6π), leaving E/S = −(π²/12a³) ζ(−3); the pressure is −∂_a(E/S).
pub fn exact_plate_pressure(a: f64) -> Result<OracleResult> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::invalid(format!("gap must be positive, got {a}")));
    }
    // ∫ d²k/(2π)² (k² + m²)^{1/2} = m³ Γ(−3/2)/(4π Γ(−1/2))
    let per_mode_cube = transverse_gamma_ratio() / (4.0 * PI);
    let energy_coefficient = 0.5 * per_mode_cube * PI.powi(3) * zeta_minus_three().to_f64();
    // E/S = c/a³, so P = 3c/a⁴
    let value = 3.0 * energy_coefficient / a.powi(4);
    Ok(OracleResult { value, method: OracleMethod::ZetaModeSum, error: 4.0 * f64::EPSILON * value.abs() })
}

/// Finite-temperature force per unit area between Dirichlet plates.
///
/// P = −(T/π) Σ′_m ∫_{ξ_m}^∞ κ²/(e^{2aκ} − 1) dκ with ξ_m = 2πmT and the m = 0 term halved.
pub fn exact_plate_thermal_force(a: f64, temperature: f64) -> Result<OracleResult> {
    if !(a > 0.0 && temperature > 0.0) {
        return Err(Error::invalid("gap and temperature must be positive"));
    }
    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 0.0, max_panels: 2000 };
    let integrand = |k: f64| Ok(k * k / (2.0 * a * k).exp_m1());
    let mut sum = NeumaierSum::new();
    let mut error = 0.0;
    let mut m = 0usize;
    loop {
        let xi = 2.0 * PI * m as f64 * temperature;
        // the integrand has fallen by e^{−100} at the upper limit
        let q = try_integrate(integrand, xi, xi + 50.0 / a, opts)?;
        if !q.converged && q.error > 1e-12 * q.value.abs() {
            return Err(Error::numeric("Matsubara term", format!("m = {m}, error estimate {:e}", q.error)));
        }
        let w = if m == 0 { 0.5 } else { 1.0 };
        sum.add(w * q.value);
        error += w * q.error;
        if m > 0 && q.value < 1e-18 * sum.value() {
            break;
        }
        m += 1;
        if m > 10_000_000 {
            return Err(Error::numeric("Matsubara sum", "no convergence after 1e7 terms"));
        }
    }
    let pref = -temperature / PI;
    let value = pref * sum.value();
    let error = (pref * error).abs() + 8.0 * f64::EPSILON * value.abs();
    Ok(OracleResult { value, method: OracleMethod::MatsubaraSum, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_temperature_value() {
        let p = exact_plate_pressure(1.0).unwrap();
        assert!((p.value + PI * PI / 480.0).abs() < 1e-16);
        assert_eq!(zeta_minus_three(), Ratio::new(1, 120));
        let p2 = exact_plate_pressure(2.0).unwrap();
        assert!((p2.value * 16.0 - p.value).abs() < 1e-17);
    }

    #[test]
    fn thermal_tends_to_zero_temperature() {
        let a = 1.0;
        let t = 0.01 / (2.0 * PI * a);
        let p = exact_plate_thermal_force(a, t).unwrap();
        let p0 = -PI * PI / 480.0;
        assert!((p.value / p0 - 1.0).abs() < 1e-6, "{} {p0}", p.value);
        assert!(p.error <= 1e-10 * p.value.abs());
    }
}
