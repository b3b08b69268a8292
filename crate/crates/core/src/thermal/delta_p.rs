//! Convergence of the reflection sum for the low-temperature pressure shift
//! δP between parallel plates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::special::{coth, csch_sq, hurwitz_zeta};
use crate::numerics::{brent_minimize, try_integrate, NeumaierSum, QuadOptions};

/// Summand (3τ²r² − π²)/(τ²r² + π²)³.
fn summand(tau: f64, r: f64) -> f64 {
    let u = tau * tau * r * r;
    (3.0 * u - PI * PI) / (u + PI * PI).powi(3)
}

/// ∫_r^∞ of the summand.
fn tail_integral(tau: f64, r: f64) -> f64 {
    r / (tau * tau * r * r + PI * PI).powi(2)
}

/// Σ_{r≥1} of the summand: explicit terms up to a few summand widths, then Euler–Maclaurin.
fn full_sum(tau: f64) -> f64 {
    let cut = 64usize.max((8.0 * PI / tau).min(1e6).ceil() as usize);
    let n = cut as f64;
    let mut s: NeumaierSum = (1..cut).map(|r| summand(tau, r as f64)).collect();
    let h = 0.5;
    let d = |k: f64| summand(tau, n + k * h);
    let d1 = (d(-2.0) - 8.0 * d(-1.0) + 8.0 * d(1.0) - d(2.0)) / (12.0 * h);
    let d3 = (d(-3.0) - 8.0 * d(-2.0) + 13.0 * d(-1.0) - 13.0 * d(1.0) + 8.0 * d(2.0) - d(3.0)) / (8.0 * h * h * h);
    s.add(tail_integral(tau, n));
    s.add(0.5 * summand(tau, n));
    s.add(-d1 / 12.0);
    s.add(d3 / 720.0);
    s.value()
}

/// −(1/π²)(1/β⁴ − (π³/8a³β) coth(πβ/2a) csch²(πβ/2a))
pub fn delta_p_m1_closed_form(a: f64, beta: f64) -> f64 {
    let y = PI * beta / (2.0 * a);
    -(1.0 / beta.powi(4) - PI.powi(3) / (8.0 * a.powi(3) * beta) * coth(y) * csch_sq(y)) / (PI * PI)
}

/// Result of [`delta_p_study`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaPStudy {
    pub a: f64,
    pub beta: f64,
    /// τ = 2πa/β
    pub tau: f64,
    /// δP₁ summed over reflections r ≤ X, for X = 1..=x_max.
    pub partial_sums: Vec<f64>,
    /// δP₁ summed over all reflections.
    pub delta_p1: f64,
    /// Closed form of δP₁.
    pub delta_p1_closed: f64,
    /// δP summed over m and all reflections.
    pub delta_p: f64,
    /// Number of m terms summed explicitly.
    pub m_terms: usize,
    /// Closed-form estimate of the omitted m terms, included in `delta_p`.
    pub m_tail: f64,
    /// X at which the continuous partial sum ∫₀^X is most negative.
    pub x_critical: f64,
    /// X ≤ x_max at which the partial reflection sum Σ_{r≤X} is most negative.
    pub x_critical_discrete: usize,
}

impl DeltaPStudy {
    /// δP₁ with reflections r ≤ x only.
    pub fn partial(&self, x: usize) -> Option<f64> {
        x.checked_sub(1).and_then(|i| self.partial_sums.get(i).copied())
    }

    /// Omitted reflections at X as a fraction of the full δP₁.
    pub fn relative_remainder(&self, x: usize) -> Option<f64> {
        self.partial(x).map(|p| (self.delta_p1 - p) / self.delta_p1)
    }

    /// Omitted reflections at X in units where the full δP₁ bracket equals 1/2.
    pub fn bracket_remainder(&self, x: usize) -> Option<f64> {
        self.relative_remainder(x).map(|r| 0.5 * r.abs())
    }
}

/// Partial sums of δP₁ up to `x_max` reflections, the m-summed total, and
/// the truncation threshold where the continuous partial sum bottoms out.
///
/// The m sum stops when a term drops below 1e−14 of the running sum or at
/// `m_max`, after which the remaining terms are added in their τ → 0 form.
pub fn delta_p_study(a: f64, beta: f64, m_max: usize, x_max: usize) -> Result<DeltaPStudy> {
    if !(a > 0.0 && beta > 0.0) {
        return Err(Error::invalid("gap and beta must be positive"));
    }
    if m_max < 1 || x_max < 1 {
        return Err(Error::invalid("m_max and x_max must be at least 1"));
    }
    let tau = 2.0 * PI * a / beta;
    let pref = |m: usize| -2.0 * PI * PI / (m as f64 * beta).powi(4);

    let mut acc = NeumaierSum::new();
    let partial_sums: Vec<f64> = (1..=x_max)
        .map(|r| {
            acc.add(summand(tau, r as f64));
            pref(1) * acc.value()
        })
        .collect();
    let delta_p1 = pref(1) * full_sum(tau);

    let mut total = NeumaierSum::new();
    let mut m_terms = 0;
    for m in 1..=m_max {
        let term = pref(m) * full_sum(tau / m as f64);
        total.add(term);
        m_terms = m;
        if term.abs() < 1e-14 * total.value().abs() {
            break;
        }
    }
    // δP_m → −1/(π² m⁴ β⁴) up to terms exponentially small in m
    let m_tail = -hurwitz_zeta(4.0, m_terms as f64 + 1.0) / (PI * PI * beta.powi(4));
    total.add(m_tail);

    let continuous = |x: f64| -> Result<f64> {
        let q = try_integrate(|r| Ok(summand(tau, r)), 0.0, x, QuadOptions::rel(1e-12))?;
        Ok(q.value)
    };
    let hi = 10.0 * PI / tau;
    let (x_critical, _) = brent_minimize(
        |x| continuous(x).unwrap_or(f64::INFINITY),
        1e-6 * hi,
        hi,
        1e-10,
        200,
    )?;
    let x_critical_discrete = partial_sums
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i + 1, v) } else { best })
        .0;

    Ok(DeltaPStudy {
        a,
        beta,
        tau,
        partial_sums,
        delta_p1,
        delta_p1_closed: delta_p_m1_closed_form(a, beta),
        delta_p: total.value(),
        m_terms,
        m_tail,
        x_critical,
        x_critical_discrete,
    })
}
