//! One-sided second derivatives with Richardson (Ridders) extrapolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
}

const STENCIL: [f64; 5] = [35.0, -104.0, 114.0, -56.0, 11.0];
const LEVELS: usize = 10;

/// `f''(0)` using samples on `[0, 4h]` only.
///
/// The forward 5-point stencil has error `(5/6) h^3 f^(5) + O(h^4)`; the step is
/// halved repeatedly and a Richardson table eliminates the powers `h^3, h^4, ...`.
/// The table entry with the smallest error estimate is returned.
pub fn second_derivative_one_sided<F>(mut f: F, h: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("differentiation step must be positive, got {h}")));
    }
    let f0 = f(0.0)?;
    // samples[k] = f(k * h_i) for the current level
    let mut samples = [f0, f(h)?, f(2.0 * h)?, f(3.0 * h)?, f(4.0 * h)?];
    let raw = |s: &[f64; 5], h: f64| STENCIL.iter().zip(s).map(|(c, v)| c * v).sum::<f64>() / (12.0 * h * h);

    let mut table: Vec<Vec<f64>> = Vec::with_capacity(LEVELS);
    table.push(vec![raw(&samples, h)]);
    let mut best = Derivative { value: table[0][0], error: f64::INFINITY };
    let mut hi = h;
    for i in 1..LEVELS {
        hi *= 0.5;
        samples = [f0, f(hi)?, samples[1], f(3.0 * hi)?, samples[2]];
        let mut row = vec![raw(&samples, hi)];
        for j in 1..=i {
            let factor = 2f64.powi(2 + j as i32) - 1.0;
            let prev = row[j - 1];
            let next = prev + (prev - table[i - 1][j - 1]) / factor;
            let err = (next - prev).abs().max((next - table[i - 1][j - 1]).abs());
            row.push(next);
            if err <= best.error {
                best = Derivative { value: next, error: err };
            }
        }
        table.push(row);
    }
    if !best.value.is_finite() {
        return Err(Error::numeric("second derivative", "non-finite result"));
    }
    Ok(best)
}

/// `f''(0)` for a function even in its argument, from `2(f(h) − f(0))/h²`
/// extrapolated in powers of `h²`.
pub fn second_derivative_even<F>(mut f: F, h: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("differentiation step must be positive, got {h}")));
    }
    let f0 = f(0.0)?;
    let mut prev: Vec<f64> = Vec::new();
    let mut best = Derivative { value: f64::NAN, error: f64::INFINITY };
    let mut hi = h;
    for i in 0..LEVELS.min(8) {
        let mut row = vec![2.0 * (f(hi)? - f0) / (hi * hi)];
        for j in 1..=i {
            let next = row[j - 1] + (row[j - 1] - prev[j - 1]) / (4f64.powi(j as i32) - 1.0);
            let err = (next - row[j - 1]).abs();
            if err <= best.error {
                best = Derivative { value: next, error: err };
            }
            row.push(next);
        }
        prev = row;
        hi *= 0.5;
    }
    if !best.value.is_finite() {
        return Err(Error::numeric("second derivative", "non-finite result"));
    }
    Ok(best)
}
