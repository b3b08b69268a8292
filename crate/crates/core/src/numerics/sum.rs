//! Compensated summation and power-law tails of slowly convergent series.

use super::special::bernoulli_numbers;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    carry: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

/// Euler–Maclaurin estimate of `sum_{n > n_last} c n^{-p}` given the last term `c n_last^{-p}`.
pub fn power_law_tail(last_term: f64, n_last: f64, p: f64) -> f64 {
    if !(p > 1.0) || n_last <= 0.0 {
        return 0.0;
    }
    let c = last_term * n_last.powf(p);
    let n = n_last;
    let b = bernoulli_numbers(12);
    let mut acc = n.powf(1.0 - p) / (p - 1.0) - 0.5 * n.powf(-p);
    // B_{2k}/(2k)! · p(p+1)…(p+2k−2) · n^{−p−2k+1}
    let mut rising = p;
    let mut fact = 2.0;
    for k in 1..=6 {
        acc += b[2 * k].to_f64() / fact * rising * n.powf(-p - 2.0 * k as f64 + 1.0);
        let kf = k as f64;
        rising *= (p + 2.0 * kf - 1.0) * (p + 2.0 * kf);
        fact *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
    }
    c * acc
}

/// Exponent p of a term sequence `t_n ∝ n^{-p}` estimated from two consecutive terms.
pub fn local_exponent(t_prev: f64, n_prev: f64, t_last: f64, n_last: f64) -> Option<f64> {
    if t_prev == 0.0 || t_last == 0.0 || t_prev.signum() != t_last.signum() {
        return None;
    }
    let p = (t_prev / t_last).ln() / (n_last / n_prev).ln();
    p.is_finite().then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_lost_bits() {
        let s = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn tail_of_inverse_fourth_powers() {
        let n: f64 = 20.0;
        let exact = super::super::special::hurwitz_zeta(4.0, 21.0);
        let tail = power_law_tail(n.powi(-4), n, 4.0);
        assert!((tail - exact).abs() < 1e-12 * exact, "{tail} {exact}");
    }

    #[test]
    fn exponent_from_terms() {
        let p = local_exponent(10f64.powi(-3), 10.0, 11f64.powi(-3), 11.0).unwrap();
        assert!((p - 3.0).abs() < 1e-12);
    }
}
