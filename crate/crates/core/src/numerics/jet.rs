//! Second-order forward-mode jets: a value with its first two derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// `(f, f', f'')` of some function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn constant(v: f64) -> Self {
        Jet2 { v, d1: 0.0, d2: 0.0 }
    }

    /// The independent variable at `v`.
    pub const fn variable(v: f64) -> Self {
        Jet2 { v, d1: 1.0, d2: 0.0 }
    }

    /// Composes a scalar function given its value and first two derivatives at `self.v`.
    pub fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Jet2 { v: f, d1: df * self.d1, d2: d2f * self.d1 * self.d1 + df * self.d2 }
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn powi(self, n: i32) -> Self {
        let nf = n as f64;
        let p2 = if !(0..2).contains(&n) { self.v.powi(n - 2) } else { 0.0 };
        let p1 = if !(0..1).contains(&n) { self.v.powi(n - 1) } else { 0.0 };
        self.chain(self.v.powi(n), nf * p1, nf * (nf - 1.0) * p2)
    }

    pub fn scale(self, k: f64) -> Self {
        Jet2 { v: k * self.v, d1: k * self.d1, d2: k * self.d2 }
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, k: f64) -> Jet2 {
        Jet2 { v: self.v + k, ..self }
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, k: f64) -> Jet2 {
        Jet2 { v: self.v - k, ..self }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(k)
    }
}
