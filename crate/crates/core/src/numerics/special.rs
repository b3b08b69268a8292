//! Scalar special functions: stable hyperbolics, Bernoulli numbers, zeta.

/// Exact rational with small numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: i128,
    pub den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ratio { num: s * num / g, den: s * den / g }
    }

    fn add(self, o: Ratio) -> Ratio {
        let g = gcd(self.den, o.den);
        Ratio::new(self.num * (o.den / g) + o.num * (self.den / g), self.den / g * o.den)
    }

    fn scale(self, k: i128) -> Ratio {
        Ratio::new(self.num * k, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn binomial(n: i128, k: i128) -> i128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Bernoulli numbers `B_0 ..= B_n` (convention `B_1 = -1/2`), exact up to `n = 30`.
pub fn bernoulli_numbers(n: usize) -> Vec<Ratio> {
    assert!(n <= 30, "Bernoulli table limited to n <= 30");
    let mut b = vec![Ratio::new(1, 1)];
    for m in 1..=n as i128 {
        let mut acc = Ratio::new(0, 1);
        for (k, bk) in b.iter().enumerate() {
            acc = acc.add(bk.scale(binomial(m + 1, k as i128)));
        }
        b.push(Ratio::new(-acc.num, acc.den * (m + 1)));
    }
    b
}

/// `coth(x)` for `x > 0`, accurate in every regime.
pub fn coth(x: f64) -> f64 {
    if x < 0.05 {
        // x coth x = 1 + x²/3 − x⁴/45 + 2x⁶/945 − x⁸/4725 + 2x¹⁰/93555
        let x2 = x * x;
        let series = 1.0 + x2 * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (-1.0 / 4725.0 + x2 * 2.0 / 93555.0))));
        series / x
    } else if x > 20.0 {
        let e = (-2.0 * x).exp();
        1.0 + 2.0 * e * (1.0 + e)
    } else {
        1.0 + 2.0 / (2.0 * x).exp_m1()
    }
}

/// `csch²(x)` for `x > 0`.
pub fn csch_sq(x: f64) -> f64 {
    if x > 20.0 {
        let e = (-2.0 * x).exp();
        4.0 * e * (1.0 + 2.0 * e)
    } else {
        let em = (2.0 * x).exp_m1();
        // sinh x = em / (2 e^x)
        let s = em / (2.0 * x.exp());
        1.0 / (s * s)
    }
}

/// Riemann zeta for real `s > 1`.
pub fn zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

/// Hurwitz zeta `sum_{n>=0} (n+q)^{-s}` for `s > 1`, `q > 0`, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    assert!(s > 1.0 && q > 0.0, "hurwitz_zeta needs s > 1 and q > 0");
    const N: usize = 12;
    let b = bernoulli_numbers(20);
    let mut head = super::sum::NeumaierSum::new();
    for k in 0..N {
        head.add((q + k as f64).powf(-s));
    }
    let m = q + N as f64;
    let mut tail = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s);
    // terms B_{2k}/(2k)! · s(s+1)...(s+2k−2) · m^{−s−2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    for k in 1..=10 {
        let term = b[2 * k].to_f64() / fact * rising * m.powf(-s - 2.0 * k as f64 + 1.0);
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
        rising *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
        fact *= (2.0 * k as f64 + 1.0) * (2.0 * k as f64 + 2.0);
    }
    head.add(tail);
    head.value()
}
