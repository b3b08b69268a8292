//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::sum::NeumaierSum;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-8, abs_tol: 0.0, max_panels: 2000 }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        QuadOptions { rel_tol, ..Default::default() }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub evaluations: usize,
    pub converged: bool,
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F>(f: &mut F, lo: f64, hi: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs_sum = WGK[10] * fc.abs();
    let mut fv = [(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::numeric(
            "quadrature",
            format!("non-finite integrand on [{lo:e}, {hi:e}]"),
        ));
    }
    Ok(Panel { lo, hi, value, error })
}

/// Integrates a fallible integrand over the panels delimited by `points`.
///
/// Panels are bisected, worst error first, until the summed error meets the
/// tolerance or `max_panels` is reached; in the latter case `converged` is false.
pub fn try_integrate_with_breaks<F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    if points.len() < 2 {
        return Err(Error::invalid("quadrature needs at least two break points"));
    }
    if points.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("quadrature break points must be strictly increasing"));
    }
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        heap.push(kronrod21(&mut f, w[0], w[1])?);
    }
    let mut evaluations = 21 * heap.len();
    loop {
        let mut value = NeumaierSum::new();
        let mut error = NeumaierSum::new();
        for p in heap.iter() {
            value.add(p.value);
            error.add(p.error);
        }
        let (value, error) = (value.value(), error.value());
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        let panels = heap.len();
        if error <= target || panels >= opts.max_panels {
            return Ok(Quadrature { value, error, panels, evaluations, converged: error <= target });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            heap.push(worst);
            return Ok(Quadrature { value, error, panels, evaluations, converged: false });
        }
        heap.push(kronrod21(&mut f, worst.lo, mid)?);
        heap.push(kronrod21(&mut f, mid, worst.hi)?);
        evaluations += 42;
    }
}

pub fn try_integrate<F>(f: F, lo: f64, hi: f64, opts: QuadOptions) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_integrate_with_breaks(f, &[lo, hi], opts)
}

pub fn integrate<F>(mut f: F, lo: f64, hi: f64, opts: QuadOptions) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_with_breaks(|x| Ok(f(x)), &[lo, hi], opts)
}
