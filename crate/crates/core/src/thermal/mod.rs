//! Finite-temperature corrections: thermal weights, the free-energy bracket,
//! per-path free energies, parallel-plate thermodynamics, thermal pressures
//! and the low-temperature reflection-sum study.

mod delta_p;
mod plates;

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Scene, SurfacePoint};
use crate::numerics::special::{bernoulli_numbers, coth, csch_sq};
use crate::numerics::{try_integrate_with_breaks, Jet2, QuadOptions, Quadrature};
use crate::paths::{enlargement_half, path_families, path_length, PathFamily, Weight};
use crate::pressure::{f_normalization, plate_force_sphere_with, sum_pressure, ForceReport, SphereForceOptions};

pub use delta_p::{delta_p_m1_closed_form, delta_p_study, DeltaPStudy};
pub use plates::{plates_free_energy, plates_free_energy_force, plates_low_t_residual, FreeEnergyBreakdown};

/// Temperature in its three guises. β̃ = ∞ means T = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pub temperature: f64,
    /// β̃ = 1/(πT)
    pub beta_tilde: f64,
    /// β = 1/T
    pub beta: f64,
}

impl ThermalParams {
    pub fn from_temperature(t: f64) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!("temperature must be finite and non-negative, got {t}")));
        }
        Ok(ThermalParams { temperature: t, beta_tilde: 1.0 / (PI * t), beta: 1.0 / t })
    }

    pub fn from_beta_tilde(bt: f64) -> Result<Self> {
        if !(bt > 0.0) {
            return Err(Error::invalid(format!("thermal length must be positive, got {bt}")));
        }
        Ok(ThermalParams { temperature: 1.0 / (PI * bt), beta_tilde: bt, beta: PI * bt })
    }

    /// Temperature at which a gap `a` has τ = 2a/β̃ equal to `tau`.
    pub fn from_tau(tau: f64, a: f64) -> Result<Self> {
        if !(tau > 0.0 && a > 0.0) {
            return Err(Error::invalid("tau and gap must be positive"));
        }
        Self::from_beta_tilde(2.0 * a / tau)
    }

    /// τ = 2a/β̃
    pub fn tau(&self, a: f64) -> f64 {
        2.0 * a / self.beta_tilde
    }

    pub fn is_zero(&self) -> bool {
        self.beta_tilde.is_infinite()
    }

    pub fn weight(&self) -> Weight {
        if self.is_zero() {
            Weight::ZeroTemperature
        } else {
            Weight::Thermal { beta_tilde: self.beta_tilde }
        }
    }
}

/// coth(ℓ/β̃)/β̃, tending to 1/ℓ as β̃ → ∞.
pub fn thermal_weight(ell: f64, beta_tilde: f64) -> f64 {
    if beta_tilde.is_infinite() {
        return 1.0 / ell;
    }
    coth(ell / beta_tilde) / beta_tilde
}

/// [`thermal_weight`] composed with a jet in ℓ.
pub fn thermal_weight_jet(ell: Jet2, beta_tilde: f64) -> Jet2 {
    if beta_tilde.is_infinite() {
        return ell.recip();
    }
    let u = ell.v / beta_tilde;
    let (c, s2) = (coth(u), csch_sq(u));
    let b = beta_tilde;
    ell.chain(c / b, -s2 / (b * b), 2.0 * s2 * c / (b * b * b))
}

const BRACKET_SWITCH: f64 = 0.1;
const SERIES_TERMS: usize = 10;

/// Coefficients c_n of B(x) = Σ_{n≥2} c_n x^{2n}.
fn bracket_series() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let b = bernoulli_numbers(2 * SERIES_TERMS + 2);
        let mut fact = 1.0f64;
        let mut out = vec![0.0; SERIES_TERMS + 2];
        for n in 1..=SERIES_TERMS + 1 {
            fact *= (2 * n - 1) as f64 * (2 * n) as f64;
            let a_n = 2f64.powi(2 * n as i32) * b[2 * n].to_f64() / fact;
            out[n] = a_n * (2.0 - 2.0 * n as f64);
        }
        out
    })
}

/// B(x) = −2 + x(coth x + x csch²x).
pub fn bracket(x: f64) -> f64 {
    let x = x.abs();
    if x < BRACKET_SWITCH {
        bracket_near_zero(x)
    } else {
        bracket_direct(x)
    }
}

fn bracket_near_zero(x: f64) -> f64 {
    let x2 = x * x;
    let c = bracket_series();
    let mut acc = 0.0;
    for n in (2..=SERIES_TERMS).rev() {
        acc = acc * x2 + c[n];
    }
    acc * x2 * x2
}

fn bracket_direct(x: f64) -> f64 {
    -2.0 + x * (coth(x) + x * csch_sq(x))
}

/// B′(x) = coth x + x csch²x − 2x² csch²x coth x.
pub fn bracket_derivative(x: f64) -> f64 {
    if x < BRACKET_SWITCH {
        let x2 = x * x;
        let c = bracket_series();
        let mut acc = 0.0;
        for n in (2..=SERIES_TERMS).rev() {
            acc = acc * x2 + c[n] * 2.0 * n as f64;
        }
        acc * x2 * x
    } else {
        let (c, s2) = (coth(x), csch_sq(x));
        c + x * s2 - 2.0 * x * x * s2 * c
    }
}

/// B(x)/(2x⁴), finite at the origin where it tends to 1/45.
pub fn nu_integrand(x: f64) -> f64 {
    if x < BRACKET_SWITCH {
        let x2 = x * x;
        let c = bracket_series();
        let mut acc = 0.0;
        for n in (2..=SERIES_TERMS).rev() {
            acc = acc * x2 + c[n];
        }
        0.5 * acc
    } else {
        bracket_direct(x) / (2.0 * x.powi(4))
    }
}

/// ν = ∫₀^∞ B(x)/(2x⁴) dx.
pub fn nu_constant(tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::invalid(format!("tolerance must lie in (0, 1e-6], got {tol}")));
    }
    const CUT: f64 = 60.0;
    let q = try_integrate_with_breaks(
        |x| Ok(nu_integrand(x)),
        &[0.0, 1.0, 5.0, 20.0, CUT],
        QuadOptions { rel_tol: tol * 1e-2, abs_tol: 0.0, max_panels: 4000 },
    )?;
    if !q.converged {
        return Err(Error::numeric("nu_constant", format!("quadrature error {:e}", q.error)));
    }
    // beyond the cut B(x) = x − 2 up to e^{−2x}
    let tail = 1.0 / (4.0 * CUT * CUT) - 1.0 / (3.0 * CUT.powi(3));
    Ok(q.value + tail)
}

/// Integrand of the per-path free energy at one point, without the sign:
/// Δ^{1/2}·B(ℓ/β̃)/(2ℓ³).
pub fn free_energy_density(delta_half: f64, ell: f64, beta_tilde: f64) -> f64 {
    let x = ell / beta_tilde;
    if x < BRACKET_SWITCH {
        // B(x)/(2ℓ³) = x⁴·(B/2x⁴)/ℓ³, finite as ℓ → 0 once multiplied by Δ^{1/2} ~ 1/ℓ
        delta_half * nu_integrand(x) * x.powi(4) / ell.powi(3)
    } else {
        delta_half * bracket(x) / (2.0 * ell.powi(3))
    }
}

/// A region of space over which a per-path free energy is integrated.
pub trait DomainSampler {
    /// ∫_D f d³x, with f evaluated at plate-referenced points.
    fn integrate(&self, f: &mut dyn FnMut(SurfacePoint) -> Result<f64>, opts: QuadOptions) -> Result<Quadrature>;
}

/// Slab between parallel plates: z ∈ [0, a] over area `area`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateSlab {
    pub a: f64,
    pub area: f64,
}

impl DomainSampler for PlateSlab {
    fn integrate(&self, f: &mut dyn FnMut(SurfacePoint) -> Result<f64>, opts: QuadOptions) -> Result<Quadrature> {
        let q = try_integrate_with_breaks(|z| f(SurfacePoint::on_plate(0.0).offset(z)), &[0.0, self.a], opts)?;
        Ok(Quadrature { value: q.value * self.area, error: q.error * self.area, ..q })
    }
}

/// Free energy of one path family over `domain`:
/// (−1)^{n_r+1}/(2π²) ∫ Δ^{1/2} B(ℓ/β̃)/(2ℓ³) d³x.
pub fn path_free_energy(
    scene: &Scene,
    family: &PathFamily,
    domain: &dyn DomainSampler,
    params: ThermalParams,
    opts: QuadOptions,
) -> Result<f64> {
    if params.is_zero() {
        return Ok(0.0);
    }
    let mut f = |p: SurfacePoint| -> Result<f64> {
        let ell = path_length(scene, family, &p)?;
        let half = enlargement_half(scene, family, &p)?;
        Ok(free_energy_density(half, ell, params.beta_tilde))
    };
    let q = domain.integrate(&mut f, opts)?;
    Ok(-family.sign() * q.value / (2.0 * PI * PI))
}

fn check_on_surface(point: &SurfacePoint) -> Result<()> {
    if point.z != 0.0 {
        return Err(Error::invalid("pressure is evaluated on the plate surface (z = 0)"));
    }
    Ok(())
}

/// Thermal pressure: the zero-temperature sum with 1/ℓ replaced by coth(ℓ/β̃)/β̃.
pub fn thermal_pressure(
    scene: &Scene,
    point: &SurfacePoint,
    params: ThermalParams,
    max_order: u32,
) -> Result<(f64, ForceReport)> {
    check_on_surface(point)?;
    if max_order < 1 {
        return Err(Error::invalid("max_order must be at least 1"));
    }
    let families = path_families(scene, max_order);
    let tail = matches!(scene, Scene::ParallelPlates { .. });
    sum_pressure(scene, point.coord, &families, params.weight(), tail)
}

/// Strict high-temperature limit: Δ^{1/2}/ℓ replaced by Δ^{1/2}·πT.
pub fn classical_pressure(
    scene: &Scene,
    point: &SurfacePoint,
    temperature: f64,
    max_order: u32,
) -> Result<(f64, ForceReport)> {
    check_on_surface(point)?;
    if !(temperature > 0.0) {
        return Err(Error::invalid("classical limit needs T > 0"));
    }
    let bt = ThermalParams::from_temperature(temperature)?.beta_tilde;
    let families = path_families(scene, max_order.max(1));
    let tail = matches!(scene, Scene::ParallelPlates { .. });
    sum_pressure(scene, point.coord, &families, Weight::Classical { beta_tilde: bt }, tail)
}

/// Sphere–plate force at finite temperature by radial quadrature of the thermal pressure.
pub fn thermal_sphere_force(
    scene: &Scene,
    params: ThermalParams,
    max_order: u32,
    rho_max: Option<f64>,
) -> Result<(f64, ForceReport)> {
    let Scene::SpherePlate { a, radius } = *scene else {
        return Err(Error::invalid("thermal sphere force needs a sphere–plate scene"));
    };
    let families = path_families(scene, max_order);
    let opts = SphereForceOptions { rho_max, ..SphereForceOptions::default() };
    let (f, mut report) = plate_force_sphere_with(scene, &families, params.weight(), &opts)?;
    if !params.is_zero() && (radius < 10.0 * params.beta_tilde || radius < 10.0 * a) {
        report.warnings.push(format!(
            "outside the regime R >> a, R >> thermal length (R = {radius}, a = {a}, thermal length = {})",
            params.beta_tilde
        ));
    }
    Ok((f, report))
}

/// F/(−π³R/720a³) at finite temperature.
///
/// Unlike the zero-temperature f-factor this is not divided by the truncation
/// normalization, so its small-a/R value is that normalization (≈ 0.98 at 5p).
pub fn thermal_f_factor(scene: &Scene, params: ThermalParams, max_order: u32) -> Result<f64> {
    let Scene::SpherePlate { a, radius } = *scene else {
        return Err(Error::invalid("f-factor needs a sphere–plate scene"));
    };
    let (f, _) = thermal_sphere_force(scene, params, max_order, None)?;
    Ok(f / (-PI.powi(3) * radius / (720.0 * a.powi(3))))
}

/// Normalization that the zero-temperature f-factor divides out (exposed for comparisons).
pub fn truncation_normalization(scene: &Scene, max_order: u32) -> f64 {
    f_normalization(&path_families(scene, max_order))
}
