//! Oracle comparison suite behind `casimir validate`.

use rayon::prelude::*;

use casimir_optics::oracle::{exact_plate_pressure, exact_plate_thermal_force};
use casimir_optics::thermal::{plates_free_energy_force, thermal_pressure};
use casimir_optics::{Result, Scene, SurfacePoint, ThermalParams};

pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub tol: f64,
}

impl Check {
    pub fn rel_err(&self) -> f64 {
        ((self.value - self.reference) / self.reference).abs()
    }

    pub fn pass(&self) -> bool {
        self.rel_err() <= self.tol
    }
}

fn zero_t(a: f64) -> Result<Check> {
    let scene = Scene::parallel_plates(a)?;
    let (p, _) = thermal_pressure(&scene, &SurfacePoint::on_plate(0.0), ThermalParams::from_temperature(0.0)?, 40)?;
    Ok(Check { name: format!("plates T=0 a={a}"), value: p, reference: exact_plate_pressure(a)?.value, tol: 1e-6 })
}

fn thermal(tau: f64) -> Result<Check> {
    let params = ThermalParams::from_tau(tau, 1.0)?;
    let scene = Scene::parallel_plates(1.0)?;
    let (p, _) = thermal_pressure(&scene, &SurfacePoint::on_plate(0.0), params, 2001)?;
    let exact = exact_plate_thermal_force(1.0, params.temperature)?.value;
    Ok(Check { name: format!("plates pressure tau={tau}"), value: p, reference: exact, tol: 1e-6 })
}

fn free_energy(tau: f64) -> Result<Check> {
    let params = ThermalParams::from_tau(tau, 1.0)?;
    let f = plates_free_energy_force(1.0, params, 0)?;
    let exact = exact_plate_thermal_force(1.0, params.temperature)?.value;
    Ok(Check { name: format!("plates free-energy force tau={tau}"), value: f, reference: exact, tol: 1e-6 })
}

type Job = Box<dyn Fn() -> Result<Check> + Sync>;

/// Runs every comparison; a numeric failure counts as a failed check.
pub fn run() -> Vec<std::result::Result<Check, (String, String)>> {
    let mut jobs: Vec<(String, Job)> = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        jobs.push((format!("plates T=0 a={a}"), Box::new(move || zero_t(a))));
    }
    for tau in [0.1, 1.0, 10.0] {
        jobs.push((format!("plates pressure tau={tau}"), Box::new(move || thermal(tau))));
        jobs.push((format!("plates free-energy force tau={tau}"), Box::new(move || free_energy(tau))));
    }
    jobs.par_iter().map(|(name, job)| job().map_err(|e| (name.clone(), e.to_string()))).collect()
}

pub fn table(results: &[std::result::Result<Check, (String, String)>]) -> (String, bool) {
    let mut s = format!("{:<36} {:>24} {:>24} {:>10} {:>8}  result\n", "check", "value", "oracle", "rel_err", "tol");
    let mut all = true;
    for r in results {
        match r {
            Ok(c) => {
                all &= c.pass();
                s.push_str(&format!(
                    "{:<36} {:>24.16e} {:>24.16e} {:>10.2e} {:>8.0e}  {}\n",
                    c.name,
                    c.value,
                    c.reference,
                    c.rel_err(),
                    c.tol,
                    if c.pass() { "PASS" } else { "FAIL" }
                ));
            }
            Err((name, e)) => {
                all = false;
                s.push_str(&format!("{name:<36} error: {e}  FAIL\n"));
            }
        }
    }
    (s, all)
}
