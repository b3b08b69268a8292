//! Evaluation of one configuration point per subcommand.

use std::f64::consts::PI;

use serde_json::{json, Value};

use casimir_optics::oracle::{exact_plate_pressure, exact_plate_thermal_force};
use casimir_optics::paths::path_families;
use casimir_optics::pressure::{
    f_normalization, pendulum_energy_torque, pendulum_force, plate_force_sphere_with, pressure_profile,
    SphereForceOptions,
};
use casimir_optics::thermal::{delta_p_study, plates_free_energy, plates_free_energy_force, thermal_pressure};
use casimir_optics::{Error, PathFamily, Result, Scene, SurfacePoint};

use crate::config::{Command, RunConfig, SceneSpec, SphereQuantity};

/// How a column converts to SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dim {
    /// Echo of an input, left in the user's units.
    Input,
    Dimensionless,
    /// Multiple of ħc/L^k.
    HbarC(i32),
}

#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub dim: Dim,
}

fn col(name: &str, dim: Dim) -> Column {
    Column { name: name.to_string(), dim }
}

/// Values at one sweep point: usually one row, one per reflection count for truncation.
pub struct Point {
    pub rows: Vec<Vec<f64>>,
    pub diagnostics: Value,
}

fn sphere_families(scene: &Scene, cfg: &RunConfig) -> Result<Vec<PathFamily>> {
    match &cfg.scene {
        SceneSpec::SpherePlate { families: Some(labels), .. } => {
            labels.iter().map(|l| PathFamily::from_label(scene, l)).collect()
        }
        _ => Ok(path_families(scene, cfg.max_order())),
    }
}

pub fn columns(cfg: &RunConfig) -> std::result::Result<Vec<Column>, String> {
    use Dim::*;
    let cols = match cfg.command {
        Command::Plates => vec![
            col("a", Input),
            col("T", Input),
            col("pressure", HbarC(4)),
            col("oracle", HbarC(4)),
            col("truncation_estimate", HbarC(4)),
        ],
        Command::Pendulum => vec![
            col("a", Input),
            col("w", Input),
            col("theta", Input),
            col("force", HbarC(3)),
            col("energy", HbarC(2)),
            col("torque", HbarC(2)),
            col("torque_error", HbarC(2)),
        ],
        Command::SpherePlate => match cfg.sphere_quantity() {
            SphereQuantity::Profile => {
                let SceneSpec::SpherePlate { a, radius, .. } = cfg.scene else { unreachable!() };
                let scene = Scene::sphere_plate(a, radius).map_err(|e| e.to_string())?;
                let fams = sphere_families(&scene, cfg).map_err(|e| e.to_string())?;
                let mut c = vec![col("a", Input), col("R", Input), col("rho", Input), col("T", Input), col("pressure", HbarC(4))];
                c.extend(fams.iter().map(|f| col(&format!("pressure_{}", f.label), HbarC(4))));
                c
            }
            SphereQuantity::Force => vec![
                col("a", Input),
                col("R", Input),
                col("T", Input),
                col("force", HbarC(2)),
                col("pfa_ratio", Dimensionless),
                col("f", Dimensionless),
                col("quadrature_error", HbarC(2)),
                col("truncation_estimate", HbarC(2)),
            ],
        },
        Command::FreeEnergy => vec![
            col("a", Input),
            col("T", Input),
            col("tau", Dimensionless),
            col("f0", HbarC(1)),
            col("f_odd", HbarC(1)),
            col("f_even", HbarC(1)),
            col("free_energy", HbarC(1)),
            col("casimir_energy", HbarC(1)),
            col("force_per_area", HbarC(4)),
            col("oracle", HbarC(4)),
        ],
        Command::ThermalF => vec![
            col("a", Input),
            col("R", Input),
            col("beta_tilde", Input),
            col("a_over_beta_tilde", Dimensionless),
            col("f_thermal", Dimensionless),
            col("f_zero", Dimensionless),
            col("ratio", Dimensionless),
        ],
        Command::Truncation => vec![
            col("a", Input),
            col("beta", Input),
            col("X", Input),
            col("delta_p1_partial", HbarC(4)),
            col("relative_remainder", Dimensionless),
            col("bracket_remainder", Dimensionless),
        ],
        Command::Validate => return Err("validate has no tabular output".into()),
    };
    Ok(cols)
}

/// Evaluates `cfg` (already expanded to a single sweep point).
pub fn evaluate(cfg: &RunConfig) -> Result<Point> {
    let params = cfg.temperature.params()?;
    let t = params.temperature;
    match (cfg.command, &cfg.scene) {
        (Command::Plates, &SceneSpec::Plates { a, x, .. }) => {
            let scene = Scene::parallel_plates(a)?;
            let (p, report) = thermal_pressure(&scene, &SurfacePoint::on_plate(x), params, cfg.max_order())?;
            let oracle = if params.is_zero() { exact_plate_pressure(a)? } else { exact_plate_thermal_force(a, t)? };
            Ok(Point {
                rows: vec![vec![a, t, p, oracle.value, report.truncation_estimate]],
                diagnostics: json!({ "report": report, "oracle": oracle }),
            })
        }
        (Command::Pendulum, &SceneSpec::Pendulum { a, w, theta }) => {
            let scene = Scene::pendulum(a, w, theta)?;
            let fams = path_families(&scene, cfg.max_order());
            let tol = cfg.rel_tol();
            let (force, report) = pendulum_force(&scene, &fams, tol)?;
            let e = pendulum_energy_torque(&scene, &fams, tol)?;
            Ok(Point {
                rows: vec![vec![a, w, theta, force, e.energy, e.torque, e.torque_error]],
                diagnostics: json!({ "report": report }),
            })
        }
        (Command::SpherePlate, &SceneSpec::SpherePlate { a, radius, rho, .. }) => {
            let scene = Scene::sphere_plate(a, radius)?;
            let fams = sphere_families(&scene, cfg)?;
            match cfg.sphere_quantity() {
                SphereQuantity::Profile => {
                    let per = pressure_profile(&scene, &fams, params.weight(), &[rho])?.remove(0);
                    let absent: Vec<&str> =
                        fams.iter().zip(&per).filter(|(_, v)| v.is_none()).map(|(f, _)| f.label.as_str()).collect();
                    let values: Vec<f64> = per.iter().map(|v| v.unwrap_or(0.0)).collect();
                    let mut row = vec![a, radius, rho, t, values.iter().sum()];
                    row.extend(values);
                    Ok(Point { rows: vec![row], diagnostics: json!({ "absent": absent }) })
                }
                SphereQuantity::Force => {
                    let opts = SphereForceOptions { rho_max: cfg.rho_max, rel_tol: cfg.rel_tol(), fixed_bounce: false };
                    let (force, report) = plate_force_sphere_with(&scene, &fams, params.weight(), &opts)?;
                    let ratio = force / -pfa(a, radius);
                    let norm = f_normalization(&fams);
                    if norm == 0.0 {
                        return Err(Error::InvalidInput("family set has no proximity-force share".into()));
                    }
                    Ok(Point {
                        rows: vec![vec![
                            a,
                            radius,
                            t,
                            force,
                            ratio,
                            ratio / norm,
                            report.quadrature_error,
                            report.truncation_estimate,
                        ]],
                        diagnostics: json!({ "report": report }),
                    })
                }
            }
        }
        (Command::FreeEnergy, &SceneSpec::Plates { a, area, volume, .. }) => {
            let volume = volume.unwrap_or(a * area);
            let n = cfg.max_order() as usize;
            let e = plates_free_energy(a, area, volume, params, n)?;
            let force = plates_free_energy_force(a, params, n)?;
            let oracle = if params.is_zero() { exact_plate_pressure(a)? } else { exact_plate_thermal_force(a, t)? };
            let tau = if params.is_zero() { 0.0 } else { params.tau(a) };
            Ok(Point {
                rows: vec![vec![a, t, tau, e.f0, e.f_odd, e.f_even, e.total, e.casimir_energy, force, oracle.value]],
                diagnostics: json!({ "breakdown": e, "oracle": oracle }),
            })
        }
        (Command::ThermalF, &SceneSpec::SpherePlate { a, radius, .. }) => {
            let scene = Scene::sphere_plate(a, radius)?;
            let fams = sphere_families(&scene, cfg)?;
            let opts = SphereForceOptions { rho_max: cfg.rho_max, rel_tol: cfg.rel_tol(), fixed_bounce: false };
            let (hot, report) = plate_force_sphere_with(&scene, &fams, params.weight(), &opts)?;
            let (cold, _) = plate_force_sphere_with(&scene, &fams, casimir_optics::paths::Weight::ZeroTemperature, &opts)?;
            let (f_hot, f_cold) = (hot / -pfa(a, radius), cold / -pfa(a, radius));
            let bt = params.beta_tilde;
            let mut warnings = report.warnings.clone();
            if radius < 10.0 * bt || radius < 10.0 * a {
                warnings.push("outside the regime R >> a, R >> thermal length".into());
            }
            Ok(Point {
                rows: vec![vec![a, radius, bt, a / bt, f_hot, f_cold, f_hot / f_cold]],
                diagnostics: json!({ "report": report, "warnings": warnings }),
            })
        }
        (Command::Truncation, &SceneSpec::Truncation { a, beta, x_max, m_max }) => {
            let s = delta_p_study(a, beta, m_max, x_max)?;
            let rows = (1..=x_max)
                .map(|x| {
                    vec![
                        a,
                        beta,
                        x as f64,
                        s.partial(x).unwrap_or(0.0),
                        s.relative_remainder(x).unwrap_or(0.0),
                        s.bracket_remainder(x).unwrap_or(0.0),
                    ]
                })
                .collect();
            let limit = -PI * PI / (90.0 * beta.powi(4));
            Ok(Point {
                rows,
                diagnostics: json!({
                    "tau": s.tau,
                    "delta_p1": s.delta_p1,
                    "delta_p1_closed": s.delta_p1_closed,
                    "delta_p": s.delta_p,
                    "delta_p_limit": limit,
                    "m_terms": s.m_terms,
                    "x_critical": s.x_critical,
                    "x_critical_discrete": s.x_critical_discrete,
                }),
            })
        }
        _ => Err(Error::InvalidInput(format!("{} cannot run on a {} scene", cfg.command.name(), cfg.scene.kind()))),
    }
}

/// π³R/720a³
fn pfa(a: f64, radius: f64) -> f64 {
    PI.powi(3) * radius / (720.0 * a.powi(3))
}
