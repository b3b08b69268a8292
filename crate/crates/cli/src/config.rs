//! Run configuration: JSON file, flag overlay, sweeps.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use casimir_optics::ThermalParams;

/// Subcommand a configuration belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Plates,
    Pendulum,
    SpherePlate,
    FreeEnergy,
    ThermalF,
    Truncation,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Plates => "plates",
            Command::Pendulum => "pendulum",
            Command::SpherePlate => "sphere-plate",
            Command::FreeEnergy => "free-energy",
            Command::ThermalF => "thermal-f",
            Command::Truncation => "truncation",
            Command::Validate => "validate",
        }
    }

    /// Scene kind the command works on.
    pub fn scene_kind(self) -> &'static str {
        match self {
            Command::Plates | Command::FreeEnergy | Command::Validate => "plates",
            Command::Pendulum => "pendulum",
            Command::SpherePlate | Command::ThermalF => "sphere-plate",
            Command::Truncation => "truncation",
        }
    }
}

/// What a sphere–plate run reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereQuantity {
    /// Pressure on the plate at radius ρ, per family.
    Profile,
    /// Force on the plate and the f-factor.
    Force,
}

fn zero() -> f64 {
    0.0
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SceneSpec {
    Plates {
        a: f64,
        /// Position along the plate; the pressure is the same everywhere.
        #[serde(default = "zero")]
        x: f64,
        #[serde(default = "one")]
        area: f64,
        /// Total volume for the black-body term; the slab a·area when unset.
        #[serde(default)]
        volume: Option<f64>,
    },
    Pendulum {
        a: f64,
        w: f64,
        theta: f64,
    },
    SpherePlate {
        a: f64,
        radius: f64,
        #[serde(default = "zero")]
        rho: f64,
        #[serde(default)]
        quantity: Option<SphereQuantity>,
        /// Family labels; all families up to the maximum order when unset.
        #[serde(default)]
        families: Option<Vec<String>>,
    },
    Truncation {
        a: f64,
        beta: f64,
        #[serde(default = "default_x_max")]
        x_max: usize,
        #[serde(default = "default_m_max")]
        m_max: usize,
    },
}

fn default_x_max() -> usize {
    40
}

fn default_m_max() -> usize {
    10_000
}

impl SceneSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SceneSpec::Plates { .. } => "plates",
            SceneSpec::Pendulum { .. } => "pendulum",
            SceneSpec::SpherePlate { .. } => "sphere-plate",
            SceneSpec::Truncation { .. } => "truncation",
        }
    }
}

/// Temperature as T or β̃ = 1/(πT).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum Temperature {
    #[default]
    #[serde(rename = "zero")]
    Zero,
    T(f64),
    #[serde(rename = "beta_tilde")]
    BetaTilde(f64),
}

impl Temperature {
    pub fn params(self) -> casimir_optics::Result<ThermalParams> {
        match self {
            Temperature::Zero => ThermalParams::from_temperature(0.0),
            Temperature::T(t) => ThermalParams::from_temperature(t),
            Temperature::BetaTilde(b) => ThermalParams::from_beta_tilde(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub spacing: Spacing,
}

impl Sweep {
    /// Parses `param` and `lo:hi:n:lin|log`.
    pub fn parse(param: &str, range: &str) -> Result<Sweep, String> {
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("sweep range {range:?} is not lo:hi:n:lin|log"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("bad number {s:?} in sweep range"));
        let spacing = match parts[3] {
            "lin" => Spacing::Lin,
            "log" => Spacing::Log,
            s => return Err(format!("sweep spacing must be lin or log, got {s:?}")),
        };
        let n = parts[2].parse().map_err(|_| format!("bad point count {:?}", parts[2]))?;
        Ok(Sweep { param: param.to_string(), lo: num(parts[0])?, hi: num(parts[1])?, n, spacing })
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 {
            return Err("sweep needs at least one point".into());
        }
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(format!("sweep range [{}, {}] is empty", self.lo, self.hi));
        }
        if self.n > 1 && self.lo == self.hi {
            return Err("sweep with several points needs lo < hi".into());
        }
        if self.spacing == Spacing::Log && self.lo <= 0.0 {
            return Err("log sweep needs lo > 0".into());
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Lin => self.lo + (self.hi - self.lo) * t,
                    Spacing::Log => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * t).exp(),
                }
            })
            .enumerate()
            // endpoints exactly as given
            .map(|(i, x)| if i == 0 { self.lo } else if i == self.n - 1 { self.hi } else { x.clamp(self.lo, self.hi) })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub scene: SceneSpec,
    #[serde(default)]
    pub temperature: Temperature,
    /// Highest reflection order; a per-command default when unset.
    #[serde(default)]
    pub max_order: Option<u32>,
    /// Quadrature tolerance; a per-command default when unset.
    #[serde(default)]
    pub rel_tol: Option<f64>,
    /// Upper end of the sphere–plate radial quadrature.
    #[serde(default)]
    pub rho_max: Option<f64>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Where a numeric failure is described; next to the output by default.
    #[serde(default)]
    pub diagnostics: Option<PathBuf>,
    /// Metres per length unit. Computed quantities are then reported in SI.
    #[serde(default)]
    pub length_unit: Option<f64>,
}

fn positive(name: &str, v: f64) -> Result<(), String> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(format!("{name} must be positive and finite, got {v}"))
    }
}

impl RunConfig {
    pub fn max_order(&self) -> u32 {
        self.max_order.unwrap_or(match self.command {
            Command::Plates | Command::Validate => 40,
            Command::Pendulum => 21,
            Command::FreeEnergy => 0,
            _ => 5,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol.unwrap_or(match self.command {
            Command::Pendulum => 1e-10,
            _ => 1e-7,
        })
    }

    pub fn sphere_quantity(&self) -> SphereQuantity {
        match &self.scene {
            SceneSpec::SpherePlate { quantity: Some(q), .. } => *q,
            _ if self.sweep.as_ref().is_some_and(|s| s.param != "rho") => SphereQuantity::Force,
            SceneSpec::SpherePlate { rho, .. } if *rho == 0.0 && self.sweep.is_none() => SphereQuantity::Force,
            _ => SphereQuantity::Profile,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.scene.kind() != self.command.scene_kind() {
            return Err(format!(
                "{} needs a {} scene, the configuration has {}",
                self.command.name(),
                self.command.scene_kind(),
                self.scene.kind()
            ));
        }
        if let Some(t) = self.rel_tol {
            positive("rel_tol", t)?;
        }
        if let Some(r) = self.rho_max {
            positive("rho_max", r)?;
        }
        if let Some(l) = self.length_unit {
            positive("length_unit", l)?;
        }
        match self.temperature {
            Temperature::T(t) if !(t >= 0.0 && t.is_finite()) => return Err(format!("T must be finite and >= 0, got {t}")),
            Temperature::BetaTilde(b) => positive("beta_tilde", b)?,
            _ => {}
        }
        match self.command {
            Command::Pendulum if self.temperature.params().is_ok_and(|p| !p.is_zero()) => {
                return Err("the pendulum is computed at zero temperature only".into())
            }
            Command::ThermalF if self.temperature.params().map_or(true, |p| p.is_zero()) => {
                return Err("thermal-f needs a non-zero temperature (--T or --beta-tilde)".into())
            }
            _ => {}
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
            let mut probe = self.clone();
            probe.set(&s.param, s.lo)?;
        }
        Ok(())
    }

    /// Sets the swept parameter `param` to `v`.
    pub fn set(&mut self, param: &str, v: f64) -> Result<(), String> {
        let bad = || format!("cannot sweep {param:?} for {}", self.command.name());
        match param {
            "T" => {
                self.temperature = Temperature::T(v);
                return Ok(());
            }
            "beta-tilde" | "beta_tilde" => {
                self.temperature = Temperature::BetaTilde(v);
                return Ok(());
            }
            _ => {}
        }
        let slot = match (&mut self.scene, param) {
            (SceneSpec::Plates { a, .. }, "a")
            | (SceneSpec::Pendulum { a, .. }, "a")
            | (SceneSpec::SpherePlate { a, .. }, "a")
            | (SceneSpec::Truncation { a, .. }, "a") => a,
            (SceneSpec::Plates { x, .. }, "x") => x,
            (SceneSpec::Pendulum { w, .. }, "w") => w,
            (SceneSpec::Pendulum { theta, .. }, "theta") => theta,
            (SceneSpec::SpherePlate { radius, .. }, "R" | "radius") => radius,
            (SceneSpec::SpherePlate { rho, .. }, "rho") => rho,
            (SceneSpec::Truncation { beta, .. }, "beta") => beta,
            _ => return Err(bad()),
        };
        *slot = v;
        Ok(())
    }

    /// One configuration per sweep point, or just this one.
    pub fn expand(&self) -> Vec<(Option<f64>, RunConfig)> {
        match &self.sweep {
            None => vec![(None, self.clone())],
            Some(s) => s
                .points()
                .into_iter()
                .map(|v| {
                    let mut c = self.clone();
                    c.set(&s.param, v).expect("sweep parameter checked in validate");
                    (Some(v), c)
                })
                .collect(),
        }
    }
}

/// Overlays `top` on `base`; objects merge key by key, everything else is replaced.
pub fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                // a temperature given by flag replaces the file's choice of T or β̃
                if k == "temperature" {
                    b.insert(k, v);
                } else {
                    merge(b.entry(k).or_insert(Value::Null), v);
                }
            }
        }
        (b, t) => *b = t,
    }
}

/// Builds the configuration from an optional JSON file and flag overrides.
pub fn assemble(command: Command, file: Option<Value>, flags: Map<String, Value>) -> Result<RunConfig, String> {
    let mut base = file.unwrap_or_else(|| Value::Object(Map::new()));
    let Value::Object(obj) = &mut base else {
        return Err("configuration file must hold a JSON object".into());
    };
    match obj.get("command") {
        Some(Value::String(c)) if c != command.name() => {
            return Err(format!("configuration is for {c:?}, not {:?}", command.name()))
        }
        Some(Value::String(_)) | None => {}
        Some(other) => return Err(format!("command must be a string, got {other}")),
    }
    obj.insert("command".into(), Value::String(command.name().into()));
    let scene = obj.entry("scene").or_insert_with(|| Value::Object(Map::new()));
    if let Value::Object(s) = scene {
        s.entry("kind").or_insert_with(|| Value::String(command.scene_kind().into()));
    }
    merge(&mut base, Value::Object(flags));
    // a swept scene parameter need not be given separately
    let swept = base.pointer("/sweep/param").and_then(Value::as_str).map(str::to_string);
    let lo = base.pointer("/sweep/lo").cloned();
    if let (Some(param), Some(lo), Some(Value::Object(s))) = (swept, lo, base.get_mut("scene")) {
        let key = if param == "R" { "radius".to_string() } else { param };
        if !matches!(key.as_str(), "T" | "beta-tilde" | "beta_tilde") {
            s.entry(key).or_insert(lo);
        }
    }
    let cfg: RunConfig = serde_json::from_value(base).map_err(|e| format!("invalid configuration: {e}"))?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sweep_points() {
        let s = Sweep::parse("rho", "0.001:10:5:log").unwrap();
        let p = s.points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0], 0.001);
        assert_eq!(p[4], 10.0);
        assert!((p[1] - 0.01).abs() < 1e-15);
        assert!(Sweep::parse("a", "1:2:3").is_err());
        assert!(Sweep::parse("a", "0:2:3:log").unwrap().validate().is_err());
        assert!(Sweep::parse("a", "2:1:3:lin").unwrap().validate().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = json!({"command": "plates", "scene": {"a": 1.0, "x": 0.5}, "temperature": {"T": 0.2}});
        let mut flags = Map::new();
        flags.insert("scene".into(), json!({"a": 2.0}));
        flags.insert("temperature".into(), json!({"beta_tilde": 3.0}));
        let cfg = assemble(Command::Plates, Some(file), flags).unwrap();
        assert_eq!(cfg.scene, SceneSpec::Plates { a: 2.0, x: 0.5, area: 1.0, volume: None });
        assert_eq!(cfg.temperature, Temperature::BetaTilde(3.0));
    }

    #[test]
    fn rejects_mismatched_command_and_scene() {
        let file = json!({"command": "pendulum", "scene": {"a": 1.0, "w": 1.0, "theta": 0.3}});
        assert!(assemble(Command::Plates, Some(file), Map::new()).is_err());
        let file = json!({"scene": {"kind": "pendulum", "a": 1.0, "w": 1.0, "theta": 0.3}});
        assert!(assemble(Command::Plates, Some(file), Map::new()).is_err());
    }

    #[test]
    fn sweep_parameter_must_apply() {
        let mut flags = Map::new();
        flags.insert("scene".into(), json!({"a": 1.0}));
        flags.insert("sweep".into(), json!({"param": "theta", "lo": 0.1, "hi": 0.2, "n": 2, "spacing": "lin"}));
        assert!(assemble(Command::Plates, None, flags).is_err());
    }
}
