//! `casimir`: command-line front end for casimir-optics.

mod compute;
mod config;
mod output;
mod validate;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use casimir_optics::Error;
use config::{assemble, Command, RunConfig, Sweep};
use output::{Output, ResultRow};

#[derive(Parser, Debug)]
#[command(name = "casimir", version, about = "Casimir pressures, forces and free energies in the optical approximation")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Pressure between parallel plates.
    #[command(allow_negative_numbers = true)]
    Plates {
        #[command(flatten)]
        scene: PlatesArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Force, energy and torque on a tilted plate of width w.
    #[command(allow_negative_numbers = true)]
    Pendulum {
        #[command(flatten)]
        scene: PendulumArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Sphere above a plate: pressure profile along ρ, or the total force.
    #[command(allow_negative_numbers = true)]
    SpherePlate {
        #[command(flatten)]
        scene: SphereArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Parallel-plate free energy and the force derived from it.
    #[command(allow_negative_numbers = true)]
    FreeEnergy {
        #[command(flatten)]
        scene: FreeEnergyArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Sphere–plate force at finite temperature relative to the proximity-force value.
    #[command(allow_negative_numbers = true)]
    ThermalF {
        #[command(flatten)]
        scene: ThermalFArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Partial reflection sums of the low-temperature plate correction.
    #[command(allow_negative_numbers = true)]
    Truncation {
        #[command(flatten)]
        scene: TruncationArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Compare against the exact parallel-plate results and print a pass/fail table.
    Validate,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Temperature with ħ = c = k_B = 1, in inverse length units
    #[arg(long = "T", conflicts_with = "beta_tilde")]
    t: Option<f64>,
    /// Thermal length β̃ = 1/(πT)
    #[arg(long = "beta-tilde")]
    beta_tilde: Option<f64>,
    /// Highest reflection order
    #[arg(long)]
    max_order: Option<u32>,
    /// Relative quadrature tolerance
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Upper end of the sphere–plate radial quadrature
    #[arg(long)]
    rho_max: Option<f64>,
    /// Sweep a parameter, e.g. `--sweep rho 0.001:10:400:log`
    #[arg(long, num_args = 2, value_names = ["PARAM", "LO:HI:N:lin|log"])]
    sweep: Option<Vec<String>>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output file; stdout when absent
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Where to describe a numeric failure
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Metres per length unit; computed quantities are then reported in SI
    #[arg(long)]
    length_unit: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum QuantityArg {
    Profile,
    Force,
}

#[derive(Args, Debug)]
struct PlatesArgs {
    /// Plate separation
    #[arg(long)]
    a: Option<f64>,
    /// Position on the lower plate
    #[arg(long)]
    x: Option<f64>,
}

#[derive(Args, Debug)]
struct PendulumArgs {
    /// Height of the tilted plate's midpoint
    #[arg(long)]
    a: Option<f64>,
    /// Width of the tilted plate
    #[arg(long)]
    w: Option<f64>,
    /// Tilt angle in radians
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Args, Debug)]
struct SphereArgs {
    /// Closest sphere–plate distance
    #[arg(long)]
    a: Option<f64>,
    /// Sphere radius
    #[arg(long = "R")]
    radius: Option<f64>,
    /// Radial position on the plate
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, value_enum)]
    quantity: Option<QuantityArg>,
    /// Comma-separated family labels (1s, 3s, 2, 3p, 5p)
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct FreeEnergyArgs {
    #[arg(long)]
    a: Option<f64>,
    /// Plate area
    #[arg(long)]
    area: Option<f64>,
    /// Volume for the black-body term
    #[arg(long)]
    volume: Option<f64>,
}

#[derive(Args, Debug)]
struct ThermalFArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long = "R")]
    radius: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct TruncationArgs {
    #[arg(long)]
    a: Option<f64>,
    /// Inverse temperature
    #[arg(long)]
    beta: Option<f64>,
    /// Largest reflection count in the partial sums
    #[arg(long)]
    x_max: Option<usize>,
    /// Cap on explicitly summed Matsubara terms
    #[arg(long)]
    m_max: Option<usize>,
}

fn put<T: serde::Serialize>(m: &mut Map<String, Value>, key: &str, v: &Option<T>) {
    if let Some(v) = v {
        m.insert(key.to_string(), json!(v));
    }
}

fn quantity_name(q: &Option<QuantityArg>) -> Option<&'static str> {
    q.map(|q| match q {
        QuantityArg::Profile => "profile",
        QuantityArg::Force => "force",
    })
}

/// Scene flags and common flags of a subcommand as a JSON overlay.
fn overlay(cmd: &Cmd) -> Result<(Command, &Common, Map<String, Value>), String> {
    let mut scene = Map::new();
    let (command, common) = match cmd {
        Cmd::Plates { scene: s, common } => {
            put(&mut scene, "a", &s.a);
            put(&mut scene, "x", &s.x);
            (Command::Plates, common)
        }
        Cmd::Pendulum { scene: s, common } => {
            put(&mut scene, "a", &s.a);
            put(&mut scene, "w", &s.w);
            put(&mut scene, "theta", &s.theta);
            (Command::Pendulum, common)
        }
        Cmd::SpherePlate { scene: s, common } => {
            put(&mut scene, "a", &s.a);
            put(&mut scene, "radius", &s.radius);
            put(&mut scene, "rho", &s.rho);
            put(&mut scene, "quantity", &quantity_name(&s.quantity));
            put(&mut scene, "families", &s.families);
            (Command::SpherePlate, common)
        }
        Cmd::FreeEnergy { scene: s, common } => {
            put(&mut scene, "a", &s.a);
            put(&mut scene, "area", &s.area);
            put(&mut scene, "volume", &s.volume);
            (Command::FreeEnergy, common)
        }
        Cmd::ThermalF { scene: s, common } => {
            put(&mut scene, "a", &s.a);
            put(&mut scene, "radius", &s.radius);
            put(&mut scene, "families", &s.families);
            (Command::ThermalF, common)
        }
        Cmd::Truncation { scene: s, common } => {
            put(&mut scene, "a", &s.a);
            put(&mut scene, "beta", &s.beta);
            put(&mut scene, "x_max", &s.x_max);
            put(&mut scene, "m_max", &s.m_max);
            (Command::Truncation, common)
        }
        Cmd::Validate => unreachable!("validate takes no configuration"),
    };
    let mut m = Map::new();
    if !scene.is_empty() {
        m.insert("scene".into(), Value::Object(scene));
    }
    match (common.t, common.beta_tilde) {
        (Some(t), _) => {
            m.insert("temperature".into(), json!({ "T": t }));
        }
        (None, Some(b)) => {
            m.insert("temperature".into(), json!({ "beta_tilde": b }));
        }
        _ => {}
    }
    put(&mut m, "max_order", &common.max_order);
    put(&mut m, "rel_tol", &common.rel_tol);
    put(&mut m, "rho_max", &common.rho_max);
    put(&mut m, "output", &common.output);
    put(&mut m, "diagnostics", &common.diagnostics);
    put(&mut m, "length_unit", &common.length_unit);
    if let Some(f) = common.format {
        m.insert("format".into(), json!(match f {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }));
    }
    if let Some(s) = &common.sweep {
        m.insert("sweep".into(), json!(Sweep::parse(&s[0], &s[1])?));
    }
    Ok((command, common, m))
}

enum Failure {
    Config(String),
    Numeric { message: String, config: Box<RunConfig>, point: Option<(usize, Option<f64>)> },
}

fn load(path: &Path) -> Result<Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn run(cmd: &Cmd) -> Result<(), Failure> {
    let (command, common, flags) = overlay(cmd).map_err(Failure::Config)?;
    let file = common.config.as_deref().map(load).transpose().map_err(Failure::Config)?;
    let cfg = assemble(command, file, flags).map_err(Failure::Config)?;
    let columns = compute::columns(&cfg).map_err(Failure::Config)?;

    let points = cfg.expand();
    let evaluated: Vec<_> = points.par_iter().map(|(_, c)| compute::evaluate(c)).collect();

    let mut results = Vec::new();
    let mut diagnostics = Vec::new();
    for (i, ((value, _), r)) in points.iter().zip(evaluated).enumerate() {
        let numeric = |message: String| Failure::Numeric { message, config: Box::new(cfg.clone()), point: Some((i, *value)) };
        let point = match r {
            Ok(p) => p,
            Err(Error::InvalidInput(m)) => return Err(Failure::Config(m)),
            Err(e) => return Err(numeric(e.to_string())),
        };
        for mut row in point.rows {
            if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
                return Err(numeric(format!("non-finite value in column {}", columns[bad].name)));
            }
            output::to_si(&columns, &mut row, cfg.length_unit);
            results.push(ResultRow { point: i, values: row });
        }
        diagnostics.push(point.diagnostics);
    }

    let out = Output { config: cfg.clone(), columns: columns.iter().map(|c| c.name.clone()).collect(), results, diagnostics };
    let text = match cfg.format {
        config::Format::Csv => output::csv(&out),
        config::Format::Json => output::json(&out),
    };
    let written = match &cfg.output {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            // a closed pipe (e.g. `| head`) is not a failure of the run
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| e.to_string()),
        },
    };
    written.map_err(|m| Failure::Numeric { message: m, config: Box::new(cfg), point: None })
}

fn diagnostics_path(cfg: &RunConfig) -> PathBuf {
    if let Some(p) = &cfg.diagnostics {
        return p.clone();
    }
    match &cfg.output {
        Some(o) => {
            let mut s = o.clone().into_os_string();
            s.push(".diagnostics.json");
            PathBuf::from(s)
        }
        None => PathBuf::from("casimir-diagnostics.json"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Cmd::Validate = cli.command {
        let results = validate::run();
        let (table, ok) = validate::table(&results);
        print!("{table}");
        return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    }
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric { message, config, point }) => {
            let path = diagnostics_path(&config);
            let doc = json!({
                "error": message,
                "point_index": point.map(|p| p.0),
                "sweep_value": point.and_then(|p| p.1),
                "config": config,
            });
            let body = serde_json::to_string_pretty(&doc).expect("diagnostics serialize") + "\n";
            match fs::write(&path, body) {
                Ok(()) => eprintln!("error: {message} (details in {})", path.display()),
                Err(e) => eprintln!("error: {message} (could not write {}: {e})", path.display()),
            }
            ExitCode::from(3)
        }
    }
}
