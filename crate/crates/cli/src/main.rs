mod config;
mod run;

use clap::{Args, Parser, Subcommand};
use config::*;
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;

/// Certificates and constructions for de Branges chains on discrete measures.
///
/// Exit status: 0 when the run's verdict is pass, 1 when it is fail, 2 on invalid input.
#[derive(Parser)]
#[command(name = "debranges", version)]
struct Cli {
    /// JSON run configuration; replaces the subcommand.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Write the per-index CSV (index,value,error_bound) here.
    #[arg(long, global = true)]
    csv: Option<String>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify k-indivisible intervals for a generated instance.
    Certify(GenArgs),
    /// Build an instance and report its regularity and growth.
    Construct(GenArgs),
    /// Atomize a lattice measure at level u.
    Atomize(AtomizeArgs),
    /// Monodromy, type and indivisible intervals of a piecewise constant Hamiltonian.
    Canonical(CanonicalArgs),
    /// Exponential type of a product model along the imaginary axis.
    TypeEstimate(TypeArgs),
    /// Integrability and Hilbert-transform diagnostics of a weight.
    DiagnoseWeight(WeightArgs),
}

#[derive(Args)]
struct GenArgs {
    /// thm1, thm2, power-weight, perturbed-lattice or lacunary.
    #[arg(long)]
    generator: String,
    #[arg(long = "N", default_value_t = 10_000)]
    n: i64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Comma-separated frequencies for thm2.
    #[arg(long, value_delimiter = ',')]
    s_list: Option<Vec<f64>>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    k_probe: Option<u32>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    pf_tol: Option<f64>,
    #[arg(long)]
    limit_tol: Option<f64>,
    #[arg(long)]
    sum_floor: Option<f64>,
}

#[derive(Args)]
struct AtomizeArgs {
    #[arg(long = "N", default_value_t = 10_000)]
    n: i64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mass_exponent: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    u: f64,
    #[arg(long, default_value_t = 50)]
    window: i64,
    /// Comma-separated points the level must avoid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    avoid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10.0)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    isometry_trials: u32,
    #[arg(long, default_value_t = 1e-6)]
    isometry_tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct CanonicalArgs {
    /// e.g. "I:pi,E1:0.5,[2,0.5,1]:2pi".
    #[arg(long)]
    segments: String,
    #[arg(long, default_value_t = 1.0)]
    y_min: f64,
    #[arg(long, default_value_t = 64.0)]
    y_max: f64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0.02)]
    type_tol: f64,
}

#[derive(Args)]
struct TypeArgs {
    /// sin, lattice:a:b, thm1-g, shifted-lattice:beta or lacunary:q.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 1.0)]
    y_min: f64,
    #[arg(long, default_value_t = 64.0)]
    y_max: f64,
    #[arg(long)]
    expected: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    rel_tol: f64,
}

#[derive(Args)]
struct WeightArgs {
    /// power:p, exp:c or const:v.
    #[arg(long)]
    weight: String,
    #[arg(long, default_value_t = 65536.0)]
    radius: f64,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    ht_min: i32,
    #[arg(long, default_value_t = 12)]
    ht_max: i32,
}

fn generator(name: &str) -> Result<Generator, String> {
    serde_json::from_value(json!(name)).map_err(|_| format!("unknown generator '{name}'"))
}

fn model_spec(text: &str) -> Result<ModelSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| format!("bad model parameter '{s}'"));
    Ok(match parts.as_slice() {
        ["sin"] => ModelSpec::Sin,
        ["thm1-g"] => ModelSpec::Thm1G,
        ["lattice", a, b] => ModelSpec::Lattice { a: num(a)?, b: num(b)? },
        ["shifted-lattice", b] => ModelSpec::ShiftedLattice { beta: num(b)? },
        ["lacunary", q] => ModelSpec::Lacunary { q: num(q)? },
        _ => return Err(format!("unknown model '{text}'")),
    })
}

fn command_from(cmd: Cmd) -> Result<Command, String> {
    let gen = |a: GenArgs| -> Result<GeneratorParams, String> {
        Ok(GeneratorParams {
            generator: generator(&a.generator)?,
            n: a.n,
            k: a.k,
            s_list: a.s_list,
            gamma: a.gamma,
            beta: a.beta,
            q: a.q,
            k_probe: a.k_probe,
            seed: a.seed,
            pf_tol: a.pf_tol,
            limit_tol: a.limit_tol,
            sum_floor: a.sum_floor,
        })
    };
    Ok(match cmd {
        Cmd::Certify(a) => Command::Certify(gen(a)?),
        Cmd::Construct(a) => Command::Construct(gen(a)?),
        Cmd::Atomize(a) => Command::Atomize(AtomizeParams {
            n: a.n,
            mass_exponent: a.mass_exponent,
            u: a.u,
            window: a.window,
            avoid: a.avoid,
            p: a.p,
            isometry_trials: a.isometry_trials,
            isometry_tol: a.isometry_tol,
            seed: a.seed,
        }),
        Cmd::Canonical(a) => Command::Canonical(CanonicalParams {
            segments: parse_segments(&a.segments)?,
            y_min: a.y_min,
            y_max: a.y_max,
            tol: a.tol,
            type_tol: a.type_tol,
        }),
        Cmd::TypeEstimate(a) => Command::TypeEstimate(TypeParams {
            model: model_spec(&a.model)?,
            y_min: a.y_min,
            y_max: a.y_max,
            expected: a.expected,
            rel_tol: a.rel_tol,
        }),
        Cmd::DiagnoseWeight(a) => Command::DiagnoseWeight(WeightParams {
            weight: parse_weight(&a.weight)?,
            radius: a.radius,
            ht_levels: (a.ht_min, a.ht_max),
        }),
    })
}

fn build_config(cli: Cli) -> Result<RunConfig, String> {
    let mut cfg = match (cli.config, cli.command) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
            RunConfig::parse(&text)?
        }
        (None, Some(cmd)) => {
            let cfg = RunConfig { schema_version: SCHEMA_VERSION, command: command_from(cmd)?, output: Output::default() };
            cfg.validate()?;
            cfg
        }
        (Some(_), Some(_)) => return Err("give either --config or a subcommand, not both".into()),
        (None, None) => return Err("a subcommand or --config is required (see --help)".into()),
    };
    // flags override the file's output section
    if cli.out.is_some() {
        cfg.output.report = cli.out;
    }
    if cli.csv.is_some() {
        cfg.output.csv = cli.csv;
    }
    Ok(cfg)
}

fn write_csv(path: &str, rows: &[run::Row]) -> Result<(), String> {
    let mut text = String::from("index,value,error_bound\n");
    for (i, v, e) in rows {
        text.push_str(&format!("{i},{v:.16e},{e:.16e}\n"));
    }
    std::fs::write(path, text).map_err(|e| format!("{path}: {e}"))
}

fn main_inner(cli: Cli) -> Result<bool, String> {
    let cfg = build_config(cli)?;
    let outcome = run::execute(&cfg)?;
    let resolved = run::resolve(&cfg);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": { "name": "debranges", "version": env!("CARGO_PKG_VERSION") },
        "command": cfg.command.name(),
        "config": resolved,
        "verdict": if outcome.pass { "pass" } else { "fail" },
        "result": outcome.result,
    });
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n";
    match &cfg.output.report {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{path}: {e}"))?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string())?,
    }
    if let Some(path) = &cfg.output.csv {
        write_csv(path, &outcome.rows)?;
    }
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
