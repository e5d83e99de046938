//! Batch experiment runner: every pressure pipeline behind one binary.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 resource cap reached,
//! 3 invariant failure.

mod config;
mod runner;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{
    parse_n_spec, parse_potential, parse_system, ExperimentConfig, GridSpec, RouteKind,
};
use pressure_core::pseudo_orbit::ScaleFunction;
use runner::CliError;

#[derive(Parser)]
#[command(name = "pressure-lab", version, about = "Topological pressure estimation laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a JSON experiment config
    Run { config: PathBuf },
    /// Separated-set pressure over the Bowen metric
    PressureBowen(RouteArgs),
    /// Separated-set pressure over the Feldman-Katok metric
    PressureFk(RouteArgs),
    /// Pseudo-orbit coarse-word counting
    PressurePo(RouteArgs),
    /// Brute-force FK-pseudo-orbit pressure on finite spaces
    PressureFkpo(RouteArgs),
    /// Scale-weighted separated-set pressure
    PressureScaled(RouteArgs),
    /// FK and Bowen distances for one state pair
    FkDist(FkDistArgs),
    /// Built-in invariant suites
    Verify(VerifyArgs),
    /// Route-vs-oracle comparison table
    Report(RouteArgs),
}

#[derive(Args)]
struct RouteArgs {
    /// JSON config supplying defaults; explicit flags must agree with it
    #[arg(long)]
    config: Option<PathBuf>,
    /// doubling | tent[:slope] | logistic[:r] | rotation[:theta] | full-shift[:k] | golden-mean
    #[arg(long)]
    system: Option<String>,
    /// zero | symbols:v0,v1,... | poly:c0,c1,...
    #[arg(long)]
    potential: Option<String>,
    /// horizon list: "4..12" or "4,6,8"
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    epsilon: Vec<f64>,
    #[arg(long)]
    alpha: Vec<f64>,
    /// net granularity N (resolution 1/N)
    #[arg(long)]
    net: Option<u64>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n_delta: Option<usize>,
    /// constant-one | log-reciprocal | power-log:p
    #[arg(long)]
    scale: Option<String>,
    #[arg(long)]
    pool_resolution: Option<f64>,
    #[arg(long)]
    tail_length: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// directory for gnuplot-ready (n, per_n) files
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct FkDistArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// metric | fkpo | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn load_config(path: &PathBuf) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    cfg.validate().map_err(CliError::Usage)?;
    Ok(cfg)
}

/// Flag wins when the config is silent; a disagreement between an explicit
/// flag and an explicit config field is an error naming both sources.
fn merge<T: PartialEq + std::fmt::Debug>(
    slot: &mut Option<T>,
    flag: Option<T>,
    name: &str,
) -> Result<(), CliError> {
    if let Some(v) = flag {
        if let Some(existing) = slot.as_ref() {
            if *existing != v {
                return Err(CliError::Usage(format!(
                    "--{name} {v:?} conflicts with config field {name} = {existing:?}"
                )));
            }
        }
        *slot = Some(v);
    }
    Ok(())
}

fn build_config(route: RouteKind, args: &RouteArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let cfg = load_config(path)?;
            if cfg.route != route {
                return Err(CliError::Usage(format!(
                    "subcommand route '{route}' conflicts with config route '{}'",
                    cfg.route
                )));
            }
            cfg
        }
        None => {
            let system = args
                .system
                .as_deref()
                .ok_or_else(|| CliError::Usage("--system or --config is required".into()))?;
            ExperimentConfig {
                system: parse_system(system).map_err(CliError::Usage)?,
                potential: pressure_core::dynamics::Potential::Zero,
                route,
                grid: GridSpec::default(),
                caps: Default::default(),
                seed: 0,
                tail_fraction: 0.3,
                output: Default::default(),
                suite: None,
            }
        }
    };
    if args.config.is_some() {
        if let Some(s) = &args.system {
            let flag_sys = parse_system(s).map_err(CliError::Usage)?;
            let same = serde_json::to_value(&flag_sys).unwrap()
                == serde_json::to_value(&cfg.system).unwrap();
            if !same {
                return Err(CliError::Usage(format!(
                    "--system {s} conflicts with the config system block"
                )));
            }
        }
    }
    if let Some(p) = &args.potential {
        cfg.potential = parse_potential(p).map_err(CliError::Usage)?;
    }
    if let Some(spec) = &args.n {
        let ns = parse_n_spec(spec).map_err(CliError::Usage)?;
        if !cfg.grid.n.is_empty() && cfg.grid.n != ns {
            return Err(CliError::Usage(format!(
                "--n {spec} conflicts with config field grid.n = {:?}",
                cfg.grid.n
            )));
        }
        cfg.grid.n = ns;
    }
    if !args.epsilon.is_empty() {
        if !cfg.grid.epsilon.is_empty() && cfg.grid.epsilon != args.epsilon {
            return Err(CliError::Usage(format!(
                "--epsilon {:?} conflicts with config field grid.epsilon = {:?}",
                args.epsilon, cfg.grid.epsilon
            )));
        }
        cfg.grid.epsilon = args.epsilon.clone();
    }
    if !args.alpha.is_empty() {
        if !cfg.grid.alpha.is_empty() && cfg.grid.alpha != args.alpha {
            return Err(CliError::Usage(format!(
                "--alpha {:?} conflicts with config field grid.alpha = {:?}",
                args.alpha, cfg.grid.alpha
            )));
        }
        cfg.grid.alpha = args.alpha.clone();
    }
    merge(
        &mut cfg.grid.net_resolution,
        args.net.map(|n| 1.0 / n as f64),
        "net",
    )?;
    merge(&mut cfg.grid.cells, args.cells, "cells")?;
    merge(&mut cfg.grid.delta, args.delta, "delta")?;
    merge(&mut cfg.grid.n_delta, args.n_delta, "n-delta")?;
    merge(
        &mut cfg.grid.pool_resolution,
        args.pool_resolution,
        "pool-resolution",
    )?;
    merge(&mut cfg.grid.tail_length, args.tail_length, "tail-length")?;
    if let Some(s) = &args.scale {
        let scale = parse_scale(s)?;
        merge(&mut cfg.grid.scale, Some(scale), "scale")?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(p) = &args.csv {
        cfg.output.csv = Some(p.clone());
    }
    if let Some(p) = &args.report {
        cfg.output.report = Some(p.clone());
    }
    if let Some(p) = &args.emit_plot_data {
        cfg.output.plot_dir = Some(p.clone());
    }
    Ok(cfg)
}

fn parse_scale(s: &str) -> Result<ScaleFunction, CliError> {
    match s {
        "constant-one" => Ok(ScaleFunction::ConstantOne),
        "log-reciprocal" => Ok(ScaleFunction::LogReciprocal),
        _ => match s.strip_prefix("power-log:") {
            Some(p) => p
                .parse()
                .map(|p| ScaleFunction::PowerLog { p })
                .map_err(|_| CliError::Usage(format!("bad scale '{s}'"))),
            None => Err(CliError::Usage(format!("unknown scale '{s}'"))),
        },
    }
}

fn run_config(cfg: &ExperimentConfig) -> Result<i32, CliError> {
    let start = Instant::now();
    let outcome = runner::execute(cfg)?;
    runner::write_outputs(cfg, &outcome, start.elapsed().as_secs_f64() * 1e3)?;
    if cfg.output.csv.is_none() && (!outcome.series.is_empty() || !outcome.fkdist.is_empty()) {
        print!("{}", runner::csv_text(cfg, &outcome));
    }
    for row in &outcome.fkdist {
        println!("n={} fk={} bowen={}", row.n, row.fk, row.bowen);
    }
    for check in &outcome.verify {
        println!(
            "check {}: {}",
            check.name,
            if check.passed { "pass" } else { "fail" }
        );
    }
    if let Some(report) = &outcome.report {
        for row in &report.rows {
            println!(
                "route={} estimate={}{}",
                row.route,
                row.estimate,
                match (row.oracle, row.gap) {
                    (Some(o), Some(g)) => format!(" oracle={o} gap={g}"),
                    _ => String::new(),
                }
            );
        }
    }
    if !outcome.truncated.is_empty() {
        for label in &outcome.truncated {
            eprintln!("truncated: {label}");
        }
        return Ok(2);
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Run { config } => {
            let cfg = load_config(&config)?;
            run_config(&cfg)
        }
        Cmd::PressureBowen(a) => run_config(&build_config(RouteKind::Bowen, &a)?),
        Cmd::PressureFk(a) => run_config(&build_config(RouteKind::Fk, &a)?),
        Cmd::PressurePo(a) => run_config(&build_config(RouteKind::Po, &a)?),
        Cmd::PressureFkpo(a) => run_config(&build_config(RouteKind::Fkpo, &a)?),
        Cmd::PressureScaled(a) => run_config(&build_config(RouteKind::Scaled, &a)?),
        Cmd::Report(a) => run_config(&build_config(RouteKind::Report, &a)?),
        Cmd::FkDist(a) => {
            let route_args = RouteArgs {
                config: a.config.clone(),
                system: a.system.clone(),
                potential: None,
                n: a.n.clone(),
                epsilon: vec![],
                alpha: vec![],
                net: None,
                cells: None,
                delta: None,
                n_delta: None,
                scale: None,
                pool_resolution: None,
                tail_length: None,
                seed: None,
                csv: a.csv.clone(),
                report: None,
                emit_plot_data: None,
            };
            let mut cfg = build_config(RouteKind::Fkdist, &route_args)?;
            match (&a.x, &a.y) {
                (Some(x), Some(y)) => {
                    if !cfg.grid.states.is_empty()
                        && cfg.grid.states != vec![x.clone(), y.clone()]
                    {
                        return Err(CliError::Usage(format!(
                            "--x/--y conflict with config field grid.states = {:?}",
                            cfg.grid.states
                        )));
                    }
                    cfg.grid.states = vec![x.clone(), y.clone()];
                }
                (None, None) if !cfg.grid.states.is_empty() => {}
                _ => return Err(CliError::Usage("fk-dist needs --x and --y (or config states)".into())),
            }
            run_config(&cfg)
        }
        Cmd::Verify(a) => {
            let cfg = ExperimentConfig {
                system: pressure_core::dynamics::SystemSpec::cycle(3),
                potential: pressure_core::dynamics::Potential::Zero,
                route: RouteKind::Verify,
                grid: GridSpec::default(),
                caps: Default::default(),
                seed: a.seed,
                tail_fraction: 0.3,
                output: Default::default(),
                suite: Some(a.suite),
            };
            run_config(&cfg)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
