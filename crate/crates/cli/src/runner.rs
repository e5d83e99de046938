//! Route execution over a parameter grid, plus the CSV / JSON / plot-data
//! writers. Everything is deterministic for a fixed config and seed.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use pressure_core::analysis::{oracle_pressure, theorem_report, TheoremReport};
use pressure_core::bowen::{bowen_distance, pressure_series, PoolSpec};
use pressure_core::dynamics::{build_net, Potential, State, SystemSpec};
use pressure_core::error::Error as CoreError;
use pressure_core::fk_metric::{fk_distance, pfk_series};
use pressure_core::fk_pseudo_orbit::{
    default_n_delta, enumerate_fkpo_members, fkpo_sr_bruteforce, is_classical_pseudo_chain,
    is_fkpo_prefix, shift_sequence, FkpoParams,
};
use pressure_core::pseudo_orbit::{
    build_po_graph, count_periodic_po, po_series, scaled_pressure_series, ScaleFunction,
    ScaledConfig, ScaledMode,
};
use pressure_core::series::{PressureSeries, Route, SeriesParams};

use crate::config::{parse_state, ExperimentConfig, RouteKind};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Resource(m) | CliError::Invariant(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        match e {
            CoreError::Resource { .. } => CliError::Resource(e.to_string()),
            CoreError::NonConvergence { .. } => CliError::Invariant(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FkDistRow {
    pub n: usize,
    pub fk: f64,
    pub bowen: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunOutcome {
    pub series: Vec<PressureSeries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<TheoremReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fkdist: Vec<FkDistRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verify: Vec<VerifyCheck>,
    /// grid points dropped after a resource cap fired
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub truncated: Vec<String>,
}

fn pool_spec(cfg: &ExperimentConfig) -> PoolSpec {
    match cfg.grid.pool_resolution {
        Some(r) => PoolSpec::Net { resolution: r },
        None => PoolSpec::Auto { cap: cfg.caps.pool },
    }
}

fn epsilons(cfg: &ExperimentConfig) -> Vec<f64> {
    if cfg.grid.epsilon.is_empty() {
        vec![0.5]
    } else {
        cfg.grid.epsilon.clone()
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    cfg.validate().map_err(CliError::Usage)?;
    let mut out = RunOutcome::default();
    let sys = &cfg.system;
    let f = &cfg.potential;
    match cfg.route {
        RouteKind::Bowen => {
            for eps in epsilons(cfg) {
                run_grid_point(&mut out, format!("bowen eps={eps}"), || {
                    pressure_series(sys, f, &cfg.grid.n, eps, &pool_spec(cfg))
                })?;
            }
        }
        RouteKind::Fk => {
            for eps in epsilons(cfg) {
                run_grid_point(&mut out, format!("fk eps={eps}"), || {
                    pfk_series(sys, f, &cfg.grid.n, eps, &pool_spec(cfg))
                })?;
            }
        }
        RouteKind::Po => {
            let res = cfg.grid.net_resolution.unwrap_or(1.0 / 256.0);
            let cells = cfg.grid.cells.unwrap_or(2);
            let alphas = if cfg.grid.alpha.is_empty() { vec![res] } else { cfg.grid.alpha.clone() };
            for alpha in alphas {
                run_grid_point(&mut out, format!("po alpha={alpha}"), || {
                    po_series(sys, f, &cfg.grid.n, res, alpha, cells, cfg.caps.determinization)
                })?;
            }
        }
        RouteKind::Ppo => {
            let res = cfg.grid.net_resolution.unwrap_or(1.0 / 256.0);
            let alphas = if cfg.grid.alpha.is_empty() { vec![res] } else { cfg.grid.alpha.clone() };
            for alpha in alphas {
                run_grid_point(&mut out, format!("ppo alpha={alpha}"), || {
                    let net = build_net(sys, res)?;
                    let g = build_po_graph(sys, &net, alpha, f, 1.0)?;
                    let mut series = PressureSeries::new(
                        Route::Ppo,
                        SeriesParams { epsilon: res, alpha: Some(alpha), ..Default::default() },
                    );
                    for &n in &cfg.grid.n {
                        series.push(n, res, count_periodic_po(&g, n)?);
                    }
                    Ok(series)
                })?;
            }
        }
        RouteKind::Fkpo => {
            let eps = *epsilons(cfg).first().unwrap();
            let delta = cfg.grid.delta.unwrap_or(0.4);
            let n_delta = cfg.grid.n_delta.unwrap_or_else(|| default_n_delta(delta));
            let alpha = cfg.grid.alpha.first().copied().ok_or_else(|| {
                CliError::Usage("fkpo route needs grid.alpha".into())
            })?;
            let params = FkpoParams::with_n_delta(alpha, delta, n_delta)?;
            let tail = cfg.grid.tail_length.unwrap_or(2);
            run_grid_point(&mut out, "fkpo".into(), || {
                let mut series = PressureSeries::new(
                    Route::Fkpo,
                    SeriesParams {
                        epsilon: eps,
                        alpha: Some(alpha),
                        delta: Some(delta),
                        n_delta: Some(n_delta),
                        ..Default::default()
                    },
                );
                for &n in &cfg.grid.n {
                    series.push(n, eps, fkpo_sr_bruteforce(sys, f, n, eps, &params, tail)?);
                }
                Ok(series)
            })?;
        }
        RouteKind::Scaled => {
            let scale = cfg.grid.scale.unwrap_or(ScaleFunction::LogReciprocal);
            let mode = cfg.grid.scaled_mode.unwrap_or(ScaledMode::Direct);
            let scfg = ScaledConfig {
                scale,
                mode,
                pool: pool_spec(cfg),
                net_resolution: cfg.grid.net_resolution.unwrap_or(1.0 / 256.0),
                eps_sep: cfg.grid.cells.map_or(0.5, |c| 1.0 / c as f64),
                determinization_cap: cfg.caps.determinization,
            };
            for eps in epsilons(cfg) {
                let alphas = if cfg.grid.alpha.is_empty() { vec![0.0] } else { cfg.grid.alpha.clone() };
                for alpha in alphas {
                    run_grid_point(&mut out, format!("scaled eps={eps} alpha={alpha}"), || {
                        let grid: Vec<(usize, f64, f64)> =
                            cfg.grid.n.iter().map(|&n| (n, eps, alpha)).collect();
                        scaled_pressure_series(sys, f, &scfg, &grid)
                    })?;
                }
            }
        }
        RouteKind::Fkdist => {
            let x = parse_state(sys, &cfg.grid.states[0]).map_err(CliError::Usage)?;
            let y = parse_state(sys, &cfg.grid.states[1]).map_err(CliError::Usage)?;
            for &n in &cfg.grid.n {
                let fk = fk_distance(sys, &x, &y, n)?.value;
                let bw = bowen_distance(sys, &x, &y, n)?;
                if fk > bw + 1e-12 {
                    return Err(CliError::Invariant(format!(
                        "fk distance {fk} exceeds bowen distance {bw} at n={n}"
                    )));
                }
                out.fkdist.push(FkDistRow { n, fk, bowen: bw });
            }
        }
        RouteKind::Verify => {
            let suite = cfg.suite.as_deref().unwrap_or("all");
            out.verify = run_verify(suite, cfg.seed)?;
            if out.verify.iter().any(|c| !c.passed) {
                return Err(CliError::Invariant(format!(
                    "verify suite '{suite}' has failing checks"
                )));
            }
        }
        RouteKind::Report => {
            for eps in epsilons(cfg) {
                run_grid_point(&mut out, format!("bowen eps={eps}"), || {
                    pressure_series(sys, f, &cfg.grid.n, eps, &pool_spec(cfg))
                })?;
                run_grid_point(&mut out, format!("fk eps={eps}"), || {
                    pfk_series(sys, f, &cfg.grid.n, eps, &pool_spec(cfg))
                })?;
            }
            out.report = Some(theorem_report(sys, f, &out.series, cfg.tail_fraction)?);
        }
    }
    Ok(out)
}

/// Runs one grid point; a resource cap marks the point truncated instead of
/// aborting the whole run.
fn run_grid_point(
    out: &mut RunOutcome,
    label: String,
    body: impl FnOnce() -> pressure_core::Result<PressureSeries>,
) -> Result<(), CliError> {
    match body() {
        Ok(series) => {
            out.series.push(series);
            Ok(())
        }
        Err(CoreError::Resource { .. }) => {
            out.truncated.push(label);
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

fn run_verify(suite: &str, seed: u64) -> Result<Vec<VerifyCheck>, CliError> {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool| checks.push(VerifyCheck { name: name.into(), passed });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if suite != "metric" && suite != "fkpo" && suite != "all" {
        return Err(CliError::Usage(format!(
            "unknown suite '{suite}' (expected metric, fkpo, or all)"
        )));
    }
    if suite == "metric" || suite == "all" {
        let sys = SystemSpec::Circle { map: pressure_core::dynamics::CircleMap::Doubling };
        let mut fk_le_bowen = true;
        let mut symmetric = true;
        for _ in 0..200 {
            let x = sys.random_state(&mut rng);
            let y = sys.random_state(&mut rng);
            for n in [2usize, 5, 9] {
                let fk = fk_distance(&sys, &x, &y, n)?.value;
                let fk_rev = fk_distance(&sys, &y, &x, n)?.value;
                let bw = bowen_distance(&sys, &x, &y, n)?;
                fk_le_bowen &= fk <= bw + 1e-12;
                symmetric &= fk == fk_rev;
            }
        }
        push("fk distance at most bowen distance (200 sampled pairs)", fk_le_bowen);
        push("fk distance symmetric (200 sampled pairs)", symmetric);
    }
    if suite == "fkpo" || suite == "all" {
        let sys = SystemSpec::cycle(3);
        let alpha = 0.5;
        let params = FkpoParams::with_n_delta(alpha, 0.4, 4).map_err(CliError::from)?;
        let members = enumerate_fkpo_members(&sys, 6, &params, 1 << 20)?;
        let mut po_subset = true;
        for a in 0..3usize {
            // the three genuine 6-orbits
            let mut seq = vec![State::Index(a)];
            for _ in 0..5 {
                let next = sys.evaluate_map(seq.last().unwrap())?;
                seq.push(next);
            }
            po_subset &= is_classical_pseudo_chain(&sys, &seq, alpha)?
                && members.contains(&seq);
        }
        push("genuine orbits are fkpo members (3-cycle)", po_subset);
        let wide = FkpoParams::with_n_delta(alpha * 2.0, 0.4, 4).map_err(CliError::from)?;
        let larger = enumerate_fkpo_members(&sys, 6, &wide, 1 << 20)?;
        push(
            "membership monotone in alpha (3-cycle)",
            members.iter().all(|m| larger.contains(m)),
        );
        let mut shift_stable = true;
        for seq in enumerate_fkpo_members(&sys, 7, &params, 1 << 20)? {
            shift_stable &= is_fkpo_prefix(&sys, &shift_sequence(&seq)?, &params)?.0;
        }
        push("members stay members under the shift (3-cycle)", shift_stable);
        let fkposr =
            fkpo_sr_bruteforce(&sys, &Potential::Zero, 4, 0.5, &params, 2)?;
        push("FKPOsr at least log 3 on the 3-cycle", fkposr >= 3f64.ln() - 1e-12);
    }
    Ok(checks)
}

/// 12 significant digits, '.' decimal, locale-free.
pub fn fmt_float(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.is_finite() {
        format!("{v:.11e}")
    } else {
        format!("{v}")
    }
}

pub fn csv_text(cfg: &ExperimentConfig, out: &RunOutcome) -> String {
    let mut text = String::from("route,n,epsilon,alpha,delta,N_delta,scale,value,oracle,gap\n");
    let oracle = oracle_pressure(&cfg.system, &cfg.potential);
    let opt = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
    for series in &out.series {
        let p = &series.params;
        for s in &series.samples {
            let gap = oracle.map(|o| s.per_n - o);
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                series.route,
                s.n,
                fmt_float(s.epsilon),
                opt(p.alpha),
                opt(p.delta),
                p.n_delta.map(|v| v.to_string()).unwrap_or_default(),
                p.scale.clone().unwrap_or_default(),
                fmt_float(s.per_n),
                opt(oracle),
                opt(gap),
            ));
        }
    }
    for row in &out.fkdist {
        text.push_str(&format!(
            "fkdist,{},,,,,,{},{},{}\n",
            row.n,
            fmt_float(row.fk),
            fmt_float(row.bowen),
            fmt_float(row.fk - row.bowen),
        ));
    }
    text
}

#[derive(Serialize)]
pub struct RunReport<'a> {
    pub version: &'static str,
    pub config: &'a ExperimentConfig,
    pub outcome: &'a RunOutcome,
    pub timings_ms: f64,
}

pub fn write_outputs(
    cfg: &ExperimentConfig,
    out: &RunOutcome,
    timings_ms: f64,
) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Usage(format!("output write failed: {e}"));
    if let Some(path) = &cfg.output.csv {
        std::fs::write(path, csv_text(cfg, out)).map_err(io_err)?;
    }
    if let Some(path) = &cfg.output.report {
        let report = RunReport {
            version: env!("CARGO_PKG_VERSION"),
            config: cfg,
            outcome: out,
            timings_ms,
        };
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        std::fs::write(path, json).map_err(io_err)?;
    }
    if let Some(dir) = &cfg.output.plot_dir {
        std::fs::create_dir_all(dir).map_err(io_err)?;
        for (idx, series) in out.series.iter().enumerate() {
            let path: &Path = dir.as_ref();
            let file = path.join(format!("{}_{idx}.dat", series.route));
            let mut w = std::fs::File::create(file).map_err(io_err)?;
            for s in &series.samples {
                writeln!(w, "{} {}", s.n, fmt_float(s.per_n)).map_err(io_err)?;
            }
        }
    }
    Ok(())
}
