//! Classical α-pseudo-orbits as transition graphs on ε-nets: weighted word
//! counting over a coarse partition (lazy automaton determinization), spectral
//! growth, periodic pseudo-orbits via traces, and scaled pressure.
//!
//! The edge predicate is the non-strict pseudo-orbit inequality
//! d(Tu, v) ≤ α; separation stays strict.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bowen::{build_pool, max_separated_set, PoolSpec};
use crate::dynamics::{orbit_segment, EpsilonNet, Potential, State, SystemSpec};
use crate::error::{Error, Result};
use crate::numerics::{logsumexp, LogMatrix};
use crate::series::{PressureSeries, Route, SeriesParams};

/// Default cap on determinized subset-states.
pub const DEFAULT_DETERMINIZATION_CAP: usize = 200_000;

/// ε-net vertices with α-transition edges and log potential weights.
#[derive(Clone, Debug)]
pub struct TransitionGraph {
    pub vertices: Vec<State>,
    pub resolution: f64,
    pub alpha: f64,
    pub successors: Vec<Vec<u32>>,
    /// log w(u) = scale · f(u).
    pub log_weights: Vec<f64>,
}

impl TransitionGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    /// Build directly from adjacency data (tests, symbolic oracles).
    pub fn from_adjacency(adjacency: &[Vec<u8>], log_weights: Vec<f64>) -> TransitionGraph {
        let m = adjacency.len();
        assert!(adjacency.iter().all(|r| r.len() == m) && log_weights.len() == m);
        TransitionGraph {
            vertices: (0..m).map(State::Index).collect(),
            resolution: 0.0,
            alpha: 0.0,
            successors: adjacency
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, &e)| e != 0)
                        .map(|(j, _)| j as u32)
                        .collect()
                })
                .collect(),
            log_weights,
        }
    }

    /// Edge-list dump, one "u v" pair per line (indices into the net listing).
    pub fn export_edge_list<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        for (u, succ) in self.successors.iter().enumerate() {
            for &v in succ {
                writeln!(out, "{u} {v}")?;
            }
        }
        Ok(())
    }
}

/// Graph with edges u→v iff d(Tu, v) ≤ α and vertex weight exp(scale·f(u)).
pub fn build_po_graph(
    sys: &SystemSpec,
    net: &EpsilonNet,
    alpha: f64,
    f: &Potential,
    scale: f64,
) -> Result<TransitionGraph> {
    if net.is_empty() {
        return Err(Error::usage("net must be nonempty"));
    }
    if alpha <= 0.0 {
        return Err(Error::usage("alpha must be positive"));
    }
    f.validate_for(sys)?;
    let images: Vec<State> = net.points.iter().map(|u| sys.map_unchecked(u)).collect();
    let successors = images
        .iter()
        .map(|tu| {
            net.points
                .iter()
                .enumerate()
                .filter(|(_, v)| sys.distance_unchecked(tu, v) <= alpha)
                .map(|(j, _)| j as u32)
                .collect()
        })
        .collect();
    let log_weights = net.points.iter().map(|u| scale * f.eval(u)).collect();
    Ok(TransitionGraph {
        vertices: net.points.clone(),
        resolution: net.resolution,
        alpha,
        successors,
        log_weights,
    })
}

/// log spectral radius of B[u][v] = w(u)·[u→v], by power iteration on the
/// weight-rescaled adjacency; converged when successive growth-log estimates
/// differ by < 1e-10.
pub fn spectral_log_growth(g: &TransitionGraph) -> Result<f64> {
    let m = g.vertex_count();
    if m == 0 {
        return Err(Error::usage("graph must be nonempty"));
    }
    let weights: Vec<f64> = g.log_weights.iter().map(|&lw| lw.exp()).collect();
    let mut x = vec![1.0 / m as f64; m];
    let mut y = vec![0.0; m];
    let mut prev_log = f64::INFINITY;
    let max_iter = 10_000;
    for it in 0..max_iter {
        for u in 0..m {
            let s: f64 = g.successors[u].iter().map(|&v| x[v as usize]).sum();
            y[u] = weights[u] * s;
        }
        let total: f64 = y.iter().sum();
        if total <= 0.0 {
            // nilpotent graph: spectral radius 0
            return Ok(f64::NEG_INFINITY);
        }
        let log_est = total.ln();
        for v in y.iter_mut() {
            *v /= total;
        }
        std::mem::swap(&mut x, &mut y);
        if (log_est - prev_log).abs() < 1e-10 {
            return Ok(log_est);
        }
        if it == max_iter - 1 {
            return Err(Error::NonConvergence {
                iterations: max_iter,
                last: log_est,
                previous: prev_log,
            });
        }
        prev_log = log_est;
    }
    unreachable!()
}

/// Coarse partition of graph vertices at scale ε_sep: cell = nearest
/// partition-net point, potentials evaluated at cell centers.
#[derive(Clone, Debug)]
pub struct CoarsePartition {
    pub centers: Vec<State>,
    pub cell_of: Vec<u32>,
}

impl CoarsePartition {
    pub fn new(sys: &SystemSpec, g: &TransitionGraph, partition: &EpsilonNet) -> Result<CoarsePartition> {
        if g.resolution > 0.0 && partition.resolution < 2.0 * g.resolution {
            return Err(Error::usage(
                "coarse scale must be at least twice the net resolution",
            ));
        }
        let cell_of = g
            .vertices
            .iter()
            .map(|v| partition.nearest(sys, v) as u32)
            .collect();
        Ok(CoarsePartition {
            centers: partition.points.clone(),
            cell_of,
        })
    }

    /// Split [0,1) into `cells` equal arcs/intervals (coordinate systems).
    pub fn uniform_cells(sys: &SystemSpec, g: &TransitionGraph, cells: usize) -> Result<CoarsePartition> {
        if cells == 0 {
            return Err(Error::usage("need at least one cell"));
        }
        let centers: Vec<State> = (0..cells)
            .map(|i| State::Point((i as f64 + 0.5) / cells as f64))
            .collect();
        let cell_of = g
            .vertices
            .iter()
            .map(|v| match v {
                State::Point(x) => {
                    let c = (x * cells as f64).floor() as usize;
                    c.min(cells - 1) as u32
                }
                _ => 0,
            })
            .collect();
        match sys {
            SystemSpec::Circle { .. } | SystemSpec::Interval { .. } => Ok(CoarsePartition {
                centers,
                cell_of,
            }),
            _ => Err(Error::usage("uniform cells need a coordinate system")),
        }
    }
}

/// Deterministic automaton over coarse cells, states = vertex subsets built
/// lazily. Accepts exactly the cell itineraries of graph paths.
pub struct CoarseAutomaton<'a> {
    graph: &'a TransitionGraph,
    partition: &'a CoarsePartition,
    states: Vec<Vec<u32>>,
    intern: HashMap<Vec<u32>, usize>,
    transitions: HashMap<(usize, u32), Option<usize>>,
    cap: usize,
}

impl<'a> CoarseAutomaton<'a> {
    pub fn new(
        graph: &'a TransitionGraph,
        partition: &'a CoarsePartition,
        cap: usize,
    ) -> CoarseAutomaton<'a> {
        CoarseAutomaton {
            graph,
            partition,
            states: Vec::new(),
            intern: HashMap::new(),
            transitions: HashMap::new(),
            cap,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    fn intern_state(&mut self, set: Vec<u32>) -> Result<usize> {
        if let Some(&id) = self.intern.get(&set) {
            return Ok(id);
        }
        if self.states.len() >= self.cap {
            return Err(Error::Resource {
                what: "determinized subset-states".into(),
                reached: self.states.len() + 1,
                cap: self.cap,
            });
        }
        let id = self.states.len();
        self.states.push(set.clone());
        self.intern.insert(set, id);
        Ok(id)
    }

    /// Initial state for cell c: all vertices lying in that cell.
    pub fn initial(&mut self, cell: u32) -> Result<Option<usize>> {
        let set: Vec<u32> = (0..self.graph.vertex_count() as u32)
            .filter(|&v| self.partition.cell_of[v as usize] == cell)
            .collect();
        if set.is_empty() {
            return Ok(None);
        }
        Ok(Some(self.intern_state(set)?))
    }

    /// δ(S, c) = {v in cell c : ∃u∈S with edge u→v}, or None when empty.
    pub fn step(&mut self, state: usize, cell: u32) -> Result<Option<usize>> {
        if let Some(&t) = self.transitions.get(&(state, cell)) {
            return Ok(t);
        }
        let mut mark = vec![false; self.graph.vertex_count()];
        for &u in &self.states[state] {
            for &v in &self.graph.successors[u as usize] {
                if self.partition.cell_of[v as usize] == cell {
                    mark[v as usize] = true;
                }
            }
        }
        let set: Vec<u32> = mark
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(v, _)| v as u32)
            .collect();
        let t = if set.is_empty() {
            None
        } else {
            Some(self.intern_state(set)?)
        };
        self.transitions.insert((state, cell), t);
        Ok(t)
    }
}

/// (log #distinct length-n cell words of graph paths,
///  log Σ_words Π_i exp(scale·f(center(w_i)))).
pub fn count_coarse_words(
    sys: &SystemSpec,
    g: &TransitionGraph,
    partition: &CoarsePartition,
    n: usize,
    f: &Potential,
    scale: f64,
    cap: usize,
) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::usage("word length must be >= 1"));
    }
    f.validate_for(sys)?;
    let cells = partition.centers.len() as u32;
    let cell_logw: Vec<f64> = partition
        .centers
        .iter()
        .map(|c| scale * f.eval(c))
        .collect();
    let mut auto = CoarseAutomaton::new(g, partition, cap);
    // memo over (state, remaining): (log word count, log weighted sum)
    let mut memo: HashMap<(usize, usize), (f64, f64)> = HashMap::new();

    fn walk(
        auto: &mut CoarseAutomaton,
        memo: &mut HashMap<(usize, usize), (f64, f64)>,
        cell_logw: &[f64],
        cells: u32,
        state: usize,
        remaining: usize,
    ) -> Result<(f64, f64)> {
        if remaining == 0 {
            return Ok((0.0, 0.0));
        }
        if let Some(&v) = memo.get(&(state, remaining)) {
            return Ok(v);
        }
        let mut counts = Vec::new();
        let mut weighted = Vec::new();
        for c in 0..cells {
            if let Some(next) = auto.step(state, c)? {
                let (lc, lw) = walk(auto, memo, cell_logw, cells, next, remaining - 1)?;
                counts.push(lc);
                weighted.push(lw + cell_logw[c as usize]);
            }
        }
        let out = (logsumexp(&counts), logsumexp(&weighted));
        memo.insert((state, remaining), out);
        Ok(out)
    }

    let mut counts = Vec::new();
    let mut weighted = Vec::new();
    for c in 0..cells {
        if let Some(init) = auto.initial(c)? {
            let (lc, lw) = walk(&mut auto, &mut memo, &cell_logw, cells, init, n - 1)?;
            counts.push(lc);
            weighted.push(lw + cell_logw[c as usize]);
        }
    }
    Ok((logsumexp(&counts), logsumexp(&weighted)))
}

/// log trace(B^n) for the weighted adjacency B[u][v] = w(u)·[u→v].
/// Unweighted graphs use exact floating-integer matrix powers.
pub fn count_periodic_po(g: &TransitionGraph, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage("period must be >= 1"));
    }
    let m = g.vertex_count();
    if g.log_weights.iter().all(|&w| w == 0.0) {
        // plain closed-path count, exact while below 2^53
        let mut base = vec![0.0f64; m * m];
        for (u, succ) in g.successors.iter().enumerate() {
            for &v in succ {
                base[u * m + v as usize] = 1.0;
            }
        }
        let pow = mat_pow(&base, m, n);
        let trace: f64 = (0..m).map(|i| pow[i * m + i]).sum();
        return Ok(trace.ln());
    }
    let mut b = LogMatrix::zeros(m);
    for (u, succ) in g.successors.iter().enumerate() {
        for &v in succ {
            b.set(u, v as usize, g.log_weights[u]);
        }
    }
    Ok(b.pow(n).log_trace())
}

fn mat_pow(base: &[f64], m: usize, n: usize) -> Vec<f64> {
    fn mul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                let aik = a[i * m + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..m {
                    out[i * m + j] += aik * b[k * m + j];
                }
            }
        }
        out
    }
    let mut result: Option<Vec<f64>> = None;
    let mut sq = base.to_vec();
    let mut e = n;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => sq.clone(),
                Some(r) => mul(&r, &sq, m),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        sq = mul(&sq, &sq, m);
    }
    result.unwrap()
}

/// Positive scale function S with S(λx)/S(x) → 1 as x → 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScaleFunction {
    ConstantOne,
    /// S(x) = log(1/x) + 1.
    LogReciprocal,
    /// S(x) = (log(1/x) + 1)^p.
    PowerLog { p: f64 },
}

impl ScaleFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ScaleFunction::ConstantOne => 1.0,
            ScaleFunction::LogReciprocal => (1.0 / x).ln() + 1.0,
            ScaleFunction::PowerLog { p } => ((1.0 / x).ln() + 1.0).powf(*p),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ScaleFunction::ConstantOne => "constant-one".into(),
            ScaleFunction::LogReciprocal => "log-reciprocal".into(),
            ScaleFunction::PowerLog { p } => format!("power-log-{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaledMode {
    Direct,
    Po,
    Ppo,
}

/// Parameters for one scaled-pressure run.
#[derive(Clone, Debug)]
pub struct ScaledConfig {
    pub scale: ScaleFunction,
    pub mode: ScaledMode,
    pub pool: PoolSpec,
    /// net resolution for po/ppo graph construction
    pub net_resolution: f64,
    /// coarse separation scale for po word counting
    pub eps_sep: f64,
    pub determinization_cap: usize,
}

/// Scaled pressure samples on a grid of (n, ε, α); α is ignored in direct
/// mode. Reported value is (1/n)·log Sep (with weights exp(S(ε)·S_n f))
/// divided by S(ε); `log_sum` keeps the undivided log partition sum.
pub fn scaled_pressure_series(
    sys: &SystemSpec,
    f: &Potential,
    cfg: &ScaledConfig,
    grid: &[(usize, f64, f64)],
) -> Result<PressureSeries> {
    if grid.is_empty() {
        return Err(Error::usage("parameter grid must be nonempty"));
    }
    f.validate_for(sys)?;
    let mut series = PressureSeries::new(
        Route::Scaled,
        SeriesParams {
            epsilon: grid[0].1,
            alpha: (cfg.mode != ScaledMode::Direct).then_some(grid[0].2),
            scale: Some(cfg.scale.name()),
            ..Default::default()
        },
    );
    for &(n, epsilon, alpha) in grid {
        let s_eps = cfg.scale.eval(epsilon);
        let log_sum = match cfg.mode {
            ScaledMode::Direct => {
                let pool = build_pool(sys, n, epsilon, &cfg.pool)?;
                let set = max_separated_set(sys, &pool, n, epsilon)?;
                let sums: Vec<f64> = set
                    .points
                    .iter()
                    .map(|x| {
                        orbit_segment(sys, x, n)
                            .map(|o| s_eps * o.points.iter().map(|p| f.eval(p)).sum::<f64>())
                    })
                    .collect::<Result<_>>()?;
                logsumexp(&sums)
            }
            ScaledMode::Po => {
                let net = crate::dynamics::build_net(sys, cfg.net_resolution)?;
                let g = build_po_graph(sys, &net, alpha, f, s_eps)?;
                let part = if matches!(sys, SystemSpec::Circle { .. } | SystemSpec::Interval { .. })
                {
                    let cells = (1.0 / cfg.eps_sep).round().max(1.0) as usize;
                    CoarsePartition::uniform_cells(sys, &g, cells)?
                } else {
                    let pnet = crate::dynamics::build_net(sys, cfg.eps_sep)?;
                    CoarsePartition::new(sys, &g, &pnet)?
                };
                let (_, weighted) =
                    count_coarse_words(sys, &g, &part, n, f, s_eps, cfg.determinization_cap)?;
                weighted
            }
            ScaledMode::Ppo => {
                let net = crate::dynamics::build_net(sys, cfg.net_resolution)?;
                let g = build_po_graph(sys, &net, alpha, f, s_eps)?;
                count_periodic_po(&g, n)?
            }
        };
        series.samples.push(crate::series::PressureSample {
            n,
            epsilon,
            log_sum,
            per_n: log_sum / n as f64 / s_eps,
        });
    }
    Ok(series)
}

/// Unscaled pseudo-orbit word-count pressure samples (the po route).
pub fn po_series(
    sys: &SystemSpec,
    f: &Potential,
    n_range: &[usize],
    net_resolution: f64,
    alpha: f64,
    cells: usize,
    cap: usize,
) -> Result<PressureSeries> {
    if n_range.is_empty() {
        return Err(Error::usage("n range must be nonempty"));
    }
    let net = crate::dynamics::build_net(sys, net_resolution)?;
    let g = build_po_graph(sys, &net, alpha, f, 1.0)?;
    let part = if matches!(sys, SystemSpec::Circle { .. } | SystemSpec::Interval { .. }) {
        CoarsePartition::uniform_cells(sys, &g, cells)?
    } else {
        let pnet = crate::dynamics::build_net(sys, 1.0 / cells as f64)?;
        CoarsePartition::new(sys, &g, &pnet)?
    };
    let mut series = PressureSeries::new(
        Route::Po,
        SeriesParams {
            epsilon: 1.0 / cells as f64,
            alpha: Some(alpha),
            ..Default::default()
        },
    );
    for &n in n_range {
        let (_, weighted) = count_coarse_words(sys, &g, &part, n, f, 1.0, cap)?;
        series.push(n, 1.0 / cells as f64, weighted);
    }
    Ok(series)
}
