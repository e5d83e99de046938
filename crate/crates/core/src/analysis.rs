//! Limit extrapolation for per-n pressure samples, exact symbolic pressure
//! oracles, and the route-vs-oracle comparison report.

use serde::{Deserialize, Serialize};

use crate::dynamics::{CircleMap, IntervalMap, Potential, SystemSpec};
use crate::error::{Error, Result};
use crate::series::{PressureSeries, Route, SeriesParams};

/// Finite surrogate for the n → ∞ limit of a per-n series.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitEstimate {
    /// tail-mean of per_n over the tail window
    pub value: f64,
    pub method: String,
    /// spread (max − min) of the last three samples
    pub dispersion: f64,
    /// (n₂v₂ − n₁v₁)/(n₂ − n₁) on the last two samples; cancels O(1/n) terms
    pub difference: f64,
    /// max of the tail window, shown next to the mean since finite data
    /// cannot separate lim from limsup
    pub tail_max: f64,
}

/// Tail-mean extrapolation over the last ⌈tail_fraction·count⌉ samples.
pub fn extrapolate(series: &PressureSeries, tail_fraction: f64) -> Result<LimitEstimate> {
    let samples = &series.samples;
    if samples.len() < 3 {
        return Err(Error::usage("need at least 3 samples to extrapolate"));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::usage("tail fraction must be in (0, 1]"));
    }
    let tail_len = ((tail_fraction * samples.len() as f64).ceil() as usize).max(1);
    let tail = &samples[samples.len() - tail_len..];
    let value = tail.iter().map(|s| s.per_n).sum::<f64>() / tail.len() as f64;
    let tail_max = tail.iter().map(|s| s.per_n).fold(f64::NEG_INFINITY, f64::max);
    let last3 = &samples[samples.len() - 3..];
    let lo = last3.iter().map(|s| s.per_n).fold(f64::INFINITY, f64::min);
    let hi = last3.iter().map(|s| s.per_n).fold(f64::NEG_INFINITY, f64::max);
    let (a, b) = (&samples[samples.len() - 2], &samples[samples.len() - 1]);
    let (n1, n2) = (a.n as f64, b.n as f64);
    let difference = (n2 * b.per_n - n1 * a.per_n) / (n2 - n1);
    Ok(LimitEstimate {
        value,
        method: "tail-mean".into(),
        dispersion: hi - lo,
        difference,
        tail_max,
    })
}

/// log Σ_i exp(f(i)) over a k-symbol alphabet.
pub fn exact_pressure_full_shift(k: usize, f: &[f64]) -> Result<f64> {
    if k == 0 || f.len() != k {
        return Err(Error::usage("need one potential value per symbol"));
    }
    Ok(crate::numerics::logsumexp(f))
}

/// log spectral radius of diag(exp(f))·A for an irreducible 0/1 matrix A,
/// by power iteration to 1e-12 relative tolerance.
pub fn exact_pressure_sft(a: &[Vec<u8>], f: &[f64]) -> Result<f64> {
    let k = a.len();
    if k == 0 || a.iter().any(|r| r.len() != k) || f.len() != k {
        return Err(Error::usage("matrix must be square with matching potential"));
    }
    // irreducibility: every vertex reaches every vertex
    for start in 0..k {
        let mut seen = vec![false; k];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for v in 0..k {
                if a[u][v] != 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::usage("transition matrix is not irreducible"));
        }
    }
    let w: Vec<f64> = f.iter().map(|&v| v.exp()).collect();
    let mut x = vec![1.0 / k as f64; k];
    let mut prev = f64::INFINITY;
    for _ in 0..100_000 {
        let mut y = vec![0.0; k];
        for i in 0..k {
            let mut s = 0.0;
            for j in 0..k {
                if a[i][j] != 0 {
                    s += x[j];
                }
            }
            y[i] = w[i] * s;
        }
        let total: f64 = y.iter().sum();
        let log_est = total.ln();
        for v in y.iter_mut() {
            *v /= total;
        }
        x = y;
        if (log_est - prev).abs() <= 1e-12 * log_est.abs().max(1.0) {
            return Ok(log_est);
        }
        prev = log_est;
    }
    Err(Error::NonConvergence {
        iterations: 100_000,
        last: prev,
        previous: f64::NAN,
    })
}

/// Reference pressure when the system admits an exact oracle.
pub fn oracle_pressure(sys: &SystemSpec, f: &Potential) -> Option<f64> {
    match (sys, f) {
        (SystemSpec::FullShift { symbols }, Potential::Zero) => Some((*symbols as f64).ln()),
        (SystemSpec::FullShift { symbols }, Potential::SymbolValues { values }) => {
            exact_pressure_full_shift(*symbols, values).ok()
        }
        (SystemSpec::Sft { transitions }, Potential::Zero) => {
            exact_pressure_sft(transitions, &vec![0.0; transitions.len()]).ok()
        }
        (SystemSpec::Sft { transitions }, Potential::SymbolValues { values }) => {
            exact_pressure_sft(transitions, values).ok()
        }
        // rotations are isometries: zero complexity growth, pressure sup f
        (SystemSpec::Circle { map: CircleMap::Rotation { .. } }, Potential::Zero) => Some(0.0),
        (SystemSpec::Circle { map: CircleMap::Doubling }, Potential::Zero) => Some(2f64.ln()),
        (SystemSpec::Interval { map: IntervalMap::Tent { slope } }, Potential::Zero) => {
            (*slope > 1.0).then(|| slope.ln())
        }
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportRow {
    pub route: Route,
    pub params: SeriesParams,
    pub n_max: usize,
    pub estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    /// which side of the true value the route approaches from, where known:
    /// orbit-matching relaxes separation (below), pseudo-orbits inflate the
    /// orbit set (above)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approaches_from: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremReport {
    pub rows: Vec<ReportRow>,
}

/// One row per series: tail-mean estimate against the oracle when one exists.
pub fn theorem_report(
    sys: &SystemSpec,
    f: &Potential,
    series_list: &[PressureSeries],
    tail_fraction: f64,
) -> Result<TheoremReport> {
    let oracle = oracle_pressure(sys, f);
    let mut rows = Vec::with_capacity(series_list.len());
    for series in series_list {
        let est = extrapolate(series, tail_fraction)?;
        let approaches_from = match series.route {
            Route::Fk => Some("below".to_string()),
            Route::Po | Route::Ppo | Route::Fkpo => Some("above".to_string()),
            _ => None,
        };
        rows.push(ReportRow {
            route: series.route,
            params: series.params.clone(),
            n_max: series.samples.last().map_or(0, |s| s.n),
            estimate: est.value,
            oracle,
            gap: oracle.map(|o| est.value - o),
            approaches_from,
        });
    }
    Ok(TheoremReport { rows })
}
