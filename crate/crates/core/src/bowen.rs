//! Classical topological pressure via the Bowen metric: separated/spanning
//! sets over finite candidate pools, log-space sr sums, and finite-n pressure
//! samples.
//!
//! The supremum over all separated sets is approximated by the greedy maximal
//! separated set in pool order. Ties d_n = ε count as NOT separated (the
//! separated relation is strict ">"); spanning uses "≤".

use crate::dynamics::{
    admissible_words, build_net_capped, orbit_segment, Potential, State, SystemSpec,
};
use crate::error::{Error, Result};
use crate::numerics::logsumexp;
use crate::series::{PressureSeries, Route, SeriesParams};
use crate::sets::greedy_separated;

/// Default cap on candidate pool size.
pub const DEFAULT_POOL_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetMode {
    Separated,
    Spanning,
}

/// A finite (n,ε)-separated (or spanning) family of states.
#[derive(Clone, Debug)]
pub struct SeparatedSet {
    pub points: Vec<State>,
    pub n: usize,
    pub epsilon: f64,
    pub mode: SetMode,
}

/// max_{0<=i<n} d(T^i x, T^i y).
pub fn bowen_distance(sys: &SystemSpec, x: &State, y: &State, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage("bowen distance needs n >= 1"));
    }
    let ox = orbit_segment(sys, x, n)?;
    let oy = orbit_segment(sys, y, n)?;
    Ok(bowen_distance_precomputed(sys, &ox.points, &oy.points))
}

pub(crate) fn bowen_distance_precomputed(sys: &SystemSpec, ox: &[State], oy: &[State]) -> f64 {
    ox.iter()
        .zip(oy)
        .map(|(a, b)| sys.distance_unchecked(a, b))
        .fold(0.0, f64::max)
}

fn bowen_separated_pair(sys: &SystemSpec, ox: &[State], oy: &[State], epsilon: f64) -> bool {
    // early exit once the max is known to exceed ε
    ox.iter()
        .zip(oy)
        .any(|(a, b)| sys.distance_unchecked(a, b) > epsilon)
}

/// How candidate pools are produced for the pressure routes.
#[derive(Clone, Debug)]
pub enum PoolSpec {
    /// ε-net at the given resolution (net points used directly).
    Net { resolution: f64 },
    /// All admissible words of the given length (shift systems).
    ShiftWords { len: usize },
    /// Net at ε/2 for coordinate/finite systems; for shifts, all admissible
    /// words of the longest length L ≤ n whose word count stays within `cap`.
    Auto { cap: usize },
}

impl Default for PoolSpec {
    fn default() -> Self {
        PoolSpec::Auto { cap: DEFAULT_POOL_CAP }
    }
}

/// Deterministic candidate pool in lexicographic/ascending order.
pub fn build_pool(
    sys: &SystemSpec,
    n: usize,
    epsilon: f64,
    spec: &PoolSpec,
) -> Result<Vec<State>> {
    match spec {
        PoolSpec::Net { resolution } => {
            Ok(build_net_capped(sys, *resolution, crate::dynamics::DEFAULT_NET_CAP)?.points)
        }
        PoolSpec::ShiftWords { len } => Ok(admissible_words(sys, *len, usize::MAX)?
            .into_iter()
            .map(State::word)
            .collect()),
        PoolSpec::Auto { cap } => {
            if sys.is_shift() {
                // longest level ≤ n whose admissible word count fits the cap
                let mut words = vec![vec![]];
                let mut level = 0usize;
                while level < n {
                    match admissible_words(sys, level + 1, *cap) {
                        Ok(next) => {
                            words = next;
                            level += 1;
                        }
                        Err(Error::Resource { .. }) => break,
                        Err(e) => return Err(e),
                    }
                }
                Ok(words.into_iter().map(State::word).collect())
            } else {
                Ok(build_net_capped(sys, epsilon / 2.0, *cap)?.points)
            }
        }
    }
}

/// Greedy maximal (n,ε)-separated subset of the pool, in pool order. By
/// maximality the result is simultaneously (n,ε)-spanning for the pool.
pub fn max_separated_set(
    sys: &SystemSpec,
    pool: &[State],
    n: usize,
    epsilon: f64,
) -> Result<SeparatedSet> {
    if pool.is_empty() {
        return Err(Error::usage("candidate pool must be nonempty"));
    }
    if epsilon <= 0.0 {
        return Err(Error::usage("epsilon must be positive"));
    }
    let orbits: Vec<Vec<State>> = pool
        .iter()
        .map(|x| orbit_segment(sys, x, n).map(|s| s.points))
        .collect::<Result<_>>()?;
    let kept = greedy_separated(pool.len(), |a, b| {
        bowen_separated_pair(sys, &orbits[a], &orbits[b], epsilon)
    });
    Ok(SeparatedSet {
        points: kept.iter().map(|&i| pool[i].clone()).collect(),
        n,
        epsilon,
        mode: SetMode::Separated,
    })
}

/// Checks the spanning property of `set` over `pool` (d_n ≤ ε coverage).
pub fn verify_spanning(
    sys: &SystemSpec,
    set: &SeparatedSet,
    pool: &[State],
) -> Result<bool> {
    for x in pool {
        let ox = orbit_segment(sys, x, set.n)?.points;
        let mut covered = false;
        for y in &set.points {
            let oy = orbit_segment(sys, y, set.n)?.points;
            if bowen_distance_precomputed(sys, &ox, &oy) <= set.epsilon {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

/// log Σ_{x∈set} exp(S_n f(x)), computed in log-space.
pub fn sr_sum(sys: &SystemSpec, f: &Potential, set: &SeparatedSet) -> Result<f64> {
    f.validate_for(sys)?;
    let sums: Vec<f64> = set
        .points
        .iter()
        .map(|x| crate::dynamics::birkhoff_sum(sys, f, x, set.n))
        .collect::<Result<_>>()?;
    Ok(logsumexp(&sums))
}

/// Bowen-route pressure samples over a range of horizons.
pub fn pressure_series(
    sys: &SystemSpec,
    f: &Potential,
    n_range: &[usize],
    epsilon: f64,
    pool_spec: &PoolSpec,
) -> Result<PressureSeries> {
    if n_range.is_empty() {
        return Err(Error::usage("n range must be nonempty"));
    }
    f.validate_for(sys)?;
    let mut series = PressureSeries::new(
        Route::Bowen,
        SeriesParams {
            epsilon,
            ..Default::default()
        },
    );
    for &n in n_range {
        let pool = build_pool(sys, n, epsilon, pool_spec)?;
        let set = max_separated_set(sys, &pool, n, epsilon)?;
        let log_sum = sr_sum(sys, f, &set)?;
        series.push(n, epsilon, log_sum);
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::CircleMap;

    fn doubling() -> SystemSpec {
        SystemSpec::Circle { map: CircleMap::Doubling }
    }

    #[test]
    fn bowen_distance_examples() {
        let sys = doubling();
        let d = bowen_distance(&sys, &State::Point(0.0), &State::Point(0.5), 2).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert_eq!(
            bowen_distance(&sys, &State::Point(0.3), &State::Point(0.3), 5).unwrap(),
            0.0
        );
        // n = 1 reduces to d
        let d1 = bowen_distance(&sys, &State::Point(0.1), &State::Point(0.4), 1).unwrap();
        assert_eq!(d1, sys.distance(&State::Point(0.1), &State::Point(0.4)).unwrap());
    }

    #[test]
    fn bowen_distance_monotone_in_n() {
        let sys = doubling();
        let (x, y) = (State::Point(0.123), State::Point(0.125));
        let mut prev = 0.0;
        for n in 1..=8 {
            let d = bowen_distance(&sys, &x, &y, n).unwrap();
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn full_shift_cylinders_all_separated() {
        let sys = SystemSpec::FullShift { symbols: 2 };
        for n in 1..=6 {
            let pool = build_pool(&sys, n, 0.5, &PoolSpec::ShiftWords { len: n }).unwrap();
            let set = max_separated_set(&sys, &pool, n, 0.5).unwrap();
            assert_eq!(set.points.len(), 1 << n);
        }
    }

    #[test]
    fn singleton_and_coarse_pools() {
        let sys = doubling();
        let pool = vec![State::Point(0.25)];
        let set = max_separated_set(&sys, &pool, 3, 0.1).unwrap();
        assert_eq!(set.points.len(), 1);
        // ε beyond the diameter keeps only the first pool point
        let pool = build_pool(&sys, 4, 0.2, &PoolSpec::Net { resolution: 0.1 }).unwrap();
        let set = max_separated_set(&sys, &pool, 4, 0.6).unwrap();
        assert_eq!(set.points.len(), 1);
    }

    #[test]
    fn greedy_set_is_separated_and_maximal() {
        let sys = doubling();
        let pool = build_pool(&sys, 4, 0.1, &PoolSpec::Net { resolution: 0.05 }).unwrap();
        let set = max_separated_set(&sys, &pool, 4, 0.1).unwrap();
        for (i, x) in set.points.iter().enumerate() {
            for y in &set.points[i + 1..] {
                assert!(bowen_distance(&sys, x, y, 4).unwrap() > 0.1);
            }
        }
        // maximality re-scan: every pool point is within ε of the set
        assert!(verify_spanning(&sys, &set, &pool).unwrap());
    }

    #[test]
    fn sr_weighted_full_shift_binomial() {
        // f = (0 on symbol 0, 1 on symbol 1): Σ_words e^{#1s} = (1+e)^n
        let sys = SystemSpec::FullShift { symbols: 2 };
        let f = Potential::SymbolValues { values: vec![0.0, 1.0] };
        for n in 1..=8 {
            let pool = build_pool(&sys, n, 0.5, &PoolSpec::ShiftWords { len: n }).unwrap();
            let set = max_separated_set(&sys, &pool, n, 0.5).unwrap();
            let log_sr = sr_sum(&sys, &f, &set).unwrap();
            let expect = n as f64 * (1.0 + std::f64::consts::E).ln();
            assert!((log_sr - expect).abs() < 1e-9, "n={n}: {log_sr} vs {expect}");
        }
    }

    #[test]
    fn sr_singleton_zero_potential() {
        let sys = doubling();
        let set = SeparatedSet {
            points: vec![State::Point(0.3)],
            n: 6,
            epsilon: 0.1,
            mode: SetMode::Separated,
        };
        assert_eq!(sr_sum(&sys, &Potential::Zero, &set).unwrap(), 0.0);
    }

    #[test]
    fn log_sr_non_increasing_in_epsilon() {
        let sys = doubling();
        let pool = build_pool(&sys, 5, 0.05, &PoolSpec::Net { resolution: 0.025 }).unwrap();
        let mut prev = f64::INFINITY;
        for &eps in &[0.05, 0.1, 0.2, 0.4] {
            let set = max_separated_set(&sys, &pool, 5, eps).unwrap();
            let v = sr_sum(&sys, &Potential::Zero, &set).unwrap();
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn full_shift_pressure_exact_log2() {
        let sys = SystemSpec::FullShift { symbols: 2 };
        let ns: Vec<usize> = (4..=10).collect();
        let series =
            pressure_series(&sys, &Potential::Zero, &ns, 0.5, &PoolSpec::default()).unwrap();
        for s in &series.samples {
            assert!((s.per_n - 2f64.ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn auto_pool_golden_mean_uses_full_length() {
        let sys = SystemSpec::golden_mean();
        let pool = build_pool(&sys, 16, 0.5, &PoolSpec::default()).unwrap();
        assert_eq!(pool.len(), 2584); // Fibonacci count of admissible 16-words
    }
}
