//! Feldman-Katok metric: (n,δ)-matches via LCS-style dynamic programming,
//! f̄_{n,δ}, exact d_FKn via breakpoint search, FK separated sums and the
//! PFK pressure samples.
//!
//! Matches use strict "< δ" on the matched iterate distances; the breakpoint
//! analysis treats f̄ as constant on half-open intervals (c_k, c_{k+1}],
//! which follows from strictness.

use crate::bowen::{build_pool, PoolSpec};
use crate::dynamics::{orbit_segment, OrbitSegment, Potential, State, SystemSpec};
use crate::error::{Error, Result};
use crate::numerics::logsumexp;
use crate::series::{PressureSeries, Route, SeriesParams};
use crate::sets::{exact_max_weight_separated, greedy_separated};

/// Index data certifying an (n,δ)-match: an order-preserving partial
/// bijection between iterate indices.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MatchWitness {
    pub size: usize,
    pub domain_indices: Vec<usize>,
    pub range_indices: Vec<usize>,
}

/// Exact d_FKn together with the breakpoint data behind it.
#[derive(Clone, Debug)]
pub struct FkDistanceResult {
    pub value: f64,
    /// Sorted candidate thresholds: iterate distances plus match-defect
    /// levels t/n.
    pub breakpoints: Vec<f64>,
    /// Best |π| on each half-open interval (breakpoints[k], breakpoints[k+1]].
    pub match_sizes: Vec<usize>,
}

/// d(x,y) compared against a threshold; for shift words only the symbols that
/// can push the distance above the threshold are inspected.
fn distance_within(sys: &SystemSpec, x: &State, y: &State, thresh: f64, strict: bool) -> bool {
    if let (State::Word(_), State::Word(_)) = (x, y) {
        let mut t = 0usize;
        loop {
            let scale = 0.5f64.powi(t as i32);
            let relevant = if strict { scale >= thresh } else { scale > thresh };
            if !relevant || t > 1100 {
                return true;
            }
            if x.symbol(t) != y.symbol(t) {
                return false;
            }
            t += 1;
        }
    }
    let d = sys.distance_unchecked(x, y);
    if strict {
        d < thresh
    } else {
        d <= thresh
    }
}

fn check_pair(ox: &OrbitSegment, oy: &OrbitSegment) -> Result<usize> {
    if ox.len() != oy.len() {
        return Err(Error::usage("orbit segments must have equal length"));
    }
    if ox.is_empty() {
        return Err(Error::usage("orbit segments must be nonempty"));
    }
    Ok(ox.len())
}

/// Rolling-row DP for the maximum match cardinality under `adm`.
fn best_size<F>(n: usize, mut adm: F) -> usize
where
    F: FnMut(usize, usize) -> bool,
{
    let mut prev = vec![0u32; n + 1];
    let mut cur = vec![0u32; n + 1];
    for i in 1..=n {
        for j in 1..=n {
            let diag = prev[j - 1] + if adm(i - 1, j - 1) { 1 } else { 0 };
            cur[j] = diag.max(prev[j]).max(cur[j - 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n] as usize
}

/// Maximum-cardinality (n,δ)-match with index witness (strict "< δ").
pub fn best_match_size(
    sys: &SystemSpec,
    ox: &OrbitSegment,
    oy: &OrbitSegment,
    delta: f64,
) -> Result<MatchWitness> {
    let n = check_pair(ox, oy)?;
    if delta <= 0.0 {
        return Err(Error::usage("delta must be positive"));
    }
    let adm = |i: usize, j: usize| {
        distance_within(sys, &ox.points[i], &oy.points[j], delta, true)
    };
    // full table, witness recovered by walking back
    let mut table = vec![0u32; (n + 1) * (n + 1)];
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    for i in 1..=n {
        for j in 1..=n {
            let diag = table[idx(i - 1, j - 1)] + if adm(i - 1, j - 1) { 1 } else { 0 };
            table[idx(i, j)] = diag.max(table[idx(i - 1, j)]).max(table[idx(i, j - 1)]);
        }
    }
    let mut d_idx = Vec::new();
    let mut r_idx = Vec::new();
    let (mut i, mut j) = (n, n);
    while i > 0 && j > 0 {
        if adm(i - 1, j - 1) && table[idx(i, j)] == table[idx(i - 1, j - 1)] + 1 {
            d_idx.push(i - 1);
            r_idx.push(j - 1);
            i -= 1;
            j -= 1;
        } else if table[idx(i - 1, j)] >= table[idx(i, j - 1)] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    d_idx.reverse();
    r_idx.reverse();
    Ok(MatchWitness {
        size: table[idx(n, n)] as usize,
        domain_indices: d_idx,
        range_indices: r_idx,
    })
}

/// f̄_{n,δ}(x,y) = 1 - best match size / n.
pub fn fbar(sys: &SystemSpec, x: &State, y: &State, n: usize, delta: f64) -> Result<f64> {
    let ox = orbit_segment(sys, x, n)?;
    let oy = orbit_segment(sys, y, n)?;
    let w = best_match_size(sys, &ox, &oy, delta)?;
    Ok(1.0 - w.size as f64 / n as f64)
}

/// Exact d_FKn(x,y) = inf{δ > 0 : f̄_{n,δ}(x,y) < δ}.
///
/// f̄ is constant in δ on each interval between consecutive candidate
/// thresholds; the feasible region is the union of the nonempty
/// (max(c_k, v_k), c_{k+1}] and the infimum is the least max(c_k, v_k).
pub fn fk_distance(sys: &SystemSpec, x: &State, y: &State, n: usize) -> Result<FkDistanceResult> {
    if n == 0 {
        return Err(Error::usage("fk distance needs n >= 1"));
    }
    let ox = orbit_segment(sys, x, n)?;
    let oy = orbit_segment(sys, y, n)?;
    let mut candidates: Vec<f64> = Vec::with_capacity(n * n + n + 1);
    for i in 0..n {
        for j in 0..n {
            candidates.push(sys.distance_unchecked(&ox.points[i], &oy.points[j]));
        }
    }
    for t in 0..=n {
        candidates.push(t as f64 / n as f64);
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();

    let m = candidates.len();
    let mut match_sizes = Vec::with_capacity(m);
    let mut value = f64::INFINITY;
    for k in 0..m {
        let c = candidates[k];
        // on (c_k, c_{k+1}] the strict predicate "d < δ" equals "d ≤ c_k"
        let size = best_size(n, |i, j| {
            distance_within(sys, &ox.points[i], &oy.points[j], c, false)
        });
        match_sizes.push(size);
        let v = 1.0 - size as f64 / n as f64;
        let lo = c.max(v);
        let hi = candidates.get(k + 1).copied().unwrap_or(f64::INFINITY);
        if lo < hi {
            value = value.min(lo);
        }
    }
    Ok(FkDistanceResult {
        value,
        breakpoints: candidates,
        match_sizes,
    })
}

/// d_FKn(x,y) > ε, decided with a single DP at the boundary: the feasible
/// region of δ is an upper ray, so separation holds iff f̄ just above ε is
/// still ≥ δ there, i.e. iff n - (best match size under "d ≤ ε") > ε·n.
pub fn fk_separated_orbits(
    sys: &SystemSpec,
    ox: &OrbitSegment,
    oy: &OrbitSegment,
    epsilon: f64,
) -> Result<bool> {
    let n = check_pair(ox, oy)?;
    let size = best_size(n, |i, j| {
        distance_within(sys, &ox.points[i], &oy.points[j], epsilon, false)
    });
    Ok((n - size) as f64 > epsilon * n as f64)
}

pub fn fk_separated(
    sys: &SystemSpec,
    x: &State,
    y: &State,
    n: usize,
    epsilon: f64,
) -> Result<bool> {
    let ox = orbit_segment(sys, x, n)?;
    let oy = orbit_segment(sys, y, n)?;
    fk_separated_orbits(sys, &ox, &oy, epsilon)
}

/// Greedy maximal FK-(n,ε)-separated subset of the pool, then log-sum-exp of
/// the Birkhoff weights. The greedy maximal set is simultaneously
/// FK-(n,ε)-spanning for the pool.
pub fn fk_sr_sum(
    sys: &SystemSpec,
    f: &Potential,
    pool: &[State],
    n: usize,
    epsilon: f64,
) -> Result<f64> {
    if pool.is_empty() {
        return Err(Error::usage("candidate pool must be nonempty"));
    }
    f.validate_for(sys)?;
    let orbits: Vec<OrbitSegment> = pool
        .iter()
        .map(|x| orbit_segment(sys, x, n))
        .collect::<Result<_>>()?;
    let kept = greedy_separated(pool.len(), |a, b| {
        fk_separated_orbits(sys, &orbits[a], &orbits[b], epsilon).unwrap()
    });
    let weights: Vec<f64> = kept
        .iter()
        .map(|&i| orbits[i].points.iter().map(|p| f.eval(p)).sum())
        .collect();
    Ok(logsumexp(&weights))
}

/// Exact FKsr over a small pool: maximum-weight FK-separated subset by
/// branch and bound (oracle scale).
pub fn fk_sr_exact(
    sys: &SystemSpec,
    f: &Potential,
    pool: &[State],
    n: usize,
    epsilon: f64,
    cap: usize,
) -> Result<f64> {
    f.validate_for(sys)?;
    let orbits: Vec<OrbitSegment> = pool
        .iter()
        .map(|x| orbit_segment(sys, x, n))
        .collect::<Result<_>>()?;
    let birkhoff: Vec<f64> = orbits
        .iter()
        .map(|o| o.points.iter().map(|p| f.eval(p)).sum())
        .collect();
    let shift = birkhoff.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = birkhoff.iter().map(|&b| (b - shift).exp()).collect();
    let best = exact_max_weight_separated(
        &weights,
        |a, b| fk_separated_orbits(sys, &orbits[a], &orbits[b], epsilon).unwrap(),
        cap,
    )?;
    let sums: Vec<f64> = best.iter().map(|&i| birkhoff[i]).collect();
    Ok(logsumexp(&sums))
}

/// FK-route pressure samples.
pub fn pfk_series(
    sys: &SystemSpec,
    f: &Potential,
    n_range: &[usize],
    epsilon: f64,
    pool_spec: &PoolSpec,
) -> Result<PressureSeries> {
    if n_range.is_empty() {
        return Err(Error::usage("n range must be nonempty"));
    }
    let mut series = PressureSeries::new(
        Route::Fk,
        SeriesParams {
            epsilon,
            ..Default::default()
        },
    );
    for &n in n_range {
        let pool = build_pool(sys, n, epsilon, pool_spec)?;
        let log_sum = fk_sr_sum(sys, f, &pool, n, epsilon)?;
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
    fn identity_match_is_full() {
        let sys = doubling();
        let o = orbit_segment(&sys, &State::Point(0.3), 6).unwrap();
        let w = best_match_size(&sys, &o, &o, 1e-6).unwrap();
        assert_eq!(w.size, 6);
        assert_eq!(w.domain_indices, w.range_indices);
    }

    #[test]
    fn doubling_match_drops_one() {
        // orbits (0,0,0,0) vs (0.5,0,0,0) at δ=0.25 → size 3
        let sys = doubling();
        let ox = orbit_segment(&sys, &State::Point(0.0), 4).unwrap();
        let oy = orbit_segment(&sys, &State::Point(0.5), 4).unwrap();
        let w = best_match_size(&sys, &ox, &oy, 0.25).unwrap();
        assert_eq!(w.size, 3);
        // the witness re-verifies
        for (&i, &j) in w.domain_indices.iter().zip(&w.range_indices) {
            assert!(sys.distance_unchecked(&ox.points[i], &oy.points[j]) < 0.25);
        }
    }

    #[test]
    fn two_point_space_no_match() {
        let sys = SystemSpec::Finite {
            distances: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            images: vec![0, 1],
        };
        let ox = orbit_segment(&sys, &State::Index(0), 3).unwrap();
        let oy = orbit_segment(&sys, &State::Index(1), 3).unwrap();
        let w = best_match_size(&sys, &ox, &oy, 0.5).unwrap();
        assert_eq!(w.size, 0);
        assert_eq!(fbar(&sys, &State::Index(0), &State::Index(1), 3, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn fbar_examples() {
        let sys = doubling();
        assert_eq!(fbar(&sys, &State::Point(0.2), &State::Point(0.2), 5, 0.1).unwrap(), 0.0);
        let v = fbar(&sys, &State::Point(0.0), &State::Point(0.5), 4, 0.25).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fk_distance_examples() {
        let sys = doubling();
        assert_eq!(
            fk_distance(&sys, &State::Point(0.1), &State::Point(0.1), 5).unwrap().value,
            0.0
        );
        let d2 = fk_distance(&sys, &State::Point(0.0), &State::Point(0.5), 2).unwrap();
        assert!((d2.value - 0.5).abs() < 1e-15);
        let d4 = fk_distance(&sys, &State::Point(0.0), &State::Point(0.5), 4).unwrap();
        assert!((d4.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fk_le_bowen_and_symmetric() {
        let sys = doubling();
        let pairs = [(0.1, 0.7), (0.33, 0.34), (0.0, 0.99), (0.5, 0.25)];
        for (a, b) in pairs {
            for n in [1usize, 2, 4, 8] {
                let x = State::Point(a);
                let y = State::Point(b);
                let fk = fk_distance(&sys, &x, &y, n).unwrap().value;
                let fk_rev = fk_distance(&sys, &y, &x, n).unwrap().value;
                let dn = crate::bowen::bowen_distance(&sys, &x, &y, n).unwrap();
                assert_eq!(fk, fk_rev);
                assert!(fk <= dn + 1e-12);
            }
        }
    }

    #[test]
    fn separated_predicate_agrees_with_distance() {
        let sys = SystemSpec::FullShift { symbols: 2 };
        let words: Vec<State> = crate::dynamics::admissible_words(&sys, 5, usize::MAX)
            .unwrap()
            .into_iter()
            .map(State::word)
            .collect();
        for eps in [0.6, 0.5, 0.25, 0.2, 0.125] {
            for i in 0..words.len() {
                for j in i..words.len() {
                    let via_dist =
                        fk_distance(&sys, &words[i], &words[j], 5).unwrap().value > eps;
                    let via_dp = fk_separated(&sys, &words[i], &words[j], 5, eps).unwrap();
                    assert_eq!(via_dist, via_dp, "pair {i},{j} eps {eps}");
                }
            }
        }
    }

    #[test]
    fn fk_sr_singleton_weight() {
        let sys = SystemSpec::FullShift { symbols: 2 };
        let f = Potential::SymbolValues { values: vec![0.0, 1.0] };
        let pool = vec![State::word(vec![1, 1, 1])];
        let v = fk_sr_sum(&sys, &f, &pool, 3, 0.2).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn fk_sr_large_epsilon_keeps_one() {
        let sys = doubling();
        let pool: Vec<State> = (0..8).map(|i| State::Point(i as f64 / 8.0)).collect();
        let v = fk_sr_sum(&sys, &Potential::Zero, &pool, 4, 0.9).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn pfk_per_n_bounded_by_log2() {
        let sys = SystemSpec::FullShift { symbols: 2 };
        let ns: Vec<usize> = (2..=8).collect();
        for eps in [0.5, 0.25, 0.125] {
            let s = pfk_series(&sys, &Potential::Zero, &ns, eps, &PoolSpec::default()).unwrap();
            for sample in &s.samples {
                assert!(sample.per_n <= 2f64.ln() + 1e-12);
            }
        }
    }
}
