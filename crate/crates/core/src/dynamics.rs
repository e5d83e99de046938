//! State spaces, maps, metrics, orbits, potentials and finite ε-nets.
//!
//! Shift states are finite words with an implicit all-zero tail, so every
//! metric evaluation at a finite horizon is exact. Interval/circle states are
//! plain doubles; finite spaces are index-addressed tables.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on ε-net size.
pub const DEFAULT_NET_CAP: usize = 200_000;
/// Per-step arithmetic tolerance for "genuine orbit" on float systems.
pub const GENUINE_STEP_TOL: f64 = 1e-12;

/// A point of one of the supported spaces.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub enum State {
    /// Coordinate in [0,1] (circle states live in [0,1)).
    Point(f64),
    /// Shift word; trailing zeros are stripped so streams compare by value.
    Word(Vec<u8>),
    /// Index into a finite space.
    Index(usize),
}

impl State {
    pub fn word(symbols: impl Into<Vec<u8>>) -> State {
        let mut w = symbols.into();
        while w.last() == Some(&0) {
            w.pop();
        }
        State::Word(w)
    }

    /// Symbol of the underlying infinite stream (0 beyond the stored word).
    #[inline]
    pub fn symbol(&self, i: usize) -> u8 {
        match self {
            State::Word(w) => w.get(i).copied().unwrap_or(0),
            _ => panic!("symbol() on a non-word state"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircleMap {
    Doubling,
    Rotation { theta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntervalMap {
    Tent { slope: f64 },
    Logistic { r: f64 },
}

/// A compact metric space together with a continuous self-map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemSpec {
    /// Unit circle with arc metric.
    Circle { map: CircleMap },
    /// Unit interval with absolute-value metric.
    Interval { map: IntervalMap },
    /// Full shift on `symbols` symbols, d(u,v) = 2^-m at the first disagreement.
    FullShift { symbols: usize },
    /// Subshift of finite type; `transitions[a][b]` allows symbol b after a.
    /// The implicit 0-tail convention requires every symbol to admit 0 as a
    /// successor, i.e. transitions[a][0] for all a.
    Sft { transitions: Vec<Vec<u8>> },
    /// Finite metric space: full distance table plus a map table.
    Finite {
        distances: Vec<Vec<f64>>,
        images: Vec<usize>,
    },
}

impl SystemSpec {
    pub fn golden_mean() -> SystemSpec {
        SystemSpec::Sft {
            transitions: vec![vec![1, 1], vec![1, 0]],
        }
    }

    /// Cyclic permutation on `size` points with unit distances.
    pub fn cycle(size: usize) -> SystemSpec {
        let distances = (0..size)
            .map(|i| (0..size).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        let images = (0..size).map(|i| (i + 1) % size).collect();
        SystemSpec::Finite { distances, images }
    }

    pub fn alphabet_size(&self) -> Option<usize> {
        match self {
            SystemSpec::FullShift { symbols } => Some(*symbols),
            SystemSpec::Sft { transitions } => Some(transitions.len()),
            _ => None,
        }
    }

    pub fn is_shift(&self) -> bool {
        self.alphabet_size().is_some()
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SystemSpec::Circle { map } => match map {
                CircleMap::Rotation { theta } if !(0.0..1.0).contains(theta) => {
                    Err(Error::usage("rotation angle must lie in [0,1)"))
                }
                _ => Ok(()),
            },
            SystemSpec::Interval { map } => match map {
                IntervalMap::Tent { slope } if !(0.0..=2.0).contains(slope) => {
                    Err(Error::usage("tent slope must lie in [0,2]"))
                }
                IntervalMap::Logistic { r } if !(0.0..=4.0).contains(r) => {
                    Err(Error::usage("logistic parameter must lie in [0,4]"))
                }
                _ => Ok(()),
            },
            SystemSpec::FullShift { symbols } => {
                if *symbols == 0 {
                    Err(Error::usage("full shift needs at least one symbol"))
                } else {
                    Ok(())
                }
            }
            SystemSpec::Sft { transitions } => {
                let k = transitions.len();
                if k == 0 || transitions.iter().any(|row| row.len() != k) {
                    return Err(Error::usage("transition matrix must be square and nonempty"));
                }
                if transitions.iter().any(|row| row[0] == 0) {
                    return Err(Error::usage(
                        "the 0-tail word convention requires transitions[a][0] = 1 for every a",
                    ));
                }
                Ok(())
            }
            SystemSpec::Finite { distances, images } => {
                let m = distances.len();
                if m == 0 || distances.iter().any(|row| row.len() != m) || images.len() != m {
                    return Err(Error::usage("finite system tables must be square and aligned"));
                }
                if images.iter().any(|&j| j >= m) {
                    return Err(Error::usage("map table points outside the space"));
                }
                for i in 0..m {
                    for j in 0..m {
                        if (distances[i][j] - distances[j][i]).abs() > 1e-15
                            || distances[i][j] < 0.0
                            || (i == j) != (distances[i][j] == 0.0)
                        {
                            return Err(Error::usage("distance table is not a metric"));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Domain check for a candidate state.
    pub fn check_state(&self, x: &State) -> Result<()> {
        match (self, x) {
            (SystemSpec::Circle { .. }, State::Point(v)) => {
                if v.is_finite() && (0.0..1.0).contains(v) {
                    Ok(())
                } else {
                    Err(Error::domain(format!("{v} is not a circle coordinate in [0,1)")))
                }
            }
            (SystemSpec::Interval { .. }, State::Point(v)) => {
                if v.is_finite() && (0.0..=1.0).contains(v) {
                    Ok(())
                } else {
                    Err(Error::domain(format!("{v} is not in [0,1]")))
                }
            }
            (SystemSpec::FullShift { symbols }, State::Word(w)) => {
                if w.iter().any(|&s| s as usize >= *symbols) {
                    Err(Error::domain("word uses a symbol outside the alphabet"))
                } else {
                    Ok(())
                }
            }
            (SystemSpec::Sft { transitions }, State::Word(w)) => {
                let k = transitions.len();
                if w.iter().any(|&s| s as usize >= k) {
                    return Err(Error::domain("word uses a symbol outside the alphabet"));
                }
                for t in 0..w.len() {
                    let a = w[t] as usize;
                    let b = w.get(t + 1).copied().unwrap_or(0) as usize;
                    if transitions[a][b] == 0 {
                        return Err(Error::domain(format!(
                            "forbidden transition {a}->{b} at position {t}"
                        )));
                    }
                }
                Ok(())
            }
            (SystemSpec::Finite { images, .. }, State::Index(i)) => {
                if *i < images.len() {
                    Ok(())
                } else {
                    Err(Error::domain("index outside the finite space"))
                }
            }
            _ => Err(Error::domain("state representation does not match the space")),
        }
    }

    /// T(x). Exact for table/shift systems, floating for interval/circle maps.
    pub fn evaluate_map(&self, x: &State) -> Result<State> {
        self.check_state(x)?;
        Ok(self.map_unchecked(x))
    }

    pub(crate) fn map_unchecked(&self, x: &State) -> State {
        match (self, x) {
            (SystemSpec::Circle { map }, State::Point(v)) => {
                let y = match map {
                    CircleMap::Doubling => 2.0 * v,
                    CircleMap::Rotation { theta } => v + theta,
                };
                State::Point(if y >= 1.0 { y - 1.0 } else { y })
            }
            (SystemSpec::Interval { map }, State::Point(v)) => {
                let y = match map {
                    IntervalMap::Tent { slope } => {
                        if *v <= 0.5 {
                            slope * v
                        } else {
                            slope * (1.0 - v)
                        }
                    }
                    IntervalMap::Logistic { r } => r * v * (1.0 - v),
                };
                State::Point(y.clamp(0.0, 1.0))
            }
            (SystemSpec::FullShift { .. } | SystemSpec::Sft { .. }, State::Word(w)) => {
                State::word(if w.is_empty() { vec![] } else { w[1..].to_vec() })
            }
            (SystemSpec::Finite { images, .. }, State::Index(i)) => State::Index(images[*i]),
            _ => unreachable!("state checked against the space"),
        }
    }

    /// d(x, y).
    pub fn distance(&self, x: &State, y: &State) -> Result<f64> {
        self.check_state(x)?;
        self.check_state(y)?;
        Ok(self.distance_unchecked(x, y))
    }

    pub(crate) fn distance_unchecked(&self, x: &State, y: &State) -> f64 {
        match (self, x, y) {
            (SystemSpec::Circle { .. }, State::Point(a), State::Point(b)) => {
                let d = (a - b).abs();
                d.min(1.0 - d)
            }
            (SystemSpec::Interval { .. }, State::Point(a), State::Point(b)) => (a - b).abs(),
            (SystemSpec::FullShift { .. } | SystemSpec::Sft { .. }, State::Word(u), State::Word(v)) => {
                let len = u.len().max(v.len());
                for i in 0..len {
                    if u.get(i).copied().unwrap_or(0) != v.get(i).copied().unwrap_or(0) {
                        return 0.5f64.powi(i as i32);
                    }
                }
                0.0
            }
            (SystemSpec::Finite { distances, .. }, State::Index(i), State::Index(j)) => {
                distances[*i][*j]
            }
            _ => unreachable!("states checked against the space"),
        }
    }

    /// Upper bound on pairwise distances in the space.
    pub fn diameter(&self) -> f64 {
        match self {
            SystemSpec::Circle { .. } => 0.5,
            SystemSpec::Interval { .. } => 1.0,
            SystemSpec::FullShift { .. } | SystemSpec::Sft { .. } => 1.0,
            SystemSpec::Finite { distances, .. } => distances
                .iter()
                .flatten()
                .cloned()
                .fold(0.0, f64::max),
        }
    }

    /// Uniform random state, used by the sampled invariant checks.
    pub fn random_state<R: Rng>(&self, rng: &mut R) -> State {
        match self {
            SystemSpec::Circle { .. } => State::Point(rng.gen_range(0.0..1.0)),
            SystemSpec::Interval { .. } => State::Point(rng.gen_range(0.0..=1.0)),
            SystemSpec::FullShift { symbols } => {
                let len = rng.gen_range(0..=16);
                State::word(
                    (0..len)
                        .map(|_| rng.gen_range(0..*symbols) as u8)
                        .collect::<Vec<_>>(),
                )
            }
            SystemSpec::Sft { transitions } => {
                let k = transitions.len();
                let len: usize = rng.gen_range(0..=16);
                let mut w: Vec<u8> = Vec::with_capacity(len);
                let mut prev: Option<usize> = None;
                for _ in 0..len {
                    let allowed: Vec<usize> = (0..k)
                        .filter(|&b| prev.map_or(true, |a| transitions[a][b] == 1))
                        .collect();
                    let b = allowed[rng.gen_range(0..allowed.len())];
                    w.push(b as u8);
                    prev = Some(b);
                }
                // splice back to 0-tail admissibly
                while let Some(&last) = w.last() {
                    if transitions[last as usize][0] == 1 {
                        break;
                    }
                    w.pop();
                }
                State::word(w)
            }
            SystemSpec::Finite { images, .. } => State::Index(rng.gen_range(0..images.len())),
        }
    }
}

/// A finite list of states (x, Tx, ..., T^{n-1}x) or an arbitrary candidate
/// pseudo-orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSegment {
    pub points: Vec<State>,
    pub genuine: bool,
}

impl OrbitSegment {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Wraps an arbitrary sequence, computing the `genuine` flag against T
    /// (exact for discrete systems, per-step tolerance for float ones).
    pub fn from_points(sys: &SystemSpec, points: Vec<State>) -> Result<OrbitSegment> {
        if points.is_empty() {
            return Err(Error::usage("orbit segment needs length >= 1"));
        }
        for p in &points {
            sys.check_state(p)?;
        }
        let genuine = points.windows(2).all(|w| {
            let img = sys.map_unchecked(&w[0]);
            sys.distance_unchecked(&img, &w[1]) <= GENUINE_STEP_TOL
        });
        Ok(OrbitSegment { points, genuine })
    }
}

/// Genuine orbit segment of length n starting at x.
pub fn orbit_segment(sys: &SystemSpec, x: &State, n: usize) -> Result<OrbitSegment> {
    if n == 0 {
        return Err(Error::usage("orbit length must be >= 1"));
    }
    sys.check_state(x)?;
    let mut points = Vec::with_capacity(n);
    points.push(x.clone());
    for _ in 1..n {
        let next = sys.map_unchecked(points.last().unwrap());
        points.push(next);
    }
    Ok(OrbitSegment { points, genuine: true })
}

/// Bounded potential function on the space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    Zero,
    /// Locally constant on the first symbol (shifts) or the point index
    /// (finite spaces).
    SymbolValues { values: Vec<f64> },
    /// Polynomial in the coordinate, ascending coefficients (interval/circle).
    Polynomial { coefficients: Vec<f64> },
}

impl Potential {
    pub fn validate_for(&self, sys: &SystemSpec) -> Result<()> {
        match self {
            Potential::Zero => Ok(()),
            Potential::SymbolValues { values } => match sys {
                SystemSpec::FullShift { .. } | SystemSpec::Sft { .. } => {
                    if values.len() >= sys.alphabet_size().unwrap() {
                        Ok(())
                    } else {
                        Err(Error::usage("symbol value table shorter than the alphabet"))
                    }
                }
                SystemSpec::Finite { images, .. } => {
                    if values.len() >= images.len() {
                        Ok(())
                    } else {
                        Err(Error::usage("symbol value table shorter than the space"))
                    }
                }
                _ => Err(Error::usage("symbol-table potential needs a discrete system")),
            },
            Potential::Polynomial { .. } => match sys {
                SystemSpec::Circle { .. } | SystemSpec::Interval { .. } => Ok(()),
                _ => Err(Error::usage("polynomial potential needs a coordinate system")),
            },
        }
    }

    pub fn eval(&self, x: &State) -> f64 {
        match (self, x) {
            (Potential::Zero, _) => 0.0,
            (Potential::SymbolValues { values }, State::Word(w)) => {
                values[w.first().copied().unwrap_or(0) as usize]
            }
            (Potential::SymbolValues { values }, State::Index(i)) => values[*i],
            (Potential::Polynomial { coefficients }, State::Point(v)) => coefficients
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * v + c),
            _ => panic!("potential incompatible with the state; validate_for first"),
        }
    }

    /// Upper bound on |f| over the space (for report error terms).
    pub fn sup_norm(&self) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::SymbolValues { values } => {
                values.iter().fold(0.0, |m, v| m.max(v.abs()))
            }
            Potential::Polynomial { coefficients } => {
                coefficients.iter().map(|c| c.abs()).sum()
            }
        }
    }
}

/// Σ_{i=0}^{n-1} f(T^i x).
pub fn birkhoff_sum(sys: &SystemSpec, f: &Potential, x: &State, n: usize) -> Result<f64> {
    let seg = orbit_segment(sys, x, n)?;
    Ok(seg.points.iter().map(|p| f.eval(p)).sum())
}

/// Finite net whose points cover the space to within `resolution`.
#[derive(Clone, Debug)]
pub struct EpsilonNet {
    pub points: Vec<State>,
    pub resolution: f64,
}

impl EpsilonNet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the nearest net point.
    pub fn nearest(&self, sys: &SystemSpec, x: &State) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = sys.distance_unchecked(p, x);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

pub fn build_net(sys: &SystemSpec, resolution: f64) -> Result<EpsilonNet> {
    build_net_capped(sys, resolution, DEFAULT_NET_CAP)
}

/// Uniform grids for interval/circle, cylinder representatives for shifts,
/// everything for finite spaces.
pub fn build_net_capped(sys: &SystemSpec, resolution: f64, cap: usize) -> Result<EpsilonNet> {
    if resolution <= 0.0 {
        return Err(Error::usage("net resolution must be positive"));
    }
    let points: Vec<State> = match sys {
        SystemSpec::Circle { .. } => {
            let n = (1.0 / resolution).ceil() as usize;
            check_cap("net size", n, cap)?;
            (0..n).map(|i| State::Point(i as f64 / n as f64)).collect()
        }
        SystemSpec::Interval { .. } => {
            let n = (1.0 / resolution).ceil() as usize;
            check_cap("net size", n + 1, cap)?;
            (0..=n).map(|i| State::Point(i as f64 / n as f64)).collect()
        }
        SystemSpec::FullShift { .. } | SystemSpec::Sft { .. } => {
            let mut m = 0usize;
            while 0.5f64.powi(m as i32) >= resolution {
                m += 1;
            }
            let words = admissible_words(sys, m, cap)?;
            words.into_iter().map(State::word).collect()
        }
        SystemSpec::Finite { images, .. } => {
            (0..images.len()).map(State::Index).collect()
        }
    };
    Ok(EpsilonNet { points, resolution })
}

fn check_cap(what: &str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::Resource {
            what: what.to_string(),
            reached: value,
            cap,
        })
    } else {
        Ok(())
    }
}

/// All admissible words of length `len`, in lexicographic order.
pub fn admissible_words(sys: &SystemSpec, len: usize, cap: usize) -> Result<Vec<Vec<u8>>> {
    let k = sys
        .alphabet_size()
        .ok_or_else(|| Error::usage("admissible_words needs a shift system"))?;
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(words.len() * k);
        for w in &words {
            for s in 0..k as u8 {
                if word_step_allowed(sys, w.last().copied(), s) {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
        }
        check_cap("admissible word count", next.len(), cap)?;
        words = next;
    }
    Ok(words)
}

fn word_step_allowed(sys: &SystemSpec, prev: Option<u8>, next: u8) -> bool {
    match sys {
        SystemSpec::FullShift { .. } => true,
        SystemSpec::Sft { transitions } => {
            prev.map_or(true, |a| transitions[a as usize][next as usize] == 1)
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn doubling() -> SystemSpec {
        SystemSpec::Circle { map: CircleMap::Doubling }
    }

    #[test]
    fn doubling_map_point() {
        let sys = doubling();
        let y = sys.evaluate_map(&State::Point(0.3)).unwrap();
        assert_eq!(y, State::Point(0.6));
    }

    #[test]
    fn shift_drops_first_symbol() {
        let sys = SystemSpec::FullShift { symbols: 2 };
        let x = State::word(vec![0, 1, 1, 0, 1]);
        let y = sys.evaluate_map(&x).unwrap();
        assert_eq!(y, State::word(vec![1, 1, 0, 1]));
    }

    #[test]
    fn sft_rejects_forbidden_word() {
        let sys = SystemSpec::golden_mean();
        let bad = State::word(vec![1, 1, 0]);
        assert!(matches!(sys.evaluate_map(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn circle_wraps_distance() {
        let sys = doubling();
        let d = sys.distance(&State::Point(0.1), &State::Point(0.9)).unwrap();
        assert!((d - 0.2).abs() < 1e-15);
    }

    #[test]
    fn shift_distance_first_disagreement() {
        let sys = SystemSpec::FullShift { symbols: 2 };
        let u = State::word(vec![0, 1, 1, 1]);
        let v = State::word(vec![1, 1, 1, 1]);
        assert_eq!(sys.distance(&u, &v).unwrap(), 1.0);
        let w = State::word(vec![0, 1, 1, 1]);
        assert_eq!(sys.distance(&u, &w).unwrap(), 0.0);
    }

    #[test]
    fn orbit_doubling() {
        let sys = doubling();
        let seg = orbit_segment(&sys, &State::Point(0.1), 4).unwrap();
        let expect = [0.1, 0.2, 0.4, 0.8];
        for (p, e) in seg.points.iter().zip(expect) {
            match p {
                State::Point(v) => assert!((v - e).abs() < 1e-12),
                _ => unreachable!(),
            }
        }
        assert!(seg.genuine);
    }

    #[test]
    fn orbit_rotation_and_cycle() {
        let sys = SystemSpec::Circle {
            map: CircleMap::Rotation { theta: 0.25 },
        };
        let seg = orbit_segment(&sys, &State::Point(0.0), 4).unwrap();
        assert_eq!(
            seg.points,
            vec![
                State::Point(0.0),
                State::Point(0.25),
                State::Point(0.5),
                State::Point(0.75)
            ]
        );
        let cyc = SystemSpec::cycle(3);
        let seg = orbit_segment(&cyc, &State::Index(0), 4).unwrap();
        assert_eq!(
            seg.points,
            vec![State::Index(0), State::Index(1), State::Index(2), State::Index(0)]
        );
    }

    #[test]
    fn orbit_truncation_is_prefix() {
        let sys = doubling();
        let long = orbit_segment(&sys, &State::Point(0.37), 9).unwrap();
        let short = orbit_segment(&sys, &State::Point(0.37), 5).unwrap();
        assert_eq!(&long.points[..5], &short.points[..]);
    }

    #[test]
    fn birkhoff_examples() {
        let shift = SystemSpec::FullShift { symbols: 2 };
        let f = Potential::SymbolValues { values: vec![0.0, 1.0] };
        let x = State::word(vec![0, 1, 0, 1]);
        assert_eq!(birkhoff_sum(&shift, &f, &x, 4).unwrap(), 2.0);

        let sys = doubling();
        let id = Potential::Polynomial { coefficients: vec![0.0, 1.0] };
        let s = birkhoff_sum(&sys, &id, &State::Point(0.1), 4).unwrap();
        assert!((s - 1.5).abs() < 1e-12);

        assert_eq!(birkhoff_sum(&sys, &Potential::Zero, &State::Point(0.3), 10).unwrap(), 0.0);
    }

    #[test]
    fn birkhoff_additivity() {
        let sys = SystemSpec::Interval {
            map: IntervalMap::Tent { slope: 2.0 },
        };
        let f = Potential::Polynomial { coefficients: vec![0.1, -0.3, 0.7] };
        let x = State::Point(0.371);
        let (n, m) = (7, 5);
        let whole = birkhoff_sum(&sys, &f, &x, n + m).unwrap();
        let head = birkhoff_sum(&sys, &f, &x, n).unwrap();
        let mid = orbit_segment(&sys, &x, n + 1).unwrap().points[n].clone();
        let tail = birkhoff_sum(&sys, &f, &mid, m).unwrap();
        assert!((whole - head - tail).abs() < 1e-9);
    }

    #[test]
    fn net_examples() {
        let interval = SystemSpec::Interval {
            map: IntervalMap::Tent { slope: 2.0 },
        };
        let net = build_net(&interval, 0.25).unwrap();
        assert_eq!(net.points.len(), 5);

        let shift = SystemSpec::FullShift { symbols: 2 };
        let net = build_net(&shift, 0.25).unwrap();
        assert_eq!(net.points.len(), 8);

        let fin = SystemSpec::cycle(3);
        let net = build_net(&fin, 0.7).unwrap();
        assert_eq!(net.points.len(), 3);
    }

    #[test]
    fn net_covering_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sys in [
            doubling(),
            SystemSpec::Interval { map: IntervalMap::Logistic { r: 3.9 } },
            SystemSpec::FullShift { symbols: 2 },
            SystemSpec::golden_mean(),
        ] {
            let net = build_net(&sys, 0.125).unwrap();
            for _ in 0..1000 {
                let x = sys.random_state(&mut rng);
                let i = net.nearest(&sys, &x);
                assert!(sys.distance_unchecked(&net.points[i], &x) <= net.resolution + 1e-12);
            }
        }
    }

    #[test]
    fn metric_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let systems = [
            doubling(),
            SystemSpec::Interval { map: IntervalMap::Tent { slope: 2.0 } },
            SystemSpec::FullShift { symbols: 3 },
            SystemSpec::golden_mean(),
            SystemSpec::cycle(4),
        ];
        for sys in &systems {
            sys.validate().unwrap();
            for _ in 0..10_000 {
                let (x, y, z) = (
                    sys.random_state(&mut rng),
                    sys.random_state(&mut rng),
                    sys.random_state(&mut rng),
                );
                let dxy = sys.distance_unchecked(&x, &y);
                let dyx = sys.distance_unchecked(&y, &x);
                let dxz = sys.distance_unchecked(&x, &z);
                let dyz = sys.distance_unchecked(&y, &z);
                assert!(dxy >= 0.0);
                assert_eq!(dxy, dyx);
                assert!(dxz <= dxy + dyz + 1e-12);
                assert_eq!(sys.distance_unchecked(&x, &x), 0.0);
                if !matches!(sys, SystemSpec::Circle { .. } | SystemSpec::Interval { .. })
                    && dxy == 0.0
                {
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn word_canonicalization() {
        assert_eq!(State::word(vec![1, 0, 0]), State::word(vec![1]));
        assert_eq!(State::word(vec![0, 0]), State::word(vec![]));
    }
}
