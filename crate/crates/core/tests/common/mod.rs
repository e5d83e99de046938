//! Brute-force oracles shared by the integration suites. Everything here is
//! deliberately naive: exhaustive enumeration at small sizes, used to pin the
//! production algorithms.

#![allow(dead_code)]

use pressure_core::dynamics::{State, SystemSpec};

/// Largest order-preserving partial bijection between the two orbit index
/// sets with all matched distances < delta (strict), by enumerating every
/// equal-size pair of index subsets. O(4^n) pairs; n <= 10 or so.
pub fn exhaustive_match_size(sys: &SystemSpec, ox: &[State], oy: &[State], delta: f64) -> usize {
    let n = ox.len();
    assert_eq!(n, oy.len());
    let mut best = 0;
    for ma in 0u32..1 << n {
        let k = ma.count_ones();
        if k as usize <= best {
            continue;
        }
        let ia: Vec<usize> = (0..n).filter(|&i| ma >> i & 1 == 1).collect();
        'outer: for mb in 0u32..1 << n {
            if mb.count_ones() != k {
                continue;
            }
            let ib: Vec<usize> = (0..n).filter(|&i| mb >> i & 1 == 1).collect();
            for (&i, &j) in ia.iter().zip(&ib) {
                if sys.distance(&ox[i], &oy[j]).unwrap() >= delta {
                    continue 'outer;
                }
            }
            best = k as usize;
            break;
        }
    }
    best
}

/// Longest chain by enumerating every pair of equal-size increasing index
/// sequences and checking the step inequalities directly. n <= 8.
pub fn exhaustive_longest_chain(sys: &SystemSpec, seg: &[State], alpha: f64) -> usize {
    let n = seg.len();
    // iterate table
    let table: Vec<Vec<State>> = seg
        .iter()
        .map(|x| {
            let mut row = vec![x.clone()];
            for m in 1..n {
                let next = sys.evaluate_map(&row[m - 1]).unwrap();
                row.push(next);
            }
            row
        })
        .collect();
    let mut best = 1;
    for mi in 0u32..1 << n {
        let k = mi.count_ones() as usize;
        if k <= best {
            continue;
        }
        let is: Vec<usize> = (0..n).filter(|&i| mi >> i & 1 == 1).collect();
        'outer: for mj in 0u32..1 << n {
            if mj.count_ones() as usize != k {
                continue;
            }
            let js: Vec<usize> = (0..n).filter(|&i| mj >> i & 1 == 1).collect();
            for t in 0..k - 1 {
                let steps = js[t + 1] - js[t];
                let z = &table[is[t]][steps];
                if sys.distance(z, &seg[is[t + 1]]).unwrap() > alpha {
                    continue 'outer;
                }
            }
            best = k;
            break;
        }
    }
    best
}

/// Number of closed paths of length n in a 0/1 adjacency matrix, by direct
/// path extension. Exact in u64 at oracle scale.
pub fn closed_path_count(adjacency: &[Vec<u8>], n: usize) -> u64 {
    let m = adjacency.len();
    let mut total = 0u64;
    for start in 0..m {
        let mut stack = vec![(start, 0usize)];
        while let Some((v, depth)) = stack.pop() {
            if depth == n {
                if v == start {
                    total += 1;
                }
                continue;
            }
            for w in 0..m {
                if adjacency[v][w] != 0 {
                    stack.push((w, depth + 1));
                }
            }
        }
    }
    total
}

/// Number of realizable doubling-map itineraries of length n over `cells`
/// equal circle arcs, by forward interval arithmetic. The realizable point
/// set for a word prefix stays a union of arcs; a word counts when that set
/// keeps positive length.
pub fn doubling_itinerary_count(cells: usize, n: usize) -> u64 {
    const EPS: f64 = 1e-12;
    type Arcs = Vec<(f64, f64)>;

    // image of arcs under x -> 2x mod 1
    fn image(arcs: &Arcs) -> Arcs {
        let mut out = Vec::new();
        for &(a, b) in arcs {
            if b - a >= 0.5 {
                return vec![(0.0, 1.0)];
            }
            let (x, y) = (2.0 * a, 2.0 * b);
            if y <= 1.0 {
                out.push((x, y));
            } else if x >= 1.0 {
                out.push((x - 1.0, y - 1.0));
            } else {
                out.push((x, 1.0));
                out.push((0.0, y - 1.0));
            }
        }
        out
    }

    fn clip(arcs: &Arcs, lo: f64, hi: f64) -> Arcs {
        arcs.iter()
            .filter_map(|&(a, b)| {
                let (x, y) = (a.max(lo), b.min(hi));
                (y - x > EPS).then_some((x, y))
            })
            .collect()
    }

    fn walk(arcs: Arcs, remaining: usize, cells: usize) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let next = image(&arcs);
        let mut total = 0;
        for c in 0..cells {
            let lo = c as f64 / cells as f64;
            let hi = (c + 1) as f64 / cells as f64;
            let clipped = clip(&next, lo, hi);
            if !clipped.is_empty() {
                total += walk(clipped, remaining - 1, cells);
            }
        }
        total
    }

    let mut total = 0;
    for c in 0..cells {
        let lo = c as f64 / cells as f64;
        let hi = (c + 1) as f64 / cells as f64;
        total += walk(vec![(lo, hi)], n - 1, cells);
    }
    total
}
