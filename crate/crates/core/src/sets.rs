//! Greedy and exact separated-subset selection, generic over the pairwise
//! separation predicate. Shared by the Bowen, FK and FKPO partition sums.

use crate::error::{Error, Result};

/// Greedy maximal selection in pool order: keep index i iff it is separated
/// from every previously kept index. Maximal by construction, hence the kept
/// set also spans the pool under the complementary "≤" relation.
pub fn greedy_separated<F>(pool_len: usize, mut separated: F) -> Vec<usize>
where
    F: FnMut(usize, usize) -> bool,
{
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..pool_len {
        if kept.iter().all(|&j| separated(j, i)) {
            kept.push(i);
        }
    }
    kept
}

struct Search<'a> {
    weights: &'a [f64],
    conflicts: &'a [Vec<usize>],
    order: &'a [usize],
    suffix_weight: &'a [f64],
    blocked: Vec<u32>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    best_weight: f64,
}

impl Search<'_> {
    fn run(&mut self, k: usize, acc: f64) {
        if acc > self.best_weight {
            self.best_weight = acc;
            self.best = self.chosen.clone();
        }
        if k == self.order.len() || acc + self.suffix_weight[k] <= self.best_weight {
            return;
        }
        let v = self.order[k];
        if self.blocked[v] == 0 {
            self.chosen.push(v);
            for &u in &self.conflicts[v] {
                self.blocked[u] += 1;
            }
            self.run(k + 1, acc + self.weights[v]);
            for &u in &self.conflicts[v] {
                self.blocked[u] -= 1;
            }
            self.chosen.pop();
        }
        self.run(k + 1, acc);
    }
}

/// Exact maximum-weight separated subset (max-weight independent set of the
/// "not separated" conflict graph), branch and bound. Intended for oracle
/// scale; errors out beyond `cap` vertices when conflicts are present.
pub fn exact_max_weight_separated<F>(
    weights: &[f64],
    mut separated: F,
    cap: usize,
) -> Result<Vec<usize>>
where
    F: FnMut(usize, usize) -> bool,
{
    let n = weights.len();
    let mut conflicts: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut any_conflict = false;
    for i in 0..n {
        for j in i + 1..n {
            if !separated(i, j) {
                conflicts[i].push(j);
                conflicts[j].push(i);
                any_conflict = true;
            }
        }
    }
    if !any_conflict {
        return Ok((0..n).collect());
    }
    if n > cap {
        return Err(Error::Resource {
            what: "exact separated-set search".into(),
            reached: n,
            cap,
        });
    }

    // weight-descending order tightens the suffix bound early
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).unwrap());
    let mut suffix_weight = vec![0.0; n + 1];
    for k in (0..n).rev() {
        suffix_weight[k] = suffix_weight[k + 1] + weights[order[k]];
    }

    let mut search = Search {
        weights,
        conflicts: &conflicts,
        order: &order,
        suffix_weight: &suffix_weight,
        blocked: vec![0; n],
        chosen: Vec::new(),
        best: Vec::new(),
        best_weight: f64::NEG_INFINITY,
    };
    search.run(0, 0.0);
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}
