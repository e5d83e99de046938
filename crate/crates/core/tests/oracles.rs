//! Production algorithms pinned against naive enumeration oracles.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pressure_core::dynamics::{orbit_segment, CircleMap, State, SystemSpec};
use pressure_core::fk_metric::best_match_size;
use pressure_core::fk_pseudo_orbit::longest_chain;
use pressure_core::pseudo_orbit::{count_periodic_po, TransitionGraph};

fn doubling() -> SystemSpec {
    SystemSpec::Circle { map: CircleMap::Doubling }
}

#[test]
fn match_dp_equals_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let systems = [doubling(), SystemSpec::FullShift { symbols: 2 }];
    for trial in 0..40 {
        let sys = &systems[trial % systems.len()];
        let n = rng.gen_range(1..=6);
        let x = sys.random_state(&mut rng);
        let y = sys.random_state(&mut rng);
        let delta = rng.gen_range(0.01..1.0);
        let ox = orbit_segment(sys, &x, n).unwrap();
        let oy = orbit_segment(sys, &y, n).unwrap();
        let dp = best_match_size(sys, &ox, &oy, delta).unwrap();
        let oracle = common::exhaustive_match_size(sys, &ox.points, &oy.points, delta);
        assert_eq!(dp.size, oracle, "trial {trial}: n={n} delta={delta}");
    }
}

#[test]
fn chain_dp_equals_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let sys = doubling();
    for trial in 0..50 {
        let n = rng.gen_range(1..=6);
        let seg: Vec<State> = (0..n)
            .map(|_| State::Point(rng.gen_range(0.0..1.0)))
            .collect();
        let alpha = rng.gen_range(0.0..0.5);
        let dp = longest_chain(&sys, &seg, alpha).unwrap();
        let oracle = common::exhaustive_longest_chain(&sys, &seg, alpha);
        assert_eq!(dp.k, oracle, "trial {trial}: n={n} alpha={alpha}");
        assert!(dp.verify(&sys, &seg, alpha));
    }
}

#[test]
fn trace_counts_equal_closed_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..15 {
        let m = rng.gen_range(2..=8);
        let adj: Vec<Vec<u8>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_bool(0.4) as u8).collect())
            .collect();
        let g = TransitionGraph::from_adjacency(&adj, vec![0.0; m]);
        for n in 1..=6 {
            let oracle = common::closed_path_count(&adj, n);
            let via_trace = count_periodic_po(&g, n).unwrap();
            assert_eq!(via_trace, (oracle as f64).ln(), "trial {trial}: n={n}");
        }
    }
}

#[test]
fn itinerary_oracle_matches_closed_forms() {
    // binary cells realize every word; 4 cells pin one extra leading bit
    for n in 1..=10 {
        assert_eq!(common::doubling_itinerary_count(2, n), 1 << n);
    }
    for n in 1..=7 {
        assert_eq!(common::doubling_itinerary_count(4, n), 1 << (n + 1));
    }
}
