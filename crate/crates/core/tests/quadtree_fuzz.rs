//! Dynamic squares under random updates, with the full invariant sweep and
//! an independent geometric check after every step.

mod common;

use std::collections::HashSet;

use dynis::geom_core::{QuadRoot, Square};
use dynis::quadtree_structure::GlobalState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn run(seed: u64, ops: usize, live_cap: usize, naive: bool) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = QuadRoot::from_seed(seed);
    let mut g = GlobalState::new(root, 1 + seed as usize % 3, naive);
    let hot: Vec<(f64, f64)> = (0..2).map(|_| (rng.gen(), rng.gen())).collect();
    let mut live: Vec<Square> = Vec::new();
    let mut shadow: HashSet<u64> = HashSet::new();
    let mut next = 0u64;
    let mut peak = 0;
    for step in 0..ops {
        let grow = live.is_empty() || (live.len() < live_cap && rng.gen_bool(0.6));
        let d = if grow {
            let s = common::mixed_square(&mut rng, next, &root, &hot);
            next += 1;
            live.push(s);
            g.insert(s).unwrap()
        } else {
            let i = rng.gen_range(0..live.len());
            let s = live.swap_remove(i);
            g.delete(s.id).unwrap()
        };
        d.to_line().apply_to(&mut shadow).unwrap_or_else(|e| panic!("seed {} step {}: {}", seed, step, e));
        g.check().unwrap_or_else(|e| panic!("seed {} step {}: {}", seed, step, e));
        let rep = g.reported();
        assert_eq!(rep.iter().copied().collect::<HashSet<_>>(), shadow, "seed {} step {}", seed, step);
        for (i, a) in rep.iter().enumerate() {
            let sa = g.square(*a).unwrap();
            for b in &rep[i + 1..] {
                assert!(!sa.intersects(g.square(*b).unwrap()), "seed {} step {}: {} meets {}", seed, step, a, b);
            }
        }
        peak = peak.max(rep.len());
    }
    peak
}

#[test]
fn quadtree_random_ops() {
    let mut peak = 0;
    for seed in 0..40 {
        peak = peak.max(run(seed, 600, 200, seed % 4 == 3));
    }
    assert!(peak >= 5, "reported sets stay tiny: {}", peak);
}
