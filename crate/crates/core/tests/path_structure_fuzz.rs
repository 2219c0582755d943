//! Path structure under random updates, splits, merges, extends and
//! contracts, checked against enumeration after every step.

mod common;

use std::collections::{BTreeMap, HashSet};

use dynis::geom_core::{node_of_q, CellId, QSquare, QUADRANTS};
use dynis::oracle::{self, OInterval};
use dynis::path_structure::PathStructure;
use dynis::search_structure::{QueryBox, SearchStructure};
use dynis::squares_static::{depth_interval, PathDescriptor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BITS: u32 = 20;

struct World {
    chain: CellId,
    top: u32,
    bottom: u32,
    search: SearchStructure,
    squares: BTreeMap<u64, QSquare>,
    shadow: HashSet<u64>,
    ops: usize,
    reported: usize,
}

impl World {
    fn desc(&self) -> PathDescriptor {
        PathDescriptor { top: self.chain.ancestor(self.top), bottom: self.chain.ancestor(self.bottom) }
    }

    fn mark_for(&self, d: u32) -> Option<dynis::geom_core::Quadrant> {
        let p = self.desc();
        p.contains_depth(d).then(|| p.label_at(d))
    }

    fn remark(&mut self, d: u32) {
        let m = self.mark_for(d);
        self.search.range_mark(&QueryBox::node(&self.chain.ancestor(d), BITS), m);
    }

    fn squares_at(&self, lo: u32, hi: u32) -> usize {
        self.squares.values().filter(|s| (lo..=hi).contains(&node_of_q(s).depth)).count()
    }

    fn apply(&mut self, d: &dynis::delta::Delta) {
        d.apply_to(&mut self.shadow).unwrap();
        self.reported += d.len();
        self.ops += 1;
    }

    fn check(&self, ps: &PathStructure, k: usize, tag: &str) {
        ps.check(&self.search).unwrap_or_else(|e| panic!("{}: {}", tag, e));
        let p = self.desc();
        assert_eq!(ps.descriptor(), p);
        for q in QUADRANTS {
            let all: Vec<OInterval<_>> = self
                .squares
                .values()
                .filter(|s| {
                    let d = node_of_q(s).depth;
                    p.contains_depth(d) && p.label_at(d) == q
                })
                .map(|s| {
                    let x = depth_interval(&p, q, s).unwrap().padded(s.id);
                    OInterval { id: x.id, l: x.lkey(), r: x.rkey() }
                })
                .collect();
            let ids = ps.core(q).ids();
            assert!(oracle::check_k_valid(&all, &ids, k).pass, "{}: {:?} not k-valid", tag, q);
        }
        let rep = ps.reported();
        let got: HashSet<u64> = rep.iter().copied().collect();
        assert_eq!(got, self.shadow, "{}: delta replay", tag);
        let (bx0, by0, bx1, by1) = p.bottom.bounds(BITS);
        let bottom_cell = QSquare { id: 0, x0: bx0, y0: by0, x1: bx1, y1: by1, bits: BITS };
        for (i, a) in rep.iter().enumerate() {
            let sa = &self.squares[a];
            assert!(!sa.intersects(&bottom_cell), "{}: {} meets the bottom cell", tag, a);
            for b in &rep[i + 1..] {
                assert!(!sa.intersects(&self.squares[b]), "{}: {} and {} intersect", tag, a, b);
            }
        }
    }
}

fn run(seed: u64, k: usize, steps: usize) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(6..BITS - 1);
    let chain = common::random_chain(&mut rng, len, 0.25);
    let mut w = World {
        chain,
        top: rng.gen_range(0..3),
        bottom: len,
        search: SearchStructure::new(BITS),
        squares: BTreeMap::new(),
        shadow: HashSet::new(),
        ops: 0,
        reported: 0,
    };
    let mut ps = PathStructure::new(w.desc(), k);
    let mut next_id = 1u64;
    for step in 0..steps {
        let tag = format!("seed {} step {}", seed, step);
        match rng.gen_range(0..20) {
            0..=9 => {
                let d = rng.gen_range(w.top + 1..=len);
                let Some(s) = common::random_centered(&mut rng, next_id, chain.ancestor(d), BITS) else { continue };
                next_id += 1;
                w.search.insert(&s, w.mark_for(d)).unwrap();
                w.squares.insert(s.id, s);
                if w.desc().contains_depth(d) {
                    let delta = ps.insert(&w.search, &s).unwrap();
                    w.apply(&delta);
                }
            }
            10..=14 => {
                if w.squares.is_empty() {
                    continue;
                }
                let i = rng.gen_range(0..w.squares.len());
                let id = *w.squares.keys().nth(i).unwrap();
                let s = w.squares.remove(&id).unwrap();
                w.search.delete(id).unwrap();
                if w.desc().contains_depth(node_of_q(&s).depth) {
                    let delta = ps.delete(&w.search, &s).unwrap();
                    w.apply(&delta);
                }
            }
            15..=16 => {
                // Split at a path node and merge straight back.
                if w.bottom - w.top < 2 {
                    continue;
                }
                let e = rng.gen_range(w.top + 1..w.bottom);
                let eta = chain.ancestor(e);
                w.search.range_mark(&QueryBox::node(&eta, BITS), None);
                let (d1, lower) = ps.split(&w.search, eta).unwrap();
                w.apply(&d1);
                let mut both: HashSet<u64> = ps.reported().into_iter().collect();
                both.extend(lower.reported());
                assert_eq!(both, w.shadow, "{}: split replay", tag);
                ps.check(&w.search).unwrap();
                lower.check(&w.search).unwrap();
                w.remark(e);
                let d2 = ps.merge(&w.search, lower).unwrap();
                w.apply(&d2);
            }
            17..=18 => {
                // Extend over an empty stretch below the bottom.
                if w.bottom >= len {
                    continue;
                }
                let nb = rng.gen_range(w.bottom + 1..=len);
                if w.squares_at(w.bottom + 1, nb - 1) > 0 {
                    continue;
                }
                let old = w.bottom;
                w.bottom = nb;
                w.remark(old);
                let delta = ps.extend(&w.search, chain.ancestor(nb)).unwrap();
                w.apply(&delta);
            }
            _ => {
                // Contract onto a path node with nothing strictly below it.
                if w.bottom - w.top < 2 || rng.gen_bool(0.7) {
                    continue;
                }
                let e = rng.gen_range(w.top + 1..w.bottom);
                if w.squares_at(e + 1, w.bottom - 1) > 0 {
                    continue;
                }
                let old = w.bottom;
                w.bottom = e;
                for d in e..old {
                    w.remark(d);
                }
                let delta = ps.contract(&w.search, chain.ancestor(e)).unwrap();
                w.apply(&delta);
            }
        }
        w.check(&ps, k, &tag);
    }
    (w.ops, w.reported)
}

#[test]
fn path_structure_random_ops() {
    let (mut ops, mut reported) = (0, 0);
    for seed in 0..120 {
        let (o, r) = run(seed, 1 + (seed as usize % 3), 300);
        ops += o;
        reported += r;
    }
    assert!(ops > 5000);
    assert!(reported <= 64 * ops, "{} reported over {} ops", reported, ops);
}
