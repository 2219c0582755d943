//! Search structure against a plain (square, mark) list.

use dynis::geom_core::{QSquare, Quadrant, QUADRANTS};
use dynis::search_structure::{point_of, Mark, Pick, QueryBox, SearchStructure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BITS: u32 = 12;

fn rand_square<R: Rng>(rng: &mut R, id: u64) -> QSquare {
    let n = 1u64 << BITS;
    let w = 1u64 << rng.gen_range(0..BITS - 2);
    let side = rng.gen_range(1..=w);
    let x = rng.gen_range(0..n - side);
    let y = rng.gen_range(0..n - side);
    QSquare { id, x0: 2 * x, y0: 2 * y, x1: 2 * (x + side), y1: 2 * (y + side), bits: BITS }
}

fn rand_mark<R: Rng>(rng: &mut R) -> Mark {
    match rng.gen_range(0..5) {
        4 => None,
        i => Some(QUADRANTS[i]),
    }
}

fn rand_box<R: Rng>(rng: &mut R, live: &[(QSquare, Mark)]) -> QueryBox {
    let lim = 2u64 << BITS;
    if !live.is_empty() && rng.gen_bool(0.3) {
        // A box around one stored square, slightly widened.
        let p = point_of(&live[rng.gen_range(0..live.len())].0);
        let mut b = QueryBox::all();
        for (d, v) in p.iter().enumerate().take(5) {
            let slack = rng.gen_range(0..64);
            b = b.with(d, v.saturating_sub(slack), v + slack);
        }
        return b;
    }
    let mut b = QueryBox::all();
    for d in 0..4 {
        let a = rng.gen_range(0..lim);
        let c = rng.gen_range(0..lim);
        b = b.with(d, a.min(c), a.max(c));
    }
    if rng.gen_bool(0.3) {
        let d = rng.gen_range(0..BITS as u64);
        b = b.with(4, d, d + rng.gen_range(0..3));
    }
    b
}

#[test]
fn matches_shadow_list() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut t = SearchStructure::new(BITS);
    let mut shadow: Vec<(QSquare, Mark)> = Vec::new();
    let mut next = 0;
    let mut worst = 0f64;
    for step in 0..10_000 {
        t.reset_visits();
        match rng.gen_range(0..10) {
            0..=3 => {
                let s = rand_square(&mut rng, next);
                next += 1;
                let m = rand_mark(&mut rng);
                t.insert(&s, m).unwrap();
                shadow.push((s, m));
            }
            4..=5 if !shadow.is_empty() => {
                let (s, _) = shadow.swap_remove(rng.gen_range(0..shadow.len()));
                assert_eq!(t.delete(s.id).unwrap(), s);
            }
            6 => {
                let b = rand_box(&mut rng, &shadow);
                let m = rand_mark(&mut rng);
                t.range_mark(&b, m);
                for e in shadow.iter_mut() {
                    if b.contains(&point_of(&e.0)) {
                        e.1 = m;
                    }
                }
            }
            _ => {
                let b = rand_box(&mut rng, &shadow);
                let m = rand_mark(&mut rng);
                let hits = shadow.iter().filter(|e| e.1 == m && b.contains(&point_of(&e.0))).map(|e| e.0.id);
                let (lo, hi) = (hits.clone().min(), hits.max());
                assert_eq!(t.range_search(&b, m, Pick::MinId).map(|s| s.id), lo, "step {}", step);
                assert_eq!(t.range_search(&b, m, Pick::MaxId).map(|s| s.id), hi, "step {}", step);
            }
        }
        let bound = ((shadow.len() + 2) as f64).log2().powi(4);
        worst = worst.max(t.visits() as f64 / bound);
        assert!(t.visits() as f64 <= bound, "step {}: {} visits, bound {:.0}", step, t.visits(), bound);
        if step % 500 == 0 {
            assert!(t.check(), "step {}", step);
            let mut want = shadow.clone();
            want.sort_by_key(|e| e.0.id);
            assert_eq!(t.dump(), want);
            for e in &shadow {
                assert_eq!(t.mark_of(e.0.id), Some(e.1));
            }
        }
    }
    assert!(worst > 0.0);
}

#[test]
fn node_queries_stay_polylogarithmic() {
    // The query shapes the quadtree issues: every square of one node.
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let bits = 30;
    let mut t = SearchStructure::new(bits);
    let n = 1 << 15;
    let mut cells = Vec::new();
    for id in 0..n as u64 {
        let depth = rng.gen_range(1..14);
        let (ix, iy) = (rng.gen_range(0..1u64 << depth), rng.gen_range(0..1u64 << depth));
        let c = dynis::geom_core::CellId::new(depth, ix, iy);
        let (cx, cy) = c.center(bits);
        let half = 1u64 << (bits - depth - 1);
        let side = rng.gen_range(half / 4..half);
        let s = QSquare { id, x0: cx - side / 2, y0: cy - side / 2, x1: cx - side / 2 + side, y1: cy - side / 2 + side, bits };
        t.insert(&s, None).unwrap();
        cells.push(dynis::geom_core::node_of_q(&s));
    }
    let bound = ((n + 2) as f64).log2().powi(4);
    let mut total = 0;
    for _ in 0..500 {
        let c = cells[rng.gen_range(0..cells.len())];
        t.reset_visits();
        t.range_mark(&QueryBox::node(&c, bits), Some(Quadrant::II));
        assert_eq!(t.range_search(&QueryBox::node(&c, bits), Some(Quadrant::II), Pick::MinId).map(|s| dynis::geom_core::node_of_q(&s)), Some(c));
        t.range_mark(&QueryBox::node(&c, bits), None);
        assert!((t.visits() as f64) <= bound);
        total += t.visits();
    }
    assert!((total as f64 / 500.0) < bound / 10.0, "mean visits {}", total / 500);
}
