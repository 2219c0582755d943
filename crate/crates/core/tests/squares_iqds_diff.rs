//! The implicit square view against explicit intervals built by enumeration.

use std::sync::Arc;

mod common;

use dynis::geom_core::{node_of_q, Bound, CellId, EKey, Interval, QSquare, Quadrant, RationalKey, Side, QUADRANTS};
use dynis::iqds::{Direction, Iqds, IqdsExplicit};
use dynis::search_structure::SearchStructure;
use dynis::squares_iqds::{padded, ImplicitView};
use dynis::squares_static::PathDescriptor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BITS: u32 = 16;

fn random_path<R: Rng>(rng: &mut R, len: u32) -> PathDescriptor {
    let c = common::random_chain(rng, len, 0.3);
    let top = c.ancestor(rng.gen_range(0..3));
    PathDescriptor { top, bottom: c }
}

fn random_centered<R: Rng>(rng: &mut R, id: u64, node: CellId) -> Option<QSquare> {
    common::random_centered(rng, id, node, BITS)
}

/// Deepest `q` node of the path at or below `lo` whose center `s` holds, by scan.
fn scan_hi(p: &PathDescriptor, q: Quadrant, s: &QSquare, lo: u32) -> u32 {
    let mut hi = lo;
    for d in lo..p.bottom.depth {
        if p.label_at(d) == q && s.contains_point(p.node_at(d).center(BITS)) {
            hi = d;
        }
    }
    hi
}

fn random_bound<R: Rng>(rng: &mut R, maxd: i64, ids: u64) -> Bound {
    match rng.gen_range(0..12) {
        0 => Bound::NegInf,
        1 => Bound::PosInf,
        _ => Bound::Key(EKey {
            v: RationalKey::new(rng.gen_range(-3..3 * maxd + 3), 3),
            side: if rng.gen_bool(0.5) { Side::L } else { Side::R },
            id: rng.gen_range(0..ids + 2),
        }),
    }
}

fn same(a: &Option<Arc<Interval>>, b: &Option<Arc<Interval>>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => x.id == y.id && x.l == y.l && x.r == y.r,
        _ => false,
    }
}

#[test]
fn implicit_view_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut queries = 0u64;
    let mut seen = 0usize;
    for round in 0..400 {
        let len = rng.gen_range(3..14);
        let p = random_path(&mut rng, len);
        let mut t = SearchStructure::new(BITS);
        let mut next_id = 0u64;
        let mut placed: Vec<QSquare> = Vec::new();
        for _ in 0..rng.gen_range(0..40) {
            let d = rng.gen_range(p.top.depth + 1..p.bottom.depth.max(p.top.depth + 2));
            if !p.contains_depth(d) {
                continue;
            }
            if let Some(s) = random_centered(&mut rng, next_id, p.node_at(d)) {
                t.insert(&s, Some(p.label_at(d))).unwrap();
                placed.push(s);
                next_id += 1;
            }
        }
        // Noise on the top node, outside the view.
        for _ in 0..5 {
            if let Some(s) = random_centered(&mut rng, next_id, p.top) {
                t.insert(&s, Some(QUADRANTS[rng.gen_range(0..4)])).unwrap();
                next_id += 1;
            }
        }
        for q in QUADRANTS {
            for _ in 0..4 {
                let band_lo = rng.gen_range(0..p.bottom.depth + 1);
                let band_hi = rng.gen_range(band_lo..p.bottom.depth + 2);
                let hidden = rng.gen_bool(0.3).then(|| rng.gen_range(0..p.bottom.depth + 1));
                let mut extras = IqdsExplicit::new();
                if rng.gen_bool(0.3) {
                    let e = p.bottom.depth.saturating_sub(1);
                    extras
                        .insert(Arc::new(Interval::new(u64::MAX - 1, RationalKey::new(6 * e as i64 - 1, 6), RationalKey::new(6 * e as i64 + 1, 6)).unwrap()))
                        .unwrap();
                }
                let view = ImplicitView::new(&t, p, q).with_band(band_lo, band_hi).with_hidden(hidden).with_extras(&extras);

                let mut ex = extras.clone();
                let mut visible = Vec::new();
                for s in &placed {
                    let d = node_of_q(s).depth;
                    if p.label_at(d) != q || d < band_lo || d > band_hi || hidden == Some(d) {
                        continue;
                    }
                    let hi = scan_hi(&p, q, s, d);
                    ex.insert(Arc::new(padded(d, hi, s.id))).unwrap();
                    visible.push((s.id, d, hi));
                    seen += 1;
                    assert_eq!(view.get_interval(s).unwrap().hi, hi, "round {}", round);
                }
                assert!(same(&view.max_left(), &ex.max_left()));
                for _ in 0..40 {
                    let a = random_bound(&mut rng, p.bottom.depth as i64, next_id);
                    let b = random_bound(&mut rng, p.bottom.depth as i64, next_id);
                    for dir in [Direction::LeftmostRight, Direction::RightmostLeft] {
                        let got = view.report_extreme(dir, &a, &b);
                        let want = ex.report_extreme(dir, &a, &b);
                        assert!(same(&got, &want), "round {} {:?} {:?} {:?}: {:?} vs {:?}", round, dir, a, b, got, want);
                        queries += 1;
                    }
                }
                for &(id, _, _) in &visible {
                    assert!(same(&view.endpoints(id), &ex.find_by_left(&ex.dump().iter().find(|x| x.id == id).unwrap().lkey())));
                }
                let qd = view.qdepths().to_vec();
                if qd.len() >= 2 {
                    let mut pick = || qd[rng.gen_range(0..qd.len())];
                    let mut ds = [pick(), pick(), pick(), pick()];
                    ds.sort();
                    let got = view.region_exists(ds[0], ds[1], ds[2], ds[3]).unwrap().map(|s| s.id);
                    let want = visible
                        .iter()
                        .filter(|&&(_, lo, hi)| ds[0] <= lo && lo <= ds[1] && ds[2] <= hi && hi <= ds[3])
                        .map(|&(id, _, _)| id)
                        .min();
                    assert_eq!(got, want, "round {} region {:?}", round, ds);
                }
            }
        }
    }
    assert!(queries > 10_000);
    assert!(seen > 500, "only {} visible squares", seen);
}
