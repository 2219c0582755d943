#![allow(dead_code)]

use dynis::geom_core::{node_of_q, CellId, Interval, QSquare, QuadRoot, RationalKey, Square, QUADRANTS};
use rand::Rng;

/// Random interval with endpoints on a fine integer grid; lengths vary over
/// several scales so containment and multi-step exchanges are common.
pub fn rand_interval<R: Rng>(rng: &mut R, id: u64, span: i64) -> Interval {
    let len = match rng.gen_range(0..4) {
        0 => rng.gen_range(1..span / 50 + 2),
        1 => rng.gen_range(1..span / 10 + 2),
        2 => rng.gen_range(1..span / 4 + 2),
        _ => rng.gen_range(1..span / 100 + 2),
    };
    let l = rng.gen_range(0..span);
    Interval::new(id, RationalKey::from_int(l), RationalKey::from_int(l + len)).unwrap()
}

/// Square on `node` holding its center, sized to reach a random number of
/// levels down. `None` if the draw leaves the node's cell.
pub fn random_centered<R: Rng>(rng: &mut R, id: u64, node: CellId, bits: u32) -> Option<QSquare> {
    let (bx0, by0, bx1, by1) = node.bounds(bits);
    let (cx, cy) = node.center(bits);
    let half = (bx1 - bx0 + 1) / 2;
    let scale = rng.gen_range(0..bits - node.depth + 1);
    let side = (half >> scale).max(1) + rng.gen_range(0..4);
    let ox = rng.gen_range(0..=side);
    let oy = rng.gen_range(0..=side);
    let s = QSquare { id, x0: cx.checked_sub(ox)?, y0: cy.checked_sub(oy)?, x1: cx - ox + side, y1: cy - oy + side, bits };
    (bx0 <= s.x0 && s.x1 <= bx1 && by0 <= s.y0 && s.y1 <= by1 && node_of_q(&s) == node).then_some(s)
}

/// Chain of `len` cells below the root; quadrants change with probability
/// `p` per step, so long monotone runs are common.
pub fn random_chain<R: Rng>(rng: &mut R, len: u32, p: f64) -> CellId {
    let mut c = CellId::ROOT;
    let mut q = QUADRANTS[rng.gen_range(0..4)];
    for _ in 0..len {
        if rng.gen_bool(p) {
            q = QUADRANTS[rng.gen_range(0..4)];
        }
        c = c.child(q);
    }
    c
}

/// Random square: half uniform with log-uniform size, half nested around a
/// hotspot so that deep single-child chains form.
pub fn random_square<R: Rng>(rng: &mut R, id: u64, hot: &[(f64, f64)]) -> Square {
    let size = 10f64.powf(rng.gen_range(-4.0..-0.7));
    if hot.is_empty() || rng.gen_bool(0.5) {
        let x = rng.gen_range(0.0..1.0 - size);
        let y = rng.gen_range(0.0..1.0 - size);
        Square::new(id, x, y, size)
    } else {
        let (px, py) = hot[rng.gen_range(0..hot.len())];
        let x = (px - size * rng.gen::<f64>()).clamp(0.0, 1.0 - size);
        let y = (py - size * rng.gen::<f64>()).clamp(0.0, 1.0 - size);
        Square::new(id, x, y, size)
    }
}

/// Centered square on the depth-`depth` cell of `root` containing `p`:
/// it holds that cell's center and stays inside the cell, so it sits on the
/// chain of cells toward `p`.
pub fn chain_square<R: Rng>(rng: &mut R, id: u64, root: &QuadRoot, p: (f64, f64), depth: u32) -> Square {
    let cw = root.w / (1u64 << depth) as f64;
    let ix = ((p.0 - root.ox) / cw).floor();
    let iy = ((p.1 - root.oy) / cw).floor();
    let (cx, cy) = (root.ox + cw * (ix + 0.5), root.oy + cw * (iy + 0.5));
    let half = cw / 2.0 * 0.98;
    let size = half * 10f64.powf(rng.gen_range(-2.0..0.0)) * rng.gen_range(1.0..2.0);
    let lo = (size - half).max(0.0);
    let ax = rng.gen_range(lo..=size.min(half));
    let ay = rng.gen_range(lo..=size.min(half));
    Square::new(id, cx - ax, cy - ay, size)
}

/// Mixed workload: chain squares around hotspots plus uniform noise.
pub fn mixed_square<R: Rng>(rng: &mut R, id: u64, root: &QuadRoot, hot: &[(f64, f64)]) -> Square {
    if rng.gen_bool(0.4) {
        return random_square(rng, id, &[]);
    }
    let p = hot[rng.gen_range(0..hot.len())];
    let depth = rng.gen_range(1..18);
    let s = chain_square(rng, id, root, p, depth);
    if s.x < 0.0 || s.y < 0.0 || s.x + s.size > 1.0 || s.y + s.size > 1.0 {
        random_square(rng, id, &[])
    } else {
        s
    }
}
