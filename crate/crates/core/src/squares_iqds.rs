//! Implicit interval queries over one monotone subpath.
//!
//! A square on a path node labelled `q` stands for the depth interval from
//! its own depth to the deepest `q`-labelled path node whose center it
//! contains, stored as `[lo - 1/3, hi + 1/3]` with the square id. Nothing is
//! cached: every answer is computed from the search structure, the path
//! descriptor and `q`, so intervals follow the path when its bottom moves.
//!
//! Deeper `q`-labelled centers all lie strictly on the `q` side of a
//! shallower one. A square holding the center of its own node therefore
//! contains a prefix of the deeper centers, and "does not reach the center
//! `c`" is the union of two half-spaces on the far sides. Both facts turn
//! endpoint conditions into a few boxes for the search structure, and the
//! extreme endpoints are found by binary search over the subpath depths.

use std::sync::Arc;

use crate::geom_core::{node_of_q, Bound, EKey, Interval, QSquare, Quadrant, RationalKey, Side};
use crate::iqds::{Direction, Iqds, IqdsExplicit};
use crate::search_structure::{Pick, QueryBox, SearchStructure};
use crate::squares_static::{depth_interval, DepthInterval, PathDescriptor};
use crate::{Error, Result};

const X0: usize = 0;
const Y0: usize = 1;
const X1: usize = 2;
const Y1: usize = 3;
const DEPTH: usize = 4;
const ID: usize = 5;

/// Stored form of a depth interval.
pub fn padded(lo: u32, hi: u32, id: u64) -> Interval {
    DepthInterval { lo, hi }.padded(id)
}

/// Lexicographic `(depth, id)` range, inclusive on both ends.
#[derive(Clone, Copy, Debug)]
struct LexRange {
    from: (i64, u64),
    to: (i64, u64),
}

/// Keys of a depth `d` sit at value `d + off/3` on side `side`. Return the
/// smallest `(d, id)` whose key is above `b`, or `None` if none is.
fn lex_above(b: &Bound, off: i64, side: Side) -> Option<(i64, u64)> {
    match b {
        Bound::NegInf => Some((i64::MIN, 0)),
        Bound::PosInf => None,
        Bound::Key(e) => {
            let u = e.v.sub(&RationalKey::new(off, 3));
            if !u.is_integer() {
                return Some((u.floor() + 1, 0));
            }
            let d0 = u.floor();
            Some(match side.cmp(&e.side) {
                std::cmp::Ordering::Greater => (d0, 0),
                std::cmp::Ordering::Less => (d0 + 1, 0),
                std::cmp::Ordering::Equal if e.id == u64::MAX => (d0 + 1, 0),
                std::cmp::Ordering::Equal => (d0, e.id + 1),
            })
        }
    }
}

/// Largest `(d, id)` whose key is below `b`.
fn lex_below(b: &Bound, off: i64, side: Side) -> Option<(i64, u64)> {
    match b {
        Bound::NegInf => None,
        Bound::PosInf => Some((i64::MAX, u64::MAX)),
        Bound::Key(e) => {
            let u = e.v.sub(&RationalKey::new(off, 3));
            if !u.is_integer() {
                return Some((u.floor(), u64::MAX));
            }
            let d0 = u.floor();
            Some(match side.cmp(&e.side) {
                std::cmp::Ordering::Less => (d0, u64::MAX),
                std::cmp::Ordering::Greater => (d0 - 1, u64::MAX),
                std::cmp::Ordering::Equal if e.id == 0 => (d0 - 1, u64::MAX),
                std::cmp::Ordering::Equal => (d0, e.id - 1),
            })
        }
    }
}

fn lex_range(a: &Bound, b: &Bound, off: i64, side: Side) -> Option<LexRange> {
    let from = lex_above(a, off, side)?;
    let to = lex_below(b, off, side)?;
    (from <= to).then_some(LexRange { from, to })
}

/// Depth range with an id range.
#[derive(Clone, Copy, Debug)]
struct Piece {
    d1: u32,
    d2: u32,
    id1: u64,
    id2: u64,
}

/// Read-only interval view of `(desc, q)` over the search structure, plus
/// optional explicit extra intervals. Only squares whose depth lies in `band`
/// and differs from `hidden` are visible.
pub struct ImplicitView<'a> {
    search: &'a SearchStructure,
    desc: PathDescriptor,
    q: Quadrant,
    band: (u32, u32),
    hidden: Option<u32>,
    extras: Option<&'a IqdsExplicit>,
    qdepths: Vec<u32>,
    region: QueryBox,
}

impl<'a> ImplicitView<'a> {
    pub fn new(search: &'a SearchStructure, desc: PathDescriptor, q: Quadrant) -> Self {
        let qdepths: Vec<u32> = (desc.top.depth + 1..desc.bottom.depth).filter(|&d| desc.label_at(d) == q).collect();
        let region = if desc.is_empty() {
            QueryBox::all().with(0, 1, 0)
        } else {
            let (x0, y0, x1, y1) = desc.node_at(desc.top.depth + 1).bounds(search.bits());
            QueryBox::all().with(X0, x0, x1).with(Y0, y0, y1).with(X1, x0, x1).with(Y1, y0, y1)
        };
        let band = (desc.top.depth + 1, desc.bottom.depth.saturating_sub(1));
        ImplicitView { search, desc, q, band, hidden: None, extras: None, qdepths, region }
    }

    /// Restrict visible squares to depths in `[lo, hi]`.
    pub fn with_band(mut self, lo: u32, hi: u32) -> Self {
        self.band = (self.band.0.max(lo), self.band.1.min(hi));
        self
    }

    pub fn with_hidden(mut self, d: Option<u32>) -> Self {
        self.hidden = d;
        self
    }

    pub fn with_extras(mut self, e: &'a IqdsExplicit) -> Self {
        self.extras = Some(e);
        self
    }

    pub fn descriptor(&self) -> &PathDescriptor {
        &self.desc
    }

    pub fn quadrant(&self) -> Quadrant {
        self.q
    }

    /// Depths of the `q`-labelled nodes of the whole path, ascending.
    pub fn qdepths(&self) -> &[u32] {
        &self.qdepths
    }

    fn center(&self, d: u32) -> (u64, u64) {
        self.desc.node_at(d).center(self.search.bits())
    }

    fn next_q(&self, h: u32) -> Option<u32> {
        let i = self.qdepths.partition_point(|&d| d <= h);
        self.qdepths.get(i).copied()
    }

    fn first_q_at_or_above(&self, h: u32) -> Option<u32> {
        let i = self.qdepths.partition_point(|&d| d < h);
        self.qdepths.get(i).copied()
    }

    fn contains_box(&self, c: (u64, u64)) -> QueryBox {
        QueryBox::all().with(X0, 0, c.0).with(X1, c.0, u64::MAX).with(Y0, 0, c.1).with(Y1, c.1, u64::MAX)
    }

    /// Squares that hold a shallower center of the subpath but miss `c`.
    fn misses_boxes(&self, c: (u64, u64)) -> [QueryBox; 2] {
        let (hx, hy) = self.q.bits();
        let below = |dim: usize, v: u64| match v {
            0 => QueryBox::all().with(dim, 1, 0),
            _ => QueryBox::all().with(dim, 0, v - 1),
        };
        let above = |dim: usize, v: u64| QueryBox::all().with(dim, v.saturating_add(1), u64::MAX);
        let bx = if hx == 1 { below(X1, c.0) } else { above(X0, c.0) };
        let by = if hy == 1 { below(Y1, c.1) } else { above(Y0, c.1) };
        [bx, by]
    }

    /// Split a lexicographic range into depth/id pieces inside the band.
    fn pieces(&self, r: &LexRange) -> Vec<Piece> {
        let (blo, bhi) = (self.band.0 as i64, self.band.1 as i64);
        let mut raw = Vec::new();
        let (fd, fi) = r.from;
        let (td, ti) = r.to;
        if fd == td {
            raw.push((fd, fd, fi, ti));
        } else {
            raw.push((fd, fd, fi, u64::MAX));
            if fd + 1 <= td - 1 {
                raw.push((fd + 1, td - 1, 0, u64::MAX));
            }
            raw.push((td, td, 0, ti));
        }
        let mut out = Vec::new();
        for (d1, d2, id1, id2) in raw {
            let (d1, d2) = (d1.max(blo), d2.min(bhi));
            if d1 > d2 || id1 > id2 {
                continue;
            }
            let (d1, d2) = (d1 as u32, d2 as u32);
            match self.hidden {
                Some(h) if d1 <= h && h <= d2 => {
                    if d1 < h {
                        out.push(Piece { d1, d2: h - 1, id1, id2 });
                    }
                    if h < d2 {
                        out.push(Piece { d1: h + 1, d2, id1, id2 });
                    }
                }
                _ => out.push(Piece { d1, d2, id1, id2 }),
            }
        }
        out
    }

    fn base(&self, d1: u32, d2: u32, id1: u64, id2: u64) -> QueryBox {
        self.region.with(DEPTH, d1 as u64, d2 as u64).with(ID, id1, id2)
    }

    fn find(&self, boxes: &[QueryBox], pick: Pick) -> Option<QSquare> {
        let mut best: Option<QSquare> = None;
        for b in boxes {
            if b.is_empty() {
                continue;
            }
            if let Some(s) = self.search.range_search(b, Some(self.q), pick) {
                let better = match (best, pick) {
                    (None, _) => true,
                    (Some(o), Pick::MinId) => s.id < o.id,
                    (Some(o), Pick::MaxId) => s.id > o.id,
                };
                if better {
                    best = Some(s);
                }
            }
        }
        best
    }

    /// Boxes for squares of a piece with `lo <= h` and `hi <= h`.
    fn hi_at_most(&self, p: &Piece, h: u32) -> Vec<QueryBox> {
        if p.d1 > h {
            return vec![];
        }
        let base = self.base(p.d1, p.d2.min(h), p.id1, p.id2);
        match self.next_q(h) {
            None => vec![base],
            Some(n) => self.misses_boxes(self.center(n)).iter().map(|m| base.intersect(m)).collect(),
        }
    }

    /// Boxes for squares with `lo` in `[l1, l2]`, `hi` in `[h1, h2]` and id
    /// in `[id1, id2]`.
    fn lo_hi_boxes(&self, l1: u32, l2: u32, h1: u32, h2: u32, id1: u64, id2: u64) -> Vec<QueryBox> {
        let l2 = l2.min(h2);
        if l1 > l2 {
            return vec![];
        }
        let Some(g) = self.first_q_at_or_above(h1) else {
            return vec![];
        };
        let mut parts = Vec::new();
        if g.max(l1) <= l2 {
            parts.push(self.base(g.max(l1), l2, id1, id2));
        }
        if g > l1 {
            parts.push(self.base(l1, l2.min(g - 1), id1, id2).intersect(&self.contains_box(self.center(g))));
        }
        match self.next_q(h2) {
            None => parts,
            Some(n) => {
                let ms = self.misses_boxes(self.center(n));
                parts.iter().flat_map(|p| ms.iter().map(move |m| p.intersect(m))).collect()
            }
        }
    }

    fn to_interval(&self, s: &QSquare, hi: u32) -> Arc<Interval> {
        Arc::new(padded(node_of_q(s).depth, hi, s.id))
    }

    /// Among visible squares with left key in `(a, b)`, the least right key.
    pub fn leftmost_right(&self, a: &Bound, b: &Bound) -> Option<Arc<Interval>> {
        let r = lex_range(a, b, -1, Side::L)?;
        let pieces = self.pieces(&r);
        if pieces.is_empty() || self.qdepths.is_empty() {
            return None;
        }
        let exists = |h: u32| -> bool {
            let boxes: Vec<QueryBox> = pieces.iter().flat_map(|p| self.hi_at_most(p, h)).collect();
            self.find(&boxes, Pick::MinId).is_some()
        };
        let qd = &self.qdepths;
        if !exists(*qd.last().unwrap()) {
            return None;
        }
        let (mut lo, mut hi) = (0usize, qd.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if exists(qd[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let h = qd[lo];
        let boxes: Vec<QueryBox> = pieces.iter().flat_map(|p| self.hi_at_most(p, h)).collect();
        let s = self.find(&boxes, Pick::MinId)?;
        Some(self.to_interval(&s, h))
    }

    /// Among visible squares with right key in `(a, b)`, the greatest left key.
    pub fn rightmost_left(&self, a: &Bound, b: &Bound) -> Option<Arc<Interval>> {
        let r = lex_range(a, b, 1, Side::R)?;
        let (fd, fi) = if r.from.0 < 0 { (0, 0) } else { r.from };
        let (td, ti) = if r.to.0 > u32::MAX as i64 { (u32::MAX as i64, u64::MAX) } else { r.to };
        if (fd, fi) > (td, ti) {
            return None;
        }
        let clamp = |d: i64| d as u32;
        // Pieces over hi, without the band (the band restricts lo).
        let mut hp: Vec<Piece> = Vec::new();
        if fd == td {
            hp.push(Piece { d1: clamp(fd), d2: clamp(td), id1: fi, id2: ti });
        } else {
            hp.push(Piece { d1: clamp(fd), d2: clamp(fd), id1: fi, id2: u64::MAX });
            if fd + 1 <= td - 1 {
                hp.push(Piece { d1: clamp(fd + 1), d2: clamp(td - 1), id1: 0, id2: u64::MAX });
            }
            hp.push(Piece { d1: clamp(td), d2: clamp(td), id1: 0, id2: ti });
        }
        hp.retain(|p| p.id1 <= p.id2);
        let lo_ranges = self.lo_ranges(self.band.0, self.band.1);
        let boxes_from = |l: u32| -> Vec<QueryBox> {
            let mut v = Vec::new();
            for &(a1, a2) in &lo_ranges {
                let a1 = a1.max(l);
                if a1 > a2 {
                    continue;
                }
                for p in &hp {
                    v.extend(self.lo_hi_boxes(a1, a2, p.d1, p.d2, p.id1, p.id2));
                }
            }
            v
        };
        let qd: Vec<u32> = self.qdepths.iter().copied().filter(|&d| self.band.0 <= d && d <= self.band.1).collect();
        if qd.is_empty() || self.find(&boxes_from(qd[0]), Pick::MinId).is_none() {
            return None;
        }
        let (mut lo, mut hi) = (0usize, qd.len() - 1);
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if self.find(&boxes_from(qd[mid]), Pick::MinId).is_some() {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let l = qd[lo];
        let exact: Vec<QueryBox> = boxes_from(l).into_iter().map(|b| b.with(DEPTH, l as u64, l as u64)).collect();
        let s = self.find(&exact, Pick::MaxId)?;
        let iv = self.get_interval(&s).ok()?;
        Some(Arc::new(iv.padded(s.id)))
    }

    fn lo_ranges(&self, a: u32, b: u32) -> Vec<(u32, u32)> {
        if a > b {
            return vec![];
        }
        match self.hidden {
            Some(h) if a <= h && h <= b => {
                let mut v = Vec::new();
                if a < h {
                    v.push((a, h - 1));
                }
                if h < b {
                    v.push((h + 1, b));
                }
                v
            }
            _ => vec![(a, b)],
        }
    }

    /// `[d(s), d'(s)]` for a square on a `q`-labelled node of the path.
    pub fn get_interval(&self, s: &QSquare) -> Result<DepthInterval> {
        depth_interval(&self.desc, self.q, s)
    }

    /// A visible square whose interval has `lo` in `[l1, l2]` and `hi` in
    /// `[r1, r2]`, smallest id first.
    pub fn region_exists(&self, l1: u32, l2: u32, r1: u32, r2: u32) -> Result<Option<QSquare>> {
        if !(l1 <= l2 && l2 <= r1 && r1 <= r2) {
            return Err(Error::Precondition(format!("depths {} {} {} {} are not ordered", l1, l2, r1, r2)));
        }
        for d in [l1, l2, r1, r2] {
            if self.qdepths.binary_search(&d).is_err() {
                return Err(Error::Precondition(format!("no {:?} node at depth {}", self.q, d)));
            }
        }
        let boxes: Vec<QueryBox> = self
            .lo_ranges(l1.max(self.band.0), l2.min(self.band.1))
            .into_iter()
            .flat_map(|(a, b)| self.lo_hi_boxes(a, b, r1, r2, 0, u64::MAX))
            .collect();
        Ok(self.find(&boxes, Pick::MinId))
    }

    fn visible(&self, s: &QSquare) -> bool {
        let d = node_of_q(s).depth;
        self.band.0 <= d
            && d <= self.band.1
            && self.hidden != Some(d)
            && self.desc.contains_depth(d)
            && self.desc.node_at(d) == node_of_q(s)
            && self.desc.label_at(d) == self.q
    }
}

fn min_by_right(a: Option<Arc<Interval>>, b: Option<Arc<Interval>>) -> Option<Arc<Interval>> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.rkey() < x.rkey() { y } else { x }),
        (x, y) => x.or(y),
    }
}

fn max_by_left(a: Option<Arc<Interval>>, b: Option<Arc<Interval>>) -> Option<Arc<Interval>> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.lkey() > x.lkey() { y } else { x }),
        (x, y) => x.or(y),
    }
}

impl Iqds for ImplicitView<'_> {
    fn report_extreme(&self, dir: Direction, a: &Bound, b: &Bound) -> Option<Arc<Interval>> {
        let extra = self.extras.and_then(|e| e.report_extreme(dir, a, b));
        match dir {
            Direction::LeftmostRight => min_by_right(self.leftmost_right(a, b), extra),
            Direction::RightmostLeft => max_by_left(self.rightmost_left(a, b), extra),
        }
    }

    fn endpoints(&self, id: u64) -> Option<Arc<Interval>> {
        let s = self.search.get(id)?;
        if !self.visible(s) || self.search.mark_of(id) != Some(Some(self.q)) {
            return None;
        }
        self.get_interval(s).ok().map(|iv| Arc::new(iv.padded(id)))
    }

    fn max_left(&self) -> Option<Arc<Interval>> {
        let extra = self.extras.and_then(|e| e.max_left());
        max_by_left(self.rightmost_left(&Bound::NegInf, &Bound::PosInf), extra)
    }
}

/// Key of the left end of a stored depth interval.
pub fn left_key(lo: u32, id: u64) -> EKey {
    EKey { v: RationalKey::new(3 * lo as i64 - 1, 3), side: Side::L, id }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom_core::{is_centered_q, CellId};

    #[test]
    fn lex_bounds() {
        let k = |v: RationalKey, side, id| Bound::Key(EKey { v, side, id });
        // Left keys sit at d - 1/3.
        assert_eq!(lex_above(&k(RationalKey::new(5, 3), Side::L, 7), -1, Side::L), Some((2, 8)));
        assert_eq!(lex_above(&k(RationalKey::new(5, 3), Side::R, 7), -1, Side::L), Some((3, 0)));
        assert_eq!(lex_above(&k(RationalKey::from_int(2), Side::R, 7), -1, Side::L), Some((3, 0)));
        assert_eq!(lex_below(&k(RationalKey::new(5, 3), Side::L, 7), -1, Side::L), Some((2, 6)));
        assert_eq!(lex_below(&k(RationalKey::new(5, 3), Side::R, 7), -1, Side::L), Some((2, u64::MAX)));
        assert_eq!(lex_below(&k(RationalKey::new(5, 3), Side::L, 0), -1, Side::L), Some((1, u64::MAX)));
    }

    /// A path of nodes that always step into quadrant `q`, from the root down
    /// to depth `n`.
    fn straight_path(q: Quadrant, n: u32) -> PathDescriptor {
        let mut c = CellId::ROOT;
        for _ in 0..n {
            c = c.child(q);
        }
        PathDescriptor { top: CellId::ROOT, bottom: c }
    }

    fn square_at(id: u64, node: CellId, reach: u64, b: u32) -> QSquare {
        // Square around the node center extending `reach` doubled units.
        let (cx, cy) = node.center(b);
        QSquare { id, x0: cx - 1, y0: cy - 1, x1: cx + reach, y1: cy + reach, bits: b }
    }

    #[test]
    fn leftmost_right_picks_the_short_interval() {
        let b = 12;
        let p = straight_path(Quadrant::I, 9);
        let mut t = SearchStructure::new(b);
        // Centers of deeper nodes sit up-right; reach decides hi.
        let reach_to = |from: u32, to: u32| {
            let (cx, _) = p.node_at(from).center(b);
            let (tx, _) = p.node_at(to).center(b);
            tx - cx + 1
        };
        let specs = [(1u64, 1u32, 4u32), (2, 2, 3), (3, 5, 6)];
        for &(id, lo, hi) in &specs {
            let s = square_at(id, p.node_at(lo), reach_to(lo, hi), b);
            assert!(is_centered_q(&s));
            assert_eq!(node_of_q(&s), p.node_at(lo));
            t.insert(&s, Some(Quadrant::I)).unwrap();
        }
        let v = ImplicitView::new(&t, p, Quadrant::I);
        for &(id, lo, hi) in &specs {
            assert_eq!(v.get_interval(t.get(id).unwrap()).unwrap(), DepthInterval { lo, hi });
        }
        let a = Bound::Key(EKey { v: RationalKey::from_int(0), side: Side::L, id: 0 });
        let bb = Bound::Key(EKey { v: RationalKey::from_int(3), side: Side::L, id: 0 });
        assert_eq!(v.leftmost_right(&a, &bb).unwrap().id, 2);
        assert_eq!(v.rightmost_left(&Bound::NegInf, &Bound::PosInf).unwrap().id, 3);
        assert_eq!(v.region_exists(1, 2, 3, 4).unwrap().map(|s| s.id), Some(1));
        assert_eq!(v.region_exists(5, 5, 6, 6).unwrap().map(|s| s.id), Some(3));
        assert_eq!(v.region_exists(3, 4, 5, 6).unwrap(), None);
        let empty = ImplicitView::new(&t, p, Quadrant::II);
        assert!(empty.leftmost_right(&Bound::NegInf, &Bound::PosInf).is_none());
    }
}
