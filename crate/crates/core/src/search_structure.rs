//! Global orthogonal range structure over quantized squares with lazy marks.
//!
//! A scapegoat kd-tree over six coordinates: the four sides of the square,
//! the depth of its quadtree node and its id. Each tree node may carry a note
//! that overrides the marks of its whole subtree; notes are pushed down when
//! a descent needs to look below them. Every node keeps a bitmask of the
//! effective marks present below it, so mark-filtered searches prune whole
//! subtrees. Deletions leave tombstones until the tree is rebuilt.

use std::cell::Cell;
use std::collections::HashMap;

use crate::geom_core::{node_of_q, CellId, QSquare, Quadrant};
use crate::{Error, Result};

/// `None` for squares of leaves and internal nodes, otherwise the label of
/// the monochild node holding the square.
pub type Mark = Option<Quadrant>;

pub const DIMS: usize = 6;
const NIL: u32 = u32::MAX;
const ALPHA: f64 = 0.7;

fn code(m: Mark) -> u8 {
    m.map_or(4, |q| q.index() as u8)
}

fn decode(c: u8) -> Mark {
    match c {
        0 => Some(Quadrant::I),
        1 => Some(Quadrant::II),
        2 => Some(Quadrant::III),
        3 => Some(Quadrant::IV),
        _ => None,
    }
}

fn bit(c: u8) -> u8 {
    1 << c
}

/// Point of a stored square: `[x0, y0, x1, y1, depth, id]`.
pub fn point_of(s: &QSquare) -> [u64; DIMS] {
    [s.x0, s.y0, s.x1, s.y1, node_of_q(s).depth as u64, s.id]
}

/// Closed box in point space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryBox {
    pub lo: [u64; DIMS],
    pub hi: [u64; DIMS],
}

impl QueryBox {
    pub fn all() -> Self {
        QueryBox { lo: [0; DIMS], hi: [u64::MAX; DIMS] }
    }

    pub fn with(mut self, dim: usize, lo: u64, hi: u64) -> Self {
        self.lo[dim] = self.lo[dim].max(lo);
        self.hi[dim] = self.hi[dim].min(hi);
        self
    }

    pub fn intersect(&self, o: &QueryBox) -> QueryBox {
        let mut b = *self;
        for d in 0..DIMS {
            b.lo[d] = b.lo[d].max(o.lo[d]);
            b.hi[d] = b.hi[d].min(o.hi[d]);
        }
        b
    }

    pub fn is_empty(&self) -> bool {
        (0..DIMS).any(|d| self.lo[d] > self.hi[d])
    }

    pub fn contains(&self, p: &[u64; DIMS]) -> bool {
        (0..DIMS).all(|d| self.lo[d] <= p[d] && p[d] <= self.hi[d])
    }

    fn covers(&self, lo: &[u64; DIMS], hi: &[u64; DIMS]) -> bool {
        (0..DIMS).all(|d| self.lo[d] <= lo[d] && hi[d] <= self.hi[d])
    }

    fn meets(&self, lo: &[u64; DIMS], hi: &[u64; DIMS]) -> bool {
        (0..DIMS).all(|d| self.lo[d] <= hi[d] && lo[d] <= self.hi[d])
    }

    /// Squares whose sides lie in `[s1.side, s2.side]` for every side.
    pub fn between(s1: &QSquare, s2: &QSquare) -> Self {
        QueryBox::all()
            .with(0, s1.x0, s2.x0)
            .with(1, s1.y0, s2.y0)
            .with(2, s1.x1, s2.x1)
            .with(3, s1.y1, s2.y1)
    }

    /// Squares whose quadtree node is exactly `c`.
    pub fn node(c: &CellId, bits: u32) -> Self {
        let (x0, y0, x1, y1) = c.bounds(bits);
        let d = c.depth as u64;
        QueryBox::all().with(0, x0, x1).with(1, y0, y1).with(2, x0, x1).with(3, y0, y1).with(4, d, d)
    }
}

#[derive(Clone, Debug)]
struct Node {
    p: [u64; DIMS],
    sq: QSquare,
    own: u8,
    note: Option<u8>,
    dead: bool,
    dim: u8,
    left: u32,
    right: u32,
    bmin: [u64; DIMS],
    bmax: [u64; DIMS],
    size: u32,
    live: u32,
    mask: u8,
}

/// Which witness a search returns when several squares qualify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pick {
    MinId,
    MaxId,
}

#[derive(Debug)]
pub struct SearchStructure {
    bits: u32,
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    dead: usize,
    index: HashMap<u64, QSquare>,
    visits: Cell<u64>,
}

fn less(a: &[u64; DIMS], b: &[u64; DIMS], d: usize) -> bool {
    (a[d], a[5]) < (b[d], b[5])
}

impl SearchStructure {
    pub fn new(bits: u32) -> Self {
        SearchStructure {
            bits,
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            dead: 0,
            index: HashMap::new(),
            visits: Cell::new(0),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn get(&self, id: u64) -> Option<&QSquare> {
        self.index.get(&id)
    }

    /// Node visits since construction or the last reset.
    pub fn visits(&self) -> u64 {
        self.visits.get()
    }

    pub fn reset_visits(&self) {
        self.visits.set(0);
    }

    fn tick(&self) {
        self.visits.set(self.visits.get() + 1);
    }

    fn alloc(&mut self, n: Node) -> u32 {
        if let Some(i) = self.free.pop() {
            self.nodes[i as usize] = n;
            i
        } else {
            self.nodes.push(n);
            (self.nodes.len() - 1) as u32
        }
    }

    fn leaf(s: &QSquare, m: u8, dim: u8) -> Node {
        let p = point_of(s);
        Node {
            p,
            sq: *s,
            own: m,
            note: None,
            dead: false,
            dim,
            left: NIL,
            right: NIL,
            bmin: p,
            bmax: p,
            size: 1,
            live: 1,
            mask: bit(m),
        }
    }

    fn push(&mut self, i: u32) {
        let Some(n) = self.nodes[i as usize].note.take() else {
            return;
        };
        self.nodes[i as usize].own = n;
        for c in [self.nodes[i as usize].left, self.nodes[i as usize].right] {
            if c != NIL {
                let cn = &mut self.nodes[c as usize];
                cn.note = Some(n);
                cn.mask = if cn.live > 0 { bit(n) } else { 0 };
            }
        }
    }

    fn pull(&mut self, i: u32) {
        let (l, r) = (self.nodes[i as usize].left, self.nodes[i as usize].right);
        let mut size = 1;
        let mut live = u32::from(!self.nodes[i as usize].dead);
        let mut mask = if self.nodes[i as usize].dead { 0 } else { bit(self.nodes[i as usize].own) };
        let mut bmin = self.nodes[i as usize].p;
        let mut bmax = bmin;
        for c in [l, r] {
            if c == NIL {
                continue;
            }
            let cn = &self.nodes[c as usize];
            size += cn.size;
            live += cn.live;
            mask |= cn.mask;
            for d in 0..DIMS {
                bmin[d] = bmin[d].min(cn.bmin[d]);
                bmax[d] = bmax[d].max(cn.bmax[d]);
            }
        }
        let n = &mut self.nodes[i as usize];
        n.size = size;
        n.live = live;
        n.bmin = bmin;
        n.bmax = bmax;
        n.mask = match n.note {
            Some(m) if live > 0 => bit(m),
            Some(_) => 0,
            None => mask,
        };
    }

    pub fn insert(&mut self, s: &QSquare, m: Mark) -> Result<()> {
        if self.index.contains_key(&s.id) {
            return Err(Error::Membership(s.id));
        }
        self.index.insert(s.id, *s);
        let p = point_of(s);
        if self.root == NIL {
            self.root = self.alloc(Self::leaf(s, code(m), 0));
            return Ok(());
        }
        let mut path = Vec::new();
        let mut cur = self.root;
        loop {
            self.push(cur);
            path.push(cur);
            let n = &self.nodes[cur as usize];
            let go_left = less(&p, &n.p, n.dim as usize);
            let next = if go_left { n.left } else { n.right };
            if next == NIL {
                let dim = (n.dim + 1) % DIMS as u8;
                let leaf = self.alloc(Self::leaf(s, code(m), dim));
                let n = &mut self.nodes[cur as usize];
                if go_left {
                    n.left = leaf;
                } else {
                    n.right = leaf;
                }
                break;
            }
            cur = next;
        }
        for &i in path.iter().rev() {
            self.pull(i);
        }
        let limit = ((self.nodes[self.root as usize].size as f64).ln() / (1.0 / ALPHA).ln()).floor() as usize + 2;
        if path.len() > limit {
            self.rebalance(&path);
        }
        Ok(())
    }

    fn rebalance(&mut self, path: &[u32]) {
        for (j, &i) in path.iter().enumerate() {
            let n = &self.nodes[i as usize];
            let heavy = [n.left, n.right]
                .iter()
                .any(|&c| c != NIL && self.nodes[c as usize].size as f64 > ALPHA * n.size as f64);
            if heavy {
                let rebuilt = self.rebuild(i);
                if j == 0 {
                    self.root = rebuilt;
                } else {
                    let p = path[j - 1];
                    let pn = &mut self.nodes[p as usize];
                    if pn.left == i {
                        pn.left = rebuilt;
                    } else {
                        pn.right = rebuilt;
                    }
                }
                for &a in path[..j].iter().rev() {
                    self.pull(a);
                }
                return;
            }
        }
    }

    /// Rebuild the subtree at `i` from its live points, keeping effective
    /// marks; returns the new subtree root.
    fn rebuild(&mut self, i: u32) -> u32 {
        let dim = self.nodes[i as usize].dim;
        let mut items = Vec::new();
        self.collect(i, None, &mut items, true);
        self.build(&mut items, dim)
    }

    fn collect(&mut self, i: u32, inh: Option<u8>, out: &mut Vec<(QSquare, u8)>, free: bool) {
        if i == NIL {
            return;
        }
        let n = &self.nodes[i as usize];
        let eff = inh.or(n.note);
        let (l, r) = (n.left, n.right);
        if !n.dead {
            out.push((n.sq, eff.unwrap_or(n.own)));
        } else if free {
            self.dead -= 1;
        }
        if free {
            self.free.push(i);
        }
        self.collect(l, eff, out, free);
        self.collect(r, eff, out, free);
    }

    fn build(&mut self, items: &mut [(QSquare, u8)], dim: u8) -> u32 {
        if items.is_empty() {
            return NIL;
        }
        let d = dim as usize;
        let mid = items.len() / 2;
        items.select_nth_unstable_by(mid, |a, b| {
            let (pa, pb) = (point_of(&a.0), point_of(&b.0));
            (pa[d], pa[5]).cmp(&(pb[d], pb[5]))
        });
        let (s, m) = items[mid];
        let next = (dim + 1) % DIMS as u8;
        let (lo, rest) = items.split_at_mut(mid);
        let left = self.build(lo, next);
        let right = self.build(&mut rest[1..], next);
        let mut node = Self::leaf(&s, m, dim);
        node.left = left;
        node.right = right;
        let i = self.alloc(node);
        self.pull(i);
        i
    }

    pub fn delete(&mut self, id: u64) -> Result<QSquare> {
        let s = self.index.remove(&id).ok_or(Error::Membership(id))?;
        let p = point_of(&s);
        let mut path = Vec::new();
        let mut cur = self.root;
        while cur != NIL {
            path.push(cur);
            let n = &self.nodes[cur as usize];
            if n.p == p && !n.dead {
                break;
            }
            cur = if less(&p, &n.p, n.dim as usize) { n.left } else { n.right };
        }
        if cur == NIL {
            return Err(Error::Internal(format!("square {} indexed but not in the tree", id)));
        }
        self.nodes[cur as usize].dead = true;
        self.dead += 1;
        for &i in path.iter().rev() {
            self.pull(i);
        }
        if self.dead * 2 > self.nodes[self.root as usize].size as usize {
            self.root = self.rebuild(self.root);
        }
        Ok(s)
    }

    /// Give mark `m` to every stored square inside `b`.
    pub fn range_mark(&mut self, b: &QueryBox, m: Mark) {
        if !b.is_empty() {
            self.mark_rec(self.root, b, code(m));
        }
    }

    fn mark_rec(&mut self, i: u32, b: &QueryBox, m: u8) {
        if i == NIL {
            return;
        }
        self.tick();
        let n = &self.nodes[i as usize];
        if n.live == 0 || !b.meets(&n.bmin, &n.bmax) {
            return;
        }
        if b.covers(&n.bmin, &n.bmax) {
            let n = &mut self.nodes[i as usize];
            n.note = Some(m);
            n.mask = bit(m);
            return;
        }
        self.push(i);
        if b.contains(&self.nodes[i as usize].p) {
            self.nodes[i as usize].own = m;
        }
        let (l, r) = (self.nodes[i as usize].left, self.nodes[i as usize].right);
        self.mark_rec(l, b, m);
        self.mark_rec(r, b, m);
        self.pull(i);
    }

    /// Mark squares whose sides lie between those of `s1` and `s2`.
    pub fn range_mark_between(&mut self, s1: &QSquare, s2: &QSquare, m: Mark) {
        self.range_mark(&QueryBox::between(s1, s2), m)
    }

    /// A stored square inside `b` with effective mark `m`; ties by id.
    pub fn range_search(&self, b: &QueryBox, m: Mark, pick: Pick) -> Option<QSquare> {
        if b.is_empty() {
            return None;
        }
        let mut best: Option<(u64, QSquare)> = None;
        self.search_rec(self.root, None, b, code(m), pick, &mut best);
        best.map(|x| x.1)
    }

    pub fn range_search_between(&self, s1: &QSquare, s2: &QSquare, m: Mark) -> Option<QSquare> {
        self.range_search(&QueryBox::between(s1, s2), m, Pick::MinId)
    }

    fn search_rec(&self, i: u32, inh: Option<u8>, b: &QueryBox, m: u8, pick: Pick, best: &mut Option<(u64, QSquare)>) {
        if i == NIL {
            return;
        }
        self.tick();
        let n = &self.nodes[i as usize];
        if n.live == 0 || !b.meets(&n.bmin, &n.bmax) {
            return;
        }
        let eff = inh.or(n.note);
        match eff {
            Some(e) if e != m => return,
            None if n.mask & bit(m) == 0 => return,
            _ => {}
        }
        if let Some((bid, _)) = best {
            let useless = match pick {
                Pick::MinId => n.bmin[5] >= *bid,
                Pick::MaxId => n.bmax[5] <= *bid,
            };
            if useless {
                return;
            }
        }
        if !n.dead && eff.unwrap_or(n.own) == m && b.contains(&n.p) {
            let better = match (best.as_ref(), pick) {
                (None, _) => true,
                (Some((bid, _)), Pick::MinId) => n.p[5] < *bid,
                (Some((bid, _)), Pick::MaxId) => n.p[5] > *bid,
            };
            if better {
                *best = Some((n.p[5], n.sq));
            }
        }
        let (first, second) = match pick {
            Pick::MinId => (n.left, n.right),
            Pick::MaxId => (n.right, n.left),
        };
        self.search_rec(first, eff, b, m, pick, best);
        self.search_rec(second, eff, b, m, pick, best);
    }

    /// Effective mark of a stored square.
    pub fn mark_of(&self, id: u64) -> Option<Mark> {
        let s = self.index.get(&id)?;
        let p = point_of(s);
        let mut cur = self.root;
        let mut inh: Option<u8> = None;
        while cur != NIL {
            let n = &self.nodes[cur as usize];
            inh = inh.or(n.note);
            if n.p == p && !n.dead {
                return Some(decode(inh.unwrap_or(n.own)));
            }
            cur = if less(&p, &n.p, n.dim as usize) { n.left } else { n.right };
        }
        None
    }

    /// All stored squares with their effective marks, sorted by id.
    pub fn dump(&self) -> Vec<(QSquare, Mark)> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, None::<u8>)];
        while let Some((i, inh)) = stack.pop() {
            if i == NIL {
                continue;
            }
            let n = &self.nodes[i as usize];
            let eff = inh.or(n.note);
            if !n.dead {
                out.push((n.sq, decode(eff.unwrap_or(n.own))));
            }
            stack.push((n.left, eff));
            stack.push((n.right, eff));
        }
        out.sort_by_key(|x| x.0.id);
        out
    }

    pub fn height(&self) -> usize {
        fn h(t: &SearchStructure, i: u32) -> usize {
            if i == NIL {
                0
            } else {
                let n = &t.nodes[i as usize];
                1 + h(t, n.left).max(h(t, n.right))
            }
        }
        h(self, self.root)
    }

    /// Aggregates, boxes and kd ordering of every subtree.
    pub fn check(&self) -> bool {
        fn rec(t: &SearchStructure, i: u32, inh: Option<u8>, lo: &mut Vec<(usize, [u64; DIMS], bool)>) -> Option<(u32, u32, u8)> {
            if i == NIL {
                return Some((0, 0, 0));
            }
            let n = &t.nodes[i as usize];
            for &(d, ref q, left) in lo.iter() {
                let ok = if left { less(&n.p, q, d) } else { !less(&n.p, q, d) };
                if !ok {
                    return None;
                }
            }
            let eff = inh.or(n.note);
            lo.push((n.dim as usize, n.p, true));
            let a = rec(t, n.left, eff, lo)?;
            lo.pop();
            lo.push((n.dim as usize, n.p, false));
            let b = rec(t, n.right, eff, lo)?;
            lo.pop();
            let size = 1 + a.0 + b.0;
            let live = u32::from(!n.dead) + a.1 + b.1;
            let own = if n.dead { 0 } else { bit(n.own) };
            let mask = match n.note {
                Some(m) if live > 0 => bit(m),
                Some(_) => 0,
                None => own | a.2 | b.2,
            };
            let boxed = (0..DIMS).all(|d| n.bmin[d] <= n.p[d] && n.p[d] <= n.bmax[d]);
            (size == n.size && live == n.live && (inh.is_some() || mask == n.mask) && boxed)
                .then_some((size, live, mask))
        }
        let mut stack = Vec::new();
        let ok = rec(self, self.root, None, &mut stack).is_some();
        let live = if self.root == NIL { 0 } else { self.nodes[self.root as usize].live as usize };
        ok && live == self.index.len()
    }
}
