//! Ordered interval container with extreme-endpoint range queries.
//!
//! Two treaps hold the same intervals: one keyed by left endpoint and
//! augmented with the subtree's leftmost right endpoint, the other keyed by
//! right endpoint and augmented with the rightmost left endpoint. Treap
//! priorities are a hash of the interval id, so shapes are deterministic.

use std::sync::Arc;

use crate::geom_core::{Bound, EKey, Interval, RationalKey};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Among `y` with `l(y)` in the open range, minimize `r(y)`.
    LeftmostRight,
    /// Among `y` with `r(y)` in the open range, maximize `l(y)`.
    RightmostLeft,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// Query side of an interval structure. Implemented by the explicit treap
/// and by the implicit square-backed view.
pub trait Iqds {
    fn report_extreme(&self, dir: Direction, a: &Bound, b: &Bound) -> Option<Arc<Interval>>;
    /// Current endpoints of a stored interval.
    fn endpoints(&self, id: u64) -> Option<Arc<Interval>>;
    /// Interval with the largest left endpoint.
    fn max_left(&self) -> Option<Arc<Interval>>;
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    ByLeft,
    ByRight,
}

impl Kind {
    fn key(self, x: &Interval) -> EKey {
        match self {
            Kind::ByLeft => x.lkey(),
            Kind::ByRight => x.rkey(),
        }
    }

    /// True if `a` beats `b` for the augmentation.
    fn better(self, a: &Interval, b: &Interval) -> bool {
        match self {
            Kind::ByLeft => a.rkey() < b.rkey(),
            Kind::ByRight => a.lkey() > b.lkey(),
        }
    }

    fn pick(self, a: Option<Arc<Interval>>, b: Option<Arc<Interval>>) -> Option<Arc<Interval>> {
        match (a, b) {
            (None, y) => y,
            (x, None) => x,
            (Some(x), Some(y)) => Some(if self.better(&y, &x) { y } else { x }),
        }
    }
}

type Link = Option<Box<Node>>;

#[derive(Clone)]
struct Node {
    key: EKey,
    item: Arc<Interval>,
    prio: u64,
    size: usize,
    best: Arc<Interval>,
    left: Link,
    right: Link,
}

impl Node {
    fn new(kind: Kind, item: Arc<Interval>) -> Box<Node> {
        Box::new(Node {
            key: kind.key(&item),
            prio: splitmix(item.id),
            size: 1,
            best: item.clone(),
            item,
            left: None,
            right: None,
        })
    }
}

fn size(t: &Link) -> usize {
    t.as_ref().map_or(0, |n| n.size)
}

fn best(t: &Link) -> Option<Arc<Interval>> {
    t.as_ref().map(|n| n.best.clone())
}

fn pull(kind: Kind, n: &mut Node) {
    n.size = 1 + size(&n.left) + size(&n.right);
    let mut b = n.item.clone();
    for c in [&n.left, &n.right].into_iter().flatten() {
        if kind.better(&c.best, &b) {
            b = c.best.clone();
        }
    }
    n.best = b;
}

/// Split into (keys satisfying `go_left`, rest); `go_left` must be monotone.
fn split_by(kind: Kind, t: Link, go_left: &dyn Fn(&EKey) -> bool) -> (Link, Link) {
    match t {
        None => (None, None),
        Some(mut n) => {
            if go_left(&n.key) {
                let (a, b) = split_by(kind, n.right.take(), go_left);
                n.right = a;
                pull(kind, &mut n);
                (Some(n), b)
            } else {
                let (a, b) = split_by(kind, n.left.take(), go_left);
                n.left = b;
                pull(kind, &mut n);
                (a, Some(n))
            }
        }
    }
}

/// Concatenate; all keys of `a` precede those of `b`.
fn join(kind: Kind, a: Link, b: Link) -> Link {
    match (a, b) {
        (None, y) => y,
        (x, None) => x,
        (Some(mut x), Some(mut y)) => {
            if x.prio > y.prio {
                x.right = join(kind, x.right.take(), Some(y));
                pull(kind, &mut x);
                Some(x)
            } else {
                y.left = join(kind, Some(x), y.left.take());
                pull(kind, &mut y);
                Some(y)
            }
        }
    }
}

/// Union of two treaps with disjoint key sets and arbitrary interleaving.
fn union(kind: Kind, a: Link, b: Link) -> Link {
    match (a, b) {
        (None, y) => y,
        (x, None) => x,
        (Some(x), Some(y)) => {
            let (mut hi, lo) = if x.prio > y.prio { (x, y) } else { (y, x) };
            let k = hi.key.clone();
            let (l, r) = split_by(kind, Some(lo), &|e| *e < k);
            hi.left = union(kind, hi.left.take(), l);
            hi.right = union(kind, hi.right.take(), r);
            pull(kind, &mut hi);
            Some(hi)
        }
    }
}

fn suffix_best(kind: Kind, t: &Link, lo: &Bound) -> Option<Arc<Interval>> {
    let mut acc = None;
    let mut cur = t;
    while let Some(n) = cur {
        if lo.below(&n.key) {
            acc = kind.pick(acc, Some(n.item.clone()));
            acc = kind.pick(acc, best(&n.right));
            cur = &n.left;
        } else {
            cur = &n.right;
        }
    }
    acc
}

fn prefix_best(kind: Kind, t: &Link, hi: &Bound) -> Option<Arc<Interval>> {
    let mut acc = None;
    let mut cur = t;
    while let Some(n) = cur {
        if hi.above(&n.key) {
            acc = kind.pick(acc, Some(n.item.clone()));
            acc = kind.pick(acc, best(&n.left));
            cur = &n.right;
        } else {
            cur = &n.left;
        }
    }
    acc
}

fn range_best(kind: Kind, t: &Link, lo: &Bound, hi: &Bound) -> Option<Arc<Interval>> {
    let mut cur = t;
    while let Some(n) = cur {
        if !lo.below(&n.key) {
            cur = &n.right;
        } else if !hi.above(&n.key) {
            cur = &n.left;
        } else {
            let a = kind.pick(Some(n.item.clone()), suffix_best(kind, &n.left, lo));
            return kind.pick(a, prefix_best(kind, &n.right, hi));
        }
    }
    None
}

fn height(t: &Link) -> usize {
    t.as_ref().map_or(0, |n| 1 + height(&n.left).max(height(&n.right)))
}

fn collect(t: &Link, out: &mut Vec<Arc<Interval>>) {
    if let Some(n) = t {
        collect(&n.left, out);
        out.push(n.item.clone());
        collect(&n.right, out);
    }
}

fn check_aug(kind: Kind, t: &Link) -> bool {
    match t {
        None => true,
        Some(n) => {
            let mut b = n.item.clone();
            let mut sz = 1;
            for c in [&n.left, &n.right].into_iter().flatten() {
                sz += c.size;
                if kind.better(&c.best, &b) {
                    b = c.best.clone();
                }
            }
            let order = n.left.as_ref().map_or(true, |l| l.key < n.key)
                && n.right.as_ref().map_or(true, |r| r.key > n.key);
            b.id == n.best.id && sz == n.size && order && check_aug(kind, &n.left) && check_aug(kind, &n.right)
        }
    }
}

#[derive(Clone)]
struct View {
    kind: Kind,
    root: Link,
}

impl View {
    fn new(kind: Kind) -> Self {
        View { kind, root: None }
    }

    fn insert(&mut self, item: Arc<Interval>) {
        let k = self.kind.key(&item);
        let (a, b) = split_by(self.kind, self.root.take(), &|e| *e < k);
        let mid = Some(Node::new(self.kind, item));
        self.root = join(self.kind, join(self.kind, a, mid), b);
    }

    fn remove(&mut self, k: &EKey) -> Option<Arc<Interval>> {
        let (a, b) = split_by(self.kind, self.root.take(), &|e| e < k);
        let (m, c) = split_by(self.kind, b, &|e| e <= k);
        self.root = join(self.kind, a, c);
        m.map(|n| n.item)
    }

    fn find(&self, k: &EKey) -> Option<Arc<Interval>> {
        let mut cur = &self.root;
        while let Some(n) = cur {
            match k.cmp(&n.key) {
                std::cmp::Ordering::Less => cur = &n.left,
                std::cmp::Ordering::Greater => cur = &n.right,
                std::cmp::Ordering::Equal => return Some(n.item.clone()),
            }
        }
        None
    }

    /// Smallest key strictly above the bound.
    fn succ(&self, b: &Bound) -> Option<Arc<Interval>> {
        let mut cur = &self.root;
        let mut ans = None;
        while let Some(n) = cur {
            if b.below(&n.key) {
                ans = Some(n.item.clone());
                cur = &n.left;
            } else {
                cur = &n.right;
            }
        }
        ans
    }

    /// Largest key strictly below the bound.
    fn pred(&self, b: &Bound) -> Option<Arc<Interval>> {
        let mut cur = &self.root;
        let mut ans = None;
        while let Some(n) = cur {
            if b.above(&n.key) {
                ans = Some(n.item.clone());
                cur = &n.right;
            } else {
                cur = &n.left;
            }
        }
        ans
    }
}

/// Explicit interval query structure.
#[derive(Clone)]
pub struct IqdsExplicit {
    by_l: View,
    by_r: View,
}

impl Default for IqdsExplicit {
    fn default() -> Self {
        Self::new()
    }
}

impl IqdsExplicit {
    pub fn new() -> Self {
        IqdsExplicit { by_l: View::new(Kind::ByLeft), by_r: View::new(Kind::ByRight) }
    }

    pub fn len(&self) -> usize {
        size(&self.by_l.root)
    }

    pub fn is_empty(&self) -> bool {
        self.by_l.root.is_none()
    }

    pub fn insert(&mut self, x: Arc<Interval>) -> Result<()> {
        if self.by_l.find(&x.lkey()).is_some() {
            return Err(Error::Membership(x.id));
        }
        self.by_l.insert(x.clone());
        self.by_r.insert(x);
        Ok(())
    }

    /// Remove the interval stored under `x`'s left key.
    pub fn remove(&mut self, x: &Interval) -> Result<Arc<Interval>> {
        let stored = self.by_l.remove(&x.lkey()).ok_or(Error::Membership(x.id))?;
        self.by_r.remove(&stored.rkey()).ok_or_else(|| Error::Internal("views disagree".into()))?;
        Ok(stored)
    }

    pub fn update(&mut self, kind: UpdateKind, x: &Interval) -> Result<()> {
        match kind {
            UpdateKind::Insert => self.insert(Arc::new(x.clone())),
            UpdateKind::Delete => self.remove(x).map(|_| ()),
        }
    }

    /// Stored interval with this left key, if any.
    pub fn find_by_left(&self, k: &EKey) -> Option<Arc<Interval>> {
        self.by_l.find(k)
    }

    pub fn find_by_right(&self, k: &EKey) -> Option<Arc<Interval>> {
        self.by_r.find(k)
    }

    /// First interval with left key at or above the bound.
    pub fn first_left_at_or_above(&self, b: &Bound) -> Option<Arc<Interval>> {
        if let Bound::Key(k) = b {
            if let Some(x) = self.by_l.find(k) {
                return Some(x);
            }
        }
        self.by_l.succ(b)
    }

    /// Last interval with right key at or below the bound.
    pub fn last_right_at_or_below(&self, b: &Bound) -> Option<Arc<Interval>> {
        if let Bound::Key(k) = b {
            if let Some(x) = self.by_r.find(k) {
                return Some(x);
            }
        }
        self.by_r.pred(b)
    }

    /// First interval whose left key is strictly above the bound.
    pub fn next_by_left(&self, b: &Bound) -> Option<Arc<Interval>> {
        self.by_l.succ(b)
    }

    /// Last interval whose left key is strictly below the bound.
    pub fn prev_by_left(&self, b: &Bound) -> Option<Arc<Interval>> {
        self.by_l.pred(b)
    }

    /// Last interval whose right key is strictly below the bound.
    pub fn prev_by_right(&self, b: &Bound) -> Option<Arc<Interval>> {
        self.by_r.pred(b)
    }

    /// First interval whose right key is strictly above the bound.
    pub fn next_by_right(&self, b: &Bound) -> Option<Arc<Interval>> {
        self.by_r.succ(b)
    }

    pub fn first(&self) -> Option<Arc<Interval>> {
        self.by_l.succ(&Bound::NegInf)
    }

    pub fn last(&self) -> Option<Arc<Interval>> {
        self.by_l.pred(&Bound::PosInf)
    }

    /// Intervals sorted by left key.
    pub fn dump(&self) -> Vec<Arc<Interval>> {
        let mut v = Vec::with_capacity(self.len());
        collect(&self.by_l.root, &mut v);
        v
    }

    /// Split into `{l <= t}` and the rest. The right-keyed view is split by
    /// key when both parts are order-separated there, and partitioned
    /// otherwise.
    pub fn split(mut self, t: &RationalKey) -> (IqdsExplicit, IqdsExplicit) {
        let (la, lb) = split_by(Kind::ByLeft, self.by_l.root.take(), &|e| e.v <= *t);
        let left_last = {
            let mut c = &la;
            let mut last = None;
            while let Some(n) = c {
                last = Some(n.item.clone());
                c = &n.right;
            }
            last
        };
        let right_first = {
            let mut c = &lb;
            let mut first = None;
            while let Some(n) = c {
                first = Some(n.item.clone());
                c = &n.left;
            }
            first
        };
        let separated = match (&left_last, &right_first) {
            (Some(_), Some(_)) => {
                // Separated in r-order iff every right key of the left part is
                // below every right key of the right part.
                let max_r_left = rightmost(&self.by_r.root, |x| x.l <= *t);
                let min_r_right = leftmost(&self.by_r.root, |x| x.l > *t);
                match (max_r_left, min_r_right) {
                    (Some(a), Some(b)) => a.rkey() < b.rkey(),
                    _ => true,
                }
            }
            _ => true,
        };
        let (ra, rb) = if separated {
            match (&left_last, &right_first) {
                (None, _) => (None, self.by_r.root.take()),
                (_, None) => (self.by_r.root.take(), None),
                (Some(_), Some(f)) => {
                    let fk = f.rkey();
                    let min_r_right = leftmost(&self.by_r.root, |x| x.l > *t).map(|x| x.rkey()).unwrap_or(fk);
                    split_by(Kind::ByRight, self.by_r.root.take(), &|e| *e < min_r_right)
                }
            }
        } else {
            let mut items = Vec::new();
            collect(&self.by_r.root, &mut items);
            let mut a = View::new(Kind::ByRight);
            let mut b = View::new(Kind::ByRight);
            for it in items {
                if it.l <= *t {
                    a.root = join(Kind::ByRight, a.root.take(), Some(Node::new(Kind::ByRight, it)));
                } else {
                    b.root = join(Kind::ByRight, b.root.take(), Some(Node::new(Kind::ByRight, it)));
                }
            }
            (rebuild(Kind::ByRight, a.root), rebuild(Kind::ByRight, b.root))
        };
        (
            IqdsExplicit { by_l: View { kind: Kind::ByLeft, root: la }, by_r: View { kind: Kind::ByRight, root: ra } },
            IqdsExplicit { by_l: View { kind: Kind::ByLeft, root: lb }, by_r: View { kind: Kind::ByRight, root: rb } },
        )
    }

    /// Union with `other`; requires every left endpoint here `<= t <` every
    /// left endpoint of `other`.
    pub fn merge(mut self, mut other: IqdsExplicit, t: &RationalKey) -> Result<IqdsExplicit> {
        if let Some(x) = self.last() {
            if x.l > *t {
                return Err(Error::Ordering(format!("left part has l={} above t={}", x.l, t)));
            }
        }
        if let Some(y) = other.first() {
            if y.l <= *t {
                return Err(Error::Ordering(format!("right part has l={} not above t={}", y.l, t)));
            }
        }
        let l = join(Kind::ByLeft, self.by_l.root.take(), other.by_l.root.take());
        let r = union(Kind::ByRight, self.by_r.root.take(), other.by_r.root.take());
        Ok(IqdsExplicit { by_l: View { kind: Kind::ByLeft, root: l }, by_r: View { kind: Kind::ByRight, root: r } })
    }

    /// Replace every right endpoint above `t` by `t`. Touches only the
    /// affected intervals but costs linear time in their number.
    pub fn clip_right(&mut self, t: &RationalKey) {
        let items = self.dump();
        let mut changed = Vec::new();
        for it in &items {
            if it.r > *t {
                changed.push(it.clone());
            }
        }
        for it in changed {
            self.remove(&it).expect("present");
            let mut c = (*it).clone();
            c.r = t.clone();
            self.insert(Arc::new(c)).expect("fresh key");
        }
    }

    pub fn height(&self) -> usize {
        height(&self.by_l.root).max(height(&self.by_r.root))
    }

    /// Full-traversal check of ordering, sizes and augmentation in both views.
    pub fn check(&self) -> bool {
        let a = self.dump();
        let mut b = Vec::new();
        collect(&self.by_r.root, &mut b);
        let mut ia: Vec<u64> = a.iter().map(|x| x.id).collect();
        let mut ib: Vec<u64> = b.iter().map(|x| x.id).collect();
        ia.sort_unstable();
        ib.sort_unstable();
        ia == ib && check_aug(Kind::ByLeft, &self.by_l.root) && check_aug(Kind::ByRight, &self.by_r.root)
    }
}

fn leftmost(t: &Link, pred: impl Fn(&Interval) -> bool + Copy) -> Option<Arc<Interval>> {
    // In-order first element satisfying pred; linear worst case, used only
    // to decide whether a split is order-separated.
    let n = t.as_ref()?;
    leftmost(&n.left, pred).or_else(|| pred(&n.item).then(|| n.item.clone())).or_else(|| leftmost(&n.right, pred))
}

fn rightmost(t: &Link, pred: impl Fn(&Interval) -> bool + Copy) -> Option<Arc<Interval>> {
    let n = t.as_ref()?;
    rightmost(&n.right, pred).or_else(|| pred(&n.item).then(|| n.item.clone())).or_else(|| rightmost(&n.left, pred))
}

/// Rebuild a treap from scratch so heap order holds after sequential joins.
fn rebuild(kind: Kind, t: Link) -> Link {
    let mut items = Vec::new();
    collect(&t, &mut items);
    let mut root = None;
    for it in items {
        let k = kind.key(&it);
        let (a, b) = split_by(kind, root, &|e| *e < k);
        root = join(kind, join(kind, a, Some(Node::new(kind, it))), b);
    }
    root
}

impl Iqds for IqdsExplicit {
    fn report_extreme(&self, dir: Direction, a: &Bound, b: &Bound) -> Option<Arc<Interval>> {
        match dir {
            Direction::LeftmostRight => range_best(Kind::ByLeft, &self.by_l.root, a, b),
            Direction::RightmostLeft => range_best(Kind::ByRight, &self.by_r.root, a, b),
        }
    }

    fn endpoints(&self, _id: u64) -> Option<Arc<Interval>> {
        // Lookups by id go through the owner's index; the views are keyed by
        // endpoints only.
        None
    }

    fn max_left(&self) -> Option<Arc<Interval>> {
        self.last()
    }
}
