//! Batch pipeline for squares: keep centered squares, decompose the quadtree
//! into leaves, internal nodes and monochild paths, map each path quadrant
//! to depth intervals, solve those, thin with [`half`] and combine.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::geom_core::{node_of_q, is_centered_q, CellId, Interval, QSquare, QuadRoot, Quadrant, RationalKey, Square, QUADRANTS};
use crate::interval_mis::IntervalMis;
use crate::oracle;
use crate::{Error, Result};

/// Path strictly between `top` and `bottom`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PathDescriptor {
    pub top: CellId,
    pub bottom: CellId,
}

impl PathDescriptor {
    pub fn contains_depth(&self, d: u32) -> bool {
        self.top.depth < d && d < self.bottom.depth
    }

    /// Path node at depth `d` (an ancestor of `bottom`).
    pub fn node_at(&self, d: u32) -> CellId {
        self.bottom.ancestor(d)
    }

    /// Label of the path node at depth `d`: quadrant of its child toward
    /// the bottom. Also defined for `top`.
    pub fn label_at(&self, d: u32) -> Quadrant {
        self.bottom.ancestor(d).quadrant_toward(&self.bottom)
    }

    pub fn is_empty(&self) -> bool {
        self.bottom.depth == self.top.depth + 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub leaves: Vec<CellId>,
    pub internal: Vec<CellId>,
    pub paths: Vec<PathDescriptor>,
    pub squares_by_node: BTreeMap<CellId, Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthInterval {
    pub lo: u32,
    pub hi: u32,
}

impl DepthInterval {
    pub fn intersects(&self, o: &DepthInterval) -> bool {
        self.lo.max(o.lo) <= self.hi.min(o.hi)
    }

    /// Stored form with a third of padding on both sides.
    pub fn padded(&self, id: u64) -> Interval {
        Interval {
            id,
            l: RationalKey::new(3 * self.lo as i64 - 1, 3),
            r: RationalKey::new(3 * self.hi as i64 + 1, 3),
            synthetic: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalSolver {
    Exact,
    Approximate,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticStats {
    pub n: usize,
    pub centered: usize,
    pub leaves: usize,
    pub internal: usize,
    pub paths: usize,
    pub output: usize,
    /// Summed halved sizes per quadrant, in quadrant order.
    pub per_quadrant: [usize; 4],
    pub chosen_quadrant: usize,
    pub seed: u64,
}

pub fn filter_centered(squares: &[Square], root: &QuadRoot) -> Vec<Square> {
    squares
        .iter()
        .filter(|s| root.quantize_square(s).map(|q| is_centered_q(&q)).unwrap_or(false))
        .copied()
        .collect()
}

fn quantize_all(squares: &[Square], root: &QuadRoot) -> Result<Vec<QSquare>> {
    squares.iter().map(|s| root.quantize_square(s)).collect()
}

/// Full (uncompressed) tree of marked nodes and their ancestors, with
/// child counts.
fn full_tree(nodes: impl Iterator<Item = CellId>) -> HashMap<CellId, u32> {
    let mut children: HashMap<CellId, u32> = HashMap::new();
    for c in nodes {
        if children.contains_key(&c) {
            continue;
        }
        children.insert(c, 0);
        let mut cur = c;
        while let Some(p) = cur.parent() {
            let seen = children.contains_key(&p);
            *children.entry(p).or_insert(0) += 1;
            if seen {
                break;
            }
            cur = p;
        }
    }
    children
}

/// Decompose the tree spanned by the given marked nodes.
pub fn decompose_nodes(marked: &BTreeMap<CellId, Vec<u64>>) -> Decomposition {
    let tree = full_tree(marked.keys().copied());
    let mut leaves = Vec::new();
    let mut internal = Vec::new();
    let mut paths = Vec::new();
    let is_mono = |c: &CellId| c.depth > 0 && tree.get(c) == Some(&1);
    for (&c, &ch) in &tree {
        if is_mono(&c) {
            continue;
        }
        if ch == 0 {
            leaves.push(c);
        } else {
            internal.push(c);
        }
        if let Some(mut top) = c.parent() {
            while is_mono(&top) {
                top = top.parent().expect("monochild nodes are not the root");
            }
            paths.push(PathDescriptor { top, bottom: c });
        }
    }
    leaves.sort();
    internal.sort();
    paths.sort();
    Decomposition { leaves, internal, paths, squares_by_node: marked.clone() }
}

pub fn decompose(centered: &[Square], root: &QuadRoot) -> Result<Decomposition> {
    let mut marked: BTreeMap<CellId, Vec<u64>> = BTreeMap::new();
    for q in quantize_all(centered, root)? {
        marked.entry(node_of_q(&q)).or_default().push(q.id);
    }
    Ok(decompose_nodes(&marked))
}

/// `[d(s), d']` where `d'` is the deepest node of the path labelled `q`
/// whose center lies in `s`. `s` must sit on a `q`-labelled path node.
pub fn depth_interval(p: &PathDescriptor, q: Quadrant, s: &QSquare) -> Result<DepthInterval> {
    let node = node_of_q(s);
    if !p.contains_depth(node.depth) || p.node_at(node.depth) != node {
        return Err(Error::Precondition(format!("square {} is not on the path", s.id)));
    }
    if p.label_at(node.depth) != q {
        return Err(Error::Precondition(format!("square {} is not on the {:?} subpath", s.id, q)));
    }
    let ds: Vec<u32> = (node.depth..p.bottom.depth).filter(|&d| p.label_at(d) == q).collect();
    // Contained centers form a prefix of the monotone center sequence.
    let (mut lo, mut hi) = (0usize, ds.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if s.contains_point(p.node_at(ds[mid]).center(s.bits)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(DepthInterval { lo: node.depth, hi: ds[lo] })
}

pub fn monotone_intervals(
    p: &PathDescriptor,
    q: Quadrant,
    squares: &[Square],
    root: &QuadRoot,
) -> Result<Vec<(u64, DepthInterval)>> {
    quantize_all(squares, root)?.iter().map(|s| Ok((s.id, depth_interval(p, q, s)?))).collect()
}

/// Drop the last, third-to-last, ... elements of a depth-sorted list.
pub fn half(sorted: &[u64]) -> Vec<u64> {
    let n = sorted.len();
    sorted.iter().enumerate().filter(|(j, _)| (n - 1 - j) % 2 == 1).map(|(_, &id)| id).collect()
}

fn solve_intervals(items: &[(u64, DepthInterval)], solver: IntervalSolver) -> Vec<u64> {
    match solver {
        IntervalSolver::Exact => {
            let v: Vec<oracle::OInterval<u32>> =
                items.iter().map(|(id, d)| oracle::OInterval { id: *id, l: d.lo, r: d.hi }).collect();
            oracle::exact_intervals(&v).witness
        }
        IntervalSolver::Approximate => {
            let mut m = IntervalMis::new(5);
            for (id, d) in items {
                m.insert(d.padded(*id)).expect("fresh ids");
            }
            m.independent_ids()
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct StaticSolution {
    pub chosen: Vec<u64>,
    pub stats: StaticStats,
    pub decomposition: Decomposition,
    /// Halved set per path and quadrant.
    pub halved: BTreeMap<(PathDescriptor, usize), Vec<u64>>,
}

pub fn solve_static_root(squares: &[Square], root: &QuadRoot, solver: IntervalSolver) -> Result<StaticSolution> {
    let centered = filter_centered(squares, root);
    let qs = quantize_all(&centered, root)?;
    let by_id: HashMap<u64, QSquare> = qs.iter().map(|q| (q.id, *q)).collect();
    let dec = decompose(&centered, root)?;
    let mut halved = BTreeMap::new();
    let mut per_q = [0usize; 4];
    for p in &dec.paths {
        let mut buckets: [Vec<(u64, DepthInterval)>; 4] = Default::default();
        for d in p.top.depth + 1..p.bottom.depth {
            let node = p.node_at(d);
            if let Some(ids) = dec.squares_by_node.get(&node) {
                let q = p.label_at(d);
                for id in ids {
                    buckets[q.index()].push((*id, depth_interval(p, q, &by_id[id])?));
                }
            }
        }
        for q in QUADRANTS {
            let items = &buckets[q.index()];
            let depth: HashMap<u64, u32> = items.iter().map(|(id, d)| (*id, d.lo)).collect();
            let mut chosen = solve_intervals(items, solver);
            chosen.sort_by_key(|id| depth[id]);
            let h = half(&chosen);
            per_q[q.index()] += h.len();
            halved.insert((*p, q.index()), h);
        }
    }
    let best = (0..4).max_by_key(|&q| (per_q[q], std::cmp::Reverse(q))).unwrap();
    let mut chosen: Vec<u64> = dec.leaves.iter().map(|c| *dec.squares_by_node[c].iter().min().unwrap()).collect();
    for p in &dec.paths {
        chosen.extend(halved[&(*p, best)].iter().copied());
    }
    chosen.sort_unstable();
    let stats = StaticStats {
        n: squares.len(),
        centered: centered.len(),
        leaves: dec.leaves.len(),
        internal: dec.internal.len(),
        paths: dec.paths.len(),
        output: chosen.len(),
        per_quadrant: per_q,
        chosen_quadrant: best,
        seed: root.seed,
    };
    Ok(StaticSolution { chosen, stats, decomposition: dec, halved })
}

pub fn solve_static(squares: &[Square], seed: u64, solver: IntervalSolver) -> Result<(Vec<u64>, StaticStats)> {
    let s = solve_static_root(squares, &QuadRoot::from_seed(seed), solver)?;
    Ok((s.chosen, s.stats))
}
