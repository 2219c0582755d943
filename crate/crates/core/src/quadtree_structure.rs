//! Dynamic independent set of squares over a compressed quadtree.
//!
//! Only centered squares take part. Stored nodes are the root, every node
//! holding squares and every node with two or more non-empty child
//! quadrants; runs of empty single-child nodes are compressed into edges.
//! Each non-root node that is not single-child ends a path, and the
//! single-child nodes above it up to the next branching node form that path.
//!
//! The reported set is the smallest-id square of every leaf plus the
//! reported squares of every path. Updates run in three phases: marks in the
//! search structure, then tree and path changes, then leaf representatives.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::delta::Delta;
use crate::geom_core::{is_centered_q, node_of_q, CellId, QuadRoot, Quadrant, Square, QUADRANTS};
use crate::lct::{LinkCut, NaivePointers, Pointers};
use crate::path_structure::PathStructure;
use crate::search_structure::{Mark, QueryBox, SearchStructure};
use crate::squares_static::{decompose_nodes, Decomposition, PathDescriptor};
use crate::{Error, Result};

pub type PathId = u64;

const NO_PATH: PathId = u64::MAX;

#[derive(Clone, Debug)]
struct NodeRec {
    squares: Vec<u64>,
    children: [Option<CellId>; 4],
    parent: Option<CellId>,
    ptr: usize,
}

impl NodeRec {
    fn child_count(&self) -> usize {
        self.children.iter().filter(|c| c.is_some()).count()
    }

    fn only_child(&self) -> Option<CellId> {
        let mut it = self.children.iter().flatten();
        match (it.next(), it.next()) {
            (Some(&c), None) => Some(c),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Leaf,
    Internal,
    Monochild(Quadrant),
    /// The root of an empty structure.
    Empty,
}

/// Where a cell sits relative to the stored tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocateResult {
    Present,
    /// Strictly inside the compressed edge from `upper` down to `lower`.
    OnEdge { upper: CellId, lower: CellId },
    /// Not in the tree; it would hang below `parent`, through a new
    /// branching node `branch` when it splits a compressed edge.
    Attach { parent: CellId, branch: Option<CellId> },
}

/// Tree shape for comparison and export.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub leaves: Vec<CellId>,
    pub internal: Vec<CellId>,
    pub paths: Vec<PathDescriptor>,
    pub squares_by_node: BTreeMap<CellId, Vec<u64>>,
}

impl From<&Decomposition> for Snapshot {
    fn from(d: &Decomposition) -> Self {
        let mut squares_by_node = d.squares_by_node.clone();
        squares_by_node.values_mut().for_each(|v| v.sort_unstable());
        Snapshot { leaves: d.leaves.clone(), internal: d.internal.clone(), paths: d.paths.clone(), squares_by_node }
    }
}

pub struct GlobalState {
    root: QuadRoot,
    k: usize,
    nodes: HashMap<CellId, NodeRec>,
    search: SearchStructure,
    paths: HashMap<PathId, PathStructure>,
    by_bottom: HashMap<CellId, PathId>,
    next_path: PathId,
    pointers: Pointers,
    leaf_rep: HashMap<CellId, u64>,
    passive: HashSet<u64>,
    squares: HashMap<u64, Square>,
}

impl GlobalState {
    /// `naive_pointers` swaps the link-cut tree for parent walks.
    pub fn new(root: QuadRoot, k: usize, naive_pointers: bool) -> Self {
        let mut pointers = if naive_pointers {
            Pointers::Naive(NaivePointers::new())
        } else {
            Pointers::LinkCut(LinkCut::new())
        };
        let ptr = pointers.inner().add_node(NO_PATH);
        let mut nodes = HashMap::new();
        nodes.insert(CellId::ROOT, NodeRec { squares: vec![], children: [None; 4], parent: None, ptr });
        GlobalState {
            root,
            k,
            nodes,
            search: SearchStructure::new(root.b),
            paths: HashMap::new(),
            by_bottom: HashMap::new(),
            next_path: 0,
            pointers,
            leaf_rep: HashMap::new(),
            passive: HashSet::new(),
            squares: HashMap::new(),
        }
    }

    pub fn quad_root(&self) -> &QuadRoot {
        &self.root
    }

    pub fn search(&self) -> &SearchStructure {
        &self.search
    }

    /// Live squares, centered or not.
    pub fn len(&self) -> usize {
        self.squares.len() + self.passive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn square(&self, id: u64) -> Option<&Square> {
        self.squares.get(&id)
    }

    pub fn paths(&self) -> impl Iterator<Item = &PathStructure> {
        self.paths.values()
    }

    pub fn pointer_work(&self) -> u64 {
        self.pointers.work()
    }

    pub fn kind(&self, c: &CellId) -> Option<NodeKind> {
        let rec = self.nodes.get(c)?;
        let n = rec.child_count();
        Some(if c.depth == 0 {
            match (n, rec.squares.is_empty()) {
                (0, true) => NodeKind::Empty,
                (0, false) => NodeKind::Leaf,
                _ => NodeKind::Internal,
            }
        } else {
            match n {
                0 => NodeKind::Leaf,
                1 => NodeKind::Monochild(c.quadrant_toward(&rec.only_child().unwrap())),
                _ => NodeKind::Internal,
            }
        })
    }

    fn mark_of(&self, c: &CellId) -> Mark {
        match self.kind(c) {
            Some(NodeKind::Monochild(q)) => Some(q),
            _ => None,
        }
    }

    fn remark(&mut self, c: &CellId) {
        let m = self.mark_of(c);
        self.search.range_mark(&QueryBox::node(c, self.root.b), m);
    }

    fn deepest_stored_ancestor(&self, c: &CellId) -> CellId {
        (0..=c.depth).rev().map(|d| c.ancestor(d)).find(|a| self.nodes.contains_key(a)).expect("root is stored")
    }

    pub fn locate(&self, target: &CellId) -> LocateResult {
        if self.nodes.contains_key(target) {
            return LocateResult::Present;
        }
        let a = self.deepest_stored_ancestor(target);
        match self.nodes[&a].children[a.quadrant_toward(target).index()] {
            None => LocateResult::Attach { parent: a, branch: None },
            Some(c) if target.is_ancestor_of(&c) => LocateResult::OnEdge { upper: a, lower: c },
            Some(c) => LocateResult::Attach { parent: a, branch: Some(target.lca(&c)) },
        }
    }

    fn add_node(&mut self, c: CellId, squares: Vec<u64>) {
        let ptr = self.pointers.inner().add_node(NO_PATH);
        self.nodes.insert(c, NodeRec { squares, children: [None; 4], parent: None, ptr });
    }

    fn free_node(&mut self, c: &CellId) {
        let rec = self.nodes.remove(c).expect("stored");
        debug_assert!(rec.parent.is_none() && rec.child_count() == 0);
        self.pointers.inner().free_node(rec.ptr);
    }

    fn attach(&mut self, child: CellId, parent: CellId) {
        let q = parent.quadrant_toward(&child);
        let pp = self.nodes[&parent].ptr;
        let rec = self.nodes.get_mut(&child).unwrap();
        rec.parent = Some(parent);
        let cp = rec.ptr;
        self.nodes.get_mut(&parent).unwrap().children[q.index()] = Some(child);
        self.pointers.inner().link(cp, pp);
    }

    fn detach(&mut self, child: CellId) {
        let rec = self.nodes.get_mut(&child).unwrap();
        let Some(parent) = rec.parent.take() else { return };
        let cp = rec.ptr;
        let q = parent.quadrant_toward(&child);
        self.nodes.get_mut(&parent).unwrap().children[q.index()] = None;
        self.pointers.inner().cut(cp);
    }

    fn pointer(&mut self, c: &CellId) -> PathId {
        let p = self.nodes[c].ptr;
        self.pointers.inner().get(p)
    }

    /// Path running along the compressed edge above the stored node `c`.
    fn edge_path(&mut self, c: &CellId) -> PathId {
        match self.kind(c) {
            Some(NodeKind::Monochild(_)) => self.pointer(c),
            _ => self.by_bottom[c],
        }
    }

    /// Point every stored node strictly inside path `pid` at it.
    fn repoint(&mut self, pid: PathId) {
        let desc = self.paths[&pid].descriptor();
        let u = self.nodes[&desc.bottom].parent.expect("bottom has a parent");
        if u == desc.top {
            return;
        }
        let anc = self.nodes[&desc.top].children[desc.top.quadrant_toward(&desc.bottom).index()].unwrap();
        let (pu, pa) = (self.nodes[&u].ptr, self.nodes[&anc].ptr);
        self.pointers.inner().assign_path(pu, pa, pid);
    }

    fn new_path(&mut self, top: CellId, bottom: CellId) -> PathId {
        let pid = self.next_path;
        self.next_path += 1;
        self.paths.insert(pid, PathStructure::new(PathDescriptor { top, bottom }, self.k));
        self.by_bottom.insert(bottom, pid);
        pid
    }

    /// Split path `pid` at `eta`; the lower part keeps the id.
    fn split_path(&mut self, pid: PathId, eta: CellId, d: &mut Delta) -> Result<()> {
        let mut upper = self.paths.remove(&pid).ok_or_else(|| Error::Internal(format!("no path {}", pid)))?;
        let (dd, lower) = upper.split(&self.search, eta)?;
        d.extend(dd);
        self.paths.insert(pid, lower);
        let up = self.next_path;
        self.next_path += 1;
        self.paths.insert(up, upper);
        self.by_bottom.insert(eta, up);
        self.repoint(up);
        Ok(())
    }

    fn drop_path(&mut self, pid: PathId, d: &mut Delta) {
        if let Some(p) = self.paths.remove(&pid) {
            for id in p.reported() {
                d.remove(id);
            }
            self.by_bottom.remove(&p.descriptor().bottom);
        }
    }

    fn refresh_leaf(&mut self, c: &CellId, d: &mut Delta) {
        let cur = match self.kind(c) {
            Some(NodeKind::Leaf) => self.nodes[c].squares.iter().min().copied(),
            _ => None,
        };
        let old = self.leaf_rep.get(c).copied();
        if cur != old {
            if let Some(o) = old {
                d.remove(o);
                self.leaf_rep.remove(c);
            }
            if let Some(n) = cur {
                d.add(n);
                self.leaf_rep.insert(*c, n);
            }
        }
    }

    pub fn insert(&mut self, s: Square) -> Result<Delta> {
        if self.squares.contains_key(&s.id) || self.passive.contains(&s.id) {
            return Err(Error::Membership(s.id));
        }
        let q = self.root.quantize_square(&s)?;
        if !is_centered_q(&q) {
            self.passive.insert(s.id);
            return Ok(Delta::new());
        }
        self.squares.insert(s.id, s);
        let mut d = Delta::new();
        let v = node_of_q(&q);
        if let Some(rec) = self.nodes.get_mut(&v) {
            rec.squares.push(s.id);
            let m = self.mark_of(&v);
            self.search.insert(&q, m)?;
            if m.is_some() {
                let pid = self.pointer(&v);
                d.extend(self.paths.get_mut(&pid).unwrap().insert(&self.search, &q)?);
            }
            self.refresh_leaf(&v, &mut d);
            return Ok(d.net());
        }
        let a = self.deepest_stored_ancestor(&v);
        match self.nodes[&a].children[a.quadrant_toward(&v).index()] {
            None => {
                let before = self.kind(&a).unwrap();
                self.add_node(v, vec![s.id]);
                self.attach(v, a);
                self.search.insert(&q, None)?;
                self.remark(&a);
                match before {
                    NodeKind::Leaf if a.depth > 0 => {
                        // The leaf becomes single-child: its path grows to v.
                        let pid = self.by_bottom.remove(&a).unwrap();
                        self.by_bottom.insert(v, pid);
                        d.extend(self.paths.get_mut(&pid).unwrap().extend(&self.search, v)?);
                        self.repoint(pid);
                    }
                    NodeKind::Monochild(_) => {
                        let pid = self.pointer(&a);
                        self.split_path(pid, a, &mut d)?;
                        self.new_path(a, v);
                    }
                    _ => {
                        self.new_path(a, v);
                    }
                }
                self.refresh_leaf(&a, &mut d);
                self.refresh_leaf(&v, &mut d);
            }
            Some(c) => {
                let w = v.lca(&c);
                let pid = self.edge_path(&c);
                self.detach(c);
                if w == v {
                    // v lands on the compressed edge and joins its path.
                    self.add_node(v, vec![s.id]);
                    self.attach(v, a);
                    self.attach(c, v);
                    let pv = self.nodes[&v].ptr;
                    self.pointers.inner().assign_path(pv, pv, pid);
                    let m = self.mark_of(&v);
                    self.search.insert(&q, m)?;
                    d.extend(self.paths.get_mut(&pid).unwrap().insert(&self.search, &q)?);
                } else {
                    // A new branching node w splits the edge's path.
                    self.add_node(w, vec![]);
                    self.attach(w, a);
                    self.attach(c, w);
                    self.add_node(v, vec![s.id]);
                    self.attach(v, w);
                    self.search.insert(&q, None)?;
                    self.split_path(pid, w, &mut d)?;
                    self.new_path(w, v);
                    self.refresh_leaf(&v, &mut d);
                }
            }
        }
        Ok(d.net())
    }

    pub fn delete(&mut self, id: u64) -> Result<Delta> {
        if self.passive.remove(&id) {
            return Ok(Delta::new());
        }
        self.squares.remove(&id).ok_or(Error::Membership(id))?;
        let q = self.search.delete(id)?;
        let v = node_of_q(&q);
        let mut d = Delta::new();
        let before = self.kind(&v).ok_or_else(|| Error::Internal(format!("node of {} not stored", id)))?;
        let rec = self.nodes.get_mut(&v).unwrap();
        rec.squares.retain(|&x| x != id);
        let emptied = rec.squares.is_empty();
        if let NodeKind::Monochild(_) = before {
            let pid = self.pointer(&v);
            d.extend(self.paths.get_mut(&pid).unwrap().delete(&self.search, &q)?);
        }
        if !emptied {
            self.refresh_leaf(&v, &mut d);
            return Ok(d.net());
        }
        match before {
            NodeKind::Monochild(_) => {
                // Empty single-child nodes are compressed away.
                let c = self.nodes[&v].only_child().unwrap();
                let p = self.nodes[&v].parent.unwrap();
                self.detach(c);
                self.detach(v);
                self.free_node(&v);
                self.attach(c, p);
            }
            NodeKind::Leaf if v.depth > 0 => {
                let p = self.nodes[&v].parent.unwrap();
                let pid = self.by_bottom[&v];
                let p_before = self.kind(&p).unwrap();
                let p_children = self.nodes[&p].child_count();
                self.detach(v);
                self.free_node(&v);
                self.refresh_leaf(&v, &mut d);
                match p_before {
                    NodeKind::Monochild(_) => {
                        // p becomes a leaf and the path ends there.
                        self.remark(&p);
                        self.by_bottom.remove(&v);
                        let path = self.paths.get_mut(&pid).unwrap();
                        d.extend(path.contract(&self.search, p)?);
                        self.by_bottom.insert(p, pid);
                    }
                    NodeKind::Internal if p.depth > 0 && p_children == 2 => {
                        // p becomes single-child: the paths above and below it join.
                        self.drop_path(pid, &mut d);
                        let c = self.nodes[&p].only_child().unwrap();
                        let upper = self.by_bottom.remove(&p).unwrap();
                        let lower = self.edge_path(&c);
                        if self.nodes[&p].squares.is_empty() {
                            let pp = self.nodes[&p].parent.unwrap();
                            self.detach(c);
                            self.detach(p);
                            self.free_node(&p);
                            self.attach(c, pp);
                        } else {
                            self.remark(&p);
                        }
                        let lp = self.paths.remove(&lower).unwrap();
                        let bottom = lp.descriptor().bottom;
                        d.extend(self.paths.get_mut(&upper).unwrap().merge(&self.search, lp)?);
                        self.by_bottom.insert(bottom, upper);
                        self.repoint(upper);
                    }
                    _ => self.drop_path(pid, &mut d),
                }
                self.refresh_leaf(&p, &mut d);
            }
            _ => self.refresh_leaf(&v, &mut d),
        }
        Ok(d.net())
    }

    /// Current reported set, sorted.
    pub fn reported(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.leaf_rep.values().copied().collect();
        for p in self.paths.values() {
            out.extend(p.reported());
        }
        out.sort_unstable();
        out
    }

    pub fn snapshot(&self) -> Snapshot {
        let mut s = Snapshot::default();
        for (c, rec) in &self.nodes {
            match self.kind(c).unwrap() {
                NodeKind::Leaf => s.leaves.push(*c),
                NodeKind::Internal => s.internal.push(*c),
                _ => {}
            }
            if !rec.squares.is_empty() {
                let mut v = rec.squares.clone();
                v.sort_unstable();
                s.squares_by_node.insert(*c, v);
            }
        }
        s.paths = self.paths.values().map(|p| p.descriptor()).collect();
        s.leaves.sort();
        s.internal.sort();
        s.paths.sort();
        s
    }

    /// From-scratch decomposition of the live centered squares.
    pub fn rebuilt_snapshot(&self) -> Result<Snapshot> {
        let mut marked: BTreeMap<CellId, Vec<u64>> = BTreeMap::new();
        for s in self.squares.values() {
            marked.entry(node_of_q(&self.root.quantize_square(s)?)).or_default().push(s.id);
        }
        Ok(Snapshot::from(&decompose_nodes(&marked)))
    }

    /// Full invariant sweep; linear or worse, for tests.
    pub fn check(&mut self) -> Result<()> {
        if self.snapshot() != self.rebuilt_snapshot()? {
            return Err(Error::Internal("tree shape differs from a fresh decomposition".into()));
        }
        for (sq, m) in self.search.dump() {
            let want = self.mark_of(&node_of_q(&sq));
            if m != want {
                return Err(Error::Internal(format!("square {} has mark {:?}, expected {:?}", sq.id, m, want)));
            }
        }
        if self.search.len() != self.squares.len() {
            return Err(Error::Internal("search structure size differs".into()));
        }
        let stored: Vec<CellId> = self.nodes.keys().copied().collect();
        for c in stored {
            let rec = &self.nodes[&c];
            if c.depth > 0 && rec.squares.is_empty() && rec.child_count() < 2 {
                return Err(Error::Internal(format!("{:?} should be compressed", c)));
            }
            for (i, ch) in rec.children.iter().enumerate() {
                if let Some(ch) = ch {
                    if self.nodes[ch].parent != Some(c) || c.quadrant_toward(ch) != QUADRANTS[i] {
                        return Err(Error::Internal(format!("bad link {:?} -> {:?}", c, ch)));
                    }
                }
            }
            if let Some(NodeKind::Monochild(_)) = self.kind(&c) {
                let pid = self.pointer(&c);
                let ok = self.paths.get(&pid).map_or(false, |p| {
                    let d = p.descriptor();
                    d.contains_depth(c.depth) && d.node_at(c.depth) == c
                });
                if !ok {
                    return Err(Error::Internal(format!("{:?} points at the wrong path {}", c, pid)));
                }
            }
        }
        for (b, pid) in &self.by_bottom {
            if self.paths.get(pid).map(|p| p.descriptor().bottom) != Some(*b) {
                return Err(Error::Internal(format!("bottom index wrong at {:?}", b)));
            }
        }
        for p in self.paths.values() {
            p.check(&self.search)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state() -> GlobalState {
        GlobalState::new(QuadRoot::unit(20), 2, false)
    }

    #[test]
    fn first_square_is_a_leaf() {
        let mut g = state();
        let d = g.insert(Square::new(1, 0.3, 0.3, 0.4)).unwrap();
        assert_eq!(d.to_line().add, vec![1]);
        assert_eq!(g.snapshot().leaves, vec![CellId::ROOT]);
        let d = g.delete(1).unwrap();
        assert_eq!(d.to_line().remove, vec![1]);
        g.check().unwrap();
    }

    #[test]
    fn noncentered_is_ignored() {
        let mut g = state();
        let d = g.insert(Square::new(1, 0.2, 0.6, 0.1)).unwrap();
        assert!(d.is_empty());
        assert!(g.delete(1).unwrap().is_empty());
        assert_eq!(g.delete(1), Err(Error::Membership(1)));
    }

    #[test]
    fn locate_edges() {
        let mut g = state();
        // Centered at the depth-3 cell [0, 1/8]^2, with a center (1/16, 1/16).
        g.insert(Square::new(1, 0.06, 0.06, 0.01)).unwrap();
        let leaf = g.snapshot().leaves[0];
        assert_eq!(leaf.depth, 3);
        assert_eq!(g.locate(&CellId::ROOT), LocateResult::Present);
        assert_eq!(g.locate(&leaf.ancestor(2)), LocateResult::OnEdge { upper: CellId::ROOT, lower: leaf });
        let far = CellId::new(2, 3, 3);
        assert_eq!(g.locate(&far), LocateResult::Attach { parent: CellId::ROOT, branch: None });
        let cousin = CellId::new(3, 1, 0);
        assert_eq!(g.locate(&cousin), LocateResult::Attach { parent: CellId::ROOT, branch: Some(CellId::new(2, 0, 0)) });
        g.check().unwrap();
    }
}
