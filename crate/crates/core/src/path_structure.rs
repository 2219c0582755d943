//! Independent squares along one monochild path of the quadtree.
//!
//! For each quadrant label `q` the squares on `q`-labelled path nodes form
//! an interval instance over depths. A [`LocalSearch`] keeps a k-valid
//! independent set of those intervals against the implicit view, and a
//! [`ChosenSeq`] picks a sparse subset of it whose squares are pairwise
//! disjoint. Only the active quadrant's chosen squares are reported; the
//! active quadrant stays within a factor two of the largest sequence.
//!
//! Split and merge use short synthetic intervals: a sentinel on the last
//! `q` depth of the upper part keeps members clear of intervals that grow
//! when the path gets longer, and a fake interval on the in-between node
//! separates the two halves. Both are removed before the call returns.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::chosen_seq::ChosenSeq;
use crate::delta::{Change, Delta};
use crate::geom_core::{node_of_q, Bound, EKey, Interval, QSquare, Quadrant, RationalKey, Side, QUADRANTS};
use crate::interval_mis::{LocalSearch, FAKE_ID, RESERVED_ID_START};
use crate::iqds::{Iqds, IqdsExplicit};
use crate::search_structure::SearchStructure;
use crate::squares_iqds::ImplicitView;
use crate::squares_static::{depth_interval, PathDescriptor};
use crate::{Error, Result};

pub const SENTINEL_ID: u64 = u64::MAX - 1;

/// Interval `[d - 1/6, d + 1/6]`, clear of every padded endpoint.
fn marker(id: u64, d: u32) -> Arc<Interval> {
    let d = 6 * d as i64;
    Arc::new(Interval { id, l: RationalKey::new(d - 1, 6), r: RationalKey::new(d + 1, 6), synthetic: true })
}

fn padded_of(desc: &PathDescriptor, q: Quadrant, s: &QSquare) -> Result<Arc<Interval>> {
    Ok(Arc::new(depth_interval(desc, q, s)?.padded(s.id)))
}

#[derive(Clone)]
struct QState {
    core: LocalSearch,
    seq: ChosenSeq,
}

impl QState {
    fn new(k: usize) -> Self {
        QState { core: LocalSearch::new(k), seq: ChosenSeq::new() }
    }

    /// Mirror the real-id part of a local-search delta into the sequence.
    fn sync(&mut self, search: &SearchStructure, d: &Delta) -> Result<()> {
        for &(id, c) in &d.net().items {
            if id >= RESERVED_ID_START {
                continue;
            }
            match c {
                Change::Remove => self.seq.remove(id)?,
                Change::Add => {
                    let s = search.get(id).ok_or(Error::Membership(id))?;
                    self.seq.insert(node_of_q(s).depth, id)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone)]
pub struct PathStructure {
    desc: PathDescriptor,
    k: usize,
    states: [QState; 4],
    active: Quadrant,
}

fn view<'a>(search: &'a SearchStructure, desc: PathDescriptor, q: Quadrant, extras: &'a IqdsExplicit) -> ImplicitView<'a> {
    ImplicitView::new(search, desc, q).with_extras(extras)
}

impl PathStructure {
    pub fn new(desc: PathDescriptor, k: usize) -> Self {
        PathStructure { desc, k, states: std::array::from_fn(|_| QState::new(k)), active: Quadrant::I }
    }

    pub fn descriptor(&self) -> PathDescriptor {
        self.desc
    }

    pub fn active(&self) -> Quadrant {
        self.active
    }

    pub fn seq(&self, q: Quadrant) -> &ChosenSeq {
        &self.states[q.index()].seq
    }

    pub fn core(&self, q: Quadrant) -> &LocalSearch {
        &self.states[q.index()].core
    }

    /// Implicit view of quadrant `q` over the current path.
    pub fn view<'a>(&self, search: &'a SearchStructure, q: Quadrant) -> ImplicitView<'a> {
        ImplicitView::new(search, self.desc, q)
    }

    /// Reported squares: the chosen part of the active sequence.
    pub fn reported(&self) -> Vec<u64> {
        self.seq(self.active).chosen()
    }

    pub fn is_empty(&self) -> bool {
        self.states.iter().all(|s| s.seq.is_empty())
    }

    fn rebalance(&mut self) {
        let lens: Vec<usize> = self.states.iter().map(|s| s.seq.len()).collect();
        let max = *lens.iter().max().unwrap();
        if 2 * lens[self.active.index()] < max {
            let i = lens.iter().position(|&l| l == max).unwrap();
            self.active = QUADRANTS[i];
        }
    }

    fn on_path(&self, s: &QSquare) -> Result<(u32, Quadrant)> {
        let node = node_of_q(s);
        if !self.desc.contains_depth(node.depth) || self.desc.node_at(node.depth) != node {
            return Err(Error::Precondition(format!("square {} is not on the path", s.id)));
        }
        Ok((node.depth, self.desc.label_at(node.depth)))
    }

    /// Add a square already stored in `search` with its node's label as mark.
    pub fn insert(&mut self, search: &SearchStructure, s: &QSquare) -> Result<Delta> {
        let (_, q) = self.on_path(s)?;
        let before = self.reported();
        let x = padded_of(&self.desc, q, s)?;
        let none = IqdsExplicit::new();
        let st = &mut self.states[q.index()];
        let d = st.core.insert(&view(search, self.desc, q, &none), x)?;
        st.sync(search, &d)?;
        self.rebalance();
        Ok(diff(&before, &self.reported()))
    }

    /// Drop a square that was already removed from `search`.
    pub fn delete(&mut self, search: &SearchStructure, s: &QSquare) -> Result<Delta> {
        let (_, q) = self.on_path(s)?;
        let before = self.reported();
        let x = padded_of(&self.desc, q, s)?;
        let none = IqdsExplicit::new();
        let st = &mut self.states[q.index()];
        let d = st.core.delete(&view(search, self.desc, q, &none), &x)?;
        st.sync(search, &d)?;
        self.rebalance();
        Ok(diff(&before, &self.reported()))
    }

    /// Absorb `other`, which starts at our bottom node. Marks must already
    /// reflect the joined path, so the in-between node carries its label.
    pub fn merge(&mut self, search: &SearchStructure, mut other: PathStructure) -> Result<Delta> {
        if self.desc.bottom != other.desc.top {
            return Err(Error::Precondition(format!(
                "path ending at {:?} cannot absorb a path starting at {:?}",
                self.desc.bottom, other.desc.top
            )));
        }
        let mut before = self.reported();
        before.extend(other.reported());
        let old = self.desc;
        let new = PathDescriptor { top: old.top, bottom: other.desc.bottom };
        let e = old.bottom.depth;
        for q in QUADRANTS {
            let mut st = std::mem::replace(&mut self.states[q.index()], QState::new(self.k));
            let lower = std::mem::replace(&mut other.states[q.index()], QState::new(self.k));
            let mut extras = IqdsExplicit::new();
            // Members must stay off the last depth, whose intervals may grow.
            let last = ImplicitView::new(search, old, q).qdepths().last().copied();
            if let Some(dl) = last {
                let sigma = marker(SENTINEL_ID, dl);
                extras.insert(sigma.clone())?;
                let d = st.core.insert(&view(search, old, q, &extras), sigma)?;
                st.sync(search, &d)?;
            }
            if new.label_at(e) == q {
                let rep = ImplicitView::new(search, new, q).with_band(e, e).leftmost_right(&Bound::NegInf, &Bound::PosInf);
                if let Some(rep) = rep {
                    extras.insert(rep.clone())?;
                    let v = view(search, new, q, &extras).with_band(0, e).with_hidden(Some(e));
                    let d = st.core.insert(&v, rep.clone())?;
                    st.sync(search, &d)?;
                    extras.remove(&rep)?;
                }
            }
            let b = marker(FAKE_ID, e);
            extras.insert(b.clone())?;
            let d = st.core.insert(&view(search, new, q, &extras).with_band(0, e), b.clone())?;
            st.sync(search, &d)?;

            let k = st.core.k;
            let upper_i = std::mem::replace(&mut st.core, LocalSearch::new(k)).into_view();
            st.core = LocalSearch::from_parts(k, upper_i.merge(lower.core.into_view(), &b.l)?);
            st.seq.append(lower.seq)?;

            extras.remove(&b)?;
            let d = st.core.delete(&view(search, new, q, &extras), &b)?;
            st.sync(search, &d)?;
            if let Some(dl) = last {
                let sigma = marker(SENTINEL_ID, dl);
                extras.remove(&sigma)?;
                let d = st.core.delete(&view(search, new, q, &extras), &sigma)?;
                st.sync(search, &d)?;
            }
            self.states[q.index()] = st;
        }
        self.desc = new;
        self.rebalance();
        Ok(diff(&before, &self.reported()))
    }

    /// Cut at the path node `eta`: keep the part above, return the part
    /// below. Squares on `eta` must already be unmarked in `search`.
    pub fn split(&mut self, search: &SearchStructure, eta: crate::geom_core::CellId) -> Result<(Delta, PathStructure)> {
        let old = self.desc;
        if !old.contains_depth(eta.depth) || old.node_at(eta.depth) != eta {
            return Err(Error::Precondition(format!("{:?} is not on the path", eta)));
        }
        let before = self.reported();
        let e = eta.depth;
        let upper_desc = PathDescriptor { top: old.top, bottom: eta };
        let mut lower = PathStructure::new(PathDescriptor { top: eta, bottom: old.bottom }, self.k);
        for q in QUADRANTS {
            let mut st = std::mem::replace(&mut self.states[q.index()], QState::new(self.k));
            let mut extras = IqdsExplicit::new();
            let at_e = EKey { v: RationalKey::new(3 * e as i64 - 1, 3), side: Side::L, id: 0 };
            let m = st.core.view().first_left_at_or_above(&Bound::Key(at_e.clone())).filter(|x| x.l == at_e.v);
            if let Some(m) = m {
                let d = st.core.delete(&view(search, old, q, &extras), &m)?;
                st.sync(search, &d)?;
            }
            let b = marker(FAKE_ID, e);
            extras.insert(b.clone())?;
            let d = st.core.insert(&view(search, old, q, &extras), b.clone())?;
            st.sync(search, &d)?;

            let k = st.core.k;
            let (i1, i2) = std::mem::replace(&mut st.core, LocalSearch::new(k)).into_view().split(&b.l);
            let seq2 = st.seq.split_at(e)?;
            let mut up = QState { core: LocalSearch::from_parts(k, i1), seq: std::mem::take(&mut st.seq) };
            extras.remove(&b)?;
            let v = view(search, old, q, &extras).with_band(0, e - 1);
            let d = up.core.delete(&v, &b)?;
            up.sync(search, &d)?;
            let d = up.core.ensure_max_left(&v)?;
            up.sync(search, &d)?;
            if let Some(&dl) = ImplicitView::new(search, upper_desc, q).qdepths().last() {
                up.core.view_mut().clip_right(&RationalKey::new(3 * dl as i64 + 1, 3));
            }
            self.states[q.index()] = up;
            lower.states[q.index()] = QState { core: LocalSearch::from_parts(k, i2), seq: seq2 };
        }
        self.desc = upper_desc;
        self.rebalance();
        lower.active = self.active;
        lower.rebalance();
        let mut after = self.reported();
        after.extend(lower.reported());
        Ok((diff(&before, &after), lower))
    }

    /// Move the bottom down to `bottom`; the old bottom joins the path.
    pub fn extend(&mut self, search: &SearchStructure, bottom: crate::geom_core::CellId) -> Result<Delta> {
        let b = self.desc.bottom;
        if bottom.depth <= b.depth || !b.is_ancestor_of(&bottom) {
            return Err(Error::Precondition(format!("{:?} is not below the bottom {:?}", bottom, b)));
        }
        self.merge(search, PathStructure::new(PathDescriptor { top: b, bottom }, self.k))
    }

    /// Move the bottom up to the path node `eta`, dropping everything below.
    pub fn contract(&mut self, search: &SearchStructure, eta: crate::geom_core::CellId) -> Result<Delta> {
        let (mut d, lower) = self.split(search, eta)?;
        for id in lower.reported() {
            d.remove(id);
        }
        Ok(d)
    }

    /// Full consistency check against the search structure.
    pub fn check(&self, search: &SearchStructure) -> Result<()> {
        let lens: Vec<usize> = self.states.iter().map(|s| s.seq.len()).collect();
        if 2 * lens[self.active.index()] < *lens.iter().max().unwrap() {
            return Err(Error::Internal(format!("active quadrant too small: {:?}", lens)));
        }
        for q in QUADRANTS {
            let st = &self.states[q.index()];
            st.seq.check()?;
            let members = st.core.view().dump();
            let ids: Vec<u64> = members.iter().map(|x| x.id).collect();
            let seq_ids: Vec<u64> = st.seq.items().iter().map(|e| e.id).collect();
            if ids != seq_ids {
                return Err(Error::Internal(format!("{:?}: sequence {:?} differs from set {:?}", q, seq_ids, ids)));
            }
            let v = self.view(search, q);
            for x in &members {
                let cur = v.endpoints(x.id).ok_or_else(|| Error::Internal(format!("member {} not visible", x.id)))?;
                if cur.l != x.l || cur.r != x.r {
                    return Err(Error::Internal(format!("member {} is stale", x.id)));
                }
            }
        }
        Ok(())
    }
}

/// Net change from `before` to `after`.
pub fn diff(before: &[u64], after: &[u64]) -> Delta {
    let b: BTreeSet<u64> = before.iter().copied().collect();
    let a: BTreeSet<u64> = after.iter().copied().collect();
    let mut d = Delta::new();
    b.difference(&a).for_each(|&id| d.remove(id));
    a.difference(&b).for_each(|&id| d.add(id));
    d
}
