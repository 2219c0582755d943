//! k-valid independent sets of dynamic intervals by local search.
//!
//! [`LocalSearch`] holds only the independent set and runs the exchange
//! searches against any [`Iqds`] view of the full set, so the same code
//! drives both explicit intervals and the implicit square-backed intervals.
//! The caller keeps the full-set view current: add `x` there before
//! [`LocalSearch::insert`], remove it before [`LocalSearch::delete`].

use std::collections::HashMap;
use std::sync::Arc;

use crate::delta::Delta;
use crate::geom_core::{key_between, Bound, EKey, Interval, RationalKey};
use crate::iqds::{Direction, Iqds, IqdsExplicit};
use crate::oracle;
use crate::{Error, Result};

/// Ids at or above this value are reserved for synthetic intervals.
pub const RESERVED_ID_START: u64 = u64::MAX - 15;
pub const FAKE_ID: u64 = u64::MAX;

/// Exchange `(A, B)`: remove `a` from I and add `b`. Both lists are sorted
/// left to right and `b.len() == a.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltPath {
    pub a: Vec<Arc<Interval>>,
    pub b: Vec<Arc<Interval>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathDir {
    Right,
    Left,
}

fn lk(x: &Interval) -> Bound {
    Bound::Key(x.lkey())
}

fn rk(x: &Interval) -> Bound {
    Bound::Key(x.rkey())
}

/// The independent set and the local-search update rules.
#[derive(Clone)]
pub struct LocalSearch {
    pub k: usize,
    i: IqdsExplicit,
}

impl LocalSearch {
    pub fn new(k: usize) -> Self {
        LocalSearch { k, i: IqdsExplicit::new() }
    }

    pub fn from_parts(k: usize, i: IqdsExplicit) -> Self {
        LocalSearch { k, i }
    }

    pub fn view(&self) -> &IqdsExplicit {
        &self.i
    }

    pub fn view_mut(&mut self) -> &mut IqdsExplicit {
        &mut self.i
    }

    pub fn into_view(self) -> IqdsExplicit {
        self.i
    }

    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    /// Stored member with the same left key and id as `x`.
    pub fn member(&self, x: &Interval) -> Option<Arc<Interval>> {
        self.i.find_by_left(&x.lkey()).filter(|y| y.id == x.id)
    }

    pub fn ids(&self) -> Vec<u64> {
        self.i.dump().iter().map(|x| x.id).collect()
    }

    pub fn find_alternating_path(
        &self,
        s: &dyn Iqds,
        dir: PathDir,
        budget: i64,
        a: &Bound,
        b: &Bound,
    ) -> Option<AltPath> {
        match dir {
            PathDir::Right => self.fap_right(s, budget, a, b),
            PathDir::Left => self.fap_left(s, budget, a, b),
        }
    }

    fn fap_right(&self, s: &dyn Iqds, budget: i64, a: &Bound, b: &Bound) -> Option<AltPath> {
        if budget < 0 {
            return None;
        }
        let mut next = self.i.first_left_at_or_above(b);
        let (mut wa, mut wb) = (a.clone(), b.clone());
        let mut pa = Vec::new();
        let mut pb = Vec::new();
        loop {
            let y = s.report_extreme(Direction::LeftmostRight, &wa, &wb)?;
            debug_assert!(self.member(&y).is_none(), "query window holds an I endpoint");
            let Some(nx) = next.clone() else {
                pb.push(y);
                return Some(AltPath { a: pa, b: pb });
            };
            let yr = y.rkey();
            if yr < nx.lkey() {
                pb.push(y);
                return Some(AltPath { a: pa, b: pb });
            }
            if yr < nx.rkey() && (pa.len() as i64) < budget {
                wa = rk(&y);
                wb = rk(&nx);
                next = self.i.next_by_left(&lk(&nx));
                pa.push(nx);
                pb.push(y);
                continue;
            }
            return None;
        }
    }

    fn fap_left(&self, s: &dyn Iqds, budget: i64, a: &Bound, b: &Bound) -> Option<AltPath> {
        if budget < 0 {
            return None;
        }
        let mut next = self.i.last_right_at_or_below(a);
        let (mut wa, mut wb) = (a.clone(), b.clone());
        let mut pa = Vec::new();
        let mut pb = Vec::new();
        let done = |mut pa: Vec<Arc<Interval>>, mut pb: Vec<Arc<Interval>>| {
            pa.reverse();
            pb.reverse();
            Some(AltPath { a: pa, b: pb })
        };
        loop {
            let y = s.report_extreme(Direction::RightmostLeft, &wa, &wb)?;
            debug_assert!(self.member(&y).is_none(), "query window holds an I endpoint");
            let Some(nx) = next.clone() else {
                pb.push(y);
                return done(pa, pb);
            };
            let yl = y.lkey();
            if yl > nx.rkey() {
                pb.push(y);
                return done(pa, pb);
            }
            if yl > nx.lkey() && (pa.len() as i64) < budget {
                wa = lk(&nx);
                wb = lk(&y);
                next = self.i.prev_by_right(&rk(&nx));
                pa.push(nx);
                pb.push(y);
                continue;
            }
            return None;
        }
    }

    /// Rebuild `p`'s B side with leftmost-right-endpoint choices, keeping A.
    pub fn to_sibling(&self, s: &dyn Iqds, p: &AltPath) -> Result<AltPath> {
        let missing = || Error::Internal("sibling query returned nothing".into());
        let mut nb: Vec<Arc<Interval>> = Vec::with_capacity(p.b.len());
        if p.a.is_empty() {
            let b1 = &p.b[0];
            let lo = self.i.prev_by_right(&lk(b1)).map_or(Bound::NegInf, |x| rk(&x));
            let hi = self.i.next_by_left(&rk(b1)).map_or(Bound::PosInf, |x| lk(&x));
            nb.push(s.report_extreme(Direction::LeftmostRight, &lo, &hi).ok_or_else(missing)?);
            return Ok(AltPath { a: vec![], b: nb });
        }
        let lo = self.i.prev_by_left(&lk(&p.a[0])).map_or(Bound::NegInf, |x| rk(&x));
        nb.push(s.report_extreme(Direction::LeftmostRight, &lo, &lk(&p.a[0])).ok_or_else(missing)?);
        for j in 1..p.b.len() {
            let lo = rk(&nb[j - 1]);
            let hi = rk(&p.a[j - 1]);
            nb.push(s.report_extreme(Direction::LeftmostRight, &lo, &hi).ok_or_else(missing)?);
        }
        Ok(AltPath { a: p.a.clone(), b: nb })
    }

    fn apply(&mut self, p: &AltPath, d: &mut Delta) -> Result<()> {
        for x in &p.a {
            self.i.remove(x)?;
            d.remove(x.id);
        }
        for y in &p.b {
            self.i.insert(y.clone())?;
            d.add(y.id);
        }
        Ok(())
    }

    fn add(&mut self, x: Arc<Interval>, d: &mut Delta) -> Result<()> {
        d.add(x.id);
        self.i.insert(x)
    }

    fn drop_member(&mut self, x: &Interval, d: &mut Delta) -> Result<()> {
        d.remove(x.id);
        self.i.remove(x).map(|_| ())
    }

    /// I member containing the endpoint key `e`, if any.
    fn member_over(&self, e: &EKey) -> Option<Arc<Interval>> {
        self.i.prev_by_left(&Bound::Key(e.clone())).filter(|a| a.rkey() > *e)
    }

    /// Update I after `x` was added to the full set.
    pub fn insert(&mut self, s: &dyn Iqds, x: Arc<Interval>) -> Result<Delta> {
        let mut d = Delta::new();
        let k = self.k as i64;
        let a_l = self.member_over(&x.lkey());
        let a_r = self.member_over(&x.rkey());
        match (a_l, a_r) {
            (None, None) => {
                let blocked = self.i.prev_by_left(&rk(&x)).map_or(false, |q| q.lkey() > x.lkey());
                if !blocked {
                    self.add(x, &mut d)?;
                }
            }
            (Some(a), Some(b)) if a.id == b.id => {
                self.drop_member(&a, &mut d)?;
                self.add(x.clone(), &mut d)?;
                if let Some(r) = self.fap_right(s, k, &rk(&x), &rk(&a)) {
                    self.apply(&r, &mut d)?;
                }
                if let Some(l) = self.fap_left(s, k, &lk(&a), &lk(&x)) {
                    self.apply(&l, &mut d)?;
                }
            }
            (Some(al), Some(ar)) => {
                let consecutive = self.i.next_by_left(&lk(&al)).map_or(false, |n| n.id == ar.id);
                if consecutive {
                    if let Some(r) = self.fap_right(s, k - 2, &rk(&x), &rk(&ar)) {
                        let budget = k - 2 - r.a.len() as i64;
                        if let Some(l) = self.fap_left(s, budget, &lk(&al), &lk(&x)) {
                            let mut a = l.a;
                            a.push(al);
                            a.push(ar);
                            a.extend(r.a);
                            let mut b = l.b;
                            b.push(x);
                            b.extend(r.b);
                            self.apply(&AltPath { a, b }, &mut d)?;
                        }
                    }
                }
            }
            (None, Some(ar)) => {
                let blocked = self.i.prev_by_left(&lk(&ar)).map_or(false, |q| q.lkey() > x.lkey());
                if !blocked {
                    if let Some(r) = self.fap_right(s, k - 1, &rk(&x), &rk(&ar)) {
                        let mut a = vec![ar];
                        a.extend(r.a);
                        let mut b = vec![x];
                        b.extend(r.b);
                        self.apply(&AltPath { a, b }, &mut d)?;
                    }
                }
            }
            (Some(al), None) => {
                let blocked = self.i.next_by_left(&lk(&al)).map_or(false, |q| q.lkey() < x.rkey());
                if !blocked {
                    if let Some(l) = self.fap_left(s, k - 1, &lk(&al), &lk(&x)) {
                        let mut a = l.a;
                        a.push(al);
                        let mut b = l.b;
                        b.push(x);
                        self.apply(&AltPath { a, b }, &mut d)?;
                    }
                }
            }
        }
        Ok(d)
    }

    /// Update I after `x` was removed from the full set.
    pub fn delete(&mut self, s: &dyn Iqds, x: &Interval) -> Result<Delta> {
        let mut d = Delta::new();
        let Some(x) = self.member(x) else {
            return Ok(d);
        };
        let k = self.k as i64;
        let a_l = self.i.prev_by_left(&lk(&x));
        let a_r = self.i.next_by_left(&lk(&x));
        self.drop_member(&x, &mut d)?;
        let wa = a_l.as_ref().map_or(Bound::NegInf, |a| rk(a));
        let wb = a_r.as_ref().map_or(Bound::PosInf, |a| lk(a));
        let r = self.fap_right(s, k, &wa, &wb);
        let l = match self.fap_left(s, k, &wa, &wb) {
            Some(p) => Some(self.to_sibling(s, &p)?),
            None => None,
        };
        match (l, r) {
            (Some(l), Some(r)) => {
                let mergeable = l.b.last().unwrap().rkey() < r.b[0].lkey();
                self.apply(&l, &mut d)?;
                if mergeable {
                    self.apply(&r, &mut d)?;
                }
            }
            (Some(p), None) | (None, Some(p)) => self.apply(&p, &mut d)?,
            (None, None) => {
                let Some(y) = s.report_extreme(Direction::LeftmostRight, &wa, &lk(&x)) else {
                    return Ok(d);
                };
                if wb.above(&y.rkey()) {
                    self.add(y, &mut d)?;
                } else {
                    let mut prev: Arc<Interval> = x.clone();
                    let mut cur = a_r.clone();
                    for _ in 1..=self.k {
                        let hi = cur.as_ref().map_or(Bound::PosInf, |a| lk(a));
                        if let Some(p) = self.fap_left(s, k, &rk(&prev), &hi) {
                            self.apply(&p, &mut d)?;
                            break;
                        }
                        let Some(c) = cur else { break };
                        cur = self.i.next_by_left(&lk(&c));
                        prev = c;
                    }
                }
            }
        }
        Ok(d)
    }

    /// Make the interval with the largest left endpoint a member, by a
    /// one-for-one swap with the last member followed by a left search.
    pub fn ensure_max_left(&mut self, s: &dyn Iqds) -> Result<Delta> {
        let mut d = Delta::new();
        let (Some(tau), Some(x)) = (s.max_left(), self.i.last()) else {
            return Ok(d);
        };
        if tau.id == x.id {
            return Ok(d);
        }
        self.drop_member(&x, &mut d)?;
        self.add(tau.clone(), &mut d)?;
        if let Some(p) = self.fap_left(s, self.k as i64, &lk(&x), &lk(&tau)) {
            self.apply(&p, &mut d)?;
        }
        Ok(d)
    }
}

/// Dynamic interval set with a maintained k-valid independent set.
#[derive(Clone)]
pub struct IntervalMis {
    s: IqdsExplicit,
    core: LocalSearch,
    by_id: HashMap<u64, Arc<Interval>>,
}

impl IntervalMis {
    pub fn new(k: usize) -> Self {
        IntervalMis { s: IqdsExplicit::new(), core: LocalSearch::new(k), by_id: HashMap::new() }
    }

    pub fn k(&self) -> usize {
        self.core.k
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn get(&self, id: u64) -> Option<&Interval> {
        self.by_id.get(&id).map(|x| x.as_ref())
    }

    pub fn intervals(&self) -> Vec<Interval> {
        self.s.dump().iter().map(|x| (**x).clone()).collect()
    }

    /// Ids of the independent set, left to right.
    pub fn independent_ids(&self) -> Vec<u64> {
        self.core.ids()
    }

    pub fn independent(&self) -> Vec<Interval> {
        self.core.view().dump().iter().map(|x| (**x).clone()).collect()
    }

    pub fn in_independent(&self, id: u64) -> bool {
        self.by_id.get(&id).map_or(false, |x| self.core.member(x).is_some())
    }

    pub fn all_view(&self) -> &IqdsExplicit {
        &self.s
    }

    pub fn core(&self) -> &LocalSearch {
        &self.core
    }

    pub fn insert(&mut self, x: Interval) -> Result<Delta> {
        if x.id >= RESERVED_ID_START {
            return Err(Error::Precondition(format!("id {} is reserved", x.id)));
        }
        self.insert_raw(x)
    }

    fn insert_raw(&mut self, x: Interval) -> Result<Delta> {
        if x.l >= x.r {
            return Err(Error::Precondition(format!("interval {} needs l < r", x.id)));
        }
        if self.by_id.contains_key(&x.id) {
            return Err(Error::Membership(x.id));
        }
        let x = Arc::new(x);
        self.s.insert(x.clone())?;
        self.by_id.insert(x.id, x.clone());
        self.core.insert(&self.s, x)
    }

    pub fn delete(&mut self, id: u64) -> Result<Delta> {
        let x = self.by_id.remove(&id).ok_or(Error::Membership(id))?;
        self.s.remove(&x)?;
        self.core.delete(&self.s, &x)
    }

    /// Smallest endpoint value strictly above `t` in this set, if any.
    fn min_endpoint_above(&self, t: &RationalKey) -> Option<RationalKey> {
        let probe = |side| Bound::Key(EKey { v: t.clone(), side, id: u64::MAX });
        let l = self.s.next_by_left(&probe(crate::geom_core::Side::L)).map(|x| x.l.clone());
        let r = self.s.next_by_right(&probe(crate::geom_core::Side::R)).map(|x| x.r.clone());
        match (l, r) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Tiny synthetic interval just right of `t` holding no endpoint of the
    /// set; `m` is the smallest endpoint above `t`.
    fn fake(t: &RationalKey, m: &RationalKey) -> Result<Interval> {
        let l = key_between(t, m)?;
        let r = key_between(&l, m)?;
        Ok(Interval { id: FAKE_ID, l, r, synthetic: true })
    }

    /// Absorb `other`, whose left endpoints all lie above `t`; ours lie at
    /// or below it.
    pub fn merge(&mut self, other: IntervalMis, t: &RationalKey) -> Result<Delta> {
        if other.k() != self.k() {
            return Err(Error::Precondition("merging structures with different k".into()));
        }
        if let Some(x) = self.s.last() {
            if x.l > *t {
                return Err(Error::Ordering(format!("left part has l={} above t={}", x.l, t)));
            }
        }
        if let Some(y) = other.s.first() {
            if y.l <= *t {
                return Err(Error::Ordering(format!("right part has l={} not above t={}", y.l, t)));
            }
        }
        if other.is_empty() {
            return Ok(Delta::new());
        }
        if self.is_empty() {
            *self = other;
            return Ok(Delta::new());
        }
        let m = [self.min_endpoint_above(t), other.min_endpoint_above(t)]
            .into_iter()
            .flatten()
            .min()
            .expect("other is nonempty");
        let b = Self::fake(t, &m)?;
        let cut = b.l.clone();
        let mut d = self.insert_raw(b)?;
        let IntervalMis { s, core, by_id } = other;
        let s_self = std::mem::take(&mut self.s);
        self.s = s_self.merge(s, &cut)?;
        let k = self.core.k;
        let i_self = std::mem::replace(&mut self.core, LocalSearch::new(k)).into_view();
        self.core = LocalSearch::from_parts(k, i_self.merge(core.into_view(), &cut)?);
        self.by_id.extend(by_id);
        d.extend(self.delete(FAKE_ID)?);
        d.items.retain(|e| e.0 != FAKE_ID);
        Ok(d)
    }

    /// Keep `{l <= t}` here and return the rest.
    pub fn split(&mut self, t: &RationalKey) -> Result<(Delta, IntervalMis)> {
        let k = self.k();
        let Some(m) = self.min_endpoint_above(t) else {
            return Ok((Delta::new(), IntervalMis::new(k)));
        };
        let b = Self::fake(t, &m)?;
        let cut = b.l.clone();
        let mut d = self.insert_raw(b)?;
        let (s1, s2) = std::mem::take(&mut self.s).split(&cut);
        let i_all = std::mem::replace(&mut self.core, LocalSearch::new(k)).into_view();
        let (i1, i2) = i_all.split(&cut);
        let mut map2 = HashMap::new();
        for x in s2.dump() {
            self.by_id.remove(&x.id);
            map2.insert(x.id, x);
        }
        self.s = s1;
        self.core = LocalSearch::from_parts(k, i1);
        d.extend(self.delete(FAKE_ID)?);
        d.items.retain(|e| e.0 != FAKE_ID);
        Ok((d, IntervalMis { s: s2, core: LocalSearch::from_parts(k, i2), by_id: map2 }))
    }

    /// Truncate right endpoints above `t` to `t`; `t` must exceed every
    /// left endpoint.
    pub fn clip(&mut self, t: &RationalKey) -> Result<Delta> {
        let Some(tau) = self.s.last() else {
            return Ok(Delta::new());
        };
        if tau.l >= *t {
            return Err(Error::Precondition(format!("clip point {} not above max left {}", t, tau.l)));
        }
        let d = self.core.ensure_max_left(&self.s)?;
        self.s.clip_right(t);
        self.core.view_mut().clip_right(t);
        for x in self.s.dump() {
            if x.r == *t {
                self.by_id.insert(x.id, x);
            }
        }
        Ok(d)
    }

    /// Replace a non-member by a strict superset with the same id.
    pub fn extend(&mut self, new: Interval) -> Result<()> {
        let old = self.by_id.get(&new.id).cloned().ok_or(Error::Membership(new.id))?;
        if self.core.member(&old).is_some() {
            return Err(Error::Precondition(format!("interval {} is in the independent set", new.id)));
        }
        if !(new.lkey() <= old.lkey() && old.rkey() <= new.rkey() && (new.l < old.l || old.r < new.r)) {
            return Err(Error::Precondition(format!("interval {} does not grow", new.id)));
        }
        self.s.remove(&old)?;
        let new = Arc::new(new);
        self.s.insert(new.clone())?;
        self.by_id.insert(new.id, new);
        Ok(())
    }

    pub fn find_alternating_path(&self, dir: PathDir, budget: i64, a: &Bound, b: &Bound) -> Option<AltPath> {
        self.core.find_alternating_path(&self.s, dir, budget, a, b)
    }

    pub fn to_sibling(&self, p: &AltPath) -> Result<AltPath> {
        self.core.to_sibling(&self.s, p)
    }

    /// Oracle check of the structural invariants and k-maximality.
    pub fn verify_k_valid(&self) -> bool {
        let s = oracle::by_ekey(&self.intervals());
        oracle::check_k_valid(&s, &self.independent_ids(), self.k()).pass
    }

    /// Internal consistency of the views and the id index.
    pub fn check_structure(&self) -> bool {
        self.s.check()
            && self.core.view().check()
            && self.s.len() == self.by_id.len()
            && self.core.view().dump().iter().all(|x| self.by_id.get(&x.id).map_or(false, |y| y == x))
    }
}

impl Default for IntervalMis {
    fn default() -> Self {
        Self::new(5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom_core::rational;

    fn iv(id: u64, l: i64, r: i64) -> Interval {
        Interval::int(id, l, r)
    }

    #[test]
    fn insert_examples() {
        let mut m = IntervalMis::new(5);
        let d = m.insert(iv(1, 0, 10)).unwrap();
        assert_eq!(d.items, vec![(1, crate::Change::Add)]);
        let d = m.insert(iv(2, 2, 3)).unwrap();
        assert_eq!(d.items, vec![(1, crate::Change::Remove), (2, crate::Change::Add)]);
        m.insert(iv(3, 6, 9)).unwrap();
        assert_eq!(m.independent_ids(), vec![2, 3]);
        assert!(m.verify_k_valid());
    }

    #[test]
    fn delete_examples() {
        let mut m = IntervalMis::new(2);
        m.insert(iv(1, 0, 4)).unwrap();
        m.insert(iv(3, 7, 11)).unwrap();
        m.insert(iv(2, 3, 8)).unwrap();
        assert_eq!(m.independent_ids(), vec![1, 3]);
        let d = m.delete(1).unwrap();
        assert_eq!(d.items, vec![(1, crate::Change::Remove)]);
        assert_eq!(m.independent_ids(), vec![3]);
        assert!(m.verify_k_valid());

        let mut m = IntervalMis::new(2);
        m.insert(iv(1, 0, 2)).unwrap();
        m.insert(iv(2, 0, 3)).unwrap();
        assert_eq!(m.independent_ids(), vec![1]);
        let d = m.delete(1).unwrap();
        assert_eq!(d.items, vec![(1, crate::Change::Remove), (2, crate::Change::Add)]);
        assert_eq!(m.delete(2).unwrap().len(), 1);
        assert!(m.delete(2).is_err());
    }

    #[test]
    fn delete_of_non_member_is_silent() {
        let mut m = IntervalMis::new(3);
        m.insert(iv(1, 0, 2)).unwrap();
        m.insert(iv(2, 1, 5)).unwrap();
        assert!(m.delete(2).unwrap().is_empty());
    }

    #[test]
    fn clip_swaps_in_max_left() {
        let mut m = IntervalMis::new(3);
        m.insert(iv(1, 0, 9)).unwrap();
        m.insert(iv(2, 5, 6)).unwrap();
        // [5,6] is strictly inside [0,9], so it already replaced it.
        assert_eq!(m.independent_ids(), vec![2]);
        let d = m.clip(&7.into()).unwrap();
        assert!(d.is_empty());
        assert_eq!(m.get(1).unwrap().r, 7.into());
        assert!(m.verify_k_valid());
    }

    #[test]
    fn extend_rules() {
        let mut m = IntervalMis::new(2);
        m.insert(iv(1, 0, 2)).unwrap();
        m.insert(iv(2, 1, 3)).unwrap();
        assert!(m.extend(iv(1, -1, 3)).is_err());
        m.extend(Interval::new(2, rational(1, 2), 4.into()).unwrap()).unwrap();
        assert_eq!(m.independent_ids(), vec![1]);
        assert!(m.verify_k_valid());
    }

    #[test]
    fn merge_and_split_round_trip() {
        let mut a = IntervalMis::new(2);
        a.insert(iv(1, 0, 5)).unwrap();
        let mut b = IntervalMis::new(2);
        b.insert(iv(2, 4, 8)).unwrap();
        a.merge(b, &3.into()).unwrap();
        assert_eq!(a.independent_ids().len(), 1);
        assert!(a.verify_k_valid());
        let (_, right) = a.split(&3.into()).unwrap();
        assert_eq!(a.independent_ids(), vec![1]);
        assert_eq!(right.independent_ids(), vec![2]);
        assert!(a.verify_k_valid() && right.verify_k_valid());
    }
}
