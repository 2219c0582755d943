//! Depth-ordered sequence with a chosen subset spread along it.
//!
//! Rule: the first and last elements are never chosen and every run of
//! unchosen elements (before the first chosen one, between two, after the
//! last) has length 1 to 3. Repairs touch only runs that break the rule, so
//! a single insert or removal flips O(1) flags. A sequence holds at most
//! one element per depth, so it never exceeds the quadtree depth and a
//! sorted vector is enough.

use std::collections::HashMap;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Elem {
    pub depth: u32,
    pub id: u64,
    pub chosen: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ChosenSeq {
    items: Vec<Elem>,
    depth_of: HashMap<u64, u32>,
    flips: u64,
}

impl ChosenSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Elem] {
        &self.items
    }

    pub fn contains(&self, id: u64) -> bool {
        self.depth_of.contains_key(&id)
    }

    /// Total flag flips so far.
    pub fn flips(&self) -> u64 {
        self.flips
    }

    pub fn chosen(&self) -> Vec<u64> {
        self.items.iter().filter(|e| e.chosen).map(|e| e.id).collect()
    }

    pub fn insert(&mut self, depth: u32, id: u64) -> Result<()> {
        if self.depth_of.contains_key(&id) {
            return Err(Error::Membership(id));
        }
        let i = self.items.partition_point(|e| e.depth < depth);
        if self.items.get(i).map_or(false, |e| e.depth == depth) {
            return Err(Error::Internal(format!("depth {} already holds an element", depth)));
        }
        self.items.insert(i, Elem { depth, id, chosen: false });
        self.depth_of.insert(id, depth);
        self.normalize();
        Ok(())
    }

    pub fn remove(&mut self, id: u64) -> Result<()> {
        let depth = self.depth_of.remove(&id).ok_or(Error::Membership(id))?;
        let i = self.items.partition_point(|e| e.depth < depth);
        if self.items[i].chosen {
            self.flips += 1;
        }
        self.items.remove(i);
        self.normalize();
        Ok(())
    }

    /// Keep depths below `e`, return those above. An element at `e` itself
    /// must have been removed.
    pub fn split_at(&mut self, e: u32) -> Result<ChosenSeq> {
        let i = self.items.partition_point(|x| x.depth < e);
        if self.items.get(i).map_or(false, |x| x.depth == e) {
            return Err(Error::Precondition(format!("element left at split depth {}", e)));
        }
        let tail = self.items.split_off(i);
        let mut other = ChosenSeq { items: tail, depth_of: HashMap::new(), flips: 0 };
        for x in &other.items {
            self.depth_of.remove(&x.id);
            other.depth_of.insert(x.id, x.depth);
        }
        self.normalize();
        other.normalize();
        Ok(other)
    }

    /// Append `other`, whose depths all exceed ours.
    pub fn append(&mut self, other: ChosenSeq) -> Result<()> {
        if let (Some(a), Some(b)) = (self.items.last(), other.items.first()) {
            if a.depth >= b.depth {
                return Err(Error::Ordering(format!("append at depth {} after {}", b.depth, a.depth)));
            }
        }
        self.flips += other.flips;
        self.depth_of.extend(other.depth_of);
        self.items.extend(other.items);
        self.normalize();
        Ok(())
    }

    /// Unchosen runs as `(start, len)`, including the leading and trailing
    /// ones, plus the index of the chosen element after each run.
    fn runs(&self) -> Vec<(usize, usize, Option<usize>)> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, e) in self.items.iter().enumerate() {
            if e.chosen {
                out.push((start, i - start, Some(i)));
                start = i + 1;
            }
        }
        out.push((start, self.items.len() - start, None));
        out
    }

    fn flip(&mut self, i: usize) {
        self.items[i].chosen = !self.items[i].chosen;
        self.flips += 1;
    }

    fn normalize(&mut self) {
        while !self.items.is_empty() {
            let runs = self.runs();
            if let Some(&(start, _, after)) = runs.iter().find(|r| r.1 == 0) {
                // Empty run: drop the chosen element on its right, or the
                // last chosen one if the run is the trailing one.
                let i = after.unwrap_or_else(|| start - 1);
                self.flip(i);
                continue;
            }
            if let Some(&(start, len, _)) = runs.iter().find(|r| r.1 >= 4) {
                self.flip(start + len / 2);
                continue;
            }
            break;
        }
    }

    pub fn check(&self) -> Result<()> {
        for w in self.items.windows(2) {
            if w[0].depth >= w[1].depth {
                return Err(Error::Internal("sequence out of order".into()));
            }
        }
        if self.depth_of.len() != self.items.len() {
            return Err(Error::Internal("id map out of sync".into()));
        }
        if self.items.is_empty() {
            return Ok(());
        }
        for (_, len, _) in self.runs() {
            if !(1..=3).contains(&len) {
                return Err(Error::Internal(format!("unchosen run of length {}", len)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_in_order() {
        let mut s = ChosenSeq::new();
        for d in 1..=5 {
            s.insert(d, d as u64).unwrap();
            s.check().unwrap();
        }
        let c = s.chosen();
        assert!(!c.is_empty() && c.len() <= 2);
        assert!(!c.contains(&1) && !c.contains(&5));
    }

    #[test]
    fn singleton_is_unchosen() {
        let mut s = ChosenSeq::new();
        s.insert(3, 9).unwrap();
        assert!(s.chosen().is_empty());
    }

    #[test]
    fn split_and_append_keep_the_rule() {
        let mut s = ChosenSeq::new();
        for d in 0..30 {
            s.insert(d * 2, d as u64).unwrap();
        }
        let t = s.split_at(21).unwrap();
        s.check().unwrap();
        t.check().unwrap();
        assert_eq!(s.len() + t.len(), 30);
        s.append(t).unwrap();
        s.check().unwrap();
    }
}
