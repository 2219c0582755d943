//! Change lists for maintained independent sets.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Change {
    Add,
    Remove,
}

/// Ordered list of `(id, change)` events.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Delta {
    pub items: Vec<(u64, Change)>,
}

/// JSONL line form: `{"add":[..],"remove":[..]}`. Removals are applied first
/// on replay, so only use it for deltas that are already net changes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaLine {
    pub add: Vec<u64>,
    pub remove: Vec<u64>,
}

impl Delta {
    pub fn new() -> Self {
        Delta { items: Vec::new() }
    }

    pub fn add(&mut self, id: u64) {
        self.items.push((id, Change::Add));
    }

    pub fn remove(&mut self, id: u64) {
        self.items.push((id, Change::Remove));
    }

    pub fn extend(&mut self, o: Delta) {
        self.items.extend(o.items);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Apply in order to a set; errors on adding a present id or removing an
    /// absent one.
    pub fn apply_to(&self, set: &mut HashSet<u64>) -> Result<(), String> {
        for &(id, c) in &self.items {
            let ok = match c {
                Change::Add => set.insert(id),
                Change::Remove => set.remove(&id),
            };
            if !ok {
                return Err(format!("inconsistent delta event {:?} for {}", c, id));
            }
        }
        Ok(())
    }

    /// Collapse into the net change: removals first, then additions, each
    /// sorted by id. Events must be consistent with some starting set.
    pub fn net(&self) -> Delta {
        let mut bal: HashMap<u64, i32> = HashMap::new();
        for &(id, c) in &self.items {
            *bal.entry(id).or_default() += if c == Change::Add { 1 } else { -1 };
        }
        let mut rem: Vec<u64> = bal.iter().filter(|(_, &v)| v < 0).map(|(&k, _)| k).collect();
        let mut add: Vec<u64> = bal.iter().filter(|(_, &v)| v > 0).map(|(&k, _)| k).collect();
        rem.sort_unstable();
        add.sort_unstable();
        let mut d = Delta::new();
        rem.into_iter().for_each(|id| d.remove(id));
        add.into_iter().for_each(|id| d.add(id));
        d
    }

    pub fn to_line(&self) -> DeltaLine {
        let n = self.net();
        DeltaLine {
            add: n.items.iter().filter(|e| e.1 == Change::Add).map(|e| e.0).collect(),
            remove: n.items.iter().filter(|e| e.1 == Change::Remove).map(|e| e.0).collect(),
        }
    }
}

impl DeltaLine {
    pub fn apply_to(&self, set: &mut HashSet<u64>) -> Result<(), String> {
        for id in &self.remove {
            if !set.remove(id) {
                return Err(format!("remove of absent id {}", id));
            }
        }
        for id in &self.add {
            if !set.insert(*id) {
                return Err(format!("add of present id {}", id));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn net_cancels_round_trips() {
        let mut d = Delta::new();
        d.remove(3);
        d.add(5);
        d.add(3);
        d.remove(5);
        d.remove(7);
        assert_eq!(d.net().items, vec![(7, Change::Remove)]);
        let mut s: HashSet<u64> = [3, 7].into_iter().collect();
        d.apply_to(&mut s).unwrap();
        assert_eq!(s, [3].into_iter().collect());
    }
}
