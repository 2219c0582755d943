//! Brute-force references. Nothing here calls into the main structures.
//!
//! Interval oracles are generic over the endpoint key type so callers can
//! pick plain value order (closed semantics) or the tie-broken endpoint order
//! used by the dynamic structures.

use crate::geom_core::{EKey, Interval, RationalKey, Square};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OInterval<K> {
    pub id: u64,
    pub l: K,
    pub r: K,
}

impl<K: Ord> OInterval<K> {
    pub fn intersects(&self, o: &Self) -> bool {
        std::cmp::max(&self.l, &o.l) <= std::cmp::min(&self.r, &o.r)
    }

    pub fn strictly_contains(&self, o: &Self) -> bool {
        self.l < o.l && o.r < self.r
    }
}

/// Value-ordered view of intervals (closed semantics, ties kept).
pub fn by_value(s: &[Interval]) -> Vec<OInterval<RationalKey>> {
    s.iter().map(|x| OInterval { id: x.id, l: x.l.clone(), r: x.r.clone() }).collect()
}

/// Endpoint-key view: ties broken by side then id.
pub fn by_ekey(s: &[Interval]) -> Vec<OInterval<EKey>> {
    s.iter().map(|x| OInterval { id: x.id, l: x.lkey(), r: x.rkey() }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckedProperty {
    IntervalOpt,
    SquareOpt,
    KValid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub opt_value: usize,
    pub witness: Vec<u64>,
    pub checked_property: CheckedProperty,
    pub pass: bool,
}

/// Maximum independent set by earliest right endpoint.
pub fn exact_intervals<K: Ord + Clone>(s: &[OInterval<K>]) -> OracleReport {
    let mut v: Vec<&OInterval<K>> = s.iter().collect();
    v.sort_by(|a, b| a.r.cmp(&b.r).then(a.id.cmp(&b.id)));
    let mut last: Option<&K> = None;
    let mut witness = Vec::new();
    for x in v {
        if last.map_or(true, |r| x.l > *r) {
            witness.push(x.id);
            last = Some(&x.r);
        }
    }
    OracleReport { opt_value: witness.len(), witness, checked_property: CheckedProperty::IntervalOpt, pass: true }
}

pub fn exact_intervals_value(s: &[Interval]) -> usize {
    exact_intervals(&by_value(s)).opt_value
}

/// Exhaustive subset enumeration, n <= 20.
pub fn exhaustive_intervals<K: Ord>(s: &[OInterval<K>]) -> usize {
    assert!(s.len() <= 20);
    let n = s.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let c = mask.count_ones() as usize;
        if c <= best {
            continue;
        }
        let ok = (0..n).all(|i| {
            mask >> i & 1 == 0 || (i + 1..n).all(|j| mask >> j & 1 == 0 || !s[i].intersects(&s[j]))
        });
        if ok {
            best = c;
        }
    }
    best
}

/// Exact square MIS by branch and bound; `|S| <= 60`.
pub fn exact_squares(s: &[Square]) -> Result<OracleReport> {
    let n = s.len();
    if n > 60 {
        return Err(Error::SizeLimit(n));
    }
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if s[i].intersects(&s[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let all = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut best = 0u64;
    // Greedy lower bound: repeatedly take a minimum-degree vertex.
    let mut cand = all;
    let mut g = 0u64;
    while cand != 0 {
        let v = (0..n).filter(|&v| cand >> v & 1 == 1).min_by_key(|&v| (adj[v] & cand).count_ones()).unwrap();
        g |= 1 << v;
        cand &= !(adj[v] | 1 << v);
    }
    if g.count_ones() > best.count_ones() {
        best = g;
    }
    bnb(&adj, all, 0, &mut best);
    let witness: Vec<u64> = (0..n).filter(|&i| best >> i & 1 == 1).map(|i| s[i].id).collect();
    Ok(OracleReport {
        opt_value: witness.len(),
        witness,
        checked_property: CheckedProperty::SquareOpt,
        pass: true,
    })
}

/// Upper bound: greedy clique cover of the candidate set.
fn clique_cover_bound(adj: &[u64], mut cand: u64) -> u32 {
    let mut k = 0;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let mut clique = 1u64 << v;
        let mut common = adj[v] & cand;
        while common != 0 {
            let u = common.trailing_zeros() as usize;
            clique |= 1 << u;
            common &= adj[u];
        }
        cand &= !clique;
        k += 1;
    }
    k
}

fn bnb(adj: &[u64], cand: u64, cur: u64, best: &mut u64) {
    if cand == 0 {
        if cur.count_ones() > best.count_ones() {
            *best = cur;
        }
        return;
    }
    if cur.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    if cur.count_ones() + clique_cover_bound(adj, cand) <= best.count_ones() {
        return;
    }
    // Vertices with no neighbour among candidates are always taken.
    let mut free = 0u64;
    let mut c = cand;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        if adj[v] & cand == 0 {
            free |= 1 << v;
        }
    }
    if free != 0 {
        bnb(adj, cand & !free, cur | free, best);
        return;
    }
    let mut c = cand;
    let mut pick = 0;
    let mut deg = 0;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        let d = (adj[v] & cand).count_ones();
        if d > deg {
            deg = d;
            pick = v;
        }
    }
    bnb(adj, cand & !(adj[pick] | 1 << pick), cur | 1 << pick, best);
    bnb(adj, cand & !(1 << pick), cur, best);
}

/// Exhaustive square MIS, n <= 20.
pub fn exhaustive_squares(s: &[Square]) -> usize {
    assert!(s.len() <= 20);
    let n = s.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let c = mask.count_ones() as usize;
        if c <= best {
            continue;
        }
        let ok = (0..n).all(|i| {
            mask >> i & 1 == 0 || (i + 1..n).all(|j| mask >> j & 1 == 0 || !s[i].intersects(&s[j]))
        });
        if ok {
            best = c;
        }
    }
    best
}

pub fn squares_pairwise_disjoint(s: &[Square]) -> bool {
    (0..s.len()).all(|i| (i + 1..s.len()).all(|j| !s[i].intersects(&s[j])))
}

/// Exchange witness: remove `a` from I, add `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OAltPath {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowDir {
    Right,
    Left,
}

/// Window restriction matching a directional path search from an open
/// window `(a, b)`. Right: every B element has `l > a` and A is a prefix of
/// the I intervals with `l >= b`. Left mirrors this.
#[derive(Clone, Debug)]
pub struct OWindow<K> {
    pub dir: WindowDir,
    pub a: K,
    pub b: K,
}

/// Smallest exchange `(A, B)` with `|B| = |A| + 1 <= k + 1` such that
/// `(I \ A) ∪ B` is independent. For each candidate A the best B is found by
/// an exact MIS over the outsiders compatible with `I \ A`.
pub fn find_alt_bruteforce<K: Ord + Clone>(
    s: &[OInterval<K>],
    i: &[u64],
    k: usize,
    window: Option<&OWindow<K>>,
) -> Result<Option<OAltPath>> {
    if s.len() > 400 {
        return Err(Error::SizeLimit(s.len()));
    }
    let in_i: std::collections::HashSet<u64> = i.iter().copied().collect();
    let mut iv: Vec<&OInterval<K>> = s.iter().filter(|x| in_i.contains(&x.id)).collect();
    iv.sort_by(|a, b| a.l.cmp(&b.l));
    let out: Vec<&OInterval<K>> = s.iter().filter(|x| !in_i.contains(&x.id)).collect();
    let test = |a_set: &[usize]| -> Option<OAltPath> {
        let removed: std::collections::HashSet<usize> = a_set.iter().copied().collect();
        let cand: Vec<OInterval<K>> = out
            .iter()
            .filter(|y| {
                let w_ok = match window {
                    None => true,
                    Some(w) => match w.dir {
                        WindowDir::Right => y.l > w.a,
                        WindowDir::Left => y.r < w.b,
                    },
                };
                w_ok && iv.iter().enumerate().all(|(j, x)| removed.contains(&j) || !x.intersects(y))
            })
            .map(|y| (*y).clone())
            .collect();
        let rep = exact_intervals(&cand);
        (rep.opt_value > a_set.len()).then(|| OAltPath {
            a: a_set.iter().map(|&j| iv[j].id).collect(),
            b: rep.witness[..a_set.len() + 1].to_vec(),
        })
    };
    match window {
        Some(w) => {
            let seq: Vec<usize> = match w.dir {
                WindowDir::Right => (0..iv.len()).filter(|&j| iv[j].l >= w.b).collect(),
                WindowDir::Left => (0..iv.len()).rev().filter(|&j| iv[j].r <= w.a).collect(),
            };
            for t in 0..=k.min(seq.len()) {
                if let Some(p) = test(&seq[..t]) {
                    return Ok(Some(p));
                }
            }
            Ok(None)
        }
        None => {
            for t in 0..=k.min(iv.len()) {
                let mut found = None;
                for_each_subset(iv.len(), t, &mut |sub| {
                    if found.is_none() {
                        found = test(sub);
                    }
                });
                if found.is_some() {
                    return Ok(found);
                }
            }
            Ok(None)
        }
    }
}

fn for_each_subset(n: usize, t: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == t {
            f(cur);
            return;
        }
        for j in start..n {
            if n - j < t - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, n, t, cur, f);
            cur.pop();
        }
    }
    rec(0, n, t, &mut Vec::new(), f);
}

/// Structural part of validity: I ⊆ S, I independent, and no outsider is
/// strictly inside a member of I.
pub fn check_independent_no_containment<K: Ord + Clone>(s: &[OInterval<K>], i: &[u64]) -> bool {
    let in_i: std::collections::HashSet<u64> = i.iter().copied().collect();
    if in_i.len() != i.len() {
        return false;
    }
    let members: Vec<&OInterval<K>> = s.iter().filter(|x| in_i.contains(&x.id)).collect();
    if members.len() != i.len() {
        return false;
    }
    for (p, x) in members.iter().enumerate() {
        for y in &members[p + 1..] {
            if x.intersects(y) {
                return false;
            }
        }
    }
    for y in s.iter().filter(|y| !in_i.contains(&y.id)) {
        if members.iter().any(|x| x.strictly_contains(y)) {
            return false;
        }
    }
    true
}

/// k-maximality by blocks: for every run of `t <= k` consecutive I intervals
/// (t = 0 is a gap), the outsiders lying strictly between the run's
/// neighbours must not admit `t + 1` pairwise disjoint intervals. Any
/// exchange splits into such blocks, so this is equivalent to the absence of
/// an alternating path with `|A| <= k`.
pub fn check_k_maximal_blocks<K: Ord + Clone>(s: &[OInterval<K>], i: &[u64], k: usize) -> bool {
    let in_i: std::collections::HashSet<u64> = i.iter().copied().collect();
    let mut iv: Vec<&OInterval<K>> = s.iter().filter(|x| in_i.contains(&x.id)).collect();
    iv.sort_by(|a, b| a.l.cmp(&b.l));
    let mut out: Vec<&OInterval<K>> = s.iter().filter(|x| !in_i.contains(&x.id)).collect();
    out.sort_by(|a, b| a.r.cmp(&b.r));
    let m = iv.len();
    // Run = iv[start .. start+t]; prev = iv[start-1], next = iv[start+t].
    for start in 0..=m {
        for t in 0..=k {
            if start + t > m {
                break;
            }
            let lo = if start == 0 { None } else { Some(&iv[start - 1].r) };
            let hi = if start + t == m { None } else { Some(&iv[start + t].l) };
            let mut cnt = 0;
            let mut last: Option<&K> = None;
            for y in &out {
                let inside = lo.map_or(true, |a| y.l > *a) && hi.map_or(true, |b| y.r < *b);
                if inside && last.map_or(true, |r| y.l > *r) {
                    cnt += 1;
                    last = Some(&y.r);
                }
            }
            if cnt > t {
                return false;
            }
        }
    }
    true
}

pub fn check_k_valid<K: Ord + Clone>(s: &[OInterval<K>], i: &[u64], k: usize) -> OracleReport {
    let pass = check_independent_no_containment(s, i) && check_k_maximal_blocks(s, i, k);
    OracleReport { opt_value: i.len(), witness: i.to_vec(), checked_property: CheckedProperty::KValid, pass }
}

/// Full enumeration variant, for small instances.
pub fn check_k_valid_bruteforce<K: Ord + Clone>(s: &[OInterval<K>], i: &[u64], k: usize) -> Result<bool> {
    Ok(check_independent_no_containment(s, i) && find_alt_bruteforce(s, i, k, None)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom_core::rational;

    fn iv(id: u64, l: i64, r: i64) -> OInterval<i64> {
        OInterval { id, l, r }
    }

    #[test]
    fn greedy_small_examples() {
        let s = vec![
            OInterval { id: 1, l: rational(0, 1), r: rational(2, 1) },
            OInterval { id: 2, l: rational(1, 1), r: rational(3, 1) },
            OInterval { id: 3, l: rational(5, 2), r: rational(4, 1) },
        ];
        let rep = exact_intervals(&s);
        assert_eq!(rep.opt_value, 2);
        assert_eq!(rep.witness, vec![1, 3]);
        assert_eq!(exhaustive_intervals(&s), 2);
        let chain: Vec<_> = (0..6).map(|j| iv(j, -(j as i64), j as i64 + 1)).collect();
        assert_eq!(exact_intervals(&chain).opt_value, 1);
    }

    #[test]
    fn squares_small() {
        let s: Vec<Square> = (0..3).map(|j| Square::new(j, 0.3 * j as f64, 0.0, 0.1)).collect();
        assert_eq!(exact_squares(&s).unwrap().opt_value, 3);
        let t: Vec<Square> = (0..5).map(|j| Square::new(j, 0.4 - 0.05 * j as f64, 0.4, 0.2)).collect();
        assert_eq!(exact_squares(&t).unwrap().opt_value, 1);
        assert!(exact_squares(&vec![Square::new(0, 0.0, 0.0, 0.1); 61]).is_err());
    }

    #[test]
    fn free_interval_is_a_path() {
        let s = vec![iv(1, 0, 1)];
        let p = find_alt_bruteforce(&s, &[], 0, None).unwrap().unwrap();
        assert_eq!(p, OAltPath { a: vec![], b: vec![1] });
    }

    #[test]
    fn two_to_three_exchange() {
        // Two members each overlapped by outsiders that fit three in their place.
        let s = vec![iv(1, 0, 4), iv(2, 5, 9), iv(10, 1, 2), iv(11, 3, 6), iv(12, 7, 8)];
        assert!(find_alt_bruteforce(&s, &[1, 2], 1, None).unwrap().is_none());
        let p = find_alt_bruteforce(&s, &[1, 2], 2, None).unwrap().unwrap();
        assert_eq!((p.a.len(), p.b.len()), (2, 3));
        assert!(!check_k_maximal_blocks(&s, &[1, 2], 2));
        assert!(check_k_maximal_blocks(&s, &[1, 2], 1));
    }

    #[test]
    fn containment_detected() {
        let s = vec![iv(1, 0, 10), iv(2, 2, 3)];
        assert!(!check_independent_no_containment(&s, &[1]));
        assert!(check_k_valid::<i64>(&[], &[], 3).pass);
    }
}
