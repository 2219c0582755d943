//! Workload traces, checked trace execution and timing runs.
//!
//! Traces are JSONL, one [`TraceOp`] per line. Interval payloads carry
//! rational endpoint strings; square payloads carry `x`, `y`, `size`.

use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::delta::{Delta, DeltaLine};
use crate::geom_core::{QuadRoot, RationalKey};
use crate::interval_mis::IntervalMis;
use crate::oracle;
use crate::quadtree_structure::GlobalState;
use crate::{Error, Interval, Result, Square};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Insert,
    Delete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceOp {
    pub op: OpKind,
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<RationalKey>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<RationalKey>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<f64>,
}

impl TraceOp {
    pub fn insert_interval(x: &Interval) -> Self {
        TraceOp { op: OpKind::Insert, id: x.id, l: Some(x.l.clone()), r: Some(x.r.clone()), x: None, y: None, size: None }
    }

    pub fn insert_square(s: &Square) -> Self {
        TraceOp { op: OpKind::Insert, id: s.id, l: None, r: None, x: Some(s.x), y: Some(s.y), size: Some(s.size) }
    }

    pub fn delete(id: u64) -> Self {
        TraceOp { op: OpKind::Delete, id, l: None, r: None, x: None, y: None, size: None }
    }

    pub fn interval(&self) -> Result<Interval> {
        match (&self.l, &self.r) {
            (Some(l), Some(r)) => Interval::new(self.id, l.clone(), r.clone()),
            _ => Err(Error::Parse(format!("op {} has no interval payload", self.id))),
        }
    }

    pub fn square(&self) -> Result<Square> {
        match (self.x, self.y, self.size) {
            (Some(x), Some(y), Some(s)) => Ok(Square::new(self.id, x, y, s)),
            _ => Err(Error::Parse(format!("op {} has no square payload", self.id))),
        }
    }
}

pub fn write_trace<W: Write>(ops: &[TraceOp], mut w: W) -> std::io::Result<()> {
    for op in ops {
        serde_json::to_writer(&mut w, op)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn read_trace<R: BufRead>(r: R) -> Result<Vec<TraceOp>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse(format!("line {}: {}", i + 1, e)))?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    Uniform,
    Nested,
    AdversarialPercolation,
    ClusteredSquares,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Intervals,
    Squares,
}

/// Deterministic trace of `n` operations (`n` inserts for the static kinds).
pub fn gen(kind: GenKind, n: usize, seed: u64) -> Result<Vec<TraceOp>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        GenKind::Uniform => mixed_trace(&mut rng, n, |rng, id| TraceOp::insert_interval(&uniform_interval(rng, id, n))),
        GenKind::ClusteredSquares => {
            let centers: Vec<(f64, f64)> = (0..8).map(|_| (rng.gen(), rng.gen())).collect();
            mixed_trace(&mut rng, n, |rng, id| TraceOp::insert_square(&clustered_square(rng, id, &centers)))
        }
        GenKind::Nested => {
            let mut v: Vec<Interval> = (0..n as i64).map(|j| Interval::int(j as u64, -j - 1, j + 1)).collect();
            v.shuffle(&mut rng);
            v.iter().map(TraceOp::insert_interval).collect()
        }
        GenKind::AdversarialPercolation => {
            let shift = rng.gen_range(0..1000) * 10;
            percolation(n, shift).iter().map(TraceOp::insert_interval).collect()
        }
    })
}

/// Inserts and deletes of live ids, about 70% inserts.
fn mixed_trace(rng: &mut ChaCha8Rng, n: usize, mut make: impl FnMut(&mut ChaCha8Rng, u64) -> TraceOp) -> Vec<TraceOp> {
    let mut live: Vec<u64> = Vec::new();
    let mut out = Vec::with_capacity(n);
    let mut next = 0;
    for _ in 0..n {
        if live.is_empty() || rng.gen_bool(0.7) {
            out.push(make(rng, next));
            live.push(next);
            next += 1;
        } else {
            let i = rng.gen_range(0..live.len());
            out.push(TraceOp::delete(live.swap_remove(i)));
        }
    }
    out
}

/// Quarter-grid interval on a line scaled with `n`, so the expected
/// number of overlaps per interval does not depend on `n`.
pub fn uniform_interval(rng: &mut impl Rng, id: u64, n: usize) -> Interval {
    let a: i64 = rng.gen_range(0..32 * n as i64);
    let len: i64 = rng.gen_range(1..=256);
    Interval::new(id, RationalKey::new(a, 4), RationalKey::new(a + len, 4)).unwrap()
}

/// Square near one of `centers`, side log-uniform in [2^-11, 2^-4],
/// kept inside the unit square.
pub fn clustered_square(rng: &mut impl Rng, id: u64, centers: &[(f64, f64)]) -> Square {
    let (cx, cy) = centers[rng.gen_range(0..centers.len())];
    let size = 2f64.powf(-rng.gen_range(4.0..11.0));
    let spread = 0.1 * rng.gen::<f64>();
    let x = (cx + spread * (rng.gen::<f64>() - 0.5)).clamp(0.0, 1.0 - size);
    let y = (cy + spread * (rng.gen::<f64>() - 0.5)).clamp(0.0, 1.0 - size);
    Square::new(id, x, y, size)
}

/// Square of side about `sqrt(1/n)` scaled by a log-uniform factor,
/// uniform in the unit square.
pub fn uniform_square(rng: &mut impl Rng, id: u64, n: usize) -> Square {
    let size = (1.0 / n as f64).sqrt() * 2f64.powf(rng.gen_range(-2.0..1.0));
    let size = size.min(0.5);
    Square::new(id, rng.gen_range(0.0..1.0 - size), rng.gen_range(0.0..1.0 - size), size)
}

/// Centered square whose enclosing cell is the depth-`depth` cell of
/// `root` holding `p`; falls back to [`uniform_square`] near the border.
pub fn chain_square(rng: &mut impl Rng, id: u64, root: &QuadRoot, p: (f64, f64), depth: u32, n: usize) -> Square {
    let cw = root.w / (1u64 << depth) as f64;
    let cx = root.ox + cw * (((p.0 - root.ox) / cw).floor() + 0.5);
    let cy = root.oy + cw * (((p.1 - root.oy) / cw).floor() + 0.5);
    let half = cw / 2.0 * 0.98;
    let size = half * 10f64.powf(rng.gen_range(-2.0..0.0)) * rng.gen_range(1.0..2.0);
    let lo = (size - half).max(0.0);
    let s = Square::new(id, cx - rng.gen_range(lo..=size.min(half)), cy - rng.gen_range(lo..=size.min(half)), size);
    if s.x < 0.0 || s.y < 0.0 || s.x + s.size > 1.0 || s.y + s.size > 1.0 {
        uniform_square(rng, id, n)
    } else {
        s
    }
}

/// Blocks of two black intervals and three green ones. Block `j` starting
/// at `b` holds blacks `[b+1,b+3]`, `[b+5,b+9]` and greens `[b-1,b+2]`,
/// `[b+3,b+5]`, `[b+6,b+8]`; the first green also meets the previous
/// block's second black, so the greens of a block fit only once the block
/// before has switched. A center black `m = [-5,-1]` starts the chain on
/// both sides (the left side is mirrored about -3) and the final insert
/// `x = [-4,-2]`, strictly inside `m`, is the trigger.
///
/// Ids: `m` is 0, `x` is 1, block items follow in insertion order.
pub fn percolation(n: usize, shift: i64) -> Vec<Interval> {
    let mut blocks: Vec<[(i64, i64); 5]> = Vec::new();
    let mut j = 0;
    while 1 + 5 * blocks.len() + 1 < n.max(2) {
        let b = 10 * j;
        let right = [(b + 1, b + 3), (b + 5, b + 9), (b - 1, b + 2), (b + 3, b + 5), (b + 6, b + 8)];
        let left = right.map(|(l, r)| (-6 - r, -6 - l));
        blocks.push(right);
        blocks.push(left);
        j += 1;
    }
    let budget = n.saturating_sub(2);
    let mut blacks = Vec::new();
    let mut greens = Vec::new();
    let mut used = 0;
    'outer: for blk in &blocks {
        for (i, &e) in blk.iter().enumerate() {
            if used == budget {
                break 'outer;
            }
            used += 1;
            if i < 2 { blacks.push(e) } else { greens.push(e) }
        }
    }
    let mut out = vec![Interval::int(0, -5 + shift, -1 + shift)];
    let mut id = 2;
    for (l, r) in blacks.into_iter().chain(greens) {
        out.push(Interval::int(id, l + shift, r + shift));
        id += 1;
    }
    if n >= 2 {
        out.push(Interval::int(1, -4 + shift, -2 + shift));
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MetricsRow {
    pub structure: String,
    /// Live elements after the last op.
    pub n: usize,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub ops: usize,
    pub mean_us: f64,
    pub median_us: f64,
    pub p99_us: f64,
    /// Size of the maintained independent set after the last op.
    pub size_i: usize,
    pub opt: Option<usize>,
    pub ratio: Option<f64>,
    /// Total ids added or removed over the run.
    pub delta_volume: usize,
}

/// A failed check, with the state it failed on.
#[derive(Debug, Serialize)]
pub struct RunFailure {
    pub step: usize,
    pub message: String,
    pub state: serde_json::Value,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "step {}: {}", self.step, self.message)
    }
}

fn fail(step: usize, message: impl Into<String>, state: serde_json::Value) -> RunFailure {
    RunFailure { step, message: message.into(), state }
}

/// Mean, median and 99th percentile of `xs`, in the same unit.
pub fn summarize(xs: &[f64]) -> (f64, f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let at = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
    (mean, at(0.5), at(0.99))
}

/// Replay `ops` on the interval structure. Each op's delta is written to
/// `deltas` as one JSONL line. With `check`, k-validity, the factor-2
/// bound and delta replay are verified after every op.
pub fn run_intervals<W: Write>(ops: &[TraceOp], k: usize, check: bool, mut deltas: W) -> std::result::Result<MetricsRow, RunFailure> {
    let mut m = IntervalMis::new(k);
    let mut times = Vec::with_capacity(ops.len());
    let mut shadow: HashSet<u64> = HashSet::new();
    let mut volume = 0;
    let mut opt = None;
    for (step, op) in ops.iter().enumerate() {
        let t = Instant::now();
        let res = match op.op {
            OpKind::Insert => op.interval().and_then(|x| m.insert(x)),
            OpKind::Delete => m.delete(op.id),
        };
        times.push(t.elapsed().as_secs_f64() * 1e6);
        let d = res.map_err(|e| fail(step, e.to_string(), serde_json::json!({ "op": op })))?;
        volume += emit(&d, &mut shadow, &mut deltas).map_err(|e| fail(step, e, serde_json::Value::Null))?;
        if check {
            let state = || serde_json::json!({ "intervals": m.intervals(), "independent": m.independent_ids(), "k": k });
            let s = oracle::by_ekey(&m.intervals());
            let ids = m.independent_ids();
            if !m.check_structure() {
                return Err(fail(step, "structure views out of sync", state()));
            }
            if !oracle::check_k_valid(&s, &ids, k).pass {
                return Err(fail(step, "independent set is not k-valid", state()));
            }
            let o = oracle::exact_intervals(&s).opt_value;
            if 2 * ids.len() < o {
                return Err(fail(step, format!("2|I| = {} below OPT = {}", 2 * ids.len(), o), state()));
            }
            if shadow != ids.iter().copied().collect() {
                return Err(fail(step, "delta replay differs from the independent set", state()));
            }
            opt = Some(o);
        }
    }
    let (mean_us, median_us, p99_us) = summarize(&times);
    let size_i = m.independent_ids().len();
    Ok(MetricsRow {
        structure: "intervals".into(),
        n: m.len(),
        k: Some(k),
        seed: None,
        ops: ops.len(),
        mean_us,
        median_us,
        p99_us,
        size_i,
        opt,
        ratio: opt.filter(|&o| o > 0).map(|o| size_i as f64 / o as f64),
        delta_volume: volume,
    })
}

/// Squares at or below this live size get an exact optimum in checked runs.
pub const EXACT_SQUARES_LIMIT: usize = 50;

/// Replay `ops` on the dynamic square structure rooted by `seed`. With
/// `check`, the full invariant sweep, disjointness and delta replay run
/// after every op, and the final optimum is computed when small enough.
pub fn run_squares<W: Write>(
    ops: &[TraceOp],
    seed: u64,
    k: usize,
    check: bool,
    mut deltas: W,
) -> std::result::Result<MetricsRow, RunFailure> {
    let mut g = GlobalState::new(QuadRoot::from_seed(seed), k, false);
    let mut times = Vec::with_capacity(ops.len());
    let mut shadow: HashSet<u64> = HashSet::new();
    let mut live: Vec<Square> = Vec::new();
    let mut volume = 0;
    for (step, op) in ops.iter().enumerate() {
        let t = Instant::now();
        let res = match op.op {
            OpKind::Insert => op.square().and_then(|s| {
                live.push(s);
                g.insert(s)
            }),
            OpKind::Delete => {
                live.retain(|s| s.id != op.id);
                g.delete(op.id)
            }
        };
        times.push(t.elapsed().as_secs_f64() * 1e6);
        let d = res.map_err(|e| fail(step, e.to_string(), serde_json::json!({ "op": op })))?;
        volume += emit(&d, &mut shadow, &mut deltas).map_err(|e| fail(step, e, serde_json::Value::Null))?;
        if check {
            if let Err(e) = g.check() {
                return Err(fail(step, e.to_string(), serde_json::json!({ "seed": seed, "k": k, "squares": live })));
            }
            let state = || serde_json::json!({ "seed": seed, "k": k, "squares": live, "reported": g.reported() });
            let rep = g.reported();
            let sq: Vec<Square> = rep.iter().map(|id| *g.square(*id).unwrap()).collect();
            if !oracle::squares_pairwise_disjoint(&sq) {
                return Err(fail(step, "reported squares intersect", state()));
            }
            if shadow != rep.iter().copied().collect() {
                return Err(fail(step, "delta replay differs from the reported set", state()));
            }
        }
    }
    let size_i = g.reported().len();
    let opt = if check && live.len() <= EXACT_SQUARES_LIMIT {
        Some(oracle::exact_squares(&live).map_err(|e| fail(ops.len(), e.to_string(), serde_json::Value::Null))?.opt_value)
    } else {
        None
    };
    let (mean_us, median_us, p99_us) = summarize(&times);
    Ok(MetricsRow {
        structure: "squares".into(),
        n: live.len(),
        k: Some(k),
        seed: Some(seed),
        ops: ops.len(),
        mean_us,
        median_us,
        p99_us,
        size_i,
        opt,
        ratio: opt.filter(|&o| o > 0).map(|o| size_i as f64 / o as f64),
        delta_volume: volume,
    })
}

fn emit<W: Write>(d: &Delta, shadow: &mut HashSet<u64>, out: &mut W) -> std::result::Result<usize, String> {
    let line: DeltaLine = d.to_line();
    line.apply_to(shadow)?;
    serde_json::to_writer(&mut *out, &line).map_err(|e| e.to_string())?;
    out.write_all(b"\n").map_err(|e| e.to_string())?;
    Ok(line.add.len() + line.remove.len())
}

/// Parse `2^12..2^18` (every power of two in range), `a..b` (doubling from
/// `a`) or a comma list.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| -> Result<usize> {
        let t = t.trim();
        let bad = || Error::Parse(format!("bad size {:?}", t));
        match t.split_once('^') {
            Some((b, e)) => {
                let b: usize = b.parse().map_err(|_| bad())?;
                let e: u32 = e.parse().map_err(|_| bad())?;
                b.checked_pow(e).ok_or_else(bad)
            }
            None => t.parse().map_err(|_| bad()),
        }
    };
    let out = match s.split_once("..") {
        Some((a, b)) => {
            let (mut a, b) = (num(a)?, num(b)?);
            if a == 0 || a > b {
                return Err(Error::Parse(format!("bad size range {:?}", s)));
            }
            let mut v = Vec::new();
            while a <= b {
                v.push(a);
                a *= 2;
            }
            v
        }
        None => s.split(',').map(num).collect::<Result<Vec<_>>>()?,
    };
    if out.is_empty() || out.contains(&0) {
        return Err(Error::Parse(format!("bad sizes {:?}", s)));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub structure: Structure,
    pub n: usize,
    pub reps: usize,
    pub ops: usize,
    /// Mean over reps of the per-rep mean update time.
    pub mean_us: f64,
    /// Median over reps of the per-rep mean update time.
    pub median_us: f64,
    /// 99th percentile over all timed updates.
    pub p99_us: f64,
    /// `mean_us` over the previous row's `mean_us`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub structure: Structure,
    pub sizes: Vec<usize>,
    pub reps: usize,
    /// Timed updates per rep; each is one delete plus one insert.
    pub ops: usize,
    pub k: usize,
    pub seed: u64,
}

/// Build each size untimed, run `ops / 4` warmup updates, then time `ops`
/// updates at steady size. No checking.
pub fn bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.reps == 0 {
        return Err(Error::Precondition("reps must be at least 1".into()));
    }
    if cfg.sizes.is_empty() || cfg.ops == 0 {
        return Err(Error::Precondition("need at least one size and one op".into()));
    }
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in &cfg.sizes {
        let mut rep_means = Vec::new();
        let mut all = Vec::new();
        for rep in 0..cfg.reps {
            let seed = cfg.seed.wrapping_add(1_000_003 * rep as u64 + n as u64);
            let times = match cfg.structure {
                Structure::Intervals => bench_intervals(n, cfg.ops, cfg.k, seed)?,
                Structure::Squares => bench_squares(n, cfg.ops, cfg.k, seed)?,
            };
            rep_means.push(summarize(&times).0);
            all.extend(times);
        }
        let (mean_us, median_us, _) = summarize(&rep_means);
        let p99_us = summarize(&all).2;
        let ratio = rows.last().map(|r| mean_us / r.mean_us);
        rows.push(BenchRow { structure: cfg.structure, n, reps: cfg.reps, ops: cfg.ops, mean_us, median_us, p99_us, ratio });
    }
    Ok(rows)
}

fn bench_intervals(n: usize, ops: usize, k: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IntervalMis::new(k);
    let mut live: Vec<u64> = (0..n as u64).collect();
    for id in 0..n as u64 {
        m.insert(uniform_interval(&mut rng, id, n))?;
    }
    let mut next = n as u64;
    let mut times = Vec::with_capacity(ops);
    for step in 0..ops + ops / 4 {
        let i = rng.gen_range(0..live.len());
        let x = uniform_interval(&mut rng, next, n);
        let t = Instant::now();
        m.delete(live[i])?;
        m.insert(x)?;
        let el = t.elapsed().as_secs_f64() * 1e6;
        live[i] = next;
        next += 1;
        if step >= ops / 4 {
            times.push(el / 2.0);
        }
    }
    Ok(times)
}

fn bench_squares(n: usize, ops: usize, k: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = QuadRoot::from_seed(seed);
    let mut g = GlobalState::new(root, k, false);
    let centers: Vec<(f64, f64)> = (0..8).map(|_| (rng.gen(), rng.gen())).collect();
    let make = |rng: &mut ChaCha8Rng, id| match rng.gen_range(0..3) {
        0 => uniform_square(rng, id, n),
        1 => clustered_square(rng, id, &centers),
        _ => {
            let p = centers[rng.gen_range(0..centers.len())];
            let depth = rng.gen_range(1..24);
            chain_square(rng, id, &root, p, depth, n)
        }
    };
    let mut live: Vec<u64> = (0..n as u64).collect();
    for id in 0..n as u64 {
        g.insert(make(&mut rng, id))?;
    }
    let mut next = n as u64;
    let mut times = Vec::with_capacity(ops);
    for step in 0..ops + ops / 4 {
        let i = rng.gen_range(0..live.len());
        let s = make(&mut rng, next);
        let t = Instant::now();
        g.delete(live[i])?;
        g.insert(s)?;
        let el = t.elapsed().as_secs_f64() * 1e6;
        live[i] = next;
        next += 1;
        if step >= ops / 4 {
            times.push(el / 2.0);
        }
    }
    Ok(times)
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut c = csv::Writer::from_writer(w);
    for r in rows {
        c.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    c.flush().map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_sizes("2^2..2^4").unwrap(), vec![4, 8, 16]);
        assert_eq!(parse_sizes("100").unwrap(), vec![100]);
        assert_eq!(parse_sizes("3,5").unwrap(), vec![3, 5]);
        assert!(parse_sizes("2^4..2^2").is_err());
        assert!(parse_sizes("x").is_err());
    }

    #[test]
    fn trace_round_trip() {
        let ops = gen(GenKind::Uniform, 50, 3).unwrap();
        let mut buf = Vec::new();
        write_trace(&ops, &mut buf).unwrap();
        assert_eq!(read_trace(&buf[..]).unwrap(), ops);
        let sq = gen(GenKind::ClusteredSquares, 20, 3).unwrap();
        assert!(sq.iter().filter(|o| o.op == OpKind::Insert).all(|o| o.square().is_ok()));
    }

    #[test]
    fn empty_trace_gives_zero_row() {
        let row = run_intervals(&[], 2, true, std::io::sink()).unwrap();
        assert_eq!((row.ops, row.n, row.size_i, row.delta_volume), (0, 0, 0, 0));
    }

    #[test]
    fn zero_reps_is_an_error() {
        let cfg = BenchConfig { structure: Structure::Intervals, sizes: vec![16], reps: 0, ops: 8, k: 2, seed: 0 };
        assert!(bench(&cfg).is_err());
        let one = BenchConfig { reps: 1, ..cfg };
        assert_eq!(bench(&one).unwrap().len(), 1);
    }
}
