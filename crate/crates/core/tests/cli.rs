//! Trace generation and checked runs, through the library and the binary.

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::Command;

use dynis::cli::{self, GenKind, OpKind};
use dynis::oracle::{self, OInterval};
use dynis::RationalKey;

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bench_cli"))
}

#[test]
fn gen_is_byte_identical_across_runs() {
    let (a, b) = (tmp("u1.jsonl"), tmp("u2.jsonl"));
    for p in [&a, &b] {
        let st = bin().args(["gen", "--kind", "uniform", "--n", "10", "--seed", "1", "--out"]).arg(p).status().unwrap();
        assert!(st.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read_to_string(&a).unwrap().lines().count(), 10);
}

#[test]
fn nested_has_optimum_one() {
    let ops = cli::gen(GenKind::Nested, 5, 0).unwrap();
    let s: Vec<_> = ops.iter().map(|o| o.interval().unwrap()).collect();
    assert_eq!(oracle::exact_intervals_value(&s), 1);
}

fn exchange(i: &mut Vec<u64>, p: &oracle::OAltPath) {
    i.retain(|x| !p.a.contains(x));
    i.extend(&p.b);
}

#[test]
fn percolation_trigger_starts_a_chain_of_two_for_three_exchanges() {
    let ops = cli::gen(GenKind::AdversarialPercolation, 20, 0).unwrap();
    assert_eq!(ops.len(), 20);
    assert!(ops.iter().all(|o| o.op == OpKind::Insert));
    let all: Vec<_> = ops.iter().map(|o| o.interval().unwrap()).collect();
    let (before, x) = all.split_at(19);
    assert_eq!(x[0].id, 1);
    // Blacks are the intervals disjoint from every earlier insert.
    let mut black: Vec<u64> = Vec::new();
    for (j, y) in before.iter().enumerate() {
        if before[..j].iter().filter(|z| black.contains(&z.id)).all(|z| z.r < y.l || y.r < z.l) {
            black.push(y.id);
        }
    }
    let s0 = oracle::by_value(before);
    assert!(oracle::find_alt_bruteforce(&s0, &black, 2, None).unwrap().is_none(), "2-maximal before the trigger");

    // The trigger lies strictly inside the center black and replaces it.
    let s1 = oracle::by_value(&all);
    let mut i: Vec<u64> = black.iter().copied().filter(|&b| b != 0).collect();
    i.push(1);
    let mut steps = Vec::new();
    while let Some(p) = oracle::find_alt_bruteforce(&s1, &i, 2, None).unwrap() {
        steps.push((p.a.len(), p.b.len()));
        exchange(&mut i, &p);
        assert!(steps.len() < 20);
    }
    assert!(steps.len() >= 3, "{:?}", steps);
    assert!(steps.iter().all(|&s| s == (2, 3)), "{:?}", steps);
    // The second right block (blacks 6, 7; greens 16, 17, 18) can only
    // switch after the first one (blacks 2, 3; greens 10, 11, 12) has.
    let mut i0: Vec<u64> = black.iter().copied().filter(|&b| b != 0).collect();
    i0.push(1);
    let swap = |i: &[u64], a: &[u64], b: &[u64]| -> Vec<u64> {
        i.iter().copied().filter(|x| !a.contains(x)).chain(b.iter().copied()).collect()
    };
    assert!(!independent(&s1, &swap(&i0, &[6, 7], &[16, 17, 18])));
    let i1 = swap(&i0, &[2, 3], &[10, 11, 12]);
    assert!(independent(&s1, &i1));
    assert!(independent(&s1, &swap(&i1, &[6, 7], &[16, 17, 18])));
}

fn independent(s: &[OInterval<RationalKey>], ids: &[u64]) -> bool {
    let v: Vec<_> = s.iter().filter(|x| ids.contains(&x.id)).collect();
    v.len() == ids.len() && (0..v.len()).all(|i| (i + 1..v.len()).all(|j| !v[i].intersects(v[j])))
}

#[test]
fn checked_interval_run_on_uniform_trace() {
    let trace = tmp("u1000.jsonl");
    assert!(bin().args(["gen", "--kind", "uniform", "--n", "1000", "--seed", "5", "--out"]).arg(&trace).status().unwrap().success());
    let out = bin().args(["run", "intervals", "--k", "3", "--check", "--trace"]).arg(&trace).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1000);
    let mut set = HashSet::new();
    for l in text.lines() {
        serde_json::from_str::<dynis::delta::DeltaLine>(l).unwrap().apply_to(&mut set).unwrap();
    }
    let csv = String::from_utf8(out.stderr).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[8].parse::<usize>().unwrap(), set.len());
}

#[test]
fn checked_square_run_seed_7() {
    let trace = tmp("s500.jsonl");
    assert!(bin().args(["gen", "--kind", "clustered-squares", "--n", "500", "--seed", "2", "--out"]).arg(&trace).status().unwrap().success());
    let csv = tmp("s500.csv");
    let out = bin().args(["run", "squares", "--seed", "7", "--check", "--trace"]).arg(&trace).arg("--csv").arg(&csv).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("structure,n,k,seed,ops,"));
    assert!(rows.lines().nth(1).unwrap().starts_with("squares,"));
}

#[test]
fn empty_trace_gives_a_zero_op_row() {
    let trace = tmp("empty.jsonl");
    std::fs::write(&trace, "").unwrap();
    let csv = tmp("empty.csv");
    let st = bin().args(["run", "intervals", "--check", "--trace"]).arg(&trace).arg("--csv").arg(&csv).status().unwrap();
    assert!(st.success());
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.lines().nth(1).unwrap().starts_with("intervals,0,2,,0,"));
}

#[test]
fn bench_rejects_zero_reps_and_writes_one_row_per_size() {
    let csv = tmp("b.csv");
    let st = bin().args(["bench", "--structure", "intervals", "--sizes", "64", "--reps", "0", "--csv"]).arg(&csv).status().unwrap();
    assert!(!st.success());
    let st = bin()
        .args(["bench", "--structure", "squares", "--sizes", "2^6..2^7", "--reps", "1", "--ops", "64", "--csv"])
        .arg(&csv)
        .status()
        .unwrap();
    assert!(st.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 3);
}

#[test]
fn invalid_trace_fails_with_the_state() {
    let trace = tmp("bad.jsonl");
    std::fs::write(&trace, "{\"op\":\"delete\",\"id\":4}\n").unwrap();
    let out = bin().args(["run", "intervals", "--check", "--trace"]).arg(&trace).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"step\":0"));
}
