use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sweepjoin::{Relation, TupleId};
use sweepjoin_cli::io::{read_csv, read_pairs_csv, write_csv};

fn sweepjoin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sweepjoin")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn sample_relations(dir: &Path) -> (PathBuf, PathBuf) {
    let (r, s) = (dir.join("r.csv"), dir.join("s.csv"));
    fs::write(&r, "ts,te,payload\n0,1,0\n1,3,0\n2,5,0\n").unwrap();
    fs::write(&s, "ts,te,payload\n1,3,0\n3,4,0\n").unwrap();
    (r, s)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn join_writes_pairs_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let (r, s) = sample_relations(dir.path());
    let (pairs, stats) = (dir.path().join("out.csv"), dir.path().join("stats.json"));
    let out = sweepjoin(&[
        "join",
        path(&r),
        path(&s),
        "--pred",
        "before",
        "--delta",
        "1",
        "-o",
        path(&pairs),
        "--stats",
        path(&stats),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let got = read_pairs_csv(&pairs).unwrap();
    assert_eq!(got, [(TupleId(0), TupleId(0)), (TupleId(1), TupleId(1))].into());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert!(json.to_string().contains("getnext_count"));
}

#[test]
fn strict_flag_and_partitions_agree_with_named_relation() {
    let dir = tempfile::tempdir().unwrap();
    let (r, s) = sample_relations(dir.path());
    let strict = sweepjoin(&["join", path(&r), path(&s), "--pred", "before", "--strict"]);
    let named = sweepjoin(&["join", path(&r), path(&s), "--pred", "allen-before", "--k", "2"]);
    assert!(strict.status.success() && named.status.success());
    assert_eq!(stdout(&strict), stdout(&named));
    assert_eq!(stdout(&strict), "r_id,s_id\n0,1\n");
}

#[test]
fn illegal_parameters_exit_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let (r, s) = sample_relations(dir.path());
    for args in [
        &["--pred", "before", "--delta", "-1"][..],
        &["--pred", "meets", "--delta", "2"],
        &["--pred", "no-such-relation"],
        &["--capacity", "0"],
    ] {
        let mut all = vec!["join", path(&r), path(&s)];
        all.extend_from_slice(args);
        let out = sweepjoin(&all);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn verify_accepts_good_and_rejects_corrupted_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let (r, s) = sample_relations(dir.path());
    let ok = sweepjoin(&["verify", path(&r), path(&s), "--pred", "left-overlap", "--epsilon", "1"]);
    assert!(ok.status.success(), "{}", stdout(&ok));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "r_id,s_id\n0,0\n").unwrap();
    let out = sweepjoin(&["verify", path(&r), path(&s), "--pred", "meets", "--pairs", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("- 1,1"));
}

#[test]
fn verify_batch_runs_every_relation() {
    let out = sweepjoin(&["verify", "--batch", "2", "--max-n", "30", "--hi", "20"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 failures"));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let out = sweepjoin(&["gen", "--n", "500", "--seed", "9", "--domain-hi", "1000", "-o", path(p)]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let rel = read_csv(&a).unwrap();
    assert_eq!(rel.len(), 500);
    assert!(rel.iter().all(|t| t.ts >= 1 && t.ts <= 1000 && t.te > t.ts));
    let c = dir.path().join("c.csv");
    write_csv(&c, &rel).unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
    let again: Relation<i64> = read_csv(&c).unwrap();
    assert!(again.iter().eq(rel.iter()));
}

#[test]
fn index_lists_endpoints_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let (r, _) = sample_relations(dir.path());
    let out = sweepjoin(&["index", path(&r)]);
    assert_eq!(stdout(&out), "timestamp,kind,tuple_id\n0,start,0\n1,end,0\n1,start,1\n2,start,2\n3,end,1\n5,end,2\n");
}

#[test]
fn histogram_frequencies_sum_to_one_hundred() {
    let dir = tempfile::tempdir().unwrap();
    let (r, s) = sample_relations(dir.path());
    let out = sweepjoin(&["histogram", path(&r), path(&s)]);
    assert!(out.status.success());
    let total: f64 = stdout(&out)
        .lines()
        .filter_map(|l| l.trim().strip_suffix('%'))
        .map(|l| l.split_whitespace().last().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 100.0).abs() < 1e-6, "{total}");
}

#[test]
fn malformed_csv_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let (r, _) = sample_relations(dir.path());
    let broken = dir.path().join("broken.csv");
    for (body, needle) in [("4,x,0", "line 3"), ("4,2,0", "inverted interval at id 1")] {
        fs::write(&broken, format!("ts,te,payload\n0,1,0\n{body}\n")).unwrap();
        let out = sweepjoin(&["join", path(&r), path(&broken)]);
        assert_eq!(out.status.code(), Some(1));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{err}");
    }
}
