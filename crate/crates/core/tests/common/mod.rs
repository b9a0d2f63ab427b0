#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use sweepjoin::{Relation, TupleId};

/// Intervals inside `[0, hi]`, dense enough to force ties.
pub fn intervals(max_len: usize, hi: i64) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0..hi).prop_flat_map(move |ts| (Just(ts), ts + 1..=hi)), 0..=max_len)
}

pub fn relation(name: &str, spans: &[(i64, i64)]) -> Relation<i64> {
    Relation::new(name, spans.iter().map(|&(ts, te)| (ts, te, 0))).unwrap()
}

pub fn sample_relations() -> (Relation<i64>, Relation<i64>) {
    (relation("r", &[(0, 1), (1, 3), (2, 5)]), relation("s", &[(1, 3), (3, 4)]))
}

pub fn ids(set: &BTreeSet<(TupleId, TupleId)>) -> Vec<(u32, u32)> {
    set.iter().map(|(r, s)| (r.0, s.0)).collect()
}
