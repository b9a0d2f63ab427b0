//! Timed runs: engine comparisons, scaling grids, the batch workload and
//! active-set scan timings.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde_json::{json, Value};
use sweepjoin::{
    compute_gnorf, run_join_with, ActiveSet, ChainedMapBaseline, ChecksumConsumer, EndpointIndex, EngineConfig,
    EngineError, EngineMode, GaplessHashMap, IntervalTuple, JoinError, JoinInputs, JoinOptions, JoinStats,
    PredicateKind, PredicateSpec, Relation, TupleId,
};
use thiserror::Error;

use crate::dataset::{batch_dataset, gen_synthetic, DatasetError, DatasetSpec};
use crate::report::{engine_label, sequence_histogram, stats_json, SequenceHistogram};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Join(#[from] JoinError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("checksum mismatch: {first} reported {a}, {second} reported {b}")]
    ChecksumMismatch { first: String, a: String, second: String, b: String },
}

/// One timed configuration.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub label: String,
    pub engine: EngineConfig,
    /// Building both endpoint indexes.
    pub index_time: Duration,
    /// Fastest of the repeated join runs.
    pub join_time: Duration,
    pub stats: JoinStats,
    pub pairs: u64,
    /// Sum of `r.ts + s.ts` over all pairs.
    pub checksum: i128,
}

impl BenchRow {
    pub fn total_time(&self) -> Duration {
        self.index_time + self.join_time
    }

    pub fn to_json(&self) -> Value {
        json!({
            "engine": self.label,
            "index_ms": self.index_time.as_secs_f64() * 1e3,
            "join_ms": self.join_time.as_secs_f64() * 1e3,
            "pairs": self.pairs,
            "checksum": self.checksum.to_string(),
            "stats": stats_json(&self.stats),
        })
    }
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub spec: String,
    pub r_len: usize,
    pub s_len: usize,
    pub rows: Vec<BenchRow>,
    /// Eager over lazy getnext ratio, when both engines ran.
    pub gnorf: Option<f64>,
    pub histogram: SequenceHistogram,
}

impl BenchReport {
    pub fn to_json(&self) -> Value {
        json!({
            "spec": self.spec,
            "r_tuples": self.r_len,
            "s_tuples": self.s_len,
            "runs": self.rows.iter().map(BenchRow::to_json).collect::<Vec<_>>(),
            "gnorf": self.gnorf,
            "sequence_histogram": self.histogram.to_json(),
        })
    }

    pub fn table(&self) -> String {
        let mut out = format!("{}  |r|={} |s|={}\n", self.spec, self.r_len, self.s_len);
        out += &format!(
            "{:<24} {:>10} {:>10} {:>12} {:>14} {:>22}\n",
            "engine", "index ms", "join ms", "pairs", "getnext", "checksum"
        );
        for row in &self.rows {
            out += &format!(
                "{:<24} {:>10.2} {:>10.2} {:>12} {:>14} {:>22}\n",
                row.label,
                row.index_time.as_secs_f64() * 1e3,
                row.join_time.as_secs_f64() * 1e3,
                row.pairs,
                row.stats.getnext_count,
                row.checksum
            );
        }
        if let Some(g) = self.gnorf {
            out += &format!("gnorf {g:.3}\n");
        }
        out
    }
}

/// Builds the indexes and runs `spec` `repeats` times, keeping the fastest.
pub fn time_join(
    spec: &PredicateSpec<i64>,
    r: &Relation<i64>,
    s: &Relation<i64>,
    engine: EngineConfig,
    repeats: usize,
) -> Result<BenchRow, BenchError> {
    let started = Instant::now();
    let idx_r = EndpointIndex::build(r);
    let idx_s = EndpointIndex::build(s);
    let index_time = started.elapsed();
    let inputs = JoinInputs::new(r, s, &idx_r, &idx_s);
    let opts = JoinOptions::with_engine(engine);
    let mut best: Option<(Duration, JoinStats, ChecksumConsumer)> = None;
    for _ in 0..repeats.max(1) {
        let mut sink = ChecksumConsumer::default();
        let started = Instant::now();
        let stats = run_join_with(spec, inputs, &opts, &mut sink)?;
        let elapsed = started.elapsed();
        if best.as_ref().is_none_or(|(t, _, _)| elapsed < *t) {
            best = Some((elapsed, stats, sink));
        }
    }
    let (join_time, stats, sink) = best.expect("at least one run");
    Ok(BenchRow {
        label: engine_label(&engine),
        engine,
        index_time,
        join_time,
        stats,
        pairs: sink.pairs,
        checksum: sink.checksum,
    })
}

/// Runs every engine configuration on the same inputs.
///
/// Fails if any two configurations disagree on the checksum.
pub fn bench(
    spec: &PredicateSpec<i64>,
    r: &Relation<i64>,
    s: &Relation<i64>,
    engines: &[EngineConfig],
    repeats: usize,
) -> Result<BenchReport, BenchError> {
    let mut rows = Vec::with_capacity(engines.len());
    for &engine in engines {
        rows.push(time_join(spec, r, s, engine, repeats)?);
    }
    if let Some(first) = rows.first() {
        for row in &rows[1..] {
            if row.checksum != first.checksum || row.pairs != first.pairs {
                return Err(BenchError::ChecksumMismatch {
                    first: first.label.clone(),
                    a: first.checksum.to_string(),
                    second: row.label.clone(),
                    b: row.checksum.to_string(),
                });
            }
        }
    }
    let eager = rows.iter().find(|row| row.engine.mode == EngineMode::Eager);
    let lazy = rows.iter().find(|row| matches!(row.engine.mode, EngineMode::Lazy { .. }));
    let gnorf = match (eager, lazy) {
        (Some(e), Some(l)) => Some(compute_gnorf(&e.stats, &l.stats)?),
        _ => None,
    };
    let histogram = sequence_histogram(&EndpointIndex::build(r), &EndpointIndex::build(s));
    Ok(BenchReport { spec: spec.to_string(), r_len: r.len(), s_len: s.len(), rows, gnorf, histogram })
}

/// One point of a scaling curve.
#[derive(Clone, Debug)]
pub struct ScalingPoint {
    pub n: usize,
    pub domain_hi: i64,
    pub row: BenchRow,
}

/// Self-joins synthetic relations of growing size at fixed density: the
/// start domain grows in proportion to `n`.
pub fn scaling(
    spec: &PredicateSpec<i64>,
    grid: &[usize],
    base: &DatasetSpec,
    engine: EngineConfig,
    repeats: usize,
) -> Result<Vec<ScalingPoint>, BenchError> {
    let density = base.domain_hi as f64 / base.n.max(1) as f64;
    let mut out = Vec::with_capacity(grid.len());
    for &n in grid {
        let domain_hi = ((n as f64 * density).round() as i64).max(1);
        let rel = gen_synthetic(&DatasetSpec { n, domain_hi, ..*base })?;
        let row = time_join(spec, &rel, &rel, engine, repeats)?;
        out.push(ScalingPoint { n, domain_hi, row });
    }
    Ok(out)
}

/// Eager and lazy runs of start preceding on [`batch_dataset`]`(m, a)`.
pub fn batch_gnorf(m: usize, a: usize, capacity: usize) -> Result<(JoinStats, JoinStats, f64), BenchError> {
    let (r, s) = batch_dataset(m, a);
    let spec = PredicateSpec::new(PredicateKind::StartPreceding);
    let eager = time_join(&spec, &r, &s, EngineConfig::eager(), 1)?.stats;
    let lazy = time_join(&spec, &r, &s, EngineConfig::lazy(capacity), 1)?.stats;
    let gnorf = compute_gnorf(&eager, &lazy)?;
    Ok((eager, lazy, gnorf))
}

/// Scan timings of both active-set implementations.
#[derive(Clone, Copy, Debug)]
pub struct ScanTiming {
    pub entries: usize,
    pub gapless: Duration,
    pub chained: Duration,
}

impl ScanTiming {
    pub fn speedup(&self) -> f64 {
        self.chained.as_secs_f64() / self.gapless.as_secs_f64().max(1e-12)
    }

    pub fn ns_per_entry(d: Duration, entries: usize) -> f64 {
        d.as_secs_f64() * 1e9 / entries.max(1) as f64
    }
}

fn churned<M: ActiveSet<IntervalTuple<i64>>>(mut map: M, entries: usize, churn: usize, seed: u64) -> M {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let tuple = |id: usize| IntervalTuple::new(TupleId::from_index(id), id as i64, id as i64 + 1, 0);
    let mut live: Vec<usize> = (0..entries).collect();
    for &id in &live {
        map.insert(TupleId::from_index(id), tuple(id));
    }
    for next in (entries..).take(churn) {
        let slot = (rng.next_u64() % live.len() as u64) as usize;
        map.remove(TupleId::from_index(live[slot]));
        map.insert(TupleId::from_index(next), tuple(next));
        live[slot] = next;
    }
    map
}

fn time_scan<M: ActiveSet<IntervalTuple<i64>>>(map: &M, repeats: usize) -> Duration {
    let mut best = Duration::MAX;
    for _ in 0..repeats.max(1) {
        let started = Instant::now();
        let mut acc = 0i64;
        map.scan(|t| acc = acc.wrapping_add(t.ts));
        black_box(acc);
        best = best.min(started.elapsed());
    }
    best
}

/// Fills both maps with `entries` tuples, replaces `churn` random entries,
/// then times full scans (fastest of `repeats`).
pub fn scan_benchmark(entries: usize, churn: usize, seed: u64, repeats: usize) -> ScanTiming {
    let gapless = churned(GaplessHashMap::new(), entries, churn, seed);
    let gapless_time = time_scan(&gapless, repeats);
    drop(gapless);
    let chained = churned(ChainedMapBaseline::new(), entries, churn, seed);
    let chained_time = time_scan(&chained, repeats);
    ScanTiming { entries, gapless: gapless_time, chained: chained_time }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engines_agree_on_synthetic_self_join() {
        let rel = gen_synthetic(&DatasetSpec { n: 10_000, domain_hi: 10_000, seed: 3, ..Default::default() }).unwrap();
        let spec = PredicateSpec::new(PredicateKind::StartPreceding);
        let engines = [EngineConfig::eager(), EngineConfig::lazy(32), EngineConfig::default()];
        let report = bench(&spec, &rel, &rel, &engines, 1).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.gnorf.unwrap() >= 1.0);
        assert!(report.rows[0].pairs >= rel.len() as u64);
    }

    #[test]
    fn batch_gnorf_is_min_of_capacity_and_batch() {
        let (eager, lazy, g) = batch_gnorf(10, 4, 32).unwrap();
        assert_eq!((eager.getnext_count, lazy.getnext_count, g), (40, 4, 10.0));
        assert_eq!(batch_gnorf(100, 8, 32).unwrap().2, 25.0);
    }

    #[test]
    fn scan_benchmark_runs() {
        let t = scan_benchmark(1000, 1000, 1, 2);
        assert_eq!(t.entries, 1000);
    }
}
