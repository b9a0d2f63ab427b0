//! The sweep: one pass over an `r` and an `s` endpoint stream.
//!
//! Endpoints of `r` maintain the set of active `r` tuples; every endpoint of
//! `s` pairs its tuple with each active `r` tuple. Whether an `r` endpoint is
//! processed before an `s` endpoint is decided by a [`ComparatorKind`], which
//! together with the choice of streams fixes the join predicate.
//!
//! [`join_by_s`] scans the active set once per `s` endpoint.
//! [`lazy_join_by_s`] buffers consecutive `s` tuples and scans once per
//! buffer, trading output order for fewer active-set fetches.

use std::ops::{Add, AddAssign};

use thiserror::Error;

use crate::endpoint::{ComparatorKind, EndpointKind};
use crate::iter::EndpointIterator;
use crate::map::{ActiveSet, ChainedMapBaseline, GaplessHashMap};
use crate::relation::{IntervalTuple, Relation, TupleId};
use crate::time::TimePoint;

/// Lazy buffer capacity used unless configured otherwise.
pub const DEFAULT_LAZY_CAPACITY: usize = 2048;

/// Counters collected during a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct JoinStats {
    /// Active-set elements fetched by scans.
    pub getnext_count: u64,
    /// Attribute comparisons done by filtering consumers.
    pub comparison_count: u64,
    /// Pairs accepted by the consumer.
    pub output_count: u64,
    /// Lazy buffer drains.
    pub buffer_flushes: u64,
    /// Comparator invocations.
    pub endpoint_comparisons: u64,
}

impl Add for JoinStats {
    type Output = JoinStats;

    fn add(mut self, rhs: JoinStats) -> JoinStats {
        self += rhs;
        self
    }
}

impl AddAssign for JoinStats {
    fn add_assign(&mut self, rhs: JoinStats) {
        self.getnext_count += rhs.getnext_count;
        self.comparison_count += rhs.comparison_count;
        self.output_count += rhs.output_count;
        self.buffer_flushes += rhs.buffer_flushes;
        self.endpoint_comparisons += rhs.endpoint_comparisons;
    }
}

impl std::iter::Sum for JoinStats {
    fn sum<I: Iterator<Item = JoinStats>>(iter: I) -> Self {
        iter.fold(JoinStats::default(), Add::add)
    }
}

/// Receives candidate pairs from the sweep.
///
/// `at` is the timestamp of the `s` endpoint that triggered the pair. The
/// return value reports whether the pair was kept.
pub trait Consumer<T> {
    fn consume(&mut self, r: &IntervalTuple<T>, s: &IntervalTuple<T>, at: T) -> bool;
}

/// Adapts a closure into a [`Consumer`] that keeps every pair.
pub struct FnConsumer<F>(pub F);

impl<T, F: FnMut(&IntervalTuple<T>, &IntervalTuple<T>, T)> Consumer<T> for FnConsumer<F> {
    #[inline]
    fn consume(&mut self, r: &IntervalTuple<T>, s: &IntervalTuple<T>, at: T) -> bool {
        (self.0)(r, s, at);
        true
    }
}

/// Forwards only pairs that pass a residual predicate.
///
/// The predicate adds the number of attribute comparisons it performed to
/// the counter it is handed.
pub struct FilteringConsumer<P, C> {
    predicate: P,
    inner: C,
    comparisons: u64,
}

impl<P, C> FilteringConsumer<P, C> {
    pub fn new(predicate: P, inner: C) -> Self {
        FilteringConsumer { predicate, inner, comparisons: 0 }
    }

    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    pub fn into_inner(self) -> C {
        self.inner
    }
}

impl<T, P, C> Consumer<T> for FilteringConsumer<P, C>
where
    T: Copy,
    P: FnMut(&IntervalTuple<T>, &IntervalTuple<T>, &mut u64) -> bool,
    C: Consumer<T>,
{
    #[inline]
    fn consume(&mut self, r: &IntervalTuple<T>, s: &IntervalTuple<T>, at: T) -> bool {
        (self.predicate)(r, s, &mut self.comparisons) && self.inner.consume(r, s, at)
    }
}

/// Swaps the pair before forwarding, for sweeps run with `r` and `s`
/// exchanged.
pub struct ReversingConsumer<C>(pub C);

impl<T, C: Consumer<T>> Consumer<T> for ReversingConsumer<C> {
    #[inline]
    fn consume(&mut self, r: &IntervalTuple<T>, s: &IntervalTuple<T>, at: T) -> bool {
        self.0.consume(s, r, at)
    }
}

/// One output pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResultPair<T> {
    pub r_id: TupleId,
    pub s_id: TupleId,
    /// Sweep position when the pair was produced.
    pub emitted_at: T,
}

/// Collects every pair it is handed.
#[derive(Clone, Debug, Default)]
pub struct PairCollector<T> {
    pub pairs: Vec<ResultPair<T>>,
}

impl<T> PairCollector<T> {
    pub fn new() -> Self {
        PairCollector { pairs: Vec::new() }
    }
}

impl<T: Copy> Consumer<T> for PairCollector<T> {
    #[inline]
    fn consume(&mut self, r: &IntervalTuple<T>, s: &IntervalTuple<T>, at: T) -> bool {
        self.pairs.push(ResultPair { r_id: r.id, s_id: s.id, emitted_at: at });
        true
    }
}

/// Counts pairs and sums `r.ts + s.ts` without storing anything.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChecksumConsumer {
    pub pairs: u64,
    pub checksum: i128,
}

impl<T: TimePoint> Consumer<T> for ChecksumConsumer {
    #[inline]
    fn consume(&mut self, r: &IntervalTuple<T>, s: &IntervalTuple<T>, _at: T) -> bool {
        self.pairs += 1;
        self.checksum += r.ts.widen() + s.ts.widen();
        true
    }
}

impl<T, C: Consumer<T> + ?Sized> Consumer<T> for &mut C {
    #[inline]
    fn consume(&mut self, r: &IntervalTuple<T>, s: &IntervalTuple<T>, at: T) -> bool {
        (**self).consume(r, s, at)
    }
}

#[inline]
fn apply_r_event<T: TimePoint, A: ActiveSet<IntervalTuple<T>>>(
    rel_r: &Relation<T>,
    active: &mut A,
    kind: EndpointKind,
    id: TupleId,
) {
    match kind {
        EndpointKind::Start => active.insert(id, *rel_r.tuple(id)),
        EndpointKind::End => {
            active.remove(id);
        }
    }
}

/// Eager sweep: every `s` endpoint scans the active set.
///
/// Stops as soon as either stream is exhausted. Ids must be valid in their
/// relations; an unknown id panics.
pub fn join_by_s<T, A, IR, IS, C>(
    rel_r: &Relation<T>,
    rel_s: &Relation<T>,
    mut it_r: IR,
    mut it_s: IS,
    comp: ComparatorKind,
    active: &mut A,
    consumer: &mut C,
) -> JoinStats
where
    T: TimePoint,
    A: ActiveSet<IntervalTuple<T>>,
    IR: EndpointIterator<T>,
    IS: EndpointIterator<T>,
    C: Consumer<T> + ?Sized,
{
    let mut stats = JoinStats::default();
    while !it_r.is_finished() && !it_s.is_finished() {
        let re = it_r.endpoint();
        let se = it_s.endpoint();
        stats.endpoint_comparisons += 1;
        if comp.holds(&re, &se) {
            apply_r_event(rel_r, active, re.kind, re.tuple_id);
            it_r.advance();
        } else {
            let s = rel_s.tuple(se.tuple_id);
            stats.getnext_count += active.len() as u64;
            let mut kept = 0u64;
            active.scan(|r| kept += consumer.consume(r, s, se.timestamp) as u64);
            stats.output_count += kept;
            it_s.advance();
        }
    }
    stats
}

/// Lazy sweep: consecutive `s` endpoints not interrupted by an `r` endpoint
/// are buffered, up to `capacity`, and joined with one active-set scan.
///
/// Produces the same pairs as [`join_by_s`], in a different order.
///
/// # Panics
///
/// If `capacity` is zero or an id is invalid.
#[allow(clippy::too_many_arguments)]
pub fn lazy_join_by_s<T, A, IR, IS, C>(
    rel_r: &Relation<T>,
    rel_s: &Relation<T>,
    mut it_r: IR,
    mut it_s: IS,
    comp: ComparatorKind,
    active: &mut A,
    consumer: &mut C,
    capacity: usize,
) -> JoinStats
where
    T: TimePoint,
    A: ActiveSet<IntervalTuple<T>>,
    IR: EndpointIterator<T>,
    IS: EndpointIterator<T>,
    C: Consumer<T> + ?Sized,
{
    assert!(capacity >= 1, "lazy buffer capacity must be at least 1");
    let mut stats = JoinStats::default();
    let mut buffer: Vec<(IntervalTuple<T>, T)> = Vec::with_capacity(capacity);

    let mut flush = |buffer: &mut Vec<(IntervalTuple<T>, T)>, active: &A, stats: &mut JoinStats| {
        stats.buffer_flushes += 1;
        stats.getnext_count += active.len() as u64;
        let mut kept = 0u64;
        active.scan(|r| {
            for (s, at) in buffer.iter() {
                kept += consumer.consume(r, s, *at) as u64;
            }
        });
        stats.output_count += kept;
        buffer.clear();
    };

    while !it_r.is_finished() && !it_s.is_finished() {
        let re = it_r.endpoint();
        let se = it_s.endpoint();
        stats.endpoint_comparisons += 1;
        if comp.holds(&re, &se) {
            if !buffer.is_empty() {
                flush(&mut buffer, active, &mut stats);
            }
            apply_r_event(rel_r, active, re.kind, re.tuple_id);
            it_r.advance();
        } else {
            buffer.push((*rel_s.tuple(se.tuple_id), se.timestamp));
            it_s.advance();
            if buffer.len() == capacity {
                flush(&mut buffer, active, &mut stats);
            }
        }
    }
    if !buffer.is_empty() {
        flush(&mut buffer, active, &mut stats);
    }
    stats
}

/// Which sweep variant to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineMode {
    Eager,
    Lazy { capacity: usize },
}

impl Default for EngineMode {
    fn default() -> Self {
        EngineMode::Lazy { capacity: DEFAULT_LAZY_CAPACITY }
    }
}

/// Which active-set implementation the sweep uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ActiveSetKind {
    #[default]
    Gapless,
    Chained,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineConfig {
    pub mode: EngineMode,
    pub active_set: ActiveSetKind,
}

impl EngineConfig {
    pub fn eager() -> Self {
        EngineConfig { mode: EngineMode::Eager, ..Default::default() }
    }

    pub fn lazy(capacity: usize) -> Self {
        EngineConfig { mode: EngineMode::Lazy { capacity }, ..Default::default() }
    }

    pub fn with_active_set(mut self, active_set: ActiveSetKind) -> Self {
        self.active_set = active_set;
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        match self.mode {
            EngineMode::Lazy { capacity: 0 } => Err(EngineError::ZeroCapacity),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EngineError {
    #[error("lazy buffer capacity must be at least 1")]
    ZeroCapacity,
    #[error("runs are not comparable: eager emitted {eager} pairs, lazy emitted {lazy}")]
    OutputMismatch { eager: u64, lazy: u64 },
}

/// Runs the sweep selected by `config` with a fresh active set.
pub fn run_sweep<T, IR, IS, C>(
    config: &EngineConfig,
    rel_r: &Relation<T>,
    rel_s: &Relation<T>,
    it_r: IR,
    it_s: IS,
    comp: ComparatorKind,
    consumer: &mut C,
) -> JoinStats
where
    T: TimePoint,
    IR: EndpointIterator<T>,
    IS: EndpointIterator<T>,
    C: Consumer<T> + ?Sized,
{
    #[allow(clippy::too_many_arguments)]
    fn with_set<T, A, IR, IS, C>(
        mode: EngineMode,
        mut active: A,
        rel_r: &Relation<T>,
        rel_s: &Relation<T>,
        it_r: IR,
        it_s: IS,
        comp: ComparatorKind,
        consumer: &mut C,
    ) -> JoinStats
    where
        T: TimePoint,
        A: ActiveSet<IntervalTuple<T>>,
        IR: EndpointIterator<T>,
        IS: EndpointIterator<T>,
        C: Consumer<T> + ?Sized,
    {
        match mode {
            EngineMode::Eager => join_by_s(rel_r, rel_s, it_r, it_s, comp, &mut active, consumer),
            EngineMode::Lazy { capacity } => {
                lazy_join_by_s(rel_r, rel_s, it_r, it_s, comp, &mut active, consumer, capacity)
            }
        }
    }

    match config.active_set {
        ActiveSetKind::Gapless => {
            with_set(config.mode, GaplessHashMap::new(), rel_r, rel_s, it_r, it_s, comp, consumer)
        }
        ActiveSetKind::Chained => {
            with_set(config.mode, ChainedMapBaseline::new(), rel_r, rel_s, it_r, it_s, comp, consumer)
        }
    }
}

/// Getnext reduction factor: eager over lazy active-set fetches.
///
/// 1.0 when neither run fetched anything. Both runs must have produced the
/// same number of pairs.
pub fn compute_gnorf(eager: &JoinStats, lazy: &JoinStats) -> Result<f64, EngineError> {
    if eager.output_count != lazy.output_count {
        return Err(EngineError::OutputMismatch { eager: eager.output_count, lazy: lazy.output_count });
    }
    if lazy.getnext_count == 0 {
        return Ok(if eager.getnext_count == 0 { 1.0 } else { f64::INFINITY });
    }
    Ok(eager.getnext_count as f64 / lazy.getnext_count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endpoint::EndpointIndex;
    use crate::iter::{EndpointIteratorExt, IndexIterator};
    use std::collections::BTreeSet;

    fn sp_pairs(r: &Relation<i64>, s: &Relation<i64>, config: EngineConfig) -> (BTreeSet<(u32, u32)>, JoinStats) {
        let (ir, is) = (EndpointIndex::build(r), EndpointIndex::build(s));
        let mut out = PairCollector::new();
        let stats = run_sweep(
            &config,
            r,
            s,
            IndexIterator::new(&ir),
            IndexIterator::new(&is).filter_kind(EndpointKind::Start),
            ComparatorKind::NonStrict,
            &mut out,
        );
        (out.pairs.iter().map(|p| (p.r_id.0, p.s_id.0)).collect(), stats)
    }

    #[test]
    fn single_pair_emitted_at_s_start() {
        let r = Relation::new("r", [(0, 10, 0)]).unwrap();
        let s = Relation::new("s", [(5, 6, 0)]).unwrap();
        let (ir, is) = (EndpointIndex::build(&r), EndpointIndex::build(&s));
        let mut out = PairCollector::new();
        let mut set = GaplessHashMap::new();
        join_by_s(
            &r,
            &s,
            IndexIterator::new(&ir),
            IndexIterator::new(&is).filter_kind(EndpointKind::Start),
            ComparatorKind::NonStrict,
            &mut set,
            &mut out,
        );
        assert_eq!(out.pairs, [ResultPair { r_id: TupleId(0), s_id: TupleId(0), emitted_at: 5 }]);
    }

    #[test]
    fn empty_s_emits_nothing() {
        let r = Relation::new("r", [(0, 10, 0), (2, 4, 0)]).unwrap();
        let (pairs, stats) = sp_pairs(&r, &Relation::empty("s"), EngineConfig::eager());
        assert!(pairs.is_empty());
        assert_eq!(stats.getnext_count + stats.output_count + stats.buffer_flushes, 0);
    }

    #[test]
    fn batch_gnorf() {
        let r = Relation::new("r", (0..4).map(|_| (0, 100, 0))).unwrap();
        let s = Relation::new("s", (0..10).map(|_| (10, 20, 0))).unwrap();
        let (eager_pairs, eager) = sp_pairs(&r, &s, EngineConfig::eager());
        let (lazy_pairs, lazy) = sp_pairs(&r, &s, EngineConfig::lazy(32));
        assert_eq!(eager_pairs, lazy_pairs);
        assert_eq!(eager.output_count, 40);
        assert_eq!((eager.getnext_count, lazy.getnext_count), (40, 4));
        assert_eq!(compute_gnorf(&eager, &lazy).unwrap(), 10.0);
    }

    #[test]
    fn gnorf_edge_cases() {
        let one = JoinStats { getnext_count: 1, output_count: 1, ..Default::default() };
        assert_eq!(compute_gnorf(&one, &one).unwrap(), 1.0);
        assert_eq!(compute_gnorf(&JoinStats::default(), &JoinStats::default()).unwrap(), 1.0);
        let other = JoinStats { output_count: 2, ..one };
        assert!(matches!(compute_gnorf(&one, &other), Err(EngineError::OutputMismatch { .. })));
    }

    #[test]
    fn chained_set_agrees() {
        let r = Relation::new("r", [(0, 1, 0), (1, 3, 0), (2, 5, 0)]).unwrap();
        let s = Relation::new("s", [(1, 3, 0), (3, 4, 0)]).unwrap();
        let gapless = sp_pairs(&r, &s, EngineConfig::eager()).0;
        let chained = sp_pairs(&r, &s, EngineConfig::lazy(2).with_active_set(ActiveSetKind::Chained)).0;
        assert_eq!(gapless, BTreeSet::from([(1, 0), (2, 1)]));
        assert_eq!(gapless, chained);
    }

    #[test]
    fn filtering_consumer_counts() {
        let r = IntervalTuple::new(TupleId(0), 0i64, 4, 0);
        let s = IntervalTuple::new(TupleId(0), 2i64, 6, 0);
        let mut out = PairCollector::new();
        let mut f = FilteringConsumer::new(
            |r: &IntervalTuple<i64>, s: &IntervalTuple<i64>, n: &mut u64| {
                *n += 1;
                r.te <= s.te
            },
            &mut out,
        );
        assert!(f.consume(&r, &s, 2));
        assert!(!f.consume(&s, &r, 2));
        assert_eq!(f.comparisons(), 2);
        assert_eq!(out.pairs.len(), 1);
    }
}
