//! Join operators for every supported interval relation.
//!
//! Each operator is one sweep over rewritten endpoint streams, optionally
//! followed by a residual filter on the joined tuples:
//!
//! | operator | `r` stream | `s` stream | comparator |
//! |---|---|---|---|
//! | start preceding | index, ends capped at `ts + delta + 1` | starts | `<=` |
//! | end following | index, starts raised to `te - epsilon - 1` | ends | `<` |
//! | before | `[te + beta, te + delta + 1)` | starts | `<=` |
//! | equals, starts | `[ts, ts + 1)` | starts | `<=` |
//! | finishes | `[te - 1, te)` | ends | `<` |
//!
//! Strict flavors swap the comparator. Relations with `r` and `s` exchanged
//! run the base operator on swapped inputs behind a [`ReversingConsumer`],
//! so every operator reports pairs as `(r, s)`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::endpoint::{ComparatorKind, EndpointIndex, EndpointKind};
use crate::engine::{
    run_sweep, Consumer, EngineConfig, EngineError, FilteringConsumer, JoinStats, PairCollector, ResultPair,
    ReversingConsumer,
};
use crate::iter::{EndpointIterator, EndpointIteratorExt, IndexIterator};
use crate::predicate::{PredicateKind, PredicateSpec, SpecError};
use crate::relation::{IntervalTuple, Relation, TupleId};
use crate::time::TimePoint;

use EndpointKind::{End, Start};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum JoinError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("before offset must be 0 or 1, got {0}")]
    InvalidBeta(String),
    #[error("partition count must be at least 1")]
    ZeroPartitions,
    #[error("{0} cannot run over a single pass of each input")]
    NotStreamable(PredicateKind),
}

/// Which sweep realizes during and right overlap.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Formulation {
    /// Start preceding plus a filter on the ends.
    #[default]
    StartPreceding,
    /// End following plus a filter on the starts.
    EndFollowing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct JoinOptions {
    pub engine: EngineConfig,
    pub formulation: Formulation,
}

impl JoinOptions {
    pub fn with_engine(engine: EngineConfig) -> Self {
        JoinOptions { engine, ..Default::default() }
    }
}

/// Both relations with their endpoint indexes.
#[derive(Debug)]
pub struct JoinInputs<'a, T> {
    pub r: &'a Relation<T>,
    pub s: &'a Relation<T>,
    pub idx_r: &'a EndpointIndex<T>,
    pub idx_s: &'a EndpointIndex<T>,
}

impl<T> Clone for JoinInputs<'_, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for JoinInputs<'_, T> {}

impl<'a, T> JoinInputs<'a, T> {
    pub fn new(
        r: &'a Relation<T>,
        s: &'a Relation<T>,
        idx_r: &'a EndpointIndex<T>,
        idx_s: &'a EndpointIndex<T>,
    ) -> Self {
        JoinInputs { r, s, idx_r, idx_s }
    }

    /// `r` and `s` exchanged.
    pub fn swapped(self) -> Self {
        JoinInputs { r: self.s, s: self.r, idx_r: self.idx_s, idx_s: self.idx_r }
    }
}

/// Pairs produced by a join run.
#[derive(Clone, Debug, Default)]
pub struct JoinOutcome<T> {
    pub pairs: Vec<ResultPair<T>>,
    pub stats: JoinStats,
}

impl<T> JoinOutcome<T> {
    pub fn pair_set(&self) -> BTreeSet<(TupleId, TupleId)> {
        pair_set(&self.pairs)
    }
}

pub fn pair_set<T>(pairs: &[ResultPair<T>]) -> BTreeSet<(TupleId, TupleId)> {
    pairs.iter().map(|p| (p.r_id, p.s_id)).collect()
}

/// Sum of `r.ts + s.ts` over all pairs.
pub fn checksum<T: TimePoint>(pairs: &[ResultPair<T>], rel_r: &Relation<T>, rel_s: &Relation<T>) -> i128 {
    pairs.iter().map(|p| rel_r.tuple(p.r_id).ts.widen() + rel_s.tuple(p.s_id).ts.widen()).sum()
}

/// A relaxed bound and an explicit `INF` bound mean the same thing.
fn bound<T: TimePoint>(b: Option<T>) -> Option<T> {
    b.filter(|v| !v.is_inf())
}

fn check_bound<T: TimePoint>(param: &'static str, b: Option<T>) -> Result<(), JoinError> {
    match b {
        Some(v) if v < T::zero() => Err(SpecError::NegativeParameter { param, value: v.to_string() }.into()),
        _ => Ok(()),
    }
}

fn comparator(strict: bool) -> ComparatorKind {
    if strict {
        ComparatorKind::Strict
    } else {
        ComparatorKind::NonStrict
    }
}

#[inline]
fn less<T: Ord>(a: T, b: T, strict: bool, n: &mut u64) -> bool {
    *n += 1;
    if strict {
        a < b
    } else {
        a <= b
    }
}

#[inline]
fn at_most<T: Ord>(a: T, b: T, n: &mut u64) -> bool {
    *n += 1;
    a <= b
}

fn start_preceding_sweep<T, C>(
    inputs: JoinInputs<'_, T>,
    engine: &EngineConfig,
    strict: bool,
    delta: Option<T>,
    consumer: &mut C,
) -> JoinStats
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    let it_s = IndexIterator::new(inputs.idx_s).filter_kind(Start);
    let comp = comparator(strict);
    match bound(delta) {
        None => run_sweep(engine, inputs.r, inputs.s, IndexIterator::new(inputs.idx_r), it_s, comp, consumer),
        Some(d) => {
            let capped_ends = IndexIterator::new(inputs.idx_r).filter_kind(Start).shift(d.shift(T::one()), End);
            let it_r = IndexIterator::new(inputs.idx_r).merge(capped_ends).first_end();
            run_sweep(engine, inputs.r, inputs.s, it_r, it_s, comp, consumer)
        }
    }
}

fn end_following_sweep<T, C>(
    inputs: JoinInputs<'_, T>,
    engine: &EngineConfig,
    strict: bool,
    epsilon: Option<T>,
    consumer: &mut C,
) -> JoinStats
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    let it_s = IndexIterator::new(inputs.idx_s).filter_kind(End);
    let comp = comparator(!strict);
    match bound(epsilon) {
        None => run_sweep(engine, inputs.r, inputs.s, IndexIterator::new(inputs.idx_r), it_s, comp, consumer),
        Some(e) => {
            let back = (T::zero() - e).saturating_sub(T::one());
            let raised_starts = IndexIterator::new(inputs.idx_r).filter_kind(End).shift(back, Start);
            let it_r = IndexIterator::new(inputs.idx_r).merge(raised_starts).second_start();
            run_sweep(engine, inputs.r, inputs.s, it_r, it_s, comp, consumer)
        }
    }
}

/// Runs `sweep` with `consumer` behind a residual filter and folds the
/// filter's comparison count into the stats.
fn filtered<T, C, P>(
    consumer: &mut C,
    predicate: P,
    sweep: impl FnOnce(&mut FilteringConsumer<P, &mut C>) -> JoinStats,
) -> JoinStats
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
    P: FnMut(&IntervalTuple<T>, &IntervalTuple<T>, &mut u64) -> bool,
{
    let mut f = FilteringConsumer::new(predicate, consumer);
    let mut stats = sweep(&mut f);
    stats.comparison_count += f.comparisons();
    stats
}

/// `r.ts <= s.ts < r.te` (strict: `r.ts < s.ts`), and `s.ts - r.ts <= delta`.
pub fn start_preceding<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    strict: bool,
    delta: Option<T>,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    check_bound("delta", delta)?;
    opts.engine.validate()?;
    Ok(start_preceding_sweep(inputs, &opts.engine, strict, delta, consumer))
}

/// `r.ts < s.te <= r.te` (strict: `s.te < r.te`), and `r.te - s.te <= epsilon`.
pub fn end_following<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    strict: bool,
    epsilon: Option<T>,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    check_bound("epsilon", epsilon)?;
    opts.engine.validate()?;
    Ok(end_following_sweep(inputs, &opts.engine, strict, epsilon, consumer))
}

/// `r.te + beta <= s.ts` and `s.ts - r.te <= delta`.
///
/// `beta = 0` is the bounded before relation, `beta = 1` the strict one.
pub fn general_before<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    beta: T,
    delta: Option<T>,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    if beta != T::zero() && beta != T::one() {
        return Err(JoinError::InvalidBeta(beta.to_string()));
    }
    check_bound("delta", delta)?;
    opts.engine.validate()?;
    let delta = bound(delta);
    if delta.is_some_and(|d| d < beta) {
        return Ok(JoinStats::default());
    }
    let ends = || IndexIterator::new(inputs.idx_r).filter_kind(End);
    let window_end = delta.map_or(T::INF, |d| d.shift(T::one()));
    let it_r = ends().shift(beta, Start).merge(ends().shift(window_end, End));
    let it_s = IndexIterator::new(inputs.idx_s).filter_kind(Start);
    Ok(run_sweep(&opts.engine, inputs.r, inputs.s, it_r, it_s, ComparatorKind::NonStrict, consumer))
}

/// `r.te == s.ts`.
pub fn meets<T, C>(inputs: JoinInputs<'_, T>, opts: &JoinOptions, consumer: &mut C) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    general_before(inputs, opts, T::zero(), Some(T::zero()), consumer)
}

/// `r.ts <= s.ts < r.te <= s.te` with both bounds; strict uses `<` throughout.
pub fn left_overlap<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    strict: bool,
    delta: Option<T>,
    epsilon: Option<T>,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    check_bound("delta", delta)?;
    check_bound("epsilon", epsilon)?;
    opts.engine.validate()?;
    let epsilon = bound(epsilon);
    let residual = move |r: &IntervalTuple<T>, s: &IntervalTuple<T>, n: &mut u64| {
        less(r.te, s.te, strict, n) && epsilon.is_none_or(|e| at_most(s.te, r.te.shift(e), n))
    };
    Ok(filtered(consumer, residual, |f| start_preceding_sweep(inputs, &opts.engine, strict, delta, f)))
}

/// Left overlap with `r` and `s` exchanged: `s.ts <= r.ts < s.te <= r.te`.
pub fn right_overlap<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    strict: bool,
    delta: Option<T>,
    epsilon: Option<T>,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    match opts.formulation {
        Formulation::StartPreceding => {
            let mut rev = ReversingConsumer(consumer);
            left_overlap(inputs.swapped(), opts, strict, delta, epsilon, &mut rev)
        }
        Formulation::EndFollowing => {
            check_bound("delta", delta)?;
            check_bound("epsilon", epsilon)?;
            opts.engine.validate()?;
            let delta = bound(delta);
            let residual = move |r: &IntervalTuple<T>, s: &IntervalTuple<T>, n: &mut u64| {
                less(s.ts, r.ts, strict, n) && delta.is_none_or(|d| at_most(r.ts, s.ts.shift(d), n))
            };
            Ok(filtered(consumer, residual, |f| end_following_sweep(inputs, &opts.engine, strict, epsilon, f)))
        }
    }
}

/// `r` inside `s`: `s.ts <= r.ts && r.te <= s.te`, `r.ts - s.ts <= delta`,
/// `s.te - r.te <= epsilon`. Strict uses `<` on both sides.
pub fn during<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    strict: bool,
    delta: Option<T>,
    epsilon: Option<T>,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    check_bound("delta", delta)?;
    check_bound("epsilon", epsilon)?;
    opts.engine.validate()?;
    let (delta, epsilon) = (bound(delta), bound(epsilon));
    // The sweep runs with s as the outer relation; the reversing consumer
    // restores (r, s) before the residual sees the pair.
    match opts.formulation {
        Formulation::StartPreceding => {
            let residual = move |r: &IntervalTuple<T>, s: &IntervalTuple<T>, n: &mut u64| {
                less(r.te, s.te, strict, n) && epsilon.is_none_or(|e| at_most(s.te, r.te.shift(e), n))
            };
            let mut f = FilteringConsumer::new(residual, consumer);
            let mut stats = {
                let mut rev = ReversingConsumer(&mut f);
                start_preceding_sweep(inputs.swapped(), &opts.engine, strict, delta, &mut rev)
            };
            stats.comparison_count += f.comparisons();
            Ok(stats)
        }
        Formulation::EndFollowing => {
            let residual = move |r: &IntervalTuple<T>, s: &IntervalTuple<T>, n: &mut u64| {
                less(s.ts, r.ts, strict, n) && delta.is_none_or(|d| at_most(r.ts, s.ts.shift(d), n))
            };
            let mut f = FilteringConsumer::new(residual, consumer);
            let mut stats = {
                let mut rev = ReversingConsumer(&mut f);
                end_following_sweep(inputs.swapped(), &opts.engine, strict, epsilon, &mut rev)
            };
            stats.comparison_count += f.comparisons();
            Ok(stats)
        }
    }
}

/// `s` inside `r`: `r.ts <= s.ts && s.te <= r.te`, `s.ts - r.ts <= delta`,
/// `r.te - s.te <= epsilon`.
pub fn reverse_during<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    strict: bool,
    delta: Option<T>,
    epsilon: Option<T>,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    match opts.formulation {
        Formulation::StartPreceding => {
            check_bound("delta", delta)?;
            check_bound("epsilon", epsilon)?;
            opts.engine.validate()?;
            let epsilon = bound(epsilon);
            let residual = move |r: &IntervalTuple<T>, s: &IntervalTuple<T>, n: &mut u64| {
                less(s.te, r.te, strict, n) && epsilon.is_none_or(|e| at_most(r.te, s.te.shift(e), n))
            };
            Ok(filtered(consumer, residual, |f| start_preceding_sweep(inputs, &opts.engine, strict, delta, f)))
        }
        Formulation::EndFollowing => {
            let mut rev = ReversingConsumer(consumer);
            during(inputs.swapped(), opts, strict, delta, epsilon, &mut rev)
        }
    }
}

/// Sweep over `[ts, ts + 1)` against starts of `s`, so only equal starts meet.
fn equal_starts_sweep<T, C>(inputs: JoinInputs<'_, T>, engine: &EngineConfig, consumer: &mut C) -> JoinStats
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    let starts = || IndexIterator::new(inputs.idx_r).filter_kind(Start);
    let it_r = starts().merge(starts().shift(T::one(), End));
    let it_s = IndexIterator::new(inputs.idx_s).filter_kind(Start);
    run_sweep(engine, inputs.r, inputs.s, it_r, it_s, ComparatorKind::NonStrict, consumer)
}

/// `r.ts == s.ts && r.te == s.te`.
pub fn equals_join<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    opts.engine.validate()?;
    let residual = |r: &IntervalTuple<T>, s: &IntervalTuple<T>, n: &mut u64| {
        *n += 1;
        r.te == s.te
    };
    Ok(filtered(consumer, residual, |f| equal_starts_sweep(inputs, &opts.engine, f)))
}

/// `r.ts == s.ts && r.te < s.te`.
pub fn starts_join<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    opts.engine.validate()?;
    let residual = |r: &IntervalTuple<T>, s: &IntervalTuple<T>, n: &mut u64| less(r.te, s.te, true, n);
    Ok(filtered(consumer, residual, |f| equal_starts_sweep(inputs, &opts.engine, f)))
}

/// `s.ts < r.ts && r.te == s.te`.
pub fn finishes_join<T, C>(
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    opts.engine.validate()?;
    let ends = || IndexIterator::new(inputs.idx_r).filter_kind(End);
    let it_r = ends().shift(T::zero() - T::one(), Start).merge(ends());
    let it_s = IndexIterator::new(inputs.idx_s).filter_kind(End);
    let residual = |r: &IntervalTuple<T>, s: &IntervalTuple<T>, n: &mut u64| less(s.ts, r.ts, true, n);
    Ok(filtered(consumer, residual, |f| {
        run_sweep(&opts.engine, inputs.r, inputs.s, it_r, it_s, ComparatorKind::Strict, f)
    }))
}

/// Dispatches `spec` to its operator over prebuilt indexes.
pub fn run_join_with<T, C>(
    spec: &PredicateSpec<T>,
    inputs: JoinInputs<'_, T>,
    opts: &JoinOptions,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    C: Consumer<T> + ?Sized,
{
    use PredicateKind::*;
    spec.validate()?;
    let (d, e) = (spec.delta, spec.epsilon);
    let zero = T::zero();
    let swapped = inputs.swapped();
    let mut rev = ReversingConsumer(&mut *consumer);
    match spec.relation {
        StartPreceding => start_preceding(inputs, opts, false, d, consumer),
        StrictStartPreceding => start_preceding(inputs, opts, true, d, consumer),
        ReverseStartPreceding => start_preceding(swapped, opts, false, d, &mut rev),
        EndFollowing => end_following(inputs, opts, false, e, consumer),
        StrictEndFollowing => end_following(inputs, opts, true, e, consumer),
        ReverseEndFollowing => end_following(swapped, opts, false, e, &mut rev),
        Before => general_before(inputs, opts, zero, d, consumer),
        After => general_before(swapped, opts, zero, d, &mut rev),
        AllenBefore => general_before(inputs, opts, T::one(), None, consumer),
        AllenAfter => general_before(swapped, opts, T::one(), None, &mut rev),
        Meets => meets(inputs, opts, consumer),
        MetBy => meets(swapped, opts, &mut rev),
        LeftOverlap => left_overlap(inputs, opts, false, d, e, consumer),
        RightOverlap => right_overlap(inputs, opts, false, d, e, consumer),
        Overlaps => left_overlap(inputs, opts, true, None, None, consumer),
        OverlappedBy => right_overlap(inputs, opts, true, None, None, consumer),
        During => during(inputs, opts, false, d, e, consumer),
        ReverseDuring => reverse_during(inputs, opts, false, d, e, consumer),
        AllenDuring => during(inputs, opts, true, None, None, consumer),
        Contains => reverse_during(inputs, opts, true, None, None, consumer),
        Equals => equals_join(inputs, opts, consumer),
        Starts => starts_join(inputs, opts, consumer),
        StartedBy => starts_join(swapped, opts, &mut rev),
        Finishes => finishes_join(inputs, opts, consumer),
        FinishedBy => finishes_join(swapped, opts, &mut rev),
    }
}

/// Builds both indexes, runs `spec` and collects the pairs.
pub fn run_join<T: TimePoint>(
    spec: &PredicateSpec<T>,
    rel_r: &Relation<T>,
    rel_s: &Relation<T>,
    opts: &JoinOptions,
) -> Result<JoinOutcome<T>, JoinError> {
    let idx_r = EndpointIndex::build(rel_r);
    let idx_s = EndpointIndex::build(rel_s);
    let mut out = PairCollector::new();
    let stats = run_join_with(spec, JoinInputs::new(rel_r, rel_s, &idx_r, &idx_s), opts, &mut out)?;
    Ok(JoinOutcome { pairs: out.pairs, stats })
}

/// Runs a start preceding or end following join (relaxed bounds) over
/// arbitrary sorted endpoint sources, such as streams.
///
/// `it_r` and `it_s` must deliver every endpoint of their relation.
pub fn join_sources<T, IR, IS, C>(
    relation: PredicateKind,
    rel_r: &Relation<T>,
    rel_s: &Relation<T>,
    it_r: IR,
    it_s: IS,
    opts: &JoinOptions,
    consumer: &mut C,
) -> Result<JoinStats, JoinError>
where
    T: TimePoint,
    IR: EndpointIterator<T>,
    IS: EndpointIterator<T>,
    C: Consumer<T> + ?Sized,
{
    opts.engine.validate()?;
    let (kind, comp) = match relation {
        PredicateKind::StartPreceding => (Start, ComparatorKind::NonStrict),
        PredicateKind::StrictStartPreceding => (Start, ComparatorKind::Strict),
        PredicateKind::EndFollowing => (End, ComparatorKind::Strict),
        PredicateKind::StrictEndFollowing => (End, ComparatorKind::NonStrict),
        other => return Err(JoinError::NotStreamable(other)),
    };
    Ok(run_sweep(&opts.engine, rel_r, rel_s, it_r, it_s.filter_kind(kind), comp, consumer))
}

/// Result of a partitioned run.
#[derive(Clone, Debug, Default)]
pub struct PartitionedOutcome<T> {
    /// Pairs in original tuple ids.
    pub pairs: Vec<ResultPair<T>>,
    pub per_partition: Vec<JoinStats>,
}

impl<T> PartitionedOutcome<T> {
    pub fn pair_set(&self) -> BTreeSet<(TupleId, TupleId)> {
        pair_set(&self.pairs)
    }

    pub fn total_stats(&self) -> JoinStats {
        self.per_partition.iter().copied().sum()
    }
}

/// Splits `rel_r` into `k` partitions and joins each with all of `rel_s`
/// on its own thread.
///
/// `r` tuples are ordered by start and dealt round-robin, so each partition
/// covers the whole timeline with about `1/k` of the active tuples.
pub fn partitioned_join<T: TimePoint>(
    spec: &PredicateSpec<T>,
    rel_r: &Relation<T>,
    rel_s: &Relation<T>,
    k: usize,
    opts: &JoinOptions,
) -> Result<PartitionedOutcome<T>, JoinError> {
    if k == 0 {
        return Err(JoinError::ZeroPartitions);
    }
    spec.validate()?;
    opts.engine.validate()?;

    let mut order: Vec<&IntervalTuple<T>> = rel_r.iter().collect();
    order.sort_by_key(|t| t.ts);
    let mut parts: Vec<(Relation<T>, Vec<TupleId>)> = Vec::with_capacity(k);
    for p in 0..k {
        let members: Vec<&IntervalTuple<T>> = order.iter().skip(p).step_by(k).copied().collect();
        let rel =
            Relation::new_unchecked(format!("{}#{p}", rel_r.name()), members.iter().map(|t| (t.ts, t.te, t.payload)));
        parts.push((rel, members.iter().map(|t| t.id).collect()));
    }

    let idx_s = EndpointIndex::build(rel_s);
    let results: Vec<Result<JoinOutcome<T>, JoinError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = parts
            .iter()
            .map(|(part, _)| {
                let idx_s = &idx_s;
                scope.spawn(move || {
                    let idx_p = EndpointIndex::build(part);
                    let mut out = PairCollector::new();
                    let stats = run_join_with(spec, JoinInputs::new(part, rel_s, &idx_p, idx_s), opts, &mut out)?;
                    Ok(JoinOutcome { pairs: out.pairs, stats })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("partition worker panicked")).collect()
    });

    let mut outcome = PartitionedOutcome::default();
    for (result, (_, original_ids)) in results.into_iter().zip(&parts) {
        let part = result?;
        outcome.per_partition.push(part.stats);
        outcome.pairs.extend(part.pairs.into_iter().map(|p| ResultPair { r_id: original_ids[p.r_id.index()], ..p }));
    }
    Ok(outcome)
}
