//! Reference semantics: direct predicate evaluation and a nested-loop join.
//!
//! Nothing here touches endpoints, iterators or the sweep. Arithmetic is done
//! in `i128` so bounds never overflow.

use std::collections::BTreeSet;

use crate::predicate::{PredicateKind, PredicateSpec};
use crate::relation::{IntervalTuple, Relation, TupleId};
use crate::time::TimePoint;

/// Whether `(r, s)` satisfies `spec`.
pub fn eval_predicate<T: TimePoint>(spec: &PredicateSpec<T>, r: &IntervalTuple<T>, s: &IntervalTuple<T>) -> bool {
    let delta = spec.delta.map(TimePoint::widen);
    let epsilon = spec.epsilon.map(TimePoint::widen);
    holds(spec.relation, delta, epsilon, Span::of(r), Span::of(s))
}

#[derive(Clone, Copy)]
struct Span {
    ts: i128,
    te: i128,
}

impl Span {
    fn of<T: TimePoint>(t: &IntervalTuple<T>) -> Self {
        Span { ts: t.ts.widen(), te: t.te.widen() }
    }
}

fn within(bound: Option<i128>, distance: i128) -> bool {
    bound.is_none_or(|b| distance <= b)
}

fn holds(kind: PredicateKind, delta: Option<i128>, epsilon: Option<i128>, r: Span, s: Span) -> bool {
    use PredicateKind::*;
    match kind {
        StartPreceding => r.ts <= s.ts && s.ts < r.te && within(delta, s.ts - r.ts),
        StrictStartPreceding => r.ts < s.ts && s.ts < r.te && within(delta, s.ts - r.ts),
        EndFollowing => r.ts < s.te && s.te <= r.te && within(epsilon, r.te - s.te),
        StrictEndFollowing => r.ts < s.te && s.te < r.te && within(epsilon, r.te - s.te),
        Before => r.te <= s.ts && within(delta, s.ts - r.te),
        LeftOverlap => {
            r.ts <= s.ts && s.ts < r.te && r.te <= s.te && within(delta, s.ts - r.ts) && within(epsilon, s.te - r.te)
        }
        During => s.ts <= r.ts && r.te <= s.te && within(delta, r.ts - s.ts) && within(epsilon, s.te - r.te),

        AllenBefore => r.te < s.ts,
        Meets => r.te == s.ts,
        Overlaps => r.ts < s.ts && s.ts < r.te && r.te < s.te,
        AllenDuring => s.ts < r.ts && r.te < s.te,
        Starts => r.ts == s.ts && r.te < s.te,
        Finishes => s.ts < r.ts && r.te == s.te,
        Equals => r.ts == s.ts && r.te == s.te,

        ReverseStartPreceding => holds(StartPreceding, delta, epsilon, s, r),
        ReverseEndFollowing => holds(EndFollowing, delta, epsilon, s, r),
        After => holds(Before, delta, epsilon, s, r),
        RightOverlap => holds(LeftOverlap, delta, epsilon, s, r),
        ReverseDuring => holds(During, delta, epsilon, s, r),
        AllenAfter => holds(AllenBefore, delta, epsilon, s, r),
        MetBy => holds(Meets, delta, epsilon, s, r),
        OverlappedBy => holds(Overlaps, delta, epsilon, s, r),
        Contains => holds(AllenDuring, delta, epsilon, s, r),
        StartedBy => holds(Starts, delta, epsilon, s, r),
        FinishedBy => holds(Finishes, delta, epsilon, s, r),
    }
}

/// All `(r.id, s.id)` with `eval_predicate(spec, r, s)`. Quadratic.
pub fn nested_loop_join<T: TimePoint>(
    spec: &PredicateSpec<T>,
    rel_r: &Relation<T>,
    rel_s: &Relation<T>,
) -> BTreeSet<(TupleId, TupleId)> {
    let mut out = BTreeSet::new();
    for r in rel_r.iter() {
        for s in rel_s.iter() {
            if eval_predicate(spec, r, s) {
                out.insert((r.id, s.id));
            }
        }
    }
    out
}
