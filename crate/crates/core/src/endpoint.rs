//! Endpoints, their total order, and the Endpoint Index.

use std::cmp::Ordering;
use std::fmt;

use crate::relation::{Relation, TupleId};
use crate::time::TimePoint;

/// Endpoint type. The discriminants make `End < Start` at equal timestamps,
/// which is what half-open intervals require.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum EndpointKind {
    End = 0,
    Start = 1,
}

impl fmt::Display for EndpointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndpointKind::End => "end",
            EndpointKind::Start => "start",
        })
    }
}

/// One boundary of a tuple's validity interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Endpoint<T> {
    pub timestamp: T,
    pub kind: EndpointKind,
    pub tuple_id: TupleId,
}

impl<T: TimePoint> Endpoint<T> {
    pub fn new(timestamp: T, kind: EndpointKind, tuple_id: TupleId) -> Self {
        Endpoint { timestamp, kind, tuple_id }
    }

    pub fn start(timestamp: T, tuple_id: u32) -> Self {
        Self::new(timestamp, EndpointKind::Start, TupleId(tuple_id))
    }

    pub fn end(timestamp: T, tuple_id: u32) -> Self {
        Self::new(timestamp, EndpointKind::End, TupleId(tuple_id))
    }

    /// The sort key; `tuple_id` does not participate.
    #[inline]
    pub fn key(&self) -> (T, EndpointKind) {
        (self.timestamp, self.kind)
    }
}

impl<T: fmt::Display> fmt::Display for Endpoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}>", self.timestamp, self.kind, self.tuple_id)
    }
}

/// Orders endpoints by timestamp, then kind. Endpoints that differ only in
/// their tuple id compare `Equal`.
#[inline]
pub fn compare_endpoints<T: TimePoint>(a: &Endpoint<T>, b: &Endpoint<T>) -> Ordering {
    a.key().cmp(&b.key())
}

/// The `comp` argument of the sweep: decides whether the pending `r`
/// endpoint is handled before the pending `s` endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComparatorKind {
    /// `r < s`: on equal endpoints the `s` side goes first.
    Strict,
    /// `r <= s`: on equal endpoints the `r` side goes first.
    NonStrict,
}

impl ComparatorKind {
    #[inline]
    pub fn holds<T: TimePoint>(self, r: &Endpoint<T>, s: &Endpoint<T>) -> bool {
        match self {
            ComparatorKind::Strict => compare_endpoints(r, s) == Ordering::Less,
            ComparatorKind::NonStrict => compare_endpoints(r, s) != Ordering::Greater,
        }
    }

    /// Swaps `Strict` and `NonStrict`.
    pub fn flipped(self) -> Self {
        match self {
            ComparatorKind::Strict => ComparatorKind::NonStrict,
            ComparatorKind::NonStrict => ComparatorKind::Strict,
        }
    }
}

/// All `2n` endpoints of a relation in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EndpointIndex<T> {
    events: Vec<Endpoint<T>>,
}

impl<T: TimePoint> EndpointIndex<T> {
    /// Sorts all endpoints by key; ties keep tuple-id order.
    pub fn build(rel: &Relation<T>) -> Self {
        let mut events = Vec::with_capacity(rel.len() * 2);
        for t in rel.iter() {
            events.push(Endpoint::new(t.ts, EndpointKind::Start, t.id));
            events.push(Endpoint::new(t.te, EndpointKind::End, t.id));
        }
        // Equal keys never come from the same tuple, so breaking ties on the
        // id reproduces a stable sort of the id-ordered list.
        events.sort_unstable_by_key(|e| (e.timestamp, e.kind, e.tuple_id));
        EndpointIndex { events }
    }

    /// Wraps an already sorted event list.
    ///
    /// Returns `None` if `events` is not sorted.
    pub fn from_sorted(events: Vec<Endpoint<T>>) -> Option<Self> {
        is_sorted(&events).then_some(EndpointIndex { events })
    }

    pub fn events(&self) -> &[Endpoint<T>] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn into_events(self) -> Vec<Endpoint<T>> {
        self.events
    }
}

/// Builds the Endpoint Index of `rel`.
pub fn build_endpoint_index<T: TimePoint>(rel: &Relation<T>) -> EndpointIndex<T> {
    EndpointIndex::build(rel)
}

pub fn is_sorted<T: TimePoint>(events: &[Endpoint<T>]) -> bool {
    events.windows(2).all(|w| compare_endpoints(&w[0], &w[1]) != Ordering::Greater)
}
