//! Endpoint iterators.
//!
//! An [`EndpointIterator`] is a forward cursor over a sorted endpoint
//! stream. Index iterators read a physical [`EndpointIndex`]; the wrapping
//! iterators filter, shift, merge and deduplicate other iterators, so the
//! timestamp rewrites a join needs are applied on the fly instead of
//! materializing rewritten relations.
//!
//! Pipelines are built with [`EndpointIteratorExt`]:
//!
//! ```
//! use sweepjoin::{EndpointIndex, EndpointKind, Relation};
//! use sweepjoin::iter::{EndpointIteratorExt, IndexIterator};
//!
//! let r = Relation::<i64>::new("r", [(0, 1, 0), (1, 3, 0), (2, 5, 0)]).unwrap();
//! let idx = EndpointIndex::build(&r);
//! // T_e -> T_s, T_e + 1 -> T_e
//! let meets = IndexIterator::new(&idx)
//!     .filter_kind(EndpointKind::End)
//!     .shift(0, EndpointKind::Start)
//!     .merge(IndexIterator::new(&idx).filter_kind(EndpointKind::End).shift(1, EndpointKind::End));
//! let ts: Vec<i64> = meets.endpoints().map(|e| e.timestamp).collect();
//! assert_eq!(ts, [1, 2, 3, 4, 5, 6]);
//! ```
//!
//! [`EndpointIndex`]: crate::EndpointIndex

mod dedup;
mod filter;
mod index;
mod merge;
mod shift;
mod stream;

pub use dedup::{FirstEndIterator, SecondStartIterator};
pub use filter::FilteringIterator;
pub use index::IndexIterator;
pub use merge::MergingIterator;
pub use shift::ShiftingIterator;
pub use stream::{stream_source, StreamError, StreamFeed, StreamPoll, StreamSourceIterator};

use crate::endpoint::{Endpoint, EndpointIndex, EndpointKind};
use crate::time::TimePoint;

/// Forward cursor over a sorted endpoint stream.
///
/// `endpoint` may only be called after `is_finished` has returned `false`
/// for the current position.
pub trait EndpointIterator<T: TimePoint> {
    /// The endpoint under the cursor.
    fn endpoint(&self) -> Endpoint<T>;

    /// Moves to the next endpoint.
    fn advance(&mut self);

    /// Whether the cursor is past the last endpoint. Takes `&mut self` so
    /// that streaming sources can wait for their next event here.
    fn is_finished(&mut self) -> bool;
}

impl<T: TimePoint, I: EndpointIterator<T> + ?Sized> EndpointIterator<T> for &mut I {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        (**self).endpoint()
    }

    #[inline]
    fn advance(&mut self) {
        (**self).advance()
    }

    #[inline]
    fn is_finished(&mut self) -> bool {
        (**self).is_finished()
    }
}

impl<T: TimePoint, I: EndpointIterator<T> + ?Sized> EndpointIterator<T> for Box<I> {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        (**self).endpoint()
    }

    #[inline]
    fn advance(&mut self) {
        (**self).advance()
    }

    #[inline]
    fn is_finished(&mut self) -> bool {
        (**self).is_finished()
    }
}

/// Combinators for building iterator pipelines.
pub trait EndpointIteratorExt<T: TimePoint>: EndpointIterator<T> + Sized {
    /// Keeps only endpoints of `kind`.
    fn filter_kind(self, kind: EndpointKind) -> FilteringIterator<Self> {
        FilteringIterator::new(self, kind)
    }

    /// Adds `delta` to every timestamp and relabels every endpoint as `kind`.
    fn shift(self, delta: T, kind: EndpointKind) -> ShiftingIterator<T, Self> {
        ShiftingIterator::new(self, delta, kind)
    }

    /// Interleaves with `other`; `other` wins ties.
    fn merge<B: EndpointIterator<T>>(self, other: B) -> MergingIterator<T, Self, B> {
        MergingIterator::new(self, other)
    }

    fn first_end(self) -> FirstEndIterator<T, Self> {
        FirstEndIterator::new(self)
    }

    fn second_start(self) -> SecondStartIterator<T, Self> {
        SecondStartIterator::new(self)
    }

    /// Adapts the cursor into a standard [`Iterator`].
    fn endpoints(self) -> Endpoints<T, Self> {
        Endpoints { inner: self, _time: std::marker::PhantomData }
    }
}

impl<T: TimePoint, I: EndpointIterator<T>> EndpointIteratorExt<T> for I {}

/// Standard iterator view of an [`EndpointIterator`].
pub struct Endpoints<T, I> {
    inner: I,
    _time: std::marker::PhantomData<T>,
}

impl<T: TimePoint, I: EndpointIterator<T>> Iterator for Endpoints<T, I> {
    type Item = Endpoint<T>;

    fn next(&mut self) -> Option<Endpoint<T>> {
        if self.inner.is_finished() {
            return None;
        }
        let e = self.inner.endpoint();
        self.inner.advance();
        Some(e)
    }
}

pub fn index_iterator<T: TimePoint>(index: &EndpointIndex<T>) -> IndexIterator<'_, T> {
    IndexIterator::new(index)
}

pub fn filtering_iterator<T: TimePoint, I: EndpointIterator<T>>(src: I, kind: EndpointKind) -> FilteringIterator<I> {
    FilteringIterator::new(src, kind)
}

pub fn shifting_iterator<T: TimePoint, I: EndpointIterator<T>>(
    src: I,
    delta: T,
    new_kind: EndpointKind,
) -> ShiftingIterator<T, I> {
    ShiftingIterator::new(src, delta, new_kind)
}

pub fn merging_iterator<T: TimePoint, A: EndpointIterator<T>, B: EndpointIterator<T>>(
    a: A,
    b: B,
) -> MergingIterator<T, A, B> {
    MergingIterator::new(a, b)
}

pub fn first_end_iterator<T: TimePoint, I: EndpointIterator<T>>(src: I) -> FirstEndIterator<T, I> {
    FirstEndIterator::new(src)
}

pub fn second_start_iterator<T: TimePoint, I: EndpointIterator<T>>(src: I) -> SecondStartIterator<T, I> {
    SecondStartIterator::new(src)
}
