use std::cmp::Ordering;

use crate::endpoint::{compare_endpoints, Endpoint};
use crate::iter::EndpointIterator;
use crate::time::TimePoint;

/// Sorted interleaving of two sorted iterators.
///
/// The first source is taken only when its endpoint is strictly smaller, so
/// on equal endpoints the second source is emitted first.
#[derive(Clone, Debug)]
pub struct MergingIterator<T, A, B> {
    first: A,
    second: B,
    current: Option<Endpoint<T>>,
}

impl<T: TimePoint, A: EndpointIterator<T>, B: EndpointIterator<T>> MergingIterator<T, A, B> {
    pub fn new(first: A, second: B) -> Self {
        let mut it = MergingIterator { first, second, current: None };
        it.pull();
        it
    }

    #[inline]
    fn pull(&mut self) {
        let first_done = self.first.is_finished();
        let second_done = self.second.is_finished();
        self.current = match (first_done, second_done) {
            (true, true) => None,
            (false, true) => Some(take(&mut self.first)),
            (true, false) => Some(take(&mut self.second)),
            (false, false) => {
                if compare_endpoints(&self.first.endpoint(), &self.second.endpoint()) == Ordering::Less {
                    Some(take(&mut self.first))
                } else {
                    Some(take(&mut self.second))
                }
            }
        };
    }
}

#[inline]
fn take<T: TimePoint, I: EndpointIterator<T>>(it: &mut I) -> Endpoint<T> {
    let e = it.endpoint();
    it.advance();
    e
}

impl<T: TimePoint, A: EndpointIterator<T>, B: EndpointIterator<T>> EndpointIterator<T> for MergingIterator<T, A, B> {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        self.current.expect("endpoint() called on a finished merging iterator")
    }

    #[inline]
    fn advance(&mut self) {
        self.pull();
    }

    #[inline]
    fn is_finished(&mut self) -> bool {
        self.current.is_none()
    }
}
