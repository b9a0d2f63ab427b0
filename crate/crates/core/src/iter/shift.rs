use std::marker::PhantomData;

use crate::endpoint::{Endpoint, EndpointKind};
use crate::iter::EndpointIterator;
use crate::time::TimePoint;

/// Shifts timestamps by a constant and relabels the endpoint kind.
///
/// Order is preserved when the source is sorted: the shift is monotone and
/// every output endpoint carries the same kind.
#[derive(Clone, Debug)]
pub struct ShiftingIterator<T, I> {
    src: I,
    delta: T,
    kind: EndpointKind,
    _time: PhantomData<T>,
}

impl<T: TimePoint, I: EndpointIterator<T>> ShiftingIterator<T, I> {
    pub fn new(src: I, delta: T, kind: EndpointKind) -> Self {
        ShiftingIterator { src, delta, kind, _time: PhantomData }
    }
}

impl<T: TimePoint, I: EndpointIterator<T>> EndpointIterator<T> for ShiftingIterator<T, I> {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        let e = self.src.endpoint();
        Endpoint::new(e.timestamp.shift(self.delta), self.kind, e.tuple_id)
    }

    #[inline]
    fn advance(&mut self) {
        self.src.advance();
    }

    #[inline]
    fn is_finished(&mut self) -> bool {
        self.src.is_finished()
    }
}
