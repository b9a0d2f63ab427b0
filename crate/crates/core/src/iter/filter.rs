use crate::endpoint::{Endpoint, EndpointKind};
use crate::iter::EndpointIterator;
use crate::time::TimePoint;

/// Passes through only endpoints of one kind.
#[derive(Clone, Debug)]
pub struct FilteringIterator<I> {
    src: I,
    kind: EndpointKind,
}

impl<I> FilteringIterator<I> {
    pub fn new<T: TimePoint>(src: I, kind: EndpointKind) -> Self
    where
        I: EndpointIterator<T>,
    {
        let mut it = FilteringIterator { src, kind };
        it.skip_other_kind();
        it
    }

    #[inline]
    fn skip_other_kind<T: TimePoint>(&mut self)
    where
        I: EndpointIterator<T>,
    {
        while !self.src.is_finished() && self.src.endpoint().kind != self.kind {
            self.src.advance();
        }
    }
}

impl<T: TimePoint, I: EndpointIterator<T>> EndpointIterator<T> for FilteringIterator<I> {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        self.src.endpoint()
    }

    #[inline]
    fn advance(&mut self) {
        self.src.advance();
        self.skip_other_kind();
    }

    #[inline]
    fn is_finished(&mut self) -> bool {
        self.src.is_finished()
    }
}
