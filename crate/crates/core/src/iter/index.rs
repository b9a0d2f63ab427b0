use crate::endpoint::{Endpoint, EndpointIndex};
use crate::iter::EndpointIterator;
use crate::time::TimePoint;

/// Cursor over a physical [`EndpointIndex`].
#[derive(Clone, Debug)]
pub struct IndexIterator<'a, T> {
    events: &'a [Endpoint<T>],
    pos: usize,
}

impl<'a, T: TimePoint> IndexIterator<'a, T> {
    pub fn new(index: &'a EndpointIndex<T>) -> Self {
        Self::over(index.events())
    }

    /// Cursor over a sorted slice.
    pub fn over(events: &'a [Endpoint<T>]) -> Self {
        debug_assert!(crate::endpoint::is_sorted(events));
        IndexIterator { events, pos: 0 }
    }
}

impl<T: TimePoint> EndpointIterator<T> for IndexIterator<'_, T> {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        self.events[self.pos]
    }

    #[inline]
    fn advance(&mut self) {
        self.pos += 1;
    }

    #[inline]
    fn is_finished(&mut self) -> bool {
        self.pos >= self.events.len()
    }
}
