//! Iterators that collapse a tuple's duplicated endpoint into one.
//!
//! A parameterized join merges a tuple's original endpoints with a shifted
//! copy of one of them, so the tuple arrives with three endpoints. For the
//! duplicated kind only one may reach the sweep:
//!
//! * [`FirstEndIterator`] keeps the earlier of two ends, realizing
//!   `T_e -> min(T_e, T_s + delta + 1)`;
//! * [`SecondStartIterator`] keeps the later of two starts, realizing
//!   `T_s -> max(T_s, T_e - epsilon - 1)`.
//!
//! Endpoints of the other kind pass through untouched. Ids are tracked in a
//! set only between a tuple's first and second occurrence.

use std::collections::HashSet;

use crate::endpoint::{Endpoint, EndpointKind};
use crate::iter::EndpointIterator;
use crate::relation::TupleId;
use crate::time::TimePoint;

/// Emits the first `End` of every tuple and swallows the second.
#[derive(Clone, Debug)]
pub struct FirstEndIterator<T, I> {
    src: I,
    seen_once: HashSet<TupleId>,
    _time: std::marker::PhantomData<T>,
}

impl<T: TimePoint, I: EndpointIterator<T>> FirstEndIterator<T, I> {
    pub fn new(src: I) -> Self {
        let mut it = FirstEndIterator { src, seen_once: HashSet::new(), _time: std::marker::PhantomData };
        it.settle();
        it
    }

    /// Number of tuples whose second end has not arrived yet.
    pub fn open_tuples(&self) -> usize {
        self.seen_once.len()
    }

    fn settle(&mut self) {
        while !self.src.is_finished() {
            let e = self.src.endpoint();
            if e.kind != EndpointKind::End {
                return;
            }
            if self.seen_once.remove(&e.tuple_id) {
                self.src.advance();
            } else {
                self.seen_once.insert(e.tuple_id);
                return;
            }
        }
    }
}

impl<T: TimePoint, I: EndpointIterator<T>> EndpointIterator<T> for FirstEndIterator<T, I> {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        self.src.endpoint()
    }

    fn advance(&mut self) {
        self.src.advance();
        self.settle();
    }

    #[inline]
    fn is_finished(&mut self) -> bool {
        self.src.is_finished()
    }
}

/// Swallows the first `Start` of every tuple and emits the second.
#[derive(Clone, Debug)]
pub struct SecondStartIterator<T, I> {
    src: I,
    seen_once: HashSet<TupleId>,
    _time: std::marker::PhantomData<T>,
}

impl<T: TimePoint, I: EndpointIterator<T>> SecondStartIterator<T, I> {
    pub fn new(src: I) -> Self {
        let mut it = SecondStartIterator { src, seen_once: HashSet::new(), _time: std::marker::PhantomData };
        it.settle();
        it
    }

    /// Number of tuples whose second start has not arrived yet.
    pub fn open_tuples(&self) -> usize {
        self.seen_once.len()
    }

    fn settle(&mut self) {
        while !self.src.is_finished() {
            let e = self.src.endpoint();
            if e.kind != EndpointKind::Start || self.seen_once.remove(&e.tuple_id) {
                return;
            }
            self.seen_once.insert(e.tuple_id);
            self.src.advance();
        }
    }
}

impl<T: TimePoint, I: EndpointIterator<T>> EndpointIterator<T> for SecondStartIterator<T, I> {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        self.src.endpoint()
    }

    fn advance(&mut self) {
        self.src.advance();
        self.settle();
    }

    #[inline]
    fn is_finished(&mut self) -> bool {
        self.src.is_finished()
    }
}
