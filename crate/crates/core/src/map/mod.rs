//! Active tuple set storage.
//!
//! The sweep needs `insert`, `remove` and a full scan. [`GaplessHashMap`]
//! keeps entries contiguous so a scan is a sequential read;
//! [`ChainedMapBaseline`] is a linked hash map kept for comparison.

mod chained;
mod gapless;

pub use chained::ChainedMapBaseline;
pub use gapless::{BackLink, GaplessHashMap};

use crate::relation::TupleId;

/// Map from tuple id to value with a cheap full scan.
pub trait ActiveSet<V> {
    /// Inserts a fresh key. Inserting a present key is a contract violation.
    fn insert(&mut self, key: TupleId, value: V);

    /// Removes `key`, returning whether it was present.
    fn remove(&mut self, key: TupleId) -> bool;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Calls `visit` once per live value.
    fn scan<F: FnMut(&V)>(&self, visit: F);

    fn clear(&mut self);
}

impl<V> ActiveSet<V> for GaplessHashMap<V> {
    #[inline]
    fn insert(&mut self, key: TupleId, value: V) {
        GaplessHashMap::insert(self, key, value)
    }

    #[inline]
    fn remove(&mut self, key: TupleId) -> bool {
        GaplessHashMap::remove(self, key)
    }

    #[inline]
    fn len(&self) -> usize {
        GaplessHashMap::len(self)
    }

    #[inline]
    fn scan<F: FnMut(&V)>(&self, visit: F) {
        GaplessHashMap::scan(self, visit)
    }

    fn clear(&mut self) {
        GaplessHashMap::clear(self)
    }
}

impl<V> ActiveSet<V> for ChainedMapBaseline<V> {
    #[inline]
    fn insert(&mut self, key: TupleId, value: V) {
        ChainedMapBaseline::insert(self, key, value)
    }

    #[inline]
    fn remove(&mut self, key: TupleId) -> bool {
        ChainedMapBaseline::remove(self, key)
    }

    #[inline]
    fn len(&self) -> usize {
        ChainedMapBaseline::len(self)
    }

    #[inline]
    fn scan<F: FnMut(&V)>(&self, visit: F) {
        ChainedMapBaseline::scan(self, visit)
    }

    fn clear(&mut self) {
        ChainedMapBaseline::clear(self)
    }
}
