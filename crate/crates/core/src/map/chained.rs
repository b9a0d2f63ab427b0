use std::collections::HashMap;
use std::ptr;

use crate::relation::TupleId;

struct Node<V> {
    key: TupleId,
    value: V,
    list_prev: *mut Node<V>,
    list_next: *mut Node<V>,
}

/// Linked hash map: every entry is a separate heap allocation, threaded on a
/// doubly-linked list that a scan follows pointer by pointer.
pub struct ChainedMapBaseline<V> {
    index: HashMap<TupleId, Box<Node<V>>>,
    head: *mut Node<V>,
    tail: *mut Node<V>,
}

impl<V> Default for ChainedMapBaseline<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V> ChainedMapBaseline<V> {
    pub fn new() -> Self {
        ChainedMapBaseline { index: HashMap::new(), head: ptr::null_mut(), tail: ptr::null_mut() }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Appends a new entry at the list tail.
    pub fn insert(&mut self, key: TupleId, value: V) {
        debug_assert!(!self.index.contains_key(&key), "duplicate key {key} inserted into active set");
        let mut node = Box::new(Node { key, value, list_prev: self.tail, list_next: ptr::null_mut() });
        let raw: *mut Node<V> = &mut *node;
        if self.tail.is_null() {
            self.head = raw;
        } else {
            // SAFETY: `tail` points at a node owned by `index`.
            unsafe { (*self.tail).list_next = raw };
        }
        self.tail = raw;
        if let Some(old) = self.index.insert(key, node) {
            // release builds: keep the list consistent by unlinking the
            // replaced node
            self.unlink(&old);
        }
    }

    pub fn remove(&mut self, key: TupleId) -> bool {
        match self.index.remove(&key) {
            Some(node) => {
                self.unlink(&node);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, key: TupleId) -> bool {
        self.index.contains_key(&key)
    }

    pub fn get(&self, key: TupleId) -> Option<&V> {
        self.index.get(&key).map(|n| &n.value)
    }

    /// Visits values in list order (insertion order).
    #[inline]
    pub fn scan<F: FnMut(&V)>(&self, mut visit: F) {
        let mut cur = self.head;
        while !cur.is_null() {
            // SAFETY: every list node is owned by `index` and outlives `&self`.
            let node = unsafe { &*cur };
            visit(&node.value);
            cur = node.list_next;
        }
    }

    pub fn keys(&self) -> Vec<TupleId> {
        let mut keys = Vec::with_capacity(self.len());
        let mut cur = self.head;
        while !cur.is_null() {
            // SAFETY: as in `scan`.
            let node = unsafe { &*cur };
            keys.push(node.key);
            cur = node.list_next;
        }
        keys
    }

    pub fn clear(&mut self) {
        self.index.clear();
        self.head = ptr::null_mut();
        self.tail = ptr::null_mut();
    }

    fn unlink(&mut self, node: &Node<V>) {
        // SAFETY: neighbours are live nodes owned by `index`; `node` itself has
        // already been taken out of `index` by the caller.
        unsafe {
            if node.list_prev.is_null() {
                self.head = node.list_next;
            } else {
                (*node.list_prev).list_next = node.list_next;
            }
            if node.list_next.is_null() {
                self.tail = node.list_prev;
            } else {
                (*node.list_next).list_prev = node.list_prev;
            }
        }
    }
}
