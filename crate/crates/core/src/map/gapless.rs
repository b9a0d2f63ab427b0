use crate::relation::TupleId;

const NONE: u32 = u32::MAX;
const MIN_BUCKETS: usize = 16;
/// Odd multiplier for multiplicative hashing. The bucket is taken from the
/// low bits of the product, so keys congruent modulo the bucket count share
/// a bucket and dense ids spread perfectly.
const MULTIPLIER: u64 = 0x9E37_79B9_7F4A_7C15;

/// Where the forward reference to an element lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackLink {
    /// The bucket table cell with this index.
    Bucket(u32),
    /// The `bucket_next` field of the element at this position.
    Element(u32),
}

#[derive(Clone, Copy, Debug)]
struct Element {
    key: TupleId,
    bucket_next: u32,
    bucket_prev: BackLink,
}

/// Hash map whose live entries always occupy positions `[0, len)` of two
/// position-aligned arrays: chain metadata in `elements` and payloads in
/// `values`.
///
/// Insertion appends. Removal unlinks the element and moves the last entry
/// into the hole, repairing the references to the moved entry through its
/// `bucket_prev` back link. A scan reads `values` front to back and never
/// touches metadata.
#[derive(Clone, Debug)]
pub struct GaplessHashMap<V> {
    buckets: Vec<u32>,
    elements: Vec<Element>,
    values: Vec<V>,
}

impl<V> Default for GaplessHashMap<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V> GaplessHashMap<V> {
    pub fn new() -> Self {
        Self::with_capacity(0)
    }

    /// Sizes the bucket table so `capacity` entries fit without rehashing.
    pub fn with_capacity(capacity: usize) -> Self {
        let buckets = buckets_for(capacity);
        GaplessHashMap {
            buckets: vec![NONE; buckets],
            elements: Vec::with_capacity(capacity),
            values: Vec::with_capacity(capacity),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    /// Bucket a key hashes to under the current table size.
    #[inline]
    pub fn bucket_of(&self, key: TupleId) -> usize {
        ((key.0 as u64).wrapping_mul(MULTIPLIER) as usize) & (self.buckets.len() - 1)
    }

    /// Number of elements chained from `bucket`.
    pub fn chain_len(&self, bucket: usize) -> usize {
        let mut n = 0;
        let mut cur = self.buckets[bucket];
        while cur != NONE {
            n += 1;
            cur = self.elements[cur as usize].bucket_next;
        }
        n
    }

    /// Appends a new entry.
    ///
    /// `key` must not be present; this is checked in debug builds.
    pub fn insert(&mut self, key: TupleId, value: V) {
        debug_assert!(self.position(key).is_none(), "duplicate key {key} inserted into active set");
        if (self.elements.len() + 1) * 4 > self.buckets.len() * 3 {
            self.grow();
        }
        let pos = self.elements.len() as u32;
        let bucket = self.bucket_of(key);
        let head = self.buckets[bucket];
        if head != NONE {
            self.elements[head as usize].bucket_prev = BackLink::Element(pos);
        }
        self.elements.push(Element { key, bucket_next: head, bucket_prev: BackLink::Bucket(bucket as u32) });
        self.values.push(value);
        self.buckets[bucket] = pos;
    }

    /// Removes `key` if present. Missing keys are tolerated.
    pub fn remove(&mut self, key: TupleId) -> bool {
        let Some(pos) = self.position(key) else {
            return false;
        };
        let removed = self.elements[pos];
        self.set_forward(removed.bucket_prev, removed.bucket_next);
        if removed.bucket_next != NONE {
            self.elements[removed.bucket_next as usize].bucket_prev = removed.bucket_prev;
        }

        self.elements.swap_remove(pos);
        self.values.swap_remove(pos);
        if pos < self.elements.len() {
            // the former last entry now sits at `pos`
            let moved = self.elements[pos];
            self.set_forward(moved.bucket_prev, pos as u32);
            if moved.bucket_next != NONE {
                self.elements[moved.bucket_next as usize].bucket_prev = BackLink::Element(pos as u32);
            }
        }
        true
    }

    #[inline]
    pub fn contains(&self, key: TupleId) -> bool {
        self.position(key).is_some()
    }

    #[inline]
    pub fn get(&self, key: TupleId) -> Option<&V> {
        self.position(key).map(|p| &self.values[p])
    }

    /// Visits every value in storage order.
    #[inline]
    pub fn scan<F: FnMut(&V)>(&self, mut visit: F) {
        for v in &self.values {
            visit(v);
        }
    }

    /// Values in storage order.
    pub fn values(&self) -> &[V] {
        &self.values
    }

    /// Keys in storage order.
    pub fn keys(&self) -> impl Iterator<Item = TupleId> + '_ {
        self.elements.iter().map(|e| e.key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (TupleId, &V)> + '_ {
        self.elements.iter().map(|e| e.key).zip(self.values.iter())
    }

    /// Empties the map, keeping the bucket table size.
    pub fn clear(&mut self) {
        self.buckets.fill(NONE);
        self.elements.clear();
        self.values.clear();
    }

    /// The back link of `key`'s element, if present.
    pub fn back_link(&self, key: TupleId) -> Option<BackLink> {
        self.position(key).map(|p| self.elements[p].bucket_prev)
    }

    /// Storage position of `key`, if present.
    #[inline]
    pub fn position(&self, key: TupleId) -> Option<usize> {
        let mut cur = self.buckets[self.bucket_of(key)];
        while cur != NONE {
            let e = &self.elements[cur as usize];
            if e.key == key {
                return Some(cur as usize);
            }
            cur = e.bucket_next;
        }
        None
    }

    /// Audits the whole structure: array alignment, chain reachability,
    /// back-link consistency and key uniqueness.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.values.len() != self.elements.len() {
            return Err(format!("{} values vs {} elements", self.values.len(), self.elements.len()));
        }
        if !self.buckets.len().is_power_of_two() {
            return Err(format!("bucket count {} is not a power of two", self.buckets.len()));
        }
        let n = self.elements.len();
        let mut seen = vec![false; n];
        for (b, &head) in self.buckets.iter().enumerate() {
            let mut link = BackLink::Bucket(b as u32);
            let mut cur = head;
            while cur != NONE {
                let i = cur as usize;
                if i >= n {
                    return Err(format!("bucket {b} chain points past tail ({i} >= {n})"));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(format!("element {i} reachable twice"));
                }
                let e = &self.elements[i];
                if e.bucket_prev != link {
                    return Err(format!("element {i} back link {:?}, expected {link:?}", e.bucket_prev));
                }
                if self.bucket_of(e.key) != b {
                    return Err(format!("key {} chained in bucket {b}, hashes to {}", e.key, self.bucket_of(e.key)));
                }
                link = BackLink::Element(cur);
                cur = e.bucket_next;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(format!("element {i} (key {}) unreachable", self.elements[i].key));
        }
        // each element's back link leads back to it; this also makes keys
        // unique since lookups stop at the first match
        for (i, e) in self.elements.iter().enumerate() {
            let forward = match e.bucket_prev {
                BackLink::Bucket(b) => self.buckets[b as usize],
                BackLink::Element(p) => self.elements[p as usize].bucket_next,
            };
            if forward as usize != i {
                return Err(format!("back link of element {i} does not lead back to it"));
            }
            if self.position(e.key) != Some(i) {
                return Err(format!("key {} is duplicated", e.key));
            }
        }
        Ok(())
    }

    #[inline]
    fn set_forward(&mut self, link: BackLink, target: u32) {
        match link {
            BackLink::Bucket(b) => self.buckets[b as usize] = target,
            BackLink::Element(e) => self.elements[e as usize].bucket_next = target,
        }
    }

    fn grow(&mut self) {
        let new_len = self.buckets.len() * 2;
        self.buckets.clear();
        self.buckets.resize(new_len, NONE);
        for pos in 0..self.elements.len() {
            let bucket = self.bucket_of(self.elements[pos].key);
            let head = self.buckets[bucket];
            if head != NONE {
                self.elements[head as usize].bucket_prev = BackLink::Element(pos as u32);
            }
            let e = &mut self.elements[pos];
            e.bucket_next = head;
            e.bucket_prev = BackLink::Bucket(bucket as u32);
            self.buckets[bucket] = pos as u32;
        }
    }
}

fn buckets_for(capacity: usize) -> usize {
    // smallest power of two with capacity <= 0.75 * buckets
    let needed = (capacity * 4).div_ceil(3);
    needed.next_power_of_two().max(MIN_BUCKETS)
}
