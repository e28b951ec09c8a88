//! Fixed-capacity indexed max-heap keyed by residuals.
//!
//! Every item owns a slot for the lifetime of the queue; items are never
//! removed, only re-keyed. The maximum is the item with the largest key,
//! ties going to the smallest item index.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QueueError {
    #[error("queue needs at least one item")]
    Empty,
    #[error("key for item {item} must be finite and non-negative, got {key}")]
    BadKey { item: usize, key: f64 },
    #[error("item {item} out of range for capacity {capacity}")]
    BadIndex { item: usize, capacity: usize },
}

#[derive(Debug, Clone)]
pub struct ResidualQueue {
    keys: Vec<f64>,
    heap: Vec<u32>,
    pos: Vec<u32>,
}

impl ResidualQueue {
    /// Heapifies `keys` in O(n).
    pub fn build(keys: Vec<f64>) -> Result<Self, QueueError> {
        if keys.is_empty() {
            return Err(QueueError::Empty);
        }
        if let Some((item, &key)) = keys
            .iter()
            .enumerate()
            .find(|(_, k)| !(k.is_finite() && **k >= 0.0))
        {
            return Err(QueueError::BadKey { item, key });
        }
        let n = keys.len();
        let mut q = ResidualQueue {
            keys,
            heap: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
        };
        for i in (0..n / 2).rev() {
            q.sift_down(i);
        }
        Ok(q)
    }

    pub fn capacity(&self) -> usize {
        self.keys.len()
    }

    pub fn key(&self, item: usize) -> f64 {
        self.keys[item]
    }

    /// Largest `(item, key)`; the queue is never empty.
    #[inline]
    pub fn peek_max(&self) -> (usize, f64) {
        let item = self.heap[0] as usize;
        (item, self.keys[item])
    }

    pub fn update_key(&mut self, item: usize, key: f64) -> Result<(), QueueError> {
        if item >= self.keys.len() {
            return Err(QueueError::BadIndex {
                item,
                capacity: self.keys.len(),
            });
        }
        if !(key.is_finite() && key >= 0.0) {
            return Err(QueueError::BadKey { item, key });
        }
        self.set_key(item, key);
        Ok(())
    }

    /// Unchecked variant for the decoder hot loops; keys there are
    /// absolute differences of clipped values.
    #[inline]
    pub(crate) fn set_key(&mut self, item: usize, key: f64) {
        debug_assert!(key.is_finite() && key >= 0.0);
        let old = self.keys[item];
        if old == key {
            return;
        }
        self.keys[item] = key;
        let p = self.pos[item] as usize;
        if key > old {
            self.sift_up(p);
        } else {
            self.sift_down(p);
        }
    }

    /// The `count` largest items in priority order, without mutation.
    pub fn top(&self, count: usize) -> Vec<usize> {
        // best-first walk of the heap: the next largest is always a child of
        // something already taken
        let count = count.min(self.keys.len());
        let mut out = Vec::with_capacity(count);
        let mut frontier: Vec<usize> = vec![0];
        while out.len() < count {
            let (best_i, _) = frontier
                .iter()
                .enumerate()
                .reduce(|a, b| {
                    if self.above(self.heap[*b.1] as usize, self.heap[*a.1] as usize) {
                        b
                    } else {
                        a
                    }
                })
                .expect("frontier non-empty while items remain");
            let h = frontier.swap_remove(best_i);
            out.push(self.heap[h] as usize);
            for child in [2 * h + 1, 2 * h + 2] {
                if child < self.heap.len() {
                    frontier.push(child);
                }
            }
        }
        out
    }

    /// Priority order: larger key first, then smaller index.
    #[inline]
    fn above(&self, a: usize, b: usize) -> bool {
        let (ka, kb) = (self.keys[a], self.keys[b]);
        ka > kb || (ka == kb && a < b)
    }

    #[inline]
    fn swap(&mut self, i: usize, j: usize) {
        self.heap.swap(i, j);
        self.pos[self.heap[i] as usize] = i as u32;
        self.pos[self.heap[j] as usize] = j as u32;
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if self.above(self.heap[i] as usize, self.heap[parent] as usize) {
                self.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let mut best = l;
            if r < n && self.above(self.heap[r] as usize, self.heap[l] as usize) {
                best = r;
            }
            if self.above(self.heap[best] as usize, self.heap[i] as usize) {
                self.swap(i, best);
                i = best;
            } else {
                break;
            }
        }
    }

    #[cfg(test)]
    fn check_invariants(&self) {
        for i in 1..self.heap.len() {
            let parent = (i - 1) / 2;
            assert!(!self.above(self.heap[i] as usize, self.heap[parent] as usize));
        }
        for item in 0..self.keys.len() {
            assert_eq!(self.heap[self.pos[item] as usize] as usize, item);
        }
    }
}
