use super::{KeyRange, Pipeline};
use crate::types::Value;

/// Array-backed segment.
///
/// Until the first fill, `stages[..filled]` is one sorted run. Afterwards
/// every slot is occupied: `stages[..partition_index]` is the younger run and
/// `stages[partition_index..]` the older one, both sorted.
#[derive(Debug, Clone)]
pub struct Segment {
    range: KeyRange,
    stages: Vec<Value>,
    filled: usize,
    partition_index: usize,
    visits: u64,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filled == 0
    }

    pub fn is_full(&self) -> bool {
        self.filled == self.stages.len()
    }

    /// Index of the last populated stage.
    pub fn last(&self) -> Option<usize> {
        self.filled.checked_sub(1)
    }

    pub fn partition_index(&self) -> usize {
        self.partition_index
    }

    /// Populated stages in stage order.
    pub fn populated(&self) -> &[Value] {
        &self.stages[..self.filled]
    }

    /// Slot `i` with `None` for an empty stage.
    pub fn stage(&self, i: usize) -> Option<Value> {
        (i < self.filled).then(|| self.stages[i])
    }

    fn check_invariants(&self) {
        let sorted = |s: &[Value]| s.windows(2).all(|w| w[0] <= w[1]);
        if self.is_full() {
            debug_assert!(sorted(&self.stages[..self.partition_index]));
            debug_assert!(sorted(&self.stages[self.partition_index..]));
        } else {
            debug_assert_eq!(self.partition_index, 0);
            debug_assert!(sorted(self.populated()));
        }
    }

    /// Writes `v` at position `at` of the prefix `stages[..=end]`, moving
    /// `stages[at..end]` one slot forward. Walks from the top down so nothing
    /// is overwritten before it is moved.
    fn shift_in(&mut self, at: usize, end: usize, v: Value) {
        for j in (at + 1..=end).rev() {
            self.stages[j] = self.stages[j - 1];
        }
        self.stages[at] = v;
    }
}

impl Pipeline for Segment {
    fn new(range: KeyRange, len: usize) -> Self {
        assert!(len >= 1, "segment needs at least one stage");
        Segment {
            range,
            stages: vec![0; len],
            filled: 0,
            partition_index: 0,
            visits: 0,
        }
    }

    fn range(&self) -> KeyRange {
        self.range
    }

    fn insert(&mut self, v: Value) -> Option<Value> {
        debug_assert!(self.range.contains(v));
        let len = self.stages.len();
        self.visits += len as u64;

        if !self.is_full() {
            let end = self.filled;
            let at = self.stages[..end].partition_point(|&x| x <= v);
            self.shift_in(at, end, v);
            self.filled += 1;
            self.check_invariants();
            return None;
        }

        let p = self.partition_index;
        let out = self.stages[p];
        if p == 0 || v >= self.stages[p - 1] {
            // Start a new younger run, or append to the current one.
            self.stages[p] = v;
        } else {
            let at = self.stages[..p].partition_point(|&x| x <= v);
            self.shift_in(at, p, v);
        }
        self.partition_index = if p + 1 == len { 0 } else { p + 1 };
        self.check_invariants();
        Some(out)
    }

    fn flush_into(&mut self, out: &mut Vec<Value>) {
        self.visits += 2 * self.stages.len() as u64;
        if self.is_full() {
            let p = self.partition_index;
            out.extend_from_slice(&self.stages[p..]);
            out.extend_from_slice(&self.stages[..p]);
        } else {
            out.extend_from_slice(self.populated());
        }
        self.filled = 0;
        self.partition_index = 0;
    }

    fn stage_visits(&self) -> u64 {
        self.visits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment(len: usize) -> Segment {
        Segment::new(KeyRange { lo: 0, hi: 100 }, len)
    }

    fn flush(s: &mut Segment) -> Vec<Value> {
        let mut out = Vec::new();
        s.flush_into(&mut out);
        out
    }

    #[test]
    fn fills_in_sorted_order() {
        let mut s = segment(4);
        for v in [5, 2, 7, 1] {
            assert_eq!(s.insert(v), None);
        }
        assert_eq!(s.populated(), &[1, 2, 5, 7]);
        assert!(s.is_full());
        assert_eq!(s.partition_index(), 0);
    }

    #[test]
    fn full_segment_emits_older_run() {
        let mut s = segment(4);
        for v in [5, 2, 7, 1] {
            s.insert(v);
        }
        assert_eq!(s.insert(3), Some(1));
        assert_eq!(s.insert(4), Some(2));
        assert_eq!(s.insert(6), Some(5));
        assert_eq!(s.populated(), &[3, 4, 6, 7]);
        assert_eq!(s.partition_index(), 3);
        assert_eq!(flush(&mut s), vec![7, 3, 4, 6]);
        assert!(s.is_empty());
    }

    #[test]
    fn smaller_key_starts_new_run() {
        let mut s = segment(4);
        for v in [1, 2, 5, 7] {
            s.insert(v);
        }
        assert_eq!(s.insert(0), Some(1));
        assert_eq!(s.populated(), &[0, 2, 5, 7]);
        assert_eq!(s.partition_index(), 1);
    }

    #[test]
    fn younger_insert_shifts_into_freed_slot() {
        let mut s = segment(4);
        for v in [10, 20, 30, 40, 50, 60] {
            s.insert(v);
        }
        // younger [50, 60], older [30, 40]
        assert_eq!(s.populated(), &[50, 60, 30, 40]);
        assert_eq!(s.insert(55), Some(30));
        assert_eq!(s.populated(), &[50, 55, 60, 40]);
        assert_eq!(s.partition_index(), 3);
    }

    #[test]
    fn equal_keys_insert_after_existing() {
        let mut s = segment(3);
        for v in [4, 4, 2] {
            s.insert(v);
        }
        assert_eq!(s.populated(), &[2, 4, 4]);
        assert_eq!(s.last(), Some(2));
    }

    #[test]
    fn partial_and_empty_flush() {
        let mut s = segment(4);
        s.insert(9);
        s.insert(2);
        assert_eq!(s.stage(1), Some(9));
        assert_eq!(s.stage(2), None);
        assert_eq!(flush(&mut s), vec![2, 9]);
        assert_eq!(flush(&mut s), Vec::<Value>::new());
        assert_eq!(s.last(), None);
    }
}
