//! k-way merging with a tree of losers.

use std::cmp::Ordering;

/// Operation counters collected while merging.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeCounters {
    /// Elements written to the output.
    pub moves: u64,
    /// Key comparisons between run heads.
    pub comparisons: u64,
}

/// Merges sorted slices with a loser tree.
///
/// Leaves live at implicit nodes `n..2n`, internal node `t` has children
/// `2t` and `2t + 1`, `tree[t]` holds the losing leaf of the match played at
/// `t` and `tree[0]` the overall winner. Ties go to the lower source index,
/// so merging is stable with respect to source order.
#[derive(Debug)]
pub struct LoserTree<'a, T> {
    sources: Vec<&'a [T]>,
    heads: Vec<usize>,
    tree: Vec<usize>,
    remaining: usize,
    comparisons: u64,
}

impl<'a, T: Ord + Copy> LoserTree<'a, T> {
    pub fn new(sources: Vec<&'a [T]>) -> Self {
        let n = sources.len();
        let remaining = sources.iter().map(|s| s.len()).sum();
        let mut lt = LoserTree {
            heads: vec![0; n],
            tree: vec![0; n.max(1)],
            sources,
            remaining,
            comparisons: 0,
        };
        if n > 1 {
            let mut winners = vec![0; n];
            for t in (1..n).rev() {
                let child = |c: usize| if c >= n { c - n } else { winners[c] };
                let (a, b) = (child(2 * t), child(2 * t + 1));
                let (w, l) = if lt.beats(b, a) { (b, a) } else { (a, b) };
                winners[t] = w;
                lt.tree[t] = l;
            }
            lt.tree[0] = winners[1];
        }
        lt
    }

    fn head(&self, i: usize) -> Option<&T> {
        self.sources[i].get(self.heads[i])
    }

    /// Whether leaf `a` wins against leaf `b`. Exhausted leaves always lose.
    fn beats(&mut self, a: usize, b: usize) -> bool {
        match (self.head(a).copied(), self.head(b).copied()) {
            (Some(x), Some(y)) => {
                self.comparisons += 1;
                match x.cmp(&y) {
                    Ordering::Less => true,
                    Ordering::Equal => a < b,
                    Ordering::Greater => false,
                }
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => a < b,
        }
    }

    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }
}

impl<T: Ord + Copy> Iterator for LoserTree<'_, T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        if self.remaining == 0 {
            return None;
        }
        let n = self.sources.len();
        let mut winner = self.tree[0];
        let out = *self.head(winner).expect("winner has a head while elements remain");
        self.heads[winner] += 1;
        self.remaining -= 1;

        let mut t = (winner + n) / 2;
        while t > 0 {
            if self.beats(self.tree[t], winner) {
                std::mem::swap(&mut self.tree[t], &mut winner);
            }
            t /= 2;
        }
        self.tree[0] = winner;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl<T: Ord + Copy> ExactSizeIterator for LoserTree<'_, T> {}

/// Appends the merge of `runs` to `out`.
pub fn merge_into<T: Ord + Copy>(runs: &[&[T]], out: &mut Vec<T>, counters: &mut MergeCounters) {
    let before = out.len();
    match runs {
        [] => {}
        [single] => out.extend_from_slice(single),
        _ => {
            let mut tree = LoserTree::new(runs.to_vec());
            out.extend(&mut tree);
            counters.comparisons += tree.comparisons();
        }
    }
    counters.moves += (out.len() - before) as u64;
}

/// Merges non-decreasing sequences into one. Equal keys keep source order.
pub fn merge_k_runs<T: Ord + Copy>(runs: &[&[T]]) -> Vec<T> {
    let mut out = Vec::with_capacity(runs.iter().map(|r| r.len()).sum());
    merge_into(runs, &mut out, &mut MergeCounters::default());
    out
}
