//! Server-side sorting: natural k-way merge sort and per-segment sorting of
//! tagged switch output.

mod cost;
mod merge;

pub use cost::{predicted_complexity_ratio, predicted_iterations, predicted_work, predicted_work_sequential};
pub use merge::{merge_into, merge_k_runs, LoserTree, MergeCounters};

use crate::runs::runs;
use crate::types::{TaggedValue, Value};
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_MERGE_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("merge order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("segment id {segment} at position {position} is not below segment count {segments}")]
    SegmentOutOfRange {
        segment: usize,
        segments: usize,
        position: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MergeConfig {
    k: usize,
}

impl MergeConfig {
    pub fn new(k: usize) -> Result<Self, SortError> {
        if k < 2 {
            return Err(SortError::InvalidOrder(k));
        }
        Ok(MergeConfig { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Default for MergeConfig {
    fn default() -> Self {
        MergeConfig { k: DEFAULT_MERGE_ORDER }
    }
}

/// Predicted and measured cost of one natural merge sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeCostReport {
    pub total_values: u64,
    pub k: usize,
    pub initial_runs: u64,
    pub avg_initial_run_length: Ratio<u64>,
    /// Merge passes actually executed.
    pub iterations: u32,
    pub predicted_iterations: u32,
    /// Parallel-merge model, in element moves.
    pub predicted_work: Ratio<u128>,
    /// Sequential-merge model, in element moves.
    pub predicted_work_sequential: Ratio<u128>,
    pub measured_moves: u64,
    pub measured_comparisons: u64,
    /// Average run length after each executed pass.
    pub pass_avg_run_lengths: Vec<Ratio<u64>>,
}

impl MergeCostReport {
    fn empty(k: usize) -> Self {
        MergeCostReport {
            total_values: 0,
            k,
            initial_runs: 0,
            avg_initial_run_length: Ratio::from_integer(0),
            iterations: 0,
            predicted_iterations: 0,
            predicted_work: Ratio::from_integer(0),
            predicted_work_sequential: Ratio::from_integer(0),
            measured_moves: 0,
            measured_comparisons: 0,
            pass_avg_run_lengths: Vec::new(),
        }
    }
}

/// Sorts by repeatedly merging consecutive groups of up to `k` runs until a
/// single run is left. Two buffers alternate as source and destination.
pub fn natural_merge_sort<T: Ord + Copy>(values: &[T], config: MergeConfig) -> (Vec<T>, MergeCostReport) {
    let k = config.k;
    let n = values.len();
    let mut report = MergeCostReport::empty(k);
    if n == 0 {
        return (Vec::new(), report);
    }

    // bounds[i]..bounds[i + 1] is run i.
    let mut bounds: Vec<usize> = runs(values).map(|r| r.offset).collect();
    bounds.push(n);
    let initial_runs = (bounds.len() - 1) as u64;
    let avg = Ratio::new(n as u64, initial_runs);
    report.total_values = n as u64;
    report.initial_runs = initial_runs;
    report.avg_initial_run_length = avg;
    report.predicted_iterations = predicted_iterations(initial_runs, k as u64);
    report.predicted_work = predicted_work(initial_runs, k as u64, avg);
    report.predicted_work_sequential = predicted_work_sequential(initial_runs, k as u64, avg);

    let mut src = values.to_vec();
    let mut dst: Vec<T> = Vec::with_capacity(n);
    let mut next_bounds = Vec::with_capacity(bounds.len() / k + 2);
    let mut counters = MergeCounters::default();

    while bounds.len() > 2 {
        dst.clear();
        next_bounds.clear();
        next_bounds.push(0);
        let run_count = bounds.len() - 1;
        let mut group: Vec<&[T]> = Vec::with_capacity(k);
        for first in (0..run_count).step_by(k) {
            let last = (first + k).min(run_count);
            group.clear();
            group.extend((first..last).map(|i| &src[bounds[i]..bounds[i + 1]]));
            merge_into(&group, &mut dst, &mut counters);
            next_bounds.push(dst.len());
        }
        std::mem::swap(&mut src, &mut dst);
        std::mem::swap(&mut bounds, &mut next_bounds);
        report.iterations += 1;
        report
            .pass_avg_run_lengths
            .push(Ratio::new(n as u64, (bounds.len() - 1) as u64));
    }

    report.measured_moves = counters.moves;
    report.measured_comparisons = counters.comparisons;
    (src, report)
}

/// Splits a tagged stream by segment (keeping arrival order), sorts each
/// segment, and concatenates the results in segment order.
///
/// Returns one report per segment, including empty ones.
pub fn sort_tagged_stream(
    tagged: &[TaggedValue],
    segments: usize,
    config: MergeConfig,
) -> Result<(Vec<Value>, Vec<MergeCostReport>), SortError> {
    let parts = partition_by_segment(tagged, segments)?;
    let mut sorted = Vec::with_capacity(tagged.len());
    let mut reports = Vec::with_capacity(segments);
    for part in &parts {
        let (s, report) = natural_merge_sort(part, config);
        sorted.extend_from_slice(&s);
        reports.push(report);
    }
    Ok((sorted, reports))
}

/// Per-segment key sequences in arrival order.
pub fn partition_by_segment(tagged: &[TaggedValue], segments: usize) -> Result<Vec<Vec<Value>>, SortError> {
    let mut counts = vec![0usize; segments];
    for (position, t) in tagged.iter().enumerate() {
        match counts.get_mut(t.segment) {
            Some(c) => *c += 1,
            None => {
                return Err(SortError::SegmentOutOfRange {
                    segment: t.segment,
                    segments,
                    position,
                })
            }
        }
    }
    let mut parts: Vec<Vec<Value>> = counts.iter().map(|&c| Vec::with_capacity(c)).collect();
    for t in tagged {
        parts[t.segment].push(t.key);
    }
    Ok(parts)
}
