//! Run detection and run statistics.
//!
//! A run is a maximal non-decreasing contiguous slice. Equal neighbours
//! continue a run, since the switch places equal keys next to each other.

use num_rational::Ratio;
use serde::Serialize;

/// A maximal non-decreasing slice `values[offset..offset + len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub offset: usize,
    pub len: usize,
}

impl Run {
    pub fn end(&self) -> usize {
        self.offset + self.len
    }

    pub fn slice<'a, T>(&self, values: &'a [T]) -> &'a [T] {
        &values[self.offset..self.end()]
    }
}

/// Iterator over the runs of a slice. Does not allocate.
#[derive(Debug, Clone)]
pub struct Runs<'a, T> {
    values: &'a [T],
    pos: usize,
}

impl<'a, T: Ord> Iterator for Runs<'a, T> {
    type Item = Run;

    fn next(&mut self) -> Option<Run> {
        let start = self.pos;
        if start >= self.values.len() {
            return None;
        }
        let mut end = start + 1;
        while end < self.values.len() && self.values[end - 1] <= self.values[end] {
            end += 1;
        }
        self.pos = end;
        Some(Run {
            offset: start,
            len: end - start,
        })
    }
}

pub fn runs<T: Ord>(values: &[T]) -> Runs<'_, T> {
    Runs { values, pos: 0 }
}

pub fn detect_runs<T: Ord>(values: &[T]) -> Vec<Run> {
    runs(values).collect()
}

/// Number of runs, i.e. one plus the number of descents.
pub fn count_runs<T: Ord>(values: &[T]) -> usize {
    if values.is_empty() {
        return 0;
    }
    1 + values.windows(2).filter(|w| w[0] > w[1]).count()
}

/// Aggregate statistics over the runs of a sequence.
///
/// Average and median are exact ratios; an empty sequence reports zero
/// everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStats {
    pub run_count: u64,
    pub avg_length: Ratio<u64>,
    pub median_length: Ratio<u64>,
    pub min_length: u64,
    pub max_length: u64,
    pub total_values: u64,
}

impl RunStats {
    pub fn from_lengths(mut lengths: Vec<u64>) -> RunStats {
        if lengths.is_empty() {
            return RunStats {
                run_count: 0,
                avg_length: Ratio::from_integer(0),
                median_length: Ratio::from_integer(0),
                min_length: 0,
                max_length: 0,
                total_values: 0,
            };
        }
        lengths.sort_unstable();
        let n = lengths.len();
        let total: u64 = lengths.iter().sum();
        let median = if n % 2 == 1 {
            Ratio::from_integer(lengths[n / 2])
        } else {
            Ratio::new(lengths[n / 2 - 1] + lengths[n / 2], 2)
        };
        RunStats {
            run_count: n as u64,
            avg_length: Ratio::new(total, n as u64),
            median_length: median,
            min_length: lengths[0],
            max_length: lengths[n - 1],
            total_values: total,
        }
    }

    pub fn summary(&self) -> RunStatsSummary {
        RunStatsSummary {
            run_count: self.run_count,
            avg_length: ratio_to_f64(self.avg_length),
            median_length: ratio_to_f64(self.median_length),
            min_length: self.min_length,
            max_length: self.max_length,
            total_values: self.total_values,
        }
    }
}

/// Floating-point view of [`RunStats`] for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunStatsSummary {
    pub run_count: u64,
    pub avg_length: f64,
    pub median_length: f64,
    pub min_length: u64,
    pub max_length: u64,
    pub total_values: u64,
}

pub fn run_stats<T: Ord>(values: &[T]) -> RunStats {
    RunStats::from_lengths(runs(values).map(|r| r.len as u64).collect())
}

pub fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
