//! Benchmark harness: time the server-side sort of a raw trace against the
//! sort of the same trace after it passed through the switch, over a grid of
//! (segments × stages) configurations.
//!
//! Switch simulation is not charged to server time; its work is reported as
//! a separate stage-visit count. Switch passes for a batch of configurations
//! run in parallel, then each timed sort runs alone.

use crate::output::write_atomically;
use crate::runs::{count_runs, ratio_to_f64, run_stats, RunStatsSummary};
use crate::sorter::{
    natural_merge_sort, predicted_complexity_ratio, sort_tagged_stream, MergeConfig, MergeCostReport, SortError,
};
use crate::switch::{run_switch, Mode, SwitchConfig, SwitchError, SwitchOutput};
use crate::types::Value;
use rayon::prelude::*;
use serde::Serialize;
use std::io;
use std::path::Path;
use std::time::Instant;
use thiserror::Error;

/// Segment counts of the full experiment grid.
pub const DEFAULT_SEGMENT_COUNTS: [usize; 7] = [1, 4, 8, 16, 32, 64, 128];
/// Segment lengths of the full experiment grid.
pub const DEFAULT_SEGMENT_LENGTHS: [usize; 6] = [4, 8, 16, 32, 64, 128];
pub const DEFAULT_REPS: usize = 10;
pub const DEFAULT_TRACE_LEN: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Switch(#[from] SwitchError),
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error("sorted output of S={segments} L={segment_length} differs from the baseline")]
    OutputMismatch { segments: usize, segment_length: usize },
    #[error("at least one repetition is required")]
    NoReps,
    #[error("segment count and segment length lists must be non-empty")]
    EmptyGrid,
    #[error("empty trace")]
    EmptyTrace,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingSummary {
    pub per_rep: Vec<f64>,
    pub avg: f64,
    pub median: f64,
}

impl TimingSummary {
    pub fn from_samples(per_rep: Vec<f64>) -> Self {
        let avg = per_rep.iter().sum::<f64>() / per_rep.len().max(1) as f64;
        let median = median(&per_rep);
        TimingSummary { per_rep, avg, median }
    }
}

pub fn median(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub timing: TimingSummary,
    pub run_stats: RunStatsSummary,
    pub report: MergeCostReport,
    /// Measured merge passes of every repetition.
    pub iterations_per_rep: Vec<u32>,
    pub sorted: Vec<Value>,
}

/// Times `natural_merge_sort` on the raw trace `reps` times.
pub fn run_baseline(trace: &[Value], merge: MergeConfig, reps: usize) -> Result<BaselineResult, SweepError> {
    if reps == 0 {
        return Err(SweepError::NoReps);
    }
    let mut times = Vec::with_capacity(reps);
    let mut iterations_per_rep = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let (sorted, report) = natural_merge_sort(trace, merge);
        times.push(start.elapsed().as_secs_f64());
        iterations_per_rep.push(report.iterations);
        last = Some((sorted, report));
    }
    let (sorted, report) = last.expect("reps >= 1");
    Ok(BaselineResult {
        timing: TimingSummary::from_samples(times),
        run_stats: run_stats(trace).summary(),
        report,
        iterations_per_rep,
        sorted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Baseline,
    Switch,
}

/// One CSV row. Baseline rows have zero segments and stages.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub trace_id: String,
    pub kind: RowKind,
    pub number_of_segments: usize,
    pub segment_length: usize,
    pub k: usize,
    pub rep: usize,
    pub trace_len: usize,
    pub wall_time_server_only: f64,
    pub wall_time_with_switch: f64,
    pub improvement_ratio: f64,
    pub switch_emission_count: usize,
    pub switch_stage_visits: u64,
    pub mean_run_count: f64,
    pub mean_avg_run_length: f64,
    pub predicted_iterations: u32,
    pub measured_iterations: u32,
    pub predicted_complexity_ratio: f64,
    #[serde(skip)]
    pub segment_run_counts: Vec<u64>,
}

/// CSV column names, in order.
pub const CSV_HEADER: [&str; 17] = [
    "trace_id",
    "kind",
    "number_of_segments",
    "segment_length",
    "k",
    "rep",
    "trace_len",
    "wall_time_server_only",
    "wall_time_with_switch",
    "improvement_ratio",
    "switch_emission_count",
    "switch_stage_visits",
    "mean_run_count",
    "mean_avg_run_length",
    "predicted_iterations",
    "measured_iterations",
    "predicted_complexity_ratio",
];

impl BaselineResult {
    pub fn rows(&self, trace_id: &str) -> Vec<SweepResult> {
        let n = self.sorted.len();
        self.timing
            .per_rep
            .iter()
            .zip(&self.iterations_per_rep)
            .enumerate()
            .map(|(rep, (&t, &iterations))| SweepResult {
                trace_id: trace_id.to_string(),
                kind: RowKind::Baseline,
                number_of_segments: 0,
                segment_length: 0,
                k: self.report.k,
                rep,
                trace_len: n,
                wall_time_server_only: t,
                wall_time_with_switch: t,
                improvement_ratio: 0.0,
                switch_emission_count: n,
                switch_stage_visits: 0,
                mean_run_count: self.report.initial_runs as f64,
                mean_avg_run_length: ratio_to_f64(self.report.avg_initial_run_length),
                predicted_iterations: self.report.predicted_iterations,
                measured_iterations: iterations,
                predicted_complexity_ratio: 1.0,
                segment_run_counts: vec![self.report.initial_runs],
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub trace_id: String,
    pub segment_counts: Vec<usize>,
    pub segment_lengths: Vec<usize>,
    pub merge: MergeConfig,
    pub reps: usize,
    /// Key bound for the switch; `None` uses the trace maximum.
    pub max_value: Option<Value>,
    pub mode: Mode,
}

impl SweepConfig {
    pub fn new(trace_id: impl Into<String>, segment_counts: Vec<usize>, segment_lengths: Vec<usize>) -> Self {
        SweepConfig {
            trace_id: trace_id.into(),
            segment_counts,
            segment_lengths,
            merge: MergeConfig::default(),
            reps: DEFAULT_REPS,
            max_value: None,
            mode: Mode::Array,
        }
    }

    /// Grid points in row order: segment count major, length minor.
    pub fn grid(&self) -> Vec<(usize, usize)> {
        self.segment_counts
            .iter()
            .flat_map(|&s| self.segment_lengths.iter().map(move |&l| (s, l)))
            .collect()
    }
}

/// Runs every grid configuration against a precomputed baseline.
pub fn run_sweep(
    trace: &[Value],
    config: &SweepConfig,
    baseline: &BaselineResult,
) -> Result<Vec<SweepResult>, SweepError> {
    if config.reps == 0 {
        return Err(SweepError::NoReps);
    }
    if config.segment_counts.is_empty() || config.segment_lengths.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    let max_value = match config.max_value {
        Some(m) => m,
        None => *trace.iter().max().ok_or(SweepError::EmptyTrace)?,
    };
    let grid = config.grid();
    let switch_configs = grid
        .iter()
        .map(|&(s, l)| SwitchConfig::new(s, l, max_value))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::with_capacity(grid.len() * config.reps);
    let batch = rayon::current_num_threads().max(1);
    for chunk in switch_configs.chunks(batch) {
        let outputs: Vec<SwitchOutput> = chunk
            .par_iter()
            .map(|&sc| run_switch(sc, trace, config.mode))
            .collect::<Result<_, _>>()?;
        for (sc, output) in chunk.iter().zip(&outputs) {
            rows.extend(time_configuration(trace, *sc, output, config, baseline)?);
        }
    }
    Ok(rows)
}

fn time_configuration(
    trace: &[Value],
    sc: SwitchConfig,
    output: &SwitchOutput,
    config: &SweepConfig,
    baseline: &BaselineResult,
) -> Result<Vec<SweepResult>, SweepError> {
    let mut rows = Vec::with_capacity(config.reps);
    for rep in 0..config.reps {
        let start = Instant::now();
        let (sorted, reports) = sort_tagged_stream(&output.tagged, sc.segments, config.merge)?;
        let with_switch = start.elapsed().as_secs_f64();
        if sorted != baseline.sorted {
            return Err(SweepError::OutputMismatch {
                segments: sc.segments,
                segment_length: sc.segment_length,
            });
        }
        // Baseline reps are reused cyclically when the sweep has more reps.
        let server_only = baseline.timing.per_rep[rep % baseline.timing.per_rep.len()];
        let segment_run_counts: Vec<u64> = reports.iter().map(|r| r.initial_runs).collect();
        let non_empty: Vec<&MergeCostReport> = reports.iter().filter(|r| r.total_values > 0).collect();
        let mean_avg_run_length = if non_empty.is_empty() {
            0.0
        } else {
            non_empty
                .iter()
                .map(|r| ratio_to_f64(r.avg_initial_run_length))
                .sum::<f64>()
                / non_empty.len() as f64
        };
        rows.push(SweepResult {
            trace_id: config.trace_id.clone(),
            kind: RowKind::Switch,
            number_of_segments: sc.segments,
            segment_length: sc.segment_length,
            k: config.merge.k(),
            rep,
            trace_len: trace.len(),
            wall_time_server_only: server_only,
            wall_time_with_switch: with_switch,
            improvement_ratio: 1.0 - with_switch / server_only,
            switch_emission_count: output.tagged.len(),
            switch_stage_visits: output.stage_visits,
            mean_run_count: segment_run_counts.iter().sum::<u64>() as f64 / sc.segments as f64,
            mean_avg_run_length,
            predicted_iterations: reports.iter().map(|r| r.predicted_iterations).max().unwrap_or(0),
            measured_iterations: reports.iter().map(|r| r.iterations).max().unwrap_or(0),
            predicted_complexity_ratio: if trace.len() >= sc.segments {
                predicted_complexity_ratio(trace.len() as u64, sc.segments as u64)
            } else {
                0.0
            },
            segment_run_counts,
        });
    }
    Ok(rows)
}

/// Per-segment run counts of one switch configuration, without timing.
pub fn segment_run_counts(trace: &[Value], sc: SwitchConfig, mode: Mode) -> Result<Vec<u64>, SweepError> {
    let output = run_switch(sc, trace, mode)?;
    let parts = crate::sorter::partition_by_segment(&output.tagged, sc.segments)?;
    Ok(parts.iter().map(|p| count_runs(p) as u64).collect())
}

pub fn write_csv<W: io::Write>(w: W, rows: &[SweepResult]) -> Result<(), SweepError> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes rows as CSV with a fixed header, atomically.
pub fn emit_csv(rows: &[SweepResult], path: &Path) -> Result<(), SweepError> {
    let mut result = Ok(());
    write_atomically(path, |w| {
        result = write_csv(w, rows);
        match &result {
            Ok(()) => Ok(()),
            Err(e) => Err(io::Error::other(e.to_string())),
        }
    })?;
    result
}

/// Writes rows as a JSON array of objects, atomically.
pub fn emit_json(rows: &[SweepResult], path: &Path) -> Result<(), SweepError> {
    write_atomically(path, |w| {
        serde_json::to_writer_pretty(&mut *w, rows)?;
        w.write_all(b"\n")
    })?;
    Ok(())
}
