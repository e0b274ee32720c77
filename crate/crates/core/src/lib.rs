//! Partial sorting of integer streams in a simulated programmable switch,
//! and the server-side natural merge sort that consumes the switch output.
//!
//! The pipeline is:
//!
//! 1. [`ingest`] produces a trace of keys in `(0, max_value]`.
//! 2. [`switch`] range-partitions the keys over `S` segments and lengthens
//!    runs with an `L`-stage insertion pipeline per segment, tagging every
//!    emitted key with its segment.
//! 3. [`sorter`] sorts each segment with a k-way natural merge sort and
//!    concatenates the segments in order.
//! 4. [`sweep`] times the server sort with and without the switch over a
//!    grid of switch shapes.

pub mod ingest;
pub mod output;
pub mod runs;
pub mod sorter;
pub mod sweep;
pub mod switch;
pub mod tagged;
mod types;

pub use runs::{count_runs, detect_runs, run_stats, Run, RunStats};
pub use sorter::{
    merge_k_runs, natural_merge_sort, predicted_complexity_ratio, predicted_iterations, predicted_work,
    predicted_work_sequential, sort_tagged_stream, MergeConfig, MergeCostReport, SortError,
};
pub use switch::{
    apply_switch, apply_switch_stage_accurate, set_ranges, KeyRange, Mode, Switch, SwitchConfig, SwitchError,
};
pub use types::{untag, TaggedValue, Value};
