//! Shared fixtures for the criterion benchmarks.

use mergemarathon::ingest::{generate_uniform, DEFAULT_SYNTHETIC_MAX};
use mergemarathon::Value;

pub const BENCH_SEED: u64 = 7;

pub fn uniform_trace(len: usize) -> Vec<Value> {
    generate_uniform(len, DEFAULT_SYNTHETIC_MAX, BENCH_SEED)
}
