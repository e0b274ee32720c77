//! Trace acquisition: seeded synthetic traces and line-delimited text traces.
//!
//! # Synthetic traces
//!
//! [`generate_uniform`] draws keys uniformly from `[1, max_value]` using
//! xoshiro256++ seeded through SplitMix64 (the `seed_from_u64` scheme of the
//! reference xoshiro implementation). Each 64-bit output `x` is rejected
//! while `x < 2^64 mod max_value`; an accepted draw maps to
//! `x mod max_value + 1`. Any implementation of these two published
//! generators reproduces the same stream for the same seed.
//!
//! # Text traces
//!
//! A plain trace is one decimal key per line, LF terminated. A single empty
//! line at the end of the file is tolerated. Delimited traces are split on a
//! one-character delimiter and one field is extracted; lines starting with
//! `#` are comments.

use crate::types::Value;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Default key bound for synthetic traces: 2^15 distinct keys.
pub const DEFAULT_SYNTHETIC_MAX: Value = 1 << 15;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("read error: {0}")]
    Read(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: LineError },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineError {
    #[error("empty line")]
    Empty,
    #[error("not an unsigned integer: {0:?}")]
    NotNumeric(String),
    #[error("value does not fit in 64 bits: {0}")]
    Overflow(String),
    #[error("zero is not a valid key")]
    Zero,
    #[error("no field {index} (line has {fields} fields)")]
    MissingField { index: usize, fields: usize },
}

/// Where a trace comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceSpec {
    Uniform {
        count: usize,
        max_value: Value,
        seed: u64,
    },
    File(PathBuf),
    Field {
        path: PathBuf,
        delimiter: char,
        index: usize,
    },
}

impl TraceSpec {
    pub fn load(&self) -> Result<Vec<Value>, IngestError> {
        match self {
            TraceSpec::Uniform { count, max_value, seed } => Ok(generate_uniform(*count, *max_value, *seed)),
            TraceSpec::File(path) => parse_trace(path),
            TraceSpec::Field { path, delimiter, index } => extract_field(path, *delimiter, *index),
        }
    }
}

/// `count` i.i.d. keys uniform on `[1, max_value]`.
pub fn generate_uniform(count: usize, max_value: Value, seed: u64) -> Vec<Value> {
    assert!(max_value >= 1, "max_value must be positive");
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    // 2^64 mod max_value
    let reject_below = max_value.wrapping_neg() % max_value;
    (0..count)
        .map(|_| loop {
            let x = rng.next_u64();
            if x >= reject_below {
                break x % max_value + 1;
            }
        })
        .collect()
}

fn parse_key(text: &str) -> Result<Value, LineError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(LineError::Empty);
    }
    if !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(LineError::NotNumeric(text.to_string()));
    }
    match text.parse::<Value>() {
        Ok(0) => Err(LineError::Zero),
        Ok(v) => Ok(v),
        Err(_) => Err(LineError::Overflow(text.to_string())),
    }
}

/// Calls `f` with (line number, line) for every line, rejecting empty lines
/// other than a final one.
fn for_each_line<R: BufRead>(
    reader: R,
    mut f: impl FnMut(usize, &str) -> Result<(), LineError>,
) -> Result<(), IngestError> {
    let mut pending_empty = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let number = i + 1;
        if let Some(empty) = pending_empty.take() {
            return Err(IngestError::Line {
                line: empty,
                reason: LineError::Empty,
            });
        }
        if line.trim().is_empty() {
            pending_empty = Some(number);
            continue;
        }
        f(number, &line).map_err(|reason| IngestError::Line { line: number, reason })?;
    }
    Ok(())
}

pub fn parse_values<R: BufRead>(reader: R) -> Result<Vec<Value>, IngestError> {
    let mut out = Vec::new();
    for_each_line(reader, |_, line| {
        out.push(parse_key(line)?);
        Ok(())
    })?;
    Ok(out)
}

fn open(path: &Path) -> Result<BufReader<File>, IngestError> {
    File::open(path).map(BufReader::new).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_trace(path: impl AsRef<Path>) -> Result<Vec<Value>, IngestError> {
    parse_values(open(path.as_ref())?)
}

pub fn extract_values<R: BufRead>(reader: R, delimiter: char, index: usize) -> Result<Vec<Value>, IngestError> {
    let mut out = Vec::new();
    for_each_line(reader, |_, line| {
        if line.trim_start().starts_with('#') {
            return Ok(());
        }
        let mut fields = 0;
        for (i, field) in line.split(delimiter).enumerate() {
            fields += 1;
            if i == index {
                out.push(parse_key(field)?);
                return Ok(());
            }
        }
        Err(LineError::MissingField { index, fields })
    })?;
    Ok(out)
}

pub fn extract_field(path: impl AsRef<Path>, delimiter: char, index: usize) -> Result<Vec<Value>, IngestError> {
    extract_values(open(path.as_ref())?, delimiter, index)
}

pub fn write_values<W: Write>(mut w: W, values: &[Value]) -> io::Result<()> {
    for v in values {
        writeln!(w, "{v}")?;
    }
    w.flush()
}
