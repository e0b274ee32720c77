//! Text format of the switch output: one `<segment_id>\t<key>` record per
//! line, decimal ASCII, LF endings.

use crate::types::TaggedValue;
use std::io::{self, BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TaggedFormatError {
    #[error("read error: {0}")]
    Read(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

pub fn write_tagged<W: Write>(mut w: W, records: &[TaggedValue]) -> io::Result<()> {
    for t in records {
        writeln!(w, "{}\t{}", t.segment, t.key)?;
    }
    w.flush()
}

fn parse_record(line: &str) -> Result<TaggedValue, String> {
    let (segment, key) = line
        .split_once('\t')
        .ok_or_else(|| format!("expected `<segment>\\t<key>`, got {line:?}"))?;
    let segment = segment.parse().map_err(|_| format!("bad segment id {segment:?}"))?;
    let key = match key.parse() {
        Ok(0) => return Err("zero is not a valid key".to_string()),
        Ok(k) => k,
        Err(_) => return Err(format!("bad key {key:?}")),
    };
    Ok(TaggedValue { segment, key })
}

/// Reads a tagged stream. A trailing `\r` or empty final line is accepted.
pub fn read_tagged<R: BufRead>(reader: R) -> Result<Vec<TaggedValue>, TaggedFormatError> {
    let mut out = Vec::new();
    let mut pending_empty = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(line) = pending_empty.take() {
            return Err(TaggedFormatError::Malformed {
                line,
                reason: "empty line".to_string(),
            });
        }
        let line_text = line.strip_suffix('\r').unwrap_or(&line);
        if line_text.is_empty() {
            pending_empty = Some(i + 1);
            continue;
        }
        out.push(parse_record(line_text).map_err(|reason| TaggedFormatError::Malformed { line: i + 1, reason })?);
    }
    Ok(out)
}
