use anyhow::{Context, Result};
use mergemarathon::ingest::{extract_values, parse_values};
use mergemarathon::output::write_atomically;
use mergemarathon::tagged::read_tagged;
use mergemarathon::{TaggedValue, Value};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

pub fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    if is_stdio(path) {
        return Ok(Box::new(BufReader::new(io::stdin().lock())));
    }
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(Box::new(BufReader::new(file)))
}

/// Writes to stdout for `-`, otherwise to a temporary file renamed into place.
pub fn write_output(path: &Path, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    if is_stdio(path) {
        let stdout = io::stdout();
        let mut w = BufWriter::new(stdout.lock());
        write(&mut w)?;
        w.flush()?;
        return Ok(());
    }
    write_atomically(path, write).with_context(|| format!("cannot write {}", path.display()))
}

/// How to read keys from a trace file.
#[derive(Debug, Clone, clap::Args)]
pub struct TraceInput {
    /// Input file, `-` for standard input.
    #[arg(short = 'i', long = "input")]
    pub path: PathBuf,
    /// Take keys from this zero-based field of a delimited trace.
    #[arg(long)]
    pub field: Option<usize>,
    /// Field delimiter for `--field`.
    #[arg(long, default_value_t = ',', requires = "field")]
    pub delimiter: char,
}

impl TraceInput {
    pub fn load(&self) -> Result<Vec<Value>> {
        let reader = open_input(&self.path)?;
        let values = match self.field {
            Some(index) => extract_values(reader, self.delimiter, index),
            None => parse_values(reader),
        };
        values.with_context(|| format!("{}", self.path.display()))
    }
}

pub fn load_tagged(path: &Path) -> Result<Vec<TaggedValue>> {
    read_tagged(open_input(path)?).with_context(|| format!("{}", path.display()))
}
