mod io;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use io::{load_tagged, write_output, TraceInput};
use mergemarathon::ingest::{generate_uniform, write_values, DEFAULT_SYNTHETIC_MAX};
use mergemarathon::runs::{ratio_to_f64, RunStatsSummary};
use mergemarathon::sorter::{partition_by_segment, DEFAULT_MERGE_ORDER};
use mergemarathon::sweep::{
    emit_csv, emit_json, run_baseline, run_sweep, SweepConfig, DEFAULT_REPS, DEFAULT_SEGMENT_COUNTS,
    DEFAULT_SEGMENT_LENGTHS, DEFAULT_TRACE_LEN,
};
use mergemarathon::switch::run_switch;
use mergemarathon::tagged::write_tagged;
use mergemarathon::{
    natural_merge_sort, run_stats, set_ranges, sort_tagged_stream, untag, MergeConfig, MergeCostReport, Mode,
    SwitchConfig, SwitchError, TaggedValue, Value,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "mergemarathon", version, about = "Switch-assisted partial sorting simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded uniform trace.
    Gen(GenArgs),
    /// Pass a trace through the simulated switch and write the tagged stream.
    Switch(SwitchArgs),
    /// Sort a plain or tagged stream with the k-way natural merge sort.
    Sort(SortArgs),
    /// Print run statistics of a plain or tagged stream.
    Stats(StatsArgs),
    /// Time the server sort with and without the switch over a grid.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    count: usize,
    /// Largest key; keys are drawn from [1, max].
    #[arg(long, default_value_t = DEFAULT_SYNTHETIC_MAX)]
    max: Value,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file, `-` for standard output.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

/// Key bound handed to the switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
enum MaxArg {
    /// Largest key in the trace.
    #[default]
    Observed,
    /// Largest 32-bit unsigned integer.
    Auto32,
    Value(Value),
}

impl FromStr for MaxArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "observed" => Ok(MaxArg::Observed),
            "auto32" => Ok(MaxArg::Auto32),
            _ => s
                .parse()
                .map(MaxArg::Value)
                .map_err(|_| format!("expected a number, `observed` or `auto32`, got {s:?}")),
        }
    }
}

impl MaxArg {
    fn resolve(self, trace: &[Value]) -> Value {
        match self {
            MaxArg::Observed => trace.iter().copied().max().unwrap_or(1),
            MaxArg::Auto32 => u32::MAX as Value,
            MaxArg::Value(v) => v,
        }
    }
}

#[derive(Debug, Args)]
struct SwitchArgs {
    #[command(flatten)]
    input: TraceInput,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    #[arg(long)]
    segments: usize,
    /// Stages per segment.
    #[arg(long)]
    stages: usize,
    /// Key bound: a number, `observed` (default) or `auto32`.
    #[arg(long, default_value = "observed")]
    max: MaxArg,
    /// Execute stage by stage under match-action constraints.
    #[arg(long)]
    stage_accurate: bool,
}

#[derive(Debug, Args)]
struct SortArgs {
    #[command(flatten)]
    input: TraceInput,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    /// Input is a tagged stream (`<segment>\t<key>` per line).
    #[arg(long, conflicts_with_all = ["field"])]
    tagged: bool,
    /// Segment count of a tagged stream; defaults to the largest id + 1.
    #[arg(long, requires = "tagged")]
    segments: Option<usize>,
    /// Merge order.
    #[arg(long, default_value_t = DEFAULT_MERGE_ORDER)]
    k: usize,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[command(flatten)]
    input: TraceInput,
    #[arg(long, conflicts_with_all = ["field"])]
    tagged: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Trace file; a uniform trace is generated when absent.
    #[arg(short = 'i', long = "input")]
    input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    field: Option<usize>,
    #[arg(long, default_value_t = ',', requires = "field")]
    delimiter: char,
    /// Length of the generated trace.
    #[arg(long, default_value_t = DEFAULT_TRACE_LEN, conflicts_with = "input")]
    count: usize,
    #[arg(long, default_value_t = 7, conflicts_with = "input")]
    seed: u64,
    /// Key bound: a number, `observed` (default) or `auto32`. Also the
    /// largest generated key when no input is given.
    #[arg(long)]
    max: Option<MaxArg>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SEGMENT_COUNTS)]
    segments_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SEGMENT_LENGTHS)]
    stages_list: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_MERGE_ORDER)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_REPS)]
    reps: usize,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Also write the rows as a JSON array to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Label for the trace column; defaults to the file name or `uniform`.
    #[arg(long)]
    trace_id: Option<String>,
    #[arg(long)]
    stage_accurate: bool,
}

fn mode(stage_accurate: bool) -> Mode {
    if stage_accurate {
        Mode::StageAccurate
    } else {
        Mode::Array
    }
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    if args.max == 0 {
        bail!("--max must be at least 1");
    }
    let values = generate_uniform(args.count, args.max, args.seed);
    write_output(&args.output, |w| write_values(w, &values))?;
    eprintln!("generated {} values, max {}", values.len(), args.max);
    Ok(())
}

fn cmd_switch(args: SwitchArgs) -> Result<()> {
    let trace = args.input.load()?;
    let max_value = args.max.resolve(&trace);
    let config = SwitchConfig::new(args.segments, args.stages, max_value)?;
    let ranges = set_ranges(&config)?;
    let shown: Vec<String> = ranges.iter().map(|r| r.to_string()).collect();
    eprintln!("ranges: {}", shown.join(" "));

    let output = run_switch(config, &trace, mode(args.stage_accurate)).map_err(|e| match e {
        SwitchError::OutOfDomain {
            value,
            max_value,
            position: Some(p),
        } => {
            // Plain traces hold one key per line; extracted fields may skip comment lines.
            let unit = if args.input.field.is_some() { "record" } else { "line" };
            anyhow::anyhow!("{unit} {}: key {value} outside (0, {max_value}]", p + 1)
        }
        e => e.into(),
    })?;
    write_output(&args.output, |w| write_tagged(w, &output.tagged))?;
    eprintln!(
        "switched {} values through {} x {} stages ({} stage visits)",
        output.tagged.len(),
        config.segments,
        config.segment_length,
        output.stage_visits
    );
    Ok(())
}

fn describe(report: &MergeCostReport) -> String {
    format!(
        "values {}, initial runs {}, avg run length {:.3}, iterations {} (predicted {}), moves {}, comparisons {}, \
         predicted work {:.1} parallel / {:.1} sequential",
        report.total_values,
        report.initial_runs,
        ratio_to_f64(report.avg_initial_run_length),
        report.iterations,
        report.predicted_iterations,
        report.measured_moves,
        report.measured_comparisons,
        *report.predicted_work.numer() as f64 / *report.predicted_work.denom() as f64,
        *report.predicted_work_sequential.numer() as f64 / *report.predicted_work_sequential.denom() as f64,
    )
}

fn segment_count(tagged: &[TaggedValue], explicit: Option<usize>) -> usize {
    explicit.unwrap_or_else(|| tagged.iter().map(|t| t.segment + 1).max().unwrap_or(0))
}

fn cmd_sort(args: SortArgs) -> Result<()> {
    let merge = MergeConfig::new(args.k)?;
    let sorted = if args.tagged {
        let tagged = load_tagged(&args.input.path)?;
        let segments = segment_count(&tagged, args.segments);
        let (sorted, reports) = sort_tagged_stream(&tagged, segments, merge)?;
        for (s, r) in reports.iter().enumerate() {
            eprintln!("segment {s}: {}", describe(r));
        }
        sorted
    } else {
        let values = args.input.load()?;
        let (sorted, report) = natural_merge_sort(&values, merge);
        eprintln!("{}", describe(&report));
        sorted
    };
    write_output(&args.output, |w| write_values(w, &sorted))
}

#[derive(Debug, Serialize)]
struct StatsReport {
    global: RunStatsSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    segments: Option<Vec<RunStatsSummary>>,
}

fn stats_line(label: &str, s: &RunStatsSummary) -> String {
    format!(
        "{label:<10} {:>10} {:>10} {:>12.3} {:>10.1} {:>8} {:>8}",
        s.total_values, s.run_count, s.avg_length, s.median_length, s.min_length, s.max_length
    )
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let report = if args.tagged {
        let tagged = load_tagged(&args.input.path)?;
        let parts = partition_by_segment(&tagged, segment_count(&tagged, None))?;
        StatsReport {
            global: run_stats(&untag(&tagged)).summary(),
            segments: Some(parts.iter().map(|p| run_stats(p).summary()).collect()),
        }
    } else {
        StatsReport {
            global: run_stats(&args.input.load()?).summary(),
            segments: None,
        }
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    println!(
        "{:<10} {:>10} {:>10} {:>12} {:>10} {:>8} {:>8}",
        "scope", "values", "runs", "avg_len", "median", "min", "max"
    );
    println!("{}", stats_line("global", &report.global));
    for (i, s) in report.segments.iter().flatten().enumerate() {
        println!("{}", stats_line(&format!("seg {i}"), s));
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let merge = MergeConfig::new(args.k)?;
    let started = Instant::now();
    let (trace, trace_id) = match &args.input {
        Some(path) => {
            let input = TraceInput {
                path: path.clone(),
                field: args.field,
                delimiter: args.delimiter,
            };
            let id = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "stdin".to_string());
            (input.load()?, id)
        }
        None => {
            let max = match args.max {
                Some(MaxArg::Value(v)) => v,
                Some(MaxArg::Auto32) => u32::MAX as Value,
                _ => DEFAULT_SYNTHETIC_MAX,
            };
            (generate_uniform(args.count, max, args.seed), "uniform".to_string())
        }
    };
    let load_time = started.elapsed().as_secs_f64();
    if trace.is_empty() {
        bail!("trace is empty");
    }
    let trace_id = args.trace_id.unwrap_or(trace_id);
    eprintln!("loaded {} values in {load_time:.3}s", trace.len());

    let baseline = run_baseline(&trace, merge, args.reps)?;
    eprintln!(
        "baseline: avg {:.4}s median {:.4}s, {} runs, {} iterations",
        baseline.timing.avg, baseline.timing.median, baseline.report.initial_runs, baseline.report.iterations
    );

    let mut config = SweepConfig::new(trace_id.clone(), args.segments_list, args.stages_list);
    config.merge = merge;
    config.reps = args.reps;
    config.max_value = Some(args.max.unwrap_or_default().resolve(&trace));
    config.mode = mode(args.stage_accurate);
    let sweep = run_sweep(&trace, &config, &baseline).context("sweep failed")?;

    let mut rows = baseline.rows(&trace_id);
    rows.extend(sweep);
    for chunk in
        rows.chunk_by(|a, b| (a.number_of_segments, a.segment_length) == (b.number_of_segments, b.segment_length))
    {
        let times: Vec<f64> = chunk.iter().map(|r| r.wall_time_with_switch).collect();
        let med = mergemarathon::sweep::median(&times);
        let r = &chunk[0];
        eprintln!(
            "S={:<4} L={:<4} median {:.4}s improvement {:>6.1}% runs/segment {:.1} iterations {}",
            r.number_of_segments,
            r.segment_length,
            med,
            (1.0 - med / baseline.timing.median) * 100.0,
            r.mean_run_count,
            r.measured_iterations
        );
    }
    emit_csv(&rows, &args.out)?;
    if let Some(path) = &args.json {
        emit_json(&rows, path)?;
    }
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Switch(a) => cmd_switch(a),
        Command::Sort(a) => cmd_sort(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
