use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use wrcomm_core::groups::{sample_derived, GroupId, GroupKind};
use wrcomm_core::{solve_bk_derived, AritySignature, TreeAut};

use crate::{write_or_print, CliError, CliResult};

pub const CSV_HEADER: &str = "op,depth,reps,median_ns,p95_ns,min_ns,max_ns";

const MAX_DEPTH: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchOp {
    Multiply,
    Inverse,
    Solve,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub op: &'static str,
    pub depth: usize,
    pub reps: usize,
    pub median: Duration,
    pub p95: Duration,
    pub min: Duration,
    pub max: Duration,
}

impl BenchRow {
    fn from_samples(op: &'static str, depth: usize, mut samples: Vec<Duration>) -> Self {
        samples.sort();
        let n = samples.len();
        // nearest-rank percentiles
        let rank = |q: f64| samples[((q * n as f64).ceil() as usize).clamp(1, n) - 1];
        Self {
            op,
            depth,
            reps: n,
            median: rank(0.5),
            p95: rank(0.95),
            min: samples[0],
            max: samples[n - 1],
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.op,
            self.depth,
            self.reps,
            self.median.as_nanos(),
            self.p95.as_nanos(),
            self.min.as_nanos(),
            self.max.as_nanos()
        )
    }
}

fn time_reps(reps: usize, mut f: impl FnMut() -> CliResult) -> CliResult<Vec<Duration>> {
    (0..reps)
        .map(|_| {
            let start = Instant::now();
            f()?;
            Ok(start.elapsed())
        })
        .collect()
}

/// Timing rows for the selected operations on random binary portraits.
pub fn bench_rows(depth: usize, op: BenchOp, reps: usize, seed: u64) -> CliResult<Vec<BenchRow>> {
    if !(1..=MAX_DEPTH).contains(&depth) {
        return Err(CliError::Input(format!(
            "bench depth must lie in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    if reps == 0 {
        return Ok(Vec::new());
    }
    let sig = AritySignature::binary(depth)?;
    let g = TreeAut::random(&sig, seed);
    let h = TreeAut::random(&sig, seed.wrapping_add(1));
    let mut rows = Vec::new();
    if matches!(op, BenchOp::Multiply | BenchOp::All) {
        let samples = time_reps(reps, || {
            std::hint::black_box(g.multiply(&h)?);
            Ok(())
        })?;
        rows.push(BenchRow::from_samples("multiply", depth, samples));
    }
    if matches!(op, BenchOp::Inverse | BenchOp::All) {
        let samples = time_reps(reps, || {
            std::hint::black_box(g.inverse());
            Ok(())
        })?;
        rows.push(BenchRow::from_samples("inverse", depth, samples));
    }
    if matches!(op, BenchOp::Solve | BenchOp::All) {
        let id = GroupId::new(GroupKind::DerivedFullWreath, sig)?;
        let w = sample_derived(&id, seed)?;
        let samples = time_reps(reps, || {
            let wit = solve_bk_derived(&w)?;
            if wit.target() != &w {
                return Err(CliError::Internal(
                    "witness target differs from input".into(),
                ));
            }
            Ok(())
        })?;
        rows.push(BenchRow::from_samples("solve", depth, samples));
    }
    Ok(rows)
}

pub(crate) fn run(
    depth: usize,
    op: BenchOp,
    reps: usize,
    seed: u64,
    csv: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let rows = bench_rows(depth, op, reps, seed)?;
    let mut text = format!("{CSV_HEADER}\n");
    for row in &rows {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    if csv.is_some() {
        for row in &rows {
            writeln!(
                out,
                "{:<9} depth {:<3} reps {:<4} median {:>12?}  p95 {:>12?}",
                row.op, row.depth, row.reps, row.median, row.p95
            )?;
        }
    }
    write_or_print(out, csv, &text)
}
