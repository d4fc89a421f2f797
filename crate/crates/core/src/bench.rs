//! Wall-clock benchmarking of the reconstruction engines over a scaling
//! series, CSV emission, and a least-squares slope fit on the log-log
//! time-versus-size data.
//!
//! Timing covers the reconstruction call only; grid generation and pair
//! enumeration happen outside the clock. Each measurement is the minimum
//! over a number of repetitions, which filters scheduler noise better than
//! a mean. Runs are strictly sequential so one engine never perturbs
//! another's clock.

use crate::fast::reconstruct_fast;
use crate::grid::{Grid, GridError};
use crate::naive::reconstruct_naive;
use crate::oracle::reports_equal;
use crate::pairs::{enumerate_all, NodePair};
use crate::report::SingularityReport;
use crate::synth::{generate_split, SynthSpec};
use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;
use std::time::{Duration, Instant};
use thiserror::Error;

/// The two engines worth timing. The oracle is deliberately absent: it is
/// a correctness baseline, not a contender.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Naive,
    Fast,
}

impl Algo {
    pub fn label(self) -> &'static str {
        match self {
            Algo::Naive => "naive",
            Algo::Fast => "fast",
        }
    }

    pub fn from_label(s: &str) -> Option<Algo> {
        match s {
            "naive" => Some(Algo::Naive),
            "fast" => Some(Algo::Fast),
            _ => None,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One timed engine run on one grid. Sizes describe the input and the
/// report; `wall_ns` is the minimum over `reps` repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRecord {
    pub algo: Algo,
    pub n_blocks: u64,
    pub n_nodes: u64,
    pub n_pairs: u64,
    pub n_singular_nodes: u64,
    pub n_singular_classes: u64,
    pub wall_ns: u64,
    pub reps: u32,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("engine {algo} failed on {grid_label}: {source}")]
    Engine {
        algo: Algo,
        grid_label: String,
        source: GridError,
    },
    #[error("engines disagree on {grid_label}: {first} and {second} produced different reports")]
    ReportMismatch {
        grid_label: String,
        first: Algo,
        second: Algo,
    },
}

/// Runs one engine `reps` times on the same input and keeps the fastest
/// wall time. Also hands back the report so the caller can cross-check
/// engines before discarding it.
pub fn time_engine(
    algo: Algo,
    grid: &Grid,
    pairs: &BTreeSet<NodePair>,
    reps: u32,
) -> Result<(BenchRecord, SingularityReport), GridError> {
    assert!(reps >= 1, "a measurement needs at least one repetition");
    let mut best: Option<(u64, SingularityReport)> = None;
    for _ in 0..reps {
        let start = Instant::now();
        let report = match algo {
            Algo::Naive => reconstruct_naive(grid, pairs)?,
            Algo::Fast => reconstruct_fast(grid, pairs)?,
        };
        let elapsed = start.elapsed().as_nanos() as u64;
        if best.as_ref().is_none_or(|&(b, _)| elapsed < b) {
            best = Some((elapsed, report));
        }
    }
    let (wall_ns, report) = best.expect("reps >= 1");
    let record = BenchRecord {
        algo,
        n_blocks: grid.block_count() as u64,
        n_nodes: grid.node_count(),
        n_pairs: pairs.len() as u64,
        n_singular_nodes: report.node_count() as u64,
        n_singular_classes: report.class_count() as u64,
        wall_ns,
        reps,
    };
    Ok((record, report))
}

/// One output line of a series run: a measurement, or a marker explaining
/// why one was skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchRow {
    Record(BenchRecord),
    Skipped {
        algo: Algo,
        n_blocks: u64,
        reason: String,
    },
}

/// Benchmarks every engine on every step of the series. The naive engine
/// is dropped from all later steps once one of its runs exceeds
/// `naive_budget` (the run that overshoots is still reported); skipped
/// steps appear as marker rows. Engine reports on the same grid are
/// compared before being discarded.
pub fn run_series(
    series: &[SynthSpec],
    engines: &[Algo],
    reps: u32,
    naive_budget: Option<Duration>,
) -> Result<Vec<BenchRow>, BenchError> {
    let mut rows = Vec::new();
    let mut naive_blown: Option<Duration> = None;

    for (idx, spec) in series.iter().enumerate() {
        let (grid, patches, _) = generate_split(spec);
        let grid_label = format!(
            "series step {idx} ({}x{}x{}, {} blocks)",
            spec.global_extent(1),
            spec.global_extent(2),
            spec.global_extent(3),
            grid.block_count()
        );
        let pairs = enumerate_all(&grid, &patches).expect("generated patches are valid");

        let mut checked: Option<(Algo, SingularityReport)> = None;
        for &algo in engines {
            if algo == Algo::Naive {
                if let (Some(spent), Some(budget)) = (naive_blown, naive_budget) {
                    rows.push(BenchRow::Skipped {
                        algo,
                        n_blocks: grid.block_count() as u64,
                        reason: format!(
                            "budget-exceeded: an earlier step ran {:.3} s against a {:.3} s budget",
                            spent.as_secs_f64(),
                            budget.as_secs_f64()
                        ),
                    });
                    continue;
                }
            }
            let (record, report) =
                time_engine(algo, &grid, &pairs, reps).map_err(|source| BenchError::Engine {
                    algo,
                    grid_label: grid_label.clone(),
                    source,
                })?;
            if algo == Algo::Naive {
                if let Some(budget) = naive_budget {
                    let spent = Duration::from_nanos(record.wall_ns);
                    if spent > budget && naive_blown.is_none() {
                        naive_blown = Some(spent);
                    }
                }
            }
            match &checked {
                None => checked = Some((algo, report)),
                Some((first, cached)) => {
                    if !reports_equal(cached, &report) {
                        return Err(BenchError::ReportMismatch {
                            grid_label,
                            first: *first,
                            second: algo,
                        });
                    }
                }
            }
            rows.push(BenchRow::Record(record));
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str =
    "algo,n_blocks,n_nodes,n_pairs,n_singular_nodes,n_singular_classes,wall_ns,reps";

/// CSV with a fixed header; skip markers become `#` comment lines in
/// place, so the file records what was not measured and why.
pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        match row {
            BenchRow::Record(r) => {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.algo,
                    r.n_blocks,
                    r.n_nodes,
                    r.n_pairs,
                    r.n_singular_nodes,
                    r.n_singular_classes,
                    r.wall_ns,
                    r.reps
                )
                .unwrap();
            }
            BenchRow::Skipped {
                algo,
                n_blocks,
                reason,
            } => {
                writeln!(out, "# skipped {algo} at {n_blocks} blocks: {reason}").unwrap();
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("benchmark CSV line {line}: {msg}")]
pub struct CsvError {
    pub line: usize,
    pub msg: String,
}

/// Reads measurement rows back; comment lines are skipped, the header is
/// required.
pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>, CsvError> {
    let mut records = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| CsvError { line, msg };
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        if !saw_header {
            if body != CSV_HEADER {
                return Err(err(format!("expected header {CSV_HEADER:?}")));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = body.split(',').collect();
        if fields.len() != 8 {
            return Err(err(format!("expected 8 fields, got {}", fields.len())));
        }
        let algo = Algo::from_label(fields[0])
            .ok_or_else(|| err(format!("unknown algo label {:?}", fields[0])))?;
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| err(format!("expected an integer, got {s:?}")))
        };
        records.push(BenchRecord {
            algo,
            n_blocks: num(fields[1])?,
            n_nodes: num(fields[2])?,
            n_pairs: num(fields[3])?,
            n_singular_nodes: num(fields[4])?,
            n_singular_classes: num(fields[5])?,
            wall_ns: num(fields[6])?,
            reps: num(fields[7])? as u32,
        });
    }
    if !saw_header {
        return Err(CsvError {
            line: 1,
            msg: "missing CSV header".into(),
        });
    }
    Ok(records)
}

/// Least-squares line through (ln singular-node-count, ln seconds).
/// The slope is the growth exponent: 1 for linear scaling, 2 for
/// quadratic. Multiplying every time by a constant shifts only the
/// intercept, so the slope is machine-speed independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_norm: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "a slope fit needs at least 3 records with positive wall time and distinct \
     singular-node counts, got {distinct}"
)]
pub struct InsufficientPoints {
    pub distinct: usize,
}

/// Fits records of one engine. Records with zero time or zero singular
/// nodes carry no log-scale information and are ignored.
pub fn fit_loglog(records: &[BenchRecord]) -> Result<SlopeFit, InsufficientPoints> {
    debug_assert!(
        records.windows(2).all(|w| w[0].algo == w[1].algo),
        "fit one engine at a time"
    );
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.wall_ns > 0 && r.n_singular_nodes > 0)
        .map(|r| {
            (
                (r.n_singular_nodes as f64).ln(),
                (r.wall_ns as f64 / 1e9).ln(),
            )
        })
        .collect();
    let mut xs: Vec<u64> = records
        .iter()
        .filter(|r| r.wall_ns > 0 && r.n_singular_nodes > 0)
        .map(|r| r.n_singular_nodes)
        .collect();
    xs.sort_unstable();
    xs.dedup();
    if xs.len() < 3 {
        return Err(InsufficientPoints { distinct: xs.len() });
    }

    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual_norm = pts
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(SlopeFit {
        slope,
        intercept,
        residual_norm,
        points: pts.len(),
    })
}
