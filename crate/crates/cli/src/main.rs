//! Command-line driver: generate split-box grids, dump node pairs,
//! reconstruct singular classes with any engine, cross-verify the engines,
//! benchmark them over a scaling series, and fit scaling slopes.
//!
//! Exit codes: 0 on success, 1 when verification finds a disagreement,
//! 2 on any input error (unreadable file, parse failure, bad recipe).

use clap::{Parser, Subcommand, ValueEnum};
use mbconn::bench::{fit_loglog, parse_csv, render_csv, run_series, Algo, BenchRecord};
use mbconn::fast::{classes_without_edge_nodes, reconstruct_fast};
use mbconn::grid::{Grid, InterfacePatch};
use mbconn::mbc;
use mbconn::naive::reconstruct_naive;
use mbconn::oracle;
use mbconn::pairs::enumerate_all;
use mbconn::report::SingularityReport;
use mbconn::synth::{
    evenly_spaced_cuts, generate_split, parse_ground_truth, scaling_series, write_ground_truth,
    GtFile, SynthSpec,
};
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(
    name = "mbconn",
    version,
    about = "Singularity connectivity reconstruction for multi-block structured grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a split-box grid with analytically known singular classes
    Gen {
        /// Global node counts, e.g. 65,65,65
        #[arg(long, value_parser = parse_dims, value_name = "NI,NJ,NK")]
        dims: [u32; 3],
        /// Interior cut planes on the i axis, e.g. 17,33,49
        #[arg(long, value_parser = parse_cut_list, default_value = "", value_name = "A,B,..")]
        cuts_i: CutList,
        /// Interior cut planes on the j axis
        #[arg(long, value_parser = parse_cut_list, default_value = "", value_name = "A,B,..")]
        cuts_j: CutList,
        /// Interior cut planes on the k axis
        #[arg(long, value_parser = parse_cut_list, default_value = "", value_name = "A,B,..")]
        cuts_k: CutList,
        /// Grid file to write
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
        /// Also write the ground-truth sidecar here
        #[arg(long, value_name = "FILE")]
        ground_truth: Option<PathBuf>,
        /// Include the full node-to-point map in the sidecar (large)
        #[arg(long, requires = "ground_truth")]
        full_map: bool,
    },
    /// Expand interface patches into coincident node pairs
    Pairs {
        /// Grid file to read
        grid: PathBuf,
        /// Write pairs here instead of stdout
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Reconstruct the singular classes of a grid
    Reconstruct {
        /// Engine to run
        #[arg(long, value_enum)]
        algo: EngineChoice,
        /// Grid file to read
        grid: PathBuf,
        /// Write the class file here instead of stdout
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Run every engine and cross-check the results
    Verify {
        /// Grid file to read
        grid: PathBuf,
        /// Ground-truth sidecar to check the report against
        #[arg(long, value_name = "FILE")]
        ground_truth: Option<PathBuf>,
    },
    /// Time both engines over a series of progressively finer splits
    Bench {
        /// Global node counts of every series step; each cut axis starts
        /// with one midpoint cut and doubles in density per step
        #[arg(long, value_parser = parse_dims, value_name = "NI,NJ,NK")]
        series_base: [u32; 3],
        /// Number of series steps, the base included
        #[arg(long)]
        steps: usize,
        /// Repetitions per measurement; the fastest run is kept
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        reps: u32,
        /// Drop the quadratic engine from later steps once a run exceeds
        /// this many seconds
        #[arg(long, default_value_t = 300)]
        naive_budget_secs: u64,
        /// CSV file to write
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Fit a log-log slope through one engine's benchmark records
    Fit {
        /// Benchmark CSV to read
        csv: PathBuf,
        /// Engine whose records to fit
        #[arg(long, value_enum)]
        algo: FitChoice,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Naive,
    Fast,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitChoice {
    Naive,
    Fast,
}

#[derive(Clone)]
struct CutList(Vec<u32>);

fn parse_dims(s: &str) -> Result<[u32; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three extents NI,NJ,NK, got {s:?}"));
    }
    let mut dims = [0u32; 3];
    for (slot, part) in dims.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("bad extent {part:?}"))?;
    }
    Ok(dims)
}

fn parse_cut_list(s: &str) -> Result<CutList, String> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Ok(CutList(Vec::new()));
    }
    trimmed
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad cut index {part:?}"))
        })
        .collect::<Result<Vec<u32>, String>>()
        .map(CutList)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen {
            dims,
            cuts_i,
            cuts_j,
            cuts_k,
            output,
            ground_truth,
            full_map,
        } => {
            let spec = SynthSpec::new(dims[0], dims[1], dims[2], cuts_i.0, cuts_j.0, cuts_k.0)
                .map_err(|e| e.to_string())?;
            let (grid, patches, gt) = generate_split(&spec);
            write_output(Some(&output), &mbc::write(&grid, &patches))?;
            if let Some(path) = &ground_truth {
                write_output(Some(path), &write_ground_truth(&gt, full_map))?;
            }
            let census = gt.census();
            println!(
                "{}: {} blocks, {} interfaces, {} singular classes expected",
                output.display(),
                grid.block_count(),
                patches.len(),
                census.class_count()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Pairs { grid, output } => {
            let (grid, patches) = load_grid(&grid)?;
            let pairs = enumerate_all(&grid, &patches).map_err(|e| e.to_string())?;
            let mut text = String::new();
            for pair in &pairs {
                let (a, b) = (pair.first(), pair.second());
                writeln!(
                    text,
                    "({} {} {} {}) ({} {} {} {})",
                    a.block, a.i, a.j, a.k, b.block, b.i, b.j, b.k
                )
                .unwrap();
            }
            write_output(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Reconstruct { algo, grid, output } => {
            let (grid, patches) = load_grid(&grid)?;
            let pairs = enumerate_all(&grid, &patches).map_err(|e| e.to_string())?;
            let report = match algo {
                EngineChoice::Naive => {
                    reconstruct_naive(&grid, &pairs).map_err(|e| e.to_string())?
                }
                EngineChoice::Fast => reconstruct_fast(&grid, &pairs).map_err(|e| e.to_string())?,
                EngineChoice::Oracle => oracle::reconstruct(&pairs),
            };
            write_output(output.as_deref(), &report.to_class_file())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { grid, ground_truth } => verify(&grid, ground_truth.as_deref()),

        Command::Bench {
            series_base,
            steps,
            reps,
            naive_budget_secs,
            output,
        } => {
            let [ni, nj, nk] = series_base;
            let base = SynthSpec::new(
                ni,
                nj,
                nk,
                evenly_spaced_cuts(ni, 1),
                evenly_spaced_cuts(nj, 1),
                evenly_spaced_cuts(nk, 1),
            )
            .map_err(|e| e.to_string())?;
            let series = scaling_series(&base, steps).map_err(|e| e.to_string())?;
            let rows = run_series(
                &series,
                &[Algo::Fast, Algo::Naive],
                reps,
                Some(Duration::from_secs(naive_budget_secs)),
            )
            .map_err(|e| e.to_string())?;
            write_output(Some(&output), &render_csv(&rows))?;
            println!(
                "{}: {} rows over {} steps",
                output.display(),
                rows.len(),
                series.len()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Fit { csv, algo } => {
            let records = parse_csv(&read_input(&csv)?).map_err(|e| e.to_string())?;
            let algo = match algo {
                FitChoice::Naive => Algo::Naive,
                FitChoice::Fast => Algo::Fast,
            };
            let mine: Vec<BenchRecord> = records.into_iter().filter(|r| r.algo == algo).collect();
            let fit = fit_loglog(&mine).map_err(|e| e.to_string())?;
            println!(
                "{algo}: slope {:.4} intercept {:.4} residual {:.4} points {}",
                fit.slope, fit.intercept, fit.residual_norm, fit.points
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Runs all three engines, checks them against each other, reports the
/// edge-membership diagnostic, and checks the ground truth when given one.
/// Exit 1 exactly when engines disagree or the ground truth is missed.
fn verify(grid_path: &Path, gt_path: Option<&Path>) -> Result<ExitCode, String> {
    let (grid, patches) = load_grid(grid_path)?;
    let pairs = enumerate_all(&grid, &patches).map_err(|e| e.to_string())?;
    println!(
        "parsed: {} blocks, {} interfaces, {} pairs",
        grid.block_count(),
        patches.len(),
        pairs.len()
    );

    let naive = reconstruct_naive(&grid, &pairs).map_err(|e| e.to_string())?;
    let fast = reconstruct_fast(&grid, &pairs).map_err(|e| e.to_string())?;
    let from_oracle = oracle::reconstruct(&pairs);
    println!(
        "naive: {} classes, {} singular nodes",
        naive.class_count(),
        naive.node_count()
    );

    let mut ok = true;
    for (name, report) in [("fast", &fast), ("oracle", &from_oracle)] {
        if oracle::reports_equal(&naive, report) {
            println!("{name}: matches naive");
        } else {
            println!(
                "{name}: MISMATCH against naive ({} classes, {} singular nodes)",
                report.class_count(),
                report.node_count()
            );
            ok = false;
        }
    }

    // Diagnostic, not a failure by itself: a class with no edge-resident
    // copy breaks the fast engine's seeding premise, and on such inputs the
    // engines will already disagree above.
    let interior_only =
        classes_without_edge_nodes(&grid, &from_oracle).map_err(|e| e.to_string())?;
    if interior_only.is_empty() {
        println!("edge-membership: every class contains a block-edge node");
    } else {
        println!(
            "edge-membership: {} class(es) contain no block-edge node (indices {:?})",
            interior_only.len(),
            interior_only
        );
    }

    if let Some(path) = gt_path {
        let gt = parse_ground_truth(&read_input(path)?).map_err(|e| e.to_string())?;
        if !check_ground_truth(&gt, &from_oracle) {
            ok = false;
        }
    }

    println!("result: {}", if ok { "OK" } else { "FAIL" });
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Census check (always) and exact per-class point check (when the sidecar
/// carries the node map). Prints findings; returns whether all checks held.
fn check_ground_truth(gt: &GtFile, report: &SingularityReport) -> bool {
    let mut ok = true;

    let mut expected: Vec<(usize, usize)> = {
        let mut by_size: HashMap<usize, usize> = HashMap::new();
        for &(_, copies) in &gt.points {
            *by_size.entry(copies as usize).or_insert(0) += 1;
        }
        by_size.into_iter().collect()
    };
    expected.sort_unstable();
    let got = report.size_census();
    if got == expected {
        println!(
            "ground truth: census matches ({} classes, {} singular nodes)",
            gt.points.len(),
            report.node_count()
        );
    } else {
        println!("ground truth: census MISMATCH (expected {expected:?}, got {got:?})");
        ok = false;
    }

    if !gt.map.is_empty() {
        let gid_of: HashMap<_, _> = gt.map.iter().copied().collect();
        let copies_of: HashMap<u64, u32> = gt.points.iter().copied().collect();
        let mut class_gids = BTreeSet::new();
        let mut sound = true;
        for class in report.classes() {
            let gids: BTreeSet<Option<u64>> = class
                .members()
                .iter()
                .map(|m| gid_of.get(m).copied())
                .collect();
            let gid = match (gids.len(), gids.into_iter().next().flatten()) {
                (1, Some(gid)) => gid,
                _ => {
                    sound = false;
                    break;
                }
            };
            if copies_of.get(&gid) != Some(&(class.len() as u32)) || !class_gids.insert(gid) {
                sound = false;
                break;
            }
        }
        let all_points: BTreeSet<u64> = gt.points.iter().map(|&(gid, _)| gid).collect();
        if sound && class_gids == all_points {
            println!("ground truth: node map confirms every class is one point's copy set");
        } else {
            println!("ground truth: node map MISMATCH between classes and points");
            ok = false;
        }
    }
    ok
}

fn read_input(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_grid(path: &Path) -> Result<(Grid, Vec<InterfacePatch>), String> {
    let text = read_input(path)?;
    mbc::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
