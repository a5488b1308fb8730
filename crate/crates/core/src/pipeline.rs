//! Hybrid annealing → Hopfield solver and the penalty-grid benchmark sweep.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::annealing::{anneal, SaConfig, SaTrace};
use crate::error::{Error, Result};
use crate::hopfield::{self, HopfieldParams, HopfieldResult};
use crate::instance::{DistanceMatrix, Instance};
use crate::tour::{brute_force_optimum, tour_to_matrix, Tour};

/// SplitMix64 finalizer over `master` and a counter; used to fan one master
/// seed out into independent per-trial seeds.
pub fn derive_seed(master: u64, counter: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(counter.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniformly shuffled visiting order.
pub fn random_tour(n: usize, seed: u64) -> Tour {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Tour::from_order_unchecked(order)
}

/// Distances the network runs on: largest pairwise distance scaled to 1.
fn network_matrix(m: &DistanceMatrix) -> Result<DistanceMatrix> {
    m.normalized()
}

#[derive(Debug, Clone)]
pub struct HybridReport {
    pub instance_id: String,
    pub start_tour: Tour,
    pub sa_start_length: f64,
    pub sa_tour: Tour,
    pub sa_length: f64,
    pub hnn_valid: bool,
    pub hnn_length: Option<f64>,
    pub final_tour: Tour,
    pub final_length: f64,
    pub sa_trace: SaTrace,
    pub hnn: HopfieldResult,
    pub start_seed: u64,
    pub sa_seed: u64,
    pub hnn_seed: u64,
}

/// Anneals from a random start, feeds the best annealed tour to the Hopfield
/// network as its initial grid and keeps whichever of the two is shorter.
/// An invalid or unconverged network state falls back to the annealed tour.
pub fn solve_hybrid(inst: &Instance, sa: &SaConfig, hp: &HopfieldParams) -> Result<HybridReport> {
    let m = inst.distance_matrix();
    let start_seed = derive_seed(sa.seed, 0);
    let start = random_tour(m.n(), start_seed);
    let sa_start_length = m.tour_length(&start)?;
    let annealed = anneal(&m, &start, sa)?;

    let net_matrix = network_matrix(&m)?;
    let init = tour_to_matrix(&annealed.tour);
    let hnn = hopfield::run(&net_matrix, hp, Some(&init));
    let hnn_length = match &hnn.tour {
        Some(t) => Some(m.tour_length(t)?),
        None => None,
    };

    let (final_tour, final_length) = match (&hnn.tour, hnn_length) {
        (Some(t), Some(len)) if len < annealed.length => (t.clone(), len),
        _ => (annealed.tour.clone(), annealed.length),
    };

    Ok(HybridReport {
        instance_id: inst.id().to_string(),
        start_tour: start,
        sa_start_length,
        sa_tour: annealed.tour,
        sa_length: annealed.length,
        hnn_valid: hnn.valid,
        hnn_length,
        final_tour,
        final_length,
        sa_trace: annealed.trace,
        hnn,
        start_seed,
        sa_seed: sa.seed,
        hnn_seed: hp.seed,
    })
}

/// What counts as a successful network run in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SuccessMetric {
    /// Converged to a valid permutation grid.
    #[default]
    Valid,
    /// Converged to a valid grid whose tour is a known optimum.
    Optimal,
}

impl FromStr for SuccessMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "valid" => Ok(SuccessMetric::Valid),
            "optimal" => Ok(SuccessMetric::Optimal),
            other => Err(Error::InvalidArgument(format!(
                "unknown success metric {other:?} (expected valid or optimal)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub c_values: Vec<f64>,
    pub d_values: Vec<f64>,
    pub trials: usize,
    /// Supplies A, B, threshold and max_sweeps; C, D and seed are overridden per run.
    pub base: HopfieldParams,
    pub seed: u64,
    pub metric: SuccessMetric,
    /// Worker threads; `None` uses the global pool. Never affects results.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub c: f64,
    pub d: f64,
    /// Length statistics over valid runs; `None` when no run was valid.
    pub best: Option<f64>,
    pub mean: Option<f64>,
    pub worst: Option<f64>,
    pub success_rate: f64,
    pub mean_sweeps: f64,
    pub trials: usize,
    pub valid_runs: usize,
    pub trial_seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub instance_id: String,
    pub master_seed: u64,
    pub metric: SuccessMetric,
    pub cells: Vec<CellStats>,
}

struct TrialOutcome {
    valid_length: Option<f64>,
    success: bool,
    sweeps: usize,
}

/// Runs `trials` Hopfield runs from random grids for every (C, D) pair,
/// C-major. Trial seeds come from [`derive_seed`], so the report does not
/// depend on how trials are scheduled across workers.
pub fn sweep(inst: &Instance, cfg: &SweepConfig) -> Result<BenchmarkReport> {
    if cfg.c_values.is_empty() || cfg.d_values.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one C value and one D value".into(),
        ));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let m = inst.distance_matrix();
    let net_matrix = network_matrix(&m)?;
    let optimum = match cfg.metric {
        SuccessMetric::Valid => None,
        SuccessMetric::Optimal => Some(brute_force_optimum(&m)?.1),
    };

    let cells: Vec<(f64, f64)> = cfg
        .c_values
        .iter()
        .flat_map(|&c| cfg.d_values.iter().map(move |&d| (c, d)))
        .collect();
    let jobs: Vec<(usize, usize, u64)> = (0..cells.len())
        .flat_map(|cell| {
            (0..cfg.trials).map(move |trial| {
                let counter = (cell * cfg.trials + trial) as u64;
                (cell, trial, derive_seed(cfg.seed, counter))
            })
        })
        .collect();

    let run_job = |&(cell, _, seed): &(usize, usize, u64)| -> TrialOutcome {
        let (c, d) = cells[cell];
        let p = HopfieldParams {
            c_pen: c,
            d_pen: d,
            seed,
            ..cfg.base
        };
        let r = hopfield::run(&net_matrix, &p, None);
        let valid_length = r.tour.as_ref().map(|t| m.closed_length(t.order()));
        let success = match (cfg.metric, valid_length, optimum) {
            (SuccessMetric::Valid, Some(_), _) => true,
            (SuccessMetric::Optimal, Some(len), Some(opt)) => len <= opt * (1.0 + 1e-9),
            _ => false,
        };
        TrialOutcome {
            valid_length,
            success,
            sweeps: r.sweeps_used,
        }
    };

    let outcomes: Vec<TrialOutcome> = match cfg.workers {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?
            .install(|| jobs.par_iter().map(run_job).collect()),
        None => jobs.par_iter().map(run_job).collect(),
    };

    let cells = cells
        .iter()
        .enumerate()
        .map(|(idx, &(c, d))| {
            let slice = &outcomes[idx * cfg.trials..(idx + 1) * cfg.trials];
            let lengths: Vec<f64> = slice.iter().filter_map(|o| o.valid_length).collect();
            let successes = slice.iter().filter(|o| o.success).count();
            let sweeps: usize = slice.iter().map(|o| o.sweeps).sum();
            let (best, mean, worst) = if lengths.is_empty() {
                (None, None, None)
            } else {
                let best = lengths.iter().copied().fold(f64::INFINITY, f64::min);
                let worst = lengths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mean = lengths.iter().sum::<f64>() / lengths.len() as f64;
                // guard against rounding pushing the mean past an extreme
                (Some(best), Some(mean.clamp(best, worst)), Some(worst))
            };
            CellStats {
                c,
                d,
                best,
                mean,
                worst,
                success_rate: successes as f64 / cfg.trials as f64,
                mean_sweeps: sweeps as f64 / cfg.trials as f64,
                trials: cfg.trials,
                valid_runs: lengths.len(),
                trial_seeds: jobs[idx * cfg.trials..(idx + 1) * cfg.trials]
                    .iter()
                    .map(|j| j.2)
                    .collect(),
            }
        })
        .collect();

    Ok(BenchmarkReport {
        instance_id: inst.id().to_string(),
        master_seed: cfg.seed,
        metric: cfg.metric,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
}

pub const CSV_HEADER: &str = "cell,C,D,best,mean,worst,success_rate,mean_sweeps,trials";

fn opt_csv(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn render_report(r: &BenchmarkReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for (i, cell) in r.cells.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{i},{},{},{},{},{},{},{},{}",
                    cell.c,
                    cell.d,
                    opt_csv(cell.best),
                    opt_csv(cell.mean),
                    opt_csv(cell.worst),
                    cell.success_rate,
                    cell.mean_sweeps,
                    cell.trials
                );
            }
        }
        ReportFormat::Table => {
            let fmt_len = |v: Option<f64>, prec: usize| match v {
                Some(x) => format!("{x:.prec$}"),
                None => "—".to_string(),
            };
            let _ = writeln!(
                out,
                "{:>6} {:>6} {:>8} {:>8} {:>8} {:>8} {:>8}",
                "C", "D", "Best", "Mean", "Worst", "% Succ.", "Iter."
            );
            for cell in &r.cells {
                let _ = writeln!(
                    out,
                    "{:>6} {:>6} {:>8} {:>8} {:>8} {:>8.0} {:>8.1}",
                    cell.c,
                    cell.d,
                    fmt_len(cell.best, 3),
                    fmt_len(cell.mean, 2),
                    fmt_len(cell.worst, 2),
                    cell.success_rate * 100.0,
                    cell.mean_sweeps
                );
            }
        }
    }
    out
}

/// One parsed row of a report CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub cell: usize,
    pub c: f64,
    pub d: f64,
    pub best: Option<f64>,
    pub mean: Option<f64>,
    pub worst: Option<f64>,
    pub success_rate: f64,
    pub mean_sweeps: f64,
    pub trials: usize,
}

pub fn parse_report_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::InvalidArgument(format!(
                "unexpected report header {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let bad =
                |what: &str| Error::InvalidArgument(format!("report line {}: bad {what}", i + 2));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 9 {
                return Err(bad("field count"));
            }
            let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| bad(what));
            let opt = |s: &str, what: &str| {
                if s.is_empty() {
                    Ok(None)
                } else {
                    num(s, what).map(Some)
                }
            };
            Ok(CsvRow {
                cell: f[0].parse().map_err(|_| bad("cell"))?,
                c: num(f[1], "C")?,
                d: num(f[2], "D")?,
                best: opt(f[3], "best")?,
                mean: opt(f[4], "mean")?,
                worst: opt(f[5], "worst")?,
                success_rate: num(f[6], "success_rate")?,
                mean_sweeps: num(f[7], "mean_sweeps")?,
                trials: f[8].parse().map_err(|_| bad("trials"))?,
            })
        })
        .collect()
}
