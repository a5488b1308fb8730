//! `tsphnn`: generate instances, solve them with any of the library's methods,
//! run penalty sweeps and plot tours or activation grids.
//!
//! Exit codes: 0 success, 1 the method ran but produced no valid tour,
//! 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tsp_hopfield::annealing::anneal;
use tsp_hopfield::baselines::{greedy_nearest_neighbor, three_opt, two_opt};
use tsp_hopfield::hopfield::{self, grid_from_text, grid_to_text};
use tsp_hopfield::instance::generate_random_instance;
use tsp_hopfield::pipeline::{
    derive_seed, random_tour, render_report, solve_hybrid, sweep, ReportFormat, SweepConfig,
};
use tsp_hopfield::plot::{render_grid_svg, render_instance_svg};
use tsp_hopfield::tour::brute_force_optimum;
use tsp_hopfield::{builtin, HopfieldParams, Instance, SaConfig, SuccessMetric, Tour};

#[derive(Parser)]
#[command(
    name = "tsphnn",
    version,
    about = "Hopfield-network, annealing and baseline TSP solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance with cities uniform in [0, bound]².
    Gen(GenArgs),
    /// Solve an instance and print a key=value result record.
    Solve(SolveArgs),
    /// Run Hopfield trials over a grid of C and D penalties and write a CSV report.
    Sweep(SweepArgs),
    /// Render an instance with an optional tour, or an activation grid, as SVG.
    Plot(PlotArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of cities (at least 3).
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Side length of the square the cities are drawn from.
    #[arg(long, default_value_t = 1.0)]
    bound: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Greedy,
    #[value(name = "2opt")]
    TwoOpt,
    #[value(name = "3opt")]
    ThreeOpt,
    Sa,
    Hnn,
    Hybrid,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::TwoOpt => "2opt",
            Method::ThreeOpt => "3opt",
            Method::Sa => "sa",
            Method::Hnn => "hnn",
            Method::Hybrid => "hybrid",
        }
    }
}

#[derive(Args)]
struct SaFlags {
    /// Initial annealing temperature.
    #[arg(long, default_value_t = 1.0)]
    t0: f64,
    /// Geometric cooling factor per iteration, in (0, 1).
    #[arg(long, default_value_t = 0.999)]
    cooling: f64,
    /// Annealing iteration budget.
    #[arg(long, default_value_t = 20_000)]
    iters: usize,
    /// Position pairs exchanged per annealing move.
    #[arg(long, default_value_t = 1)]
    swaps: usize,
}

impl SaFlags {
    fn config(&self, seed: u64) -> SaConfig {
        SaConfig {
            t0: self.t0,
            cooling_rate: self.cooling,
            iterations: self.iters,
            swap_count: self.swaps,
            seed,
        }
    }
}

#[derive(Args)]
struct HopfieldFlags {
    /// Penalty for a city in several positions.
    #[arg(long = "A", default_value_t = 100.0)]
    a: f64,
    /// Penalty for several cities in one position.
    #[arg(long = "B", default_value_t = 100.0)]
    b: f64,
    /// Penalty on the number of active units differing from n.
    #[arg(long = "C", default_value_t = 90.0)]
    c: f64,
    /// Weight of the tour-length term.
    #[arg(long = "D", default_value_t = 100.0)]
    d: f64,
    /// Unit activation threshold.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    threshold: f64,
    /// Maximum asynchronous sweeps before giving up.
    #[arg(long, default_value_t = 200)]
    max_sweeps: usize,
}

impl HopfieldFlags {
    fn params(&self, seed: u64) -> HopfieldParams {
        HopfieldParams {
            a_pen: self.a,
            b_pen: self.b,
            c_pen: self.c,
            d_pen: self.d,
            threshold: self.threshold,
            max_sweeps: self.max_sweeps,
            seed,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Built-in instance name (cityset1, paper8, matrix4) or path to an instance file.
    #[arg(long)]
    instance: String,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start city for greedy construction (also seeds 2opt and 3opt).
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[command(flatten)]
    sa: SaFlags,
    #[command(flatten)]
    hnn: HopfieldFlags,
    /// Write the tour (space-separated city indices) to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the final activation grid (hnn and hybrid only).
    #[arg(long)]
    grid_out: Option<PathBuf>,
    /// Write the annealing trace as CSV (sa and hybrid only).
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    instance: String,
    /// Comma-separated C values.
    #[arg(long, value_delimiter = ',', default_value = "90,100")]
    c_grid: Vec<f64>,
    /// Comma-separated D values.
    #[arg(long, value_delimiter = ',', default_value = "100,110,120")]
    d_grid: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "A", default_value_t = 100.0)]
    a: f64,
    #[arg(long = "B", default_value_t = 100.0)]
    b: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    threshold: f64,
    #[arg(long, default_value_t = 200)]
    max_sweeps: usize,
    /// What counts as a successful run.
    #[arg(long, value_enum, default_value_t = Metric::Valid)]
    success_metric: Metric,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    workers: Option<usize>,
    /// CSV report path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Valid,
    Optimal,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    instance: String,
    /// Tour file: city indices separated by whitespace or commas.
    #[arg(long, conflicts_with = "grid")]
    tour: Option<PathBuf>,
    /// Activation grid file: one row of 0/1 per city.
    #[arg(long)]
    grid: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

/// Failure that maps to exit code 1 rather than 2.
struct NoValidTour;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Plot(a) => cmd_plot(&a),
    };
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(NoValidTour)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

type Outcome = Result<std::result::Result<(), NoValidTour>>;

fn resolve_instance(spec: &str) -> Result<Instance> {
    if builtin::NAMES.contains(&spec) {
        return Ok(builtin::by_name(spec)?);
    }
    Instance::load(spec).with_context(|| format!("cannot load instance {spec:?}"))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_gen(a: &GenArgs) -> Outcome {
    let inst = generate_random_instance(a.n, a.seed, a.bound)?;
    inst.save(&a.out)?;
    eprintln!("wrote {} cities to {}", inst.len(), a.out.display());
    Ok(Ok(()))
}

struct Record {
    fields: Vec<(&'static str, String)>,
}

impl Record {
    fn push(&mut self, key: &'static str, value: impl ToString) {
        self.fields.push((key, value.to_string()));
    }

    fn print(&self) {
        for (k, v) in &self.fields {
            println!("{k}={v}");
        }
    }
}

fn cmd_solve(a: &SolveArgs) -> Outcome {
    let inst = resolve_instance(&a.instance)?;
    let m = inst.distance_matrix();
    let n = inst.len();
    if a.start >= n {
        bail!("start city {} out of range for {n} cities", a.start);
    }
    let timer = Instant::now();
    let mut rec = Record { fields: Vec::new() };
    rec.push("instance", inst.id());
    rec.push("method", a.method.name());
    rec.push("seed", a.seed);
    rec.push("n", n);

    let mut grid = None;
    let tour: Option<Tour> = match a.method {
        Method::Exact => Some(brute_force_optimum(&m)?.0),
        Method::Greedy => Some(greedy_nearest_neighbor(&m, a.start)),
        Method::TwoOpt => Some(two_opt(&m, &greedy_nearest_neighbor(&m, a.start))),
        Method::ThreeOpt => Some(three_opt(&m, &greedy_nearest_neighbor(&m, a.start))),
        Method::Sa => {
            let start = random_tour(n, derive_seed(a.seed, 0));
            rec.push("start_length", m.tour_length(&start)?);
            let out = anneal(&m, &start, &a.sa.config(a.seed))?;
            if let Some(p) = &a.trace_out {
                write(p, &out.trace.to_csv())?;
            }
            Some(out.tour)
        }
        Method::Hnn => {
            let net_matrix = m.normalized()?;
            let r = hopfield::run(&net_matrix, &a.hnn.params(a.seed), None);
            rec.push("converged", r.converged);
            rec.push("sweeps", r.sweeps_used);
            rec.push(
                "energy",
                r.energy_trace.last().copied().unwrap_or(r.initial_energy),
            );
            grid = Some(r.grid);
            r.tour
        }
        Method::Hybrid => {
            let r = solve_hybrid(&inst, &a.sa.config(a.seed), &a.hnn.params(a.seed))?;
            rec.push("sa_start_length", r.sa_start_length);
            rec.push("sa_length", r.sa_length);
            rec.push("hnn_valid", r.hnn_valid);
            rec.push(
                "hnn_length",
                r.hnn_length
                    .map(|l| l.to_string())
                    .unwrap_or_else(|| "none".into()),
            );
            rec.push("sweeps", r.hnn.sweeps_used);
            if let Some(p) = &a.trace_out {
                write(p, &r.sa_trace.to_csv())?;
            }
            grid = Some(r.hnn.grid);
            Some(r.final_tour)
        }
    };
    let elapsed = timer.elapsed();

    if let (Some(p), Some(g)) = (&a.grid_out, &grid) {
        write(p, &grid_to_text(g))?;
    }
    let valid = tour.is_some();
    rec.push("valid", valid);
    match &tour {
        Some(t) => {
            let length = m.tour_length(t)?;
            rec.push("length", length);
            rec.push("tour", t);
            if let Some(p) = &a.out {
                write(p, &format!("{t}\n"))?;
            }
            eprintln!(
                "{} on {}: length {length:.4} ({} ms)",
                a.method.name(),
                inst.id(),
                elapsed.as_millis()
            );
        }
        None => {
            rec.push("length", "none");
            rec.push("tour", "none");
            eprintln!(
                "{} on {}: no valid tour ({} ms)",
                a.method.name(),
                inst.id(),
                elapsed.as_millis()
            );
        }
    }
    rec.print();
    Ok(if valid { Ok(()) } else { Err(NoValidTour) })
}

fn cmd_sweep(a: &SweepArgs) -> Outcome {
    let inst = resolve_instance(&a.instance)?;
    let cfg = SweepConfig {
        c_values: a.c_grid.clone(),
        d_values: a.d_grid.clone(),
        trials: a.trials,
        base: HopfieldParams {
            a_pen: a.a,
            b_pen: a.b,
            threshold: a.threshold,
            max_sweeps: a.max_sweeps,
            ..HopfieldParams::default()
        },
        seed: a.seed,
        metric: match a.success_metric {
            Metric::Valid => SuccessMetric::Valid,
            Metric::Optimal => SuccessMetric::Optimal,
        },
        workers: a.workers,
    };
    let report = sweep(&inst, &cfg)?;
    write(&a.out, &render_report(&report, ReportFormat::Csv))?;
    eprint!("{}", render_report(&report, ReportFormat::Table));
    Ok(Ok(()))
}

fn parse_tour_file(path: &Path) -> Result<Tour> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let order = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .with_context(|| format!("bad city index {s:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Tour::new(order)?)
}

fn cmd_plot(a: &PlotArgs) -> Outcome {
    let inst = resolve_instance(&a.instance)?;
    let svg = match (&a.tour, &a.grid) {
        (_, Some(g)) => {
            let text =
                fs::read_to_string(g).with_context(|| format!("cannot read {}", g.display()))?;
            let grid = grid_from_text(&text)?;
            if grid.n() != inst.len() {
                bail!(
                    "grid is {0}x{0} but the instance has {1} cities",
                    grid.n(),
                    inst.len()
                );
            }
            let labels: Vec<String> = inst.cities().iter().map(|c| c.label.clone()).collect();
            render_grid_svg(&grid, Some(&labels))
        }
        (Some(t), None) => render_instance_svg(&inst, Some(&parse_tour_file(t)?))?,
        (None, None) => render_instance_svg(&inst, None)?,
    };
    write(&a.out, &svg)?;
    Ok(Ok(()))
}
