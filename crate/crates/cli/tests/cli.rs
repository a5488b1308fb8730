use std::path::Path;
use std::process::{Command, Output};

use tsp_hopfield::Instance;

fn tsphnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsphnn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_a_loadable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let out = tsphnn(&[
        "gen",
        "--n",
        "9",
        "--seed",
        "4",
        "--bound",
        "5",
        "--out",
        s(&path),
    ]);
    assert!(out.status.success());
    let inst = Instance::load(&path).unwrap();
    assert_eq!(inst.len(), 9);
    assert_eq!(inst.seed(), Some(4));
    assert!(inst
        .cities()
        .iter()
        .all(|c| (0.0..=5.0).contains(&c.x) && (0.0..=5.0).contains(&c.y)));

    let solve = tsphnn(&["solve", "--instance", s(&path), "--method", "greedy"]);
    assert!(solve.status.success());
    assert!(String::from_utf8_lossy(&solve.stdout).contains("valid=true"));
}

#[test]
fn invalid_arguments_exit_with_code_two() {
    assert_eq!(tsphnn(&["gen", "--n", "2"]).status.code(), Some(2));
    assert_eq!(
        tsphnn(&["solve", "--instance", "paper8", "--method", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tsphnn(&[
            "solve",
            "--instance",
            "no-such-file.json",
            "--method",
            "greedy"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn invalid_network_result_exits_with_code_one() {
    let out = tsphnn(&[
        "solve",
        "--instance",
        "paper8",
        "--method",
        "hnn",
        "--max-sweeps",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid=false"));
}

#[test]
fn plot_tour_has_one_marker_and_point_per_city() {
    let dir = tempfile::tempdir().unwrap();
    let tour = dir.path().join("tour.txt");
    let svg = dir.path().join("plot.svg");
    std::fs::write(&tour, "1 0 3 2\n").unwrap();
    let out = tsphnn(&[
        "plot",
        "--instance",
        "matrix4",
        "--tour",
        s(&tour),
        "--out",
        s(&svg),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<circle class=\"city\"").count(), 4);
    let polygon = text
        .lines()
        .find(|l| l.contains("<polygon class=\"tour\""))
        .expect("tour polygon");
    let points = polygon
        .split("points=\"")
        .nth(1)
        .unwrap()
        .split('"')
        .next()
        .unwrap();
    assert_eq!(points.split_whitespace().count(), 4);
}

#[test]
fn plot_grid_fills_one_cell_per_active_unit() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    let svg = dir.path().join("grid.svg");
    std::fs::write(&grid, "0 1 0 0\n1 0 0 0\n0 0 0 1\n0 0 1 1\n").unwrap();
    let out = tsphnn(&[
        "plot",
        "--instance",
        "matrix4",
        "--grid",
        s(&grid),
        "--out",
        s(&svg),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<rect class=\"cell ").count(), 16);
    assert_eq!(text.matches("<rect class=\"cell on\"").count(), 5);
}

#[test]
fn plot_rejects_tour_of_wrong_size() {
    let dir = tempfile::tempdir().unwrap();
    let tour = dir.path().join("tour.txt");
    std::fs::write(&tour, "0 1 2\n").unwrap();
    let out = tsphnn(&[
        "plot",
        "--instance",
        "matrix4",
        "--tour",
        s(&tour),
        "--out",
        s(&dir.path().join("x.svg")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_writes_grid_and_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    let trace = dir.path().join("trace.csv");
    let out = tsphnn(&[
        "solve",
        "--instance",
        "paper8",
        "--method",
        "hybrid",
        "--seed",
        "3",
        "--iters",
        "2000",
        "--grid-out",
        s(&grid),
        "--trace-out",
        s(&trace),
    ]);
    assert!(out.status.success());
    let grid_text = std::fs::read_to_string(&grid).unwrap();
    assert_eq!(grid_text.lines().count(), 8);
    let trace_text = std::fs::read_to_string(&trace).unwrap();
    assert!(trace_text.starts_with("iteration,temperature,current,best"));
}

#[test]
fn sweep_single_trial_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = tsphnn(&[
        "sweep",
        "--instance",
        "cityset1",
        "--c-grid",
        "90",
        "--d-grid",
        "5",
        "--trials",
        "1",
        "--out",
        s(&csv),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("cell,C,D,best,mean,worst,success_rate,mean_sweeps,trials"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Succ."));
}
