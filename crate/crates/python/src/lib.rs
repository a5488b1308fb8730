//! Python bindings for the `tsp_hopfield` solvers.
//!
//! Instances are wrapped in an `Instance` class. Tours cross the boundary as
//! lists of city indices and solver results come back as plain dictionaries.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tsp_hopfield::baselines;
use tsp_hopfield::hopfield;
use tsp_hopfield::pipeline::{self, ReportFormat};
use tsp_hopfield::tour::brute_force_optimum;
use tsp_hopfield::{builtin, instance, Error, HopfieldParams, SaConfig, SuccessMetric, Tour};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_tour(order: Vec<usize>) -> PyResult<Tour> {
    Tour::new(order).map_err(py_err)
}

/// A Euclidean TSP instance, optionally carrying an explicit distance matrix.
#[pyclass(name = "Instance", module = "tsp_hopfield_py", frozen)]
struct PyInstance {
    inner: instance::Instance,
}

impl PyInstance {
    fn check_len(&self, t: &Tour) -> PyResult<()> {
        if t.len() != self.inner.len() {
            return Err(PyValueError::new_err(format!(
                "tour has {} cities, instance has {}",
                t.len(),
                self.inner.len()
            )));
        }
        Ok(())
    }
}

#[pymethods]
impl PyInstance {
    /// Build an instance from labels and coordinates.
    #[new]
    #[pyo3(signature = (id, labels, coords))]
    fn new(id: String, labels: Vec<String>, coords: Vec<(f64, f64)>) -> PyResult<Self> {
        if labels.len() != coords.len() {
            return Err(PyValueError::new_err("labels and coords differ in length"));
        }
        let cities = labels
            .into_iter()
            .zip(coords)
            .map(|(l, (x, y))| instance::City::new(l, x, y))
            .collect();
        let inner = instance::Instance::new(id, cities).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Uniform random cities in `[0, bound]²`, reproducible from `seed`.
    #[staticmethod]
    #[pyo3(signature = (n, seed, bound = 1.0))]
    fn random(n: usize, seed: u64, bound: f64) -> PyResult<Self> {
        let inner = instance::generate_random_instance(n, seed, bound).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// One of the bundled instances: `cityset1`, `paper8` or `matrix4`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let inner = builtin::by_name(name).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn builtin_names() -> Vec<&'static str> {
        builtin::NAMES.to_vec()
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let inner = instance::Instance::load(path).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = instance::Instance::from_json(text).map_err(py_err)?;
        Ok(Self { inner })
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        self.inner.save(path).map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id().to_string()
    }

    #[getter]
    fn seed(&self) -> Option<u64> {
        self.inner.seed()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner
            .cities()
            .iter()
            .map(|c| c.label.clone())
            .collect()
    }

    #[getter]
    fn coords(&self) -> Vec<(f64, f64)> {
        self.inner.cities().iter().map(|c| (c.x, c.y)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Instance(id={:?}, n={})", self.inner.id(), self.inner.len())
    }

    /// Pairwise distances as a list of rows. With `normalized=True` every
    /// entry is divided by the largest one.
    #[pyo3(signature = (normalized = false))]
    fn distance_matrix(&self, normalized: bool) -> PyResult<Vec<Vec<f64>>> {
        let m = self.inner.distance_matrix();
        let m = if normalized {
            m.normalized().map_err(py_err)?
        } else {
            m
        };
        Ok(m.rows())
    }

    /// Closed length of the tour given as a permutation of city indices.
    fn tour_length(&self, order: Vec<usize>) -> PyResult<f64> {
        let t = to_tour(order)?;
        self.check_len(&t)?;
        self.inner.distance_matrix().tour_length(&t).map_err(py_err)
    }

    /// SVG drawing of the cities and, if given, the closed tour.
    #[pyo3(signature = (order = None))]
    fn to_svg(&self, order: Option<Vec<usize>>) -> PyResult<String> {
        let tour = order.map(to_tour).transpose()?;
        tsp_hopfield::plot::render_instance_svg(&self.inner, tour.as_ref()).map_err(py_err)
    }
}

/// Exact optimum by exhaustive search. Returns `(order, length)`.
#[pyfunction]
fn brute_force(py: Python<'_>, inst: &PyInstance) -> PyResult<(Vec<usize>, f64)> {
    let m = inst.inner.distance_matrix();
    let (t, len) = py.detach(|| brute_force_optimum(&m)).map_err(py_err)?;
    Ok((t.into_order(), len))
}

#[pyfunction]
#[pyo3(signature = (inst, start = 0))]
fn greedy(inst: &PyInstance, start: usize) -> PyResult<Vec<usize>> {
    if start >= inst.inner.len() {
        return Err(PyValueError::new_err("start city out of range"));
    }
    let m = inst.inner.distance_matrix();
    Ok(baselines::greedy_nearest_neighbor(&m, start).into_order())
}

/// Best-improvement 2-opt from the given order.
#[pyfunction]
fn two_opt(inst: &PyInstance, order: Vec<usize>) -> PyResult<Vec<usize>> {
    let t = to_tour(order)?;
    inst.check_len(&t)?;
    Ok(baselines::two_opt(&inst.inner.distance_matrix(), &t).into_order())
}

/// Best-improvement 3-opt from the given order.
#[pyfunction]
fn three_opt(inst: &PyInstance, order: Vec<usize>) -> PyResult<Vec<usize>> {
    let t = to_tour(order)?;
    inst.check_len(&t)?;
    Ok(baselines::three_opt(&inst.inner.distance_matrix(), &t).into_order())
}

/// Simulated annealing. Without `start` the initial tour is drawn from `seed`
/// the same way the command-line tool does it.
#[pyfunction]
#[pyo3(signature = (inst, start = None, t0 = 1.0, cooling_rate = 0.999, iterations = 20_000, swap_count = 1, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn anneal<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    start: Option<Vec<usize>>,
    t0: f64,
    cooling_rate: f64,
    iterations: usize,
    swap_count: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let n = inst.inner.len();
    let start = match start {
        Some(o) => to_tour(o)?,
        None => pipeline::random_tour(n, pipeline::derive_seed(seed, 0)),
    };
    inst.check_len(&start)?;
    let cfg = SaConfig {
        t0,
        cooling_rate,
        iterations,
        swap_count,
        seed,
    };
    let m = inst.inner.distance_matrix();
    let start_length = m.tour_length(&start).map_err(py_err)?;
    let out = py
        .detach(|| tsp_hopfield::anneal(&m, &start, &cfg))
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("start", start.into_order())?;
    d.set_item("start_length", start_length)?;
    d.set_item("tour", out.tour.into_order())?;
    d.set_item("length", out.length)?;
    d.set_item("trace_csv", out.trace.to_csv())?;
    Ok(d)
}

#[allow(clippy::too_many_arguments)]
fn params(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    threshold: f64,
    max_sweeps: usize,
    seed: u64,
) -> HopfieldParams {
    HopfieldParams {
        a_pen: a,
        b_pen: b,
        c_pen: c,
        d_pen: d,
        threshold,
        max_sweeps,
        seed,
    }
}

/// Discrete Hopfield network run on the max-normalised distances. The
/// reported length is in the instance's own units.
#[pyfunction]
#[pyo3(signature = (inst, a = 100.0, b = 100.0, c = 90.0, d = 100.0, threshold = 0.0, max_sweeps = 200, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn hopfield_run<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    threshold: f64,
    max_sweeps: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let m = inst.inner.distance_matrix();
    let net = m.normalized().map_err(py_err)?;
    let p = params(a, b, c, d, threshold, max_sweeps, seed);
    let r = py.detach(|| hopfield::run(&net, &p, None));
    let length = r
        .tour
        .as_ref()
        .map(|t| m.tour_length(t))
        .transpose()
        .map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("converged", r.converged)?;
    out.set_item("valid", r.valid)?;
    out.set_item("sweeps", r.sweeps_used)?;
    out.set_item("initial_energy", r.initial_energy)?;
    out.set_item("energy_trace", r.energy_trace)?;
    out.set_item("grid", r.grid.rows())?;
    out.set_item("tour", r.tour.map(Tour::into_order))?;
    out.set_item("length", length)?;
    Ok(out)
}

/// Annealing followed by a Hopfield run; the network's tour replaces the
/// annealed one only when it is strictly shorter.
#[pyfunction]
#[pyo3(signature = (inst, seed = 0, t0 = 1.0, cooling_rate = 0.999, iterations = 20_000, swap_count = 1, a = 100.0, b = 100.0, c = 90.0, d = 100.0, threshold = 0.0, max_sweeps = 200))]
#[allow(clippy::too_many_arguments)]
fn solve_hybrid<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    seed: u64,
    t0: f64,
    cooling_rate: f64,
    iterations: usize,
    swap_count: usize,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    threshold: f64,
    max_sweeps: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let sa = SaConfig {
        t0,
        cooling_rate,
        iterations,
        swap_count,
        seed,
    };
    let hp = params(a, b, c, d, threshold, max_sweeps, seed);
    let r = py
        .detach(|| pipeline::solve_hybrid(&inst.inner, &sa, &hp))
        .map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("start_tour", r.start_tour.into_order())?;
    out.set_item("sa_start_length", r.sa_start_length)?;
    out.set_item("sa_tour", r.sa_tour.into_order())?;
    out.set_item("sa_length", r.sa_length)?;
    out.set_item("hnn_valid", r.hnn_valid)?;
    out.set_item("hnn_length", r.hnn_length)?;
    out.set_item("hnn_sweeps", r.hnn.sweeps_used)?;
    out.set_item("final_tour", r.final_tour.into_order())?;
    out.set_item("final_length", r.final_length)?;
    Ok(out)
}

/// Penalty-grid benchmark. Returns one dictionary per (C, D) cell, in
/// C-major order, plus the rendered CSV under the key `csv`.
#[pyfunction]
#[pyo3(signature = (inst, c_values, d_values, trials = 100, seed = 0, metric = "valid", a = 100.0, b = 100.0, threshold = 0.0, max_sweeps = 200, workers = None))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    c_values: Vec<f64>,
    d_values: Vec<f64>,
    trials: usize,
    seed: u64,
    metric: &str,
    a: f64,
    b: f64,
    threshold: f64,
    max_sweeps: usize,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let metric: SuccessMetric = metric.parse().map_err(py_err)?;
    let cfg = pipeline::SweepConfig {
        c_values,
        d_values,
        trials,
        base: params(a, b, 0.0, 0.0, threshold, max_sweeps, 0),
        seed,
        metric,
        workers,
    };
    let report = py
        .detach(|| pipeline::sweep(&inst.inner, &cfg))
        .map_err(py_err)?;
    let cells = report
        .cells
        .iter()
        .map(|cell| {
            let d = PyDict::new(py);
            d.set_item("C", cell.c)?;
            d.set_item("D", cell.d)?;
            d.set_item("best", cell.best)?;
            d.set_item("mean", cell.mean)?;
            d.set_item("worst", cell.worst)?;
            d.set_item("success_rate", cell.success_rate)?;
            d.set_item("mean_sweeps", cell.mean_sweeps)?;
            d.set_item("trials", cell.trials)?;
            d.set_item("valid_runs", cell.valid_runs)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let out = PyDict::new(py);
    out.set_item("cells", cells)?;
    out.set_item("csv", pipeline::render_report(&report, ReportFormat::Csv))?;
    out.set_item(
        "table",
        pipeline::render_report(&report, ReportFormat::Table),
    )?;
    Ok(out)
}

#[pymodule]
fn tsp_hopfield_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(two_opt, m)?)?;
    m.add_function(wrap_pyfunction!(three_opt, m)?)?;
    m.add_function(wrap_pyfunction!(anneal, m)?)?;
    m.add_function(wrap_pyfunction!(hopfield_run, m)?)?;
    m.add_function(wrap_pyfunction!(solve_hybrid, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
