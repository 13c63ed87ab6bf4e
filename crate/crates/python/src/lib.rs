//! Python bindings: scenario configs, benchmark sweeps, preset and custom problems, and their solvers.

use ngma_core::bench::{self, ScenarioConfig};
use ngma_core::error::Error;
use ngma_core::metrics::{self, SicOrder};
use ngma_core::numerics::C64;
use ngma_core::problems::{self, build_problem, NomaScenario, OfdmaScenario, ProblemInstance, ProblemKind, Sense};
use ngma_core::solvers::{self, SolverOptions};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Solver(_) | Error::Budget(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Benchmark sweep configuration.
#[pyclass(name = "ScenarioConfig", module = "ngma", skip_from_py_object)]
#[derive(Clone)]
struct PyScenarioConfig {
    inner: ScenarioConfig,
}

#[pymethods]
impl PyScenarioConfig {
    /// Parses `key = value` text on top of a preset (or the defaults).
    #[new]
    #[pyo3(signature = (text = "", preset = None))]
    fn new(text: &str, preset: Option<&str>) -> PyResult<Self> {
        let base = match preset {
            Some(p) => ScenarioConfig::preset(p).ok_or_else(|| PyValueError::new_err(format!("unknown preset {p:?}")))?,
            None => ScenarioConfig::default(),
        };
        Ok(Self { inner: bench::parse_config(text, base).map_err(py_err)? })
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    #[getter]
    fn trials(&self) -> usize {
        self.inner.trials
    }

    #[setter]
    fn set_trials(&mut self, v: usize) {
        self.inner.trials = v;
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[setter]
    fn set_seed(&mut self, v: u64) {
        self.inner.seed = v;
    }

    #[getter]
    fn k_users(&self) -> usize {
        self.inner.k_users
    }

    #[getter]
    fn m_irs(&self) -> usize {
        self.inner.m_irs
    }

    #[getter]
    fn p_max_dbm_list(&self) -> Vec<f64> {
        self.inner.p_max_dbm_list.clone()
    }

    #[getter]
    fn schemes(&self) -> Vec<&'static str> {
        self.inner.schemes.iter().map(|s| s.name()).collect()
    }

    #[setter]
    fn set_schemes(&mut self, names: Vec<String>) -> PyResult<()> {
        self.inner.schemes = bench::parse_schemes(&names.join(",")).map_err(PyValueError::new_err)?;
        Ok(())
    }

    fn __repr__(&self) -> String {
        format!("ScenarioConfig(k_users={}, m_irs={}, trials={}, seed={})", self.inner.k_users, self.inner.m_irs, self.inner.trials, self.inner.seed)
    }
}

/// Outcome of a solver run.
#[pyclass(name = "Solution", module = "ngma", get_all, skip_from_py_object)]
#[derive(Clone)]
struct PySolution {
    x: Vec<f64>,
    objective: f64,
    max_residual: f64,
    status: String,
    gap: Option<f64>,
    iterations: usize,
}

#[pymethods]
impl PySolution {
    fn __repr__(&self) -> String {
        format!("Solution(status={:?}, objective={}, gap={:?})", self.status, self.objective, self.gap)
    }
}

impl From<problems::Solution> for PySolution {
    fn from(s: problems::Solution) -> Self {
        Self { x: s.x, objective: s.objective, max_residual: s.max_residual, status: s.status.to_string(), gap: s.gap, iterations: s.iterations }
    }
}

/// An immutable optimization instance.
#[pyclass(name = "Problem", module = "ngma")]
struct PyProblem {
    inner: ProblemInstance,
}

#[pymethods]
impl PyProblem {
    /// One of the compiled problem presets.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        bench::problem_preset(name).map(|inner| Self { inner }).ok_or_else(|| PyValueError::new_err(format!("unknown problem preset {name:?}")))
    }

    /// Multi-carrier NOMA sum-rate maximisation; `h[k][m]` is user k's gain on subcarrier m.
    #[staticmethod]
    fn noma(h: Vec<Vec<C64>>, sigmas: Vec<f64>, p_max: f64, r_min: Vec<f64>) -> PyResult<Self> {
        let kind = ProblemKind::NomaSumRate(NomaScenario { h, sigmas, p_max, r_min });
        Ok(Self { inner: build_problem(kind).map_err(py_err)? })
    }

    /// OFDMA transmit-power minimisation with per-user stream counts and rate targets.
    #[staticmethod]
    fn ofdma(h: Vec<Vec<C64>>, streams: Vec<usize>, sigma2: f64, p_max: Vec<f64>, r_min: Vec<f64>) -> PyResult<Self> {
        let kind = ProblemKind::OfdmaPowerMin(OfdmaScenario { h, streams, sigma2, p_max, r_min });
        Ok(Self { inner: build_problem(kind).map_err(py_err)? })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.layout.dim()
    }

    #[getter]
    fn maximize(&self) -> bool {
        self.inner.sense == Sense::Maximize
    }

    fn evaluate(&self, x: Vec<f64>) -> PyResult<f64> {
        problems::evaluate_objective(&self.inner, &x).map_err(py_err)
    }

    /// (feasible, max_residual) at tolerance `tol`.
    #[pyo3(signature = (x, tol = 1e-7))]
    fn check(&self, x: Vec<f64>, tol: f64) -> PyResult<(bool, f64)> {
        let f = problems::check_feasibility(&self.inner, &x, tol).map_err(py_err)?;
        Ok((f.feasible, f.max_residual()))
    }

    /// Runs the default solver for this problem kind.
    fn solve(&self, py: Python<'_>) -> PyResult<PySolution> {
        let inst = &self.inner;
        py.detach(|| bench::solve_default(inst, &SolverOptions::default())).map(Into::into).map_err(py_err)
    }

    /// Enumeration reference: closed-form inner solves where available, else a grid.
    fn oracle(&self, py: Python<'_>) -> PyResult<PySolution> {
        let inst = &self.inner;
        py.detach(|| bench::oracle_default(inst, &SolverOptions::default())).map(|r| r.solution.into()).map_err(py_err)
    }

    /// Exhaustive search over a uniform grid of `n` points per continuous coordinate.
    fn grid_search(&self, py: Python<'_>, n: usize) -> PyResult<PySolution> {
        let inst = &self.inner;
        py.detach(|| solvers::solve_exhaustive(inst, solvers::GridSpec::Uniform(n), &SolverOptions::default()))
            .map(|r| r.solution.into())
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Problem(kind={:?}, dim={})", self.inner.kind.name(), self.inner.layout.dim())
    }
}

/// Runs the configured sweep and returns the CSV text.
#[pyfunction]
#[pyo3(signature = (config, jobs = None, timing = false))]
fn run_sweep(py: Python<'_>, config: &PyScenarioConfig, jobs: Option<usize>, timing: bool) -> PyResult<String> {
    let cfg = config.inner.clone();
    py.detach(|| bench::run_configured_sweep(&cfg, jobs)).map(|r| r.to_csv(timing)).map_err(py_err)
}

/// Per-user rates on one NOMA subcarrier; `sequence[0]` is decoded first.
#[pyfunction]
fn noma_subcarrier_rates(gains: Vec<f64>, powers: Vec<f64>, sigmas: Vec<f64>, sequence: Vec<usize>) -> PyResult<Vec<f64>> {
    let order = SicOrder::from_sequence(sequence).map_err(py_err)?;
    metrics::noma_subcarrier_rates(&gains, &powers, &sigmas, &order).map_err(py_err)
}

#[pyfunction]
fn scenario_presets() -> Vec<&'static str> {
    bench::PRESETS.to_vec()
}

#[pyfunction]
fn problem_presets() -> Vec<&'static str> {
    bench::PROBLEM_PRESETS.to_vec()
}

#[pymodule]
fn ngma(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenarioConfig>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyProblem>()?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(noma_subcarrier_rates, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_presets, m)?)?;
    m.add_function(wrap_pyfunction!(problem_presets, m)?)?;
    Ok(())
}
