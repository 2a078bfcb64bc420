//! Python bindings. Arms are 0-based, as in the Rust API; learner names such
//! as `"fixed:2"` keep their 1-based text form.

use std::path::PathBuf;

use fair_mab::experiment::{parse_config, run_experiment as run_config};
use fair_mab::metrics::{BoundReport, MetricSeries};
use fair_mab::oracle::{AuditFailure, AuditReport};
use fair_mab::{
    audit_trace, presets, Algorithm, CheckpointPlan, Error, FairMabInstance, InstanceParams,
    LearnerSpec, RunTrace,
};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(msg) => PyOSError::new_err(msg),
        Error::AuditFailed(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A validated bandit instance: arm means, fairness quotas and tolerance α.
#[pyclass(name = "Instance", module = "fair_mab", frozen)]
struct PyInstance {
    inner: FairMabInstance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (means, fairness, alpha = 0.0))]
    fn new(means: Vec<f64>, fairness: Vec<f64>, alpha: f64) -> PyResult<Self> {
        let inner = InstanceParams::new(means, fairness, alpha)
            .validate()
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    /// `"paper-instance-1"` or `"paper-instance-2"`.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        let params =
            presets::by_name(name).ok_or_else(|| to_py(Error::UnknownPreset(name.into())))?;
        Ok(Self {
            inner: params.validate().map_err(to_py)?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn means(&self) -> Vec<f64> {
        self.inner.means().to_vec()
    }

    #[getter]
    fn fairness(&self) -> Vec<f64> {
        self.inner.fairness().to_vec()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn best_arm(&self) -> usize {
        self.inner.best_arm()
    }

    #[getter]
    fn gaps(&self) -> Vec<f64> {
        self.inner.gaps().deltas
    }

    fn with_alpha(&self, alpha: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_alpha(alpha).map_err(to_py)?,
        })
    }

    /// Closed-form bounds at `horizon` as a dict.
    fn bounds<'py>(&self, py: Python<'py>, horizon: u64) -> PyResult<Bound<'py, PyDict>> {
        let r: BoundReport = BoundReport::compute(&self.inner, horizon).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("horizon", r.horizon)?;
        d.set_item("s_set", r.s_set.into_iter().collect::<Vec<_>>())?;
        d.set_item("fair_ucb_rregret_bound", r.fair_ucb_rregret_bound)?;
        d.set_item("t_fair_ucb_rregret_bound", r.t_fair_ucb_rregret_bound)?;
        d.set_item("ucb_regret_bound", r.ucb_regret_bound)?;
        d.set_item("alpha_regret_bound", r.alpha_regret_bound)?;
        d.set_item("distribution_free_bound", r.distribution_free_bound)?;
        d.set_item("alpha_threshold", r.alpha_threshold)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(means={:?}, fairness={:?}, alpha={})",
            self.inner.means(),
            self.inner.fairness(),
            self.inner.alpha()
        )
    }
}

/// Result of one run: the full event history plus checkpoint states.
#[pyclass(name = "Trace", module = "fair_mab", frozen)]
struct PyTrace {
    inner: RunTrace,
}

#[pymethods]
impl PyTrace {
    #[getter]
    fn horizon(&self) -> u64 {
        self.inner.horizon()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn algo(&self) -> String {
        self.inner.algo.clone()
    }

    /// `(t, arm, reward)` for every round.
    #[getter]
    fn events(&self) -> Vec<(u64, usize, u8)> {
        self.inner
            .events
            .iter()
            .map(|e| (e.t, e.arm, e.reward))
            .collect()
    }

    #[getter]
    fn arms(&self) -> Vec<usize> {
        self.inner.events.iter().map(|e| e.arm).collect()
    }

    #[getter]
    fn checkpoints(&self) -> Vec<u64> {
        self.inner.checkpoint_rounds()
    }

    /// Pull counts after round `t` (default: the last round).
    #[pyo3(signature = (t = None))]
    fn pulls(&self, t: Option<u64>) -> PyResult<Vec<u64>> {
        let state = self
            .inner
            .state_at(t.unwrap_or(self.inner.horizon()))
            .map_err(to_py)?;
        Ok(state.pulls().to_vec())
    }

    /// Regret, r-Regret and both violation modes at every checkpoint.
    fn metrics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = MetricSeries::from_trace(&self.inner);
        let d = PyDict::new(py);
        d.set_item("t", s.checkpoints)?;
        d.set_item("regret", s.regret)?;
        d.set_item("r_regret", s.r_regret)?;
        d.set_item("viol_real", s.max_violation_real)?;
        d.set_item("viol_floor", s.max_violation_floor)?;
        Ok(d)
    }

    /// Replays the events against the trace's own instance.
    fn audit(&self, py: Python<'_>) -> PyResult<PyAuditReport> {
        let trace = &self.inner;
        let report = py
            .detach(|| audit_trace(trace, &trace.instance))
            .map_err(to_py)?;
        Ok(PyAuditReport { inner: report })
    }

    fn write_events(&self, path: PathBuf) -> PyResult<()> {
        let file = std::fs::File::create(path).map_err(|e| to_py(e.into()))?;
        self.inner
            .write_events(std::io::BufWriter::new(file))
            .map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.events.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trace(algo={:?}, seed={}, horizon={})",
            self.inner.algo,
            self.inner.seed,
            self.inner.horizon()
        )
    }
}

fn failure_dict<'py>(py: Python<'py>, f: &AuditFailure) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("t", f.t)?;
    d.set_item("arm", f.arm)?;
    d.set_item("rule", f.rule.to_string())?;
    d.set_item("value", f.value)?;
    Ok(d)
}

#[pyclass(name = "AuditReport", module = "fair_mab", frozen)]
struct PyAuditReport {
    inner: AuditReport,
}

#[pymethods]
impl PyAuditReport {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed
    }

    #[getter]
    fn rounds(&self) -> u64 {
        self.inner.rounds
    }

    #[getter]
    fn fairness_violations(&self) -> u64 {
        self.inner.fairness_violations
    }

    #[getter]
    fn max_floor_violation(&self) -> f64 {
        self.inner.max_floor_violation
    }

    #[getter]
    fn first_failure<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyDict>>> {
        self.inner
            .first_failure
            .as_ref()
            .map(|f| failure_dict(py, f))
            .transpose()
    }

    #[getter]
    fn first_fairness_violation<'py>(
        &self,
        py: Python<'py>,
    ) -> PyResult<Option<Bound<'py, PyDict>>> {
        self.inner
            .first_fairness_violation
            .as_ref()
            .map(|f| failure_dict(py, f))
            .transpose()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __bool__(&self) -> bool {
        self.inner.passed
    }
}

/// Runs `algo` ("fair-learn", "t-fair-ucb" or "bare-learner") for `horizon` rounds.
#[pyfunction]
#[pyo3(signature = (instance, horizon, algo = "fair-learn", learner = "ucb1", seed = 0, checkpoints = "auto"))]
fn run(
    py: Python<'_>,
    instance: &PyInstance,
    horizon: u64,
    algo: &str,
    learner: &str,
    seed: u64,
    checkpoints: &str,
) -> PyResult<PyTrace> {
    let learner: LearnerSpec = learner.parse().map_err(to_py)?;
    let algo = Algorithm::from_names(algo, learner).map_err(to_py)?;
    let plan: CheckpointPlan = checkpoints.parse().map_err(to_py)?;
    let inst = &instance.inner;
    let inner = py
        .detach(|| algo.run(inst, seed, horizon, &plan))
        .map_err(to_py)?;
    Ok(PyTrace { inner })
}

/// Runs a TOML experiment config. Outputs go to `out` when given (overriding the
/// config's own `out`); returns the summary, file names and audit status.
#[pyfunction]
#[pyo3(signature = (config, out = None))]
fn run_experiment<'py>(
    py: Python<'py>,
    config: &str,
    out: Option<PathBuf>,
) -> PyResult<Bound<'py, PyDict>> {
    let config = parse_config(config).map_err(to_py)?;
    let output = py.detach(|| run_config(&config)).map_err(to_py)?;
    if let Some(dir) = out.or(config.out.clone()) {
        output.write_to(&dir).map_err(to_py)?;
    }
    let d = PyDict::new(py);
    d.set_item("summary", &output.summary)?;
    d.set_item("files", output.files.keys().cloned().collect::<Vec<_>>())?;
    d.set_item("audits_passed", output.audits_passed())?;
    if let Some(bytes) = output
        .files
        .get("metrics.csv")
        .or(output.files.get("sweep.csv"))
    {
        d.set_item("csv", String::from_utf8_lossy(bytes).into_owned())?;
    }
    Ok(d)
}

#[pymodule]
#[pyo3(name = "fair_mab")]
fn fair_mab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyTrace>()?;
    m.add_class::<PyAuditReport>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
