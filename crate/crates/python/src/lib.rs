//! Python bindings: closed-form estimates, the d=3 oracle, Monte Carlo runs,
//! scaling fits, hardware plans and cost tables.
//!
//! Plans and reports come back as plain dicts built from their JSON form.

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use qec_blueprint::cost;
use qec_blueprint::hardware;
use qec_blueprint::qec_sim::{self, NoiseModel, SimConfig};
use qec_blueprint::surface_code::{self as sc, CodeDistance, ErrorRate};
use qec_blueprint::Error;

create_exception!(qec_blueprint_py, AboveThresholdError, PyValueError);

fn err(e: Error) -> PyErr {
    match e {
        Error::AboveThreshold { .. } => AboveThresholdError::new_err(e.to_string()),
        e if e.is_usage() => PyValueError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &value)
}

fn distance(d: u32) -> PyResult<CodeDistance> {
    CodeDistance::new(d).map_err(err)
}

fn rate(p: f64) -> PyResult<ErrorRate> {
    ErrorRate::new(p).map_err(err)
}

/// Constants of `P_L = c1 (c2 p)^((d+1)/2)`.
#[pyclass(module = "qec_blueprint_py", frozen, from_py_object)]
#[derive(Clone)]
struct ScalingParams {
    inner: sc::ScalingParams,
}

#[pymethods]
impl ScalingParams {
    #[new]
    fn new(c1: f64, c2: f64) -> PyResult<Self> {
        Ok(Self { inner: sc::ScalingParams::new(c1, c2).map_err(err)? })
    }

    #[staticmethod]
    fn circuit_level_anchor() -> Self {
        Self { inner: sc::ScalingParams::circuit_level_anchor() }
    }

    #[getter]
    fn c1(&self) -> f64 {
        self.inner.c1
    }

    #[getter]
    fn c2(&self) -> f64 {
        self.inner.c2
    }

    fn threshold(&self) -> f64 {
        self.inner.threshold().get()
    }

    fn logical_error_rate(&self, p: f64, d: u32) -> PyResult<f64> {
        Ok(sc::logical_error_rate(rate(p)?, distance(d)?, &self.inner).value)
    }

    fn logical_error_rate_per_qubits(&self, p: f64, n: u64) -> PyResult<f64> {
        Ok(sc::logical_error_rate_per_qubits(rate(p)?, n, &self.inner).map_err(err)?.value)
    }

    fn required_distance(&self, p: f64, target: f64) -> PyResult<u32> {
        Ok(sc::required_distance(rate(p)?, target, &self.inner).map_err(err)?.get())
    }

    fn __repr__(&self) -> String {
        format!("ScalingParams(c1={}, c2={})", self.inner.c1, self.inner.c2)
    }
}

#[pyfunction]
fn qubits_for_distance(d: u32) -> PyResult<u64> {
    Ok(sc::qubits_for_distance(distance(d)?))
}

#[pyfunction]
fn distance_for_qubits(n: u64) -> PyResult<u32> {
    Ok(sc::distance_for_qubits(n).map_err(err)?.get())
}

#[pyfunction]
fn statevector_memory_bytes(n: u32) -> BigUint {
    sc::statevector_memory_bytes(n)
}

#[pyfunction]
fn format_bytes(bytes: BigUint) -> String {
    sc::format_bytes_decimal(&bytes)
}

/// Exact logical failure probability of d=3 under X-only code-capacity noise.
#[pyfunction]
fn exact_logical_error_rate_d3(p: f64) -> PyResult<f64> {
    Ok(qec_sim::exact_logical_error_rate_d3(rate(p)?).value)
}

/// Monte Carlo estimate; returns the aggregated counts as a dict.
#[pyfunction]
#[pyo3(signature = (d, p, trials, seed=1, noise="code-capacity", x_only=false, rounds=None, measurement_error=None, workers=None))]
#[allow(clippy::too_many_arguments)]
fn run_monte_carlo<'py>(
    py: Python<'py>,
    d: u32,
    p: f64,
    trials: u64,
    seed: u64,
    noise: &str,
    x_only: bool,
    rounds: Option<u32>,
    measurement_error: Option<f64>,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let lattice = qec_sim::PlanarLattice::new(distance(d)?).map_err(err)?;
    let kind: qec_sim::NoiseKind = noise.parse().map_err(err)?;
    let mut model = match kind {
        qec_sim::NoiseKind::CodeCapacity => NoiseModel::code_capacity(rate(p)?),
        qec_sim::NoiseKind::Phenomenological => {
            let m = NoiseModel::phenomenological(rate(p)?, rounds.unwrap_or(d)).map_err(err)?;
            m.with_measurement_error(rate(measurement_error.unwrap_or(p))?).map_err(err)?
        }
    };
    if x_only {
        model = model.x_only();
    }
    let config = SimConfig { workers, ..SimConfig::default() };
    let est = py
        .detach(|| qec_sim::run_monte_carlo_on(&lattice, &model, trials, seed, &config))
        .map_err(err)?;
    to_dict(py, &est)
}

/// Weighted log-space fit; `points` holds `(p, d, p_l_hat, std_err, failures)` tuples.
#[pyfunction]
fn fit_scaling<'py>(py: Python<'py>, points: Vec<(f64, u32, f64, f64, Option<u64>)>) -> PyResult<Bound<'py, PyAny>> {
    let pts: Vec<qec_sim::FitPoint> = points
        .into_iter()
        .map(|(p, d, p_l_hat, std_err, failures)| qec_sim::FitPoint { p, d, p_l_hat, std_err, failures })
        .collect();
    to_dict(py, &qec_sim::fit_scaling(&pts).map_err(err)?)
}

fn params<T: serde::de::DeserializeOwned + Default>(json: Option<&str>) -> PyResult<T> {
    match json {
        None => Ok(T::default()),
        Some(s) => hardware::params_from_json(s).map_err(err),
    }
}

#[pyfunction]
#[pyo3(signature = (qubits, params_json=None))]
fn plan_ion_trap<'py>(py: Python<'py>, qubits: u64, params_json: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &hardware::plan_ion_trap(qubits, &params(params_json)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (d, num_logical=1, params_json=None))]
fn plan_superconducting_bilinear<'py>(
    py: Python<'py>,
    d: u32,
    num_logical: u64,
    params_json: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let plan = hardware::plan_superconducting_bilinear(distance(d)?, num_logical, &params(params_json)?).map_err(err)?;
    to_dict(py, &plan)
}

#[pyfunction]
#[pyo3(signature = (cells_x, cells_y, qubits_per_cell, efficiency=None, params_json=None))]
fn plan_raussendorf_cells<'py>(
    py: Python<'py>,
    cells_x: u64,
    cells_y: u64,
    qubits_per_cell: Option<u64>,
    efficiency: Option<f64>,
    params_json: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let plan = hardware::plan_raussendorf_cells(cells_x, cells_y, qubits_per_cell, efficiency, &params(params_json)?)
        .map_err(err)?;
    to_dict(py, &plan)
}

#[pyfunction]
#[pyo3(signature = (rows, cols, dead=Vec::new()))]
fn grid_summary<'py>(py: Python<'py>, rows: u64, cols: u64, dead: Vec<(u64, u64)>) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &hardware::grid_summary(rows, cols, &dead).map_err(err)?)
}

#[pyfunction]
fn nv_bond_success_probability(q: f64, attempts: u64) -> PyResult<f64> {
    hardware::nv_bond_success_probability(q, attempts).map_err(err)
}

#[pyfunction]
fn nv_attempts_for_confidence(q: f64, confidence: f64) -> PyResult<u64> {
    hardware::nv_attempts_for_confidence(q, confidence).map_err(err)
}

/// Exact machine cost in cents for a price per qubit given as a dollar string.
#[pyfunction]
fn machine_cost_cents(qubits: u64, ppq: &str) -> PyResult<BigUint> {
    let pp = cost::PricePoint::parse(ppq).map_err(err)?;
    Ok(cost::machine_cost(qubits, &pp).map_err(err)?.total_cents)
}

#[pyfunction]
fn format_usd(cents: BigUint) -> String {
    cost::format_usd(&cents)
}

#[pyfunction]
fn parse_usd(s: &str) -> PyResult<BigUint> {
    cost::parse_usd(s).map_err(err)
}

/// Cost table as a dict; defaults reproduce the reference table.
#[pyfunction]
#[pyo3(signature = (counts=None, ppqs=None))]
fn cost_table<'py>(py: Python<'py>, counts: Option<Vec<u64>>, ppqs: Option<Vec<String>>) -> PyResult<Bound<'py, PyAny>> {
    let table = match (counts, ppqs) {
        (None, None) => cost::table1(),
        (counts, ppqs) => {
            let counts = counts.unwrap_or_else(|| cost::TABLE1_COUNTS.iter().map(|c| c.0).collect());
            let ppqs = match ppqs {
                Some(list) => list.iter().map(|s| cost::PricePoint::parse(s)).collect::<Result<Vec<_>, _>>(),
                None => cost::TABLE1_PPQ_CENTS.iter().map(|&c| cost::PricePoint::from_cents(c)).collect(),
            }
            .map_err(err)?;
            cost::cost_table(&counts, &ppqs).map_err(err)?
        }
    };
    to_dict(py, &table)
}

#[pymodule]
fn qec_blueprint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", qec_blueprint::VERSION)?;
    m.add("AboveThresholdError", m.py().get_type::<AboveThresholdError>())?;
    m.add_class::<ScalingParams>()?;
    m.add_function(wrap_pyfunction!(qubits_for_distance, m)?)?;
    m.add_function(wrap_pyfunction!(distance_for_qubits, m)?)?;
    m.add_function(wrap_pyfunction!(statevector_memory_bytes, m)?)?;
    m.add_function(wrap_pyfunction!(format_bytes, m)?)?;
    m.add_function(wrap_pyfunction!(exact_logical_error_rate_d3, m)?)?;
    m.add_function(wrap_pyfunction!(run_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(fit_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(plan_ion_trap, m)?)?;
    m.add_function(wrap_pyfunction!(plan_superconducting_bilinear, m)?)?;
    m.add_function(wrap_pyfunction!(plan_raussendorf_cells, m)?)?;
    m.add_function(wrap_pyfunction!(grid_summary, m)?)?;
    m.add_function(wrap_pyfunction!(nv_bond_success_probability, m)?)?;
    m.add_function(wrap_pyfunction!(nv_attempts_for_confidence, m)?)?;
    m.add_function(wrap_pyfunction!(machine_cost_cents, m)?)?;
    m.add_function(wrap_pyfunction!(format_usd, m)?)?;
    m.add_function(wrap_pyfunction!(parse_usd, m)?)?;
    m.add_function(wrap_pyfunction!(cost_table, m)?)?;
    Ok(())
}
