//! Python bindings for the telecloning simulator.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use telecloning::channel::{self, DisentanglementParams};
use telecloning::conversion::{self, ConversionMode};
use telecloning::efficiency;
use telecloning::entanglement::{self, PairKind};
use telecloning::protocol::{self, CopySlot, InputState, Outcome};
use telecloning::quantum;

fn py_err(e: telecloning::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params(n: [f64; 4]) -> PyResult<DisentanglementParams> {
    let p = DisentanglementParams::from_array(n);
    p.check_physical().map_err(py_err)?;
    Ok(p)
}

fn copy_slot(copy: u8) -> PyResult<CopySlot> {
    CopySlot::from_number(copy).map_err(py_err)
}

fn mode(name: &str) -> PyResult<ConversionMode> {
    name.parse().map_err(py_err)
}

/// Pure state over labelled qubits, amplitudes big-endian in `register` order.
#[pyclass(name = "PureState", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPureState(quantum::PureState);

#[pymethods]
impl PyPureState {
    #[new]
    fn new(register: Vec<String>, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        let labels = register.iter().map(|s| parse_label(s)).collect::<PyResult<Vec<_>>>()?;
        quantum::PureState::new(labels, amplitudes).map(Self).map_err(py_err)
    }

    #[getter]
    fn register(&self) -> Vec<String> {
        self.0.register().iter().map(|q| q.to_string()).collect()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    fn amplitude_of(&self, bits: &str) -> PyResult<Complex64> {
        self.0.amplitude_of(bits).map_err(py_err)
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn reorder(&self, order: Vec<String>) -> PyResult<Self> {
        let labels = order.iter().map(|s| parse_label(s)).collect::<PyResult<Vec<_>>>()?;
        self.0.reorder(&labels).map(Self).map_err(py_err)
    }

    fn overlap(&self, other: &PyPureState) -> PyResult<f64> {
        self.0.overlap(&other.0).map_err(py_err)
    }

    fn global_entanglement(&self) -> f64 {
        entanglement::global_entanglement(&self.0).value()
    }

    fn __len__(&self) -> usize {
        self.0.dim()
    }

    fn __repr__(&self) -> String {
        format!("PureState(register={:?}, dim={})", self.register(), self.0.dim())
    }
}

fn parse_label(s: &str) -> PyResult<quantum::QubitLabel> {
    use quantum::QubitLabel::*;
    Ok(match s {
        "X" => X,
        "P" => P,
        "A" => A,
        "C1" => C1,
        "C2" => C2,
        _ => match s.strip_prefix('q').and_then(|k| k.parse().ok()) {
            Some(k) => Anon(k),
            None => return Err(PyValueError::new_err(format!("unknown qubit label {s:?}"))),
        },
    })
}

/// One measurement outcome of a protocol run.
#[pyclass(name = "OutcomeRecord", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyOutcomeRecord {
    outcome: String,
    probability: f64,
    fidelity_1: Option<f64>,
    fidelity_2: Option<f64>,
}

#[pymethods]
impl PyOutcomeRecord {
    fn __repr__(&self) -> String {
        format!(
            "OutcomeRecord({}, p={:.6}, f1={:?}, f2={:?})",
            self.outcome, self.probability, self.fidelity_1, self.fidelity_2
        )
    }
}

fn record(r: &protocol::OutcomeRecord) -> PyOutcomeRecord {
    PyOutcomeRecord {
        outcome: r.outcome.name().to_owned(),
        probability: r.probability,
        fidelity_1: r.fidelity(CopySlot::First),
        fidelity_2: r.fidelity(CopySlot::Second),
    }
}

/// Result of a GTC→GTP conversion.
#[pyclass(name = "ConversionResult", frozen, get_all)]
struct PyConversionResult {
    final_state: PyPureState,
    mode: String,
    cpro_1: f64,
    cpro_2: f64,
    closed_form: (f64, f64),
    threshold: f64,
    gtp_parameter: f64,
}

impl From<conversion::ConversionResult> for PyConversionResult {
    fn from(r: conversion::ConversionResult) -> Self {
        Self {
            final_state: PyPureState(r.final_state),
            mode: r.mode.to_string(),
            cpro_1: r.cpro_1,
            cpro_2: r.cpro_2,
            closed_form: (r.closed_form[0], r.closed_form[1]),
            threshold: r.threshold,
            gtp_parameter: r.gtp_parameter,
        }
    }
}

/// Disentangled channel over `[P, A, C1, C2]` for `n = (nP, nA, nC1, nC2)`.
#[pyfunction]
fn build_channel(n: [f64; 4]) -> PyResult<PyPureState> {
    Ok(PyPureState(channel::build_channel(&params(n)?)))
}

/// Runs the protocol on input `alpha|0> + beta|1>`. With `accept`, only those
/// outcomes are kept and their probabilities renormalized.
#[pyfunction]
#[pyo3(signature = (alpha, beta, n, m, accept=None))]
fn run_protocol(
    alpha: Complex64,
    beta: Complex64,
    n: [f64; 4],
    m: f64,
    accept: Option<Vec<String>>,
) -> PyResult<Vec<PyOutcomeRecord>> {
    let input = InputState::new(alpha, beta).map_err(py_err)?;
    let p = params(n)?;
    match accept {
        None => {
            let run = protocol::run_protocol(&input, &p, m).map_err(py_err)?;
            Ok(run.outcomes.iter().map(record).collect())
        }
        Some(names) => {
            let outcomes = names
                .iter()
                .map(|s| s.parse::<Outcome>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(py_err)?;
            let res = protocol::run_probabilistic(&input, &p, m, &outcomes).map_err(py_err)?;
            Ok(res.accepted.iter().map(record).collect())
        }
    }
}

#[pyfunction]
#[pyo3(signature = (n, m, copy=1))]
fn cpro_general(n: [f64; 4], m: f64, copy: u8) -> PyResult<f64> {
    Ok(efficiency::cpro_general(&params(n)?, m, copy_slot(copy)?))
}

#[pyfunction]
fn cpro_port(n_p: f64, m: f64) -> f64 {
    efficiency::cpro_port(n_p, m)
}

#[pyfunction]
fn cpro_ancilla(n_a: f64, m: f64) -> f64 {
    efficiency::cpro_ancilla(n_a, m)
}

#[pyfunction]
#[pyo3(signature = (n_c1, n_c2, m, copy=1))]
fn cpro_copy(n_c1: f64, n_c2: f64, m: f64, copy: u8) -> PyResult<f64> {
    Ok(efficiency::cpro_copy(n_c1, n_c2, m, copy_slot(copy)?))
}

/// Average outcome probabilities in the order phi+, phi-, psi+, psi-.
#[pyfunction]
fn avg_probabilities(n: [f64; 4], m: f64) -> PyResult<[f64; 4]> {
    Ok(efficiency::avg_probabilities(&params(n)?, m))
}

/// Exact Haar-averaged efficiencies of both copies from protocol runs.
#[pyfunction]
fn moment_average(n: [f64; 4], m: f64) -> PyResult<(f64, f64)> {
    let r = efficiency::moment_average_report(&params(n)?, m).map_err(py_err)?;
    Ok((r.cpro[0], r.cpro[1]))
}

/// Monte Carlo efficiencies `[(mean, stderr), (mean, stderr)]` for both copies.
#[pyfunction]
#[pyo3(signature = (n, m, samples, seed=42))]
fn monte_carlo(py: Python<'_>, n: [f64; 4], m: f64, samples: u64, seed: u64) -> PyResult<[(f64, f64); 2]> {
    let p = params(n)?;
    let est = py
        .detach(|| {
            efficiency::monte_carlo_on_channel(&channel::build_channel(&p), Complex64::new(m, 0.0), samples, seed)
        })
        .map_err(py_err)?;
    Ok(est.map(|e| (e.mean, e.stderr)))
}

#[pyfunction]
fn global_entanglement(state: &PyPureState) -> f64 {
    state.global_entanglement()
}

#[pyfunction]
fn eg1_single(n: f64) -> f64 {
    entanglement::eg1_single(n).value()
}

/// `kind` is "same" for (nA, nP) or (nC1, nC2), "mixed" otherwise.
#[pyfunction]
fn eg1_pair(n_i: f64, n_j: f64, kind: &str) -> PyResult<f64> {
    let kind = match kind {
        "same" => PairKind::SameRole,
        "mixed" => PairKind::Mixed,
        _ => {
            return Err(PyValueError::new_err(format!(
                "kind must be 'same' or 'mixed', got {kind:?}"
            )))
        }
    };
    Ok(entanglement::eg1_pair(n_i, n_j, kind).value())
}

#[pyfunction]
fn convert_local(n_c1: f64) -> PyResult<PyConversionResult> {
    conversion::convert_local(n_c1).map(Into::into).map_err(py_err)
}

#[pyfunction]
fn convert_global(n_c1: f64) -> PyResult<PyConversionResult> {
    conversion::convert_global(n_c1).map(Into::into).map_err(py_err)
}

/// Conversion tuned for `n_C1 = 1, n_C2 = 0` applied with the given `n_C2`.
#[pyfunction]
fn convert_borrowed(mode_name: &str, n_c2: f64) -> PyResult<PyConversionResult> {
    conversion::convert_borrowed(mode(mode_name)?, n_c2)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn post_local_efficiencies(n_c2: f64) -> (f64, f64) {
    conversion::post_local_efficiencies(n_c2)
}

#[pyfunction]
fn post_global_efficiencies(n_c2: f64) -> (f64, f64) {
    conversion::post_global_efficiencies(n_c2)
}

#[pyfunction]
fn transition_threshold(mode_name: &str) -> PyResult<f64> {
    Ok(conversion::transition_threshold(mode(mode_name)?))
}

#[pymodule]
#[pyo3(name = "telecloning")]
fn telecloning_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPureState>()?;
    m.add_class::<PyOutcomeRecord>()?;
    m.add_class::<PyConversionResult>()?;
    m.add_function(wrap_pyfunction!(build_channel, m)?)?;
    m.add_function(wrap_pyfunction!(run_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(cpro_general, m)?)?;
    m.add_function(wrap_pyfunction!(cpro_port, m)?)?;
    m.add_function(wrap_pyfunction!(cpro_ancilla, m)?)?;
    m.add_function(wrap_pyfunction!(cpro_copy, m)?)?;
    m.add_function(wrap_pyfunction!(avg_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(moment_average, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(global_entanglement, m)?)?;
    m.add_function(wrap_pyfunction!(eg1_single, m)?)?;
    m.add_function(wrap_pyfunction!(eg1_pair, m)?)?;
    m.add_function(wrap_pyfunction!(convert_local, m)?)?;
    m.add_function(wrap_pyfunction!(convert_global, m)?)?;
    m.add_function(wrap_pyfunction!(convert_borrowed, m)?)?;
    m.add_function(wrap_pyfunction!(post_local_efficiencies, m)?)?;
    m.add_function(wrap_pyfunction!(post_global_efficiencies, m)?)?;
    m.add_function(wrap_pyfunction!(transition_threshold, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
