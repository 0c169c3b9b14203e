//! Python bindings for the matchgate compiler.

use matchgeo::analyzer::{self, Verdict};
use matchgeo::compiler::{self, LogicalCircuit, LogicalGate, PhysicalSchedule, ResourceReport, Strategy, VerifyReport};
use matchgeo::error::Error;
use matchgeo::gate::{c, TwoQubitGate, C64, TAU_ALG};
use matchgeo::graph::{build_family, InteractionGraph, Role};
use matchgeo::io;
use nalgebra::{Matrix2, Matrix4};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Validation(_) | Error::Parse { .. } | Error::Shape(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn matrix2(rows: Vec<Vec<C64>>) -> PyResult<Matrix2<C64>> {
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err(PyValueError::new_err("expected a 2x2 matrix"));
    }
    Ok(Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]))
}

fn matrix4(rows: Vec<Vec<C64>>) -> PyResult<Matrix4<C64>> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(PyValueError::new_err("expected a 4x4 matrix"));
    }
    Ok(Matrix4::from_fn(|r, col| rows[r][col]))
}

fn rows4(m: &Matrix4<C64>) -> Vec<Vec<C64>> {
    (0..4).map(|r| (0..4).map(|col| m[(r, col)]).collect()).collect()
}

/// Two-qubit matchgate `G(A, B)`.
#[pyclass(name = "Gate", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGate {
    inner: TwoQubitGate,
}

#[pymethods]
impl PyGate {
    /// Builds `G(A, B)` from two 2x2 unitaries.
    #[staticmethod]
    fn from_blocks(a: Vec<Vec<C64>>, b: Vec<Vec<C64>>) -> PyResult<Self> {
        Ok(Self { inner: TwoQubitGate::from_blocks(matrix2(a)?, matrix2(b)?).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_matrix(m: Vec<Vec<C64>>) -> PyResult<Self> {
        Ok(Self { inner: TwoQubitGate::from_matrix(matrix4(m)?).map_err(py_err)? })
    }

    #[staticmethod]
    fn fswap() -> Self {
        Self { inner: matchgeo::gate::canonical::fswap() }
    }

    #[staticmethod]
    fn swap() -> Self {
        Self { inner: matchgeo::gate::canonical::swap() }
    }

    #[staticmethod]
    fn hh() -> Self {
        Self { inner: matchgeo::gate::canonical::hh() }
    }

    #[staticmethod]
    fn xx_rotation(theta: f64) -> Self {
        Self { inner: matchgeo::gate::canonical::xx_rotation(theta) }
    }

    fn matrix(&self) -> Vec<Vec<C64>> {
        rows4(self.inner.matrix())
    }

    fn is_matchgate(&self) -> bool {
        self.inner.is_matchgate()
    }

    #[pyo3(signature = (other, tol = TAU_ALG))]
    fn approx_eq(&self, other: &PyGate, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    fn __repr__(&self) -> String {
        format!("Gate(matchgate={})", self.inner.is_matchgate())
    }
}

/// Checks the matchgate condition on a 4x4 matrix.
#[pyfunction]
#[pyo3(signature = (m, tol = TAU_ALG))]
fn is_matchgate(m: Vec<Vec<C64>>, tol: f64) -> PyResult<bool> {
    Ok(matchgeo::gate::is_matchgate(&matrix4(m)?, tol))
}

#[pyclass(name = "Graph", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: InteractionGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, roles = None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, roles: Option<Vec<String>>) -> PyResult<Self> {
        let mut g = InteractionGraph::new(n, edges).map_err(py_err)?;
        if let Some(roles) = roles {
            let roles = roles.iter().map(|r| Role::parse(r)).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
            g = g.with_roles(roles).map_err(py_err)?;
        }
        Ok(Self { inner: g })
    }

    /// Named family such as `"wheel(8)"` or `"chain_with_pendant(9,1)"`.
    #[staticmethod]
    fn family(name: &str) -> PyResult<Self> {
        let f = io::parse_family(name).map_err(py_err)?;
        Ok(Self { inner: build_family(f).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::parse_graph(text).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        io::format_graph(&self.inner)
    }

    fn with_roles(&self, roles: Vec<String>) -> PyResult<Self> {
        let roles = roles.iter().map(|r| Role::parse(r)).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
        Ok(Self { inner: self.inner.clone().with_roles(roles).map_err(py_err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    #[getter]
    fn roles(&self) -> Vec<&'static str> {
        self.inner.roles().iter().map(|r| r.as_str()).collect()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.vertex_count() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn fingerprint(&self) -> String {
        self.inner.fingerprint()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

#[pyclass(name = "Circuit", skip_from_py_object)]
#[derive(Clone)]
struct PyCircuit {
    inner: LogicalCircuit,
}

impl PyCircuit {
    fn push(&mut self, g: LogicalGate) -> PyResult<()> {
        self.inner.push(g).map_err(py_err)
    }
}

#[pymethods]
impl PyCircuit {
    #[new]
    fn new(qubits: usize) -> PyResult<Self> {
        Ok(Self { inner: LogicalCircuit::new(qubits).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::parse_circuit(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        io::format_circuit(&self.inner)
    }

    fn rz(&mut self, q: usize, theta: f64) -> PyResult<()> {
        self.push(LogicalGate::Rz { q, theta })
    }

    fn h(&mut self, q: usize) -> PyResult<()> {
        self.push(LogicalGate::H { q })
    }

    fn cz(&mut self, a: usize, b: usize) -> PyResult<()> {
        self.push(LogicalGate::Cz { a, b })
    }

    fn mg(&mut self, gate: &PyGate, a: usize, b: usize) -> PyResult<()> {
        self.push(LogicalGate::Mg { gate: gate.inner, a, b })
    }

    #[getter]
    fn qubits(&self) -> usize {
        self.inner.qubit_count()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Output amplitudes for the computational basis input `basis`.
    fn simulate(&self, basis: usize) -> PyResult<Vec<C64>> {
        let k = self.inner.qubit_count();
        if basis >= 1 << k {
            return Err(PyValueError::new_err("basis index out of range"));
        }
        let mut amps = vec![c(0., 0.); 1 << k];
        amps[basis] = c(1., 0.);
        let mut state = matchgeo::state::QuantumState::from_amplitudes(k, amps).map_err(py_err)?;
        self.inner.apply_to(&mut state).map_err(py_err)?;
        Ok(state.amplitudes().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Circuit(qubits={}, gates={})", self.inner.qubit_count(), self.inner.len())
    }
}

#[pyclass(name = "Resources", frozen, get_all)]
struct PyResources {
    total_gates: usize,
    fswaps: usize,
    routing_fswaps: usize,
    gadget_fswaps: usize,
    payload_gates: usize,
    physical_qubits: usize,
    fswaps_per_h: Vec<usize>,
    fswaps_per_two_qubit_gate: Vec<usize>,
    /// `(name, limit, observed, pass)` per strategy bound.
    bounds: Vec<(String, f64, f64, bool)>,
}

impl From<&ResourceReport> for PyResources {
    fn from(r: &ResourceReport) -> Self {
        Self {
            total_gates: r.total_gates,
            fswaps: r.fswaps,
            routing_fswaps: r.routing_fswaps,
            gadget_fswaps: r.gadget_fswaps,
            payload_gates: r.payload_gates,
            physical_qubits: r.physical_qubits,
            fswaps_per_h: r.fswaps_per_h.clone(),
            fswaps_per_two_qubit_gate: r.fswaps_per_two_qubit_gate.clone(),
            bounds: r.bounds.iter().map(|b| (b.name.clone(), b.limit, b.observed, b.pass)).collect(),
        }
    }
}

#[pymethods]
impl PyResources {
    fn bounds_pass(&self) -> bool {
        self.bounds.iter().all(|b| b.3)
    }

    fn __repr__(&self) -> String {
        format!("Resources(total_gates={}, fswaps={}, physical_qubits={})", self.total_gates, self.fswaps, self.physical_qubits)
    }
}

#[pyclass(name = "Schedule", frozen)]
struct PySchedule {
    inner: PhysicalSchedule,
}

#[pymethods]
impl PySchedule {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::parse_schedule(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        io::format_schedule(&self.inner)
    }

    #[getter]
    fn strategy(&self) -> &'static str {
        self.inner.strategy.as_str()
    }

    /// `(u, v)` pairs in program order.
    #[getter]
    fn pairs(&self) -> Vec<(usize, usize)> {
        self.inner.applications().map(|a| a.pair).collect()
    }

    fn gate(&self, i: usize) -> PyResult<PyGate> {
        let item = self.inner.items.get(i).ok_or_else(|| PyValueError::new_err("gate index out of range"))?;
        Ok(PyGate { inner: item.app.gate })
    }

    fn resources(&self) -> PyResources {
        PyResources::from(&compiler::count_resources(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.items.len()
    }

    fn __repr__(&self) -> String {
        format!("Schedule(strategy={}, gates={})", self.inner.strategy, self.inner.items.len())
    }
}

#[pyclass(name = "VerifyReport", frozen, get_all)]
struct PyVerifyReport {
    inputs: usize,
    simulated_qubits: usize,
    worst_fidelity: f64,
    norm_error: f64,
    phase: C64,
    phase_deviation: f64,
    worst_ancilla_infidelity: f64,
    layout_restored: bool,
    passed: bool,
}

impl From<VerifyReport> for PyVerifyReport {
    fn from(r: VerifyReport) -> Self {
        Self {
            inputs: r.inputs,
            simulated_qubits: r.simulated_qubits,
            worst_fidelity: r.worst_fidelity,
            norm_error: r.norm_error,
            phase: r.phase,
            phase_deviation: r.phase_deviation,
            worst_ancilla_infidelity: r.worst_ancilla_infidelity,
            layout_restored: r.layout_restored,
            passed: r.passed,
        }
    }
}

#[pymethods]
impl PyVerifyReport {
    fn __repr__(&self) -> String {
        format!("VerifyReport(passed={}, worst_fidelity={})", self.passed, self.worst_fidelity)
    }
}

#[pyclass(name = "Certificate", frozen, get_all)]
struct PyCertificate {
    condition: String,
    witness: Vec<usize>,
    roles: Vec<String>,
    overhead: String,
    strategy: String,
    verified: bool,
}

#[pymethods]
impl PyCertificate {
    fn __repr__(&self) -> String {
        format!("Certificate({} via {})", self.condition, self.strategy)
    }
}

/// Compiles `circuit` onto `graph`; `strategy` is a strategy name or `"auto"`.
#[pyfunction]
#[pyo3(signature = (circuit, graph, strategy = "auto"))]
fn compile(py: Python<'_>, circuit: &PyCircuit, graph: &PyGraph, strategy: &str) -> PyResult<PySchedule> {
    let strategy = Strategy::parse(strategy).map_err(py_err)?;
    let (c, g) = (circuit.inner.clone(), graph.inner.clone());
    let (schedule, _) = py.detach(move || compiler::compile(&c, &g, strategy)).map_err(py_err)?;
    Ok(PySchedule { inner: schedule })
}

#[pyfunction]
#[pyo3(signature = (circuit, schedule, tol = 1e-8))]
fn verify(py: Python<'_>, circuit: &PyCircuit, schedule: &PySchedule, tol: f64) -> PyResult<PyVerifyReport> {
    let c = circuit.inner.clone();
    let report = py.detach(|| compiler::verify(&c, &schedule.inner, tol)).map_err(py_err)?;
    Ok(report.into())
}

/// Certificates for `graph` at `k` qubits. Returns `None` when the search
/// budget ran out without a certificate.
#[pyfunction]
#[pyo3(signature = (graph, k, budget = analyzer::DEFAULT_SEARCH_BUDGET))]
fn analyze(py: Python<'_>, graph: &PyGraph, k: usize, budget: u64) -> PyResult<Option<Vec<PyCertificate>>> {
    let g = graph.inner.clone();
    let a = py.detach(move || analyzer::analyze(&g, k, budget)).map_err(py_err)?;
    if a.verdict() == Verdict::Unknown {
        return Ok(None);
    }
    Ok(Some(
        a.certificates
            .into_iter()
            .map(|c| PyCertificate {
                condition: c.condition.as_str().into(),
                witness: c.witness,
                roles: c.roles.iter().map(|r| r.as_str().to_string()).collect(),
                overhead: c.overhead,
                strategy: c.strategy.as_str().into(),
                verified: c.probe == analyzer::ProbeStatus::Verified,
            })
            .collect(),
    ))
}

#[pyfunction]
fn strategies() -> Vec<&'static str> {
    Strategy::ALL.iter().map(|s| s.as_str()).collect()
}

#[pymodule]
fn matchgeo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGate>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyCircuit>()?;
    m.add_class::<PySchedule>()?;
    m.add_class::<PyResources>()?;
    m.add_class::<PyVerifyReport>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(is_matchgate, m)?)?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(strategies, m)?)?;
    Ok(())
}
