use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sparsecut::instances::{self, RandomSpec};
use sparsecut::io::{parse_instance, write_instance};
use sparsecut::relaxations::{self, write_witness, SolverConfig, Witness};
use sparsecut::rounding::{self, RoundConfig};
use sparsecut::{stcut, Cut, Error, InstancePair, WeightedGraph};

fn py_err(e: Error) -> PyErr {
    if e.is_solver_failure() || matches!(e, Error::Verification(_)) {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn solver_config(solver_tol: f64) -> SolverConfig {
    SolverConfig {
        solver_tol,
        ..SolverConfig::default()
    }
}

/// A pair of weighted graphs on the same vertices: the graph `g` and the
/// demand graph `h`.
#[pyclass(frozen, skip_from_py_object, name = "Instance")]
#[derive(Clone)]
pub struct PyInstance {
    inner: InstancePair,
}

#[pymethods]
impl PyInstance {
    /// Edges are `(u, v, weight)`; `u == v` is a self-loop.
    #[new]
    fn new(n: usize, g: Vec<(usize, usize, f64)>, h: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        let g = WeightedGraph::from_edges(n, &g).map_err(py_err)?;
        let h = WeightedGraph::from_edges(n, &h).map_err(py_err)?;
        Ok(Self { inner: InstancePair::new(g, h).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_instance(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        write_instance(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn g_edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.g.edges()
    }

    fn h_edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.h.edges()
    }

    /// Sparsity of the cut with the given members (`inf` if it separates no demand).
    fn sparsity(&self, members: Vec<usize>) -> PyResult<f64> {
        Ok(sparsecut::sparsity(&self.inner, &cut(self.inner.n(), &members)?).sigma)
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={})", self.inner.n())
    }
}

fn cut(n: usize, members: &[usize]) -> PyResult<Cut> {
    if let Some(&v) = members.iter().find(|&&v| v >= n) {
        return Err(PyValueError::new_err(format!("vertex {v} out of range for n = {n}")));
    }
    Ok(Cut::from_members(n, members))
}

#[pyclass(frozen, get_all, name = "Relaxation")]
pub struct PyRelaxation {
    kind: String,
    value: f64,
    rounds: usize,
    /// Potentials for the spectral relaxation, empty otherwise.
    potentials: Vec<f64>,
    /// Witness in the text format accepted by `sparsecut verify`.
    witness: String,
}

#[pymethods]
impl PyRelaxation {
    fn __repr__(&self) -> String {
        format!("Relaxation(kind={:?}, value={})", self.kind, self.value)
    }
}

fn relaxation(kind: &str, rv: relaxations::RelaxationValue) -> PyRelaxation {
    let potentials = match &rv.witness {
        Witness::Spectral(x) => x.clone(),
        _ => Vec::new(),
    };
    PyRelaxation {
        kind: kind.into(),
        value: rv.value,
        rounds: rv.rounds,
        potentials,
        witness: write_witness(&rv),
    }
}

#[pyfunction]
fn solve_spectral(instance: &PyInstance) -> PyResult<PyRelaxation> {
    Ok(relaxation("spectral", sparsecut::solve_spectral(&instance.inner).map_err(py_err)?))
}

#[pyfunction]
#[pyo3(signature = (instance, solver_tol = 1e-6))]
fn solve_leighton_rao(instance: &PyInstance, solver_tol: f64) -> PyResult<PyRelaxation> {
    let rv = sparsecut::solve_leighton_rao(&instance.inner, &solver_config(solver_tol)).map_err(py_err)?;
    Ok(relaxation("lr", rv))
}

#[pyfunction]
#[pyo3(signature = (instance, solver_tol = 1e-6))]
fn solve_goemans_linial(instance: &PyInstance, solver_tol: f64) -> PyResult<PyRelaxation> {
    let rv = sparsecut::solve_goemans_linial(&instance.inner, &solver_config(solver_tol)).map_err(py_err)?;
    Ok(relaxation("sdp", rv))
}

/// Exact minimum sparsity: `(members, sigma)` with vertex 0 in the cut.
#[pyfunction]
fn brute_force_opt(instance: &PyInstance) -> PyResult<(Vec<usize>, f64)> {
    let (c, rep) = sparsecut::brute_force_opt(&instance.inner).map_err(py_err)?;
    Ok((c.members(), rep.sigma))
}

/// Best threshold cut of the vertex values `x`: `(members, sigma)`.
#[pyfunction]
fn sweep_cut(x: Vec<f64>, instance: &PyInstance) -> PyResult<(Vec<usize>, f64)> {
    let (c, rep) = sparsecut::sweep_cut(&x, &instance.inner).map_err(py_err)?;
    Ok((c.members(), rep.sigma))
}

#[pyclass(frozen, get_all, name = "Certificate")]
pub struct PyCertificate {
    members: Vec<usize>,
    sigma: f64,
    relax_value: f64,
    branch: String,
    bound: f64,
    bound_holds: bool,
    text: String,
}

#[pymethods]
impl PyCertificate {
    fn __repr__(&self) -> String {
        format!(
            "Certificate(sigma={}, bound={}, holds={})",
            self.sigma, self.bound, self.bound_holds
        )
    }
}

/// Rounds the SDP of an instance whose demand graph has rank one.
#[pyfunction]
#[pyo3(signature = (instance, seed, solver_tol = 1e-6))]
fn round_rank1(instance: &PyInstance, seed: u64, solver_tol: f64) -> PyResult<PyCertificate> {
    let config = RoundConfig { solver: solver_config(solver_tol), seed };
    let c = sparsecut::round_rank1(&instance.inner, &config).map_err(py_err)?;
    Ok(PyCertificate {
        members: c.cut.members(),
        sigma: c.report.sigma,
        relax_value: c.relax_value,
        branch: c.branch.name().into(),
        bound: c.bound,
        bound_holds: c.bound_holds,
        text: rounding::write_certificate(&c),
    })
}

/// Rounds through a rank-1 demand graph `approx` that approximates the
/// instance's demand cut by cut.
#[pyfunction]
#[pyo3(signature = (instance, approx, seed, solver_tol = 1e-6))]
fn round_rank1_via_approx(
    instance: &PyInstance,
    approx: &PyInstance,
    seed: u64,
    solver_tol: f64,
) -> PyResult<PyCertificate> {
    let config = RoundConfig { solver: solver_config(solver_tol), seed };
    let c = rounding::round_rank1_via_approx(&instance.inner, &approx.inner.h, &config).map_err(py_err)?;
    Ok(PyCertificate {
        members: c.inner.cut.members(),
        sigma: c.report.sigma,
        relax_value: c.inner.relax_value,
        branch: c.inner.branch.name().into(),
        bound: c.bound,
        bound_holds: c.bound_holds,
        text: rounding::write_approx_certificate(&c),
    })
}

#[pyclass(frozen, get_all, name = "StCertificate")]
pub struct PyStCertificate {
    potentials: Vec<f64>,
    epsilon: f64,
    members: Vec<usize>,
    cut_fraction: f64,
    /// `(u, v, f)` with flow `f` from `u` to `v`.
    flow: Vec<(usize, usize, f64)>,
    flow_value: f64,
    ratio: f64,
    holds: bool,
}

/// Electrical s-t potentials of the instance's graph, their sweep cut and flow.
#[pyfunction]
fn st_certificate(instance: &PyInstance, s: usize, t: usize) -> PyResult<PyStCertificate> {
    let c = stcut::st_certificate(&instance.inner.g, s, t).map_err(py_err)?;
    Ok(PyStCertificate {
        epsilon: c.epsilon(),
        potentials: c.potentials.x.clone(),
        members: c.cut.members(),
        cut_fraction: c.cut_fraction,
        flow: c.flow.edges.clone(),
        flow_value: c.flow.value,
        ratio: c.ratio,
        holds: c.holds,
    })
}

#[pyfunction]
fn mix_instance(instance: &PyInstance, eps: f64, delta: f64) -> PyResult<PyInstance> {
    let p = sparsecut::MixParams::new(eps, delta).map_err(py_err)?;
    Ok(PyInstance { inner: sparsecut::mix_instance(&instance.inner, &p).map_err(py_err)? })
}

/// Path of length `k` glued to a `k`-vertex head: `(instance, witness)`.
#[pyfunction]
fn gen_lollipop(k: usize, seed: u64) -> PyResult<(PyInstance, Vec<f64>)> {
    let l = instances::gen_lollipop(k, seed).map_err(py_err)?;
    Ok((PyInstance { inner: l.pair }, l.witness))
}

#[pyfunction]
#[pyo3(signature = (n, seed, d = 3))]
fn gen_expander_clique(n: usize, seed: u64, d: usize) -> PyResult<PyInstance> {
    Ok(PyInstance { inner: instances::gen_expander_clique(n, d, seed).map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (n, seed, density = 0.4, rank1 = false))]
fn gen_random(n: usize, seed: u64, density: f64, rank1: bool) -> PyResult<PyInstance> {
    let spec = RandomSpec { n, density, rank1 };
    Ok(PyInstance { inner: instances::gen_random(&spec, seed).map_err(py_err)? })
}

#[pymodule]
#[pyo3(name = "sparsecut")]
fn sparsecut_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyRelaxation>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyStCertificate>()?;
    m.add_function(wrap_pyfunction!(solve_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(solve_leighton_rao, m)?)?;
    m.add_function(wrap_pyfunction!(solve_goemans_linial, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_opt, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_cut, m)?)?;
    m.add_function(wrap_pyfunction!(round_rank1, m)?)?;
    m.add_function(wrap_pyfunction!(round_rank1_via_approx, m)?)?;
    m.add_function(wrap_pyfunction!(st_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(mix_instance, m)?)?;
    m.add_function(wrap_pyfunction!(gen_lollipop, m)?)?;
    m.add_function(wrap_pyfunction!(gen_expander_clique, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random, m)?)?;
    Ok(())
}
