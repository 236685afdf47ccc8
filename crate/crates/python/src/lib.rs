//! Python bindings: states, `K(z)`, CHSH optimization, entropy and the
//! teleportation and swapping protocols.

use hes_core::bellchsh::{self, ChshSettings};
use hes_core::entanglement::{self, Bipartition};
use hes_core::fock::{self, ADAPTIVE_TAIL_TOL, DEFAULT_TRUNCATION_TOL};
use hes_core::protocols::{self, RngStream};
use hes_core::pseudospin::{self, build_pseudospin};
use hes_core::{Complex64, HesError, HesLabel, ParityBellLabel, SpinBellLabel};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: HesError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn label<L: std::str::FromStr<Err = HesError>>(s: &str) -> PyResult<L> {
    s.parse().map_err(err)
}

fn dim_or_adaptive(dim: Option<usize>, zs: &[f64]) -> PyResult<usize> {
    if let Some(d) = dim {
        return Ok(d);
    }
    let mut d = 0;
    for &z in zs {
        d = d.max(fock::adaptive_dim(z).map_err(err)?);
    }
    Ok(d)
}

/// Pure state on a product of qubits and truncated modes.
#[pyclass(name = "StateVector", module = "hes", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStateVector {
    inner: fock::StateVector,
}

#[pymethods]
impl PyStateVector {
    /// Factor dimensions, first factor first.
    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.space().dims()
    }

    #[getter]
    fn space(&self) -> String {
        self.inner.space().to_string()
    }

    /// Row-major amplitudes, first factor most significant.
    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amps().iter().copied().collect()
    }

    #[getter]
    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    #[getter]
    fn truncation_residual(&self) -> f64 {
        self.inner.truncation_residual()
    }

    fn inner(&self, other: &PyStateVector) -> PyResult<Complex64> {
        fock::inner(&self.inner, &other.inner).map_err(err)
    }

    /// `|⟨self|other⟩|²`.
    fn fidelity(&self, other: &PyStateVector) -> PyResult<f64> {
        fock::fidelity(&self.inner, &other.inner).map_err(err)
    }

    fn tensor(&self, other: &PyStateVector) -> PyStateVector {
        fock::tensor(&self.inner, &other.inner).into()
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!("StateVector({})", self.inner.space())
    }
}

impl From<fock::StateVector> for PyStateVector {
    fn from(inner: fock::StateVector) -> Self {
        Self { inner }
    }
}

#[pyclass(module = "hes", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct ChshResult {
    value: f64,
    /// `[θa, φa, θa′, φa′, θb, φb, θb′, φb′]`.
    angles: Vec<f64>,
    iterations: usize,
    restarts_used: usize,
}

impl From<bellchsh::ChshResult> for ChshResult {
    fn from(r: bellchsh::ChshResult) -> Self {
        Self {
            value: r.value,
            angles: r
                .settings
                .angles()
                .iter()
                .flat_map(|&(t, p)| [t, p])
                .collect(),
            iterations: r.iterations,
            restarts_used: r.restarts_used,
        }
    }
}

#[pymethods]
impl ChshResult {
    fn __repr__(&self) -> String {
        format!(
            "ChshResult(value={}, iterations={})",
            self.value, self.iterations
        )
    }
}

#[pyclass(module = "hes", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct TeleportResult {
    outcome: String,
    probability: f64,
    probabilities: Vec<f64>,
    correction: String,
    fidelity: f64,
    output_state: PyStateVector,
    target_state: PyStateVector,
}

impl From<protocols::TeleportRecord> for TeleportResult {
    fn from(r: protocols::TeleportRecord) -> Self {
        Self {
            outcome: r.outcome.key().to_string(),
            probability: r.outcome_probability,
            probabilities: r.probabilities.to_vec(),
            correction: r.correction.name().to_string(),
            fidelity: r.fidelity,
            output_state: r.output_state.into(),
            target_state: r.target_state.into(),
        }
    }
}

#[pymethods]
impl TeleportResult {
    fn __repr__(&self) -> String {
        format!(
            "TeleportResult(outcome={:?}, correction={:?}, fidelity={})",
            self.outcome, self.correction, self.fidelity
        )
    }
}

#[pyclass(module = "hes", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct SwapResult {
    outcome: String,
    parity_state: String,
    probability: f64,
    coefficients: Vec<Complex64>,
    fidelity: f64,
    entropy: f64,
    mode_state: PyStateVector,
}

#[pymethods]
impl SwapResult {
    fn __repr__(&self) -> String {
        format!(
            "SwapResult(outcome={:?}, parity_state={:?}, entropy={})",
            self.outcome, self.parity_state, self.entropy
        )
    }
}

#[pyfunction]
#[pyo3(signature = (z, tol = DEFAULT_TRUNCATION_TOL))]
fn mode_dim_for(z: f64, tol: f64) -> PyResult<usize> {
    fock::mode_dim_for(z, tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (z, tol = ADAPTIVE_TAIL_TOL))]
fn adaptive_dim(z: f64, tol: f64) -> PyResult<usize> {
    fock::mode_dim_for(z, tol).map_err(err)
}

#[pyfunction]
fn even_coherent(z: f64, dim: usize) -> PyResult<PyStateVector> {
    fock::even_coherent(z, dim).map(Into::into).map_err(err)
}

#[pyfunction]
fn odd_coherent(z: f64, dim: usize) -> PyResult<PyStateVector> {
    fock::odd_coherent(z, dim).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (z, tol = 1e-15))]
fn k_series(z: f64, tol: f64) -> PyResult<f64> {
    pseudospin::k_series(z, tol).map_err(err)
}

#[pyfunction]
fn k_matrix(z: f64, dim: usize) -> PyResult<f64> {
    pseudospin::k_matrix(z, dim).map_err(err)
}

/// Hybrid Bell state `φ±(z)`, `ψ±(z)` on qubit ⊗ mode.
#[pyfunction]
#[pyo3(signature = (label, z, dim = None))]
fn hes_state(label: &str, z: f64, dim: Option<usize>) -> PyResult<PyStateVector> {
    let d = dim_or_adaptive(dim, &[z])?;
    protocols::hes_state(self::label(label)?, z, d)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (label, z, z_prime, dim = None))]
fn parity_bell_state(
    label: &str,
    z: f64,
    z_prime: f64,
    dim: Option<usize>,
) -> PyResult<PyStateVector> {
    let d = dim_or_adaptive(dim, &[z, z_prime])?;
    protocols::parity_bell_state(self::label::<ParityBellLabel>(label)?, z, z_prime, d)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn spin_bell_state(label: &str) -> PyResult<PyStateVector> {
    Ok(protocols::spin_bell_state(self::label::<SpinBellLabel>(label)?).into())
}

/// Entropy in ebits across `side_a` against the remaining factors.
#[pyfunction]
#[pyo3(signature = (state, side_a = vec![0]))]
fn entanglement_entropy(state: &PyStateVector, side_a: Vec<usize>) -> PyResult<f64> {
    let cut = Bipartition::new(&side_a, state.inner.space().len()).map_err(err)?;
    entanglement::entanglement_entropy(&state.inner, &cut).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (state, side_a = vec![0]))]
fn schmidt_coefficients(state: &PyStateVector, side_a: Vec<usize>) -> PyResult<Vec<f64>> {
    let cut = Bipartition::new(&side_a, state.inner.space().len()).map_err(err)?;
    Ok(entanglement::schmidt_coefficients(&state.inner, &cut)
        .map_err(err)?
        .coefficients)
}

fn ops_for(state: &PyStateVector) -> PyResult<pseudospin::PseudospinOps> {
    let dims = state.inner.space().dims();
    if dims.len() != 2 {
        return Err(PyValueError::new_err(format!(
            "expected qubit ⊗ mode, got {}",
            state.inner.space()
        )));
    }
    build_pseudospin(dims[1]).map_err(err)
}

/// `⟨B⟩` at `[θa, φa, θa′, φa′, θb, φb, θb′, φb′]`.
#[pyfunction]
fn chsh_value(state: &PyStateVector, angles: [f64; 8]) -> PyResult<f64> {
    let ops = ops_for(state)?;
    bellchsh::chsh_value(&state.inner, &ChshSettings::from_angles(&angles), &ops).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (z, label = "phi+"))]
fn analytic_optimum(z: f64, label: &str) -> PyResult<ChshResult> {
    bellchsh::analytic_optimum_for(self::label::<HesLabel>(label)?, z)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (state, restarts = 16, seed = 0))]
fn optimize_chsh(
    py: Python<'_>,
    state: &PyStateVector,
    restarts: usize,
    seed: u64,
) -> PyResult<ChshResult> {
    let ops = ops_for(state)?;
    let inner = state.inner.clone();
    py.detach(move || bellchsh::optimize_chsh(&inner, &ops, restarts, seed))
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, channel = "phi+", z = 1.0, dim = None, seed = 0))]
fn teleport_spin(
    alpha: Complex64,
    beta: Complex64,
    channel: &str,
    z: f64,
    dim: Option<usize>,
    seed: u64,
) -> PyResult<TeleportResult> {
    let d = dim_or_adaptive(dim, &[z])?;
    protocols::teleport_spin(
        alpha,
        beta,
        label(channel)?,
        z,
        d,
        &mut RngStream::new(seed),
    )
    .map(Into::into)
    .map_err(err)
}

/// Teleports `α|z″⟩_e + β|z″⟩_o` onto the channel's qubit.
#[pyfunction]
#[pyo3(signature = (alpha, beta, z_input, channel = "phi+", z = 1.0, dim = None, seed = 0))]
fn teleport_parity(
    alpha: Complex64,
    beta: Complex64,
    z_input: f64,
    channel: &str,
    z: f64,
    dim: Option<usize>,
    seed: u64,
) -> PyResult<TeleportResult> {
    let d = dim_or_adaptive(dim, &[z, z_input])?;
    protocols::teleport_parity(
        alpha,
        beta,
        z_input,
        label(channel)?,
        z,
        d,
        &mut RngStream::new(seed),
    )
    .map(Into::into)
    .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (z, z_prime, dim = None, seed = 0))]
fn swap_entanglement(z: f64, z_prime: f64, dim: Option<usize>, seed: u64) -> PyResult<SwapResult> {
    let d = dim_or_adaptive(dim, &[z, z_prime])?;
    let r = protocols::swap_entanglement(z, z_prime, d, &mut RngStream::new(seed)).map_err(err)?;
    Ok(SwapResult {
        outcome: r.outcome.key().to_string(),
        parity_state: r.parity_label.symbol().to_string(),
        probability: r.probability,
        coefficients: r.coefficients.to_vec(),
        fidelity: r.fidelity,
        entropy: r.entropy,
        mode_state: r.mode_state.into(),
    })
}

#[pymodule]
pub fn hes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStateVector>()?;
    m.add_class::<ChshResult>()?;
    m.add_class::<TeleportResult>()?;
    m.add_class::<SwapResult>()?;
    m.add("CIRELSON_BOUND", bellchsh::CIRELSON_BOUND)?;
    m.add_function(wrap_pyfunction!(mode_dim_for, m)?)?;
    m.add_function(wrap_pyfunction!(adaptive_dim, m)?)?;
    m.add_function(wrap_pyfunction!(even_coherent, m)?)?;
    m.add_function(wrap_pyfunction!(odd_coherent, m)?)?;
    m.add_function(wrap_pyfunction!(k_series, m)?)?;
    m.add_function(wrap_pyfunction!(k_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(hes_state, m)?)?;
    m.add_function(wrap_pyfunction!(parity_bell_state, m)?)?;
    m.add_function(wrap_pyfunction!(spin_bell_state, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_value, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_optimum, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_chsh, m)?)?;
    m.add_function(wrap_pyfunction!(teleport_spin, m)?)?;
    m.add_function(wrap_pyfunction!(teleport_parity, m)?)?;
    m.add_function(wrap_pyfunction!(swap_entanglement, m)?)?;
    Ok(())
}
