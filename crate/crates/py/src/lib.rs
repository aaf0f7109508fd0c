//! Python bindings for the collisional homogenization simulator.
//!
//! States and unitaries cross the boundary as nested lists of complex
//! numbers; trajectories come back as per-collision tuples. See
//! python/smoke_test.py at the repository root for a worked example.

use ndarray::Array2;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use collihom_core::engine::{EngineConfig, Scheme};
use collihom_core::qstate::{self, BlochVector, CollisionUnitary, DensityMatrix};
use collihom_core::recurrence::{self, InteractionKind, RecurrenceParams, RecurrenceState};
use collihom_core::verify::{self, VerifyLevel};

type Matrix = Vec<Vec<Complex64>>;
type Triple = (f64, f64, f64);
/// (n, fidelity, system Bloch, departed-ancilla Bloch, contraction ratio).
type TrajectoryRow = (u64, f64, Triple, Option<Triple>, Option<f64>);

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(a: &Array2<Complex64>) -> Matrix {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[[i, j]]).collect()).collect()
}

fn from_matrix(rows: &Matrix) -> PyResult<Array2<Complex64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square and nonempty"));
    }
    let mut out = Array2::zeros((n, n));
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[[i, j]] = *v;
        }
    }
    Ok(out)
}

fn density_from(rows: &Matrix) -> PyResult<DensityMatrix> {
    DensityMatrix::from_matrix(from_matrix(rows)?).map_err(err)
}

fn bloch_from(t: Triple) -> PyResult<BlochVector> {
    BlochVector::new(t.0, t.1, t.2).map_err(err)
}

fn parse_scheme(name: &str) -> PyResult<Scheme> {
    match name.to_ascii_lowercase().as_str() {
        "markov" => Ok(Scheme::Markov),
        "s1" => Ok(Scheme::S1),
        "s2" => Ok(Scheme::S2),
        "s3" => Ok(Scheme::S3),
        "fullswap-memory" => Ok(Scheme::FullSwapMemory),
        other => Err(PyValueError::new_err(format!("unknown scheme '{other}'"))),
    }
}

fn parse_kind(name: &str) -> PyResult<InteractionKind> {
    match name.to_ascii_lowercase().as_str() {
        "pswap" => Ok(InteractionKind::PSwap),
        "pstheta" => Ok(InteractionKind::PSTheta),
        other => Err(PyValueError::new_err(format!("unknown interaction '{other}'"))),
    }
}

/// Density matrix (1/2)(I + b . sigma) of a Bloch vector.
#[pyfunction]
fn bloch_to_density(x: f64, y: f64, z: f64) -> PyResult<Matrix> {
    Ok(to_matrix(qstate::bloch_to_density(bloch_from((x, y, z))?).matrix()))
}

/// Bloch vector of a single-qubit density matrix.
#[pyfunction]
fn density_to_bloch(rho: Matrix) -> PyResult<Triple> {
    let b = qstate::density_to_bloch(&density_from(&rho)?).map_err(err)?;
    Ok((b.x, b.y, b.z))
}

/// Partial swap cos(alpha) I + i sin(alpha) SWAP as a 4x4 matrix.
#[pyfunction]
fn pswap(alpha: f64) -> Matrix {
    to_matrix(CollisionUnitary::pswap(alpha).matrix())
}

/// Modified partial swap cos(delta) I + i sin(delta) S_{theta,phi}.
#[pyfunction]
fn pstheta(delta: f64, theta: f64, phi: f64) -> Matrix {
    to_matrix(CollisionUnitary::pstheta(delta, theta, phi).matrix())
}

/// Uhlmann fidelity of two density matrices of equal dimension.
#[pyfunction]
fn fidelity(rho: Matrix, sigma: Matrix) -> PyResult<f64> {
    qstate::fidelity(&density_from(&rho)?, &density_from(&sigma)?).map_err(err)
}

/// Tr(rho sigma), kept alongside fidelity for auditing.
#[pyfunction]
fn trace_overlap(rho: Matrix, sigma: Matrix) -> PyResult<f64> {
    qstate::trace_overlap(&density_from(&rho)?, &density_from(&sigma)?).map_err(err)
}

/// Whether both marginals of u (rho (x) rho) u^dag reproduce rho.
#[pyfunction]
fn homogenizer_condition_check(u: Matrix, rho: Matrix, tol: f64) -> PyResult<bool> {
    let unitary = CollisionUnitary::custom(from_matrix(&u)?).map_err(err)?;
    qstate::homogenizer_condition_check(&unitary, &density_from(&rho)?, tol).map_err(err)
}

/// Classify a 4x4 unitary as "universal", "diagonal-only", or "neither"
/// by sampling the homogenizer conditions.
#[pyfunction]
#[pyo3(signature = (u, samples = 500, tol = 1e-9, seed = 0))]
fn classify_universality(u: Matrix, samples: usize, tol: f64, seed: u64) -> PyResult<String> {
    let unitary = CollisionUnitary::custom(from_matrix(&u)?).map_err(err)?;
    let class = collihom_core::analysis::classify_universality(&unitary, samples, tol, seed)
        .map_err(err)?;
    Ok(match class {
        collihom_core::analysis::Universality::Universal => "universal",
        collihom_core::analysis::Universality::DiagonalOnly => "diagonal-only",
        collihom_core::analysis::Universality::Neither => "neither",
    }
    .to_string())
}

/// Dense-engine trajectory. Returns per-record tuples
/// (n, fidelity, (kx, ky, kz), lout or None, ratio or None).
#[pyfunction]
#[pyo3(signature = (scheme, interaction, alpha, delta, theta, phi, system, ancilla, n, every = 1))]
#[allow(clippy::too_many_arguments)]
fn run_trajectory(
    scheme: &str,
    interaction: &str,
    alpha: f64,
    delta: f64,
    theta: f64,
    phi: f64,
    system: Matrix,
    ancilla: Matrix,
    n: u64,
    every: u64,
) -> PyResult<Vec<TrajectoryRow>> {
    let cfg = EngineConfig {
        scheme: parse_scheme(scheme)?,
        interaction: parse_kind(interaction)?,
        alpha,
        delta,
        theta,
        phi,
        system0: density_from(&system)?,
        ancilla0: density_from(&ancilla)?,
        n_collisions: n,
        record_every: every,
    };
    let records = collihom_core::engine::run(&cfg).map_err(err)?;
    Ok(records
        .into_iter()
        .map(|r| {
            (
                r.n,
                r.fidelity,
                (r.k.x, r.k.y, r.k.z),
                r.l_out.map(|l| (l.x, l.y, l.z)),
                r.ratio,
            )
        })
        .collect())
}

/// Closed-form recurrence trajectory of the system Bloch vector; every
/// ancilla is prepared in state `l`. Returns (n, (kx, ky, kz)) tuples.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn chain_trajectory(
    kind: &str,
    alpha: f64,
    delta: f64,
    theta: f64,
    phi: f64,
    k0: Triple,
    l: Triple,
    n: u64,
) -> PyResult<Vec<(u64, Triple)>> {
    let params = match parse_kind(kind)? {
        InteractionKind::PSwap => RecurrenceParams::pswap(alpha, delta),
        InteractionKind::PSTheta => RecurrenceParams::pstheta(alpha, delta, theta, phi),
    };
    let states = recurrence::run_chain(bloch_from(k0)?, &params, bloch_from(l)?, n).map_err(err)?;
    Ok(states.into_iter().map(|s: RecurrenceState| (s.n, (s.k.x, s.k.y, s.k.z))).collect())
}

/// One memoryless collision in Bloch form; returns (k_next, l_departed).
#[pyfunction]
fn markov_step(k: Triple, l: Triple, alpha: f64) -> PyResult<(Triple, Triple)> {
    let (kn, ln) = recurrence::markov_step(bloch_from(k)?, bloch_from(l)?, alpha);
    Ok(((kn.x, kn.y, kn.z), (ln.x, ln.y, ln.z)))
}

/// Run the cross-validation suites; returns (name, passed, worst) rows.
#[pyfunction]
#[pyo3(signature = (seed = 0, level = "quick"))]
fn run_verification(seed: u64, level: &str) -> PyResult<Vec<(String, bool, f64)>> {
    let level = match level.to_ascii_lowercase().as_str() {
        "quick" => VerifyLevel::Quick,
        "full" => VerifyLevel::Full,
        other => return Err(PyValueError::new_err(format!("unknown level '{other}'"))),
    };
    let report = verify::run_verification(seed, level).map_err(err)?;
    Ok(report.results.into_iter().map(|r| (r.name, r.passed, r.worst)).collect())
}

#[pymodule]
fn collihom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bloch_to_density, m)?)?;
    m.add_function(wrap_pyfunction!(density_to_bloch, m)?)?;
    m.add_function(wrap_pyfunction!(pswap, m)?)?;
    m.add_function(wrap_pyfunction!(pstheta, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(trace_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(homogenizer_condition_check, m)?)?;
    m.add_function(wrap_pyfunction!(classify_universality, m)?)?;
    m.add_function(wrap_pyfunction!(run_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(chain_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(markov_step, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}
