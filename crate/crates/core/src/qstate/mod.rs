//! Dense complex linear algebra for one to three qubits: Bloch vectors,
//! density matrices, collision unitaries, tensor products, partial traces,
//! and Uhlmann fidelity.
//!
//! Everything here is the brute-force ground truth against which the
//! closed-form recurrences in [`crate::recurrence`] are validated.

use ndarray::Array2;
use num_complex::Complex64;

use crate::{Error, Result};

mod eigen;

pub use eigen::{eigh, sqrt_psd};

/// Tolerance for structural checks: hermiticity, unitarity, unit trace.
pub const TOL_STRUCTURAL: f64 = 1e-12;
/// Slack allowed below zero for eigenvalues of nominally PSD matrices.
pub const PSD_SLACK: f64 = 1e-10;
/// Default tolerance for user-facing state comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The identity matrix of the given dimension.
pub fn identity(dim: usize) -> Array2<Complex64> {
    Array2::eye(dim)
}

/// Pauli matrices sigma_x, sigma_y, sigma_z for `axis` = 0, 1, 2.
pub fn pauli(axis: usize) -> Array2<Complex64> {
    let mut m = Array2::zeros((2, 2));
    match axis {
        0 => {
            m[[0, 1]] = c(1.0, 0.0);
            m[[1, 0]] = c(1.0, 0.0);
        }
        1 => {
            m[[0, 1]] = c(0.0, -1.0);
            m[[1, 0]] = c(0.0, 1.0);
        }
        2 => {
            m[[0, 0]] = c(1.0, 0.0);
            m[[1, 1]] = c(-1.0, 0.0);
        }
        _ => panic!("pauli axis must be 0, 1, or 2"),
    }
    m
}

/// Conjugate transpose.
pub fn dagger(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|z| z.conj())
}

/// Kronecker product, left factor owning the most significant qubits.
pub fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn hermiticity_defect(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    worst
}

fn qubit_count(dim: usize) -> Result<usize> {
    match dim {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        _ => Err(Error::Dimension(format!(
            "dimension {dim} is not one of 2, 4, 8"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Bloch vectors
// ---------------------------------------------------------------------------

/// Real three-vector of a qubit state, rho = (1/2)(I + v . sigma).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ZERO: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: BlochVector = BlochVector { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: BlochVector = BlochVector { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };

    /// Checked constructor; rejects vectors outside the Bloch ball
    /// (squared norm above 1 + 1e-12).
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = BlochVector { x, y, z };
        if !v.x.is_finite() || !v.y.is_finite() || !v.z.is_finite() {
            return Err(Error::InvalidState("non-finite Bloch component".into()));
        }
        if v.norm_sq() > 1.0 + TOL_STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "Bloch vector ({x}, {y}, {z}) lies outside the unit ball"
            )));
        }
        Ok(v)
    }

    /// Unchecked constructor for values produced by the trusted update
    /// rules, which preserve the ball up to rounding.
    pub(crate) fn new_unchecked(x: f64, y: f64, z: f64) -> Self {
        debug_assert!(x * x + y * y + z * z <= 1.0 + 1e-9);
        BlochVector { x, y, z }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &BlochVector) -> BlochVector {
        BlochVector {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    /// Euclidean distance to another Bloch vector.
    pub fn distance(&self, other: &BlochVector) -> f64 {
        (*self - *other).norm()
    }
}

impl std::ops::Add for BlochVector {
    type Output = BlochVector;
    fn add(self, rhs: BlochVector) -> BlochVector {
        BlochVector { x: self.x + rhs.x, y: self.y + rhs.y, z: self.z + rhs.z }
    }
}

impl std::ops::Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, rhs: BlochVector) -> BlochVector {
        BlochVector { x: self.x - rhs.x, y: self.y - rhs.y, z: self.z - rhs.z }
    }
}

impl std::ops::Mul<f64> for BlochVector {
    type Output = BlochVector;
    fn mul(self, rhs: f64) -> BlochVector {
        BlochVector { x: self.x * rhs, y: self.y * rhs, z: self.z * rhs }
    }
}

impl std::ops::Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector { x: -self.x, y: -self.y, z: -self.z }
    }
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// Dense Hermitian, PSD, unit-trace matrix on one, two, or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: Array2<Complex64>,
}

impl DensityMatrix {
    /// Validating constructor. Checks dimension, hermiticity, unit trace,
    /// and positivity (eigenvalues no lower than -1e-10).
    pub fn from_matrix(mat: Array2<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        qubit_count(mat.nrows())?;
        let herm = hermiticity_defect(&mat);
        if herm > TOL_STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "density matrix is not Hermitian (defect {herm:e})"
            )));
        }
        let tr: Complex64 = (0..mat.nrows()).map(|i| mat[[i, i]]).sum();
        if (tr - c(1.0, 0.0)).norm() > TOL_STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let (w, _) = eigh(&mat);
        if w[0] < -PSD_SLACK {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {:e}",
                w[0]
            )));
        }
        Ok(DensityMatrix { mat })
    }

    /// The maximally mixed state I/dim.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        qubit_count(dim)?;
        let mut m = Array2::zeros((dim, dim));
        for i in 0..dim {
            m[[i, i]] = c(1.0 / dim as f64, 0.0);
        }
        Ok(DensityMatrix { mat: m })
    }

    /// Pure state |psi><psi| from amplitudes, normalized on entry.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        qubit_count(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let norm = norm_sq.sqrt();
        let n = amplitudes.len();
        let mut m = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                m[[i, j]] = (amplitudes[i] / norm) * (amplitudes[j] / norm).conj();
            }
        }
        Ok(DensityMatrix { mat: m })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn qubits(&self) -> usize {
        qubit_count(self.dim()).expect("validated at construction")
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    /// Tensor product with another state; qubit 0 of `self` stays qubit 0.
    /// States wider than three qubits are rejected.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let dim = self.dim() * other.dim();
        if dim > 8 {
            return Err(Error::Capacity(format!(
                "tensor product of dims {} and {} exceeds the 3-qubit working space",
                self.dim(),
                other.dim()
            )));
        }
        Ok(DensityMatrix { mat: kron(&self.mat, &other.mat) })
    }

    /// Max-norm distance between the entries of two states.
    pub fn max_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.mat, &other.mat)
    }
}

/// rho = (1/2)(I + b . sigma).
pub fn bloch_to_density(b: BlochVector) -> DensityMatrix {
    let mut m = Array2::zeros((2, 2));
    m[[0, 0]] = c((1.0 + b.z) / 2.0, 0.0);
    m[[1, 1]] = c((1.0 - b.z) / 2.0, 0.0);
    m[[0, 1]] = c(b.x / 2.0, -b.y / 2.0);
    m[[1, 0]] = c(b.x / 2.0, b.y / 2.0);
    DensityMatrix { mat: m }
}

/// Inverse of [`bloch_to_density`]; requires a single-qubit state.
pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::Dimension(format!(
            "Bloch vector is defined for dimension 2, got {}",
            rho.dim()
        )));
    }
    let m = &rho.mat;
    Ok(BlochVector {
        x: 2.0 * m[[1, 0]].re,
        y: 2.0 * m[[1, 0]].im,
        z: m[[0, 0]].re - m[[1, 1]].re,
    })
}

// ---------------------------------------------------------------------------
// Collision unitaries
// ---------------------------------------------------------------------------

/// Parameter tag carried by a [`CollisionUnitary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitaryParams {
    PSwap { alpha: f64 },
    PSTheta { delta: f64, theta: f64, phi: f64 },
    Swap,
    Custom,
}

/// Two-qubit collision unitary (4x4, unitary to 1e-12).
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionUnitary {
    mat: Array2<Complex64>,
    params: UnitaryParams,
}

/// The two-qubit SWAP operator, (1/2)(I(x)I + sum_i sigma_i(x)sigma_i).
pub fn swap_matrix() -> Array2<Complex64> {
    let mut s = Array2::zeros((4, 4));
    s[[0, 0]] = c(1.0, 0.0);
    s[[1, 2]] = c(1.0, 0.0);
    s[[2, 1]] = c(1.0, 0.0);
    s[[3, 3]] = c(1.0, 0.0);
    s
}

/// The swap-like generator S_{theta,phi}: identity on |00> and |11>,
/// [[cos t, sin t e^{i phi}], [sin t e^{-i phi}, -cos t]] on the
/// span of |01>, |10>. At theta = pi/2, phi = 0 it reduces to SWAP.
pub fn s_theta_phi(theta: f64, phi: f64) -> Array2<Complex64> {
    let mut s = Array2::zeros((4, 4));
    s[[0, 0]] = c(1.0, 0.0);
    s[[3, 3]] = c(1.0, 0.0);
    s[[1, 1]] = c(theta.cos(), 0.0);
    s[[2, 2]] = c(-theta.cos(), 0.0);
    s[[1, 2]] = c(theta.sin() * phi.cos(), -theta.sin() * phi.sin());
    s[[2, 1]] = c(theta.sin() * phi.cos(), theta.sin() * phi.sin());
    s
}

impl CollisionUnitary {
    /// Partial swap U(alpha) = cos(alpha) I + i sin(alpha) SWAP.
    pub fn pswap(alpha: f64) -> CollisionUnitary {
        let mat = identity(4).mapv(|z| z * alpha.cos())
            + swap_matrix().mapv(|z| z * c(0.0, alpha.sin()));
        CollisionUnitary { mat, params: UnitaryParams::PSwap { alpha } }
    }

    /// Modified partial swap U(delta) = cos(delta) I + i sin(delta) S_{theta,phi}.
    pub fn pstheta(delta: f64, theta: f64, phi: f64) -> CollisionUnitary {
        let mat = identity(4).mapv(|z| z * delta.cos())
            + s_theta_phi(theta, phi).mapv(|z| z * c(0.0, delta.sin()));
        CollisionUnitary { mat, params: UnitaryParams::PSTheta { delta, theta, phi } }
    }

    /// The exact SWAP.
    pub fn swap() -> CollisionUnitary {
        CollisionUnitary { mat: swap_matrix(), params: UnitaryParams::Swap }
    }

    /// Arbitrary user-supplied two-qubit unitary, checked at 1e-12.
    pub fn custom(mat: Array2<Complex64>) -> Result<CollisionUnitary> {
        if mat.dim() != (4, 4) {
            return Err(Error::Dimension(format!(
                "collision unitary must be 4x4, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let u = CollisionUnitary { mat, params: UnitaryParams::Custom };
        let defect = u.unitarity_defect();
        if defect > TOL_STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "matrix is not unitary (defect {defect:e})"
            )));
        }
        Ok(u)
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    pub fn params(&self) -> UnitaryParams {
        self.params
    }

    /// Max-norm of U U^dag - I.
    pub fn unitarity_defect(&self) -> f64 {
        let uud = self.mat.dot(&dagger(&self.mat));
        max_abs_diff(&uud, &identity(4))
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Embed a two-qubit unitary so it acts on the ordered qubit pair
/// `(pair.0, pair.1)` of a `width`-qubit register and as identity on the
/// rest. `pair.0` addresses the first tensor factor of `u`.
pub fn embed_pair(
    u: &Array2<Complex64>,
    pair: (usize, usize),
    width: usize,
) -> Result<Array2<Complex64>> {
    if u.dim() != (4, 4) {
        return Err(Error::Dimension("embedded unitary must be 4x4".into()));
    }
    if !(2..=3).contains(&width) {
        return Err(Error::Dimension(format!("width must be 2 or 3, got {width}")));
    }
    let (p, q) = pair;
    if p == q || p >= width || q >= width {
        return Err(Error::Index(format!(
            "qubit pair ({p}, {q}) is invalid for width {width}"
        )));
    }
    let dim = 1 << width;
    let bit = |index: usize, qubit: usize| (index >> (width - 1 - qubit)) & 1;
    let mut out = Array2::zeros((dim, dim));
    for row in 0..dim {
        for col in 0..dim {
            let mut spectator_match = true;
            for qb in 0..width {
                if qb != p && qb != q && bit(row, qb) != bit(col, qb) {
                    spectator_match = false;
                    break;
                }
            }
            if !spectator_match {
                continue;
            }
            let ur = 2 * bit(row, p) + bit(row, q);
            let uc = 2 * bit(col, p) + bit(col, q);
            out[[row, col]] = u[[ur, uc]];
        }
    }
    Ok(out)
}

/// Conjugation rho -> U rho U^dag with full invariant re-validation.
pub fn apply(rho: &DensityMatrix, u: &Array2<Complex64>) -> Result<DensityMatrix> {
    if u.dim() != (rho.dim(), rho.dim()) {
        return Err(Error::Dimension(format!(
            "unitary is {}x{} but state has dimension {}",
            u.nrows(),
            u.ncols(),
            rho.dim()
        )));
    }
    let out = u.dot(rho.matrix()).dot(&dagger(u));
    DensityMatrix::from_matrix(out)
}

/// Reduced state on the qubits listed in `keep` (ascending original
/// order is preserved); the rest are traced out.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let width = rho.qubits();
    if keep.is_empty() {
        return Err(Error::Index("keep set must be nonempty".into()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() {
        return Err(Error::Index("keep set has repeated indices".into()));
    }
    if *keep_sorted.last().unwrap() >= width {
        return Err(Error::Index(format!(
            "keep index {} out of range for {width} qubits",
            keep_sorted.last().unwrap()
        )));
    }
    let traced: Vec<usize> = (0..width).filter(|i| !keep_sorted.contains(i)).collect();
    let kw = keep_sorted.len();
    let tw = traced.len();
    let out_dim = 1 << kw;

    // Compose a full-register basis index from kept and traced bit patterns.
    let index_of = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &qb) in keep_sorted.iter().enumerate() {
            let b = (kept_bits >> (kw - 1 - pos)) & 1;
            idx |= b << (width - 1 - qb);
        }
        for (pos, &qb) in traced.iter().enumerate() {
            let b = (traced_bits >> (tw.max(1) - 1 - pos)) & 1;
            idx |= b << (width - 1 - qb);
        }
        idx
    };

    let mut out = Array2::zeros((out_dim, out_dim));
    for a in 0..out_dim {
        for b in 0..out_dim {
            let mut acc = c(0.0, 0.0);
            for t in 0..(1 << tw) {
                acc += rho.matrix()[[index_of(a, t), index_of(b, t)]];
            }
            out[[a, b]] = acc;
        }
    }
    DensityMatrix::from_matrix(out)
}

/// Uhlmann fidelity F = Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped
/// into [0, 1] against sub-ulp rounding.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "fidelity operands have dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let r = sqrt_psd(rho.matrix(), PSD_SLACK)?;
    let inner = r.dot(sigma.matrix()).dot(&r);
    // Hermitize before the eigensolve; the product picks up rounding skew.
    let herm = (&inner + &dagger(&inner)).mapv(|z| z * 0.5);
    let (w, _) = eigh(&herm);
    let mut f = 0.0;
    for lambda in w {
        if lambda < -PSD_SLACK {
            return Err(Error::InvalidState(format!(
                "fidelity inner matrix has eigenvalue {lambda:e}"
            )));
        }
        f += lambda.max(0.0).sqrt();
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Tr(rho sigma). Converges to Tr(eta^2) < 1 for mixed targets, so it is
/// not the quantity that saturates at 1 in homogenization plots; kept for
/// auditing alongside [`fidelity`].
pub fn trace_overlap(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "trace overlap operands have dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let prod = rho.matrix().dot(sigma.matrix());
    Ok((0..prod.nrows()).map(|i| prod[[i, i]].re).sum())
}

/// Both-marginal fixed-point test for a homogenizing collision: true iff
/// Tr_S{U (rho(x)rho) U^dag} and Tr_B{U (rho(x)rho) U^dag} equal rho
/// within `tol` (max-norm).
pub fn homogenizer_condition_check(
    u: &CollisionUnitary,
    rho: &DensityMatrix,
    tol: f64,
) -> Result<bool> {
    if rho.dim() != 2 {
        return Err(Error::Dimension("condition check needs a qubit state".into()));
    }
    let pair = rho.tensor(rho)?;
    let collided = apply(&pair, u.matrix())?;
    let kept_bath = partial_trace(&collided, &[1])?;
    let kept_sys = partial_trace(&collided, &[0])?;
    Ok(kept_bath.max_diff(rho) <= tol && kept_sys.max_diff(rho) <= tol)
}

#[cfg(test)]
mod tests;
