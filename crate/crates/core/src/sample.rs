//! Seeded random sampling of states and parameters. All consumers pass an
//! explicit RNG so that every sampled check is reproducible from a seed.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::qstate::{BlochVector, DensityMatrix};
use crate::recurrence::Rotation3;

/// Uniform direction on the unit sphere (a Haar-random pure qubit state).
pub fn bloch_on_sphere<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(r * phi.cos(), r * phi.sin(), z).expect("unit vector")
}

/// Uniform direction with uniformly drawn radius, covering the interior
/// of the Bloch ball as well as its boundary region.
pub fn bloch_in_ball<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let dir = bloch_on_sphere(rng);
    let radius: f64 = rng.random_range(0.0..=1.0);
    dir * radius
}

/// Random state diagonal in the computational basis: (0, 0, z).
pub fn bloch_diagonal<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    BlochVector::new(0.0, 0.0, rng.random_range(-1.0..=1.0)).expect("axis vector")
}

/// Random qubit density matrix with uniformly drawn Bloch radius.
pub fn qubit_density<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    crate::qstate::bloch_to_density(bloch_in_ball(rng))
}

/// Random full-rank density matrix of the given dimension, A A^dag
/// normalized to unit trace.
pub fn density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let mut a = Array2::<Complex64>::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            a[[i, j]] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    let mut m = Array2::<Complex64>::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += a[[i, k]] * a[[j, k]].conj();
            }
            m[[i, j]] = acc;
        }
    }
    let tr: f64 = (0..dim).map(|i| m[[i, i]].re).sum();
    let m = m.mapv(|z| z / tr);
    DensityMatrix::from_matrix(m).expect("Gram matrix is a valid state")
}

/// Random proper rotation (det +1) from a uniform axis and angle.
pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation3 {
    let axis = bloch_on_sphere(rng);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    Rotation3::from_axis_angle(axis, angle).expect("nonzero axis")
}
