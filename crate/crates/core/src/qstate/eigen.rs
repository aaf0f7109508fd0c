//! Eigendecomposition of small Hermitian matrices via cyclic Jacobi
//! rotations. The matrices in this crate never exceed 8x8, so a dense
//! Jacobi sweep is both fast and fully deterministic.

use ndarray::Array2;
use num_complex::Complex64;

use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition `a = v diag(w) v^dag` of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order with matching columns of `v`.
/// Only the Hermitian part of `a` is consulted; the caller is expected to
/// have checked hermiticity beforehand.
pub fn eigh(a: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = Array2::<Complex64>::eye(n);

    let scale: f64 = (0..n).map(|i| m[[i, i]].re.abs()).fold(1.0, f64::max);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m[[p, q]].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[[i, i]].re.partial_cmp(&m[[j, j]].re).unwrap());
    let w: Vec<f64> = order.iter().map(|&i| m[[i, i]].re).collect();
    let mut vs = Array2::<Complex64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vs[[row, col]] = v[[row, src]];
        }
    }
    (w, vs)
}

/// One Jacobi rotation zeroing the (p, q) entry of the Hermitian matrix `m`.
///
/// The 2x2 pivot block [[app, apq], [conj(apq), aqq]] is diagonalized by
/// W = diag(1, conj(apq)/|apq|) . R(t) with the classic stable choice of
/// tangent t, and W is applied as m <- W^dag m W, v <- v W on the full
/// (p, q) plane.
fn rotate(m: &mut Array2<Complex64>, v: &mut Array2<Complex64>, p: usize, q: usize) {
    let apq = m[[p, q]];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[[p, p]].re;
    let aqq = m[[q, q]].re;
    let phase = apq.conj() / mag;

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // W = diag(1, phase) . [[c, s], [-s, c]] embedded at (p, q).
    let wpp = Complex64::new(c, 0.0);
    let wpq = Complex64::new(s, 0.0);
    let wqp = -phase * s;
    let wqq = phase * c;

    let n = m.nrows();
    // m <- W^dag m W applied on rows then columns.
    for j in 0..n {
        let mpj = m[[p, j]];
        let mqj = m[[q, j]];
        m[[p, j]] = wpp.conj() * mpj + wqp.conj() * mqj;
        m[[q, j]] = wpq.conj() * mpj + wqq.conj() * mqj;
    }
    for i in 0..n {
        let mip = m[[i, p]];
        let miq = m[[i, q]];
        m[[i, p]] = mip * wpp + miq * wqp;
        m[[i, q]] = mip * wpq + miq * wqq;
    }
    // Force the pivot to exact zero and the diagonal to exact real.
    m[[p, q]] = Complex64::new(0.0, 0.0);
    m[[q, p]] = Complex64::new(0.0, 0.0);
    m[[p, p]] = Complex64::new(m[[p, p]].re, 0.0);
    m[[q, q]] = Complex64::new(m[[q, q]].re, 0.0);

    for i in 0..v.nrows() {
        let vip = v[[i, p]];
        let viq = v[[i, q]];
        v[[i, p]] = vip * wpp + viq * wqp;
        v[[i, q]] = vip * wpq + viq * wqq;
    }
}

/// Square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in [-`psd_slack`, 0) are clamped to zero to absorb rounding
/// drift; anything lower is a genuine positivity violation.
pub fn sqrt_psd(a: &Array2<Complex64>, psd_slack: f64) -> Result<Array2<Complex64>> {
    let (w, v) = eigh(a);
    let n = a.nrows();
    let mut out = Array2::<Complex64>::zeros((n, n));
    let mut roots = Vec::with_capacity(n);
    for &lambda in &w {
        if lambda < -psd_slack {
            return Err(Error::InvalidState(format!(
                "matrix is not positive semidefinite: eigenvalue {lambda:e}"
            )));
        }
        roots.push(lambda.max(0.0).sqrt());
    }
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &r) in roots.iter().enumerate() {
                acc += v[[i, k]] * r * v[[j, k]].conj();
            }
            out[[i, j]] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha12Rng) -> Array2<Complex64> {
        let mut a = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            a[[i, i]] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                a[[i, j]] = z;
                a[[j, i]] = z.conj();
            }
        }
        a
    }

    #[test]
    fn reconstructs_random_hermitian_matrices() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for &n in &[2usize, 4, 8] {
            for _ in 0..50 {
                let a = random_hermitian(n, &mut rng);
                let (w, v) = eigh(&a);
                // a v_k = w_k v_k for every eigenpair
                for k in 0..n {
                    for i in 0..n {
                        let mut av = Complex64::new(0.0, 0.0);
                        for j in 0..n {
                            av += a[[i, j]] * v[[j, k]];
                        }
                        let diff = (av - v[[i, k]] * w[k]).norm();
                        assert!(diff < 1e-11, "dim {n}: residual {diff}");
                    }
                }
                // v unitary
                for i in 0..n {
                    for j in 0..n {
                        let mut dot = Complex64::new(0.0, 0.0);
                        for k in 0..n {
                            dot += v[[k, i]].conj() * v[[k, j]];
                        }
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!((dot - expect).norm() < 1e-12);
                    }
                }
                // ascending eigenvalues
                for k in 1..n {
                    assert!(w[k] >= w[k - 1]);
                }
            }
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = 4;
            let b = random_hermitian(n, &mut rng);
            // a = b^2 is PSD
            let mut a = Array2::<Complex64>::zeros((n, n));
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        acc += b[[i, k]] * b[[k, j]];
                    }
                    a[[i, j]] = acc;
                }
            }
            let r = sqrt_psd(&a, 1e-10).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        acc += r[[i, k]] * r[[k, j]];
                    }
                    assert!((acc - a[[i, j]]).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn rejects_indefinite_matrices() {
        let mut a = Array2::<Complex64>::zeros((2, 2));
        a[[0, 0]] = Complex64::new(1.0, 0.0);
        a[[1, 1]] = Complex64::new(-0.5, 0.0);
        assert!(sqrt_psd(&a, 1e-10).is_err());
    }
}
