use super::*;
use crate::sample;
use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn bloch_to_density_poles_and_center() {
    let mixed = bloch_to_density(BlochVector::ZERO);
    assert_eq!(mixed.matrix()[[0, 0]], c(0.5, 0.0));
    assert_eq!(mixed.matrix()[[1, 1]], c(0.5, 0.0));
    assert_eq!(mixed.matrix()[[0, 1]], c(0.0, 0.0));

    let up = bloch_to_density(BlochVector::Z);
    assert_eq!(up.matrix()[[0, 0]], c(1.0, 0.0));
    assert_eq!(up.matrix()[[1, 1]], c(0.0, 0.0));
}

#[test]
fn bloch_of_pure_superposition_roundtrips() {
    // (1/sqrt5)|0> + (2/sqrt5)|1> has Bloch vector (4/5, 0, -3/5).
    let amp = [c(1.0 / 5.0_f64.sqrt(), 0.0), c(2.0 / 5.0_f64.sqrt(), 0.0)];
    let rho = DensityMatrix::from_pure(&amp).unwrap();
    let b = density_to_bloch(&rho).unwrap();
    assert_close(b.x, 0.8, 1e-12);
    assert_close(b.y, 0.0, 1e-12);
    assert_close(b.z, -0.6, 1e-12);
    let back = bloch_to_density(b);
    assert!(back.max_diff(&rho) <= 1e-12);
}

#[test]
fn density_to_bloch_examples() {
    let b = density_to_bloch(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
    assert_eq!((b.x, b.y, b.z), (0.0, 0.0, 0.0));

    let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let b = density_to_bloch(&one).unwrap();
    assert_eq!((b.x, b.y, b.z), (0.0, 0.0, -1.0));

    // diag(3/5, 2/5) has z = 3/5 - 2/5 = 1/5.
    let mut m = Array2::zeros((2, 2));
    m[[0, 0]] = c(0.6, 0.0);
    m[[1, 1]] = c(0.4, 0.0);
    let eta = DensityMatrix::from_matrix(m).unwrap();
    let b = density_to_bloch(&eta).unwrap();
    assert_close(b.z, 0.2, 1e-15);
    assert_eq!((b.x, b.y), (0.0, 0.0));
}

#[test]
fn density_to_bloch_rejects_wide_states() {
    let rho = DensityMatrix::maximally_mixed(4).unwrap();
    assert!(density_to_bloch(&rho).is_err());
}

#[test]
fn bloch_vector_outside_ball_is_rejected() {
    assert!(BlochVector::new(1.0 + 1e-6, 0.0, 0.0).is_err());
    assert!(BlochVector::new(0.8, 0.8, 0.0).is_err());
    assert!(BlochVector::new(1.0, 0.0, 0.0).is_ok());
}

#[test]
fn pswap_limits_and_entries() {
    let u0 = CollisionUnitary::pswap(0.0);
    assert!(max_abs_diff(u0.matrix(), &identity(4)) <= 1e-15);

    let uq = CollisionUnitary::pswap(std::f64::consts::FRAC_PI_2);
    let is_swap = swap_matrix().mapv(|z| z * c(0.0, 1.0));
    assert!(max_abs_diff(uq.matrix(), &is_swap) <= 1e-15);

    let u = CollisionUnitary::pswap(0.20);
    let (ca, sa) = (0.20_f64.cos(), 0.20_f64.sin());
    assert!((u.matrix()[[0, 0]] - c(ca, sa)).norm() <= 1e-15);
    assert!((u.matrix()[[1, 1]] - c(ca, 0.0)).norm() <= 1e-15);
    assert!((u.matrix()[[2, 2]] - c(ca, 0.0)).norm() <= 1e-15);
    assert!((u.matrix()[[1, 2]] - c(0.0, sa)).norm() <= 1e-15);
    assert!((u.matrix()[[2, 1]] - c(0.0, sa)).norm() <= 1e-15);
    assert!((u.matrix()[[3, 3]] - c(ca, sa)).norm() <= 1e-15);
}

#[test]
fn pstheta_reduces_to_pswap_at_swap_point() {
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    for _ in 0..100 {
        let delta: f64 = rng.random_range(-6.0..6.0);
        let a = CollisionUnitary::pstheta(delta, std::f64::consts::FRAC_PI_2, 0.0);
        let b = CollisionUnitary::pswap(delta);
        assert!(max_abs_diff(a.matrix(), b.matrix()) <= 1e-12);
    }
}

#[test]
fn pstheta_is_unitary_at_figure_parameters() {
    let u = CollisionUnitary::pstheta(1.45, 0.40, 0.15);
    assert!(u.unitarity_defect() <= 1e-12);
    let id = CollisionUnitary::pstheta(0.0, 0.40, 0.15);
    assert!(max_abs_diff(id.matrix(), &identity(4)) <= 1e-15);
}

#[test]
fn constructed_unitaries_stay_unitary_over_random_parameters() {
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let u = CollisionUnitary::pswap(rng.random_range(-10.0..10.0));
        assert!(u.unitarity_defect() <= 1e-12);
        let v = CollisionUnitary::pstheta(
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
        );
        assert!(v.unitarity_defect() <= 1e-12);
    }
}

#[test]
fn tensor_products_of_states() {
    let mixed = DensityMatrix::maximally_mixed(2).unwrap();
    let four = mixed.tensor(&mixed).unwrap();
    assert!(four.max_diff(&DensityMatrix::maximally_mixed(4).unwrap()) <= 1e-15);

    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let prod = zero.tensor(&one).unwrap();
    for i in 0..4 {
        let expect = if i == 1 { 1.0 } else { 0.0 };
        assert_close(prod.matrix()[[i, i]].re, expect, 1e-15);
    }

    let wide = four.tensor(&four);
    assert!(matches!(wide, Err(Error::Capacity(_))));
}

#[test]
fn embed_pair_identity_and_direct() {
    let e = embed_pair(&identity(4), (0, 1), 3).unwrap();
    assert!(max_abs_diff(&e, &identity(8)) <= 1e-15);

    let s = swap_matrix();
    let direct = embed_pair(&s, (0, 1), 2).unwrap();
    assert!(max_abs_diff(&direct, &s) <= 1e-15);

    assert!(embed_pair(&s, (1, 1), 3).is_err());
    assert!(embed_pair(&s, (0, 3), 3).is_err());
}

#[test]
fn embed_pair_swaps_the_named_qubits() {
    // SWAP on qubits (1, 2) of |a b c> gives |a c b> for all basis states.
    let s = embed_pair(&swap_matrix(), (1, 2), 3).unwrap();
    for a in 0..2usize {
        for b in 0..2usize {
            for cbit in 0..2usize {
                let src = (a << 2) | (b << 1) | cbit;
                let dst = (a << 2) | (cbit << 1) | b;
                for row in 0..8 {
                    let expect = if row == dst { 1.0 } else { 0.0 };
                    assert_close(s[[row, src]].re, expect, 1e-15);
                    assert_close(s[[row, src]].im, 0.0, 1e-15);
                }
            }
        }
    }
}

#[test]
fn apply_identity_and_swap() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let rho = sample::density(4, &mut rng);
    let same = apply(&rho, &identity(4)).unwrap();
    assert!(same.max_diff(&rho) <= 1e-12);

    let zero_one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)])
        .unwrap()
        .tensor(&DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap())
        .unwrap();
    // |10><10| viewed with qubit 0 as the left factor; swap moves it to |01><01|.
    let swapped = apply(&zero_one, &swap_matrix()).unwrap();
    assert_close(swapped.matrix()[[1, 1]].re, 1.0, 1e-15);
}

#[test]
fn full_swap_exchanges_factors() {
    let mut rng = ChaCha12Rng::seed_from_u64(6);
    for _ in 0..50 {
        let rho = sample::qubit_density(&mut rng);
        let eta = sample::qubit_density(&mut rng);
        let joint = rho.tensor(&eta).unwrap();
        let collided = apply(&joint, CollisionUnitary::pswap(std::f64::consts::FRAC_PI_2).matrix())
            .unwrap();
        let second = partial_trace(&collided, &[1]).unwrap();
        assert!(second.max_diff(&rho) <= 1e-12);
        let first = partial_trace(&collided, &[0]).unwrap();
        assert!(first.max_diff(&eta) <= 1e-12);
    }
}

#[test]
fn partial_trace_product_and_bell() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let rho = sample::qubit_density(&mut rng);
    let eta = sample::qubit_density(&mut rng);
    let joint = rho.tensor(&eta).unwrap();
    assert!(partial_trace(&joint, &[0]).unwrap().max_diff(&rho) <= 1e-12);
    assert!(partial_trace(&joint, &[1]).unwrap().max_diff(&eta) <= 1e-12);

    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let bell =
        DensityMatrix::from_pure(&[c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(inv, 0.0)]).unwrap();
    let reduced = partial_trace(&bell, &[0]).unwrap();
    assert!(reduced.max_diff(&DensityMatrix::maximally_mixed(2).unwrap()) <= 1e-12);

    assert!(partial_trace(&joint, &[]).is_err());
}

#[test]
fn partial_trace_preserves_trace_and_positivity() {
    let mut rng = ChaCha12Rng::seed_from_u64(8);
    for _ in 0..30 {
        let rho = sample::density(8, &mut rng);
        for keep in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
            // from_matrix re-validates trace, hermiticity and positivity.
            let reduced = partial_trace(&rho, &keep).unwrap();
            assert_eq!(reduced.dim(), 1 << keep.len());
        }
    }
}

#[test]
fn fidelity_examples() {
    let mut rng = ChaCha12Rng::seed_from_u64(9);
    let rho = sample::density(4, &mut rng);
    assert_close(fidelity(&rho, &rho).unwrap(), 1.0, 1e-12);

    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert_close(fidelity(&zero, &one).unwrap(), 0.0, 1e-12);

    let mixed = DensityMatrix::maximally_mixed(2).unwrap();
    assert_close(fidelity(&mixed, &zero).unwrap(), std::f64::consts::FRAC_1_SQRT_2, 1e-12);

    assert!(fidelity(&mixed, &sample::density(4, &mut rng)).is_err());
}

/// Independent route for qubit fidelity: F = sqrt(Tr(rho sigma) + 2 sqrt(det rho det sigma)).
fn qubit_fidelity_closed_form(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let det = |m: &DensityMatrix| {
        let a = m.matrix();
        (a[[0, 0]] * a[[1, 1]] - a[[0, 1]] * a[[1, 0]]).re
    };
    let overlap = trace_overlap(rho, sigma).unwrap();
    (overlap + 2.0 * (det(rho).max(0.0) * det(sigma).max(0.0)).sqrt()).sqrt()
}

#[test]
fn fidelity_matches_qubit_closed_form() {
    let mut rng = ChaCha12Rng::seed_from_u64(10);
    for _ in 0..200 {
        let rho = sample::qubit_density(&mut rng);
        let sigma = sample::qubit_density(&mut rng);
        let f = fidelity(&rho, &sigma).unwrap();
        let g = qubit_fidelity_closed_form(&rho, &sigma);
        assert_close(f, g, 1e-10);
        // symmetry and range
        assert_close(fidelity(&sigma, &rho).unwrap(), f, 1e-10);
        assert!((0.0..=1.0).contains(&f));
    }
}

#[test]
fn fidelity_is_one_only_for_equal_states() {
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    for _ in 0..100 {
        let rho = sample::qubit_density(&mut rng);
        let sigma = sample::qubit_density(&mut rng);
        let f = fidelity(&rho, &sigma).unwrap();
        if rho.max_diff(&sigma) > 1e-5 {
            assert!(f < 1.0 - 1e-12);
        }
    }
}

#[test]
fn trace_overlap_examples() {
    let plus = DensityMatrix::from_pure(&[
        c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ])
    .unwrap();
    assert_close(trace_overlap(&plus, &plus).unwrap(), 1.0, 1e-14);

    let mixed = DensityMatrix::maximally_mixed(2).unwrap();
    assert_close(trace_overlap(&mixed, &mixed).unwrap(), 0.5, 1e-15);

    // Tr(eta^2) = 9/25 + 4/25 for eta = diag(3/5, 2/5): saturates below 1,
    // which is why this quantity is not the plotted fidelity.
    let mut m = Array2::zeros((2, 2));
    m[[0, 0]] = c(0.6, 0.0);
    m[[1, 1]] = c(0.4, 0.0);
    let eta = DensityMatrix::from_matrix(m).unwrap();
    assert_close(trace_overlap(&eta, &eta).unwrap(), 13.0 / 25.0, 1e-15);
}

#[test]
fn pswap_is_a_homogenizer_for_every_state() {
    let mut rng = ChaCha12Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let alpha = rng.random_range(0.0..std::f64::consts::PI);
        let rho = sample::qubit_density(&mut rng);
        let u = CollisionUnitary::pswap(alpha);
        assert!(homogenizer_condition_check(&u, &rho, 1e-10).unwrap());
    }
}

#[test]
fn modified_swap_homogenizes_only_diagonal_states() {
    let u = CollisionUnitary::pstheta(1.45, 0.40, 0.15);
    let mut m = Array2::zeros((2, 2));
    m[[0, 0]] = c(0.6, 0.0);
    m[[1, 1]] = c(0.4, 0.0);
    let diagonal = DensityMatrix::from_matrix(m).unwrap();
    assert!(homogenizer_condition_check(&u, &diagonal, 1e-10).unwrap());

    let coherent = bloch_to_density(BlochVector::X);
    assert!(!homogenizer_condition_check(&u, &coherent, 1e-10).unwrap());
}

#[test]
fn bloch_roundtrip_on_many_random_vectors() {
    let mut rng = ChaCha12Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let b = sample::bloch_in_ball(&mut rng);
        let back = density_to_bloch(&bloch_to_density(b)).unwrap();
        assert!(b.distance(&back) <= 1e-12);
    }
}

proptest! {
    #[test]
    fn prop_bloch_roundtrip(x in -0.57f64..0.57, y in -0.57f64..0.57, z in -0.57f64..0.57) {
        let b = BlochVector::new(x, y, z).unwrap();
        let back = density_to_bloch(&bloch_to_density(b)).unwrap();
        prop_assert!(b.distance(&back) <= 1e-12);
    }

    #[test]
    fn prop_pswap_unitary(alpha in -10.0f64..10.0) {
        prop_assert!(CollisionUnitary::pswap(alpha).unitarity_defect() <= 1e-12);
    }

    #[test]
    fn prop_pstheta_matches_pswap_at_swap_point(delta in -10.0f64..10.0) {
        let a = CollisionUnitary::pstheta(delta, std::f64::consts::FRAC_PI_2, 0.0);
        let b = CollisionUnitary::pswap(delta);
        prop_assert!(max_abs_diff(a.matrix(), b.matrix()) <= 1e-12);
    }
}
