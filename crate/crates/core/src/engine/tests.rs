use super::*;
use crate::recurrence::{run_chain, RecurrenceParams};
use crate::sample;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

fn diag_state(p: f64) -> DensityMatrix {
    bloch_to_density(BlochVector::new(0.0, 0.0, 2.0 * p - 1.0).unwrap())
}

fn base_cfg(scheme: Scheme, interaction: InteractionKind, n: u64) -> EngineConfig {
    EngineConfig {
        scheme,
        interaction,
        alpha: 0.20,
        delta: 1.45,
        theta: 0.40,
        phi: 0.15,
        system0: DensityMatrix::from_pure(&[
            num_complex::Complex64::new(1.0 / 5.0_f64.sqrt(), 0.0),
            num_complex::Complex64::new(2.0 / 5.0_f64.sqrt(), 0.0),
        ])
        .unwrap(),
        ancilla0: diag_state(0.6),
        n_collisions: n,
        record_every: 1,
    }
}

fn random_cfg(rng: &mut ChaCha12Rng, scheme: Scheme, n: u64) -> EngineConfig {
    let interaction =
        if rng.random_bool(0.5) { InteractionKind::PSwap } else { InteractionKind::PSTheta };
    EngineConfig {
        scheme,
        interaction,
        alpha: rng.random_range(0.05..std::f64::consts::PI - 0.05),
        delta: rng.random_range(0.0..std::f64::consts::PI),
        theta: rng.random_range(0.0..std::f64::consts::PI),
        phi: rng.random_range(0.0..std::f64::consts::TAU),
        system0: sample::qubit_density(rng),
        ancilla0: sample::qubit_density(rng),
        n_collisions: n,
        record_every: 1,
    }
}

#[test]
fn markov_fixed_point_and_instant_swap() {
    let mut cfg = base_cfg(Scheme::Markov, InteractionKind::PSwap, 50);
    cfg.system0 = cfg.ancilla0.clone();
    for rec in run_markovian(&cfg).unwrap() {
        assert!((rec.fidelity - 1.0).abs() <= 1e-12);
    }

    let mut cfg = base_cfg(Scheme::Markov, InteractionKind::PSwap, 10);
    cfg.alpha = std::f64::consts::FRAC_PI_2;
    let traj = run_markovian(&cfg).unwrap();
    for rec in traj.iter().skip(1) {
        assert!((rec.fidelity - 1.0).abs() <= 1e-12, "n = {}", rec.n);
    }
}

#[test]
fn markov_contraction_gives_a_convergence_bound() {
    let mut cfg = base_cfg(Scheme::Markov, InteractionKind::PSwap, 60);
    cfg.alpha = 0.70;
    cfg.system0 = bloch_to_density(BlochVector::new(0.0, 0.0, -1.0).unwrap());
    cfg.ancilla0 = bloch_to_density(BlochVector::Z);
    let traj = run_markovian(&cfg).unwrap();
    // Fidelity climbs monotonically toward 1 for this axis configuration.
    for pair in traj.windows(2) {
        assert!(pair[1].fidelity >= pair[0].fidelity - 1e-12);
    }
    // |k(n) - l| <= cos(alpha)^n |k(0) - l|: distance 2e-3 needs at most
    // ceil(ln(1e-3) / ln(cos 0.7)) = 26 collisions.
    let crossing = traj.iter().find(|r| r.k.distance(&BlochVector::Z) <= 2e-3).unwrap();
    let bound = ((1e-3_f64).ln() / 0.70_f64.cos().ln()).ceil() as u64;
    assert!(crossing.n <= bound, "crossed at {} bound {}", crossing.n, bound);
    assert!(traj.last().unwrap().fidelity > 0.999);
}

#[test]
fn markov_records_ratio_and_departed_ancilla() {
    let cfg = base_cfg(Scheme::Markov, InteractionKind::PSwap, 20);
    let traj = run_markovian(&cfg).unwrap();
    assert_eq!(traj[0].ratio, None);
    assert_eq!(traj[0].l_out, None);
    let c2 = cfg.alpha.cos().powi(2);
    for rec in traj.iter().skip(1) {
        let ratio = rec.ratio.expect("nondegenerate markov step records a ratio");
        assert!(ratio <= c2 + 1e-10);
        assert!(rec.l_out.is_some());
    }
}

#[test]
fn schemes_reduce_to_markovian_at_zero_ancilla_angle() {
    let mut rng = ChaCha12Rng::seed_from_u64(41);
    for scheme in [Scheme::S1, Scheme::S2, Scheme::S3] {
        let mut cfg = random_cfg(&mut rng, scheme, 40);
        cfg.delta = 0.0;
        let got = run(&cfg).unwrap();
        let mut mcfg = cfg.clone();
        mcfg.scheme = Scheme::Markov;
        let want = run_markovian(&mcfg).unwrap();
        for (g, w) in got.iter().zip(want.iter()) {
            assert_eq!(g.n, w.n);
            assert!((g.k - w.k).norm() <= 1e-12, "scheme {scheme:?} n {}", g.n);
        }
    }
}

#[test]
fn scheme1_matches_the_recurrence_chain() {
    // Figure configuration plus random draws, both interaction kinds.
    let mut rng = ChaCha12Rng::seed_from_u64(42);
    let mut configs = vec![
        base_cfg(Scheme::S1, InteractionKind::PSwap, 200),
        base_cfg(Scheme::S1, InteractionKind::PSTheta, 200),
    ];
    for _ in 0..10 {
        configs.push(random_cfg(&mut rng, Scheme::S1, 200));
    }
    for cfg in configs {
        let dense = run_scheme1(&cfg).unwrap();
        let params = match cfg.interaction {
            InteractionKind::PSwap => RecurrenceParams::pswap(cfg.alpha, cfg.delta),
            InteractionKind::PSTheta => {
                RecurrenceParams::pstheta(cfg.alpha, cfg.delta, cfg.theta, cfg.phi)
            }
        };
        let k0 = density_to_bloch(&cfg.system0).unwrap();
        let l = density_to_bloch(&cfg.ancilla0).unwrap();
        let chain = run_chain(k0, &params, l, cfg.n_collisions).unwrap();
        for (d, c) in dense.iter().zip(chain.iter()) {
            assert_eq!(d.n, c.n);
            assert!(
                (d.k - c.k).norm() <= 1e-10,
                "kind {:?} n {} dev {:e}",
                cfg.interaction,
                d.n,
                (d.k - c.k).norm()
            );
            match (d.l_out, c.l_out) {
                (Some(a), Some(b)) => assert!((a - b).norm() <= 1e-10),
                (None, None) => {}
                other => panic!("departed-ancilla mismatch at n {}: {other:?}", d.n),
            }
        }
    }
}

#[test]
fn scheme2_and_scheme3_agree_everywhere() {
    let mut rng = ChaCha12Rng::seed_from_u64(43);
    for _ in 0..10 {
        let cfg = random_cfg(&mut rng, Scheme::S2, 60);
        let s2 = run_scheme2(&cfg).unwrap();
        let mut cfg3 = cfg.clone();
        cfg3.scheme = Scheme::S3;
        let s3 = run_scheme3(&cfg3).unwrap();
        for (a, b) in s2.iter().zip(s3.iter()) {
            assert_eq!(a.n, b.n);
            assert!((a.k - b.k).norm() <= 1e-12, "n {} dev {:e}", a.n, (a.k - b.k).norm());
            if let (Some(x), Some(y)) = (a.l_out, b.l_out) {
                assert!((x - y).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn all_schemes_coincide_at_the_first_collision() {
    let mut rng = ChaCha12Rng::seed_from_u64(44);
    let cfg = random_cfg(&mut rng, Scheme::S1, 1);
    let s1 = run_scheme1(&cfg).unwrap();
    for scheme in [Scheme::S2, Scheme::S3] {
        let mut c = cfg.clone();
        c.scheme = scheme;
        let other = run(&c).unwrap();
        assert!((s1[1].k - other[1].k).norm() <= 1e-13);
    }
}

#[test]
fn coherent_ancillas_defeat_the_modified_swap() {
    let mut cfg = base_cfg(Scheme::S1, InteractionKind::PSTheta, 1500);
    cfg.ancilla0 = bloch_to_density(BlochVector::X);
    let traj = run_scheme1(&cfg).unwrap();
    assert!(traj.last().unwrap().fidelity < 0.999);
}

#[test]
fn full_swap_memory_pipeline_matches_closed_form() {
    let mut rng = ChaCha12Rng::seed_from_u64(45);
    for _ in 0..5 {
        let cfg = random_cfg(&mut rng, Scheme::FullSwapMemory, 100);
        let run = run_full_swap_memory(&cfg).unwrap();
        assert!(run.max_deviation <= 1e-10, "deviation {:e}", run.max_deviation);
        // The first collision agrees with scheme 1 (nothing has been recycled yet).
        let mut one = cfg.clone();
        one.scheme = Scheme::S1;
        one.n_collisions = 1;
        let s1 = run_scheme1(&one).unwrap();
        assert!((run.pipeline[1].k - s1[1].k).norm() <= 1e-12);
        assert!((run.closed_form[1].k - s1[1].k).norm() <= 1e-12);
    }
}

#[test]
fn full_swap_memory_oscillates_at_the_swap_angle() {
    let mut cfg = base_cfg(Scheme::FullSwapMemory, InteractionKind::PSwap, 10);
    cfg.alpha = std::f64::consts::FRAC_PI_2;
    let run = run_full_swap_memory(&cfg).unwrap();
    let f0 = fidelity(&cfg.system0, &cfg.ancilla0).unwrap();
    for rec in &run.pipeline {
        if rec.n % 2 == 1 {
            assert!((rec.fidelity - 1.0).abs() <= 1e-10, "odd n {}", rec.n);
        } else if rec.n > 0 {
            assert!((rec.fidelity - f0).abs() <= 1e-10, "even n {}", rec.n);
        }
    }
}

#[test]
fn affine_map_limits() {
    let eta = diag_state(0.6);
    let id = channel_as_affine_map(&CollisionUnitary::pswap(0.0), &eta).unwrap();
    assert!(id.max_diff(&AffineMap::identity()) <= 1e-12);

    let constant =
        channel_as_affine_map(&CollisionUnitary::pswap(std::f64::consts::FRAC_PI_2), &eta).unwrap();
    let l = density_to_bloch(&eta).unwrap();
    let zero = AffineMap { m: [[0.0; 3]; 3], c: [l.x, l.y, l.z] };
    assert!(constant.max_diff(&zero) <= 1e-12);
}

#[test]
fn markovian_channel_is_a_semigroup() {
    let mut rng = ChaCha12Rng::seed_from_u64(46);
    for _ in 0..5 {
        let alpha = rng.random_range(0.1..std::f64::consts::PI - 0.1);
        let eta = sample::qubit_density(&mut rng);
        let u = CollisionUnitary::pswap(alpha);
        let single = channel_as_affine_map(&u, &eta).unwrap();
        for n in [2u64, 5, 10] {
            let iterated = iterated_channel_as_affine_map(&u, &eta, n).unwrap();
            assert!(single.pow(n).max_diff(&iterated) <= 1e-12);
            for m in 1..n {
                let split = iterated_channel_as_affine_map(&u, &eta, n - m)
                    .unwrap()
                    .compose(&iterated_channel_as_affine_map(&u, &eta, m).unwrap());
                assert!(split.max_diff(&iterated) <= 1e-12);
            }
        }
    }
}

#[test]
fn recording_cadence_keeps_endpoints() {
    let mut cfg = base_cfg(Scheme::S1, InteractionKind::PSwap, 25);
    cfg.record_every = 10;
    let traj = run_scheme1(&cfg).unwrap();
    let ns: Vec<u64> = traj.iter().map(|r| r.n).collect();
    assert_eq!(ns, vec![0, 10, 20, 25]);
}

#[test]
fn zero_collisions_is_rejected() {
    let mut cfg = base_cfg(Scheme::Markov, InteractionKind::PSwap, 1);
    cfg.n_collisions = 0;
    assert!(run(&cfg).is_err());
    let mut cfg = base_cfg(Scheme::S1, InteractionKind::PSwap, 5);
    cfg.record_every = 0;
    assert!(run(&cfg).is_err());
}

#[test]
fn intermediate_states_pass_their_invariants() {
    // Construction of every intermediate density matrix re-validates
    // hermiticity, trace, and positivity; surviving a long mixed-kind run
    // is the invariant check.
    let mut rng = ChaCha12Rng::seed_from_u64(47);
    for scheme in [Scheme::Markov, Scheme::S1, Scheme::S2, Scheme::S3] {
        let cfg = random_cfg(&mut rng, scheme, 300);
        let traj = run(&cfg).unwrap();
        for rec in traj {
            assert!(rec.k.norm_sq() <= 1.0 + 1e-9);
            assert!((0.0..=1.0).contains(&rec.fidelity));
        }
    }
}
