use super::*;
use crate::engine::Scheme;
use crate::qstate::{density_to_bloch, DensityMatrix};
use crate::recurrence::InteractionKind;
use ndarray::Array2;
use num_complex::Complex64;
use rand::prelude::*;

fn diag_eta() -> DensityMatrix {
    bloch_to_density(BlochVector::new(0.0, 0.0, 0.2).unwrap())
}

fn psi2_cfg(scheme: Scheme, interaction: InteractionKind, n: u64) -> EngineConfig {
    EngineConfig {
        scheme,
        interaction,
        alpha: 0.20,
        delta: 1.45,
        theta: 0.40,
        phi: 0.15,
        system0: DensityMatrix::from_pure(&[
            Complex64::new(1.0 / 5.0_f64.sqrt(), 0.0),
            Complex64::new(2.0 / 5.0_f64.sqrt(), 0.0),
        ])
        .unwrap(),
        ancilla0: diag_eta(),
        n_collisions: n,
        record_every: 1,
    }
}

#[test]
fn homogenization_time_at_the_target_is_zero() {
    let mut cfg = psi2_cfg(Scheme::Markov, InteractionKind::PSwap, 5);
    cfg.system0 = cfg.ancilla0.clone();
    let traj = run(&cfg).unwrap();
    let report =
        homogenization_time(&traj, density_to_bloch(&cfg.ancilla0).unwrap(), 1e-3).unwrap();
    assert_eq!(report.n_star, Some(0));
    assert!(report.converged);
}

#[test]
fn markovian_time_respects_the_contraction_bound() {
    let cfg = psi2_cfg(Scheme::Markov, InteractionKind::PSwap, 1200);
    let traj = run(&cfg).unwrap();
    let target = density_to_bloch(&cfg.ancilla0).unwrap();
    let d0 = density_to_bloch(&cfg.system0).unwrap().distance(&target);
    for epsilon in [1e-2, 1e-3, 1e-4] {
        let report = homogenization_time(&traj, target, epsilon).unwrap();
        let bound = ((epsilon / d0).ln() / cfg.alpha.cos().ln()).ceil() as u64;
        let n_star = report.n_star.expect("markovian run converges");
        assert!(n_star <= bound, "n* {n_star} bound {bound} at eps {epsilon}");
    }
}

#[test]
fn homogenization_time_is_monotone_in_epsilon() {
    let cfg = psi2_cfg(Scheme::S1, InteractionKind::PSwap, 3000);
    let traj = run(&cfg).unwrap();
    let target = density_to_bloch(&cfg.ancilla0).unwrap();
    let mut previous = None;
    for epsilon in [1e-4, 1e-3, 1e-2, 1e-1] {
        let n_star = homogenization_time(&traj, target, epsilon).unwrap().n_star.unwrap();
        if let Some(prev) = previous {
            assert!(n_star <= prev, "larger epsilon must not converge later");
        }
        previous = Some(n_star);
    }
}

#[test]
fn degenerate_inputs_are_rejected() {
    let cfg = psi2_cfg(Scheme::Markov, InteractionKind::PSwap, 5);
    let traj = run(&cfg).unwrap();
    let target = density_to_bloch(&cfg.ancilla0).unwrap();
    assert!(homogenization_time(&[], target, 1e-3).is_err());
    assert!(homogenization_time(&traj, target, 0.0).is_err());
    assert!(homogenization_time(&traj, target, -1.0).is_err());
}

#[test]
fn coherent_ancilla_never_converges_under_the_modified_swap() {
    let mut cfg = psi2_cfg(Scheme::S1, InteractionKind::PSTheta, 1500);
    cfg.ancilla0 = bloch_to_density(BlochVector::X);
    let traj = run(&cfg).unwrap();
    let report = homogenization_time(&traj, BlochVector::X, 1e-3).unwrap();
    assert!(!report.converged);
    assert!(report.final_fidelity < 0.999);
}

#[test]
fn compare_rates_sorts_and_validates() {
    let markov = psi2_cfg(Scheme::Markov, InteractionKind::PSwap, 2500);
    let s1_pstheta = psi2_cfg(Scheme::S1, InteractionKind::PSTheta, 2500);
    let s1_pswap = psi2_cfg(Scheme::S1, InteractionKind::PSwap, 2500);

    let singleton = compare_rates(&[("only".into(), markov.clone())], 1e-2).unwrap();
    assert_eq!(singleton.len(), 1);
    assert!(singleton[0].1.is_some());

    let twins = compare_rates(
        &[("a".into(), markov.clone()), ("b".into(), markov.clone())],
        1e-2,
    )
    .unwrap();
    assert_eq!(twins[0].1, twins[1].1);

    let ranked = compare_rates(
        &[
            ("s1-pswap".into(), s1_pswap),
            ("markov".into(), markov.clone()),
            ("s1-pstheta".into(), s1_pstheta),
        ],
        1e-2,
    )
    .unwrap();
    let labels: Vec<&str> = ranked.iter().map(|(l, _)| l.as_str()).collect();
    assert_eq!(labels, ["markov", "s1-pstheta", "s1-pswap"]);

    let mut mismatched = psi2_cfg(Scheme::S1, InteractionKind::PSwap, 100);
    mismatched.alpha = 0.3;
    assert!(compare_rates(&[("a".into(), markov), ("b".into(), mismatched)], 1e-2).is_err());
}

fn cnot() -> CollisionUnitary {
    let mut m = Array2::<Complex64>::zeros((4, 4));
    m[[0, 0]] = Complex64::new(1.0, 0.0);
    m[[1, 1]] = Complex64::new(1.0, 0.0);
    m[[2, 3]] = Complex64::new(1.0, 0.0);
    m[[3, 2]] = Complex64::new(1.0, 0.0);
    CollisionUnitary::custom(m).unwrap()
}

#[test]
fn universality_classes() {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(51);
    for _ in 0..20 {
        let alpha = rng.random_range(0.01..std::f64::consts::PI - 0.01);
        let class =
            classify_universality(&CollisionUnitary::pswap(alpha), 200, 1e-9, 7).unwrap();
        assert_eq!(class, Universality::Universal, "alpha {alpha}");
    }

    for _ in 0..20 {
        // Resample until the generator genuinely mixes the off-diagonal
        // sector; sin(delta) sin(theta) = 0 degenerates to a phase gate.
        let (delta, theta) = loop {
            let d: f64 = rng.random_range(0.1..std::f64::consts::PI - 0.1);
            let t: f64 = rng.random_range(0.1..std::f64::consts::PI - 0.1);
            if (d.sin() * t.sin()).abs() > 0.05 && (d - std::f64::consts::FRAC_PI_2).abs() > 0.05 {
                break (d, t);
            }
        };
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let u = CollisionUnitary::pstheta(delta, theta, phi);
        let class = classify_universality(&u, 200, 1e-9, 7).unwrap();
        assert_eq!(class, Universality::DiagonalOnly, "delta {delta} theta {theta} phi {phi}");
    }

    assert_eq!(classify_universality(&cnot(), 200, 1e-9, 7).unwrap(), Universality::Neither);
    assert!(classify_universality(&cnot(), 50, 1e-9, 7).is_err());
}

#[test]
fn ratio_monitor_reports_no_violations() {
    let cfg = psi2_cfg(Scheme::Markov, InteractionKind::PSwap, 500);
    let traj = run(&cfg).unwrap();
    let target = density_to_bloch(&cfg.ancilla0).unwrap();
    let monitor = ratio_monitor(&traj, target, cfg.alpha);
    assert_eq!(monitor.violations, 0);
    assert!(monitor.max_ratio <= cfg.alpha.cos().powi(2) + 1e-10);
}

#[test]
fn ratio_monitor_at_instant_swap_and_at_the_fixed_point() {
    let mut cfg = psi2_cfg(Scheme::Markov, InteractionKind::PSwap, 10);
    cfg.alpha = std::f64::consts::FRAC_PI_2;
    let traj = run(&cfg).unwrap();
    let target = density_to_bloch(&cfg.ancilla0).unwrap();
    let monitor = ratio_monitor(&traj, target, cfg.alpha);
    assert_eq!(monitor.violations, 0);
    // cos(pi/2)^2 vanishes, so every nondegenerate ratio must be ~0.
    assert!(monitor.max_ratio <= 1e-10);

    let mut fixed = psi2_cfg(Scheme::Markov, InteractionKind::PSwap, 10);
    fixed.system0 = fixed.ancilla0.clone();
    let traj = run(&fixed).unwrap();
    let monitor = ratio_monitor(&traj, target, fixed.alpha);
    assert_eq!(monitor.violations, 0);
    assert_eq!(monitor.terminal_steps, 10);
}
