//! Cross-validation suites: every closed-form recurrence is checked
//! against the dense engines, the trace-out schemes against each other,
//! and the contraction bounds against sampled steps. The CLI `verify`
//! subcommand runs these; the acceptance tests reuse them.

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

use crate::analysis::{classify_universality, Universality};
use crate::engine::{run_scheme1, run_scheme2, run_scheme3, EngineConfig, Scheme};
use crate::qstate::{bloch_to_density, BlochVector, CollisionUnitary};
use crate::recurrence::{
    chain_step, markov_step, ratio_statistic, rotated_pswap_step, scaled_pstheta_step,
    scaled_pswap_step, InteractionKind, RatioOutcome, RecurrenceParams, RecurrenceState,
};
use crate::sample;
use crate::Result;

/// Suite sizing. `Quick` finishes in seconds; `Full` runs the complete
/// sampled populations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

struct Sizes {
    oracle_configs: usize,
    oracle_steps: u64,
    scheme_configs: usize,
    scheme_steps: u64,
    covariance_draws: usize,
    covariance_steps: u64,
    ratio_draws: usize,
    universality_draws: usize,
    universality_samples: usize,
}

impl VerifyLevel {
    fn sizes(self) -> Sizes {
        match self {
            VerifyLevel::Quick => Sizes {
                oracle_configs: 10,
                oracle_steps: 100,
                scheme_configs: 5,
                scheme_steps: 80,
                covariance_draws: 5,
                covariance_steps: 120,
                ratio_draws: 1_000,
                universality_draws: 3,
                universality_samples: 150,
            },
            VerifyLevel::Full => Sizes {
                oracle_configs: 100,
                oracle_steps: 200,
                scheme_configs: 50,
                scheme_steps: 150,
                covariance_draws: 20,
                covariance_steps: 200,
                ratio_draws: 10_000,
                universality_draws: 20,
                universality_samples: 500,
            },
        }
    }
}

/// Outcome of one verified property.
#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    /// Worst observed deviation (meaning depends on the property).
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

/// A chain step function; the default is [`chain_step`]. Tests inject
/// corrupted steps to confirm the oracle comparison actually bites.
pub type ChainStep<'a> =
    &'a dyn Fn(&RecurrenceState, &RecurrenceParams, BlochVector) -> Result<RecurrenceState>;

fn random_params(kind: InteractionKind, rng: &mut ChaCha12Rng) -> RecurrenceParams {
    let alpha = rng.random_range(0.05..std::f64::consts::PI - 0.05);
    let delta = rng.random_range(0.0..std::f64::consts::PI);
    match kind {
        InteractionKind::PSwap => RecurrenceParams::pswap(alpha, delta),
        InteractionKind::PSTheta => RecurrenceParams::pstheta(
            alpha,
            delta,
            rng.random_range(0.0..std::f64::consts::PI),
            rng.random_range(0.0..std::f64::consts::TAU),
        ),
    }
}

fn dense_cfg(params: &RecurrenceParams, k0: BlochVector, l: BlochVector, n: u64) -> EngineConfig {
    EngineConfig {
        scheme: Scheme::S1,
        interaction: params.kind,
        alpha: params.alpha,
        delta: params.delta,
        theta: params.theta,
        phi: params.phi,
        system0: bloch_to_density(k0),
        ancilla0: bloch_to_density(l),
        n_collisions: n,
        record_every: 1,
    }
}

/// Recurrence trajectories against the dense scheme-1 engine.
pub fn oracle_equivalence(
    kind: InteractionKind,
    seed: u64,
    configs: usize,
    steps: u64,
    step: ChainStep,
) -> Result<PropertyResult> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..configs {
        let params = random_params(kind, &mut rng);
        let k0 = sample::bloch_in_ball(&mut rng);
        let l = sample::bloch_in_ball(&mut rng);
        let dense = run_scheme1(&dense_cfg(&params, k0, l, steps))?;
        let mut state = RecurrenceState::initial(k0);
        for rec in dense.iter().skip(1) {
            state = step(&state, &params, l)?;
            debug_assert_eq!(state.n, rec.n);
            worst = worst.max((state.k - rec.k).norm());
            if let (Some(a), Some(b)) = (state.l_out, rec.l_out) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    let tolerance = 1e-10;
    Ok(PropertyResult {
        name: format!(
            "oracle-equivalence/{}",
            match kind {
                InteractionKind::PSwap => "pswap",
                InteractionKind::PSTheta => "pstheta",
            }
        ),
        passed: worst <= tolerance,
        worst,
        tolerance,
        detail: format!("{configs} configs x {steps} collisions vs dense scheme 1"),
    })
}

/// Scheme 2 and scheme 3 system marginals agree at every step.
pub fn scheme_agreement(seed: u64, configs: usize, steps: u64) -> Result<PropertyResult> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for i in 0..configs {
        let kind =
            if i % 2 == 0 { InteractionKind::PSwap } else { InteractionKind::PSTheta };
        let params = random_params(kind, &mut rng);
        let k0 = sample::bloch_in_ball(&mut rng);
        let l = sample::bloch_in_ball(&mut rng);
        let mut cfg = dense_cfg(&params, k0, l, steps);
        cfg.scheme = Scheme::S2;
        let s2 = run_scheme2(&cfg)?;
        cfg.scheme = Scheme::S3;
        let s3 = run_scheme3(&cfg)?;
        for (a, b) in s2.iter().zip(s3.iter()) {
            worst = worst.max((a.k - b.k).norm());
        }
    }
    let tolerance = 1e-12;
    Ok(PropertyResult {
        name: "scheme-2-equals-scheme-3".into(),
        passed: worst <= tolerance,
        worst,
        tolerance,
        detail: format!("{configs} configs x {steps} collisions, both interaction kinds"),
    })
}

/// Rotated trajectories match plain trajectories of rotated initial data.
pub fn rotation_covariance(seed: u64, draws: usize, steps: u64) -> Result<PropertyResult> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let rot = sample::rotation(&mut rng);
        let params = random_params(InteractionKind::PSwap, &mut rng).with_rotation(rot);
        let plain_params = RecurrenceParams::pswap(params.alpha, params.delta);
        let k0 = sample::bloch_in_ball(&mut rng);
        let l = sample::bloch_on_sphere(&mut rng);
        let rinv = rot.transpose();
        let mut rotated = RecurrenceState::initial(k0);
        let mut plain = RecurrenceState::initial(rinv.apply(k0));
        for _ in 0..steps {
            rotated = rotated_pswap_step(&rotated, &params, l)?;
            plain = chain_step(&plain, &plain_params, l)?;
            worst = worst.max((rinv.apply(rotated.k) - plain.k).norm());
            if let (Some(a), Some(b)) = (rotated.l_out, plain.l_out) {
                worst = worst.max((rinv.apply(a) - b).norm());
            }
        }
    }
    let tolerance = 1e-10;
    Ok(PropertyResult {
        name: "rotation-covariance".into(),
        passed: worst <= tolerance,
        worst,
        tolerance,
        detail: format!("{draws} random proper rotations x {steps} collisions"),
    })
}

/// Scaled trajectories match plain trajectories of scaled inputs.
pub fn scaling_covariance(
    kind: InteractionKind,
    seed: u64,
    draws: usize,
    steps: u64,
) -> Result<PropertyResult> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let lambda = rng.random_range(-1.0..=1.0);
        let base = random_params(kind, &mut rng);
        let scaled_params = base.with_lambda(lambda)?;
        let k0 = sample::bloch_in_ball(&mut rng);
        // The modified-swap rules are specialized to the +z pole.
        let l_ref = match kind {
            InteractionKind::PSwap => sample::bloch_on_sphere(&mut rng),
            InteractionKind::PSTheta => BlochVector::Z,
        };
        let mut scaled = RecurrenceState::initial(k0);
        let mut plain = RecurrenceState::initial(k0 * lambda);
        for _ in 0..steps {
            scaled = match kind {
                InteractionKind::PSwap => scaled_pswap_step(&scaled, &scaled_params, l_ref)?,
                InteractionKind::PSTheta => scaled_pstheta_step(&scaled, &scaled_params, l_ref)?,
            };
            plain = chain_step(&plain, &base, l_ref * lambda)?;
            worst = worst.max((scaled.k * lambda - plain.k).norm());
            if let (Some(a), Some(b)) = (scaled.l_out, plain.l_out) {
                worst = worst.max((a * lambda - b).norm());
            }
        }
    }
    let tolerance = 1e-10;
    Ok(PropertyResult {
        name: format!(
            "scaling-covariance/{}",
            match kind {
                InteractionKind::PSwap => "pswap",
                InteractionKind::PSTheta => "pstheta",
            }
        ),
        passed: worst <= tolerance,
        worst,
        tolerance,
        detail: format!("{draws} random scale factors x {steps} collisions"),
    })
}

/// Per-step contraction: the squared-distance ratio never exceeds
/// cos^2(alpha), and the one-step distance never exceeds |cos(alpha)|
/// times the previous distance.
pub fn ratio_bound(seed: u64, draws: usize) -> Result<PropertyResult> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut violations = 0u64;
    for _ in 0..draws {
        let k = sample::bloch_in_ball(&mut rng);
        let l = sample::bloch_in_ball(&mut rng);
        let alpha = rng.random_range(0.0..std::f64::consts::PI);
        let (k_next, _) = markov_step(k, l, alpha);
        if let RatioOutcome::Stat(s) = ratio_statistic(k, k_next, l, alpha) {
            worst_excess = worst_excess.max(s.ratio - s.bound);
            if s.ratio > s.bound + 1e-10 {
                violations += 1;
            }
        }
        let contraction = k_next.distance(&l) - alpha.cos().abs() * k.distance(&l);
        if contraction > 1e-12 {
            violations += 1;
        }
    }
    Ok(PropertyResult {
        name: "ratio-bound".into(),
        passed: violations == 0,
        worst: worst_excess.max(0.0),
        tolerance: 1e-10,
        detail: format!("{draws} sampled memoryless collisions, {violations} violations"),
    })
}

/// Universality classes of the three reference unitaries.
pub fn universality_suite(seed: u64, draws: usize, samples: usize) -> Result<PropertyResult> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..draws {
        let alpha = rng.random_range(0.01..std::f64::consts::PI - 0.01);
        let got = classify_universality(&CollisionUnitary::pswap(alpha), samples, 1e-9, seed)?;
        if got != Universality::Universal {
            failures.push(format!("pswap({alpha:.3}) classified {got:?}"));
        }
    }
    for _ in 0..draws {
        let (delta, theta) = loop {
            let d: f64 = rng.random_range(0.1..std::f64::consts::PI - 0.1);
            let t: f64 = rng.random_range(0.1..std::f64::consts::PI - 0.1);
            if (d.sin() * t.sin()).abs() > 0.05 && (d - std::f64::consts::FRAC_PI_2).abs() > 0.05 {
                break (d, t);
            }
        };
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let got = classify_universality(
            &CollisionUnitary::pstheta(delta, theta, phi),
            samples,
            1e-9,
            seed,
        )?;
        if got != Universality::DiagonalOnly {
            failures.push(format!("pstheta({delta:.3}, {theta:.3}, {phi:.3}) classified {got:?}"));
        }
    }
    // A controlled-NOT homogenizes neither generic nor diagonal states.
    let mut cnot = ndarray::Array2::<num_complex::Complex64>::zeros((4, 4));
    cnot[[0, 0]] = num_complex::Complex64::new(1.0, 0.0);
    cnot[[1, 1]] = num_complex::Complex64::new(1.0, 0.0);
    cnot[[2, 3]] = num_complex::Complex64::new(1.0, 0.0);
    cnot[[3, 2]] = num_complex::Complex64::new(1.0, 0.0);
    let got =
        classify_universality(&CollisionUnitary::custom(cnot)?, samples, 1e-9, seed)?;
    if got != Universality::Neither {
        failures.push(format!("cnot classified {got:?}"));
    }
    Ok(PropertyResult {
        name: "universality-classes".into(),
        passed: failures.is_empty(),
        worst: failures.len() as f64,
        tolerance: 0.0,
        detail: if failures.is_empty() {
            format!("{draws} draws per family, {samples} state samples each")
        } else {
            failures.join("; ")
        },
    })
}

/// Run every suite at the given level.
pub fn run_verification(seed: u64, level: VerifyLevel) -> Result<VerifyReport> {
    let sz = level.sizes();
    let results = vec![
        oracle_equivalence(
            InteractionKind::PSwap,
            seed,
            sz.oracle_configs,
            sz.oracle_steps,
            &chain_step,
        )?,
        oracle_equivalence(
            InteractionKind::PSTheta,
            seed.wrapping_add(1),
            sz.oracle_configs,
            sz.oracle_steps,
            &chain_step,
        )?,
        scheme_agreement(seed.wrapping_add(2), sz.scheme_configs, sz.scheme_steps)?,
        rotation_covariance(seed.wrapping_add(3), sz.covariance_draws, sz.covariance_steps)?,
        scaling_covariance(
            InteractionKind::PSwap,
            seed.wrapping_add(4),
            sz.covariance_draws,
            sz.covariance_steps,
        )?,
        scaling_covariance(
            InteractionKind::PSTheta,
            seed.wrapping_add(5),
            sz.covariance_draws,
            sz.covariance_steps,
        )?,
        ratio_bound(seed.wrapping_add(6), sz.ratio_draws)?,
        universality_suite(seed.wrapping_add(7), sz.universality_draws, sz.universality_samples)?,
    ];
    Ok(VerifyReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_verification_passes() {
        let report = run_verification(0, VerifyLevel::Quick).unwrap();
        for r in &report.results {
            assert!(r.passed, "{} failed: worst {:e} ({})", r.name, r.worst, r.detail);
        }
        assert!(report.passed());
    }

    #[test]
    fn corrupted_recurrence_coefficient_is_caught() {
        // Perturb one output component by 1e-6 and expect the oracle
        // comparison to fail with a deviation at least that large.
        let corrupted: ChainStep = &|state, params, fresh| {
            let mut next = chain_step(state, params, fresh)?;
            next.k.x *= 1.0 + 1e-6;
            next.k.x = next.k.x.clamp(-1.0, 1.0);
            Ok(next)
        };
        let result =
            oracle_equivalence(InteractionKind::PSwap, 0, 3, 50, corrupted).unwrap();
        assert!(!result.passed);
        assert!(result.worst > 1e-8, "reported deviation {:e}", result.worst);
    }
}
