//! Convergence detection, homogenization-time metrics, rate comparison,
//! and universality classification of collision unitaries.
//!
//! Convergence is measured as Euclidean Bloch distance to the ancilla
//! state, which is what the contraction bounds control; fidelity is
//! carried along for plotting.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::engine::{run, EngineConfig, TrajectoryRecord};
use crate::qstate::{
    bloch_to_density, homogenizer_condition_check, BlochVector, CollisionUnitary,
};
use crate::recurrence::{ratio_statistic, RatioOutcome};
use crate::sample;
use crate::{Error, Result};

/// Outcome of a finite-tolerance convergence scan over one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub converged: bool,
    /// First recorded collision count with distance <= epsilon.
    pub n_star: Option<u64>,
    pub epsilon: f64,
    pub final_distance: f64,
    pub final_fidelity: f64,
    /// Ratio-bound violations; only populated for Markovian trajectories.
    pub ratio_violations: Option<u64>,
}

/// Scan a trajectory for the first collision at which the system Bloch
/// vector is within `epsilon` of the target `eta_bloch`.
pub fn homogenization_time(
    trajectory: &[TrajectoryRecord],
    eta_bloch: BlochVector,
    epsilon: f64,
) -> Result<ConvergenceReport> {
    if trajectory.is_empty() {
        return Err(Error::InvalidParameter("trajectory is empty".into()));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let n_star = trajectory
        .iter()
        .find(|rec| rec.k.distance(&eta_bloch) <= epsilon)
        .map(|rec| rec.n);
    let last = trajectory.last().unwrap();
    Ok(ConvergenceReport {
        converged: n_star.is_some(),
        n_star,
        epsilon,
        final_distance: last.k.distance(&eta_bloch),
        final_fidelity: last.fidelity,
        ratio_violations: None,
    })
}

/// Run each configuration and order the labels by homogenization time,
/// fastest first; non-converged entries sort last. All configurations
/// must share the initial system state, the ancilla state, and the
/// system-ancilla angle, so that only the bath-side model varies.
pub fn compare_rates(
    configs: &[(String, EngineConfig)],
    epsilon: f64,
) -> Result<Vec<(String, Option<u64>)>> {
    let Some((_, first)) = configs.first() else {
        return Err(Error::InvalidParameter("no configurations to compare".into()));
    };
    for (label, cfg) in configs {
        if cfg.system0.max_diff(&first.system0) > 1e-12
            || cfg.ancilla0.max_diff(&first.ancilla0) > 1e-12
            || cfg.alpha != first.alpha
        {
            return Err(Error::InvalidParameter(format!(
                "configuration {label} does not share system, ancilla, and alpha with the first"
            )));
        }
    }
    let target = crate::qstate::density_to_bloch(&first.ancilla0)?;
    let mut rated: Vec<(String, Option<u64>)> = Vec::with_capacity(configs.len());
    for (label, cfg) in configs {
        let trajectory = run(cfg)?;
        let report = homogenization_time(&trajectory, target, epsilon)?;
        rated.push((label.clone(), report.n_star));
    }
    rated.sort_by_key(|(_, n)| n.unwrap_or(u64::MAX));
    Ok(rated)
}

/// Classification of a collision unitary by the states it homogenizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Universality {
    /// The fixed-point conditions hold for every sampled state.
    Universal,
    /// They hold for every sampled diagonal state but fail for some
    /// coherent state.
    DiagonalOnly,
    Neither,
}

/// Sample the fixed-point conditions over Haar-random pure states,
/// uniform-radius mixed states, and diagonal states. `samples` counts
/// each of the pure and mixed pools (at least 100).
pub fn classify_universality(
    u: &CollisionUnitary,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<Universality> {
    if samples < 100 {
        return Err(Error::InvalidParameter(format!(
            "at least 100 samples required, got {samples}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut general_ok = true;
    for i in 0..(2 * samples) {
        let b = if i % 2 == 0 {
            sample::bloch_on_sphere(&mut rng)
        } else {
            sample::bloch_in_ball(&mut rng)
        };
        if !homogenizer_condition_check(u, &bloch_to_density(b), tol)? {
            general_ok = false;
            break;
        }
    }
    if general_ok {
        return Ok(Universality::Universal);
    }
    for _ in 0..samples {
        let b = sample::bloch_diagonal(&mut rng);
        if !homogenizer_condition_check(u, &bloch_to_density(b), tol)? {
            return Ok(Universality::Neither);
        }
    }
    Ok(Universality::DiagonalOnly)
}

/// Violations of the per-step contraction bound cos^2(alpha) along a
/// Markovian trajectory recorded at unit cadence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioMonitor {
    pub violations: u64,
    pub max_ratio: f64,
    /// Steps skipped because the trajectory had already reached the target.
    pub terminal_steps: u64,
}

/// Recompute per-step ratios from the recorded Bloch vectors and count
/// how often they exceed cos^2(alpha) + 1e-10. The expected count is 0.
pub fn ratio_monitor(
    trajectory: &[TrajectoryRecord],
    l: BlochVector,
    alpha: f64,
) -> RatioMonitor {
    let bound = alpha.cos() * alpha.cos();
    let mut monitor = RatioMonitor { violations: 0, max_ratio: 0.0, terminal_steps: 0 };
    for pair in trajectory.windows(2) {
        match ratio_statistic(pair[0].k, pair[1].k, l, alpha) {
            RatioOutcome::Terminal => monitor.terminal_steps += 1,
            RatioOutcome::Stat(s) => {
                monitor.max_ratio = monitor.max_ratio.max(s.ratio);
                if s.ratio > bound + 1e-10 {
                    monitor.violations += 1;
                }
            }
        }
    }
    monitor
}

#[cfg(test)]
mod tests;
