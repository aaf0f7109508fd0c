//! Density-matrix collision schedulers: the ground-truth simulators.
//!
//! The Markovian scheduler collides the system with a fresh ancilla each
//! step. The non-Markovian schedulers insert an ancilla-ancilla collision
//! between consecutive ancillas and differ only in when the departing
//! ancilla is traced out:
//!
//! - scheme 1 traces out after every collision and propagates marginals,
//! - scheme 2 keeps the system-ancilla pair, tracing the old ancilla
//!   right after the ancilla-ancilla collision,
//! - scheme 3 keeps all three qubits until the system has collided with
//!   the new ancilla.
//!
//! Schemes 2 and 3 yield identical system states; scheme 1 is a distinct
//! dynamics because it discards system-ancilla correlations early.

use crate::qstate::{
    apply, bloch_to_density, density_to_bloch, embed_pair, fidelity, partial_trace, BlochVector,
    CollisionUnitary, DensityMatrix,
};
use crate::recurrence::{ratio_statistic, InteractionKind, RatioOutcome};
use crate::{Error, Result};

/// Which scheduler runs the collision chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Markov,
    S1,
    S2,
    S3,
    FullSwapMemory,
}

/// Full description of one simulation run.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub scheme: Scheme,
    /// Ancilla-ancilla unitary kind; the system-ancilla collision is
    /// always a partial swap with angle `alpha`.
    pub interaction: InteractionKind,
    pub alpha: f64,
    pub delta: f64,
    pub theta: f64,
    pub phi: f64,
    pub system0: DensityMatrix,
    pub ancilla0: DensityMatrix,
    pub n_collisions: u64,
    pub record_every: u64,
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.system0.dim() != 2 || self.ancilla0.dim() != 2 {
            return Err(Error::Dimension("system and ancilla states must be qubits".into()));
        }
        if self.n_collisions == 0 {
            return Err(Error::InvalidParameter("n_collisions must be at least 1".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be at least 1".into()));
        }
        Ok(())
    }

    fn ancilla_unitary(&self) -> CollisionUnitary {
        match self.interaction {
            InteractionKind::PSwap => CollisionUnitary::pswap(self.delta),
            InteractionKind::PSTheta => CollisionUnitary::pstheta(self.delta, self.theta, self.phi),
        }
    }

    fn should_record(&self, n: u64) -> bool {
        n.is_multiple_of(self.record_every) || n == self.n_collisions
    }
}

/// One recorded point of a trajectory. `l_out` is the Bloch vector the
/// most recently departed ancilla left with (absent until one exists);
/// `ratio` is the per-step contraction quotient, recorded for the
/// Markovian scheduler only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub n: u64,
    pub k: BlochVector,
    pub fidelity: f64,
    pub l_out: Option<BlochVector>,
    pub ratio: Option<f64>,
}

/// Pin a state produced by one collision cycle back onto the exact
/// trace-1 Hermitian manifold. The dynamics preserves both properties
/// exactly, but the two marginals of a collision share their parent's
/// rounding error, and the product state of the next collision doubles
/// it; without this projection the error grows as 2^n.
fn sanitize(rho: DensityMatrix) -> Result<DensityMatrix> {
    let m = rho.matrix();
    let herm = (m + &crate::qstate::dagger(m)).mapv(|z| z * 0.5);
    let tr: f64 = (0..herm.nrows()).map(|i| herm[[i, i]].re).sum();
    DensityMatrix::from_matrix(herm.mapv(|z| z / tr))
}

fn reduce(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    sanitize(partial_trace(rho, keep)?)
}

fn record(
    n: u64,
    system: &DensityMatrix,
    target: &DensityMatrix,
    l_out: Option<BlochVector>,
    ratio: Option<f64>,
) -> Result<TrajectoryRecord> {
    Ok(TrajectoryRecord {
        n,
        k: density_to_bloch(system)?,
        fidelity: fidelity(system, target)?,
        l_out,
        ratio,
    })
}

/// Dispatch on `cfg.scheme`. The full-swap memory scheme records its
/// pipeline trajectory; use [`run_full_swap_memory`] for the closed form.
pub fn run(cfg: &EngineConfig) -> Result<Vec<TrajectoryRecord>> {
    match cfg.scheme {
        Scheme::Markov => run_markovian(cfg),
        Scheme::S1 => run_scheme1(cfg),
        Scheme::S2 => run_scheme2(cfg),
        Scheme::S3 => run_scheme3(cfg),
        Scheme::FullSwapMemory => Ok(run_full_swap_memory(cfg)?.pipeline),
    }
}

/// Fresh ancilla every collision; the working space never exceeds two
/// qubits and the contraction ratio of each step is recorded.
pub fn run_markovian(cfg: &EngineConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let u_sys = CollisionUnitary::pswap(cfg.alpha);
    let eta = &cfg.ancilla0;
    let l = density_to_bloch(eta)?;

    let mut rho = cfg.system0.clone();
    let mut out = Vec::new();
    out.push(record(0, &rho, eta, None, None)?);
    for n in 1..=cfg.n_collisions {
        let k_prev = density_to_bloch(&rho)?;
        let joint = rho.tensor(eta)?;
        let collided = apply(&joint, u_sys.matrix())?;
        rho = reduce(&collided, &[0])?;
        if cfg.should_record(n) {
            let departed = density_to_bloch(&partial_trace(&collided, &[1])?)?;
            let ratio = match ratio_statistic(k_prev, density_to_bloch(&rho)?, l, cfg.alpha) {
                RatioOutcome::Stat(s) => Some(s.ratio),
                RatioOutcome::Terminal => None,
            };
            out.push(record(n, &rho, eta, Some(departed), ratio)?);
        }
    }
    Ok(out)
}

/// Scheme 1: marginals only. After the system collision both marginals
/// are kept; the pending ancilla then collides with a fresh one, whose
/// marginal feeds the next system collision.
pub fn run_scheme1(cfg: &EngineConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let u_sys = CollisionUnitary::pswap(cfg.alpha);
    let u_anc = cfg.ancilla_unitary();
    let eta = &cfg.ancilla0;

    let mut rho = cfg.system0.clone();
    let mut pending: Option<DensityMatrix> = None;
    let mut out = Vec::new();
    out.push(record(0, &rho, eta, None, None)?);
    for n in 1..=cfg.n_collisions {
        let (incoming, departed) = match pending.take() {
            None => (eta.clone(), None),
            Some(prev) => {
                let pair = prev.tensor(eta)?;
                let collided = apply(&pair, u_anc.matrix())?;
                let departed = density_to_bloch(&partial_trace(&collided, &[0])?)?;
                (reduce(&collided, &[1])?, Some(departed))
            }
        };
        let joint = rho.tensor(&incoming)?;
        let collided = apply(&joint, u_sys.matrix())?;
        rho = reduce(&collided, &[0])?;
        pending = Some(reduce(&collided, &[1])?);
        if cfg.should_record(n) {
            out.push(record(n, &rho, eta, departed, None)?);
        }
    }
    Ok(out)
}

/// Scheme 2: the system-ancilla pair is kept; the old ancilla is traced
/// out immediately after its collision with the fresh one, so the working
/// space touches three qubits only during that collision.
pub fn run_scheme2(cfg: &EngineConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let u_sys = CollisionUnitary::pswap(cfg.alpha);
    let u_anc3 = embed_pair(cfg.ancilla_unitary().matrix(), (1, 2), 3)?;
    let eta = &cfg.ancilla0;

    // Joint state of [system, current ancilla].
    let first = cfg.system0.tensor(eta)?;
    let mut joint = sanitize(apply(&first, u_sys.matrix())?)?;
    let mut out = Vec::new();
    out.push(record(0, &cfg.system0, eta, None, None)?);
    if cfg.should_record(1) {
        out.push(record(1, &partial_trace(&joint, &[0])?, eta, None, None)?);
    }
    for n in 2..=cfg.n_collisions {
        let triple = joint.tensor(eta)?;
        let after_anc = apply(&triple, &u_anc3)?;
        let departed = density_to_bloch(&partial_trace(&after_anc, &[1])?)?;
        let pair = reduce(&after_anc, &[0, 2])?;
        joint = sanitize(apply(&pair, u_sys.matrix())?)?;
        if cfg.should_record(n) {
            out.push(record(n, &partial_trace(&joint, &[0])?, eta, Some(departed), None)?);
        }
    }
    Ok(out)
}

/// Scheme 3: all three qubits are kept through the system collision with
/// the new ancilla; only then is the old ancilla traced out.
pub fn run_scheme3(cfg: &EngineConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let u_sys = CollisionUnitary::pswap(cfg.alpha);
    let u_anc3 = embed_pair(cfg.ancilla_unitary().matrix(), (1, 2), 3)?;
    // The system is qubit 0 and the fresh ancilla qubit 2 of the triple.
    let u_sys3 = embed_pair(CollisionUnitary::pswap(cfg.alpha).matrix(), (0, 2), 3)?;
    let eta = &cfg.ancilla0;

    let first = cfg.system0.tensor(eta)?;
    let mut joint = sanitize(apply(&first, u_sys.matrix())?)?;
    let mut out = Vec::new();
    out.push(record(0, &cfg.system0, eta, None, None)?);
    if cfg.should_record(1) {
        out.push(record(1, &partial_trace(&joint, &[0])?, eta, None, None)?);
    }
    for n in 2..=cfg.n_collisions {
        let triple = joint.tensor(eta)?;
        let after_anc = apply(&triple, &u_anc3)?;
        let after_sys = apply(&after_anc, &u_sys3)?;
        let departed = density_to_bloch(&partial_trace(&after_sys, &[1])?)?;
        joint = reduce(&after_sys, &[0, 2])?;
        if cfg.should_record(n) {
            out.push(record(n, &partial_trace(&joint, &[0])?, eta, Some(departed), None)?);
        }
    }
    Ok(out)
}

/// Result of the full-swap memory run: the scheme pipeline alongside the
/// closed form rho_n = Tr_B1{ U1^n (rho_0 (x) eta) U1^n_dag }, and the
/// worst Bloch-component disagreement between the two.
#[derive(Debug, Clone)]
pub struct FullSwapRun {
    pub pipeline: Vec<TrajectoryRecord>,
    pub closed_form: Vec<TrajectoryRecord>,
    pub max_deviation: f64,
}

/// Ancilla-ancilla collisions forced to the exact swap: each fresh
/// ancilla inherits the full state of its predecessor, so the system
/// keeps re-colliding with the same recycled ancilla. The correlated
/// pipeline (scheme 3 with a swap) must agree with the closed form.
pub fn run_full_swap_memory(cfg: &EngineConfig) -> Result<FullSwapRun> {
    cfg.validate()?;
    let mut swap_cfg = cfg.clone();
    swap_cfg.scheme = Scheme::S3;
    swap_cfg.interaction = InteractionKind::PSwap;
    swap_cfg.delta = std::f64::consts::FRAC_PI_2;
    let pipeline = run_scheme3(&swap_cfg)?;

    let u1 = CollisionUnitary::pswap(cfg.alpha);
    let eta = &cfg.ancilla0;
    let mut joint = cfg.system0.tensor(eta)?;
    let mut closed = Vec::new();
    closed.push(record(0, &cfg.system0, eta, None, None)?);
    for n in 1..=cfg.n_collisions {
        joint = sanitize(apply(&joint, u1.matrix())?)?;
        if cfg.should_record(n) {
            closed.push(record(n, &partial_trace(&joint, &[0])?, eta, None, None)?);
        }
    }

    let max_deviation = pipeline
        .iter()
        .zip(closed.iter())
        .map(|(p, q)| {
            debug_assert_eq!(p.n, q.n);
            (p.k - q.k).norm()
        })
        .fold(0.0, f64::max);
    Ok(FullSwapRun { pipeline, closed_form: closed, max_deviation })
}

/// Affine Bloch-space representation (M, c) of a single-collision channel
/// rho -> Tr_B{ U (rho (x) eta) U^dag }: bloch(out) = M bloch(in) + c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub m: [[f64; 3]; 3],
    pub c: [f64; 3],
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], c: [0.0; 3] }
    }

    pub fn apply(&self, v: BlochVector) -> BlochVector {
        let m = &self.m;
        BlochVector {
            x: m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z + self.c[0],
            y: m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z + self.c[1],
            z: m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z + self.c[2],
        }
    }

    /// Composition self . other (apply `other` first).
    #[allow(clippy::needless_range_loop)]
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let mut m = [[0.0; 3]; 3];
        let mut c = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m[i][j] += self.m[i][k] * other.m[k][j];
                }
            }
            c[i] = self.c[i];
            for k in 0..3 {
                c[i] += self.m[i][k] * other.c[k];
            }
        }
        AffineMap { m, c }
    }

    pub fn pow(&self, n: u64) -> AffineMap {
        let mut acc = AffineMap::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn max_diff(&self, other: &AffineMap) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            worst = worst.max((self.c[i] - other.c[i]).abs());
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }
}

/// Extract the affine map of one collision by probing the channel on the
/// maximally mixed state and the three axis states.
pub fn channel_as_affine_map(
    interaction: &CollisionUnitary,
    eta: &DensityMatrix,
) -> Result<AffineMap> {
    if eta.dim() != 2 {
        return Err(Error::Dimension("ancilla state must be a qubit".into()));
    }
    let probe = |b: BlochVector| -> Result<BlochVector> {
        let joint = bloch_to_density(b).tensor(eta)?;
        let collided = apply(&joint, interaction.matrix())?;
        density_to_bloch(&partial_trace(&collided, &[0])?)
    };
    let origin = probe(BlochVector::ZERO)?;
    let mut m = [[0.0; 3]; 3];
    for (col, axis) in [BlochVector::X, BlochVector::Y, BlochVector::Z].iter().enumerate() {
        let image = probe(*axis)?;
        m[0][col] = image.x - origin.x;
        m[1][col] = image.y - origin.y;
        m[2][col] = image.z - origin.z;
    }
    Ok(AffineMap { m, c: [origin.x, origin.y, origin.z] })
}

/// Extract the affine map of `n` Markovian collisions by probing the
/// iterated channel.
pub fn iterated_channel_as_affine_map(
    interaction: &CollisionUnitary,
    eta: &DensityMatrix,
    n: u64,
) -> Result<AffineMap> {
    let probe = |b: BlochVector| -> Result<BlochVector> {
        let mut rho = bloch_to_density(b);
        for _ in 0..n {
            let joint = rho.tensor(eta)?;
            let collided = apply(&joint, interaction.matrix())?;
            rho = partial_trace(&collided, &[0])?;
        }
        density_to_bloch(&rho)
    };
    let origin = probe(BlochVector::ZERO)?;
    let mut m = [[0.0; 3]; 3];
    for (col, axis) in [BlochVector::X, BlochVector::Y, BlochVector::Z].iter().enumerate() {
        let image = probe(*axis)?;
        m[0][col] = image.x - origin.x;
        m[1][col] = image.y - origin.y;
        m[2][col] = image.z - origin.z;
    }
    Ok(AffineMap { m, c: [origin.x, origin.y, origin.z] })
}

#[cfg(test)]
mod tests;
