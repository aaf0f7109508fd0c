//! Closed-form Bloch-vector recurrences for the collision chain.
//!
//! Each collision maps the Bloch vectors of the two participants through a
//! quadratic update; iterating the updates reproduces the scheme-1 density
//! matrix dynamics exactly (see the oracle tests). Four step variants are
//! provided: the plain partial-swap chain, the modified-swap chain with
//! its componentwise update rules, and the rotated / scaled chains used to
//! extend convergence from the pole of the Bloch ball to arbitrary targets.

use crate::qstate::BlochVector;
use crate::{Error, Result};

/// Which unitary the ancilla-ancilla collisions use. The system-ancilla
/// collision is always a partial swap with angle `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteractionKind {
    PSwap,
    PSTheta,
}

/// 3x3 orthogonal matrix acting on Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    m: [[f64; 3]; 3],
}

impl Rotation3 {
    pub fn identity() -> Self {
        Rotation3 { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Checked constructor; requires R^T R = I to 1e-12 (max-norm).
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let r = Rotation3 { m };
        let defect = r.orthogonality_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "matrix is not orthogonal (defect {defect:e})"
            )));
        }
        Ok(r)
    }

    /// Proper rotation by `angle` about `axis` (Rodrigues form).
    pub fn from_axis_angle(axis: BlochVector, angle: f64) -> Result<Self> {
        let n = axis.norm();
        if n < 1e-12 {
            return Err(Error::InvalidParameter("rotation axis is zero".into()));
        }
        let (ux, uy, uz) = (axis.x / n, axis.y / n, axis.z / n);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Ok(Rotation3 {
            m: [
                [c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s],
                [uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s],
                [uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t],
            ],
        })
    }

    pub fn apply(&self, v: BlochVector) -> BlochVector {
        let m = &self.m;
        BlochVector::new_unchecked(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    /// Transpose, which is the inverse for orthogonal matrices.
    pub fn transpose(&self) -> Rotation3 {
        let m = &self.m;
        Rotation3 {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn entries(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn orthogonality_defect(&self) -> f64 {
        let t = self.transpose();
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += t.m[i][k] * self.m[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).abs());
            }
        }
        worst
    }
}

/// Angles and proof-variant knobs for the recurrence chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceParams {
    pub kind: InteractionKind,
    /// System-ancilla partial-swap angle.
    pub alpha: f64,
    /// Ancilla-ancilla collision angle.
    pub delta: f64,
    /// Modified-swap generator angles; unused for the plain swap kind.
    pub theta: f64,
    pub phi: f64,
    /// Scale factor of the scaled variant; 1 otherwise.
    pub lambda: f64,
    /// Rotation of the rotated variant; identity otherwise.
    pub rotation: Rotation3,
}

impl RecurrenceParams {
    pub fn pswap(alpha: f64, delta: f64) -> Self {
        RecurrenceParams {
            kind: InteractionKind::PSwap,
            alpha,
            delta,
            theta: 0.0,
            phi: 0.0,
            lambda: 1.0,
            rotation: Rotation3::identity(),
        }
    }

    pub fn pstheta(alpha: f64, delta: f64, theta: f64, phi: f64) -> Self {
        RecurrenceParams {
            kind: InteractionKind::PSTheta,
            alpha,
            delta,
            theta,
            phi,
            lambda: 1.0,
            rotation: Rotation3::identity(),
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda.abs() <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must satisfy |lambda| <= 1, got {lambda}"
            )));
        }
        self.lambda = lambda;
        Ok(self)
    }

    pub fn with_rotation(mut self, rotation: Rotation3) -> Self {
        self.rotation = rotation;
        self
    }
}

/// Tracked Bloch vectors after `n` system collisions.
///
/// `k` is the system. `l_pending1` is the ancilla that has met the system
/// but not yet its successor; `l_in` is the state the current ancilla had
/// when it reached the system; `l_out` is the marginal the previous
/// ancilla departed with. The latter three are absent before the chain
/// produces them (`l_out` only exists from the second collision on).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceState {
    pub n: u64,
    pub k: BlochVector,
    pub l_out: Option<BlochVector>,
    pub l_pending1: Option<BlochVector>,
    pub l_in: Option<BlochVector>,
}

impl RecurrenceState {
    pub fn initial(k0: BlochVector) -> Self {
        RecurrenceState { n: 0, k: k0, l_out: None, l_pending1: None, l_in: None }
    }
}

/// Partial-swap collision of a pair of marginals: the first participant
/// keeps the `-cross` branch, the second the `+cross` branch. `lambda`
/// scales the cross terms (1 for the physical map).
fn pswap_pair_scaled(
    first: BlochVector,
    second: BlochVector,
    angle: f64,
    lambda: f64,
) -> (BlochVector, BlochVector) {
    let (s, c) = angle.sin_cos();
    let (c2, s2, cs) = (c * c, s * s, c * s * lambda);
    let cross = second.cross(&first);
    let out_first = BlochVector::new_unchecked(
        c2 * first.x + s2 * second.x - cs * cross.x,
        c2 * first.y + s2 * second.y - cs * cross.y,
        c2 * first.z + s2 * second.z - cs * cross.z,
    );
    let out_second = BlochVector::new_unchecked(
        s2 * first.x + c2 * second.x + cs * cross.x,
        s2 * first.y + c2 * second.y + cs * cross.y,
        s2 * first.z + c2 * second.z + cs * cross.z,
    );
    (out_first, out_second)
}

/// Modified-swap collision of two ancilla marginals, componentwise.
/// `first` is the departing (older) ancilla, `second` the fresh one.
fn pstheta_pair(
    first: BlochVector,
    second: BlochVector,
    delta: f64,
    theta: f64,
    phi: f64,
) -> (BlochVector, BlochVector) {
    let (a, b) = (first, second);
    let (sd, cd) = delta.sin_cos();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let sd2 = sd * sd;
    let cd2 = cd * cd;
    let sdcd = sd * cd;
    let st2 = st * st;

    let out_x = cd2 * a.x + sdcd * ct * a.y + sd2 * st * cp * b.x - sd2 * st * sp * b.y
        - sd2 * ct * a.x * b.z
        - sdcd * st * sp * a.z * b.x
        + sdcd * a.y * b.z
        - sdcd * st * cp * a.z * b.y;
    let out_y = cd2 * a.y - sdcd * ct * a.x + sd2 * st * cp * b.y + sd2 * st * sp * b.x
        - sd2 * ct * a.y * b.z
        - sdcd * st * sp * a.z * b.y
        - sdcd * a.x * b.z
        + sdcd * st * cp * a.z * b.x;
    let g1 = sdcd * st * cp - sd2 * st * ct * sp;
    let g2 = sdcd * st * sp + sd2 * st * ct * cp;
    let out_z = (1.0 - sd2 * st2) * a.z
        + sd2 * st2 * b.z
        + g1 * (a.x * b.y - a.y * b.x)
        + g2 * (a.x * b.x + a.y * b.y);

    let in_x = cd2 * b.x - sdcd * ct * b.y + sd2 * st * cp * a.x + sd2 * st * sp * a.y
        + sd2 * ct * a.z * b.x
        + sdcd * st * sp * a.x * b.z
        + sdcd * a.z * b.y
        - sdcd * st * cp * a.y * b.z;
    let in_y = cd2 * b.y + sdcd * ct * b.x + sd2 * st * cp * a.y - sd2 * st * sp * a.x
        + sd2 * ct * a.z * b.y
        + sdcd * st * sp * a.y * b.z
        - sdcd * a.z * b.x
        + sdcd * st * cp * a.x * b.z;
    let in_z = (1.0 - sd2 * st2) * b.z
        + sd2 * st2 * a.z
        - g1 * (a.x * b.y - a.y * b.x)
        - g2 * (a.x * b.x + a.y * b.y);

    (
        BlochVector::new_unchecked(out_x, out_y, out_z),
        BlochVector::new_unchecked(in_x, in_y, in_z),
    )
}

/// Scaled modified-swap collision specialized to the pole target: the
/// fresh ancilla enters at lambda * z-hat and starred variables track the
/// unscaled vectors.
fn pstheta_pair_scaled_pole(
    first: BlochVector,
    delta: f64,
    theta: f64,
    phi: f64,
    lambda: f64,
) -> (BlochVector, BlochVector) {
    let a = first;
    let (sd, cd) = delta.sin_cos();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let sd2 = sd * sd;
    let cd2 = cd * cd;
    let sdcd = sd * cd;
    let st2 = st * st;

    let out_x = cd2 * a.x + sdcd * ct * a.y - lambda * sd2 * ct * a.x + lambda * sdcd * a.y;
    let out_y = cd2 * a.y - sdcd * ct * a.x - lambda * sd2 * ct * a.y - lambda * sdcd * a.x;
    let out_z = (1.0 - sd2 * st2) * a.z + sd2 * st2;

    let in_x = sd2 * st * cp * a.x + sd2 * st * sp * a.y + lambda * sdcd * st * sp * a.x
        - lambda * sdcd * st * cp * a.y;
    let in_y = sd2 * st * cp * a.y - sd2 * st * sp * a.x
        + lambda * sdcd * st * sp * a.y
        + lambda * sdcd * st * cp * a.x;
    let in_z = (1.0 - sd2 * st2) + sd2 * st2 * a.z;

    (
        BlochVector::new_unchecked(out_x, out_y, out_z),
        BlochVector::new_unchecked(in_x, in_y, in_z),
    )
}

/// One fresh-ancilla (memoryless) collision: the system meets an ancilla
/// in state `l` and both marginals are returned.
pub fn markov_step(k: BlochVector, l: BlochVector, alpha: f64) -> (BlochVector, BlochVector) {
    pswap_pair_scaled(k, l, alpha, 1.0)
}

fn pending(state: &RecurrenceState) -> Result<BlochVector> {
    state.l_pending1.ok_or_else(|| {
        Error::InvalidState("chain state past the first collision lacks a pending ancilla".into())
    })
}

fn step_pswap_with(
    state: &RecurrenceState,
    alpha: f64,
    delta: f64,
    lambda: f64,
    fresh: BlochVector,
) -> Result<RecurrenceState> {
    if state.n == 0 {
        // First collision: the system meets the raw fresh ancilla; no
        // ancilla-ancilla collision has happened yet.
        let (k, lp) = pswap_pair_scaled(state.k, fresh, alpha, lambda);
        Ok(RecurrenceState { n: 1, k, l_out: None, l_pending1: Some(lp), l_in: Some(fresh) })
    } else {
        let lp = pending(state)?;
        let (l_out, l_in) = pswap_pair_scaled(lp, fresh, delta, lambda);
        let (k, l_pend) = pswap_pair_scaled(state.k, l_in, alpha, lambda);
        Ok(RecurrenceState {
            n: state.n + 1,
            k,
            l_out: Some(l_out),
            l_pending1: Some(l_pend),
            l_in: Some(l_in),
        })
    }
}

fn require_kind(params: &RecurrenceParams, kind: InteractionKind) -> Result<()> {
    if params.kind != kind {
        return Err(Error::InvalidParameter(format!(
            "step requires interaction kind {kind:?}, params have {:?}",
            params.kind
        )));
    }
    Ok(())
}

/// One collision of the partial-swap chain (ancilla-ancilla collision
/// with the fresh ancilla, then the system collision).
pub fn pswap_chain_step(
    state: &RecurrenceState,
    params: &RecurrenceParams,
    l_fresh: BlochVector,
) -> Result<RecurrenceState> {
    require_kind(params, InteractionKind::PSwap)?;
    step_pswap_with(state, params.alpha, params.delta, 1.0, l_fresh)
}

/// One collision of the modified-swap chain; the system collision is
/// still a partial swap, the ancilla-ancilla collision uses the
/// componentwise rules of [`pstheta_pair`].
pub fn pstheta_chain_step(
    state: &RecurrenceState,
    params: &RecurrenceParams,
    l_fresh: BlochVector,
) -> Result<RecurrenceState> {
    require_kind(params, InteractionKind::PSTheta)?;
    if state.n == 0 {
        let (k, lp) = pswap_pair_scaled(state.k, l_fresh, params.alpha, 1.0);
        Ok(RecurrenceState { n: 1, k, l_out: None, l_pending1: Some(lp), l_in: Some(l_fresh) })
    } else {
        let lp = pending(state)?;
        let (l_out, l_in) = pstheta_pair(lp, l_fresh, params.delta, params.theta, params.phi);
        let (k, l_pend) = pswap_pair_scaled(state.k, l_in, params.alpha, 1.0);
        Ok(RecurrenceState {
            n: state.n + 1,
            k,
            l_out: Some(l_out),
            l_pending1: Some(l_pend),
            l_in: Some(l_in),
        })
    }
}

/// Rotated variant of the partial-swap chain: every fresh ancilla enters
/// as R l instead of l.
pub fn rotated_pswap_step(
    state: &RecurrenceState,
    params: &RecurrenceParams,
    l_fresh: BlochVector,
) -> Result<RecurrenceState> {
    require_kind(params, InteractionKind::PSwap)?;
    step_pswap_with(state, params.alpha, params.delta, 1.0, params.rotation.apply(l_fresh))
}

/// Scaled variant of the partial-swap chain: the tracked vectors are the
/// unscaled ones and every cross product carries the explicit factor
/// lambda. Multiplying the trajectory by lambda reproduces the plain
/// chain run with ancillas at lambda l.
pub fn scaled_pswap_step(
    state: &RecurrenceState,
    params: &RecurrenceParams,
    l_fresh: BlochVector,
) -> Result<RecurrenceState> {
    require_kind(params, InteractionKind::PSwap)?;
    if params.lambda.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "|lambda| <= 1 required, got {}",
            params.lambda
        )));
    }
    step_pswap_with(state, params.alpha, params.delta, params.lambda, l_fresh)
}

/// Scaled variant of the modified-swap chain. The componentwise rules are
/// specialized to ancillas along +z, so `l_fresh` must be the unit z
/// vector; other directions are not covered by the update rules.
pub fn scaled_pstheta_step(
    state: &RecurrenceState,
    params: &RecurrenceParams,
    l_fresh: BlochVector,
) -> Result<RecurrenceState> {
    require_kind(params, InteractionKind::PSTheta)?;
    if params.lambda.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "|lambda| <= 1 required, got {}",
            params.lambda
        )));
    }
    if l_fresh.x.abs() > 1e-12 || l_fresh.y.abs() > 1e-12 || (l_fresh.z - 1.0).abs() > 1e-12 {
        return Err(Error::UnsupportedConfiguration(
            "scaled modified-swap chain is defined for ancillas along +z only".into(),
        ));
    }
    let pole = BlochVector::Z;
    if state.n == 0 {
        let (k, lp) = pswap_pair_scaled(state.k, pole, params.alpha, params.lambda);
        Ok(RecurrenceState { n: 1, k, l_out: None, l_pending1: Some(lp), l_in: Some(pole) })
    } else {
        let lp = pending(state)?;
        let (l_out, l_in) =
            pstheta_pair_scaled_pole(lp, params.delta, params.theta, params.phi, params.lambda);
        let (k, l_pend) = pswap_pair_scaled(state.k, l_in, params.alpha, params.lambda);
        Ok(RecurrenceState {
            n: state.n + 1,
            k,
            l_out: Some(l_out),
            l_pending1: Some(l_pend),
            l_in: Some(l_in),
        })
    }
}

/// Plain chain step dispatched on the interaction kind.
pub fn chain_step(
    state: &RecurrenceState,
    params: &RecurrenceParams,
    l_fresh: BlochVector,
) -> Result<RecurrenceState> {
    match params.kind {
        InteractionKind::PSwap => pswap_chain_step(state, params, l_fresh),
        InteractionKind::PSTheta => pstheta_chain_step(state, params, l_fresh),
    }
}

/// Run the plain chain for `n` collisions with every ancilla prepared in
/// state `l`; returns the `n + 1` states including the initial one.
pub fn run_chain(
    k0: BlochVector,
    params: &RecurrenceParams,
    l: BlochVector,
    n: u64,
) -> Result<Vec<RecurrenceState>> {
    let mut states = Vec::with_capacity(n as usize + 1);
    let mut state = RecurrenceState::initial(k0);
    states.push(state);
    for _ in 0..n {
        state = chain_step(&state, params, l)?;
        states.push(state);
    }
    Ok(states)
}

/// Outcome of the per-collision ratio test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioOutcome {
    /// The previous iterate already coincides with the target; the
    /// quotient is undefined and the trajectory is terminal.
    Terminal,
    Stat(RatioStat),
}

/// Squared-distance quotient of one memoryless collision and its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioStat {
    /// |k_cur - l|^2 / |k_prev - l|^2.
    pub ratio: f64,
    /// cos^2(alpha); the quotient never exceeds it.
    pub bound: f64,
    /// cos^2(alpha) + sin^2(alpha) |l|^2 sin^2(angle(l, k_prev - l));
    /// the quotient equals kfactor * bound exactly.
    pub kfactor: f64,
}

/// Contraction quotient of one step toward the ancilla state `l`.
pub fn ratio_statistic(
    k_prev: BlochVector,
    k_cur: BlochVector,
    l: BlochVector,
    alpha: f64,
) -> RatioOutcome {
    let d = k_prev - l;
    let dn = d.norm();
    if dn <= 1e-14 {
        return RatioOutcome::Terminal;
    }
    let ratio = (k_cur - l).norm_sq() / d.norm_sq();
    let c2 = alpha.cos() * alpha.cos();
    let s2 = alpha.sin() * alpha.sin();
    let dhat = d * (1.0 / dn);
    let kfactor = c2 + s2 * l.cross(&dhat).norm_sq();
    RatioOutcome::Stat(RatioStat { ratio, bound: c2, kfactor })
}
