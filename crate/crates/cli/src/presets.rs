//! Bundled demonstration configurations. Each figure preset reproduces
//! one fidelity-versus-collisions plot; each of its curves is also
//! runnable on its own through `run --preset <name>`.

use collihom_core::engine::Scheme;
use collihom_core::recurrence::InteractionKind;

use crate::statespec::StateSpec;

#[derive(Debug, Clone, Copy)]
pub struct CurvePreset {
    /// Name accepted by `run --preset`.
    pub run_name: &'static str,
    /// Curve label inside the figure (file suffix and plot legend).
    pub label: &'static str,
    pub scheme: Scheme,
    pub interaction: InteractionKind,
    pub alpha: f64,
    pub delta: f64,
    pub theta: f64,
    pub phi: f64,
    pub system: StateSpec,
    pub ancilla: StateSpec,
    pub n_collisions: u64,
}

#[derive(Debug, Clone)]
pub struct FigurePreset {
    pub name: &'static str,
    pub description: &'static str,
    pub curves: Vec<CurvePreset>,
}

fn ket(a: f64, b: f64) -> StateSpec {
    StateSpec::Ket { amps: [a, 0.0, b, 0.0] }
}

fn bloch(x: f64, y: f64, z: f64) -> StateSpec {
    StateSpec::Bloch { x, y, z }
}

const DELTA: f64 = 1.45;
const THETA: f64 = 0.40;
const PHI: f64 = 0.15;

/// Superposition system state with amplitudes 1/sqrt(5) and 2/sqrt(5).
fn superposition_system() -> StateSpec {
    ket(1.0 / 5.0_f64.sqrt(), 2.0 / 5.0_f64.sqrt())
}

/// Pure ancilla with amplitudes 1/sqrt(3) and sqrt(2/3).
fn coherent_ancilla() -> StateSpec {
    ket(1.0 / 3.0_f64.sqrt(), (2.0 / 3.0_f64).sqrt())
}

fn swap_axis_pair(
    fig: &'static str,
    names: (&'static str, &'static str),
    plus: StateSpec,
    minus: StateSpec,
    n: u64,
) -> FigurePreset {
    let curve = |run_name, label, alpha, system| CurvePreset {
        run_name,
        label,
        scheme: Scheme::S1,
        interaction: InteractionKind::PSwap,
        alpha,
        delta: DELTA,
        theta: 0.0,
        phi: 0.0,
        system,
        ancilla: bloch(0.0, 0.0, 1.0),
        n_collisions: n,
    };
    FigurePreset {
        name: fig,
        description: "swap-chain homogenization of an axis state toward the +z ancilla",
        curves: vec![
            curve(names.0, "alpha-0.20", 0.20, plus),
            curve(names.1, "alpha-0.70", 0.70, minus),
        ],
    }
}

fn theta_axis_pair(
    fig: &'static str,
    names: (&'static str, &'static str),
    plus: StateSpec,
    minus: StateSpec,
    n: u64,
) -> FigurePreset {
    let curve = |run_name, label, alpha, system| CurvePreset {
        run_name,
        label,
        scheme: Scheme::S1,
        interaction: InteractionKind::PSTheta,
        alpha,
        delta: DELTA,
        theta: THETA,
        phi: PHI,
        system,
        ancilla: bloch(0.0, 0.0, 1.0),
        n_collisions: n,
    };
    FigurePreset {
        name: fig,
        description: "modified-swap chain homogenization of an axis state toward the +z ancilla",
        curves: vec![
            curve(names.0, "alpha-0.20", 0.20, plus),
            curve(names.1, "alpha-0.30", 0.30, minus),
        ],
    }
}

/// The ten bundled figures.
pub fn figure_presets() -> Vec<FigurePreset> {
    let mut figures = vec![
        swap_axis_pair(
            "fig-zswap",
            ("fig-zswap-plus", "fig-zswap-minus"),
            bloch(0.0, 0.0, 1.0),
            bloch(0.0, 0.0, -1.0),
            3000,
        ),
        swap_axis_pair(
            "fig-xswap",
            ("fig-xswap-plus", "fig-xswap-minus"),
            bloch(1.0, 0.0, 0.0),
            bloch(-1.0, 0.0, 0.0),
            3000,
        ),
        swap_axis_pair(
            "fig-yswap",
            ("fig-yswap-plus", "fig-yswap-minus"),
            bloch(0.0, 1.0, 0.0),
            bloch(0.0, -1.0, 0.0),
            3000,
        ),
        FigurePreset {
            name: "fig-pswap-gen",
            description: "swap-chain homogenization of a superposition onto a coherent ancilla",
            curves: vec![CurvePreset {
                run_name: "fig-pswap-gen",
                label: "s1",
                scheme: Scheme::S1,
                interaction: InteractionKind::PSwap,
                alpha: 0.20,
                delta: DELTA,
                theta: 0.0,
                phi: 0.0,
                system: superposition_system(),
                ancilla: coherent_ancilla(),
                n_collisions: 3000,
            }],
        },
        FigurePreset {
            name: "fig-pswap-dia",
            description: "swap-chain homogenization of a superposition onto a diagonal ancilla",
            curves: vec![CurvePreset {
                run_name: "fig-pswap-dia",
                label: "s1",
                scheme: Scheme::S1,
                interaction: InteractionKind::PSwap,
                alpha: 0.20,
                delta: DELTA,
                theta: 0.0,
                phi: 0.0,
                system: superposition_system(),
                ancilla: StateSpec::Diag { p: 0.6 },
                n_collisions: 3000,
            }],
        },
        theta_axis_pair(
            "fig-ztheta",
            ("fig-ztheta-plus", "fig-ztheta-minus"),
            bloch(0.0, 0.0, 1.0),
            bloch(0.0, 0.0, -1.0),
            2000,
        ),
        theta_axis_pair(
            "fig-xtheta",
            ("fig-xtheta-plus", "fig-xtheta-minus"),
            bloch(1.0, 0.0, 0.0),
            bloch(-1.0, 0.0, 0.0),
            2000,
        ),
        theta_axis_pair(
            "fig-ytheta",
            ("fig-ytheta-plus", "fig-ytheta-minus"),
            bloch(0.0, 1.0, 0.0),
            bloch(0.0, -1.0, 0.0),
            2000,
        ),
    ];

    let psi_curve = |run_name, label, scheme, interaction, ancilla, n| CurvePreset {
        run_name,
        label,
        scheme,
        interaction,
        alpha: 0.20,
        delta: DELTA,
        theta: THETA,
        phi: PHI,
        system: superposition_system(),
        ancilla,
        n_collisions: n,
    };
    let coherent = bloch(1.0, 0.0, 0.0);
    figures.push(FigurePreset {
        name: "fig-psi-1",
        description: "model comparison on a coherent ancilla: the modified swap cannot homogenize",
        curves: vec![
            psi_curve(
                "fig-psi1-markov",
                "markov",
                Scheme::Markov,
                InteractionKind::PSwap,
                coherent,
                5000,
            ),
            psi_curve(
                "fig-psi1-pswap",
                "s1-pswap",
                Scheme::S1,
                InteractionKind::PSwap,
                coherent,
                5000,
            ),
            psi_curve(
                "fig-psi1-pstheta",
                "s1-pstheta",
                Scheme::S1,
                InteractionKind::PSTheta,
                coherent,
                5000,
            ),
        ],
    });
    let diagonal = StateSpec::Diag { p: 0.6 };
    figures.push(FigurePreset {
        name: "fig-psi-2",
        description: "model comparison on a diagonal ancilla, including the scheme-2 overlay",
        curves: vec![
            psi_curve(
                "fig-psi2-markov",
                "markov",
                Scheme::Markov,
                InteractionKind::PSwap,
                diagonal,
                4000,
            ),
            psi_curve(
                "fig-psi2-pswap",
                "s1-pswap",
                Scheme::S1,
                InteractionKind::PSwap,
                diagonal,
                4000,
            ),
            psi_curve(
                "fig-psi2-pstheta",
                "s1-pstheta",
                Scheme::S1,
                InteractionKind::PSTheta,
                diagonal,
                4000,
            ),
            psi_curve(
                "fig-psi2-pstheta-s2",
                "s2-pstheta",
                Scheme::S2,
                InteractionKind::PSTheta,
                diagonal,
                4000,
            ),
        ],
    });
    figures
}

pub fn find_figure(name: &str) -> Option<FigurePreset> {
    figure_presets().into_iter().find(|f| f.name == name)
}

/// Look up a single-curve run preset by name.
pub fn run_preset(name: &str) -> Option<CurvePreset> {
    figure_presets()
        .into_iter()
        .flat_map(|f| f.curves)
        .find(|c| c.run_name == name)
}
