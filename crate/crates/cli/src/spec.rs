//! Run and sweep specifications, plus the flag-name vocabulary shared by
//! the command line and config files.

use std::path::PathBuf;

use collihom_core::engine::{EngineConfig, Scheme};
use collihom_core::recurrence::InteractionKind;

use crate::statespec::StateSpec;
use crate::{CliError, CliResult};

pub fn parse_scheme(text: &str) -> CliResult<Scheme> {
    match text.to_ascii_lowercase().as_str() {
        "markov" => Ok(Scheme::Markov),
        "s1" => Ok(Scheme::S1),
        "s2" => Ok(Scheme::S2),
        "s3" => Ok(Scheme::S3),
        "fullswap-memory" | "fullswap_memory" => Ok(Scheme::FullSwapMemory),
        other => Err(CliError::Usage(format!(
            "unknown scheme '{other}' (expected markov, s1, s2, s3, fullswap-memory)"
        ))),
    }
}

pub fn scheme_name(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Markov => "markov",
        Scheme::S1 => "s1",
        Scheme::S2 => "s2",
        Scheme::S3 => "s3",
        Scheme::FullSwapMemory => "fullswap-memory",
    }
}

pub fn parse_interaction(text: &str) -> CliResult<InteractionKind> {
    match text.to_ascii_lowercase().as_str() {
        "pswap" => Ok(InteractionKind::PSwap),
        "pstheta" => Ok(InteractionKind::PSTheta),
        other => Err(CliError::Usage(format!(
            "unknown interaction '{other}' (expected pswap or pstheta)"
        ))),
    }
}

pub fn interaction_name(kind: InteractionKind) -> &'static str {
    match kind {
        InteractionKind::PSwap => "pswap",
        InteractionKind::PSTheta => "pstheta",
    }
}

/// Everything one trajectory run needs.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub scheme: Scheme,
    pub interaction: InteractionKind,
    pub alpha: f64,
    pub delta: f64,
    pub theta: f64,
    pub phi: f64,
    pub system: StateSpec,
    pub ancilla: StateSpec,
    pub n_collisions: u64,
    pub record_every: u64,
    pub epsilon: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub emit_plot_script: bool,
}

impl RunSpec {
    pub fn to_engine_config(&self) -> CliResult<EngineConfig> {
        let cfg = EngineConfig {
            scheme: self.scheme,
            interaction: self.interaction,
            alpha: self.alpha,
            delta: self.delta,
            theta: self.theta,
            phi: self.phi,
            system0: self.system.to_density()?,
            ancilla0: self.ancilla.to_density()?,
            n_collisions: self.n_collisions,
            record_every: self.record_every,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A cartesian sweep over parameter axes; grid points enumerate in
/// axis-declaration order, last axis fastest.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: RunSpec,
    /// (parameter name, raw value tokens); values are parsed per axis.
    pub axes: Vec<(String, Vec<String>)>,
    pub out_dir: PathBuf,
}

pub const SWEEPABLE: [&str; 6] = ["alpha", "delta", "theta", "phi", "scheme", "interaction"];

impl SweepSpec {
    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|(_, vals)| vals.len().max(1)).product()
    }

    pub fn validate(&self) -> CliResult<()> {
        for (name, values) in &self.axes {
            if !SWEEPABLE.contains(&name.as_str()) {
                return Err(CliError::Usage(format!(
                    "cannot sweep '{name}' (sweepable: {})",
                    SWEEPABLE.join(", ")
                )));
            }
            if values.is_empty() {
                return Err(CliError::Usage(format!("axis '{name}' has no values")));
            }
        }
        if self.grid_size() > 1_000_000 {
            return Err(CliError::Usage(format!(
                "sweep grid has {} points, the limit is 1000000",
                self.grid_size()
            )));
        }
        Ok(())
    }

    /// The run spec of one grid point, its file stem, and the axis value
    /// tokens in declaration order.
    pub fn point(&self, index: usize) -> CliResult<(RunSpec, String, Vec<String>)> {
        let mut spec = self.base.clone();
        let mut stem_parts = Vec::new();
        let mut tokens = Vec::new();
        let mut residual = index;
        // Row-major: the last axis varies fastest.
        let mut picks = vec![0usize; self.axes.len()];
        for (i, (_, values)) in self.axes.iter().enumerate().rev() {
            picks[i] = residual % values.len();
            residual /= values.len();
        }
        for ((name, values), pick) in self.axes.iter().zip(picks) {
            let token = &values[pick];
            apply_axis(&mut spec, name, token)?;
            stem_parts.push(format!("{name}-{token}"));
            tokens.push(token.clone());
        }
        let stem = if stem_parts.is_empty() { "point".to_string() } else { stem_parts.join("_") };
        Ok((spec, stem, tokens))
    }
}

fn parse_axis_f64(name: &str, token: &str) -> CliResult<f64> {
    token
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("axis '{name}': bad number '{token}'")))
}

pub fn apply_axis(spec: &mut RunSpec, name: &str, token: &str) -> CliResult<()> {
    match name {
        "alpha" => spec.alpha = parse_axis_f64(name, token)?,
        "delta" => spec.delta = parse_axis_f64(name, token)?,
        "theta" => spec.theta = parse_axis_f64(name, token)?,
        "phi" => spec.phi = parse_axis_f64(name, token)?,
        "scheme" => spec.scheme = parse_scheme(token)?,
        "interaction" => spec.interaction = parse_interaction(token)?,
        other => return Err(CliError::Usage(format!("cannot sweep '{other}'"))),
    }
    Ok(())
}

/// Partially specified run, merged in layers: built-in defaults, then a
/// preset, then a config-file section, then command-line flags. Later
/// layers override earlier ones field by field.
#[derive(Debug, Clone, Default)]
pub struct RunSpecBuilder {
    pub scheme: Option<Scheme>,
    pub interaction: Option<InteractionKind>,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub system: Option<StateSpec>,
    pub ancilla: Option<StateSpec>,
    pub n_collisions: Option<u64>,
    pub record_every: Option<u64>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub emit_plot_script: Option<bool>,
}

impl RunSpecBuilder {
    pub fn overlay(mut self, later: RunSpecBuilder) -> RunSpecBuilder {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if later.$field.is_some() { self.$field = later.$field; })*
            };
        }
        take!(
            scheme,
            interaction,
            alpha,
            delta,
            theta,
            phi,
            system,
            ancilla,
            n_collisions,
            record_every,
            epsilon,
            seed,
            out,
            emit_plot_script
        );
        self
    }

    pub fn from_curve_preset(curve: &crate::presets::CurvePreset) -> RunSpecBuilder {
        RunSpecBuilder {
            scheme: Some(curve.scheme),
            interaction: Some(curve.interaction),
            alpha: Some(curve.alpha),
            delta: Some(curve.delta),
            theta: Some(curve.theta),
            phi: Some(curve.phi),
            system: Some(curve.system),
            ancilla: Some(curve.ancilla),
            n_collisions: Some(curve.n_collisions),
            ..RunSpecBuilder::default()
        }
    }

    pub fn from_config_section(
        section: &crate::config::ConfigSection,
    ) -> CliResult<RunSpecBuilder> {
        let mut b = RunSpecBuilder::default();
        for (key, value) in &section.values {
            match key.as_str() {
                "scheme" => b.scheme = Some(parse_scheme(value)?),
                "interaction" => b.interaction = Some(parse_interaction(value)?),
                "alpha" => b.alpha = Some(parse_config_f64(key, value)?),
                "delta" => b.delta = Some(parse_config_f64(key, value)?),
                "theta" => b.theta = Some(parse_config_f64(key, value)?),
                "phi" => b.phi = Some(parse_config_f64(key, value)?),
                "epsilon" => b.epsilon = Some(parse_config_f64(key, value)?),
                "system" => b.system = Some(StateSpec::parse(value)?),
                "ancilla" => b.ancilla = Some(StateSpec::parse(value)?),
                "n" => b.n_collisions = Some(parse_config_u64(key, value)?),
                "every" => b.record_every = Some(parse_config_u64(key, value)?),
                "seed" => b.seed = Some(parse_config_u64(key, value)?),
                "out" => b.out = Some(PathBuf::from(value)),
                "plot-script" => {
                    b.emit_plot_script = Some(value.parse::<bool>().map_err(|_| {
                        CliError::Usage(format!("plot-script must be true or false, got '{value}'"))
                    })?)
                }
                other => {
                    return Err(CliError::Usage(format!("unknown config key '{other}'")));
                }
            }
        }
        Ok(b)
    }

    /// Resolve against the built-in defaults; the two states have no
    /// defaults and must come from some layer.
    pub fn finish(self) -> CliResult<RunSpec> {
        let system = self
            .system
            .ok_or_else(|| CliError::Usage("no system state: pass --system or a preset".into()))?;
        let ancilla = self.ancilla.ok_or_else(|| {
            CliError::Usage("no ancilla state: pass --ancilla or a preset".into())
        })?;
        Ok(RunSpec {
            scheme: self.scheme.unwrap_or(Scheme::S1),
            interaction: self.interaction.unwrap_or(InteractionKind::PSwap),
            alpha: self.alpha.unwrap_or(0.20),
            delta: self.delta.unwrap_or(1.45),
            theta: self.theta.unwrap_or(0.40),
            phi: self.phi.unwrap_or(0.15),
            system,
            ancilla,
            n_collisions: self.n_collisions.unwrap_or(1000),
            record_every: self.record_every.unwrap_or(1),
            epsilon: self.epsilon.unwrap_or(1e-3),
            seed: self.seed.unwrap_or(0),
            out: self.out.unwrap_or_else(|| PathBuf::from("trajectory.csv")),
            emit_plot_script: self.emit_plot_script.unwrap_or(false),
        })
    }
}

fn parse_config_f64(key: &str, value: &str) -> CliResult<f64> {
    value
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("config key '{key}': bad number '{value}'")))
}

fn parse_config_u64(key: &str, value: &str) -> CliResult<u64> {
    value
        .parse::<u64>()
        .map_err(|_| CliError::Usage(format!("config key '{key}': bad integer '{value}'")))
}
