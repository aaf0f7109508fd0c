use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use collihom_cli::commands::{cmd_figures, cmd_run, cmd_sweep, cmd_verify};
use collihom_cli::config::parse_config;
use collihom_cli::presets::run_preset;
use collihom_cli::spec::{parse_interaction, parse_scheme, RunSpecBuilder, SweepSpec};
use collihom_cli::statespec::StateSpec;
use collihom_cli::{CliError, CliResult};
use collihom_core::verify::VerifyLevel;

/// Collisional-model quantum homogenization simulator.
#[derive(Parser)]
#[command(name = "collihom", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one collision trajectory and write it as CSV.
    Run(RunArgs),
    /// Run a cartesian parameter sweep; one CSV per grid point plus an index.
    Sweep(SweepArgs),
    /// Cross-validate the recurrences, engines, and bounds; exit 1 on failure.
    Verify(VerifyArgs),
    /// Emit the bundled figure configurations as CSVs plus plot scripts.
    Figures(FigureArgs),
}

#[derive(Args, Clone)]
struct CommonRunArgs {
    /// System-ancilla partial-swap angle (radians).
    #[arg(long)]
    alpha: Option<f64>,
    /// Ancilla-ancilla collision angle (radians).
    #[arg(long)]
    delta: Option<f64>,
    /// Modified-swap generator angle theta (radians).
    #[arg(long)]
    theta: Option<f64>,
    /// Modified-swap generator angle phi (radians).
    #[arg(long)]
    phi: Option<f64>,
    /// Scheduler: markov, s1, s2, s3, or fullswap-memory.
    #[arg(long)]
    scheme: Option<String>,
    /// Ancilla-ancilla unitary kind: pswap or pstheta.
    #[arg(long)]
    interaction: Option<String>,
    /// Initial system state: bloch:x,y,z | ket:a_re,a_im,b_re,b_im | diag:p.
    #[arg(long)]
    system: Option<String>,
    /// Ancilla preparation, same grammar as --system.
    #[arg(long)]
    ancilla: Option<String>,
    /// Number of collisions.
    #[arg(long)]
    n: Option<u64>,
    /// Record every k-th collision (the initial state and the final
    /// collision are always recorded).
    #[arg(long)]
    every: Option<u64>,
    /// Convergence tolerance on Bloch distance for the summary.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Seed for sampled verifications.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (run) or directory (sweep).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonRunArgs {
    fn to_builder(&self) -> CliResult<RunSpecBuilder> {
        Ok(RunSpecBuilder {
            scheme: self.scheme.as_deref().map(parse_scheme).transpose()?,
            interaction: self.interaction.as_deref().map(parse_interaction).transpose()?,
            alpha: self.alpha,
            delta: self.delta,
            theta: self.theta,
            phi: self.phi,
            system: self.system.as_deref().map(StateSpec::parse).transpose()?,
            ancilla: self.ancilla.as_deref().map(StateSpec::parse).transpose()?,
            n_collisions: self.n,
            record_every: self.every,
            epsilon: self.epsilon,
            seed: self.seed,
            out: self.out.clone(),
            emit_plot_script: None,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// Start from a bundled single-curve preset.
    #[arg(long)]
    preset: Option<String>,
    /// Read runs from a key=value config file (one section per run);
    /// flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    plot_script: bool,
    #[command(flatten)]
    common: CommonRunArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep axis as name=v1,v2,... over alpha, delta, theta, phi,
    /// scheme, interaction; repeatable, declaration order is grid order.
    #[arg(long = "axis", value_name = "NAME=V1,V2,...")]
    axes: Vec<String>,
    #[command(flatten)]
    common: CommonRunArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// quick or full.
    #[arg(long, default_value = "quick")]
    level: String,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure preset name, or "all".
    #[arg(long, default_value = "all")]
    preset: String,
    /// Output directory.
    #[arg(long, default_value = "figures")]
    out: PathBuf,
}

fn base_builder(preset: &Option<String>) -> CliResult<RunSpecBuilder> {
    match preset {
        None => Ok(RunSpecBuilder::default()),
        Some(name) => {
            let curve = run_preset(name)
                .ok_or_else(|| CliError::Usage(format!("unknown run preset '{name}'")))?;
            Ok(RunSpecBuilder::from_curve_preset(&curve))
        }
    }
}

fn run_command(args: &RunArgs) -> CliResult<()> {
    let preset_layer = base_builder(&args.preset)?;
    let mut flag_layer = args.common.to_builder()?;
    if args.plot_script {
        flag_layer.emit_plot_script = Some(true);
    }

    match &args.config {
        None => {
            let spec = preset_layer.overlay(flag_layer).finish()?;
            cmd_run(&spec)?;
        }
        Some(path) => {
            let sections = parse_config(path)?;
            if sections.len() > 1 && args.common.out.is_some() {
                return Err(CliError::Usage(
                    "--out conflicts with a multi-section config; set out per section".into(),
                ));
            }
            for section in &sections {
                let mut layered = preset_layer
                    .clone()
                    .overlay(RunSpecBuilder::from_config_section(section)?)
                    .overlay(flag_layer.clone());
                if layered.out.is_none() {
                    if let Some(name) = &section.name {
                        layered.out = Some(PathBuf::from(format!("{name}.csv")));
                    }
                }
                cmd_run(&layered.finish()?)?;
            }
        }
    }
    Ok(())
}

fn sweep_command(args: &SweepArgs) -> CliResult<()> {
    let mut axes = Vec::new();
    for axis in &args.axes {
        let Some((name, values)) = axis.split_once('=') else {
            return Err(CliError::Usage(format!(
                "axis '{axis}' must look like name=v1,v2,..."
            )));
        };
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
        axes.push((name.trim().to_string(), values));
    }
    let out_dir = args.common.out.clone().unwrap_or_else(|| PathBuf::from("sweep"));
    let mut base = args.common.to_builder()?;
    base.out = None;
    let sweep = SweepSpec { base: base.finish()?, axes, out_dir };
    cmd_sweep(&sweep)?;
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult<ExitCode> {
    match &cli.command {
        Command::Run(args) => {
            run_command(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(args) => {
            sweep_command(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let level = match args.level.to_ascii_lowercase().as_str() {
                "quick" => VerifyLevel::Quick,
                "full" => VerifyLevel::Full,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown level '{other}' (expected quick or full)"
                    )))
                }
            };
            let report = cmd_verify(args.seed, level)?;
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Figures(args) => {
            cmd_figures(&args.preset, &args.out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
