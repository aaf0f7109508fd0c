//! The four subcommands: run, sweep, verify, figures.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use collihom_core::analysis::homogenization_time;
use collihom_core::engine::{run, run_full_swap_memory, Scheme, TrajectoryRecord};
use collihom_core::qstate::density_to_bloch;
use collihom_core::verify::{run_verification, VerifyLevel, VerifyReport};

use crate::csvout::{format_float, trajectory_to_csv, write_text, write_trajectory};
use crate::plot::fidelity_plot_script;
use crate::presets::{figure_presets, find_figure, CurvePreset};
use crate::spec::{RunSpec, RunSpecBuilder, SweepSpec};
use crate::{CliError, CliResult};

/// What a single run produced, for callers and tests.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub n_star: Option<u64>,
    pub final_fidelity: f64,
    pub csv_path: PathBuf,
    pub records: Vec<TrajectoryRecord>,
    /// Populated for the full-swap memory scheme: worst disagreement
    /// between the pipeline and the closed form.
    pub closed_form_deviation: Option<f64>,
}

fn execute_trajectory(spec: &RunSpec) -> CliResult<(Vec<TrajectoryRecord>, Option<f64>)> {
    let cfg = spec.to_engine_config()?;
    if spec.scheme == Scheme::FullSwapMemory {
        let fs = run_full_swap_memory(&cfg)?;
        Ok((fs.pipeline, Some(fs.max_deviation)))
    } else {
        Ok((run(&cfg)?, None))
    }
}

fn summarize(spec: &RunSpec, records: &[TrajectoryRecord]) -> CliResult<(Option<u64>, f64)> {
    let target = density_to_bloch(&spec.ancilla.to_density()?)?;
    let report = homogenization_time(records, target, spec.epsilon)?;
    Ok((report.n_star, report.final_fidelity))
}

/// Run one trajectory, write its CSV (and optional plot script), and
/// print the one-line summary.
pub fn cmd_run(spec: &RunSpec) -> CliResult<RunSummary> {
    let (records, closed_form_deviation) = execute_trajectory(spec)?;
    let (n_star, final_fidelity) = summarize(spec, &records)?;
    write_trajectory(&spec.out, &records)?;
    if spec.emit_plot_script {
        let script_path = spec.out.with_extension("gp");
        let csv_name = spec
            .out
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.out.display().to_string());
        let script = fidelity_plot_script(&csv_name, &[(csv_name.clone(), "fidelity".into())]);
        write_text(&script_path, &script)?;
    }
    match n_star {
        Some(n) => println!("n_star={n} final_fidelity={final_fidelity}"),
        None => println!("n_star=none final_fidelity={final_fidelity}"),
    }
    if let Some(dev) = closed_form_deviation {
        println!("closed_form_deviation={dev:e}");
    }
    Ok(RunSummary { n_star, final_fidelity, csv_path: spec.out.clone(), records, closed_form_deviation })
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub points: usize,
    pub index_path: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Run every grid point on a worker pool; each worker writes only its
/// own CSV, and the index is assembled in grid order after the join.
pub fn cmd_sweep(sweep: &SweepSpec) -> CliResult<SweepSummary> {
    sweep.validate()?;
    std::fs::create_dir_all(&sweep.out_dir).map_err(|e| CliError::io(&sweep.out_dir, e))?;
    let size = sweep.grid_size();

    let rows: Vec<(Vec<String>, String, Option<u64>, f64)> = (0..size)
        .into_par_iter()
        .map(|index| -> CliResult<(Vec<String>, String, Option<u64>, f64)> {
            let (mut spec, stem, tokens) = sweep.point(index)?;
            spec.out = sweep.out_dir.join(format!("{stem}.csv"));
            let (records, _) = execute_trajectory(&spec)?;
            let (n_star, final_fidelity) = summarize(&spec, &records)?;
            write_text(&spec.out, &trajectory_to_csv(&records))?;
            Ok((tokens, stem, n_star, final_fidelity))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut index = String::new();
    let axis_names: Vec<&str> = sweep.axes.iter().map(|(n, _)| n.as_str()).collect();
    if axis_names.is_empty() {
        index.push_str("n_star,final_fid\n");
    } else {
        index.push_str(&format!("{},n_star,final_fid\n", axis_names.join(",")));
    }
    let mut files = Vec::with_capacity(rows.len());
    for (tokens, stem, n_star, final_fid) in &rows {
        let mut cells = tokens.clone();
        cells.push(n_star.map(|n| n.to_string()).unwrap_or_default());
        cells.push(format_float(*final_fid));
        index.push_str(&cells.join(","));
        index.push('\n');
        files.push(sweep.out_dir.join(format!("{stem}.csv")));
    }
    let index_path = sweep.out_dir.join("index.csv");
    write_text(&index_path, &index)?;
    println!("sweep: {size} points -> {}", sweep.out_dir.display());
    Ok(SweepSummary { points: size, index_path, files })
}

/// Run the verification suites and print one line per property.
pub fn cmd_verify(seed: u64, level: VerifyLevel) -> CliResult<VerifyReport> {
    let report = run_verification(seed, level)
        .map_err(|e| CliError::Usage(format!("verification could not run: {e}")))?;
    for r in &report.results {
        println!(
            "{} {} worst={:.3e} tol={:.0e} ({})",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.worst,
            r.tolerance,
            r.detail
        );
    }
    println!(
        "verification {} ({} properties, seed {seed})",
        if report.passed() { "PASSED" } else { "FAILED" },
        report.results.len()
    );
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub name: &'static str,
    /// (curve label, CSV path) in preset order.
    pub curves: Vec<(String, PathBuf)>,
    pub script: PathBuf,
}

fn curve_spec(curve: &CurvePreset, out: PathBuf) -> CliResult<RunSpec> {
    let mut builder = RunSpecBuilder::from_curve_preset(curve);
    builder.out = Some(out);
    builder.finish()
}

/// Emit the CSVs and plot script of one preset or of all of them.
pub fn cmd_figures(which: &str, out_dir: &Path) -> CliResult<Vec<FigureOutput>> {
    let figures = if which == "all" {
        figure_presets()
    } else {
        vec![find_figure(which)
            .ok_or_else(|| CliError::Usage(format!("unknown figure preset '{which}'")))?]
    };
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;

    let mut outputs = Vec::new();
    for figure in &figures {
        let curve_runs: Vec<(String, PathBuf)> = figure
            .curves
            .par_iter()
            .map(|curve| -> CliResult<(String, PathBuf)> {
                let path = out_dir.join(format!("{}__{}.csv", figure.name, curve.label));
                let spec = curve_spec(curve, path.clone())?;
                let (records, _) = execute_trajectory(&spec)?;
                write_text(&path, &trajectory_to_csv(&records))?;
                Ok((curve.label.to_string(), path))
            })
            .collect::<CliResult<Vec<_>>>()?;

        let script_curves: Vec<(String, String)> = curve_runs
            .iter()
            .map(|(label, path)| {
                let file = path
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                (file, label.clone())
            })
            .collect();
        let script_path = out_dir.join(format!("{}.gp", figure.name));
        write_text(&script_path, &fidelity_plot_script(figure.name, &script_curves))?;
        println!("{}: {} curves -> {}", figure.name, curve_runs.len(), out_dir.display());
        outputs.push(FigureOutput { name: figure.name, curves: curve_runs, script: script_path });
    }
    Ok(outputs)
}
