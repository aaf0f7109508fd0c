//! Trajectory CSV emission. One header row, comma separation, scientific
//! notation with 17 significant digits (lossless for doubles), absent
//! fields as empty cells. Identical runs produce identical bytes.

use std::io::Write;
use std::path::Path;

use collihom_core::engine::TrajectoryRecord;

use crate::{CliError, CliResult};

pub const HEADER: &str = "n,fid,kx,ky,kz,lout_x,lout_y,lout_z,ratio";

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn trajectory_to_csv(records: &[TrajectoryRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 96 + HEADER.len() + 1);
    out.push_str(HEADER);
    out.push('\n');
    for r in records {
        let lout = r.l_out.map(|l| (l.x, l.y, l.z));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            format_float(r.fidelity),
            format_float(r.k.x),
            format_float(r.k.y),
            format_float(r.k.z),
            opt(lout.map(|l| l.0)),
            opt(lout.map(|l| l.1)),
            opt(lout.map(|l| l.2)),
            opt(r.ratio),
        ));
    }
    out
}

pub fn write_trajectory(path: &Path, records: &[TrajectoryRecord]) -> CliResult<()> {
    write_text(path, &trajectory_to_csv(records))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
    }
    let mut file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}
