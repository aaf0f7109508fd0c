//! The qubit state grammar used by flags, config files, and presets:
//!
//! - `bloch:x,y,z` — Bloch components,
//! - `ket:a_re,a_im,b_re,b_im` — pure-state amplitudes, normalized,
//! - `diag:p` — the diagonal mixture diag(p, 1 - p).

use collihom_core::qstate::{bloch_to_density, BlochVector, DensityMatrix};
use num_complex::Complex64;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Bloch { x: f64, y: f64, z: f64 },
    Ket { amps: [f64; 4] },
    Diag { p: f64 },
}

fn parse_floats(field: &str, body: &str, count: usize) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != count {
        return Err(CliError::Usage(format!(
            "state spec '{field}:{body}' needs {count} comma-separated numbers"
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.trim().parse::<f64>().map_err(|_| {
                CliError::Usage(format!("state spec '{field}:{body}': bad number '{p}'"))
            })
        })
        .collect()
}

impl StateSpec {
    pub fn parse(text: &str) -> CliResult<StateSpec> {
        let Some((kind, body)) = text.split_once(':') else {
            return Err(CliError::Usage(format!(
                "state spec '{text}' must look like bloch:x,y,z, ket:a_re,a_im,b_re,b_im, or diag:p"
            )));
        };
        match kind {
            "bloch" => {
                let v = parse_floats(kind, body, 3)?;
                Ok(StateSpec::Bloch { x: v[0], y: v[1], z: v[2] })
            }
            "ket" => {
                let v = parse_floats(kind, body, 4)?;
                Ok(StateSpec::Ket { amps: [v[0], v[1], v[2], v[3]] })
            }
            "diag" => {
                let v = parse_floats(kind, body, 1)?;
                if !(0.0..=1.0).contains(&v[0]) {
                    return Err(CliError::Usage(format!(
                        "state spec 'diag:{body}': probability must lie in [0, 1]"
                    )));
                }
                Ok(StateSpec::Diag { p: v[0] })
            }
            other => Err(CliError::Usage(format!("unknown state spec kind '{other}'"))),
        }
    }

    pub fn to_density(&self) -> CliResult<DensityMatrix> {
        match *self {
            StateSpec::Bloch { x, y, z } => {
                let b = BlochVector::new(x, y, z)
                    .map_err(|e| CliError::Usage(format!("state spec bloch: {e}")))?;
                Ok(bloch_to_density(b))
            }
            StateSpec::Ket { amps } => DensityMatrix::from_pure(&[
                Complex64::new(amps[0], amps[1]),
                Complex64::new(amps[2], amps[3]),
            ])
            .map_err(|e| CliError::Usage(format!("state spec ket: {e}"))),
            StateSpec::Diag { p } => {
                let b = BlochVector::new(0.0, 0.0, 2.0 * p - 1.0)
                    .map_err(|e| CliError::Usage(format!("state spec diag: {e}")))?;
                Ok(bloch_to_density(b))
            }
        }
    }
}

impl std::fmt::Display for StateSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            StateSpec::Bloch { x, y, z } => write!(f, "bloch:{x},{y},{z}"),
            StateSpec::Ket { amps } => {
                write!(f, "ket:{},{},{},{}", amps[0], amps[1], amps[2], amps[3])
            }
            StateSpec::Diag { p } => write!(f, "diag:{p}"),
        }
    }
}
