//! Flat key=value config files with one `[section]` per run. Lines
//! starting with `#` are comments. Keys match the long flag names.

use std::collections::HashMap;
use std::path::Path;

use crate::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct ConfigSection {
    pub name: Option<String>,
    pub values: HashMap<String, String>,
}

pub const KNOWN_KEYS: [&str; 14] = [
    "scheme",
    "interaction",
    "alpha",
    "delta",
    "theta",
    "phi",
    "system",
    "ancilla",
    "n",
    "every",
    "epsilon",
    "seed",
    "out",
    "plot-script",
];

/// Parse a config file into orderly sections. Keys before any section
/// header form a single anonymous section.
pub fn parse_config(path: &Path) -> CliResult<Vec<ConfigSection>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut sections: Vec<ConfigSection> = Vec::new();
    let mut current = ConfigSection { name: None, values: HashMap::new() };
    let mut saw_any = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if saw_any || !current.values.is_empty() {
                sections.push(current);
            }
            current = ConfigSection { name: Some(name.trim().to_string()), values: HashMap::new() };
            saw_any = true;
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "{}:{}: unknown key '{key}'",
                path.display(),
                lineno + 1
            )));
        }
        current.values.insert(key, value.trim().to_string());
    }
    if saw_any {
        sections.push(current);
    } else {
        // No headers: the whole file is one anonymous run.
        sections.push(current);
    }
    Ok(sections)
}
