use std::fs;

use serde::de::DeserializeOwned;

use crate::error::CliError;

pub fn check_readable(paths: &[&str]) -> Result<(), CliError> {
    for path in paths {
        fs::File::open(path).map_err(|e| CliError::io(format!("{path}: {e}")))?;
    }
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{path}: {e}")))
}

/// Parses `1,2,4` (spaces allowed) into vertex labels.
pub fn parse_vertices(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::input(format!("bad vertex list '{s}'"))))
        .collect()
}

/// `--seed` wins over `HYPERVOL_SEED`, which wins over 0.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("HYPERVOL_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::input(format!("HYPERVOL_SEED is not an integer: '{v}'"))),
        Err(_) => Ok(0),
    }
}
