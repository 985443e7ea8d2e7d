//! Flat key=value configuration mirroring the CLI flags, plus the
//! RNFORGE_WORKERS environment override.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Result, RnError};

pub const WORKERS_ENV: &str = "RNFORGE_WORKERS";

/// Parses a flat key=value file; '#' starts a comment, blank lines are
/// skipped, later keys win.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(RnError::Parse {
                line: idx + 1,
                msg: format!("expected key=value, got '{line}'"),
            });
        };
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// Worker count: RNFORGE_WORKERS if set and valid, else the given
/// default, else all logical CPUs when the default is 0.
pub fn effective_workers(default: usize) -> usize {
    let from_env = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w > 0);
    let w = from_env.unwrap_or(default);
    if w == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        w
    }
}
