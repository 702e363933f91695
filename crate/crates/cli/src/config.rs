//! Plain-text configuration files: one `key = value` per line, `#` comments.
//! Keys mirror the long flag names of the subcommand; anything unknown is a
//! usage error, not a warning.

use std::collections::BTreeMap;
use std::path::Path;

pub fn parse_config(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
        let key = k.trim().to_string();
        if key.is_empty() {
            return Err(format!("config line {}: empty key", lineno + 1));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(format!("config line {}: duplicate key `{key}`", lineno + 1));
        }
    }
    Ok(out)
}

/// Pulls a typed value out of the map, removing it so leftovers can be
/// reported as unknown keys.
pub fn take<T: std::str::FromStr>(
    cfg: &mut BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    match cfg.remove(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|e| format!("config key `{key}`: {e}")),
    }
}

pub fn reject_unknown(cfg: &BTreeMap<String, String>) -> Result<(), String> {
    if let Some(k) = cfg.keys().next() {
        return Err(format!("unknown config key `{k}`"));
    }
    Ok(())
}
