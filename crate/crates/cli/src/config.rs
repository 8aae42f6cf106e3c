//! Experiment config files: a line-based key-value format.
//!
//! ```text
//! # comment
//! [count]
//! group = sl2
//! kind = principal
//! level = 2
//! norm-bound = 10
//! method = both
//! ```
//!
//! Each `[section]` opens one experiment of that kind; keys repeat the CLI
//! flag names (hyphens and underscores are interchangeable).

use latspec_core::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct Experiment {
    pub kind: String,
    pub params: BTreeMap<String, String>,
}

pub fn parse_config(text: &str) -> Result<Vec<Experiment>> {
    let mut experiments: Vec<Experiment> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(section) = line.strip_prefix('[') {
            let kind = section
                .strip_suffix(']')
                .ok_or_else(|| Error::input(format!("line {}: unclosed section", lineno + 1)))?
                .trim()
                .to_lowercase();
            if kind.is_empty() {
                return Err(Error::input(format!(
                    "line {}: empty section name",
                    lineno + 1
                )));
            }
            experiments.push(Experiment {
                kind,
                params: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::input(format!("line {}: expected key = value", lineno + 1)))?;
        let exp = experiments.last_mut().ok_or_else(|| {
            Error::input(format!("line {}: key before any [section]", lineno + 1))
        })?;
        let key = key.trim().to_lowercase().replace('_', "-");
        exp.params.insert(key, value.trim().to_string());
    }
    Ok(experiments)
}

/// Canonical string for hashing.
pub fn canonical(experiments: &[Experiment]) -> String {
    let mut out = String::new();
    for e in experiments {
        out.push('[');
        out.push_str(&e.kind);
        out.push(']');
        for (k, v) in &e.params {
            out.push_str(&format!("{k}={v};"));
        }
    }
    out
}

/// "1:10" (inclusive range), "1:10:2" (stepped) or "1,4,9" (list).
pub fn parse_i64_grid(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::input(format!("bad grid '{s}': want lo:hi[:step] or a,b,c"));
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let lo: i64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: i64 = parts[1].trim().parse().map_err(|_| bad())?;
        let step: i64 = if parts.len() == 3 {
            parts[2].trim().parse().map_err(|_| bad())?
        } else {
            1
        };
        if step <= 0 || hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).step_by(step as usize).collect());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::input(format!("bad integer '{x}' in grid")))
        })
        .collect()
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            if x.eq_ignore_ascii_case("inf") {
                Ok(f64::INFINITY)
            } else {
                x.parse()
                    .map_err(|_| Error::input(format!("bad number '{x}' in list")))
            }
        })
        .collect()
}
