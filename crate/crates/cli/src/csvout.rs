//! CSV emission: header row, data rows, and a trailing metadata comment
//! carrying the config hash and seed.

use std::fmt::Write as _;

/// FNV-1a over the canonical parameter string; stable across runs.
pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub struct Csv {
    header: String,
    rows: Vec<String>,
    meta: Vec<(String, String)>,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Csv {
            header: header.to_string(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.rows.push(cells.join(","));
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    /// Standard trailing metadata: #config-hash and #seed.
    pub fn stamp(&mut self, config: &str, seed: u64) {
        self.meta
            .push(("config-hash".into(), format!("{:016x}", fnv1a(config))));
        self.meta.push(("seed".into(), seed.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header);
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        let mut tail = String::new();
        for (k, v) in &self.meta {
            let _ = write!(tail, " {k}={v}");
        }
        if !tail.is_empty() {
            let _ = writeln!(out, "#{}", tail.trim_start());
        }
        out
    }
}

pub fn fmt_f(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{x:.1}")
    } else {
        format!("{x:.12e}")
    }
}
