//! Two-column numeric text tables.
//!
//! One `x y` pair per line, separated by whitespace or a comma. Blank lines
//! and lines starting with `#` are skipped. `x` must be strictly increasing.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TwoColumn {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn read_two_column(path: &Path) -> Result<TwoColumn> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_two_column(&text, path)
}

pub fn parse_two_column(text: &str, path: &Path) -> Result<TwoColumn> {
    let fail = |line: usize, message: String| Error::Table {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(fail(i + 1, format!("expected 2 columns, found {}", fields.len())));
        }
        let mut parsed = [0.0; 2];
        for (slot, field) in parsed.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .map_err(|e| fail(i + 1, format!("`{field}`: {e}")))?;
            if !slot.is_finite() {
                return Err(fail(i + 1, format!("`{field}` is not finite")));
            }
        }
        if let Some(&last) = x.last() {
            if parsed[0] <= last {
                return Err(fail(i + 1, "first column must be strictly increasing".into()));
            }
        }
        x.push(parsed[0]);
        y.push(parsed[1]);
    }
    if x.len() < 2 {
        return Err(fail(0, "at least two rows are required".into()));
    }
    Ok(TwoColumn { x, y })
}
