//! Fixed-format CSV tables: a `name[unit]` header, values as `{:.16e}`
//! (17 significant digits), LF line endings.

use std::fmt::Write as _;
use std::path::Path;

use crate::dispersion::DispersionResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Empty,
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Number)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: &'static str,
    pub values: Vec<Cell>,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: &'static str, values: impl IntoIterator<Item = f64>) -> Self {
        Self::cells(name, unit, values.into_iter().map(Cell::Number))
    }

    pub fn cells(name: impl Into<String>, unit: &'static str, values: impl IntoIterator<Item = Cell>) -> Self {
        Self {
            name: name.into(),
            unit,
            values: values.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
}

impl Table {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| format!("{}[{}]", c.name, c.unit)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.rows() {
            for (j, c) in self.columns.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                match &c.values[i] {
                    Cell::Number(v) => {
                        let _ = write!(out, "{v:.16e}");
                    }
                    Cell::Text(t) => out.push_str(t),
                    Cell::Empty => {}
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Write `table` to `path`; empty or ragged tables are rejected.
pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    let n = table.rows();
    if n == 0 {
        return Err(Error::Domain(format!("refusing to write empty table {}", path.display())));
    }
    if table.columns.iter().any(|c| c.values.len() != n) {
        return Err(Error::Domain(format!("ragged table {}", path.display())));
    }
    std::fs::write(path, table.render()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn normalized(name: &str, omega: &[f64], tau_sigma: Option<f64>) -> Option<Column> {
    tau_sigma.map(|t| Column::new(name, "1", omega.iter().map(|w| w * t)))
}

/// `omega, [omega_tau_sigma], re_k, im_k, alpha_k, c_p`.
pub fn dispersion_table(d: &DispersionResult, tau_sigma: Option<f64>) -> Table {
    let mut columns = vec![Column::new("omega", "rad/s", d.omega.iter().copied())];
    columns.extend(normalized("omega_tau_sigma", &d.omega, tau_sigma));
    columns.push(Column::new("re_k", "1/m", d.k.iter().map(|k| k.re)));
    columns.push(Column::new("im_k", "1/m", d.k.iter().map(|k| k.im)));
    columns.push(Column::new("alpha_k", "Np/m", d.alpha_k.iter().copied()));
    columns.push(Column::new("c_p", "m/s", d.c_p.iter().copied()));
    Table { columns }
}

/// A single quantity against `omega` (one pane of a dispersion plot).
pub fn pane_table(omega: &[f64], tau_sigma: Option<f64>, name: &str, unit: &'static str, values: &[f64]) -> Table {
    let mut columns = vec![Column::new("omega", "rad/s", omega.iter().copied())];
    columns.extend(normalized("omega_tau_sigma", omega, tau_sigma));
    columns.push(Column::new(name, unit, values.iter().copied()));
    Table { columns }
}

/// `Omega, [Omega_tau_sigma], kappa_nu`.
pub fn distribution_table(omega: &[f64], kappa_nu: &[f64], tau_sigma: Option<f64>) -> Table {
    let mut columns = vec![Column::new("Omega", "rad/s", omega.iter().copied())];
    columns.extend(normalized("Omega_tau_sigma", omega, tau_sigma));
    columns.push(Column::new("kappa_nu", "s/Pa", kappa_nu.iter().copied()));
    Table { columns }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn fixed_format() {
        let d = DispersionResult {
            omega: vec![1.0, 10.0],
            k: vec![Complex64::new(2.0, -0.5), Complex64::new(3.0, -0.25)],
            alpha_k: vec![0.5, 0.25],
            c_p: vec![0.5, 10.0 / 3.0],
        };
        let text = dispersion_table(&d, None).render();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "omega[rad/s],re_k[1/m],im_k[1/m],alpha_k[Np/m],c_p[m/s]");
        assert_eq!(
            lines.next().unwrap(),
            "1.0000000000000000e0,2.0000000000000000e0,-5.0000000000000000e-1,5.0000000000000000e-1,5.0000000000000000e-1"
        );
        assert!(!text.contains('\r'));
        let col = text.lines().nth(2).unwrap().split(',').last().unwrap().to_string();
        assert_eq!(col.parse::<f64>().unwrap(), 10.0 / 3.0);
    }

    #[test]
    fn empty_tables_are_rejected() {
        let t = Table { columns: vec![Column::new("x", "1", [])] };
        assert!(emit_csv(&t, Path::new("/nonexistent/x.csv")).is_err());
    }
}
