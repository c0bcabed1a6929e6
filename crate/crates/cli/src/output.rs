//! Number formatting, CSV and aligned tables.

use hybrid_ide::exprlang::Expr;
use hybrid_ide::HybridSolution;

use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 14;

/// C's `%.14g`: 14 significant digits, trailing zeros dropped, exponent form
/// outside `1e-5 <= |v| < 1e14`.
pub fn format_g(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One evaluated row: `t`, the state, and optionally the exact state.
pub struct Row {
    pub t: f64,
    pub x: Vec<f64>,
    pub exact: Option<Vec<f64>>,
}

impl Row {
    pub fn err_max(&self) -> Option<f64> {
        self.exact.as_ref().map(|e| {
            e.iter()
                .zip(&self.x)
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
        })
    }
}

pub fn evaluate_rows(
    sol: &HybridSolution,
    grid: &[f64],
    exact: Option<&[Expr]>,
) -> Result<Vec<Row>, CliError> {
    grid.iter()
        .map(|&t| {
            let x = sol.evaluate(t).map_err(CliError::Numerical)?;
            let exact = match exact {
                Some(exprs) => Some(
                    exprs
                        .iter()
                        .enumerate()
                        .map(|(i, e)| {
                            e.eval(t, 0.0).map_err(|err| {
                                CliError::Input(format!("[output].exact[{i}]: {err}"))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                None => None,
            };
            Ok(Row { t, x, exact })
        })
        .collect()
}

fn header(n: usize, with_exact: bool) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=n).map(|i| format!("x{i}")));
    if with_exact {
        cols.extend((1..=n).map(|i| format!("exact{i}")));
        cols.push("err_max".into());
    }
    cols
}

/// Values below half a unit in the 14th decimal are roundoff at table
/// precision and print as `0`.
pub fn flush_tiny(v: f64) -> f64 {
    if v.abs() < 5e-15 {
        0.0
    } else {
        v
    }
}

fn cells(row: &Row) -> Vec<String> {
    let mut out = vec![format_g(row.t)];
    out.extend(row.x.iter().map(|&v| format_g(flush_tiny(v))));
    if let Some(exact) = &row.exact {
        out.extend(exact.iter().map(|&v| format_g(flush_tiny(v))));
        out.push(format_g(row.err_max().unwrap_or(0.0)));
    }
    out
}

pub fn emit_csv(rows: &[Row], n: usize) -> String {
    let with_exact = rows.first().is_some_and(|r| r.exact.is_some());
    let mut out = header(n, with_exact).join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&cells(row).join(","));
        out.push('\n');
    }
    out
}

pub fn emit_table(rows: &[Row], n: usize) -> String {
    let with_exact = rows.first().is_some_and(|r| r.exact.is_some());
    let body: Vec<Vec<String>> = rows.iter().map(cells).collect();
    aligned(&header(n, with_exact), &body)
}

/// Right-aligned columns separated by two spaces.
pub fn aligned(header: &[String], body: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |row: &[String]| {
        let parts: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    out.push_str(&line(
        &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
    ));
    for row in body {
        out.push_str(&line(row));
    }
    out
}
