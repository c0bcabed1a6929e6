//! Problem files: TOML with `[system]`, `[solve]` and `[output]` tables.

use std::path::Path;

use hybrid_ide::exprlang::{parse, Expr, Var};
use hybrid_ide::{BasisConfig, KernelFunction, MatrixFunction, Partition, SystemSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub system: SystemSection,
    pub solve: SolveSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub n: usize,
    pub r: usize,
    pub t0: f64,
    pub tf: f64,
    pub x0: Vec<f64>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "N")]
    pub kernel: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    pub u: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    #[serde(rename = "K")]
    pub blocks: usize,
    #[serde(rename = "M")]
    pub degrees: usize,
    #[serde(default)]
    pub breakpoints: Breakpoints,
}

/// `"uniform"` or an explicit increasing list of `K + 1` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Breakpoints {
    Named(String),
    Explicit(Vec<f64>),
}

impl Default for Breakpoints {
    fn default() -> Self {
        Breakpoints::Named("uniform".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Table,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Number of equally spaced points on `[t0, tf]`, ends included.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval_points: Option<usize>,
    /// Explicit evaluation times; takes precedence over `eval_points`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
    /// Exact solution, one expression per component.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

pub const DEFAULT_EVAL_POINTS: usize = 11;

/// What to print and where.
#[derive(Debug, Clone)]
pub struct OutputSpec {
    pub grid: Vec<f64>,
    pub exact: Option<Vec<Expr>>,
    pub format: Format,
}

/// A fully validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub spec: SystemSpec,
    pub config: BasisConfig,
    pub output: OutputSpec,
}

pub fn load(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_str(&text)
}

pub fn load_str(text: &str) -> Result<Problem, CliError> {
    let file: ProblemFile =
        toml::from_str(text).map_err(|e| CliError::Input(format!("problem file: {e}")))?;
    Problem::from_file(file)
}

/// Serialises a problem file so that `load_str(&print(f))` gives back `f`.
pub fn print(file: &ProblemFile) -> String {
    toml::to_string(file).expect("problem files always serialise")
}

fn input(context: impl Into<String>, message: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {message}", context.into()))
}

fn parse_entry(src: &str, context: &str, allow_s: bool) -> Result<Expr, CliError> {
    let expr = parse(src).map_err(|e| input(context, format!("`{src}`: {e}")))?;
    if !allow_s && expr.uses_var(Var::S) {
        return Err(input(
            context,
            format!("`{src}` uses s, which is only allowed in [system].N"),
        ));
    }
    Ok(expr)
}

fn parse_grid(
    grid: &[Vec<String>],
    name: &str,
    rows: usize,
    cols: usize,
    allow_s: bool,
) -> Result<Vec<Expr>, CliError> {
    let key = format!("[system].{name}");
    if grid.len() != rows {
        return Err(input(
            &key,
            format!("expected {rows} rows, found {}", grid.len()),
        ));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in grid.iter().enumerate() {
        if row.len() != cols {
            return Err(input(
                format!("{key}[{i}]"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        for (j, src) in row.iter().enumerate() {
            out.push(parse_entry(src, &format!("{key}[{i}][{j}]"), allow_s)?);
        }
    }
    Ok(out)
}

fn parse_list(list: &[String], key: &str, len: usize) -> Result<Vec<Expr>, CliError> {
    if list.len() != len {
        return Err(input(
            key,
            format!("expected {len} entries, found {}", list.len()),
        ));
    }
    list.iter()
        .enumerate()
        .map(|(i, src)| parse_entry(src, &format!("{key}[{i}]"), false))
        .collect()
}

fn matrix_function(exprs: Vec<Expr>, rows: usize, cols: usize) -> MatrixFunction {
    MatrixFunction::new(rows, cols, move |t, out| {
        for (o, e) in out.iter_mut().zip(&exprs) {
            *o = e.eval(t, 0.0).map_err(|e| e.to_string())?;
        }
        Ok(())
    })
}

fn kernel_function(exprs: Vec<Expr>, dim: usize) -> KernelFunction {
    KernelFunction::new(dim, move |t, s, out| {
        for (o, e) in out.iter_mut().zip(&exprs) {
            *o = e.eval(t, s).map_err(|e| e.to_string())?;
        }
        Ok(())
    })
}

impl Problem {
    pub fn from_file(file: ProblemFile) -> Result<Self, CliError> {
        let sys = &file.system;
        let (n, r) = (sys.n, sys.r);
        if n == 0 {
            return Err(input("[system].n", "must be at least 1"));
        }
        if r == 0 {
            return Err(input("[system].r", "must be at least 1"));
        }
        if !(sys.t0.is_finite() && sys.tf.is_finite() && sys.tf > sys.t0) {
            return Err(input(
                "[system].tf",
                format!("interval [{}, {}] is empty or not finite", sys.t0, sys.tf),
            ));
        }
        if sys.x0.len() != n {
            return Err(input(
                "[system].x0",
                format!("expected {n} entries, found {}", sys.x0.len()),
            ));
        }
        let a = parse_grid(&sys.a, "A", n, n, false)?;
        let kernel = parse_grid(&sys.kernel, "N", n, n, true)?;
        let b = parse_grid(&sys.b, "B", n, r, false)?;
        let u = parse_list(&sys.u, "[system].u", r)?;

        let spec = SystemSpec {
            t0: sys.t0,
            tf: sys.tf,
            x0: sys.x0.clone(),
            a: matrix_function(a, n, n),
            b: matrix_function(b, n, r),
            kernel: kernel_function(kernel, n),
            u: matrix_function(u, r, 1),
        };
        let config = basis_config(&file)?;
        let output = output_spec(&file)?;
        Ok(Self {
            file,
            spec,
            config,
            output,
        })
    }

    /// Re-validates with `K` and/or `M` replaced.
    pub fn with_overrides(
        &self,
        blocks: Option<usize>,
        degrees: Option<usize>,
    ) -> Result<Self, CliError> {
        if blocks.is_none() && degrees.is_none() {
            return Ok(self.clone());
        }
        let mut file = self.file.clone();
        if let Some(k) = blocks {
            file.solve.blocks = k;
        }
        if let Some(m) = degrees {
            file.solve.degrees = m;
        }
        Self::from_file(file)
    }
}

fn basis_config(file: &ProblemFile) -> Result<BasisConfig, CliError> {
    let (sys, solve) = (&file.system, &file.solve);
    if solve.blocks == 0 {
        return Err(input("[solve].K", "must be at least 1"));
    }
    if solve.degrees == 0 {
        return Err(input("[solve].M", "must be at least 1"));
    }
    let partition = match &solve.breakpoints {
        Breakpoints::Named(name) if name == "uniform" => {
            Partition::uniform(sys.t0, sys.tf, solve.blocks)
                .map_err(|e| input("[solve].breakpoints", e))?
        }
        Breakpoints::Named(other) => {
            return Err(input(
                "[solve].breakpoints",
                format!("expected \"uniform\" or a list of numbers, found \"{other}\""),
            ))
        }
        Breakpoints::Explicit(points) => {
            if points.len() != solve.blocks + 1 {
                return Err(input(
                    "[solve].breakpoints",
                    format!(
                        "K = {} needs {} breakpoints, found {}",
                        solve.blocks,
                        solve.blocks + 1,
                        points.len()
                    ),
                ));
            }
            if points[0] != sys.t0 || points[points.len() - 1] != sys.tf {
                return Err(input(
                    "[solve].breakpoints",
                    format!("must start at t0 = {} and end at tf = {}", sys.t0, sys.tf),
                ));
            }
            Partition::new(points.clone()).map_err(|e| input("[solve].breakpoints", e))?
        }
    };
    BasisConfig::new(partition, solve.degrees).map_err(|e| input("[solve].M", e))
}

fn output_spec(file: &ProblemFile) -> Result<OutputSpec, CliError> {
    let (sys, out) = (&file.system, &file.output);
    let grid = match (&out.t, out.eval_points) {
        (Some(ts), _) => {
            if ts.is_empty() {
                return Err(input("[output].t", "must not be empty"));
            }
            if let Some(bad) = ts.iter().find(|t| !(**t >= sys.t0 && **t <= sys.tf)) {
                return Err(input(
                    "[output].t",
                    format!("{bad} lies outside [{}, {}]", sys.t0, sys.tf),
                ));
            }
            ts.clone()
        }
        (None, points) => {
            let points = points.unwrap_or(DEFAULT_EVAL_POINTS);
            if points < 2 {
                return Err(input("[output].eval_points", "must be at least 2"));
            }
            let h = (sys.tf - sys.t0) / (points - 1) as f64;
            let mut grid: Vec<f64> = (0..points - 1).map(|i| sys.t0 + i as f64 * h).collect();
            grid.push(sys.tf);
            grid
        }
    };
    let exact = match &out.exact {
        Some(list) => Some(parse_list(list, "[output].exact", sys.n)?),
        None => None,
    };
    Ok(OutputSpec {
        grid,
        exact,
        format: out.format.unwrap_or_default(),
    })
}
