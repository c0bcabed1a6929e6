//! Command-line front end: load a problem file, solve, print CSV or tables.
//!
//! Exit codes: 0 success, 1 input error, 2 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub mod output;
pub mod problem;

pub use output::{emit_csv, emit_table, format_g};
pub use problem::{load, load_str, print, Format, OutputSpec, Problem, ProblemFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Numerical(hybrid_ide::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<hybrid_ide::Error> for CliError {
    fn from(e: hybrid_ide::Error) -> Self {
        use hybrid_ide::Error as E;
        match e {
            E::Singular { .. } | E::FunctionEval { .. } => CliError::Numerical(e),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hybrid-ide",
    version,
    about = "Hybrid block-pulse/Chebyshev solver for linear integrodifferential systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and print the solution on the output grid.
    Solve {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Number of blocks (overrides [solve].K)
        #[arg(long = "K", value_name = "INT")]
        blocks: Option<usize>,
        /// Chebyshev degrees per block (overrides [solve].M)
        #[arg(long = "M", value_name = "INT")]
        degrees: Option<usize>,
        /// Write the result here instead of standard output
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Compare the exact solution with hybrid solutions for several M.
    Table {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        #[arg(
            long = "M-list",
            value_name = "LIST",
            value_delimiter = ',',
            required = true
        )]
        m_list: Vec<usize>,
        #[arg(long = "K", value_name = "INT")]
        blocks: Option<usize>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli.command, stderr) {
        Ok((text, out)) => match out {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    1
                }
            },
            None => {
                let _ = stdout.write_all(text.as_bytes());
                0
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Builds the full output text before anything is written, so failures
/// never leave partial output behind.
fn execute<'a>(
    command: &'a Command,
    stderr: &mut dyn Write,
) -> Result<(String, Option<&'a PathBuf>), CliError> {
    match command {
        Command::Solve {
            config,
            blocks,
            degrees,
            out,
            format,
        } => {
            let problem = load(config)?.with_overrides(*blocks, *degrees)?;
            let text = solve_text(&problem, format.unwrap_or(problem.output.format), stderr)?;
            Ok((text, out.as_ref()))
        }
        Command::Table {
            config,
            m_list,
            blocks,
            out,
        } => {
            let problem = load(config)?.with_overrides(*blocks, None)?;
            Ok((comparison_tables(&problem, m_list)?, out.as_ref()))
        }
    }
}

fn metadata(problem: &Problem) -> String {
    format!(
        "# K={} M={} breakpoints={}\n",
        problem.config.blocks(),
        problem.config.degrees(),
        problem
            .config
            .partition()
            .breakpoints()
            .iter()
            .map(|&b| format_g(b))
            .collect::<Vec<_>>()
            .join(" ")
    )
}

pub fn solve_text(
    problem: &Problem,
    format: Format,
    stderr: &mut dyn Write,
) -> Result<String, CliError> {
    let sol = hybrid_ide::solve_system(&problem.spec, &problem.config)?;
    let rows = output::evaluate_rows(&sol, &problem.output.grid, problem.output.exact.as_deref())?;
    let n = problem.spec.n();
    if problem.output.exact.is_some() {
        let worst = rows
            .iter()
            .filter_map(|r| r.err_max())
            .fold(0.0_f64, f64::max);
        let _ = writeln!(stderr, "max error vs exact: {worst:.3e}");
    }
    let body = match format {
        Format::Csv => emit_csv(&rows, n),
        Format::Table => emit_table(&rows, n),
    };
    Ok(metadata(problem) + &body)
}

/// One table per component: `t`, the exact value, then one column per `M`,
/// all with 14 decimals.
pub fn comparison_tables(problem: &Problem, m_list: &[usize]) -> Result<String, CliError> {
    let exact =
        problem.output.exact.as_deref().ok_or_else(|| {
            CliError::Input("[output].exact: required by the table command".into())
        })?;
    if m_list.is_empty() {
        return Err(CliError::Input(
            "--M-list: at least one M is required".into(),
        ));
    }
    let mut columns = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let p = problem.with_overrides(None, Some(m))?;
        let sol = hybrid_ide::solve_system(&p.spec, &p.config)?;
        columns.push(output::evaluate_rows(&sol, &p.output.grid, Some(exact))?);
    }
    let fixed = |v: f64| format!("{v:.14}");
    let mut out = String::new();
    for c in 0..problem.spec.n() {
        if c > 0 {
            out.push('\n');
        }
        out.push_str(&format!(
            "Analytic and hybrid values of x{}(t), K = {}\n",
            c + 1,
            problem.config.blocks()
        ));
        let mut header = vec!["t".to_string(), "Analytic".to_string()];
        header.extend(m_list.iter().map(|m| format!("M={m}")));
        let body: Vec<Vec<String>> = (0..problem.output.grid.len())
            .map(|i| {
                let first = &columns[0][i];
                let mut row = vec![format_g(first.t), fixed(first.exact.as_ref().unwrap()[c])];
                row.extend(columns.iter().map(|col| fixed(col[i].x[c])));
                row
            })
            .collect();
        out.push_str(&output::aligned(&header, &body));
    }
    Ok(out)
}
