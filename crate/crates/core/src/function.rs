//! Matrix- and kernel-valued functions of time, as consumed by the expansion
//! routines. Evaluation is fallible so that user-supplied expressions can
//! report domain errors.

use std::fmt;
use std::sync::Arc;

type MatrixEval = dyn Fn(f64, &mut [f64]) -> std::result::Result<(), String> + Send + Sync;
type KernelEval = dyn Fn(f64, f64, &mut [f64]) -> std::result::Result<(), String> + Send + Sync;

/// A `rows x cols` matrix function of `t`, written row-major into a buffer.
///
/// Vector functions are `n x 1` and scalar functions `1 x 1`.
#[derive(Clone)]
pub struct MatrixFunction {
    rows: usize,
    cols: usize,
    eval: Arc<MatrixEval>,
}

impl MatrixFunction {
    pub fn new<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(f64, &mut [f64]) -> std::result::Result<(), String> + Send + Sync + 'static,
    {
        Self {
            rows,
            cols,
            eval: Arc::new(f),
        }
    }

    /// Infallible function returning the row-major entries.
    pub fn from_fn<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(rows, cols, move |t, out| {
            let v = f(t);
            if v.len() != out.len() {
                return Err(format!("expected {} entries, got {}", out.len(), v.len()));
            }
            out.copy_from_slice(&v);
            Ok(())
        })
    }

    pub fn scalar<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(1, 1, move |t, out| {
            out[0] = f(t);
            Ok(())
        })
    }

    pub fn constant(rows: usize, cols: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), rows * cols, "constant matrix has wrong size");
        Self::new(rows, cols, move |_, out| {
            out.copy_from_slice(&values);
            Ok(())
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, |_, out| {
            out.fill(0.0);
            Ok(())
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, n, move |_, out| {
            out.fill(0.0);
            for i in 0..n {
                out[i * n + i] = 1.0;
            }
            Ok(())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> std::result::Result<(), String> {
        debug_assert_eq!(out.len(), self.rows * self.cols);
        (self.eval)(t, out)
    }

    pub fn eval(&self, t: f64) -> std::result::Result<Vec<f64>, String> {
        let mut out = vec![0.0; self.rows * self.cols];
        self.eval_into(t, &mut out)?;
        Ok(out)
    }
}

impl fmt::Debug for MatrixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixFunction({}x{})", self.rows, self.cols)
    }
}

/// An `n x n` kernel `N(t, s)`: `t` is the free variable, `s` the variable
/// integrated over.
#[derive(Clone)]
pub struct KernelFunction {
    dim: usize,
    eval: Arc<KernelEval>,
}

impl KernelFunction {
    pub fn new<F>(dim: usize, f: F) -> Self
    where
        F: Fn(f64, f64, &mut [f64]) -> std::result::Result<(), String> + Send + Sync + 'static,
    {
        Self {
            dim,
            eval: Arc::new(f),
        }
    }

    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(f64, f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(dim, move |t, s, out| {
            let v = f(t, s);
            if v.len() != out.len() {
                return Err(format!("expected {} entries, got {}", out.len(), v.len()));
            }
            out.copy_from_slice(&v);
            Ok(())
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(dim, |_, _, out| {
            out.fill(0.0);
            Ok(())
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval_into(&self, t: f64, s: f64, out: &mut [f64]) -> std::result::Result<(), String> {
        debug_assert_eq!(out.len(), self.dim * self.dim);
        (self.eval)(t, s, out)
    }
}

impl fmt::Debug for KernelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KernelFunction({0}x{0})", self.dim)
    }
}
