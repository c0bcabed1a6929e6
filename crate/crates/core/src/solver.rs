//! Assembly and solution of the linear system for
//!
//! ```text
//! x'(t) = A(t) x(t) + int_{t0}^{tf} N(t, s) x(s) ds + B(t) u(t),   x(t0) = x0
//! ```
//!
//! Integrating from `t0` and expanding every term gives
//! `X - X0 = (P^T (x) I_n) (Phi X + Bop U)` with
//! `Phi = blockdiag(A_k) + Q`, so `X` comes from one LU solve of
//! `[I - (P^T (x) I_n) Phi] X = (P^T (x) I_n) Bop U + X0`.

use crate::basis::{chebyshev_u_all, chebyshev_u_derivative_all, BasisConfig};
use crate::error::{Error, Result};
use crate::expansion::{build_product_matrix, CoeffVector, ProductTensor, Projector};
use crate::function::{KernelFunction, MatrixFunction};
use crate::kernel::fredholm_operator;
use crate::linalg::{norm_inf, DenseMatrix, LuFactorization};
use crate::operational::OperationalMatrix;
use crate::quadrature::gauss_legendre;

/// Problem data of a linear integrodifferential initial-value system.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub t0: f64,
    pub tf: f64,
    pub x0: Vec<f64>,
    /// `n x n`
    pub a: MatrixFunction,
    /// `n x r`
    pub b: MatrixFunction,
    /// `n x n`, `N(t, s)`
    pub kernel: KernelFunction,
    /// `r x 1`
    pub u: MatrixFunction,
}

impl SystemSpec {
    pub fn n(&self) -> usize {
        self.x0.len()
    }

    pub fn r(&self) -> usize {
        self.b.cols()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if !(self.tf > self.t0) {
            return Err(Error::InvalidConfig(format!(
                "tf = {} must exceed t0 = {}",
                self.tf, self.t0
            )));
        }
        if n == 0 {
            return Err(Error::DimensionMismatch("state dimension is zero".into()));
        }
        let checks = [
            ("A", self.a.rows(), self.a.cols(), n, n),
            ("B", self.b.rows(), self.b.cols(), n, self.r()),
            ("N", self.kernel.dim(), self.kernel.dim(), n, n),
            ("u", self.u.rows(), self.u.cols(), self.r(), 1),
        ];
        for (name, rows, cols, want_rows, want_cols) in checks {
            if rows != want_rows || cols != want_cols {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {rows}x{cols}, expected {want_rows}x{want_cols}"
                )));
            }
        }
        Ok(())
    }
}

/// Expanded operators of one system on one basis, with the LU factorisation
/// of `I - (P^T (x) I_n) Phi` computed once.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    cfg: BasisConfig,
    n: usize,
    r: usize,
    phi: DenseMatrix,
    integration: DenseMatrix,
    b_blocks: Vec<DenseMatrix>,
    x0hat: CoeffVector,
    system: DenseMatrix,
    factorization: std::result::Result<LuFactorization, Error>,
}

pub fn assemble(spec: &SystemSpec, cfg: &BasisConfig) -> Result<AssembledSystem> {
    spec.validate()?;
    let p = cfg.partition();
    if (p.t0() - spec.t0).abs() > 1e-12 * (1.0 + spec.t0.abs())
        || (p.tf() - spec.tf).abs() > 1e-12 * (1.0 + spec.tf.abs())
    {
        return Err(Error::InvalidConfig(format!(
            "partition spans [{}, {}] but the system is posed on [{}, {}]",
            p.t0(),
            p.tf(),
            spec.t0,
            spec.tf
        )));
    }
    let n = spec.n();
    let r = spec.r();
    let m = cfg.degrees();
    let blocks = cfg.blocks();
    let projector = Projector::new(cfg);
    let tensor = ProductTensor::new(m);

    let a_set = projector.expand_matrix(&spec.a)?;
    let mut phi = fredholm_operator(&spec.kernel, cfg)?.matrix().clone();
    for k in 0..blocks {
        let a_k = build_product_matrix(&a_set, &tensor, k)?;
        phi.add_block(k * m * n, k * m * n, &a_k);
    }

    let b_set = projector.expand_matrix(&spec.b)?;
    let b_blocks = (0..blocks)
        .map(|k| build_product_matrix(&b_set, &tensor, k))
        .collect::<Result<Vec<_>>>()?;

    let mut x0hat = CoeffVector::zeros(blocks, m, n);
    for k in 0..blocks {
        for (c, &v) in spec.x0.iter().enumerate() {
            x0hat.set(k, 0, c, v);
        }
    }

    let integration = OperationalMatrix::new(cfg).integration_operator(n);
    let mut system = DenseMatrix::identity(m * blocks * n);
    system.add_assign_scaled(&integration.matmul(&phi)?, -1.0)?;
    let factorization = LuFactorization::new(&system);

    Ok(AssembledSystem {
        cfg: cfg.clone(),
        n,
        r,
        phi,
        integration,
        b_blocks,
        x0hat,
        system,
        factorization,
    })
}

impl AssembledSystem {
    pub fn config(&self) -> &BasisConfig {
        &self.cfg
    }

    pub fn phi(&self) -> &DenseMatrix {
        &self.phi
    }

    /// `P^T (x) I_n`.
    pub fn integration_operator(&self) -> &DenseMatrix {
        &self.integration
    }

    /// `I - (P^T (x) I_n) Phi`.
    pub fn system_matrix(&self) -> &DenseMatrix {
        &self.system
    }

    pub fn x0hat(&self) -> &CoeffVector {
        &self.x0hat
    }

    /// Per-block product matrices `B_k`, each `Mn x Mr`.
    pub fn control_blocks(&self) -> &[DenseMatrix] {
        &self.b_blocks
    }

    /// `blockdiag(B_k)` as one `MKn x MKr` matrix.
    pub fn control_operator(&self) -> DenseMatrix {
        let m = self.cfg.degrees();
        let blocks = self.cfg.blocks();
        let mut out = DenseMatrix::zeros(m * blocks * self.n, m * blocks * self.r);
        for (k, b) in self.b_blocks.iter().enumerate() {
            out.add_block(k * m * self.n, k * m * self.r, b);
        }
        out
    }

    /// `blockdiag(B_k) U`.
    pub fn apply_control(&self, u: &CoeffVector) -> Result<Vec<f64>> {
        if u.components() != self.r
            || u.blocks() != self.cfg.blocks()
            || u.degrees() != self.cfg.degrees()
        {
            return Err(Error::DimensionMismatch(format!(
                "control coefficients have {} components, expected {}",
                u.components(),
                self.r
            )));
        }
        let mut out = Vec::with_capacity(self.system.rows());
        for (k, b) in self.b_blocks.iter().enumerate() {
            out.extend(b.matvec(u.block(k))?);
        }
        Ok(out)
    }

    /// Solves for the state coefficients given control coefficients `U`.
    pub fn solve_coeffs(&self, u: &CoeffVector) -> Result<HybridSolution> {
        let lu = self.factorization.as_ref().map_err(Clone::clone)?;
        let forced = self.integration.matvec(&self.apply_control(u)?)?;
        let rhs: Vec<f64> = forced
            .iter()
            .zip(self.x0hat.as_slice())
            .map(|(f, x0)| f + x0)
            .collect();
        let x = lu.solve(&rhs)?;
        let check = self.system.matvec(&x)?;
        let defect = check
            .iter()
            .zip(&rhs)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        let xhat = CoeffVector::from_vec(x, self.cfg.blocks(), self.cfg.degrees(), self.n)?;
        Ok(HybridSolution {
            cfg: self.cfg.clone(),
            xhat,
            linear_residual: defect / (1.0 + norm_inf(&rhs)),
        })
    }

    /// Expands `u` and solves.
    pub fn solve(&self, u: &MatrixFunction) -> Result<HybridSolution> {
        if u.rows() != self.r || u.cols() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "control is {}x{}, expected {}x1",
                u.rows(),
                u.cols(),
                self.r
            )));
        }
        let coeffs = Projector::new(&self.cfg).expand_vector(u)?;
        self.solve_coeffs(&coeffs)
    }
}

/// Assembles and solves with the control stored in `spec`.
pub fn solve_system(spec: &SystemSpec, cfg: &BasisConfig) -> Result<HybridSolution> {
    assemble(spec, cfg)?.solve(&spec.u)
}

/// Solved hybrid coefficients of the state, evaluable on `[t0, tf]`.
#[derive(Debug, Clone)]
pub struct HybridSolution {
    cfg: BasisConfig,
    xhat: CoeffVector,
    linear_residual: f64,
}

impl HybridSolution {
    pub fn config(&self) -> &BasisConfig {
        &self.cfg
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.xhat
    }

    pub fn dim(&self) -> usize {
        self.xhat.components()
    }

    /// `max|S X - rhs| / (1 + max|rhs|)` of the final linear solve.
    pub fn linear_residual(&self) -> f64 {
        self.linear_residual
    }

    pub fn evaluate(&self, t: f64) -> Result<Vec<f64>> {
        self.xhat.synthesize(&self.cfg, t)
    }

    /// Exact derivative of the per-block expansion at `t`.
    pub fn derivative(&self, t: f64) -> Result<Vec<f64>> {
        let p = self.cfg.partition();
        let k = p.block_of(t).ok_or(Error::OutOfDomain {
            t,
            lo: p.t0(),
            hi: p.tf(),
        })?;
        let x = p.to_local_unchecked(t, k);
        let mut du = vec![0.0; self.cfg.degrees()];
        chebyshev_u_derivative_all(x, &mut du);
        let scale = 2.0 / p.width(k);
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (m, dm) in du.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o += scale * self.xhat.get(k, m, c) * dm;
            }
        }
        Ok(out)
    }
}

fn eval_err(what: &str, t: f64) -> impl Fn(String) -> Error + '_ {
    move |message| Error::FunctionEval {
        context: what.to_string(),
        t,
        message,
    }
}

/// Largest defect `|x_h' - A x_h - int N x_h - B u|` over `grid`.
///
/// The integral uses Gauss-Legendre on each block of the reconstructed
/// solution.
pub fn residual(spec: &SystemSpec, sol: &HybridSolution, grid: &[f64]) -> Result<f64> {
    spec.validate()?;
    let n = spec.n();
    let r = spec.r();
    let cfg = sol.config();
    let part = cfg.partition();
    let (nodes, weights) = gauss_legendre(cfg.degrees() + 10)?;

    // reconstructed solution at the integration nodes
    let mut quad: Vec<(f64, f64, Vec<f64>)> = Vec::new();
    let mut basis = vec![0.0; cfg.degrees()];
    for k in 0..cfg.blocks() {
        let half = 0.5 * part.width(k);
        for (&x, &w) in nodes.iter().zip(&weights) {
            chebyshev_u_all(x, &mut basis);
            let mut v = vec![0.0; n];
            for (m, um) in basis.iter().enumerate() {
                for (c, vc) in v.iter_mut().enumerate() {
                    *vc += sol.coeffs().get(k, m, c) * um;
                }
            }
            quad.push((part.global_of_local(x, k), w * half, v));
        }
    }

    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n * r];
    let mut u = vec![0.0; r];
    let mut kern = vec![0.0; n * n];
    let mut worst = 0.0_f64;
    for &t in grid {
        let x = sol.evaluate(t)?;
        let dx = sol.derivative(t)?;
        spec.a.eval_into(t, &mut a).map_err(eval_err("A", t))?;
        spec.b.eval_into(t, &mut b).map_err(eval_err("B", t))?;
        spec.u.eval_into(t, &mut u).map_err(eval_err("u", t))?;
        let mut integral = vec![0.0; n];
        for (s, w, xs) in &quad {
            spec.kernel
                .eval_into(t, *s, &mut kern)
                .map_err(eval_err("N", t))?;
            for i in 0..n {
                integral[i] += w * (0..n).map(|j| kern[i * n + j] * xs[j]).sum::<f64>();
            }
        }
        for i in 0..n {
            let ax: f64 = (0..n).map(|j| a[i * n + j] * x[j]).sum();
            let bu: f64 = (0..r).map(|j| b[i * r + j] * u[j]).sum();
            worst = worst.max((dx[i] - ax - integral[i] - bu).abs());
        }
    }
    Ok(worst)
}
