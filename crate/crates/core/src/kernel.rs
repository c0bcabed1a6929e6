//! Coefficient-space form of the Fredholm term
//! `w(t) = int_{t0}^{tf} N(t, s) f(s) ds`.
//!
//! The kernel is expanded twice: first over the integration variable `s`
//! (stage 1, giving matrix functions `N_{k,i}(t)`), then each of those over the
//! free variable `t` (stage 2, giving constant matrices `N^{(J,l)}_{k,i}`).
//! Products with `f` use the linearisation tensor, and integrating `h_{k,m}`
//! over its own block gives `d_k / (m + 1)` for even `m` and zero otherwise.

use crate::basis::BasisConfig;
use crate::error::{Error, Result};
use crate::expansion::{CoeffVector, ProductTensor, Projector};
use crate::function::KernelFunction;
use crate::linalg::DenseMatrix;

/// Stage 1: `N_{k,i}(t) = (2/pi) int N(t, s(x)) U_i(x) sqrt(1-x^2) dx` with
/// `s(x)` the pull-back of block `k`. Evaluated lazily in `t`.
#[derive(Debug, Clone)]
pub struct KernelStage1 {
    kernel: KernelFunction,
    projector: Projector,
}

impl KernelStage1 {
    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn config(&self) -> &BasisConfig {
        self.projector.config()
    }

    /// All `K * M` matrices at `t`, flat as `((k * M + i) * n + a) * n + b`.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let n = self.dim();
        let nn = n * n;
        let cfg = self.projector.config();
        let degrees = cfg.degrees();
        let mut out = vec![0.0; cfg.blocks() * degrees * nn];
        let mut value = vec![0.0; nn];
        for k in 0..cfg.blocks() {
            for (node, s) in self.projector.block_nodes(k).enumerate() {
                self.kernel
                    .eval_into(t, s, &mut value)
                    .map_err(|message| Error::FunctionEval {
                        context: format!("kernel at s = {s}, inner block {k}"),
                        t,
                        message,
                    })?;
                for (i, w) in self.projector.node_weights(node).iter().enumerate() {
                    let start = (k * degrees + i) * nn;
                    for (o, v) in out[start..start + nn].iter_mut().zip(&value) {
                        *o += w * v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `N_{k,i}(t)` as a matrix.
    pub fn eval_entry(&self, t: f64, k: usize, i: usize) -> Result<DenseMatrix> {
        let n = self.dim();
        let all = self.eval(t)?;
        let start = (k * self.config().degrees() + i) * n * n;
        DenseMatrix::from_row_major(n, n, all[start..start + n * n].to_vec())
    }
}

pub fn expand_kernel_stage1(kernel: &KernelFunction, cfg: &BasisConfig) -> KernelStage1 {
    KernelStage1 {
        kernel: kernel.clone(),
        projector: Projector::new(cfg),
    }
}

/// Stage 2 coefficients `N^{(J,l)}_{k,i}`: outer block/degree `(J, l)`,
/// inner block/degree `(k, i)`, each an `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCoeffs {
    dim: usize,
    blocks: usize,
    degrees: usize,
    data: Vec<f64>,
}

impl KernelCoeffs {
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(
        &self,
        outer_block: usize,
        outer_degree: usize,
        block: usize,
        degree: usize,
    ) -> usize {
        let (kb, m) = (self.blocks, self.degrees);
        (((outer_block * m + outer_degree) * kb + block) * m + degree) * self.dim * self.dim
    }

    pub fn get(
        &self,
        outer_block: usize,
        outer_degree: usize,
        block: usize,
        degree: usize,
    ) -> &[f64] {
        let start = self.offset(outer_block, outer_degree, block, degree);
        &self.data[start..start + self.dim * self.dim]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `N^^{(J,l)}_{k,m} = [sum_i d(i,0,m) N^{(J,l)}_{k,i}, ..., sum_i d(i,M-1,m) N^{(J,l)}_{k,i}]`.
    pub fn product_rows(&self, tensor: &ProductTensor) -> Result<KernelProductRows> {
        let m = self.degrees;
        if tensor.degrees() != m {
            return Err(Error::DimensionMismatch(format!(
                "product tensor for M = {} used with M = {m}",
                tensor.degrees()
            )));
        }
        let n = self.dim;
        let mut rows = KernelProductRows::zeros(n, self.blocks, m);
        for jo in 0..self.blocks {
            for l in 0..m {
                for k in 0..self.blocks {
                    for deg in 0..m {
                        let row = rows.get_mut(jo, l, k, deg);
                        for j in 0..m {
                            for i in 0..m {
                                let d = tensor.get(i, j, deg);
                                if d == 0.0 {
                                    continue;
                                }
                                let src = self.get(jo, l, k, i);
                                for a in 0..n {
                                    for b in 0..n {
                                        row[a * m * n + j * n + b] += d * src[a * n + b];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(rows)
    }
}

pub fn expand_kernel_stage2(stage1: &KernelStage1) -> Result<KernelCoeffs> {
    let cfg = stage1.config();
    let n = stage1.dim();
    let nn = n * n;
    let (blocks, degrees) = (cfg.blocks(), cfg.degrees());
    let inner_len = blocks * degrees * nn;
    let mut data = vec![0.0; blocks * degrees * inner_len];
    let projector = &stage1.projector;
    for jo in 0..blocks {
        for (node, t) in projector.block_nodes(jo).enumerate() {
            let inner = stage1.eval(t)?;
            for (l, w) in projector.node_weights(node).iter().enumerate() {
                let start = (jo * degrees + l) * inner_len;
                for (o, v) in data[start..start + inner_len].iter_mut().zip(&inner) {
                    *o += w * v;
                }
            }
        }
    }
    Ok(KernelCoeffs {
        dim: n,
        blocks,
        degrees,
        data,
    })
}

/// `N^^{(J,l)}_{k,m}`, each an `n x (M n)` row block.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelProductRows {
    dim: usize,
    blocks: usize,
    degrees: usize,
    data: Vec<f64>,
}

impl KernelProductRows {
    pub fn zeros(dim: usize, blocks: usize, degrees: usize) -> Self {
        let len = blocks * degrees * blocks * degrees * dim * degrees * dim;
        Self {
            dim,
            blocks,
            degrees,
            data: vec![0.0; len],
        }
    }

    fn row_len(&self) -> usize {
        self.dim * self.degrees * self.dim
    }

    fn offset(
        &self,
        outer_block: usize,
        outer_degree: usize,
        block: usize,
        degree: usize,
    ) -> usize {
        let (kb, m) = (self.blocks, self.degrees);
        (((outer_block * m + outer_degree) * kb + block) * m + degree) * self.row_len()
    }

    /// Row-major `n x (M n)` block.
    pub fn get(
        &self,
        outer_block: usize,
        outer_degree: usize,
        block: usize,
        degree: usize,
    ) -> &[f64] {
        let start = self.offset(outer_block, outer_degree, block, degree);
        &self.data[start..start + self.row_len()]
    }

    pub fn get_mut(
        &mut self,
        outer_block: usize,
        outer_degree: usize,
        block: usize,
        degree: usize,
    ) -> &mut [f64] {
        let start = self.offset(outer_block, outer_degree, block, degree);
        let len = self.row_len();
        &mut self.data[start..start + len]
    }
}

/// Dense `MKn x MKn` matrix `Q` with `coeffs(w) = Q coeffs(f)`.
#[derive(Debug, Clone)]
pub struct FredholmOperator {
    cfg: BasisConfig,
    dim: usize,
    q: DenseMatrix,
}

impl FredholmOperator {
    pub fn zeros(cfg: &BasisConfig, dim: usize) -> Self {
        let size = cfg.size() * dim;
        Self {
            cfg: cfg.clone(),
            dim,
            q: DenseMatrix::zeros(size, size),
        }
    }

    /// Block `(J, l) x (k, .)` of `Q` is `sum_{m even} d_k / (m + 1) N^^{(J,l)}_{k,m}`.
    pub fn from_product_rows(rows: &KernelProductRows, cfg: &BasisConfig) -> Result<Self> {
        let (blocks, m, n) = (cfg.blocks(), cfg.degrees(), rows.dim);
        if rows.blocks != blocks || rows.degrees != m {
            return Err(Error::DimensionMismatch(format!(
                "kernel data for {} blocks x {} degrees used with {blocks} x {m}",
                rows.blocks, rows.degrees
            )));
        }
        let widths = cfg.partition().widths();
        let mut op = Self::zeros(cfg, n);
        let mn = m * n;
        for jo in 0..blocks {
            for l in 0..m {
                for (k, &d) in widths.iter().enumerate() {
                    for deg in (0..m).step_by(2) {
                        let weight = d / (deg as f64 + 1.0);
                        let src = rows.get(jo, l, k, deg);
                        for a in 0..n {
                            let r = (jo * m + l) * n + a;
                            for c in 0..mn {
                                op.q[(r, k * mn + c)] += weight * src[a * mn + c];
                            }
                        }
                    }
                }
            }
        }
        Ok(op)
    }

    pub fn config(&self) -> &BasisConfig {
        &self.cfg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.q
    }

    /// Coefficients of `w` for input coefficients `f`.
    pub fn apply(&self, f: &CoeffVector) -> Result<CoeffVector> {
        let w = self.q.matvec(f.as_slice())?;
        CoeffVector::from_vec(w, self.cfg.blocks(), self.cfg.degrees(), self.dim)
    }
}

pub fn build_fredholm_operator(
    coeffs: &KernelCoeffs,
    tensor: &ProductTensor,
    cfg: &BasisConfig,
) -> Result<FredholmOperator> {
    FredholmOperator::from_product_rows(&coeffs.product_rows(tensor)?, cfg)
}

/// Both expansion stages and the assembly in one call.
pub fn fredholm_operator(kernel: &KernelFunction, cfg: &BasisConfig) -> Result<FredholmOperator> {
    let stage1 = expand_kernel_stage1(kernel, cfg);
    let coeffs = expand_kernel_stage2(&stage1)?;
    build_fredholm_operator(&coeffs, &ProductTensor::new(cfg.degrees()), cfg)
}
