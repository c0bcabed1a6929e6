//! Projection of functions onto the hybrid basis and the per-block product
//! matrices that represent multiplication by a matrix function.

use std::f64::consts::FRAC_2_PI;

use crate::basis::{chebyshev_u_all, BasisConfig};
use crate::error::{Error, Result};
use crate::function::MatrixFunction;
use crate::linalg::DenseMatrix;
use crate::quadrature::{default_order, gauss_u_rule, WeightedRule};

/// Stacked hybrid coefficients of an `n`-component function.
///
/// Entry `(block k, degree m, component c)` lives at `(k * M + m) * n + c`
/// (all 0-based): blocks outermost, then degrees, then components.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    data: Vec<f64>,
    blocks: usize,
    degrees: usize,
    components: usize,
}

impl CoeffVector {
    pub fn zeros(blocks: usize, degrees: usize, components: usize) -> Self {
        Self {
            data: vec![0.0; blocks * degrees * components],
            blocks,
            degrees,
            components,
        }
    }

    pub fn from_vec(
        data: Vec<f64>,
        blocks: usize,
        degrees: usize,
        components: usize,
    ) -> Result<Self> {
        if data.len() != blocks * degrees * components {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {blocks} blocks x {degrees} degrees x {components} components",
                data.len()
            )));
        }
        Ok(Self {
            data,
            blocks,
            degrees,
            components,
        })
    }

    #[inline]
    pub fn index(&self, block: usize, degree: usize, component: usize) -> usize {
        (block * self.degrees + degree) * self.components + component
    }

    pub fn get(&self, block: usize, degree: usize, component: usize) -> f64 {
        self.data[self.index(block, degree, component)]
    }

    pub fn set(&mut self, block: usize, degree: usize, component: usize, value: f64) {
        let i = self.index(block, degree, component);
        self.data[i] = value;
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn degrees(&self) -> usize {
        self.degrees
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Coefficients of block `k` (length `M * n`).
    pub fn block(&self, k: usize) -> &[f64] {
        let len = self.degrees * self.components;
        &self.data[k * len..(k + 1) * len]
    }

    /// Value of the expansion at local coordinate `x` in block `k`.
    pub fn synthesize_local(&self, k: usize, x: f64) -> Vec<f64> {
        let mut u = vec![0.0; self.degrees];
        chebyshev_u_all(x, &mut u);
        let mut out = vec![0.0; self.components];
        for (m, um) in u.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o += self.get(k, m, c) * um;
            }
        }
        out
    }

    /// Value of the expansion at `t`, or an error outside `[t0, tf]`.
    pub fn synthesize(&self, cfg: &BasisConfig, t: f64) -> Result<Vec<f64>> {
        let p = cfg.partition();
        let k = p.block_of(t).ok_or(Error::OutOfDomain {
            t,
            lo: p.t0(),
            hi: p.tf(),
        })?;
        Ok(self.synthesize_local(k, p.to_local_unchecked(t, k)))
    }
}

/// Coefficient matrices `M_{k,m}` of a matrix function, one per (block, degree).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCoeffSet {
    rows: usize,
    cols: usize,
    blocks: usize,
    degrees: usize,
    // (k * M + m) * rows * cols, row-major within each matrix
    data: Vec<f64>,
}

impl MatrixCoeffSet {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn degrees(&self) -> usize {
        self.degrees
    }

    pub fn coeff(&self, block: usize, degree: usize) -> &[f64] {
        let len = self.rows * self.cols;
        let start = (block * self.degrees + degree) * len;
        &self.data[start..start + len]
    }

    pub fn coeff_matrix(&self, block: usize, degree: usize) -> DenseMatrix {
        DenseMatrix::from_row_major(self.rows, self.cols, self.coeff(block, degree).to_vec())
            .expect("coefficient block has matching size")
    }

    /// For an `n x 1` function this is the same data as a [`CoeffVector`].
    pub fn into_coeff_vector(self) -> CoeffVector {
        debug_assert_eq!(self.cols, 1);
        CoeffVector {
            data: self.data,
            blocks: self.blocks,
            degrees: self.degrees,
            components: self.rows,
        }
    }
}

/// Projects functions onto the hybrid basis of one configuration.
#[derive(Debug, Clone)]
pub struct Projector {
    cfg: BasisConfig,
    rule: WeightedRule,
    // U_m(x_i) * w_i * 2/pi, row-major by node
    weighted_table: Vec<f64>,
}

impl Projector {
    pub fn new(cfg: &BasisConfig) -> Self {
        Self::with_order(cfg, default_order(cfg.degrees())).expect("default order is positive")
    }

    pub fn with_order(cfg: &BasisConfig, order: usize) -> Result<Self> {
        let rule = gauss_u_rule(order)?;
        let degrees = cfg.degrees();
        let mut weighted_table = rule.chebyshev_table(degrees);
        for (row, w) in weighted_table.chunks_mut(degrees).zip(rule.weights()) {
            for v in row {
                *v *= FRAC_2_PI * w;
            }
        }
        Ok(Self {
            cfg: cfg.clone(),
            rule,
            weighted_table,
        })
    }

    pub fn config(&self) -> &BasisConfig {
        &self.cfg
    }

    pub fn rule(&self) -> &WeightedRule {
        &self.rule
    }

    /// Global times of the quadrature nodes in block `k`.
    pub fn block_nodes(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        let p = self.cfg.partition();
        self.rule
            .nodes()
            .iter()
            .map(move |&x| p.global_of_local(x, k))
    }

    /// `(2/pi) w_i U_m(x_i)` for node `i`, degrees `0..M`.
    pub(crate) fn node_weights(&self, i: usize) -> &[f64] {
        let m = self.cfg.degrees();
        &self.weighted_table[i * m..(i + 1) * m]
    }

    /// Coefficients `[f_{k,0}, ..., f_{k,M-1}]` of a fallible scalar function.
    pub fn expand_scalar_block<F>(&self, f: F, k: usize) -> Result<Vec<f64>>
    where
        F: Fn(f64) -> std::result::Result<f64, String>,
    {
        let degrees = self.cfg.degrees();
        let mut out = vec![0.0; degrees];
        for (i, t) in self.block_nodes(k).enumerate() {
            let v = f(t).map_err(|message| Error::FunctionEval {
                context: format!("block {k}"),
                t,
                message,
            })?;
            for (o, w) in out.iter_mut().zip(self.node_weights(i)) {
                *o += v * w;
            }
        }
        Ok(out)
    }

    pub fn expand_matrix(&self, f: &MatrixFunction) -> Result<MatrixCoeffSet> {
        let (rows, cols) = (f.rows(), f.cols());
        let entries = rows * cols;
        let blocks = self.cfg.blocks();
        let degrees = self.cfg.degrees();
        let mut data = vec![0.0; blocks * degrees * entries];
        let mut value = vec![0.0; entries];
        for k in 0..blocks {
            for (i, t) in self.block_nodes(k).enumerate() {
                f.eval_into(t, &mut value)
                    .map_err(|message| Error::FunctionEval {
                        context: format!("block {k}"),
                        t,
                        message,
                    })?;
                for (m, w) in self.node_weights(i).iter().enumerate() {
                    let start = (k * degrees + m) * entries;
                    for (d, v) in data[start..start + entries].iter_mut().zip(&value) {
                        *d += w * v;
                    }
                }
            }
        }
        Ok(MatrixCoeffSet {
            rows,
            cols,
            blocks,
            degrees,
            data,
        })
    }

    pub fn expand_vector(&self, f: &MatrixFunction) -> Result<CoeffVector> {
        if f.cols() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "vector function expected, got {}x{}",
                f.rows(),
                f.cols()
            )));
        }
        Ok(self.expand_matrix(f)?.into_coeff_vector())
    }
}

pub fn expand_scalar_block<F>(f: F, k: usize, cfg: &BasisConfig) -> Result<Vec<f64>>
where
    F: Fn(f64) -> std::result::Result<f64, String>,
{
    Projector::new(cfg).expand_scalar_block(f, k)
}

pub fn expand_vector(f: &MatrixFunction, cfg: &BasisConfig) -> Result<CoeffVector> {
    Projector::new(cfg).expand_vector(f)
}

pub fn expand_matrix(f: &MatrixFunction, cfg: &BasisConfig) -> Result<MatrixCoeffSet> {
    Projector::new(cfg).expand_matrix(f)
}

/// Linearisation coefficient of `U_i U_j` on `U_m`: `U_i U_j = sum_r U_{i+j-2r}`,
/// `r = 0..=min(i, j)`.
pub fn product_coeff(i: usize, j: usize, m: usize) -> f64 {
    let in_range = i.abs_diff(j) <= m && m <= i + j;
    if in_range && (i + j - m).is_multiple_of(2) {
        1.0
    } else {
        0.0
    }
}

/// Dense `M x M x M` table of [`product_coeff`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTensor {
    degrees: usize,
    data: Vec<f64>,
}

impl ProductTensor {
    pub fn new(degrees: usize) -> Self {
        let mut data = Vec::with_capacity(degrees.pow(3));
        for i in 0..degrees {
            for j in 0..degrees {
                for m in 0..degrees {
                    data.push(product_coeff(i, j, m));
                }
            }
        }
        Self { degrees, data }
    }

    pub fn degrees(&self) -> usize {
        self.degrees
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, m: usize) -> f64 {
        self.data[(i * self.degrees + j) * self.degrees + m]
    }
}

/// `M_k` acting on the block-`k` coefficients of `f` to give the block-`k`
/// coefficients of `M(t) f(t)`. Block `(m, j)` equals `sum_i d(i, j, m) M_{k,i}`.
pub fn build_product_matrix(
    set: &MatrixCoeffSet,
    tensor: &ProductTensor,
    k: usize,
) -> Result<DenseMatrix> {
    let degrees = set.degrees();
    if tensor.degrees() != degrees {
        return Err(Error::DimensionMismatch(format!(
            "product tensor for M = {} used with M = {degrees}",
            tensor.degrees()
        )));
    }
    if k >= set.blocks() {
        return Err(Error::DimensionMismatch(format!(
            "block {k} outside {} blocks",
            set.blocks()
        )));
    }
    let (rows, cols) = (set.rows(), set.cols());
    let mut out = DenseMatrix::zeros(degrees * rows, degrees * cols);
    for m in 0..degrees {
        for j in 0..degrees {
            for i in 0..degrees {
                let d = tensor.get(i, j, m);
                if d == 0.0 {
                    continue;
                }
                let coeff = set.coeff(k, i);
                for r in 0..rows {
                    for c in 0..cols {
                        out[(m * rows + r, j * cols + c)] += d * coeff[r * cols + c];
                    }
                }
            }
        }
    }
    Ok(out)
}
