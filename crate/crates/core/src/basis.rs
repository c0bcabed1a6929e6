//! Hybrid basis of block-pulse functions times second-kind Chebyshev
//! polynomials.
//!
//! The interval `[t0, tf]` is cut into `K` blocks by a [`Partition`]. On block
//! `k` (0-based here) the hybrid function `h_{k,m}` equals `U_m` evaluated at the
//! local coordinate `(2t - t_k - t_{k+1}) / d_k`, and vanishes elsewhere.
//! Blocks are half-open `[t_k, t_{k+1})`, except that `tf` itself belongs to the
//! last block so solutions can be evaluated at the right endpoint.

use crate::error::{Error, Result};

/// Second-kind Chebyshev polynomial `U_m(x)` by the three-term recurrence.
///
/// Values outside `[-1, 1]` are computed by the same recurrence.
pub fn chebyshev_u(m: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for _ in 1..m {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[m] = U_m(x)` for `m = 0..out.len()`.
pub fn chebyshev_u_all(x: f64, out: &mut [f64]) {
    let len = out.len();
    if len == 0 {
        return;
    }
    out[0] = 1.0;
    if len > 1 {
        out[1] = 2.0 * x;
    }
    for m in 2..len {
        out[m] = 2.0 * x * out[m - 1] - out[m - 2];
    }
}

/// Fills `out[m] = U_m'(x)` for `m = 0..out.len()`, using
/// `U'_{m+1} = 2 U_m + 2x U'_m - U'_{m-1}`.
pub fn chebyshev_u_derivative_all(x: f64, out: &mut [f64]) {
    let len = out.len();
    if len == 0 {
        return;
    }
    let mut values = vec![0.0; len];
    chebyshev_u_all(x, &mut values);
    out[0] = 0.0;
    if len > 1 {
        out[1] = 2.0;
    }
    for m in 2..len {
        out[m] = 2.0 * values[m - 1] + 2.0 * x * out[m - 1] - out[m - 2];
    }
}

/// Breakpoints `t0 < t1 < ... < tK` of a general (possibly non-uniform)
/// block-pulse partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    breakpoints: Vec<f64>,
    widths: Vec<f64>,
}

impl Partition {
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPartition(
                "at least two breakpoints are required".into(),
            ));
        }
        if let Some(bad) = breakpoints.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidPartition(format!(
                "non-finite breakpoint {bad}"
            )));
        }
        let widths: Vec<f64> = breakpoints.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(k) = widths.iter().position(|&d| d <= 0.0) {
            return Err(Error::InvalidPartition(format!(
                "breakpoints must be strictly increasing (t[{}] = {} >= t[{}] = {})",
                k,
                breakpoints[k],
                k + 1,
                breakpoints[k + 1]
            )));
        }
        Ok(Self {
            breakpoints,
            widths,
        })
    }

    /// `blocks` equal-width blocks on `[t0, tf]`.
    pub fn uniform(t0: f64, tf: f64, blocks: usize) -> Result<Self> {
        if blocks == 0 {
            return Err(Error::InvalidPartition(
                "block count must be positive".into(),
            ));
        }
        if !(tf > t0) {
            return Err(Error::InvalidPartition(format!(
                "empty interval [{t0}, {tf}]"
            )));
        }
        let h = (tf - t0) / blocks as f64;
        let mut breakpoints: Vec<f64> = (0..blocks).map(|k| t0 + k as f64 * h).collect();
        breakpoints.push(tf);
        Self::new(breakpoints)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn width(&self, k: usize) -> f64 {
        self.widths[k]
    }

    pub fn num_blocks(&self) -> usize {
        self.widths.len()
    }

    pub fn t0(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn tf(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    /// `(t_k, t_{k+1})` for 0-based block `k`.
    pub fn bounds(&self, k: usize) -> (f64, f64) {
        (self.breakpoints[k], self.breakpoints[k + 1])
    }

    /// Index of the block containing `t`, or `None` outside `[t0, tf]`.
    pub fn block_of(&self, t: f64) -> Option<usize> {
        if !(t >= self.t0() && t <= self.tf()) {
            return None;
        }
        // first breakpoint strictly greater than t
        let upper = self.breakpoints.partition_point(|&b| b <= t);
        Some(upper.saturating_sub(1).min(self.num_blocks() - 1))
    }

    /// Affine map of block `k` onto `[-1, 1]`. Points within rounding
    /// distance of the block ends are accepted.
    pub fn to_local(&self, t: f64, k: usize) -> Result<f64> {
        let (lo, hi) = self.bounds(k);
        let slack = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(self.widths[k]);
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::OutOfDomain { t, lo, hi });
        }
        Ok(self.to_local_unchecked(t, k))
    }

    pub(crate) fn to_local_unchecked(&self, t: f64, k: usize) -> f64 {
        let (lo, hi) = self.bounds(k);
        (2.0 * t - lo - hi) / self.widths[k]
    }

    /// Inverse of [`Partition::to_local`].
    pub fn global_of_local(&self, x: f64, k: usize) -> f64 {
        let (lo, hi) = self.bounds(k);
        0.5 * (self.widths[k] * x + lo + hi)
    }
}

/// A partition together with the number `M` of polynomial degrees per block.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisConfig {
    partition: Partition,
    degrees: usize,
}

impl BasisConfig {
    pub fn new(partition: Partition, degrees: usize) -> Result<Self> {
        if degrees == 0 {
            return Err(Error::InvalidConfig(
                "polynomial count M must be at least 1".into(),
            ));
        }
        Ok(Self { partition, degrees })
    }

    pub fn uniform(t0: f64, tf: f64, blocks: usize, degrees: usize) -> Result<Self> {
        Self::new(Partition::uniform(t0, tf, blocks)?, degrees)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `M`, the number of Chebyshev degrees per block.
    pub fn degrees(&self) -> usize {
        self.degrees
    }

    /// `K`, the number of blocks.
    pub fn blocks(&self) -> usize {
        self.partition.num_blocks()
    }

    /// Total basis size `M * K`.
    pub fn size(&self) -> usize {
        self.degrees * self.blocks()
    }
}

/// Address of one hybrid function: 0-based block and Chebyshev degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HybridIndex {
    pub block: usize,
    pub degree: usize,
}

impl HybridIndex {
    pub fn new(block: usize, degree: usize, cfg: &BasisConfig) -> Result<Self> {
        if block >= cfg.blocks() || degree >= cfg.degrees() {
            return Err(Error::InvalidConfig(format!(
                "hybrid index ({block}, {degree}) outside {} blocks x {} degrees",
                cfg.blocks(),
                cfg.degrees()
            )));
        }
        Ok(Self { block, degree })
    }
}

/// Value of `h_{k,m}(t)`.
pub fn hybrid_eval(idx: HybridIndex, t: f64, cfg: &BasisConfig) -> f64 {
    match cfg.partition.block_of(t) {
        Some(k) if k == idx.block => {
            chebyshev_u(idx.degree, cfg.partition.to_local_unchecked(t, k))
        }
        _ => 0.0,
    }
}
