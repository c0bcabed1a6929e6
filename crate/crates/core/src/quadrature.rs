//! Gauss quadrature for the weight `sqrt(1 - x^2)` on `[-1, 1]`.
//!
//! Every projection onto the Chebyshev degrees in this crate goes through
//! [`WeightedRule`]: `c_m = (2/pi) * sum_i w_i f(x_i) U_m(x_i)`. With that
//! normalisation the `U_m` are orthonormal, so `x = U_1 / 2` has coefficient
//! `1/2` at degree 1.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::basis::{chebyshev_u, chebyshev_u_all};
use crate::error::{Error, Result};

/// Order the projections use for `M` degrees unless told otherwise.
pub fn default_order(degrees: usize) -> usize {
    degrees + 8
}

/// `n`-point Gauss rule for `int_{-1}^{1} p(x) sqrt(1 - x^2) dx`, exact for
/// `deg p <= 2n - 1`. Nodes are stored in decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `sum_i w_i f(x_i)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Table `U_m(x_i)` for `m < degrees`, row-major by node.
    pub(crate) fn chebyshev_table(&self, degrees: usize) -> Vec<f64> {
        let mut table = vec![0.0; self.order() * degrees];
        for (row, &x) in table.chunks_mut(degrees.max(1)).zip(&self.nodes) {
            chebyshev_u_all(x, &mut row[..degrees]);
        }
        table
    }
}

/// Nodes `cos(i pi / (n+1))`, weights `pi/(n+1) sin^2(i pi / (n+1))`, `i = 1..=n`.
pub fn gauss_u_rule(n: usize) -> Result<WeightedRule> {
    if n == 0 {
        return Err(Error::ZeroQuadratureOrder);
    }
    let h = PI / (n as f64 + 1.0);
    let (nodes, weights) = (1..=n)
        .map(|i| {
            let theta = i as f64 * h;
            let s = theta.sin();
            (theta.cos(), h * s * s)
        })
        .unzip();
    Ok(WeightedRule { nodes, weights })
}

/// `(2/pi) int f(x) U_m(x) sqrt(1 - x^2) dx` evaluated with `rule`.
pub fn project_scalar<F: Fn(f64) -> f64>(f: F, m: usize, rule: &WeightedRule) -> f64 {
    FRAC_2_PI * rule.integrate(|x| f(x) * chebyshev_u(m, x))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`. Used for unweighted integrals (residual checks).
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::ZeroQuadratureOrder);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
