//! Operational matrix of integration for the hybrid basis.
//!
//! With `H(t)` the column of all hybrid functions (block-major),
//! `int_{t0}^{t} H ~= P H(t)`. For coefficient vectors this means
//! `coeffs(int f) = P^T coeffs(f)` (per component: `P^T (x) I_n`).

use crate::basis::BasisConfig;
use crate::linalg::{kron, DenseMatrix};

/// In-block integration matrix `P^`: row `m` holds the coefficients of
/// `int_{-1}^{x} U_m`, truncated to degree `M - 1`.
pub fn build_phat(degrees: usize) -> DenseMatrix {
    let mut p = DenseMatrix::zeros(degrees, degrees);
    if degrees == 0 {
        return p;
    }
    // 1-based (row, col) in the comments below
    p[(0, 0)] = 1.0;
    if degrees > 1 {
        p[(1, 0)] = -0.75;
    }
    // (1/2) sum_{k=1}^{M-1} (1/k) E_{k,k+1}
    for k in 1..degrees {
        p[(k - 1, k)] += 0.5 / k as f64;
    }
    // -(1/2) sum_{k=2}^{M-1} 1/(k+1) E_{k+1,k}
    for k in 2..degrees {
        p[(k, k - 1)] -= 0.5 / (k as f64 + 1.0);
    }
    // sum_{k=3}^{M} (-1)^{k-1}/k E_{k,1}
    for k in 3..=degrees {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        p[(k - 1, 0)] += sign / k as f64;
    }
    p
}

/// Full operational matrix `P` (`MK x MK`) of a configuration.
#[derive(Debug, Clone)]
pub struct OperationalMatrix {
    cfg: BasisConfig,
    p: DenseMatrix,
}

impl OperationalMatrix {
    pub fn new(cfg: &BasisConfig) -> Self {
        let m = cfg.degrees();
        let blocks = cfg.blocks();
        let widths = cfg.partition().widths();
        let phat = build_phat(m);
        let mut p = DenseMatrix::zeros(m * blocks, m * blocks);
        for (k, &d) in widths.iter().enumerate() {
            p.add_block(k * m, k * m, &phat.scaled(0.5 * d));
        }
        // Whole earlier blocks contribute a constant to later ones:
        // int over block i of U_{2q} is d_i / (2q + 1), odd degrees vanish.
        for (i, &d) in widths.iter().enumerate() {
            for j in i + 1..blocks {
                for row in (0..m).step_by(2) {
                    p[(i * m + row, j * m)] = d / (row as f64 + 1.0);
                }
            }
        }
        Self {
            cfg: cfg.clone(),
            p,
        }
    }

    pub fn config(&self) -> &BasisConfig {
        &self.cfg
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.p
    }

    /// `P^T (x) I_n`, the integration operator on `n`-component coefficient
    /// vectors.
    pub fn integration_operator(&self, components: usize) -> DenseMatrix {
        kron(&self.p.transpose(), &DenseMatrix::identity(components))
            .expect("operator dimensions are small")
    }
}

pub fn build_p(cfg: &BasisConfig) -> OperationalMatrix {
    OperationalMatrix::new(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Partition;

    fn assert_matrix(got: &DenseMatrix, expected: &[Vec<f64>]) {
        let e = DenseMatrix::from_rows(expected);
        assert_eq!((got.rows(), got.cols()), (e.rows(), e.cols()));
        for i in 0..e.rows() {
            for j in 0..e.cols() {
                assert!(
                    (got[(i, j)] - e[(i, j)]).abs() < 1e-15,
                    "({i},{j}): {} vs {}",
                    got[(i, j)],
                    e[(i, j)]
                );
            }
        }
    }

    #[test]
    fn phat_small_orders() {
        assert_matrix(&build_phat(1), &[vec![1.0]]);
        assert_matrix(&build_phat(2), &[vec![1.0, 0.5], vec![-0.75, 0.0]]);
        assert_matrix(
            &build_phat(3),
            &[
                vec![1.0, 0.5, 0.0],
                vec![-0.75, 0.0, 0.25],
                vec![1.0 / 3.0, -1.0 / 6.0, 0.0],
            ],
        );
    }

    #[test]
    fn full_matrix_small_cases() {
        let cfg = BasisConfig::uniform(0.0, 1.0, 1, 2).unwrap();
        assert_matrix(
            build_p(&cfg).matrix(),
            &[vec![0.5, 0.25], vec![-0.375, 0.0]],
        );
        let cfg = BasisConfig::uniform(0.0, 1.0, 2, 1).unwrap();
        assert_matrix(build_p(&cfg).matrix(), &[vec![0.25, 0.5], vec![0.0, 0.25]]);
    }

    #[test]
    fn block_structure() {
        let part = Partition::new(vec![0.0, 0.1, 0.45, 0.5, 1.0]).unwrap();
        let m = 5;
        let cfg = BasisConfig::new(part.clone(), m).unwrap();
        let p = build_p(&cfg);
        let phat = build_phat(m);
        for bi in 0..4 {
            for bj in 0..4 {
                let blk = p.matrix().block(bi * m, bj * m, m, m);
                if bi > bj {
                    assert_eq!(blk.max_abs(), 0.0);
                } else if bi == bj {
                    let mut diff = blk.clone();
                    diff.add_assign_scaled(&phat, -0.5 * part.width(bi))
                        .unwrap();
                    assert!(diff.max_abs() < 1e-15);
                } else {
                    for r in 0..m {
                        for c in 0..m {
                            let expected = if c == 0 && r % 2 == 0 {
                                part.width(bi) / (r as f64 + 1.0)
                            } else {
                                0.0
                            };
                            assert_eq!(blk[(r, c)], expected);
                        }
                    }
                }
            }
        }
    }
}
