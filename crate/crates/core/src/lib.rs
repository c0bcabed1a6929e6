//! Solver for linear integrodifferential initial-value systems
//!
//! ```text
//! x'(t) = A(t) x(t) + int_{t0}^{tf} N(t, s) x(s) ds + B(t) u(t),   x(t0) = x0
//! ```
//!
//! using a hybrid basis of general block-pulse functions and second-kind
//! Chebyshev polynomials. All data are projected onto the basis, integration
//! becomes multiplication by an operational matrix, and the whole problem
//! reduces to one dense linear system for the state coefficients.
//!
//! ```
//! use hybrid_ide::{BasisConfig, KernelFunction, MatrixFunction, SystemSpec, solve_system};
//!
//! // x' = u, u = 1, x(0) = 0  =>  x(t) = t
//! let spec = SystemSpec {
//!     t0: 0.0,
//!     tf: 1.0,
//!     x0: vec![0.0],
//!     a: MatrixFunction::zeros(1, 1),
//!     b: MatrixFunction::constant(1, 1, vec![1.0]),
//!     kernel: KernelFunction::zeros(1),
//!     u: MatrixFunction::constant(1, 1, vec![1.0]),
//! };
//! let cfg = BasisConfig::uniform(0.0, 1.0, 2, 4)?;
//! let sol = solve_system(&spec, &cfg)?;
//! assert!((sol.evaluate(0.3)?[0] - 0.3).abs() < 1e-14);
//! # Ok::<(), hybrid_ide::Error>(())
//! ```

pub mod basis;
pub mod error;
pub mod expansion;
pub mod exprlang;
pub mod function;
pub mod kernel;
pub mod linalg;
pub mod operational;
pub mod quadrature;
pub mod solver;

pub use basis::{BasisConfig, HybridIndex, Partition};
pub use error::{Error, Result};
pub use expansion::{CoeffVector, MatrixCoeffSet, ProductTensor, Projector};
pub use function::{KernelFunction, MatrixFunction};
pub use kernel::FredholmOperator;
pub use linalg::DenseMatrix;
pub use operational::OperationalMatrix;
pub use solver::{assemble, residual, solve_system, AssembledSystem, HybridSolution, SystemSpec};
