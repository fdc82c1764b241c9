//! Direct least-squares solving for scaled partial-isometric linear
//! systems.
//!
//! A scaled partial isometry is a matrix whose non-zero singular values
//! are all equal; orthogonal projections, unitaries, isometries, and
//! their scalar multiples are the familiar cases. For such an `A`, the
//! minimum-2-norm least-squares solution of `A x = b` needs only three
//! matrix–vector products — O(mn) total — instead of a factorization.
//! This crate provides:
//!
//! * [`solver`] — the three-product solver, an `x = A*b` fast path for
//!   exact partial isometries, a blockwise solver for block-diagonal
//!   systems with per-block scales, and a randomized property verifier;
//! * [`generator`] — seeded random matrices with equal non-zero singular
//!   values (Haar frames from phase-corrected QR), and block-diagonal
//!   composition;
//! * [`oracle`] — an independent SVD-based pseudoinverse solver used to
//!   cross-check results;
//! * [`kernels`] — the deterministic matrix–vector kernels everything is
//!   built from, with an invocation counter backing the cost contract.
//!
//! Real (`f64`) and complex ([`num_complex::Complex64`]) systems share
//! one generic interface via [`Scalar`]. All operations are pure
//! functions of their inputs; values are immutable once built and safe
//! to share across threads.

pub mod block;
pub mod dense;
pub mod error;
pub mod generator;
pub mod kernels;
pub mod oracle;
pub mod scalar;
pub mod solver;

pub use block::BlockSystem;
pub use dense::{DenseMatrix, DenseVector};
pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
pub use solver::{
    solve_block_diagonal, solve_partial_isometry, solve_spi, SpiSolveReport, VerifyReport,
};
