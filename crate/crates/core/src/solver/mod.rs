//! Direct least-squares solver for scaled partial isometries.
//!
//! For a matrix whose non-zero singular values all equal some `alpha > 0`,
//! the minimum-2-norm least-squares solution of `A x = b` has the closed
//! form
//!
//! ```text
//! x_i = |<A^(i), b>|^2 / (b* A A* A^(i))    when the denominator is non-zero,
//! x_i = 0                                   otherwise,
//! ```
//!
//! and everything in it comes out of three matrix-vector products. With
//! `u = A*b`, `v = A u`, `w = A*v`:
//!
//! * the numerator is `|u_i|^2`;
//! * the denominator `(A*b)* A* A^(i)` and the zero-test quantity
//!   `b* A A* A^(i)` are the same scalar (take the adjoint of
//!   `(A*b)* A* = b* A A*`), and both equal `conj(w_i)` — so one pass
//!   `d = conj(w)` supplies every denominator and every zero test.
//!
//! For a true scaled partial isometry `d_i = alpha^2 * conj(u_i)`, which
//! gives the solver its self-diagnostics: the aggregate estimate
//! `alpha^2 ~ sum_i(u_i d_i) / ||u||^2` and a per-index consistency check
//! on the ratios `d_i / conj(u_i)`. Inputs that are not scaled partial
//! isometries are not rejected: the formula output is returned together
//! with a large `consistency` value, and the least-squares guarantee is
//! only claimed when the diagnostic (or [`verify_spi`]) passes.

mod blocks;
mod verify;

pub use blocks::{solve_block_diagonal, BlockSolveReport};
pub use verify::{verify_spi, verify_spi_with_scale, VerifyReport};

use std::collections::BTreeSet;

use crate::dense::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::kernels::{adjoint_matvec, matvec};
use crate::scalar::Scalar;

/// Default `zero_tol_factor` for [`solve_spi`]. The denominator test
/// fires when `|d_i| <= zero_tol_factor * eps * ||v|| * max_j ||A^(j)||`,
/// which is invariant under rescaling A or b.
pub const DEFAULT_ZERO_TOL_FACTOR: f64 = 100.0;

/// Ratios `d_i / conj(u_i)` enter the consistency diagnostic only where
/// `|u_i| >= RATIO_FLOOR * max_j |u_j|`; smaller entries carry no signal,
/// only rounding noise amplified by the division.
const RATIO_FLOOR: f64 = 1e-2;

/// Outcome of [`solve_spi`].
#[derive(Debug, Clone)]
pub struct SpiSolveReport<T> {
    /// The minimum-2-norm least-squares solution (length = A.cols()).
    pub x: DenseVector<T>,
    /// Estimated squared scale `alpha^2`; `None` when `A*b` is exactly
    /// zero (b orthogonal to range(A), b = 0, or A = 0).
    pub alpha_sq: Option<f64>,
    /// Column indices where the denominator test fired; those entries of
    /// `x` are exactly zero.
    pub zeroed: BTreeSet<usize>,
    /// Max relative deviation of the per-index ratio `d_i / conj(u_i)`
    /// from `alpha_sq` over indices above the ratio floor, maxed with the
    /// relative imaginary part of the scale estimate. Near rounding level
    /// for a true scaled partial isometry; `None` when `A*b = 0`.
    pub consistency: Option<f64>,
}

/// Solves `min ||A x - b||_2` (minimum-norm solution) in three kernel
/// calls, assuming all non-zero singular values of `A` are equal.
///
/// `zero_tol_factor` scales the denominator zero test; see
/// [`DEFAULT_ZERO_TOL_FACTOR`]. The assumption on `A` is not checked
/// here — inspect [`SpiSolveReport::consistency`] or run [`verify_spi`].
pub fn solve_spi<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseVector<T>,
    zero_tol_factor: f64,
) -> Result<SpiSolveReport<T>> {
    if b.len() != a.rows() {
        return Err(Error::dim("solve_spi", a.rows(), b.len()));
    }

    let u = adjoint_matvec(a, b)?;
    let v = matvec(a, &u)?;
    let w = adjoint_matvec(a, &v)?;

    let theta = zero_tol_factor * f64::EPSILON * v.norm() * a.max_column_norm();

    let n = a.cols();
    let mut x = DenseVector::zeros(n);
    let mut zeroed = BTreeSet::new();
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let di = w[i].conj();
        if di.abs() > theta {
            x[i] = T::from_re(u[i].abs_sq()) / di;
        } else {
            zeroed.insert(i);
        }
        d.push(di);
    }

    let (alpha_sq, consistency) = diagnostics(&u, &d);

    Ok(SpiSolveReport {
        x,
        alpha_sq,
        zeroed,
        consistency,
    })
}

fn diagnostics<T: Scalar>(u: &DenseVector<T>, d: &[T]) -> (Option<f64>, Option<f64>) {
    let norm_u_sq = u.norm_sq();
    if norm_u_sq == 0.0 {
        return (None, None);
    }

    let mut sum = T::zero();
    for (&ui, &di) in u.iter().zip(d) {
        sum += ui * di;
    }
    let alpha_sq = sum.re() / norm_u_sq;
    let sum_mag = sum.abs();
    let imag_rel = if sum_mag > 0.0 {
        sum.im().abs() / sum_mag
    } else {
        0.0
    };

    let u_max = u.iter().map(|z| z.abs()).fold(0.0, f64::max);
    let floor = RATIO_FLOOR * u_max;
    let denom = if alpha_sq.abs() > 0.0 {
        alpha_sq.abs()
    } else {
        1.0
    };
    let mut ratio_dev = 0.0f64;
    for (&ui, &di) in u.iter().zip(d) {
        if ui.abs() >= floor {
            let delta = (di / ui.conj() - T::from_re(alpha_sq)).abs() / denom;
            ratio_dev = ratio_dev.max(delta);
        }
    }

    (Some(alpha_sq), Some(ratio_dev.max(imag_rel)))
}

/// Fast path for an exact partial isometry (`alpha = 1`): the solution is
/// `A*b`, one kernel call. The premise is the caller's responsibility
/// (it is cheap to check with [`verify_spi`]); no runtime check is done.
pub fn solve_partial_isometry<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseVector<T>,
) -> Result<DenseVector<T>> {
    if b.len() != a.rows() {
        return Err(Error::dim("solve_partial_isometry", a.rows(), b.len()));
    }
    adjoint_matvec(a, b)
}

/// Estimates `alpha^2` from `u = A*b` and the denominator vector
/// `d_i = b* A A* A^(i)`, as `Re(sum_i u_i d_i / ||u||^2)`.
///
/// For a true scaled partial isometry `d = alpha^2 conj(u)`, so the sum
/// aggregates every index (robust to small `|u_i|`) and its imaginary
/// part vanishes up to rounding.
///
/// Fails with [`Error::UndefinedScale`] when `||u|| = 0`, which is the
/// `b` orthogonal to range(A) case.
pub fn scale_estimate<T: Scalar>(u: &DenseVector<T>, d: &DenseVector<T>) -> Result<f64> {
    if u.len() != d.len() {
        return Err(Error::dim("scale_estimate", u.len(), d.len()));
    }
    let norm_u_sq = u.norm_sq();
    if norm_u_sq == 0.0 {
        return Err(Error::UndefinedScale);
    }
    let mut sum = T::zero();
    for (&ui, &di) in u.iter().zip(d.iter()) {
        sum += ui * di;
    }
    Ok(sum.re() / norm_u_sq)
}

/// Rewrites a unitary-diagonal factorization `(U, diag(D))` so that every
/// non-zero diagonal entry has non-negative real part: wherever
/// `Re(D_ii) < 0`, column `i` of `U` and entry `i` of `D` are both
/// negated, leaving the product `U diag(D)` unchanged.
///
/// # Panics
///
/// Panics if `U` is not square or its size does not match `d_diag`.
pub fn normalize_sign_decomposition<T: Scalar>(
    u: &DenseMatrix<T>,
    d_diag: &DenseVector<T>,
) -> (DenseMatrix<T>, DenseVector<T>) {
    assert_eq!(
        u.rows(),
        u.cols(),
        "normalize_sign_decomposition: U must be square"
    );
    assert_eq!(
        u.cols(),
        d_diag.len(),
        "normalize_sign_decomposition: size mismatch"
    );
    let mut un = u.clone();
    let mut dn = d_diag.clone();
    for i in 0..dn.len() {
        if dn[i].re() < 0.0 {
            for q in un.column_mut(i) {
                *q = -*q;
            }
            dn[i] = -dn[i];
        }
    }
    (un, dn)
}
