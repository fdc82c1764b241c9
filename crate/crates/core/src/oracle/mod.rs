//! Independent ground-truth least-squares solver.
//!
//! `pinv_solve` computes the minimum-2-norm least-squares solution
//! `x = V Sigma_r^-1 U* b` from a full SVD. It exists to check the fast
//! solver and deliberately shares none of its code path: the
//! factorization is LAPACK's, and even the small matrix-vector applies
//! here are private re-implementations rather than the shared kernels,
//! so a kernel bug cannot confirm itself.

mod lapack;

pub use lapack::GesddScalar;

use crate::dense::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Full economy SVD `A = U diag(sigma) V*` with `k = min(m, n)`.
#[derive(Debug, Clone)]
pub struct SvdResult<T> {
    /// m x k, orthonormal columns.
    pub u: DenseMatrix<T>,
    /// k non-negative singular values, non-increasing.
    pub sigma: Vec<f64>,
    /// n x k, orthonormal columns.
    pub v: DenseMatrix<T>,
}

impl<T: Scalar> SvdResult<T> {
    /// Number of singular values above `rank_tol * sigma_max`.
    pub fn rank(&self, rank_tol: f64) -> usize {
        let cut = rank_tol * self.sigma.first().copied().unwrap_or(0.0);
        self.sigma.iter().filter(|&&s| s > cut).count()
    }
}

/// Standard truncation threshold, `max(m, n) * eps`.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Full SVD via LAPACK's divide-and-conquer driver. Singular values come
/// back sorted non-increasing. A non-converged driver surfaces as
/// [`Error::OracleFailure`]; it never silently passes.
pub fn svd<T: Scalar + GesddScalar>(a: &DenseMatrix<T>) -> Result<SvdResult<T>> {
    let (m, n) = (a.rows(), a.cols());
    let k = m.min(n);
    let mut work_a = a.data().to_vec();
    let mut sigma = vec![0.0f64; k];
    let mut u_data = vec![T::zero(); m * k];
    let mut vt_data = vec![T::zero(); k * n];
    T::gesdd_econ(m, n, &mut work_a, &mut sigma, &mut u_data, &mut vt_data)?;

    let u = DenseMatrix::new(m, k, u_data)?;
    // gesdd returns V* (k x n); store V = (V*)* as n x k.
    let vt = DenseMatrix::new(k, n, vt_data)?;
    let v = vt.adjoint();
    Ok(SvdResult { u, sigma, v })
}

/// Minimum-2-norm least-squares solution `x = V Sigma_r^-1 U* b`, keeping
/// singular values above `rank_tol * sigma_max`.
pub fn pinv_solve<T: Scalar + GesddScalar>(
    a: &DenseMatrix<T>,
    b: &DenseVector<T>,
    rank_tol: f64,
) -> Result<DenseVector<T>> {
    if b.len() != a.rows() {
        return Err(Error::dim("pinv_solve", a.rows(), b.len()));
    }
    let f = svd(a)?;
    Ok(pinv_solve_factored(&f, b, rank_tol))
}

/// Same as [`pinv_solve`], reusing an existing factorization.
pub fn pinv_solve_factored<T: Scalar>(
    f: &SvdResult<T>,
    b: &DenseVector<T>,
    rank_tol: f64,
) -> DenseVector<T> {
    let cut = rank_tol * f.sigma.first().copied().unwrap_or(0.0);
    let mut c = apply_adjoint(&f.u, b.as_slice());
    for (ci, &s) in c.iter_mut().zip(&f.sigma) {
        *ci = if s > cut {
            ci.scale(1.0 / s)
        } else {
            T::zero()
        };
    }
    DenseVector::new(apply(&f.v, &c))
}

/// The component of `g` orthogonal to the numerical range of the
/// factored matrix: `g - U_r (U_r* g)`. Used to build inconsistent
/// right-hand sides with a known least-squares solution.
pub fn range_complement<T: Scalar>(
    f: &SvdResult<T>,
    g: &DenseVector<T>,
    rank_tol: f64,
) -> DenseVector<T> {
    let r = f.rank(rank_tol);
    let mut c = apply_adjoint(&f.u, g.as_slice());
    c.truncate(r);
    let proj = apply_cols(&f.u, &c, r);
    DenseVector::from_fn(g.len(), |i| g[i] - proj[i])
}

// Private applies, intentionally separate from crate::kernels.

fn apply<T: Scalar>(m: &DenseMatrix<T>, v: &[T]) -> Vec<T> {
    apply_cols(m, v, m.cols())
}

fn apply_cols<T: Scalar>(m: &DenseMatrix<T>, v: &[T], ncols: usize) -> Vec<T> {
    let mut out = vec![T::zero(); m.rows()];
    for (j, &vj) in v.iter().enumerate().take(ncols) {
        for (oi, &mij) in out.iter_mut().zip(m.column(j)) {
            *oi += mij * vj;
        }
    }
    out
}

fn apply_adjoint<T: Scalar>(m: &DenseMatrix<T>, v: &[T]) -> Vec<T> {
    (0..m.cols())
        .map(|j| {
            m.column(j)
                .iter()
                .zip(v)
                .fold(T::zero(), |acc, (&mij, &vi)| acc + mij.conj() * vi)
        })
        .collect()
}
