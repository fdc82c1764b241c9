//! The three matrix–vector kernels everything else is built from.
//!
//! Each output entry is accumulated in ascending index order, always, so
//! repeated runs are bit-identical. `matvec` and `adjoint_matvec` bump a
//! thread-local invocation counter; the solver's cost contract (exactly
//! three kernel calls per solve) is asserted against it in tests.

use std::cell::Cell;

use crate::dense::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

thread_local! {
    static KERNEL_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of matrix–vector kernel invocations (`matvec` +
/// `adjoint_matvec`) on the current thread since the last reset.
pub fn kernel_calls() -> u64 {
    KERNEL_CALLS.with(|c| c.get())
}

pub fn reset_kernel_calls() {
    KERNEL_CALLS.with(|c| c.set(0));
}

#[inline]
fn bump_kernel_calls() {
    KERNEL_CALLS.with(|c| c.set(c.get() + 1));
}

/// `A v`. Requires `v.len() == A.cols()`.
///
/// Sweeps columns, so output entry `i` accumulates `A[i,j] * v[j]` for
/// `j = 0, 1, ...` in that order.
pub fn matvec<T: Scalar>(a: &DenseMatrix<T>, v: &DenseVector<T>) -> Result<DenseVector<T>> {
    if v.len() != a.cols() {
        return Err(Error::dim("matvec", a.cols(), v.len()));
    }
    bump_kernel_calls();
    let mut y = vec![T::zero(); a.rows()];
    for (j, &vj) in v.iter().enumerate() {
        let col = a.column(j);
        for (yi, &aij) in y.iter_mut().zip(col) {
            *yi += aij * vj;
        }
    }
    Ok(DenseVector::new(y))
}

/// `A* v` without materializing the adjoint: entry `i` is the column dot
/// product `<A^(i), v> = sum_j conj(A[j,i]) v[j]`, summed in ascending `j`.
/// Requires `v.len() == A.rows()`.
pub fn adjoint_matvec<T: Scalar>(
    a: &DenseMatrix<T>,
    v: &DenseVector<T>,
) -> Result<DenseVector<T>> {
    if v.len() != a.rows() {
        return Err(Error::dim("adjoint_matvec", a.rows(), v.len()));
    }
    bump_kernel_calls();
    let y = (0..a.cols())
        .map(|j| {
            a.column(j)
                .iter()
                .zip(v.as_slice())
                .fold(T::zero(), |acc, (&aij, &vi)| acc + aij.conj() * vi)
        })
        .collect();
    Ok(DenseVector::new(y))
}

/// Frobenius norm `sqrt(sum |a_ij|^2)`, summed in storage (column-major)
/// order.
pub fn frobenius_norm<T: Scalar>(a: &DenseMatrix<T>) -> f64 {
    a.data().iter().map(|x| x.abs_sq()).sum::<f64>().sqrt()
}
