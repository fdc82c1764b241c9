//! Shared helpers for the integration tests. Deliberately naive
//! implementations, independent of the library's kernels.

use spi_solve::{DenseMatrix, DenseVector, Scalar};

pub fn mat_mul<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    assert_eq!(a.cols(), b.rows());
    DenseMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(T::zero(), |acc, k| acc + a[(i, k)] * b[(k, j)])
    })
}

/// `A A* A` by naive triple product.
pub fn a_astar_a<T: Scalar>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    let at = a.adjoint();
    mat_mul(&mat_mul(a, &at), a)
}

pub fn frob<T: Scalar>(a: &DenseMatrix<T>) -> f64 {
    a.data().iter().map(|x| x.abs_sq()).sum::<f64>().sqrt()
}

pub fn frob_diff<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> f64 {
    assert_eq!(a.rows(), b.rows());
    assert_eq!(a.cols(), b.cols());
    a.data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| (x - y).abs_sq())
        .sum::<f64>()
        .sqrt()
}

pub fn vec_diff<T: Scalar>(x: &DenseVector<T>, y: &DenseVector<T>) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y.iter())
        .map(|(&a, &b)| (a - b).abs_sq())
        .sum::<f64>()
        .sqrt()
}

/// `M v` by naive loops.
pub fn apply<T: Scalar>(m: &DenseMatrix<T>, v: &DenseVector<T>) -> DenseVector<T> {
    assert_eq!(m.cols(), v.len());
    DenseVector::from_fn(m.rows(), |i| {
        (0..m.cols()).fold(T::zero(), |acc, j| acc + m[(i, j)] * v[j])
    })
}

/// `A = s * U * V*` from two orthonormal frames.
pub fn assemble_from_frames<T: Scalar>(
    u: &DenseMatrix<T>,
    v: &DenseMatrix<T>,
    s: f64,
) -> DenseMatrix<T> {
    assert_eq!(u.cols(), v.cols());
    DenseMatrix::from_fn(u.rows(), v.rows(), |i, j| {
        (0..u.cols())
            .fold(T::zero(), |acc, k| acc + u[(i, k)] * v[(j, k)].conj())
            .scale(s)
    })
}
