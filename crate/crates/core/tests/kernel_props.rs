//! Property tests for the matrix–vector kernels.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use spi_solve::kernels::{adjoint_matvec, frobenius_norm, matvec};
use spi_solve::{DenseMatrix, DenseVector, Scalar};

fn entry() -> impl Strategy<Value = f64> {
    (-10i32..=10i32).prop_map(|x| x as f64 / 3.0)
}

fn real_case() -> impl Strategy<Value = (DenseMatrix<f64>, DenseVector<f64>, DenseVector<f64>)> {
    (1usize..=64, 1usize..=64).prop_flat_map(|(m, n)| {
        (
            proptest::collection::vec(entry(), m * n),
            proptest::collection::vec(entry(), m),
            proptest::collection::vec(entry(), n),
        )
            .prop_map(move |(a, u, v)| {
                (
                    DenseMatrix::new(m, n, a).unwrap(),
                    DenseVector::new(u),
                    DenseVector::new(v),
                )
            })
    })
}

fn complex_case(
) -> impl Strategy<Value = (DenseMatrix<Complex64>, DenseVector<Complex64>, DenseVector<Complex64>)>
{
    (1usize..=32, 1usize..=32).prop_flat_map(|(m, n)| {
        let c = || (entry(), entry()).prop_map(|(re, im)| Complex64::new(re, im));
        (
            proptest::collection::vec(c(), m * n),
            proptest::collection::vec(c(), m),
            proptest::collection::vec(c(), n),
        )
            .prop_map(move |(a, u, v)| {
                (
                    DenseMatrix::new(m, n, a).unwrap(),
                    DenseVector::new(u),
                    DenseVector::new(v),
                )
            })
    })
}

/// `<u, Av> = <A*u, v>` up to rounding.
fn check_adjoint_consistency<T: Scalar>(
    a: &DenseMatrix<T>,
    u: &DenseVector<T>,
    v: &DenseVector<T>,
) {
    let lhs = u.inner(&matvec(a, v).unwrap());
    let rhs = adjoint_matvec(a, u).unwrap().inner(v);
    let bound = 1e-13 * frobenius_norm(a) * u.norm() * v.norm() + 1e-300;
    let diff = (lhs - rhs).abs();
    assert!(diff <= bound, "adjoint consistency violated: {diff} > {bound}");
}

/// `adjoint_matvec(A, u)` is bitwise the same as `matvec(A*, u)`: both
/// accumulate identical products in identical order.
fn check_adjoint_equals_transposed_matvec<T: Scalar>(a: &DenseMatrix<T>, u: &DenseVector<T>) {
    let lhs = adjoint_matvec(a, u).unwrap();
    let rhs = matvec(&a.adjoint(), u).unwrap();
    for i in 0..lhs.len() {
        assert!(
            lhs[i].re().to_bits() == rhs[i].re().to_bits()
                && lhs[i].im().to_bits() == rhs[i].im().to_bits(),
            "entry {i}: {} vs {}",
            lhs[i],
            rhs[i]
        );
    }
}

/// `<A^(i), b> = (A*b)_i`: extracting the column and dotting matches the
/// kernel bitwise (same products, same order).
fn check_column_access<T: Scalar>(a: &DenseMatrix<T>, b: &DenseVector<T>) {
    let ab = adjoint_matvec(a, b).unwrap();
    for i in 0..a.cols() {
        let col = DenseVector::new(a.column(i).to_vec());
        let d = col.inner(b);
        assert!(
            d.re().to_bits() == ab[i].re().to_bits() && d.im().to_bits() == ab[i].im().to_bits()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adjoint_consistency_real((a, u, v) in real_case()) {
        check_adjoint_consistency(&a, &u, &v);
    }

    #[test]
    fn adjoint_consistency_complex((a, u, v) in complex_case()) {
        check_adjoint_consistency(&a, &u, &v);
    }

    #[test]
    fn adjoint_matches_explicit_transpose_real((a, u, _v) in real_case()) {
        check_adjoint_equals_transposed_matvec(&a, &u);
    }

    #[test]
    fn adjoint_matches_explicit_transpose_complex((a, u, _v) in complex_case()) {
        check_adjoint_equals_transposed_matvec(&a, &u);
    }

    #[test]
    fn column_dot_matches_adjoint_entry_real((a, u, _v) in real_case()) {
        check_column_access(&a, &u);
    }

    #[test]
    fn column_dot_matches_adjoint_entry_complex((a, u, _v) in complex_case()) {
        check_column_access(&a, &u);
    }

    #[test]
    fn matvec_matches_naive_apply_real((a, _u, v) in real_case()) {
        let fast = matvec(&a, &v).unwrap();
        let slow = common::apply(&a, &v);
        let d = common::vec_diff(&fast, &slow);
        prop_assert!(d <= 1e-13 * (frobenius_norm(&a) * v.norm() + 1.0));
    }
}
