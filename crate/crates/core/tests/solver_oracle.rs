//! Solver correctness against the independent SVD oracle.

mod common;

use num_complex::Complex64;
use spi_solve::generator::{
    gaussian_vector, generate_block_diagonal, generate_spi, haar_q_factor, random_rhs,
    BlockGeneratorSpec, GeneratorSpec, NormalStream,
};
use spi_solve::kernels::{adjoint_matvec, matvec};
use spi_solve::oracle::{self, GesddScalar};
use spi_solve::solver::{
    normalize_sign_decomposition, scale_estimate, solve_block_diagonal, solve_partial_isometry,
    solve_spi, DEFAULT_ZERO_TOL_FACTOR,
};
use spi_solve::{DenseMatrix, DenseVector, Scalar};

fn spec(m: usize, n: usize, r: usize, s: f64, seed: u64) -> GeneratorSpec {
    GeneratorSpec::new(m, n, r, s, seed).unwrap()
}

fn solve_vs_oracle<T: Scalar + GesddScalar>(
    a: &DenseMatrix<T>,
    b: &DenseVector<T>,
) -> (f64, f64) {
    let rep = solve_spi(a, b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
    let x_star = oracle::pinv_solve(a, b, oracle::default_rank_tol(a.rows(), a.cols())).unwrap();
    (common::vec_diff(&rep.x, &x_star), x_star.norm())
}

#[test]
fn seeded_instance_matches_oracle() {
    let a = generate_spi::<f64>(&spec(6, 4, 2, 3.0, 2024)).unwrap();
    let mut stream = NormalStream::for_domain(2024, "rhs", 0);
    let (_, b) = random_rhs(&a, &mut stream);
    let (diff, xn) = solve_vs_oracle(&a, &b);
    assert!(diff <= 1e-12 * (1.0 + xn), "diff {diff}");
}

#[test]
fn mini_batch_mean_residual_is_tiny() {
    // Scaled-down version of the benchmark batches: 100x20, r = 4, s = 10.
    let mut total = 0.0;
    let trials = 20;
    for t in 0..trials {
        let a = generate_spi::<f64>(&spec(100, 20, 4, 10.0, 9000 + t)).unwrap();
        let mut stream = NormalStream::for_domain(9000 + t, "rhs", 0);
        let (_, b) = random_rhs(&a, &mut stream);
        let (diff, _) = solve_vs_oracle(&a, &b);
        total += diff;
    }
    let mean = total / trials as f64;
    assert!(mean <= 1e-12, "mean residual {mean}");
}

fn equivalence_suite<T: Scalar + GesddScalar>(count: usize, base_seed: u64) {
    let scales = [0.1, 1.0, 10.0];
    for i in 0..count {
        let seed = base_seed + i as u64;
        let m = 2 + (seed as usize * 13) % 49; // 2..=50
        let n = 2 + (seed as usize * 29) % 49;
        let r = 1 + (seed as usize * 7) % m.min(n);
        let s = scales[i % scales.len()];
        let a = generate_spi::<T>(&spec(m, n, r, s, seed)).unwrap();
        let mut stream = NormalStream::for_domain(seed, "rhs", 0);
        let (_, mut b) = random_rhs(&a, &mut stream);

        let inconsistent = i % 2 == 1;
        if inconsistent {
            // Add a component orthogonal to range(A): the least-squares
            // solution is unchanged and the claim still has to hold.
            let f = oracle::svd(&a).unwrap();
            let g = gaussian_vector::<T>(m, &mut stream);
            let w = oracle::range_complement(&f, &g, oracle::default_rank_tol(m, n));
            b = DenseVector::from_fn(m, |j| b[j] + w[j]);
        }

        let (diff, xn) = solve_vs_oracle(&a, &b);
        assert!(
            diff <= 1e-11 * (1.0 + xn),
            "seed {seed} ({m}x{n}, r={r}, s={s}, inconsistent={inconsistent}): diff {diff}"
        );
    }
}

#[test]
fn oracle_equivalence_real() {
    equivalence_suite::<f64>(100, 100);
}

#[test]
fn oracle_equivalence_complex() {
    equivalence_suite::<Complex64>(100, 5000);
}

#[test]
fn closed_form_identity_x_equals_u_over_alpha_sq() {
    let a = generate_spi::<Complex64>(&spec(30, 22, 8, 4.0, 55)).unwrap();
    let mut stream = NormalStream::for_domain(55, "rhs", 0);
    let (_, b) = random_rhs(&a, &mut stream);
    let rep = solve_spi(&a, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
    let u = adjoint_matvec(&a, &b).unwrap();
    let asq = rep.alpha_sq.unwrap();
    let mut diff_sq = 0.0;
    for i in 0..a.cols() {
        if !rep.zeroed.contains(&i) {
            diff_sq += (rep.x[i] - u[i].scale(1.0 / asq)).abs_sq();
        }
    }
    assert!(diff_sq.sqrt() <= 1e-12 * rep.x.norm());
}

#[test]
fn consistency_is_tiny_on_generated_instances() {
    for seed in 0..10u64 {
        let a = generate_spi::<f64>(&spec(40, 25, 9, 2.0, seed)).unwrap();
        let mut stream = NormalStream::for_domain(seed, "rhs", 1);
        let (_, b) = random_rhs(&a, &mut stream);
        let rep = solve_spi(&a, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
        assert!(rep.consistency.unwrap() <= 1e-10, "consistency {:?}", rep.consistency);
        assert!((rep.alpha_sq.unwrap() - 4.0).abs() <= 1e-10 * 4.0);
    }
}

#[test]
fn scale_estimate_recovers_s_squared() {
    let a = generate_spi::<f64>(&spec(35, 28, 6, 7.0, 77)).unwrap();
    let mut stream = NormalStream::for_domain(77, "rhs", 0);
    let (_, b) = random_rhs(&a, &mut stream);
    let u = adjoint_matvec(&a, &b).unwrap();
    let v = matvec(&a, &u).unwrap();
    let w = adjoint_matvec(&a, &v).unwrap();
    let d = DenseVector::from_fn(w.len(), |i| w[i].conj());
    let est = scale_estimate(&u, &d).unwrap();
    assert!((est - 49.0).abs() <= 1e-10 * 49.0, "estimate {est}");
}

#[test]
fn fast_path_agrees_for_unit_scale() {
    for seed in 0..10u64 {
        let a = generate_spi::<Complex64>(&spec(25, 18, 7, 1.0, 600 + seed)).unwrap();
        let mut stream = NormalStream::for_domain(600 + seed, "rhs", 0);
        let (_, b) = random_rhs(&a, &mut stream);
        let fast = solve_partial_isometry(&a, &b).unwrap();
        let rep = solve_spi(&a, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
        let diff = common::vec_diff(&fast, &rep.x);
        assert!(diff <= 1e-12 * rep.x.norm(), "diff {diff}");
    }
}

#[test]
fn block_solver_matches_oracle_on_assembled_matrix() {
    let bspec = BlockGeneratorSpec::new(vec![
        spec(8, 6, 3, 1.0, 1),
        spec(5, 7, 2, 3.0, 2),
        spec(9, 4, 4, 10.0, 3),
    ])
    .unwrap();
    let (dense, sys) = generate_block_diagonal::<f64>(&bspec).unwrap();
    let mut stream = NormalStream::for_domain(99, "rhs", 0);
    let (_, b) = random_rhs(&dense, &mut stream);

    let rep = solve_block_diagonal(&sys, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
    let x_star = oracle::pinv_solve(&dense, &b, oracle::default_rank_tol(22, 17)).unwrap();
    let diff = common::vec_diff(&rep.x, &x_star);
    assert!(diff <= 1e-11 * (1.0 + x_star.norm()), "diff {diff}");

    // Per-block scales come back individually.
    let expect = [1.0, 9.0, 100.0];
    for (got, want) in rep.block_alpha_sq.iter().zip(expect) {
        let got = got.unwrap();
        assert!((got - want).abs() <= 1e-9 * want, "alpha_sq {got} vs {want}");
    }
}

/// Unitary-diagonalizable instances `A = U diag(D) U*` with D entries in
/// {0, +c, -c}: the solver must match `U D^+ U* b`, before and after the
/// sign normalization (which leaves `U diag(D)` unchanged).
fn check_unitary_diagonalizable(c: f64, seed: u64) {
    let n = 16;
    let mut stream = NormalStream::for_domain(seed, "udu", 0);
    let x = spi_solve::generator::gaussian_matrix::<f64>(n, n, &mut stream);
    let u = haar_q_factor(&x).unwrap();
    let d = DenseVector::from_fn(n, |i| match i % 3 {
        0 => c,
        1 => -c,
        _ => 0.0,
    });

    // A = U diag(D) U*
    let a = DenseMatrix::from_fn(n, n, |i, j| {
        (0..n).fold(0.0, |acc, k| acc + u[(i, k)] * d[k] * u[(j, k)])
    });
    let b = gaussian_vector::<f64>(n, &mut stream);

    let apply_pinv = |uu: &DenseMatrix<f64>, dd: &DenseVector<f64>| {
        // x = U D^+ U~* b with the (possibly flipped) factors
        DenseVector::from_fn(n, |i| {
            (0..n).fold(0.0, |acc, k| {
                if dd[k] != 0.0 {
                    let uk_b = (0..n).fold(0.0, |s, j| s + uu[(j, k)] * b[j]);
                    acc + u[(i, k)] / dd[k] * uk_b
                } else {
                    acc
                }
            })
        })
    };

    let rep = solve_spi(&a, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
    let x_ref = apply_pinv(&u, &d);
    let diff = common::vec_diff(&rep.x, &x_ref);
    assert!(diff <= 1e-11 * (1.0 + x_ref.norm()), "c={c}: diff {diff}");

    // After normalization: U~ diag(D~) = U diag(D), so the reference
    // solution U D~^+ U~* b must be the same vector.
    let (un, dn) = normalize_sign_decomposition(&u, &d);
    for i in 0..n {
        assert!(dn[i] >= 0.0);
    }
    let prod_before = DenseMatrix::from_fn(n, n, |i, k| u[(i, k)] * d[k]);
    let prod_after = DenseMatrix::from_fn(n, n, |i, k| un[(i, k)] * dn[k]);
    assert!(common::frob_diff(&prod_before, &prod_after) <= 1e-15 * c);

    let x_ref2 = apply_pinv(&un, &dn);
    let diff = common::vec_diff(&rep.x, &x_ref2);
    assert!(diff <= 1e-11 * (1.0 + x_ref2.norm()), "c={c} normalized: diff {diff}");
}

#[test]
fn unitary_diagonalizable_instances_solve_correctly() {
    for (i, c) in [1.0, 5.0].into_iter().enumerate() {
        for seed in 0..5u64 {
            check_unitary_diagonalizable(c, seed + 40 * i as u64);
        }
    }
}

/// Sign-flip rewrite on a seeded unitary with D = (c, -c, 0).
#[test]
fn normalize_sign_preserves_the_product_on_seeded_unitary() {
    let mut stream = NormalStream::for_domain(13, "udu", 1);
    let x = spi_solve::generator::gaussian_matrix::<Complex64>(3, 3, &mut stream);
    let u = haar_q_factor(&x).unwrap();
    let c = 2.5;
    let d = DenseVector::new(vec![
        Complex64::new(c, 0.0),
        Complex64::new(-c, 0.0),
        Complex64::new(0.0, 0.0),
    ]);
    let (un, dn) = normalize_sign_decomposition(&u, &d);
    let before = DenseMatrix::from_fn(3, 3, |i, k| u[(i, k)] * d[k]);
    let after = DenseMatrix::from_fn(3, 3, |i, k| un[(i, k)] * dn[k]);
    assert!(common::frob_diff(&before, &after) <= 1e-15 * c);
    assert_eq!(dn[1], Complex64::new(c, 0.0));
}

/// Zero-denominator handling: an exactly-zero column, and a right-hand
/// side built orthogonal to one column's contribution to the range. Both
/// must zero the entry and still match the oracle.
#[test]
fn zero_denominator_cases_match_oracle() {
    let (m, n, r, s) = (18, 11, 5, 3.0);
    let zero_row = 4usize; // column 4 of A will be exactly zero

    let mut stream = NormalStream::for_domain(500, "frames", 0);
    let xg = spi_solve::generator::gaussian_matrix::<f64>(m, r, &mut stream);
    let u = haar_q_factor(&xg).unwrap();
    let yg = spi_solve::generator::gaussian_matrix::<f64>(n - 1, r, &mut stream);
    let v_small = haar_q_factor(&yg).unwrap();
    // V with a zero row at `zero_row`: still orthonormal columns.
    let v = DenseMatrix::from_fn(n, r, |i, j| {
        use std::cmp::Ordering::*;
        match i.cmp(&zero_row) {
            Less => v_small[(i, j)],
            Equal => 0.0,
            Greater => v_small[(i - 1, j)],
        }
    });
    let a = common::assemble_from_frames(&u, &v, s);
    for i in 0..m {
        assert_eq!(a[(i, zero_row)], 0.0);
    }

    let mut stream = NormalStream::for_domain(500, "rhs", 0);
    let (_, b) = random_rhs(&a, &mut stream);
    let rep = solve_spi(&a, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
    assert!(rep.zeroed.contains(&zero_row));
    assert_eq!(rep.x[zero_row], 0.0);
    let x_star = oracle::pinv_solve(&a, &b, oracle::default_rank_tol(m, n)).unwrap();
    let diff = common::vec_diff(&rep.x, &x_star);
    assert!(diff <= 1e-11 * (1.0 + x_star.norm()));

    // Now a full-rank-column matrix but b constructed so that entry
    // `target` of the true solution is exactly zero.
    let a = generate_spi::<f64>(&spec(m, n, r, s, 501)).unwrap();
    let f = oracle::svd(&a).unwrap();
    let target = 3usize;
    let mut stream = NormalStream::for_domain(501, "rhs", 0);
    let t = gaussian_vector::<f64>(n, &mut stream);
    // c = V* t projected against w, w_k = conj(V[target, k]), so that
    // (V c)_target = <w, c> = 0; then b = s U c solves to x* = V c.
    let mut c: Vec<f64> = (0..r)
        .map(|k| (0..n).fold(0.0, |acc, j| acc + f.v[(j, k)] * t[j]))
        .collect();
    let w: Vec<f64> = (0..r).map(|k| f.v[(target, k)]).collect();
    let wn: f64 = w.iter().map(|x| x * x).sum();
    let wc: f64 = w.iter().zip(&c).map(|(a, b)| a * b).sum();
    for k in 0..r {
        c[k] -= w[k] * wc / wn;
    }
    let b = DenseVector::from_fn(m, |i| {
        (0..r).fold(0.0, |acc, k| acc + f.u[(i, k)] * f.sigma[k] * c[k])
    });

    let rep = solve_spi(&a, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
    assert!(rep.zeroed.contains(&target), "zeroed = {:?}", rep.zeroed);
    assert_eq!(rep.x[target], 0.0);
    let x_star = oracle::pinv_solve(&a, &b, oracle::default_rank_tol(m, n)).unwrap();
    assert!(x_star[target].abs() <= 1e-12);
    let diff = common::vec_diff(&rep.x, &x_star);
    assert!(diff <= 1e-11 * (1.0 + x_star.norm()));
}
