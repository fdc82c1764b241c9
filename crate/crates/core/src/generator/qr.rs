//! Householder QR with column-phase correction.
//!
//! The raw Q-factor of a Gaussian matrix is not Haar-distributed: the
//! Householder sign choices bias it. Rescaling each column of Q by the
//! phase of the matching diagonal entry of R (so the effective R diagonal
//! becomes positive) removes the bias, and `Q~ R~ = Q R` still holds.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kernels::frobenius_norm;
use crate::scalar::Scalar;

/// Economy QR factors with a positive real R diagonal.
#[derive(Debug, Clone)]
pub struct QrFactors<T> {
    /// `rows x cols`, orthonormal columns.
    pub q: DenseMatrix<T>,
    /// `cols x cols`, upper triangular, positive real diagonal.
    pub r: DenseMatrix<T>,
}

/// Economy Householder QR of a matrix with `rows >= cols`, with the
/// column phases corrected so that the R diagonal is positive real.
///
/// Fails with [`Error::DegenerateInput`] when some `|R_ii|` falls below
/// `eps * ||X||_F * max(rows, cols)`, i.e. the input is numerically rank
/// deficient (never the case for Gaussian input, almost surely).
pub fn qr_factor<T: Scalar>(x: &DenseMatrix<T>) -> Result<QrFactors<T>> {
    let m = x.rows();
    let k = x.cols();
    if m < k {
        return Err(Error::InvalidSpec(format!(
            "qr_factor needs rows >= cols, got {m}x{k}"
        )));
    }
    let rank_floor = f64::EPSILON * frobenius_norm(x) * m.max(k) as f64;

    // Factor a working copy in place. After step j, column j holds the
    // Householder vector u_j below the diagonal (u_j[0] at row j) and the
    // R entries above; the diagonal R entry goes to rdiag[j].
    let mut w = x.clone();
    let mut rdiag = vec![T::zero(); k];
    let mut inv_u_norm_sq = vec![0.0f64; k];

    for j in 0..k {
        // Reflector for column j: maps w[j.., j] onto beta * e_1 with
        // beta = -phase(x0) * norm, which avoids cancellation in u[0].
        let col = w.column(j);
        let norm = col[j..].iter().map(|a| a.abs_sq()).sum::<f64>().sqrt();
        if norm <= rank_floor {
            return Err(Error::DegenerateInput(format!(
                "qr_factor: |R[{j},{j}]| = {norm:.3e} below rank floor {rank_floor:.3e}"
            )));
        }
        let x0 = col[j];
        let phase = if x0.abs() > 0.0 {
            x0.scale(1.0 / x0.abs())
        } else {
            T::one()
        };
        let beta = -phase.scale(norm);
        rdiag[j] = beta;

        let colj = w.column_mut(j);
        colj[j] = x0 - beta;
        let u_norm_sq: f64 = colj[j..].iter().map(|a| a.abs_sq()).sum();
        // u = x - beta*e1 is never zero here: |u[0]| = |x0| + norm >= norm.
        inv_u_norm_sq[j] = 1.0 / u_norm_sq;

        // Apply H = I - 2 u u* / ||u||^2 to the trailing columns.
        for l in (j + 1)..k {
            let (done, rest) = w.data_mut().split_at_mut(m * (j + 1));
            let u = &done[m * j + j..m * (j + 1)];
            let c = &mut rest[m * (l - j - 1) + j..m * (l - j)];
            let dot = u
                .iter()
                .zip(c.iter())
                .fold(T::zero(), |acc, (&ui, &ci)| acc + ui.conj() * ci);
            let coef = dot.scale(2.0 * inv_u_norm_sq[j]);
            for (ci, &ui) in c.iter_mut().zip(u) {
                *ci -= ui * coef;
            }
        }
    }

    // Accumulate Q = H_1 ... H_k applied to the first k columns of I,
    // in reverse order.
    let mut q = DenseMatrix::<T>::zeros(m, k);
    for j in 0..k {
        q[(j, j)] = T::one();
    }
    for j in (0..k).rev() {
        let u_col: Vec<T> = w.column(j)[j..].to_vec();
        let two_inv = 2.0 * inv_u_norm_sq[j];
        for l in 0..k {
            let c = &mut q.column_mut(l)[j..];
            let dot = u_col
                .iter()
                .zip(c.iter())
                .fold(T::zero(), |acc, (&ui, &ci)| acc + ui.conj() * ci);
            let coef = dot.scale(two_inv);
            for (ci, &ui) in c.iter_mut().zip(&u_col) {
                *ci -= ui * coef;
            }
        }
    }

    // Phase correction: scale Q column j by phase(rdiag[j]) and R row j
    // by its conjugate, leaving the product unchanged.
    let mut r = DenseMatrix::<T>::zeros(k, k);
    for j in 0..k {
        let beta = rdiag[j];
        let mag = beta.abs();
        let phase = beta.scale(1.0 / mag);
        for qi in q.column_mut(j) {
            *qi = *qi * phase;
        }
        let pc = phase.conj();
        r[(j, j)] = T::from_re(mag);
        for l in (j + 1)..k {
            r[(j, l)] = pc * w[(j, l)];
        }
    }

    Ok(QrFactors { q, r })
}

/// The phase-corrected Q-factor alone. For Gaussian input this is a
/// Haar-distributed orthonormal frame.
pub fn haar_q_factor<T: Scalar>(x: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    qr_factor(x).map(|f| f.q)
}
