//! Blockwise solving for block-diagonal systems.
//!
//! When every diagonal block is a scaled partial isometry the system
//! splits: slice `b` by the row offsets, solve each block independently,
//! and concatenate by the column offsets. Blocks may carry different
//! scales, so the assembled matrix need not be a scaled partial isometry
//! itself — the per-block scale estimates are reported individually.

use std::collections::BTreeSet;

use crate::block::BlockSystem;
use crate::dense::DenseVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{solve_spi, SpiSolveReport};

/// Outcome of [`solve_block_diagonal`]: the concatenated solution plus
/// per-block diagnostics.
#[derive(Debug, Clone)]
pub struct BlockSolveReport<T> {
    /// Concatenated minimum-norm solution (length = total columns).
    pub x: DenseVector<T>,
    /// `alpha^2` estimate per block, in block order.
    pub block_alpha_sq: Vec<Option<f64>>,
    /// Zeroed indices in global column numbering.
    pub zeroed: BTreeSet<usize>,
    /// Worst consistency across blocks (`None` if undefined everywhere).
    pub consistency: Option<f64>,
}

/// Applies [`solve_spi`] block by block. `b.len()` must equal the total
/// row count.
pub fn solve_block_diagonal<T: Scalar>(
    sys: &BlockSystem<T>,
    b: &DenseVector<T>,
    zero_tol_factor: f64,
) -> Result<BlockSolveReport<T>> {
    if b.len() != sys.total_rows() {
        return Err(Error::dim(
            "solve_block_diagonal",
            sys.total_rows(),
            b.len(),
        ));
    }

    let mut x = DenseVector::zeros(sys.total_cols());
    let mut block_alpha_sq = Vec::with_capacity(sys.num_blocks());
    let mut zeroed = BTreeSet::new();
    let mut consistency: Option<f64> = None;

    for k in 0..sys.num_blocks() {
        let block = sys.block(k);
        let r0 = sys.row_offsets()[k];
        let c0 = sys.col_offsets()[k];
        let bk = DenseVector::new(b.as_slice()[r0..r0 + block.rows()].to_vec());

        let SpiSolveReport {
            x: xk,
            alpha_sq,
            zeroed: zk,
            consistency: ck,
        } = solve_spi(block, &bk, zero_tol_factor)?;

        x.as_mut_slice()[c0..c0 + block.cols()].copy_from_slice(xk.as_slice());
        block_alpha_sq.push(alpha_sq);
        zeroed.extend(zk.into_iter().map(|i| c0 + i));
        consistency = match (consistency, ck) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }

    Ok(BlockSolveReport {
        x,
        block_alpha_sq,
        zeroed,
        consistency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;
    use crate::solver::DEFAULT_ZERO_TOL_FACTOR;

    #[test]
    fn diagonal_scaled_identities() {
        // diag(2 I_2, 5 I_3), b = (2,4,5,10,15): x_i = b_i / scale.
        let mut b0 = DenseMatrix::<f64>::zeros(2, 2);
        b0[(0, 0)] = 2.0;
        b0[(1, 1)] = 2.0;
        let mut b1 = DenseMatrix::<f64>::zeros(3, 3);
        for i in 0..3 {
            b1[(i, i)] = 5.0;
        }
        let sys = BlockSystem::new(vec![b0, b1]).unwrap();
        let b = DenseVector::new(vec![2.0, 4.0, 5.0, 10.0, 15.0]);
        let rep = solve_block_diagonal(&sys, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
        let expect = [1.0, 2.0, 1.0, 2.0, 3.0];
        for (i, &e) in expect.iter().enumerate() {
            assert!((rep.x[i] - e).abs() < 1e-14, "x[{i}] = {}", rep.x[i]);
        }
        assert!((rep.block_alpha_sq[0].unwrap() - 4.0).abs() < 1e-13);
        assert!((rep.block_alpha_sq[1].unwrap() - 25.0).abs() < 1e-13);
        assert!(rep.zeroed.is_empty());
    }

    #[test]
    fn single_block_matches_solve_spi() {
        let a = DenseMatrix::new(3, 2, vec![2.0, 0.0, 0.0, 0.0, 2.0, 0.0]).unwrap();
        let b = DenseVector::new(vec![1.0, 2.0, 3.0]);
        let direct = solve_spi(&a, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
        let sys = BlockSystem::new(vec![a]).unwrap();
        let blocked = solve_block_diagonal(&sys, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
        assert_eq!(direct.x, blocked.x);
        assert_eq!(direct.alpha_sq, blocked.block_alpha_sq[0]);
        assert_eq!(direct.zeroed, blocked.zeroed);
        assert_eq!(direct.consistency, blocked.consistency);
    }

    #[test]
    fn rhs_length_is_checked() {
        let sys = BlockSystem::new(vec![DenseMatrix::<f64>::identity(2)]).unwrap();
        let b = DenseVector::new(vec![1.0]);
        assert!(solve_block_diagonal(&sys, &b, DEFAULT_ZERO_TOL_FACTOR).is_err());
    }

    #[test]
    fn zeroed_indices_are_global() {
        // Second block has a zero column at local index 1 -> global 3.
        let b0 = DenseMatrix::<f64>::identity(2);
        let mut b1 = DenseMatrix::<f64>::zeros(2, 2);
        b1[(0, 0)] = 1.0;
        let sys = BlockSystem::new(vec![b0, b1]).unwrap();
        let b = DenseVector::new(vec![1.0, 1.0, 1.0, 1.0]);
        let rep = solve_block_diagonal(&sys, &b, DEFAULT_ZERO_TOL_FACTOR).unwrap();
        assert!(rep.zeroed.contains(&3));
        assert!(!rep.zeroed.contains(&1));
    }
}
