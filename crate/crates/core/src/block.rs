//! Block-diagonal system structure.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An ordered list of diagonal blocks describing a block-diagonal matrix.
///
/// `row_offsets` / `col_offsets` are prefix sums of the block dimensions
/// (length `num_blocks + 1`, starting at 0), so block `k` occupies rows
/// `row_offsets[k]..row_offsets[k+1]` and the matching column range.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSystem<T> {
    blocks: Vec<DenseMatrix<T>>,
    row_offsets: Vec<usize>,
    col_offsets: Vec<usize>,
}

impl<T: Scalar> BlockSystem<T> {
    /// Builds the offset tables from the block shapes. Fails on an empty
    /// block list; the offsets are consistent by construction.
    pub fn new(blocks: Vec<DenseMatrix<T>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidSpec("block system needs at least one block".into()));
        }
        let mut row_offsets = Vec::with_capacity(blocks.len() + 1);
        let mut col_offsets = Vec::with_capacity(blocks.len() + 1);
        row_offsets.push(0);
        col_offsets.push(0);
        for b in &blocks {
            row_offsets.push(row_offsets.last().unwrap() + b.rows());
            col_offsets.push(col_offsets.last().unwrap() + b.cols());
        }
        Ok(BlockSystem {
            blocks,
            row_offsets,
            col_offsets,
        })
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, k: usize) -> &DenseMatrix<T> {
        &self.blocks[k]
    }

    pub fn blocks(&self) -> &[DenseMatrix<T>] {
        &self.blocks
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_offsets(&self) -> &[usize] {
        &self.col_offsets
    }

    pub fn total_rows(&self) -> usize {
        *self.row_offsets.last().unwrap()
    }

    pub fn total_cols(&self) -> usize {
        *self.col_offsets.last().unwrap()
    }

    /// Assembles the dense block-diagonal matrix; off-block entries are
    /// exactly zero.
    pub fn assemble(&self) -> DenseMatrix<T> {
        let mut a = DenseMatrix::zeros(self.total_rows(), self.total_cols());
        for (k, b) in self.blocks.iter().enumerate() {
            let (r0, c0) = (self.row_offsets[k], self.col_offsets[k]);
            for j in 0..b.cols() {
                let src = b.column(j);
                let dst = &mut a.column_mut(c0 + j)[r0..r0 + b.rows()];
                dst.copy_from_slice(src);
            }
        }
        a
    }
}
