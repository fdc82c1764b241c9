//! Random matrices with equal non-zero singular values.
//!
//! `generate_spi` draws Haar-distributed orthonormal frames U (m x r) and
//! V (n x r) from Gaussian matrices via phase-corrected QR, and returns
//! `A = s * U * V*`: a rank-r matrix whose non-zero singular values all
//! equal `s`, i.e. a scaled partial isometry. A block-diagonal composer
//! stacks several such blocks with independent scales.

pub mod qr;
pub mod rng;

use crate::block::BlockSystem;
use crate::dense::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::kernels::matvec;
use crate::scalar::Scalar;

pub use qr::{haar_q_factor, qr_factor, QrFactors};
pub use rng::{derive_seed, NormalStream, RNG_ID};

/// Parameters for one generated matrix: `rows x cols`, rank `rank`, with
/// every non-zero singular value equal to `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub scale: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(rows: usize, cols: usize, rank: usize, scale: f64, seed: u64) -> Result<Self> {
        let spec = GeneratorSpec {
            rows,
            cols,
            rank,
            scale,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidSpec(format!(
                "dimensions must be positive, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rank == 0 || self.rank > self.rows.min(self.cols) {
            return Err(Error::InvalidSpec(format!(
                "rank must satisfy 1 <= r <= min(m, n), got r = {} for {}x{}",
                self.rank, self.rows, self.cols
            )));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "scale must be a positive finite real, got {}",
                self.scale
            )));
        }
        Ok(())
    }
}

/// A list of block specs for a block-diagonal system; scales may differ
/// per block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGeneratorSpec {
    pub blocks: Vec<GeneratorSpec>,
}

impl BlockGeneratorSpec {
    pub fn new(blocks: Vec<GeneratorSpec>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidSpec("block spec list is empty".into()));
        }
        for b in &blocks {
            b.validate()?;
        }
        Ok(BlockGeneratorSpec { blocks })
    }
}

/// How the orthonormal frames are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrMode {
    /// QR of m x r and n x r Gaussian blocks. The Q-factors have the same
    /// distribution as the first r columns of the full construction, at
    /// O((m + n) r^2) instead of O(m^3 + n^3).
    Economy,
    /// QR of full m x m and n x n Gaussian matrices, then the first r
    /// columns.
    Full,
}

/// Matrix with i.i.d. standard-normal entries, filled column-major from
/// the stream. For the complex field, real and imaginary parts are
/// independent standard normals.
pub fn gaussian_matrix<T: Scalar>(
    rows: usize,
    cols: usize,
    stream: &mut NormalStream,
) -> DenseMatrix<T> {
    // from_fn fills column-major, matching the documented stream order.
    DenseMatrix::from_fn(rows, cols, |_, _| {
        T::from_normal_source(&mut || stream.next_normal())
    })
}

/// Vector with i.i.d. standard-normal entries.
pub fn gaussian_vector<T: Scalar>(len: usize, stream: &mut NormalStream) -> DenseVector<T> {
    DenseVector::from_fn(len, |_| T::from_normal_source(&mut || stream.next_normal()))
}

/// Generates `A = s * U * V*` per the spec, with the default economy QR.
pub fn generate_spi<T: Scalar>(spec: &GeneratorSpec) -> Result<DenseMatrix<T>> {
    generate_spi_with(spec, QrMode::Economy)
}

/// Generates `A = s * U * V*` with an explicit QR mode. Deterministic for
/// a fixed (spec, mode): the stream fills X (m-sided) first, then Y.
pub fn generate_spi_with<T: Scalar>(spec: &GeneratorSpec, mode: QrMode) -> Result<DenseMatrix<T>> {
    spec.validate()?;
    let (m, n, r) = (spec.rows, spec.cols, spec.rank);
    let mut stream = NormalStream::new(spec.seed);

    let (u, v) = match mode {
        QrMode::Economy => {
            let x = gaussian_matrix::<T>(m, r, &mut stream);
            let u = haar_q_factor(&x)?;
            let y = gaussian_matrix::<T>(n, r, &mut stream);
            let v = haar_q_factor(&y)?;
            (u, v)
        }
        QrMode::Full => {
            let x = gaussian_matrix::<T>(m, m, &mut stream);
            let u = haar_q_factor(&x)?;
            let y = gaussian_matrix::<T>(n, n, &mut stream);
            let v = haar_q_factor(&y)?;
            (truncate_cols(&u, r), truncate_cols(&v, r))
        }
    };

    // A = s * U * V*; accumulate rank-1 contributions per output column
    // so each A column is written once and stays hot.
    let mut a = DenseMatrix::<T>::zeros(m, n);
    for j in 0..n {
        let col = a.column_mut(j);
        for k in 0..r {
            let w = (v[(j, k)].conj()).scale(spec.scale);
            let uk = u.column(k);
            for (ci, &ui) in col.iter_mut().zip(uk) {
                *ci += ui * w;
            }
        }
    }
    Ok(a)
}

fn truncate_cols<T: Scalar>(q: &DenseMatrix<T>, r: usize) -> DenseMatrix<T> {
    let mut out = DenseMatrix::zeros(q.rows(), r);
    for j in 0..r {
        out.column_mut(j).copy_from_slice(q.column(j));
    }
    out
}

/// Generates each block and assembles the block-diagonal matrix; returns
/// both the dense assembly (for oracle use) and the structured view.
/// Off-block entries of the assembly are exactly zero.
pub fn generate_block_diagonal<T: Scalar>(
    spec: &BlockGeneratorSpec,
) -> Result<(DenseMatrix<T>, BlockSystem<T>)> {
    generate_block_diagonal_with(spec, QrMode::Economy)
}

/// [`generate_block_diagonal`] with an explicit QR mode for every block.
pub fn generate_block_diagonal_with<T: Scalar>(
    spec: &BlockGeneratorSpec,
    mode: QrMode,
) -> Result<(DenseMatrix<T>, BlockSystem<T>)> {
    let blocks = spec
        .blocks
        .iter()
        .map(|b| generate_spi_with::<T>(b, mode))
        .collect::<Result<Vec<_>>>()?;
    let sys = BlockSystem::new(blocks)?;
    let dense = sys.assemble();
    Ok((dense, sys))
}

/// Draws `t` with i.i.d. standard-normal entries and returns `(t, A t)`,
/// the consistent right-hand-side construction used by the experiments.
pub fn random_rhs<T: Scalar>(
    a: &DenseMatrix<T>,
    stream: &mut NormalStream,
) -> (DenseVector<T>, DenseVector<T>) {
    let t = gaussian_vector::<T>(a.cols(), stream);
    let b = matvec(a, &t).expect("shape by construction");
    (t, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn spec_validation() {
        assert!(GeneratorSpec::new(4, 3, 2, 1.0, 0).is_ok());
        assert!(GeneratorSpec::new(0, 3, 1, 1.0, 0).is_err());
        assert!(GeneratorSpec::new(4, 3, 4, 1.0, 0).is_err());
        assert!(GeneratorSpec::new(4, 3, 0, 1.0, 0).is_err());
        assert!(GeneratorSpec::new(4, 3, 2, 0.0, 0).is_err());
        assert!(GeneratorSpec::new(4, 3, 2, f64::NAN, 0).is_err());
        assert!(BlockGeneratorSpec::new(vec![]).is_err());
    }

    #[test]
    fn one_by_one_is_forced_up_to_sign() {
        let spec = GeneratorSpec::new(1, 1, 1, 3.0, 99).unwrap();
        let a = generate_spi::<f64>(&spec).unwrap();
        assert!((a[(0, 0)].abs() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let spec = GeneratorSpec::new(8, 5, 3, 2.5, 1234).unwrap();
        let a = generate_spi::<Complex64>(&spec).unwrap();
        let b = generate_spi::<Complex64>(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gaussian_matrix_consumes_stream_column_major() {
        let mut s1 = NormalStream::new(5);
        let g = gaussian_matrix::<f64>(2, 2, &mut s1);
        let mut s2 = NormalStream::new(5);
        let seq: Vec<f64> = (0..4).map(|_| s2.next_normal()).collect();
        assert_eq!(g.data(), &seq[..]);
    }

    #[test]
    fn two_singleton_blocks() {
        let spec = BlockGeneratorSpec::new(vec![
            GeneratorSpec::new(1, 1, 1, 2.0, 7).unwrap(),
            GeneratorSpec::new(1, 1, 1, 3.0, 8).unwrap(),
        ])
        .unwrap();
        let (dense, sys) = generate_block_diagonal::<f64>(&spec).unwrap();
        assert_eq!(dense.rows(), 2);
        assert_eq!(dense.cols(), 2);
        assert!((dense[(0, 0)].abs() - 2.0).abs() < 1e-14);
        assert!((dense[(1, 1)].abs() - 3.0).abs() < 1e-14);
        assert_eq!(dense[(0, 1)], 0.0);
        assert_eq!(dense[(1, 0)], 0.0);
        assert_eq!(sys.num_blocks(), 2);
    }
}
