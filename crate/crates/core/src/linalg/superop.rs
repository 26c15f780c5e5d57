use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::density::{devectorize, vectorize};
use crate::linalg::Operator;

/// Linear map on `d x d` operators, stored as a `d^2 x d^2` matrix acting on
/// column-stacked vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    matrix: Operator,
}

impl SuperOperator {
    pub fn from_matrix(dim: usize, matrix: Operator) -> Result<Self> {
        if matrix.dim() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: matrix.dim() });
        }
        Ok(Self { dim, matrix })
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    pub fn apply(&self, rho: &Operator) -> Result<Operator> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho.dim() });
        }
        let v = vectorize(rho);
        let n = self.matrix.dim();
        let out: Vec<C64> = (0..n).map(|i| (0..n).map(|j| self.matrix[(i, j)] * v[j]).sum()).collect();
        devectorize(&out)
    }
}
