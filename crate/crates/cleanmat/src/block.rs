//! Block-diagonal operators.
//!
//! A `BlockOperator` models an element of a finite direct sum of matrix
//! factors. Central projections are 0/1 indicators over the blocks, so every
//! operation of the toolkit lifts block-by-block; certified bounds aggregate
//! by taking the maximum over blocks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
#[derive(Serialize, Deserialize)]
#[serde(
    try_from = "BlockRepr<T>",
    into = "BlockRepr<T>",
    bound(serialize = "T: Real", deserialize = "T: Real")
)]
pub struct BlockOperator<T: Real> {
    blocks: Vec<ComplexMatrix<T>>,
}

/// Wire format: `{"blocks": [matrix, ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct BlockRepr<T: Real> {
    blocks: Vec<ComplexMatrix<T>>,
}

impl<T: Real> From<BlockOperator<T>> for BlockRepr<T> {
    fn from(b: BlockOperator<T>) -> Self {
        BlockRepr { blocks: b.blocks }
    }
}

impl<T: Real> TryFrom<BlockRepr<T>> for BlockOperator<T> {
    type Error = Error;
    fn try_from(r: BlockRepr<T>) -> Result<Self> {
        BlockOperator::new(r.blocks)
    }
}

impl<T: Real> BlockOperator<T> {
    pub fn new(blocks: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::BlockMismatch {
                detail: "block list is empty".into(),
            });
        }
        Ok(BlockOperator { blocks })
    }

    pub fn blocks(&self) -> &[ComplexMatrix<T>] {
        &self.blocks
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }

    /// Checks that `other` splits along the same central projections.
    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.block_dims() != other.block_dims() {
            return Err(Error::BlockMismatch {
                detail: format!(
                    "block dimensions differ: {:?} vs {:?}",
                    self.block_dims(),
                    other.block_dims()
                ),
            });
        }
        Ok(())
    }

    /// Embeds the operator as a single dense block-diagonal matrix.
    pub fn to_dense(&self) -> ComplexMatrix<T> {
        let n = self.total_dim();
        let mut out = ComplexMatrix::zeros(n);
        let mut offset = 0;
        for b in &self.blocks {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    out.set(offset + i, offset + j, b.get(i, j));
                }
            }
            offset += b.dim();
        }
        out
    }
}

/// Applies a fallible per-block operation across all blocks.
pub fn lift_unary<T: Real, R>(
    x: &BlockOperator<T>,
    mut op: impl FnMut(&ComplexMatrix<T>) -> Result<R>,
) -> Result<Vec<R>> {
    x.blocks().iter().map(|b| op(b)).collect()
}

/// Applies a fallible per-block operation across two aligned operands.
pub fn lift_binary<T: Real, R>(
    x: &BlockOperator<T>,
    y: &BlockOperator<T>,
    mut op: impl FnMut(&ComplexMatrix<T>, &ComplexMatrix<T>) -> Result<R>,
) -> Result<Vec<R>> {
    x.same_shape(y)?;
    x.blocks()
        .iter()
        .zip(y.blocks().iter())
        .map(|(a, b)| op(a, b))
        .collect()
}

/// Aggregates per-block certificate quantities by the maximum.
pub fn aggregate_max<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    values
        .into_iter()
        .fold(T::neg_infinity(), |a, b| if b > a { b } else { a })
}
