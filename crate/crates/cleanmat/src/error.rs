//! Error types shared by all modules.

use thiserror::Error;

/// Which corner of a splitting a condition refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The corner compressed to the range of the splitting projection.
    Projection,
    /// The corner compressed to the range of its complement.
    Complement,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Projection => write!(f, "projection side"),
            Side::Complement => write!(f, "complement side"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix of dimension 0 is rejected (the algebra is unital)")]
    EmptyMatrix,

    #[error("entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("block structure mismatch: {detail}")]
    BlockMismatch { detail: String },

    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error(
        "matrix is not a projection: idempotency residual {idempotency:.3e}, \
         self-adjointness residual {selfadjointness:.3e}, tolerance {tol:.3e}"
    )]
    NotProjection {
        idempotency: f64,
        selfadjointness: f64,
        tol: f64,
    },

    #[error(
        "not a partial isometry: initial residual {initial:.3e}, \
         final residual {final_:.3e}, tolerance {tol:.3e}"
    )]
    NotPartialIsometry {
        initial: f64,
        final_: f64,
        tol: f64,
    },

    #[error("corner compression not bounded below: smallest eigenvalue {smallest:.6e} < {required:.6e}")]
    CornerNotBoundedBelow { smallest: f64, required: f64 },

    #[error("corner of the splitting is not invertible: smallest singular value {smallest:.6e}")]
    CornerNotInvertible { smallest: f64 },

    #[error("off-diagonal argument does not lie in the complement-by-range corner: residual {residual:.3e}")]
    BadOffDiagonal { residual: f64 },

    #[error("pair is not in generic position: {detail}")]
    NotGenericPosition { detail: String },

    #[error("difference of the projections is not invertible on the join: {detail}")]
    NotInvertibleDifference { detail: String },

    #[error(
        "witness does not match the computed corner projections: \
         initial residual {initial:.3e}, final residual {final_:.3e}"
    )]
    WitnessMismatch { initial: f64, final_: f64 },

    #[error("lower-bound condition failed on the {side}: measured {measured:.6e}, required {required:.6e}")]
    ConditionAFailed {
        side: Side,
        measured: f64,
        required: f64,
    },

    #[error(
        "left-projection difference is not invertible: meet rank {meet_rank}, \
         rank sum {rank_sum}, join rank {join_rank}"
    )]
    ConditionBFailed {
        meet_rank: usize,
        rank_sum: usize,
        join_rank: usize,
    },

    #[error("corner ranks do not match: {left_rank} vs {right_rank}")]
    EquivalenceRankMismatch { left_rank: usize, right_rank: usize },

    #[error("internal invariant violated: {detail}")]
    InternalInvariantViolation { detail: String },

    #[error("unknown generator: {name}")]
    UnknownGenerator { name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
