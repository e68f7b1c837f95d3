//! Real scalar abstraction: the toolkit is generic over the underlying
//! floating-point field, with `f64` as the working precision of the CLI
//! and the test suites.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real scalar type underlying `Complex<T>` matrix entries.
///
/// Implemented for `f32` and `f64`. The associated tolerance defaults scale
/// with the machine epsilon of the concrete type, so the same algorithms run
/// at either precision; the shipped acceptance thresholds assume `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Default relative singular-value cutoff for rank decisions in
    /// dimension `dim`.
    fn default_rank_cutoff(dim: usize) -> Self;

    /// Default residual budget for projection checks (`P^2 = P = P^*`).
    fn default_projection_tol() -> Self;

    /// Default band half-width for classifying spectral weights near 0/1.
    fn default_generic_tol() -> Self;

    /// Default tie band around a spectral threshold.
    fn default_tie_tol() -> Self;

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }
}

impl Real for f64 {
    fn default_rank_cutoff(dim: usize) -> Self {
        dim as f64 * 2f64.powi(-45)
    }

    fn default_projection_tol() -> Self {
        1e-8
    }

    fn default_generic_tol() -> Self {
        1e-8
    }

    fn default_tie_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn default_rank_cutoff(dim: usize) -> Self {
        dim as f32 * 2f32.powi(-16)
    }

    fn default_projection_tol() -> Self {
        1e-4
    }

    fn default_generic_tol() -> Self {
        1e-4
    }

    fn default_tie_tol() -> Self {
        1e-5
    }
}
