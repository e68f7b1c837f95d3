//! Tolerance policy.
//!
//! Every numerical decision in the toolkit (rank, projection membership,
//! spectral classification, threshold ties) is driven by an explicit
//! [`ToleranceProfile`] rather than by ad-hoc constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The four knobs of the numerical policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile<T> {
    /// Relative singular-value threshold: a singular value counts toward the
    /// rank iff it exceeds `rank_cutoff_rel * sigma_max`.
    pub rank_cutoff_rel: T,
    /// Maximum residual accepted by projection checks (`P^2 = P = P^*`).
    pub projection_tol: T,
    /// Spectral weights within this distance of 0 or 1 are classified into
    /// the corner parts of a two-projection decomposition.
    pub generic_tol: T,
    /// Eigenvalues within this distance of a spectral threshold are assigned
    /// to the lower side.
    pub tie_tol: T,
}

impl<T: Real> ToleranceProfile<T> {
    /// Default profile for matrices of dimension `dim`.
    ///
    /// The rank cutoff scales with the dimension (`dim * 2^-45` at f64
    /// precision); the remaining knobs are dimension-independent.
    pub fn for_dim(dim: usize) -> Self {
        ToleranceProfile {
            rank_cutoff_rel: T::default_rank_cutoff(dim),
            projection_tol: T::default_projection_tol(),
            generic_tol: T::default_generic_tol(),
            tie_tol: T::default_tie_tol(),
        }
    }

    /// Checks the profile invariants: all knobs strictly positive and below
    /// one, and the rank cutoff at least the machine epsilon.
    pub fn validate(&self) -> Result<()> {
        let ok = |x: T| x > T::zero() && x < T::one();
        if !(ok(self.rank_cutoff_rel)
            && ok(self.projection_tol)
            && ok(self.generic_tol)
            && ok(self.tie_tol))
        {
            return Err(Error::InternalInvariantViolation {
                detail: "tolerance profile entries must lie strictly in (0, 1)".into(),
            });
        }
        if self.rank_cutoff_rel < T::epsilon() {
            return Err(Error::InternalInvariantViolation {
                detail: format!(
                    "rank_cutoff_rel {} is below the machine epsilon {}",
                    self.rank_cutoff_rel.as_f64(),
                    T::epsilon().as_f64()
                ),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_is_valid() {
        for dim in 1..=16 {
            ToleranceProfile::<f64>::for_dim(dim).validate().unwrap();
            ToleranceProfile::<f32>::for_dim(dim).validate().unwrap();
        }
    }

    #[test]
    fn rank_cutoff_scales_with_dimension() {
        let p1 = ToleranceProfile::<f64>::for_dim(1);
        let p8 = ToleranceProfile::<f64>::for_dim(8);
        assert_eq!(p8.rank_cutoff_rel, 8.0 * p1.rank_cutoff_rel);
        assert_eq!(p1.rank_cutoff_rel, 2f64.powi(-45));
    }

    #[test]
    fn bad_profile_is_rejected() {
        let mut p = ToleranceProfile::<f64>::for_dim(2);
        p.projection_tol = 0.0;
        assert!(p.validate().is_err());
        let mut q = ToleranceProfile::<f64>::for_dim(2);
        q.rank_cutoff_rel = 1e-300;
        assert!(q.validate().is_err());
    }
}
