//! Constructive decompositions in matrix factors and block operator
//! algebras.
//!
//! Every element `T` of `M_n(C)` (or a finite direct sum of matrix factors)
//! splits as `T = (invertible) + (idempotent)` with the certified bound
//! `||(T - P)^{-1}|| <= 4`, and as `T = (invertible) + (projection)` with a
//! measured inverse norm. This crate computes those splittings end to end —
//! spectral projections, the projection lattice, the two-projections
//! canonical form, and the decomposition engine — and emits machine-checkable
//! certificates for every claim.
//!
//! The numeric core is generic over the real scalar (`f32`/`f64`) through
//! [`Real`]; the `*64` aliases at the crate root are the working types of the
//! CLI and the test suites.

pub mod block;
pub mod campaign;
pub mod clean;
pub mod error;
pub mod generate;
pub mod kernel;
pub mod lattice;
pub mod matrix;
pub mod pairs;
pub mod rng;
pub mod scalar;
pub mod tolerance;

pub use block::{aggregate_max, lift_binary, lift_unary, BlockOperator};
pub use campaign::{run_campaign, CampaignConfig, CampaignReport, CheckSummary, FailureDump};
pub use clean::{
    almost_star_clean, almost_star_clean_blocks, clean_decompose, clean_decompose_blocks,
    clean_split, idempotent_from, invert_via_splitting, verify_certificate, CertificateKind,
    CleanCertificate, SplitBoundCertificate, VerificationCheck, VerificationReport,
};
pub use error::{Error, Result, Side};
pub use generate::{
    generate, generate_block, generate_projection, generate_projection_pair, Generator, PairStyle,
};
pub use kernel::{
    corner_inverse, hermitian_eig, operator_norm, polar, rank, smallest_singular_value, svd,
    HermitianEig, Polar, Svd,
};
pub use lattice::{
    comparison_test, equivalent, isometry_factor, join, kaplansky_isometry, left_projection,
    left_projection_scaled, meet, right_projection, right_projection_scaled,
    spectral_projection_leq, PartialIsometry, Projection,
};
pub use matrix::ComplexMatrix;
pub use pairs::{
    build_p0, decompose_pair, difference_inverse, halmos_units, DifferenceInverseCertificate,
    PairDecomposition,
};
pub use rng::SplitMix64;
pub use scalar::Real;
pub use tolerance::ToleranceProfile;

/// Working-precision aliases.
pub type Matrix64 = ComplexMatrix<f64>;
pub type Projection64 = Projection<f64>;
pub type BlockOperator64 = BlockOperator<f64>;
pub type ToleranceProfile64 = ToleranceProfile<f64>;
pub type CleanCertificate64 = CleanCertificate<f64>;
pub type PairDecomposition64 = PairDecomposition<f64>;

/// Single-precision aliases.
pub type Matrix32 = ComplexMatrix<f32>;
pub type Projection32 = Projection<f32>;
pub type ToleranceProfile32 = ToleranceProfile<f32>;
