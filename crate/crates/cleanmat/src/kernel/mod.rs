//! Numeric kernel: factorizations, norms, and rank decisions for dense
//! square complex matrices under an explicit tolerance policy.

mod jacobi;
mod polar;
mod svd;

pub use jacobi::{hermitian_eig, HermitianEig};
pub use polar::{corner_inverse, polar, svd_with_rank, Polar};
pub use svd::{operator_norm, rank, smallest_singular_value, svd, Svd};
