//! Polar decomposition and the corner pseudoinverse.

use num_complex::Complex;

use crate::kernel::svd::{svd, Svd};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::tolerance::ToleranceProfile;

/// `M = W |M|` with `W` a partial isometry (`W^*W` the right projection of
/// `M`, `W W^*` its left projection) and `|M| = (M^*M)^{1/2}`.
#[derive(Debug, Clone)]
pub struct Polar<T: Real> {
    pub isometry: ComplexMatrix<T>,
    pub abs: ComplexMatrix<T>,
}

/// Polar decomposition via the SVD, truncated at the profile's rank rule.
pub fn polar<T: Real>(m: &ComplexMatrix<T>, profile: &ToleranceProfile<T>) -> Polar<T> {
    let n = m.dim();
    let s = svd(m);
    let r = s.rank(profile);
    let mut isometry = ComplexMatrix::zeros(n);
    let mut abs = ComplexMatrix::zeros(n);
    for k in 0..n {
        let uk = s.u.column(k);
        let vk = s.v.column(k);
        let sv = Complex::new(s.singular_values[k], T::zero());
        for i in 0..n {
            for j in 0..n {
                if k < r {
                    let w = isometry.get(i, j) + uk[i] * vk[j].conj();
                    isometry.set(i, j, w);
                }
                let a = abs.get(i, j) + vk[i] * vk[j].conj() * sv;
                abs.set(i, j, a);
            }
        }
    }
    Polar { isometry, abs }
}

/// The reflexive corner inverse `S` with `S T = R(T)` and `T S = L(T)`,
/// supported on `R(T) . L(T)` (the Moore-Penrose pseudoinverse of a square
/// matrix, truncated at the profile's rank rule).
pub fn corner_inverse<T: Real>(
    t: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
) -> ComplexMatrix<T> {
    let n = t.dim();
    let s = svd(t);
    let r = s.rank(profile);
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..r {
        let uk = s.u.column(k);
        let vk = s.v.column(k);
        let inv = Complex::new(T::one() / s.singular_values[k], T::zero());
        for i in 0..n {
            for j in 0..n {
                let v = out.get(i, j) + vk[i] * uk[j].conj() * inv;
                out.set(i, j, v);
            }
        }
    }
    out
}

/// Rank-truncated SVD helper shared by the projection constructors: returns
/// the decomposition together with the thresholded rank.
pub fn svd_with_rank<T: Real>(
    m: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
) -> (Svd<T>, usize) {
    let s = svd(m);
    let r = s.rank(profile);
    (s, r)
}
