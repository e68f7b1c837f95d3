//! The projection lattice of a matrix factor: left/right projections,
//! meet/join, spectral projections, equivalence witnesses, and the
//! constructive Kaplansky isometry.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{hermitian_eig, operator_norm, svd_with_rank};
use crate::matrix::{compress, expand, outer, outer_sum, ComplexMatrix};
use crate::scalar::Real;
use crate::tolerance::ToleranceProfile;

/// Hermitian idempotent with its thresholded rank.
#[derive(Debug, Clone, PartialEq)]
#[derive(Serialize, Deserialize)]
#[serde(
    try_from = "ProjectionRepr<T>",
    into = "ProjectionRepr<T>",
    bound(serialize = "T: Real", deserialize = "T: Real")
)]
pub struct Projection<T: Real> {
    matrix: ComplexMatrix<T>,
    rank: usize,
}

/// Wire format: the matrix fields plus `{"rank": r}`.
#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct ProjectionRepr<T: Real> {
    #[serde(flatten)]
    matrix: ComplexMatrix<T>,
    rank: usize,
}

impl<T: Real> From<Projection<T>> for ProjectionRepr<T> {
    fn from(p: Projection<T>) -> Self {
        ProjectionRepr {
            matrix: p.matrix,
            rank: p.rank,
        }
    }
}

impl<T: Real> TryFrom<ProjectionRepr<T>> for Projection<T> {
    type Error = Error;
    fn try_from(r: ProjectionRepr<T>) -> Result<Self> {
        let p = Projection::try_new(r.matrix.clone(), &ToleranceProfile::for_dim(r.matrix.dim()))?;
        if p.rank != r.rank {
            return Err(Error::InternalInvariantViolation {
                detail: format!(
                    "declared rank {} does not match trace-derived rank {}",
                    r.rank, p.rank
                ),
            });
        }
        Ok(p)
    }
}

impl<T: Real> Projection<T> {
    /// Validates `P^2 = P = P^*` (Frobenius residuals against
    /// `projection_tol`) and derives the rank by rounding the trace.
    pub fn try_new(matrix: ComplexMatrix<T>, profile: &ToleranceProfile<T>) -> Result<Self> {
        let idem = (&(&matrix * &matrix) - &matrix).frobenius_norm();
        let herm = matrix.hermitian_residual();
        if idem > profile.projection_tol || herm > profile.projection_tol {
            return Err(Error::NotProjection {
                idempotency: idem.as_f64(),
                selfadjointness: herm.as_f64(),
                tol: profile.projection_tol.as_f64(),
            });
        }
        let tr = matrix.trace();
        let rank_f = tr.re.round();
        let drift = (tr.re - rank_f).abs().max(tr.im.abs());
        if drift > T::of(matrix.dim() as f64) * profile.projection_tol || rank_f < T::zero() {
            return Err(Error::NotProjection {
                idempotency: idem.as_f64(),
                selfadjointness: herm.as_f64(),
                tol: profile.projection_tol.as_f64(),
            });
        }
        Ok(Projection {
            rank: rank_f.as_f64() as usize,
            matrix,
        })
    }

    /// Like [`Projection::try_new`] but with a caller-supplied rank, checked
    /// against the trace. Used by constructions that know the rank exactly.
    pub fn with_known_rank(
        matrix: ComplexMatrix<T>,
        rank: usize,
        profile: &ToleranceProfile<T>,
    ) -> Result<Self> {
        let p = Self::try_new(matrix, profile)?;
        if p.rank != rank {
            return Err(Error::InternalInvariantViolation {
                detail: format!(
                    "expected projection of rank {rank}, trace rounds to {}",
                    p.rank
                ),
            });
        }
        Ok(p)
    }

    /// Projection onto the span of orthonormal columns; exact by
    /// construction.
    pub fn from_orthonormal_columns(dim: usize, cols: &[Vec<Complex<T>>]) -> Self {
        Projection {
            matrix: outer_sum(dim, cols),
            rank: cols.len(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Projection {
            matrix: ComplexMatrix::zeros(dim),
            rank: 0,
        }
    }

    pub fn full(dim: usize) -> Self {
        Projection {
            matrix: ComplexMatrix::identity(dim),
            rank: dim,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `I - P`.
    pub fn complement(&self) -> Self {
        Projection {
            matrix: &ComplexMatrix::identity(self.dim()) - &self.matrix,
            rank: self.dim() - self.rank,
        }
    }

    /// Orthonormal basis of the range, from the deterministic SVD.
    pub fn range_basis(&self) -> Vec<Vec<Complex<T>>> {
        if self.rank == 0 {
            return Vec::new();
        }
        let (s, _) = svd_with_rank(&self.matrix, &ToleranceProfile::for_dim(self.dim()));
        s.left_columns(self.rank)
    }

    /// Whether `self <= other` in the lattice order, i.e.
    /// `other * self = self` up to `tol` in Frobenius norm.
    pub fn leq(&self, other: &Self, tol: T) -> bool {
        (&(&other.matrix * &self.matrix) - &self.matrix).frobenius_norm() <= tol
    }
}

/// Partial isometry with its initial and final projections
/// (`V^*V = initial`, `V V^* = final`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct PartialIsometry<T: Real> {
    pub matrix: ComplexMatrix<T>,
    pub initial: Projection<T>,
    pub final_: Projection<T>,
}

impl<T: Real> PartialIsometry<T> {
    pub fn try_new(
        matrix: ComplexMatrix<T>,
        initial: Projection<T>,
        final_: Projection<T>,
        profile: &ToleranceProfile<T>,
    ) -> Result<Self> {
        let ri = (&(&matrix.adjoint() * &matrix) - initial.matrix()).frobenius_norm();
        let rf = (&(&matrix * &matrix.adjoint()) - final_.matrix()).frobenius_norm();
        if ri > profile.projection_tol || rf > profile.projection_tol {
            return Err(Error::NotPartialIsometry {
                initial: ri.as_f64(),
                final_: rf.as_f64(),
                tol: profile.projection_tol.as_f64(),
            });
        }
        Ok(PartialIsometry {
            matrix,
            initial,
            final_,
        })
    }

    pub fn zero(dim: usize) -> Self {
        PartialIsometry {
            matrix: ComplexMatrix::zeros(dim),
            initial: Projection::zero(dim),
            final_: Projection::zero(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Projection onto the column space of `T`.
pub fn left_projection<T: Real>(
    t: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
) -> Projection<T> {
    left_projection_scaled(t, profile, T::zero())
}

/// Like [`left_projection`], with the rank cutoff floored at `scale`.
///
/// Use for products such as `T * E` whose entries may be pure rounding
/// debris of size `eps * ||T||`: passing `||T||` keeps the debris from
/// registering as rank.
pub fn left_projection_scaled<T: Real>(
    t: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
    scale: T,
) -> Projection<T> {
    let s = crate::kernel::svd(t);
    let r = s.rank_with_floor(profile, scale);
    Projection::from_orthonormal_columns(t.dim(), &s.left_columns(r))
}

/// Projection onto the column space of `T^*`.
pub fn right_projection<T: Real>(
    t: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
) -> Projection<T> {
    right_projection_scaled(t, profile, T::zero())
}

/// Like [`right_projection`], with the rank cutoff floored at `scale`.
pub fn right_projection_scaled<T: Real>(
    t: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
    scale: T,
) -> Projection<T> {
    let s = crate::kernel::svd(t);
    let r = s.rank_with_floor(profile, scale);
    Projection::from_orthonormal_columns(t.dim(), &s.right_columns(r))
}

/// Greatest lower bound: the projection onto `ran E` intersected with
/// `ran F`, computed as the kernel of `E^perp + F^perp`.
pub fn meet<T: Real>(
    e: &Projection<T>,
    f: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<Projection<T>> {
    e.matrix().same_dim(f.matrix())?;
    let sum = &e.complement().matrix + &f.complement().matrix;
    let eig = hermitian_eig(&sum, profile)?;
    let threshold = profile.generic_tol / T::of(2.0);
    let cols = eig.select_columns(|ev| ev <= threshold);
    Ok(Projection::from_orthonormal_columns(e.dim(), &cols))
}

/// Least upper bound: the projection onto `ran E + ran F`, computed as the
/// range of `E + F`.
pub fn join<T: Real>(
    e: &Projection<T>,
    f: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<Projection<T>> {
    e.matrix().same_dim(f.matrix())?;
    let sum = e.matrix() + f.matrix();
    let eig = hermitian_eig(&sum, profile)?;
    let threshold = profile.generic_tol / T::of(2.0);
    let cols = eig.select_columns(|ev| ev > threshold);
    Ok(Projection::from_orthonormal_columns(e.dim(), &cols))
}

/// Spectral projection of a Hermitian element onto the part of its spectrum
/// in `(-inf, c]`; eigenvalues within `tie_tol` of `c` are assigned to the
/// lower side.
pub fn spectral_projection_leq<T: Real>(
    t: &ComplexMatrix<T>,
    c: T,
    profile: &ToleranceProfile<T>,
) -> Result<Projection<T>> {
    let eig = hermitian_eig(t, profile)?;
    let cols = eig.select_columns(|ev| ev <= c + profile.tie_tol);
    Ok(Projection::from_orthonormal_columns(t.dim(), &cols))
}

/// Murray-von Neumann equivalence witness: `Some(V)` with `V^*V = E` and
/// `V V^* = F` iff the ranks match; absence of a witness is a normal return.
pub fn equivalent<T: Real>(
    e: &Projection<T>,
    f: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<Option<PartialIsometry<T>>> {
    e.matrix().same_dim(f.matrix())?;
    if e.rank() != f.rank() {
        return Ok(None);
    }
    let dim = e.dim();
    if e.rank() == 0 {
        return Ok(Some(PartialIsometry {
            matrix: ComplexMatrix::zeros(dim),
            initial: e.clone(),
            final_: f.clone(),
        }));
    }
    let be = e.range_basis();
    let bf = f.range_basis();
    let mut v = ComplexMatrix::zeros(dim);
    for (fe, fb) in be.iter().zip(bf.iter()) {
        v = &v + &outer(fb, fe);
    }
    Ok(Some(PartialIsometry::try_new(
        v,
        e.clone(),
        f.clone(),
        profile,
    )?))
}

/// Constructive witness of Kaplansky's parallelogram law: the polar partial
/// isometry of `E F^perp`, with initial projection `(E v F) - F` and final
/// projection `E - (E ^ F)`.
///
/// Computed through the two-projections data of `(E, F)` so the rank
/// decisions match the meet/join classification exactly: on the corner
/// `E ^ F^perp` the isometry is the identity, and each generic direction
/// `x_i` pairs with `w_i = sqrt(1 - h_i) x_i - sqrt(h_i) v_i`, the unit
/// vector spanning `(join - F)` inside its two-dimensional block.
pub fn kaplansky_isometry<T: Real>(
    e: &Projection<T>,
    f: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<PartialIsometry<T>> {
    e.matrix().same_dim(f.matrix())?;
    let pd = crate::pairs::decompose_pair(e, f, profile)?;
    let dim = e.dim();
    let corner_basis = pd.meet_efp.range_basis();

    let mut w = outer_sum(dim, &corner_basis);
    let mut initial_cols = corner_basis.clone();
    let mut final_cols = corner_basis;
    for (h, x, v) in pd.generic_triples() {
        let ch = (T::one() - h).sqrt();
        let sh = h.sqrt();
        let wvec: Vec<Complex<T>> = x
            .iter()
            .zip(v.iter())
            .map(|(xi, vi)| xi.scale(ch) - vi.scale(sh))
            .collect();
        w = &w + &outer(x, &wvec);
        initial_cols.push(wvec);
        final_cols.push(x.clone());
    }
    let initial = Projection::from_orthonormal_columns(dim, &initial_cols);
    let final_ = Projection::from_orthonormal_columns(dim, &final_cols);
    PartialIsometry::try_new(w, initial, final_, profile)
}

/// Positive element `S` of the corner `E A E` such that `T S` is a partial
/// isometry with initial projection `E` and final projection `L(T E)`;
/// requires the compression of `T^*T` to `ran E` to be bounded below by
/// `a^2`.
pub fn isometry_factor<T: Real>(
    t: &ComplexMatrix<T>,
    e: &Projection<T>,
    a: T,
    profile: &ToleranceProfile<T>,
) -> Result<ComplexMatrix<T>> {
    t.same_dim(e.matrix())?;
    if !(a > T::zero()) {
        return Err(Error::InternalInvariantViolation {
            detail: "lower bound a must be positive".into(),
        });
    }
    let dim = t.dim();
    if e.rank() == 0 {
        return Ok(ComplexMatrix::zeros(dim));
    }
    let basis = e.range_basis();
    let tt = &t.adjoint() * t;
    let corner = compress(&tt, &basis).expect("nonzero rank");
    let eig = hermitian_eig(&corner, profile)?;
    let smallest = eig.eigenvalues[0];
    let slack = profile.projection_tol * operator_norm(t).powi(2).max(T::one());
    if smallest < a * a - slack || smallest <= T::zero() {
        return Err(Error::CornerNotBoundedBelow {
            smallest: smallest.as_f64(),
            required: (a * a - slack).as_f64(),
        });
    }
    let inv_sqrt = eig.apply_fn(|ev| T::one() / ev.sqrt());
    Ok(expand(dim, &inv_sqrt, &basis))
}

/// Rank comparison against a spectral projection `F_c` of `|T|` at threshold
/// `c`: returns whether `rank E <= rank F_c`, and when the hypothesis
/// `||T E|| < c` holds it additionally asserts the implication as a runtime
/// check.
pub fn comparison_test<T: Real>(
    t: &ComplexMatrix<T>,
    e: &Projection<T>,
    f_c: &Projection<T>,
    c: T,
    profile: &ToleranceProfile<T>,
) -> Result<bool> {
    t.same_dim(e.matrix())?;
    t.same_dim(f_c.matrix())?;
    let verdict = e.rank() <= f_c.rank();
    let te_norm = operator_norm(&(t * e.matrix()));
    let slack = profile.projection_tol * operator_norm(t).max(T::one());
    if te_norm < c - slack && !verdict {
        return Err(Error::InternalInvariantViolation {
            detail: format!(
                "||TE|| = {} < c = {} but rank E = {} exceeds rank F_c = {}",
                te_norm.as_f64(),
                c.as_f64(),
                e.rank(),
                f_c.rank()
            ),
        });
    }
    Ok(verdict)
}
