//! Decomposition engine.
//!
//! Splits an arbitrary element `T` as `invertible + idempotent` with the
//! certified bound `||(T - P)^{-1}|| <= 4`, and as
//! `invertible + projection` with a measured inverse norm. Every
//! decomposition returns a [`CleanCertificate`] whose claims can be
//! re-verified from scratch by [`verify_certificate`].

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::block::BlockOperator;
use crate::error::{Error, Result, Side};
use crate::kernel::{corner_inverse, hermitian_eig, operator_norm, svd_with_rank};
use crate::lattice::{
    equivalent, join, left_projection, left_projection_scaled, meet, right_projection, Projection,
};
use crate::matrix::{compress, ComplexMatrix};
use crate::pairs::{build_p0, decompose_pair, difference_inverse};
use crate::scalar::Real;
use crate::tolerance::ToleranceProfile;

/// Which kind of summand a certificate claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    /// An idempotent summand with the certified bound on the inverse norm.
    #[serde(rename = "clean_idempotent")]
    CleanIdempotent,
    /// A self-adjoint idempotent summand; the inverse norm is measured, not
    /// bounded.
    #[serde(rename = "almost_star_projection")]
    AlmostStarProjection,
}

/// A decomposition `T = (T - P) + P` together with everything needed to
/// re-check it: the inverse of `T - P`, measured residuals and norms, the
/// splitting projection, and the measured overlap `lambda` of the two left
/// projections of the split.
#[derive(Debug, Clone, PartialEq)]
#[derive(Serialize, Deserialize)]
#[serde(
    try_from = "CertRepr<T>",
    into = "CertRepr<T>",
    bound(serialize = "T: Real", deserialize = "T: Real")
)]
pub struct CleanCertificate<T: Real> {
    pub kind: CertificateKind,
    pub summand: ComplexMatrix<T>,
    pub inverse: ComplexMatrix<T>,
    pub inverse_norm: T,
    pub claimed_bound: Option<T>,
    pub idempotency_residual: T,
    pub selfadjointness_residual: Option<T>,
    pub split_projection: Projection<T>,
    pub lambda: T,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct ResidualsRepr<T: Real> {
    idempotency: T,
    selfadjointness: Option<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct CertRepr<T: Real> {
    kind: CertificateKind,
    summand: ComplexMatrix<T>,
    inverse: ComplexMatrix<T>,
    inverse_norm: T,
    claimed_bound: Option<T>,
    residuals: ResidualsRepr<T>,
    lambda: T,
    split_projection: Projection<T>,
}

impl<T: Real> From<CleanCertificate<T>> for CertRepr<T> {
    fn from(c: CleanCertificate<T>) -> Self {
        CertRepr {
            kind: c.kind,
            summand: c.summand,
            inverse: c.inverse,
            inverse_norm: c.inverse_norm,
            claimed_bound: c.claimed_bound,
            residuals: ResidualsRepr {
                idempotency: c.idempotency_residual,
                selfadjointness: c.selfadjointness_residual,
            },
            lambda: c.lambda,
            split_projection: c.split_projection,
        }
    }
}

impl<T: Real> TryFrom<CertRepr<T>> for CleanCertificate<T> {
    type Error = Error;
    fn try_from(r: CertRepr<T>) -> Result<Self> {
        r.summand.same_dim(&r.inverse)?;
        r.summand.same_dim(r.split_projection.matrix())?;
        Ok(CleanCertificate {
            kind: r.kind,
            summand: r.summand,
            inverse: r.inverse,
            inverse_norm: r.inverse_norm,
            claimed_bound: r.claimed_bound,
            idempotency_residual: r.residuals.idempotency,
            selfadjointness_residual: r.residuals.selfadjointness,
            split_projection: r.split_projection,
            lambda: r.lambda,
        })
    }
}

/// Certificate for the splitting inversion: the two corner lower bounds, the
/// measured overlap of the left projections, and the norms entering the
/// sandwich `1/||T|| <= ||S|| sqrt(1 - lambda) <= 1/min(a1, a2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct SplitBoundCertificate<T: Real> {
    pub a1: T,
    pub a2: T,
    pub lambda: T,
    pub s_norm: T,
    pub t_norm: T,
}

/// `max(x, k * eps)`: the shipped tolerances assume f64; at lower
/// precision the epsilon-scaled floor takes over so the engine remains
/// usable through the generic scalar.
fn eps_floored<T: Real>(x: f64, k: f64) -> T {
    T::of(x).max(T::of(k) * T::epsilon())
}

/// Residual budget for `(T - P) X = I` checks.
fn inverse_residual_budget<T: Real>(dim: usize) -> T {
    T::of(dim as f64) * eps_floored::<T>(1e-9, 256.0)
}

/// Newton refinement `X <- X (2I - M X)`; squares both inverse residuals.
/// The almost-star path claims no bound on `||(T - P_0)^{-1}||`, so the
/// plain SVD inverse of an ill-conditioned difference needs polishing to
/// meet the certificate's residual budget.
fn refine_inverse<T: Real>(m: &ComplexMatrix<T>, x: ComplexMatrix<T>) -> ComplexMatrix<T> {
    let identity = ComplexMatrix::identity(m.dim());
    let mut out = x;
    for _ in 0..2 {
        let residual = &identity - &(m * &out);
        out = &out + &(&out * &residual);
    }
    out
}

fn smallest_corner_eigenvalue<T: Real>(
    m: &ComplexMatrix<T>,
    p: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<T> {
    if p.rank() == 0 {
        return Ok(T::infinity());
    }
    let basis = p.range_basis();
    let corner = compress(m, &basis).expect("nonzero rank");
    Ok(hermitian_eig(&corner, profile)?.eigenvalues[0])
}

/// The idempotent `P = E + E^perp T E + A (E - E T E)` of the construction
/// lemma. Requires `E - E T E` invertible on `ran E` and
/// `A` supported in the `(E^perp, E)` corner.
pub fn idempotent_from<T: Real>(
    t: &ComplexMatrix<T>,
    e: &Projection<T>,
    a: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
) -> Result<ComplexMatrix<T>> {
    t.same_dim(e.matrix())?;
    t.same_dim(a)?;
    let corner_residual = (a - &(&(e.complement().matrix() * a) * e.matrix())).frobenius_norm();
    if corner_residual > profile.projection_tol * a.frobenius_norm().max(T::one()) {
        return Err(Error::BadOffDiagonal {
            residual: corner_residual.as_f64(),
        });
    }

    let m1 = e.matrix() - &(&(e.matrix() * t) * e.matrix());
    if e.rank() > 0 {
        let basis = e.range_basis();
        let corner = compress(&m1, &basis).expect("nonzero rank");
        let (s, _) = svd_with_rank(&corner, profile);
        let smallest = *s.singular_values.last().unwrap();
        if smallest <= profile.rank_cutoff_rel * s.singular_values[0].max(T::one()) {
            return Err(Error::CornerNotInvertible {
                smallest: smallest.as_f64(),
            });
        }
    }

    let p = &(e.matrix() + &(&(e.complement().matrix() * t) * e.matrix())) + &(a * &m1);
    Ok(p)
}

/// Certified inversion through a splitting projection: returns `S` with
/// `S T = I` and `T S = L(T)` plus the norm sandwich certificate.
pub fn invert_via_splitting<T: Real>(
    t: &ComplexMatrix<T>,
    e: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<(ComplexMatrix<T>, SplitBoundCertificate<T>)> {
    t.same_dim(e.matrix())?;
    let dim = t.dim();
    let tt = &t.adjoint() * t;
    let t_norm_rough = operator_norm(t);
    let required = (profile.rank_cutoff_rel * t_norm_rough.max(T::one())).powi(2);

    let m1 = smallest_corner_eigenvalue(&tt, e, profile)?;
    if m1 <= required {
        return Err(Error::ConditionAFailed {
            side: Side::Projection,
            measured: m1.as_f64(),
            required: required.as_f64(),
        });
    }
    let m2 = smallest_corner_eigenvalue(&tt, &e.complement(), profile)?;
    if m2 <= required {
        return Err(Error::ConditionAFailed {
            side: Side::Complement,
            measured: m2.as_f64(),
            required: required.as_f64(),
        });
    }
    let a1 = m1.sqrt();
    let a2 = m2.sqrt();

    let lt = left_projection(t, profile);
    let f1 = left_projection_scaled(&(t * e.matrix()), profile, t_norm_rough);
    let f2 = left_projection_scaled(&(t * e.complement().matrix()), profile, t_norm_rough);
    let overlap = meet(&f1, &f2, profile)?;
    let joined = join(&f1, &f2, profile)?;
    if overlap.rank() > 0 || joined.rank() != lt.rank() {
        return Err(Error::ConditionBFailed {
            meet_rank: overlap.rank(),
            rank_sum: f1.rank() + f2.rank(),
            join_rank: joined.rank(),
        });
    }
    let dcert = difference_inverse(&f1, &f2, profile).map_err(|err| match err {
        Error::NotInvertibleDifference { .. } => Error::ConditionBFailed {
            meet_rank: overlap.rank(),
            rank_sum: f1.rank() + f2.rank(),
            join_rank: joined.rank(),
        },
        other => other,
    })?;
    let lambda = dcert.ef_norm.min(T::one());

    let (svd_t, rank_t) = svd_with_rank(t, profile);
    if rank_t != dim {
        return Err(Error::InternalInvariantViolation {
            detail: format!(
                "splitting conditions hold but the rank rule reports rank {rank_t} < {dim}"
            ),
        });
    }
    let s = corner_inverse(t, profile);
    let s_norm = T::one() / *svd_t.singular_values.last().unwrap();
    let t_norm = svd_t.singular_values[0];

    let identity = ComplexMatrix::identity(dim);
    let left_res = operator_norm(&(&(&s * t) - &identity));
    let right_res = operator_norm(&(&(t * &s) - &identity));
    let res_budget = inverse_residual_budget::<T>(dim)
        .max(T::of(100.0 * dim as f64) * T::epsilon() * s_norm * t_norm);
    if left_res > res_budget || right_res > res_budget {
        return Err(Error::InternalInvariantViolation {
            detail: format!(
                "inverse residuals {:.3e} / {:.3e} exceed the budget {:.3e}",
                left_res.as_f64(),
                right_res.as_f64(),
                res_budget.as_f64()
            ),
        });
    }

    let cert = SplitBoundCertificate {
        a1,
        a2,
        lambda,
        s_norm,
        t_norm,
    };
    check_sandwich(&cert)?;
    Ok((s, cert))
}

fn check_sandwich<T: Real>(cert: &SplitBoundCertificate<T>) -> Result<()> {
    let slack = eps_floored::<T>(1e-8, 128.0);
    let mid = cert.s_norm * (T::one() - cert.lambda).sqrt();
    let lower = T::one() / cert.t_norm - slack;
    let upper = T::one() / cert.a1.min(cert.a2) + slack;
    if mid < lower || mid > upper {
        return Err(Error::InternalInvariantViolation {
            detail: format!(
                "norm sandwich violated: 1/||T|| = {:.12e}, ||S|| sqrt(1-lambda) = {:.12e}, \
                 1/min(a1,a2) = {:.12e}",
                (T::one() / cert.t_norm).as_f64(),
                mid.as_f64(),
                (T::one() / cert.a1.min(cert.a2)).as_f64()
            ),
        });
    }
    Ok(())
}

/// The clean splitting: builds the idempotent from the two-projections data
/// of `(E, I - L(T E^perp))` and certifies
/// `||(T - P)^{-1}|| <= 2 / min(||(E - ETE)^{-1}||^{-1}, c)`.
pub fn clean_split<T: Real>(
    t: &ComplexMatrix<T>,
    e: &Projection<T>,
    c: T,
    profile: &ToleranceProfile<T>,
) -> Result<CleanCertificate<T>> {
    t.same_dim(e.matrix())?;
    let dim = t.dim();
    if !(c > T::zero()) {
        return Err(Error::InternalInvariantViolation {
            detail: "threshold c must be positive".into(),
        });
    }
    if e.rank() == dim {
        // A full splitting projection leaves no complement to bound below;
        // callers handle the small-norm regime separately.
        return Err(Error::ConditionAFailed {
            side: Side::Complement,
            measured: 0.0,
            required: (c * c).as_f64(),
        });
    }

    // Corner invertibility of E - ETE, measured as the smallest singular
    // value of the compression.
    let m1 = e.matrix() - &(&(e.matrix() * t) * e.matrix());
    let a1_corner = if e.rank() == 0 {
        T::infinity()
    } else {
        let basis = e.range_basis();
        let corner = compress(&m1, &basis).expect("nonzero rank");
        let (s, _) = svd_with_rank(&corner, profile);
        let smallest = *s.singular_values.last().unwrap();
        if smallest <= profile.rank_cutoff_rel * s.singular_values[0].max(T::one()) {
            return Err(Error::CornerNotInvertible {
                smallest: smallest.as_f64(),
            });
        }
        smallest
    };

    // Complement lower bound T^*T >= c^2 on ran E^perp.
    let tt = &t.adjoint() * t;
    let m2 = smallest_corner_eigenvalue(&tt, &e.complement(), profile)?;
    let slack = T::of(1e-10) * operator_norm(t).powi(2).max(T::one());
    if m2 < c * c - slack {
        return Err(Error::ConditionAFailed {
            side: Side::Complement,
            measured: m2.as_f64(),
            required: (c * c).as_f64(),
        });
    }

    let t_norm = operator_norm(t);
    let f = left_projection_scaled(&(t * e.complement().matrix()), profile, t_norm).complement();
    let pd = decompose_pair(e, &f, profile)?;
    let witness = equivalent(&pd.meet_efp, &pd.meet_epf, profile)?.ok_or(
        Error::EquivalenceRankMismatch {
            left_rank: pd.meet_efp.rank(),
            right_rank: pd.meet_epf.rank(),
        },
    )?;

    let i_unit = Complex::new(T::zero(), T::one());
    let a = &pd.e21.scale(i_unit) + &witness.matrix;
    let p = idempotent_from(t, e, &a, profile)?;

    let t_minus_p = t - &p;
    let (inverse, scert) = invert_via_splitting(&t_minus_p, e, profile)?;

    let claimed = T::of(2.0) / a1_corner.min(c);
    if scert.s_norm > claimed + eps_floored::<T>(1e-6, 128.0) {
        return Err(Error::InternalInvariantViolation {
            detail: format!(
                "measured inverse norm {:.9} exceeds the claimed bound {:.9}",
                scert.s_norm.as_f64(),
                claimed.as_f64()
            ),
        });
    }

    let p_norm = operator_norm(&p);
    let te_norm = operator_norm(&(t * e.matrix()));
    if p_norm > T::of(2.0) + T::of(2.0) * te_norm + eps_floored::<T>(1e-8, 128.0) {
        return Err(Error::InternalInvariantViolation {
            detail: format!(
                "idempotent norm {:.9} exceeds 2 + 2 ||TE|| = {:.9}",
                p_norm.as_f64(),
                (T::of(2.0) + T::of(2.0) * te_norm).as_f64()
            ),
        });
    }

    let idempotency_residual = operator_norm(&(&(&p * &p) - &p));
    Ok(CleanCertificate {
        kind: CertificateKind::CleanIdempotent,
        summand: p,
        inverse,
        inverse_norm: scert.s_norm,
        claimed_bound: Some(claimed),
        idempotency_residual,
        selfadjointness_residual: None,
        split_projection: e.clone(),
        lambda: scert.lambda,
    })
}

/// Clean decomposition, total on `M_n`: an idempotent `P` with `T - P`
/// invertible and `||(T - P)^{-1}|| <= 4`.
///
/// `||T|| <= 1/2` (up to the tie band) takes the direct branch `P = I`;
/// otherwise the splitting projection is the spectral projection of `|T|`
/// at threshold `1/2`.
pub fn clean_decompose<T: Real>(
    t: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
) -> Result<CleanCertificate<T>> {
    let dim = t.dim();
    // One SVD decides both the branch and the splitting projection, so the
    // tie band around 1/2 cannot classify them inconsistently: the singular
    // values are the spectrum of |T| and the right singular vectors span its
    // spectral subspaces.
    let svd_t = crate::kernel::svd(t);
    let t_norm = svd_t.singular_values[0];
    let half = T::of(0.5);

    let cert = if t_norm <= half + profile.tie_tol {
        let identity = ComplexMatrix::identity(dim);
        let t_minus_p = t - &identity;
        let inverse = corner_inverse(&t_minus_p, profile);
        let (svd_tp, rank_tp) = svd_with_rank(&t_minus_p, profile);
        if rank_tp != dim {
            return Err(Error::InternalInvariantViolation {
                detail: "I - T must be invertible when ||T|| <= 1/2".into(),
            });
        }
        let inverse_norm = T::one() / *svd_tp.singular_values.last().unwrap();
        if inverse_norm > T::of(2.0) + eps_floored::<T>(1e-6, 128.0) {
            return Err(Error::InternalInvariantViolation {
                detail: format!(
                    "small-norm branch produced inverse norm {:.9} > 2",
                    inverse_norm.as_f64()
                ),
            });
        }
        CleanCertificate {
            kind: CertificateKind::CleanIdempotent,
            summand: identity,
            inverse,
            inverse_norm,
            claimed_bound: Some(T::of(4.0)),
            idempotency_residual: T::zero(),
            selfadjointness_residual: None,
            split_projection: Projection::full(dim),
            lambda: T::zero(),
        }
    } else {
        // The splitting threshold is placed in the largest gap of the
        // singular spectrum inside [0.48, 0.5]: splitting through a spectral
        // cluster near 1/2 would make the subspace geometry ill-conditioned,
        // while any threshold c in the window certifies
        // ||(T-P)^{-1}|| <= (1 - 1/sqrt(2))^{-1/2} / c < 4.
        // With at most `dim` points in the window the gap has width at
        // least 0.02 / (dim + 1).
        let lo = T::of(0.48);
        let mut points = vec![lo, half];
        for &s in &svd_t.singular_values {
            if s > lo && s < half {
                points.push(s);
            }
        }
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite singular values"));
        let mut threshold = half;
        let mut best_gap = T::zero();
        for pair in points.windows(2) {
            let gap = pair[1] - pair[0];
            if gap > best_gap {
                best_gap = gap;
                threshold = (pair[0] + pair[1]) / T::of(2.0);
            }
        }
        let kept: Vec<Vec<Complex<T>>> = svd_t
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= threshold)
            .map(|(k, _)| svd_t.v.column(k))
            .collect();
        let e = Projection::from_orthonormal_columns(dim, &kept);
        let mut cert = clean_split(t, &e, threshold, profile).map_err(|err| match err {
            Error::InternalInvariantViolation { .. } => err,
            other => Error::InternalInvariantViolation {
                detail: format!(
                    "splitting conditions failed on the spectral projection \
                     (rank {} of {}): {other}",
                    e.rank(),
                    dim
                ),
            },
        })?;
        // The headline certified constant.
        cert.claimed_bound = Some(T::of(4.0));
        cert
    };

    validate_inverse(t, &cert)?;
    Ok(cert)
}

/// Almost-*-clean decomposition, total on `M_n`: a genuine projection `P_0`
/// built from the pair `(L(T)^perp, R(T)^perp)` such that `T - P_0` is
/// invertible; the inverse norm is measured, no bound is claimed.
pub fn almost_star_clean<T: Real>(
    t: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
) -> Result<CleanCertificate<T>> {
    let dim = t.dim();
    let lt = left_projection(t, profile);
    let rt = right_projection(t, profile);
    let e = lt.complement();
    let f = rt.complement();

    let pd = decompose_pair(&e, &f, profile)?;
    let witness = equivalent(&pd.meet_efp, &pd.meet_epf, profile)?.ok_or_else(|| {
        Error::InternalInvariantViolation {
            detail: format!(
                "corner ranks must match for the pair (L(T)^perp, R(T)^perp): {} vs {}",
                pd.meet_efp.rank(),
                pd.meet_epf.rank()
            ),
        }
    })?;
    let p0 = build_p0(&e, &f, &witness, profile)?;

    let t_minus_p = t - p0.matrix();
    let (svd_tp, rank_tp) = svd_with_rank(&t_minus_p, profile);
    if rank_tp != dim {
        return Err(Error::InternalInvariantViolation {
            detail: format!(
                "T - P_0 must be invertible; rank rule reports {rank_tp} < {dim} \
                 (smallest singular value {:.3e})",
                svd_tp.singular_values.last().unwrap().as_f64()
            ),
        });
    }
    let inverse = refine_inverse(&t_minus_p, corner_inverse(&t_minus_p, profile));
    let inverse_norm = T::one() / *svd_tp.singular_values.last().unwrap();

    let summand = p0.matrix().clone();
    let idempotency_residual = operator_norm(&(&(&summand * &summand) - &summand));
    let selfadjointness_residual = operator_norm(&(&summand - &summand.adjoint()));
    let lambda = operator_norm(&(&summand * rt.matrix()));

    let cert = CleanCertificate {
        kind: CertificateKind::AlmostStarProjection,
        summand,
        inverse,
        inverse_norm,
        claimed_bound: None,
        idempotency_residual,
        selfadjointness_residual: Some(selfadjointness_residual),
        split_projection: e,
        lambda,
    };
    validate_inverse(t, &cert)?;
    Ok(cert)
}

fn validate_inverse<T: Real>(t: &ComplexMatrix<T>, cert: &CleanCertificate<T>) -> Result<()> {
    let dim = t.dim();
    let identity = ComplexMatrix::identity(dim);
    let t_minus_p = t - &cert.summand;
    let left = operator_norm(&(&(&t_minus_p * &cert.inverse) - &identity));
    let right = operator_norm(&(&(&cert.inverse * &t_minus_p) - &identity));
    let budget = inverse_residual_budget::<T>(dim);
    if left > budget || right > budget {
        return Err(Error::InternalInvariantViolation {
            detail: format!(
                "certificate inverse residuals {:.3e} / {:.3e} exceed {:.3e}",
                left.as_f64(),
                right.as_f64(),
                budget.as_f64()
            ),
        });
    }
    Ok(())
}

/// Clean decomposition of a block operator, one certificate per block; the
/// claimed bound of the whole operator is the maximum over blocks.
pub fn clean_decompose_blocks<T: Real>(
    b: &BlockOperator<T>,
    profile: Option<&ToleranceProfile<T>>,
) -> Result<Vec<CleanCertificate<T>>> {
    b.blocks()
        .iter()
        .map(|m| {
            let default = ToleranceProfile::for_dim(m.dim());
            clean_decompose(m, profile.unwrap_or(&default))
        })
        .collect()
}

/// Almost-*-clean decomposition of a block operator, one certificate per
/// block.
pub fn almost_star_clean_blocks<T: Real>(
    b: &BlockOperator<T>,
    profile: Option<&ToleranceProfile<T>>,
) -> Result<Vec<CleanCertificate<T>>> {
    b.blocks()
        .iter()
        .map(|m| {
            let default = ToleranceProfile::for_dim(m.dim());
            almost_star_clean(m, profile.unwrap_or(&default))
        })
        .collect()
}

/// One re-verified claim of a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationCheck {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
}

/// The full re-verification of a certificate against its element.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<VerificationCheck>,
    pub passed: bool,
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<28} {}  measured {:.6e}  threshold {:.6e}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.measured,
                c.threshold
            )?;
        }
        write!(f, "overall: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Recomputes every invariant of a certificate from scratch: residuals by
/// direct multiplication, norms by fresh SVD. Failures are report entries,
/// never errors.
pub fn verify_certificate<T: Real>(
    t: &ComplexMatrix<T>,
    cert: &CleanCertificate<T>,
    profile: &ToleranceProfile<T>,
) -> VerificationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, measured: T, threshold: T| {
        checks.push(VerificationCheck {
            name: name.to_string(),
            passed: measured <= threshold,
            measured: measured.as_f64(),
            threshold: threshold.as_f64(),
        });
    };

    let dim = t.dim();
    let p = &cert.summand;
    let x = &cert.inverse;
    let identity = ComplexMatrix::identity(dim);

    let idem = operator_norm(&(&(p * p) - p));
    push("summand_idempotent", idem, profile.projection_tol);

    if cert.kind == CertificateKind::AlmostStarProjection {
        let herm = operator_norm(&(p - &p.adjoint()));
        push("summand_selfadjoint", herm, profile.projection_tol);
    }

    let t_minus_p = t - p;
    let budget = inverse_residual_budget::<T>(dim);
    push(
        "inverse_left",
        operator_norm(&(&(&t_minus_p * x) - &identity)),
        budget,
    );
    push(
        "inverse_right",
        operator_norm(&(&(x * &t_minus_p) - &identity)),
        budget,
    );

    let fresh_norm = operator_norm(x);
    push(
        "inverse_norm_consistent",
        (fresh_norm - cert.inverse_norm).abs(),
        eps_floored::<T>(1e-9, 64.0) * cert.inverse_norm.max(T::one()),
    );

    if let Some(bound) = cert.claimed_bound {
        push("claimed_bound", fresh_norm, bound + eps_floored::<T>(1e-6, 128.0));
    }

    push(
        "residual_field_consistent",
        (idem - cert.idempotency_residual).abs(),
        eps_floored::<T>(1e-9, 64.0),
    );

    // The splitting projection must be a projection and must match the
    // element: for the clean kind it is the right projection of the summand,
    // for the almost-star kind the complement of the left projection of T.
    let split_valid = (&(cert.split_projection.matrix() * cert.split_projection.matrix())
        - cert.split_projection.matrix())
    .frobenius_norm();
    push("split_projection_valid", split_valid, profile.projection_tol);
    match cert.kind {
        CertificateKind::CleanIdempotent => {
            let rp = right_projection(p, profile);
            push(
                "split_is_right_projection",
                (rp.matrix() - cert.split_projection.matrix()).frobenius_norm(),
                T::of(10.0) * profile.projection_tol,
            );
        }
        CertificateKind::AlmostStarProjection => {
            let e = left_projection(t, profile).complement();
            push(
                "split_is_left_complement",
                (e.matrix() - cert.split_projection.matrix()).frobenius_norm(),
                T::of(10.0) * profile.projection_tol,
            );
        }
    }

    let lambda_fresh = match cert.kind {
        CertificateKind::CleanIdempotent => {
            let e_mat = cert.split_projection.matrix();
            let ec = &identity - e_mat;
            let scale = operator_norm(&t_minus_p);
            let f1 = left_projection_scaled(&(&t_minus_p * e_mat), profile, scale);
            let f2 = left_projection_scaled(&(&t_minus_p * &ec), profile, scale);
            operator_norm(&(f1.matrix() * f2.matrix()))
        }
        CertificateKind::AlmostStarProjection => {
            let rt = right_projection(t, profile);
            operator_norm(&(p * rt.matrix()))
        }
    };
    push(
        "lambda_consistent",
        (lambda_fresh - cert.lambda).abs(),
        eps_floored::<T>(1e-8, 64.0),
    );

    let passed = checks.iter().all(|c| c.passed);
    VerificationReport { checks, passed }
}
