//! Two-projections analysis.
//!
//! Splits a pair of projections `(E, F)` into the four corner meets plus a
//! generic part carried by canonical matrix units `E_ij` and a positive
//! contraction `H`, recovers the exact inverse-norm law for `E - F` on the
//! join, and builds the averaged projection `P_0` whose distance to `F^perp`
//! is exactly `1/sqrt(2)` away from the degenerate cases.
//!
//! The classification is spectral: the singular values `sigma_i` of `E F`
//! give principal-direction pairs `(x_i, y_i)` with weights `h_i =
//! sigma_i^2`. Weights within a machine-scale band of 1 are folded into the
//! meet, singular values below the rank cutoff into the corner parts, and
//! the rest form the generic part in ascending weight order. The strict
//! generic-position gate at `generic_tol` is enforced by [`halmos_units`].

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{operator_norm, svd};
use crate::lattice::{PartialIsometry, Projection};
use crate::matrix::{outer, outer_sum, vec_norm, ComplexMatrix};
use crate::scalar::Real;
use crate::tolerance::ToleranceProfile;

/// Five-part decomposition of a projection pair.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct PairDecomposition<T: Real> {
    pub meet_ef: Projection<T>,
    pub meet_efp: Projection<T>,
    pub meet_epf: Projection<T>,
    pub meet_epfp: Projection<T>,
    /// The generic unit `I_0`, the join of the two generic halves.
    pub generic_unit: Projection<T>,
    pub e11: ComplexMatrix<T>,
    pub e12: ComplexMatrix<T>,
    pub e21: ComplexMatrix<T>,
    pub e22: ComplexMatrix<T>,
    /// Positive contraction supported on `I_0`, commuting with the matrix
    /// units; its spectrum on the generic part lies strictly inside `(0, 1)`.
    pub h: ComplexMatrix<T>,
    #[serde(skip_serializing)]
    gen_h: Vec<T>,
    #[serde(skip_serializing)]
    gen_x: Vec<Vec<Complex<T>>>,
    #[serde(skip_serializing)]
    gen_v: Vec<Vec<Complex<T>>>,
}

impl<T: Real> PairDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.e11.dim()
    }

    /// Generic-part weights in ascending order.
    pub fn generic_weights(&self) -> &[T] {
        &self.gen_h
    }

    /// Generic-part spectral data `(h_i, x_i, v_i)` in ascending weight
    /// order; `x_i` spans the `E`-side of block `i`, `v_i` the orthogonal
    /// complement inside the block.
    pub fn generic_triples(
        &self,
    ) -> impl Iterator<Item = (T, &Vec<Complex<T>>, &Vec<Complex<T>>)> {
        self.gen_h
            .iter()
            .zip(self.gen_x.iter())
            .zip(self.gen_v.iter())
            .map(|((&h, x), v)| (h, x, v))
    }

    /// `sqrt(H (I_0 - H))`, the off-diagonal coupling of the generic part.
    pub fn coupling(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (i, &h) in self.gen_h.iter().enumerate() {
            let w = (h * (T::one() - h)).sqrt();
            out = &out
                + &(&outer_sum(n, &[self.gen_x[i].clone()])
                    + &outer_sum(n, &[self.gen_v[i].clone()]))
                    .scale_re(w);
        }
        out
    }

    /// The generic half `P = E - E^F - E^F^perp` (equals `E11`).
    pub fn generic_p(&self) -> ComplexMatrix<T> {
        self.e11.clone()
    }

    /// The generic half `Q = F - E^F - E^perp^F`, reconstructed from the
    /// canonical form.
    pub fn generic_q(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (i, &h) in self.gen_h.iter().enumerate() {
            let sh = h.sqrt();
            let ch = (T::one() - h).sqrt();
            let q: Vec<Complex<T>> = self.gen_x[i]
                .iter()
                .zip(self.gen_v[i].iter())
                .map(|(x, v)| x.scale(sh) + v.scale(ch))
                .collect();
            out = &out + &outer(&q, &q);
        }
        out
    }

    /// `E = E11 + E^F + E^F^perp`.
    pub fn reconstruct_e(&self) -> ComplexMatrix<T> {
        &(&self.e11 + self.meet_ef.matrix()) + self.meet_efp.matrix()
    }

    /// `F = E11 H + (E12 + E21) sqrt(H (I_0 - H)) + E22 (I_0 - H)
    ///      + E^F + E^perp^F`.
    pub fn reconstruct_f(&self) -> ComplexMatrix<T> {
        &(&self.generic_q() + self.meet_ef.matrix()) + self.meet_epf.matrix()
    }
}

fn gaussian_fold_error(dim: usize) -> String {
    format!(
        "pair reconstruction exceeded the tolerance budget in dimension {dim}; \
         the pair has principal angles inside the classification band"
    )
}

/// Decomposes a projection pair into corner meets plus the canonical generic
/// part.
pub fn decompose_pair<T: Real>(
    e: &Projection<T>,
    f: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<PairDecomposition<T>> {
    e.matrix().same_dim(f.matrix())?;
    let dim = e.dim();
    let product = e.matrix() * f.matrix();
    let s = svd(&product);
    let sigma_max = s.singular_values[0];
    // Projections have operator norm at most 1, so the singular-value floor
    // is taken relative to that context scale; a product made entirely of
    // rounding debris must not set its own scale.
    let sigma_floor = profile.rank_cutoff_rel * sigma_max.max(T::one());

    // A true meet direction measures h = 1 up to a few epsilon of spectral
    // noise; a genuinely small angle measures h strictly below that. Folding
    // a genuine angle into the meet costs sqrt(1 - h) in orthogonality, so
    // the fold band must stay at machine scale. (The strict generic-position
    // gate at `generic_tol` lives in [`halmos_units`].)
    let meet_band = T::epsilon() * T::of(64.0 * dim as f64);

    let mut meet_cols_x: Vec<Vec<Complex<T>>> = Vec::new();
    let mut meet_cols_y: Vec<Vec<Complex<T>>> = Vec::new();
    let mut gen: Vec<(T, Vec<Complex<T>>, Vec<Complex<T>>)> = Vec::new();

    for (k, &sigma) in s.singular_values.iter().enumerate() {
        if sigma_max <= T::zero() || sigma <= sigma_floor {
            // Below the singular-value floor the direction belongs to the
            // corner parts: its x-side stays inside E minus the retained
            // span, its y-side inside F minus the retained span.
            continue;
        }
        let h = (sigma * sigma).min(T::one());
        if h >= T::one() - meet_band {
            meet_cols_x.push(s.u.column(k));
            meet_cols_y.push(s.v.column(k));
        } else {
            gen.push((h, s.u.column(k), s.v.column(k)));
        }
    }

    gen.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite weights"));

    let mut gen_h = Vec::with_capacity(gen.len());
    let mut gen_x = Vec::with_capacity(gen.len());
    let mut gen_v = Vec::with_capacity(gen.len());
    for (h, x, y) in gen {
        let denom = (T::one() - h).sqrt();
        let sigma = h.sqrt();
        let v: Vec<Complex<T>> = y
            .iter()
            .zip(x.iter())
            .map(|(yi, xi)| (yi - &xi.scale(sigma)).unscale(denom))
            .collect();
        // The theory gives unit vectors; renormalize to remove rounding
        // drift.
        let n = vec_norm(&v);
        let v: Vec<Complex<T>> = v.into_iter().map(|z| z.unscale(n)).collect();
        gen_h.push(h);
        gen_x.push(x);
        gen_v.push(v);
    }

    let g = gen_h.len();
    let retained_x: Vec<Vec<Complex<T>>> = meet_cols_x
        .iter()
        .chain(gen_x.iter())
        .cloned()
        .collect();
    // y-side retained columns: the meet y's plus the reconstructed generic
    // y's (sqrt(h) x + sqrt(1-h) v).
    let mut retained_y = meet_cols_y.clone();
    for (i, &h) in gen_h.iter().enumerate() {
        let sh = h.sqrt();
        let ch = (T::one() - h).sqrt();
        let y: Vec<Complex<T>> = gen_x[i]
            .iter()
            .zip(gen_v[i].iter())
            .map(|(x, v)| x.scale(sh) + v.scale(ch))
            .collect();
        retained_y.push(y);
    }

    let meet_ef = Projection::from_orthonormal_columns(dim, &meet_cols_x);

    let meet_efp_rank = e
        .rank()
        .checked_sub(meet_cols_x.len() + g)
        .ok_or_else(|| Error::InternalInvariantViolation {
            detail: "retained directions exceed the rank of E".into(),
        })?;
    let meet_epf_rank = f
        .rank()
        .checked_sub(meet_cols_y.len() + g)
        .ok_or_else(|| Error::InternalInvariantViolation {
            detail: "retained directions exceed the rank of F".into(),
        })?;

    let meet_efp_mat = e.matrix() - &outer_sum(dim, &retained_x);
    let meet_efp = Projection::with_known_rank(meet_efp_mat, meet_efp_rank, profile)?;
    let meet_epf_mat = f.matrix() - &outer_sum(dim, &retained_y);
    let meet_epf = Projection::with_known_rank(meet_epf_mat, meet_epf_rank, profile)?;

    let e11 = outer_sum(dim, &gen_x);
    let e22 = outer_sum(dim, &gen_v);
    let mut e12 = ComplexMatrix::zeros(dim);
    for i in 0..g {
        e12 = &e12 + &outer(&gen_x[i], &gen_v[i]);
    }
    let e21 = e12.adjoint();
    let mut h_mat = ComplexMatrix::zeros(dim);
    for (i, &h) in gen_h.iter().enumerate() {
        h_mat = &h_mat
            + &(&outer_sum(dim, &[gen_x[i].clone()]) + &outer_sum(dim, &[gen_v[i].clone()]))
                .scale_re(h);
    }
    let generic_cols: Vec<Vec<Complex<T>>> =
        gen_x.iter().chain(gen_v.iter()).cloned().collect();
    let generic_unit = Projection::from_orthonormal_columns(dim, &generic_cols);

    let meet_epfp_rank = dim - meet_ef.rank() - meet_efp_rank - meet_epf_rank - 2 * g;
    let meet_epfp_mat = &(&(&(&ComplexMatrix::identity(dim) - meet_ef.matrix())
        - meet_efp.matrix())
        - meet_epf.matrix())
        - generic_unit.matrix();
    let meet_epfp = Projection::with_known_rank(meet_epfp_mat, meet_epfp_rank, profile)?;

    let pd = PairDecomposition {
        meet_ef,
        meet_efp,
        meet_epf,
        meet_epfp,
        generic_unit,
        e11,
        e12,
        e21,
        e22,
        h: h_mat,
        gen_h,
        gen_x,
        gen_v,
    };

    let budget = T::of(dim as f64) * T::of(1e-10).max(T::epsilon() * T::of(1e4));
    let re = (&pd.reconstruct_e() - e.matrix()).frobenius_norm();
    let rf = (&pd.reconstruct_f() - f.matrix()).frobenius_norm();
    if re > budget || rf > budget {
        return Err(Error::InternalInvariantViolation {
            detail: gaussian_fold_error(dim),
        });
    }
    Ok(pd)
}

/// Canonical matrix units and positive contraction for a pair in generic
/// position on the full space.
pub fn halmos_units<T: Real>(
    p: &Projection<T>,
    q: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<(
    ComplexMatrix<T>,
    ComplexMatrix<T>,
    ComplexMatrix<T>,
    ComplexMatrix<T>,
    ComplexMatrix<T>,
)> {
    let pd = decompose_pair(p, q, profile)?;
    let meets = [
        ("E^F", pd.meet_ef.rank()),
        ("E^F_perp", pd.meet_efp.rank()),
        ("E_perp^F", pd.meet_epf.rank()),
        ("E_perp^F_perp", pd.meet_epfp.rank()),
    ];
    if meets.iter().any(|(_, r)| *r > 0) {
        return Err(Error::NotGenericPosition {
            detail: format!(
                "nonzero corner meets: {:?}",
                meets.iter().filter(|(_, r)| *r > 0).collect::<Vec<_>>()
            ),
        });
    }
    if p.rank() * 2 != p.dim() {
        return Err(Error::NotGenericPosition {
            detail: format!(
                "rank {} of the first projection is not half the dimension {}",
                p.rank(),
                p.dim()
            ),
        });
    }
    // Strict generic position: the spectrum of H must stay clear of 0 and 1
    // by the classification band.
    for &h in pd.generic_weights() {
        if h <= profile.generic_tol || h >= T::one() - profile.generic_tol {
            return Err(Error::NotGenericPosition {
                detail: format!(
                    "spectral weight {} lies outside ({}, {})",
                    h.as_f64(),
                    profile.generic_tol.as_f64(),
                    (T::one() - profile.generic_tol).as_f64()
                ),
            });
        }
    }
    Ok((pd.e11, pd.e12, pd.e21, pd.e22, pd.h))
}

/// Inverse of `E - F` on the join, with the exact norm law
/// `||(E - F)^{-1}|_join|| = (1 - ||E F||^2)^{-1/2}`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct DifferenceInverseCertificate<T: Real> {
    pub inverse_on_join: ComplexMatrix<T>,
    pub norm_value: T,
    pub ef_norm: T,
}

pub fn difference_inverse<T: Real>(
    e: &Projection<T>,
    f: &Projection<T>,
    profile: &ToleranceProfile<T>,
) -> Result<DifferenceInverseCertificate<T>> {
    let pd = decompose_pair(e, f, profile)?;
    if pd.meet_ef.rank() > 0 {
        return Err(Error::NotInvertibleDifference {
            detail: format!(
                "meet of the pair has rank {} (rank E + rank F = {} exceeds the join rank {})",
                pd.meet_ef.rank(),
                e.rank() + f.rank(),
                e.rank() + f.rank() - 2 * pd.meet_ef.rank()
            ),
        });
    }
    // (P - Q)^{-1} on the generic part, plus the corner signs.
    let mut x = &pd.e11 - &pd.e22;
    for (i, &h) in pd.gen_h.iter().enumerate() {
        let w = (h / (T::one() - h)).sqrt();
        let cross = &outer(&pd.gen_x[i], &pd.gen_v[i]) + &outer(&pd.gen_v[i], &pd.gen_x[i]);
        x = &x - &cross.scale_re(w);
    }
    x = &(&x + pd.meet_efp.matrix()) - pd.meet_epf.matrix();

    let ef_norm = operator_norm(&(e.matrix() * f.matrix()));
    let norm_value = operator_norm(&x);
    let join_rank = e.rank() + f.rank();
    if join_rank > 0 {
        let closed = (T::one() - ef_norm * ef_norm).powf(-T::of(0.5));
        let rel = ((norm_value - closed) / closed).abs();
        if rel > T::of(1e-8).max(T::epsilon() * T::of(256.0)) {
            return Err(Error::InternalInvariantViolation {
                detail: format!(
                    "inverse norm {} deviates from the closed form {} by relative {}",
                    norm_value.as_f64(),
                    closed.as_f64(),
                    rel.as_f64()
                ),
            });
        }
    }
    Ok(DifferenceInverseCertificate {
        inverse_on_join: x,
        norm_value,
        ef_norm,
    })
}

/// The averaged projection
/// `P_0 = (I_0 + i E21 - i E12)/2 + E^F + (E^F_perp + E_perp^F + U + U^*)/2`
/// built from a witness `U` of `E^F_perp ~ E_perp^F`.
pub fn build_p0<T: Real>(
    e: &Projection<T>,
    f: &Projection<T>,
    u: &PartialIsometry<T>,
    profile: &ToleranceProfile<T>,
) -> Result<Projection<T>> {
    let pd = decompose_pair(e, f, profile)?;
    let ri = (u.initial.matrix() - pd.meet_efp.matrix()).frobenius_norm();
    let rf = (u.final_.matrix() - pd.meet_epf.matrix()).frobenius_norm();
    if ri > profile.projection_tol || rf > profile.projection_tol {
        return Err(Error::WitnessMismatch {
            initial: ri.as_f64(),
            final_: rf.as_f64(),
        });
    }
    let half = T::of(0.5);
    let i_unit = Complex::new(T::zero(), T::one());
    let rotation_part = &(pd.generic_unit.matrix() + &pd.e21.scale(i_unit))
        - &pd.e12.scale(i_unit);
    let corner_part = &(&(pd.meet_efp.matrix() + pd.meet_epf.matrix()) + &u.matrix)
        + &u.matrix.adjoint();
    let p0 = &(&rotation_part.scale_re(half) + pd.meet_ef.matrix()) + &corner_part.scale_re(half);
    Projection::try_new(p0, profile)
}
