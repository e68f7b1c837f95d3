//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of a working copy are orthogonalized by complex plane rotations
//! from the right; singular values are then column norms, which preserves
//! the relative accuracy of small singular values. Outputs are made
//! deterministic by sorting descending (ties by original column index) and
//! by phase normalization of the singular vector pairs.

use num_complex::Complex;

use crate::kernel::jacobi::{phase_factor, rotation};
use crate::matrix::{inner, vec_norm, ComplexMatrix};
use crate::scalar::Real;
use crate::tolerance::ToleranceProfile;

/// `M = U diag(sigma) V^*` with square unitary `U`, `V` and descending
/// `sigma`.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub u: ComplexMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    /// Number of singular values above `rank_cutoff_rel * sigma_max`.
    pub fn rank(&self, profile: &ToleranceProfile<T>) -> usize {
        self.rank_with_floor(profile, T::zero())
    }

    /// Rank with the cutoff taken relative to `max(sigma_max, floor)`.
    ///
    /// Products like `T * P` with `P` a computed projection carry rounding
    /// debris of size `eps * ||T||` even when they vanish exactly in the
    /// algebra; passing `||T||` as the floor keeps such debris below the
    /// cutoff instead of letting it set the scale.
    pub fn rank_with_floor(&self, profile: &ToleranceProfile<T>, floor: T) -> usize {
        let top = self.singular_values[0].max(floor);
        if top <= T::zero() {
            return 0;
        }
        let cutoff = profile.rank_cutoff_rel * top;
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    /// First `count` columns of `U` (an orthonormal basis of the range when
    /// `count` is the rank).
    pub fn left_columns(&self, count: usize) -> Vec<Vec<Complex<T>>> {
        (0..count).map(|j| self.u.column(j)).collect()
    }

    /// First `count` columns of `V` (an orthonormal basis of the range of
    /// `M^*` when `count` is the rank).
    pub fn right_columns(&self, count: usize) -> Vec<Vec<Complex<T>>> {
        (0..count).map(|j| self.v.column(j)).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.u.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &s) in self.singular_values.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let uk = self.u.column(k);
            let vk = self.v.column(k);
            for i in 0..n {
                for j in 0..n {
                    let v = out.get(i, j) + uk[i] * vk[j].conj() * Complex::new(s, T::zero());
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

const MAX_SWEEPS: usize = 60;

/// One-sided Jacobi SVD. Always succeeds on a valid matrix.
pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Svd<T> {
    let n = m.dim();
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| m.column(j)).collect();
    let mut v = ComplexMatrix::identity(n);

    // Relative convergence threshold; the factor absorbs accumulation error
    // in the inner products so the sweep loop cannot livelock.
    let conv = T::epsilon() * T::of(4.0 * n as f64);
    // Columns whose norm falls this far below the largest column are noise
    // squared away by earlier rotations; they are retired to the kernel
    // instead of being polished into the underflow range.
    let col_scale = cols.iter().map(|c| vec_norm(c)).fold(T::zero(), T::max);
    let noise_floor = (col_scale * T::epsilon() * T::epsilon())
        .max(T::min_positive_value().sqrt());

    if n > 1 {
        for _ in 0..MAX_SWEEPS {
            let mut converged = true;
            for i in 0..n {
                for j in (i + 1)..n {
                    let a = vec_norm(&cols[i]);
                    let b = vec_norm(&cols[j]);
                    if a <= noise_floor || b <= noise_floor {
                        continue;
                    }
                    let c = inner(&cols[i], &cols[j]);
                    if c.norm() <= conv * a * b {
                        continue;
                    }
                    converged = false;
                    let (ct, st, omega, _) = rotation(a * a, b * b, c);
                    let cc = Complex::new(ct, T::zero());
                    let sc = Complex::new(st, T::zero());
                    for r in 0..n {
                        let bi = cols[i][r];
                        let bj = cols[j][r];
                        cols[i][r] = omega * cc * bi - sc * bj;
                        cols[j][r] = omega * sc * bi + cc * bj;
                    }
                    for r in 0..n {
                        let vi = v.get(r, i);
                        let vj = v.get(r, j);
                        v.set(r, i, omega * cc * vi - sc * vj);
                        v.set(r, j, omega * sc * vi + cc * vj);
                    }
                }
            }
            if converged {
                break;
            }
        }
    }

    let sigmas: Vec<T> = cols.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        sigmas[j]
            .partial_cmp(&sigmas[i])
            .expect("finite singular values")
            .then(i.cmp(&j))
    });

    // Below the noise floor a column is treated as exactly zero and its
    // left singular vector comes from the basis completion.
    let zero_floor = noise_floor;

    let mut u = ComplexMatrix::zeros(n);
    let mut v_sorted = ComplexMatrix::zeros(n);
    let mut singular_values = Vec::with_capacity(n);
    let mut filled: Vec<Vec<Complex<T>>> = Vec::new();
    let mut kernel_slots = Vec::new();

    for (slot, &src) in order.iter().enumerate() {
        let s = sigmas[src];
        let mut vcol = v.column(src);
        if s > zero_floor {
            let mut ucol: Vec<Complex<T>> =
                cols[src].iter().map(|z| z.unscale(s)).collect();
            let factor = phase_factor(&ucol);
            for z in ucol.iter_mut() {
                *z = *z * factor;
            }
            for z in vcol.iter_mut() {
                *z = *z * factor;
            }
            u.set_column(slot, &ucol);
            filled.push(ucol);
            singular_values.push(s);
        } else {
            kernel_slots.push(slot);
            singular_values.push(T::zero());
            let factor = phase_factor(&vcol);
            for z in vcol.iter_mut() {
                *z = *z * factor;
            }
        }
        v_sorted.set_column(slot, &vcol);
    }

    // Complete U to a unitary: greedily extend by the standard basis vector
    // with the largest residual against the columns already present.
    for slot in kernel_slots {
        let mut best: Option<(T, usize, Vec<Complex<T>>)> = None;
        for t in 0..n {
            let mut cand = vec![Complex::new(T::zero(), T::zero()); n];
            cand[t] = Complex::new(T::one(), T::zero());
            for f in &filled {
                let overlap = inner(f, &cand);
                for r in 0..n {
                    cand[r] = cand[r] - f[r] * overlap;
                }
            }
            let norm = vec_norm(&cand);
            if best.as_ref().map_or(true, |(bn, _, _)| norm > *bn) {
                best = Some((norm, t, cand));
            }
        }
        let (_, _, mut col) = best.expect("dimension is positive");
        // Re-orthogonalize once more for stability, then normalize.
        for f in &filled {
            let overlap = inner(f, &col);
            for r in 0..n {
                col[r] = col[r] - f[r] * overlap;
            }
        }
        let norm = vec_norm(&col);
        for z in col.iter_mut() {
            *z = z.unscale(norm);
        }
        let factor = phase_factor(&col);
        for z in col.iter_mut() {
            *z = *z * factor;
        }
        u.set_column(slot, &col);
        filled.push(col);
    }

    Svd {
        u,
        singular_values,
        v: v_sorted,
    }
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    svd(m).singular_values[0]
}

/// Smallest singular value.
pub fn smallest_singular_value<T: Real>(m: &ComplexMatrix<T>) -> T {
    *svd(m).singular_values.last().expect("dimension is positive")
}

/// Thresholded rank under the profile's cutoff rule.
pub fn rank<T: Real>(m: &ComplexMatrix<T>, profile: &ToleranceProfile<T>) -> usize {
    svd(m).rank(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn unitarity_residual(m: &M) -> f64 {
        let n = m.dim();
        (&(&m.adjoint() * m) - &M::identity(n)).frobenius_norm()
    }

    #[test]
    fn zero_matrix() {
        let z = M::zeros(3);
        let s = svd(&z);
        assert_eq!(s.singular_values, vec![0.0; 3]);
        assert_eq!(s.rank(&ToleranceProfile::for_dim(3)), 0);
        assert!(unitarity_residual(&s.u) < 1e-14);
        assert!(unitarity_residual(&s.v) < 1e-14);
    }

    #[test]
    fn nilpotent_shift_by_hand() {
        // [[0,1],[0,0]] has singular values (1, 0) and rank 1.
        let m = M::unit(2, 0, 1);
        let s = svd(&m);
        assert!((s.singular_values[0] - 1.0).abs() < 1e-15);
        assert!(s.singular_values[1].abs() < 1e-15);
        assert_eq!(s.rank(&ToleranceProfile::for_dim(2)), 1);
        assert!((s.reconstruct().get(0, 1) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn scaled_shift_norms() {
        let m = M::unit(2, 0, 1).scale_re(2.0);
        assert!((operator_norm(&m) - 2.0).abs() < 1e-14);
        assert!(smallest_singular_value(&m).abs() < 1e-14);
    }

    #[test]
    fn nonzero_projection_has_norm_one() {
        let h = 0.5;
        let m = M::from_rows(&[vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(h, 0.0)]]).unwrap();
        assert!((operator_norm(&m) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unitary_input_has_unit_singular_values() {
        // A rotation combined with a phase.
        let th = 0.7f64;
        let m = M::from_rows(&[
            vec![c(th.cos(), 0.0), c(-th.sin(), 0.0)],
            vec![c(0.0, th.sin()), c(0.0, th.cos())],
        ])
        .unwrap();
        let s = svd(&m);
        for sv in &s.singular_values {
            assert!((sv - 1.0).abs() < 1e-14);
        }
        assert!((operator_norm(&M::identity(4)) - 1.0).abs() < 1e-15);
        assert!((smallest_singular_value(&M::identity(4)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction_and_orthogonality() {
        for seed in 0..25u64 {
            let dim = 2 + (seed % 7) as usize;
            let mut rng = SplitMix64::new(400 + seed);
            let m = M::from_fn(dim, |_, _| {
                let (a, b) = rng.next_gaussian_pair();
                c(a, b)
            })
            .unwrap();
            let s = svd(&m);
            let resid = (&s.reconstruct() - &m).frobenius_norm();
            assert!(resid < 1e-13 * m.frobenius_norm(), "seed {seed}: {resid}");
            assert!(unitarity_residual(&s.u) < 1e-13);
            assert!(unitarity_residual(&s.v) < 1e-13);
            for w in s.singular_values.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn forced_rank_deficiency_detected() {
        // Build rank-2 out of dim-4 via two rank-one terms.
        let mut rng = SplitMix64::new(99);
        let dim = 4;
        let mut cols = Vec::new();
        for _ in 0..2 {
            let col: Vec<Complex<f64>> = (0..dim)
                .map(|_| {
                    let (a, b) = rng.next_gaussian_pair();
                    c(a, b)
                })
                .collect();
            cols.push(col);
        }
        let m = &crate::matrix::outer(&cols[0], &cols[1])
            .scale_re(1.0)
            + &crate::matrix::outer(&cols[1], &cols[0]);
        let s = svd(&m);
        assert_eq!(s.rank(&ToleranceProfile::for_dim(dim)), 2);
        assert!(s.singular_values[2] < 1e-13);
        assert!(unitarity_residual(&s.u) < 1e-13, "kernel completion must stay unitary");
    }

    #[test]
    fn operator_norm_matches_power_iteration_oracle() {
        // Independent oracle: power iteration on M^* M.
        for seed in 0..10u64 {
            let dim = 3 + (seed % 5) as usize;
            let mut rng = SplitMix64::new(7000 + seed);
            let m = M::from_fn(dim, |_, _| {
                let (a, b) = rng.next_gaussian_pair();
                c(a, b)
            })
            .unwrap();
            let mm = &m.adjoint() * &m;
            let mut x = vec![c(1.0, 0.0); dim];
            for _ in 0..2000 {
                let y = mm.apply(&x);
                let n = vec_norm(&y);
                x = y.iter().map(|z| z.unscale(n)).collect();
            }
            let lambda = inner(&x, &mm.apply(&x)).re;
            let oracle = lambda.max(0.0).sqrt();
            let measured = operator_norm(&m);
            assert!(
                (measured - oracle).abs() <= 1e-12 * oracle.max(1.0),
                "seed {seed}: {measured} vs {oracle}"
            );
        }
    }
}
