//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::tolerance::ToleranceProfile;

/// Result of a Hermitian eigendecomposition `M = V diag(lambda) V^*`.
///
/// Eigenvalues are ascending; eigenvector columns are orthonormal and
/// phase-normalized (first component above `1/(4 sqrt(n))` in modulus is
/// real positive).
#[derive(Debug, Clone)]
pub struct HermitianEig<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEig<T> {
    /// Columns of the eigenvector matrix whose eigenvalue satisfies `keep`.
    pub fn select_columns(&self, keep: impl Fn(T) -> bool) -> Vec<Vec<Complex<T>>> {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &ev)| keep(ev))
            .map(|(j, _)| self.eigenvectors.column(j))
            .collect()
    }

    /// `V f(diag) V^*` for a scalar function of the eigenvalues.
    pub fn apply_fn(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.eigenvectors.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (j, &ev) in self.eigenvalues.iter().enumerate() {
            let w = f(ev);
            if w.is_zero() {
                continue;
            }
            let col = self.eigenvectors.column(j);
            for r in 0..n {
                for c in 0..n {
                    let v = out.get(r, c) + col[r] * col[c].conj() * Complex::new(w, T::zero());
                    out.set(r, c, v);
                }
            }
        }
        out
    }
}

/// One complex Jacobi rotation for the Hermitian 2x2 block
/// `[[alpha, gamma], [conj(gamma), beta]]`, `gamma = g * omega`, `|omega| = 1`.
///
/// Returns `(c, s, omega, t)` defining the unitary
/// `J = [[omega c, omega s], [-s, c]]` with `J^* G J` diagonal, and the
/// tangent `t` so the rotated diagonal is `(alpha - t g, beta + t g)`.
pub(crate) fn rotation<T: Real>(alpha: T, beta: T, gamma: Complex<T>) -> (T, T, Complex<T>, T) {
    let g = gamma.norm();
    // Componentwise division by the modulus; complex division would square
    // `g` and underflow for subnormal-scale entries.
    let omega = gamma.unscale(g);
    let tau = (beta - alpha) / (g + g);
    let t = if tau.is_zero() {
        T::one()
    } else if tau.abs() >= T::one() / T::epsilon() {
        // sqrt(1 + tau^2) == |tau| at working precision; avoids overflow of
        // the square.
        T::one() / (tau + tau)
    } else {
        let sign = if tau > T::zero() { T::one() } else { -T::one() };
        sign / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    (c, s, omega, t)
}

fn offdiag_frobenius<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut acc = T::zero();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc = acc + a.get(p, q).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Phase factor that makes the first component of `col` above
/// `1/(4 sqrt(n))` in modulus real positive. The column has unit norm, so
/// such a component always exists.
pub(crate) fn phase_factor<T: Real>(col: &[Complex<T>]) -> Complex<T> {
    let n = col.len();
    let pivot_floor = T::one() / (T::of(4.0) * T::of(n as f64).sqrt());
    for z in col {
        if z.norm() >= pivot_floor {
            return z.conj() / Complex::new(z.norm(), T::zero());
        }
    }
    Complex::new(T::one(), T::zero())
}

const MAX_SWEEPS: usize = 60;

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must satisfy `||M - M^*||_F <= projection_tol * ||M||_F`; the
/// Hermitian average `(M + M^*)/2` is then diagonalized.
pub fn hermitian_eig<T: Real>(
    m: &ComplexMatrix<T>,
    profile: &ToleranceProfile<T>,
) -> Result<HermitianEig<T>> {
    let n = m.dim();
    let norm = m.frobenius_norm();
    let herm_residual = m.hermitian_residual();
    if herm_residual > profile.projection_tol * norm {
        return Err(Error::NotHermitian {
            residual: herm_residual.as_f64(),
            tol: (profile.projection_tol * norm).as_f64(),
        });
    }

    // Hermitian average; removes the tolerated asymmetry before iterating.
    let mut a = ComplexMatrix::from_fn(n, |i, j| {
        (m.get(i, j) + m.get(j, i).conj()).unscale(T::of(2.0))
    })
    .expect("dimension already validated");
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let target = scale * T::epsilon() * T::of(n as f64);
    let skip = scale * T::epsilon() / T::of((n * n) as f64);

    for _ in 0..MAX_SWEEPS {
        if offdiag_frobenius(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a.get(p, q);
                if gamma.norm() <= skip {
                    continue;
                }
                let alpha = a.get(p, p).re;
                let beta = a.get(q, q).re;
                let (c, s, omega, t) = rotation(alpha, beta, gamma);
                let g = gamma.norm();
                let cc = Complex::new(c, T::zero());
                let sc = Complex::new(s, T::zero());

                // Row update (J^* from the left), then column update (J from
                // the right).
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, omega.conj() * cc * apj - sc * aqj);
                    a.set(q, j, omega.conj() * sc * apj + cc * aqj);
                }
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, omega * cc * aip - sc * aiq);
                    a.set(i, q, omega * sc * aip + cc * aiq);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, omega * cc * vip - sc * viq);
                    v.set(i, q, omega * sc * vip + cc * viq);
                }
                a.set(p, p, Complex::new(alpha - t * g, T::zero()));
                a.set(q, q, Complex::new(beta + t * g, T::zero()));
                a.set(p, q, Complex::new(T::zero(), T::zero()));
                a.set(q, p, Complex::new(T::zero(), T::zero()));
            }
        }
    }

    let raw: Vec<T> = (0..n).map(|i| a.get(i, i).re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        raw[i]
            .partial_cmp(&raw[j])
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });

    let eigenvalues: Vec<T> = order.iter().map(|&i| raw[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (slot, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        let factor = phase_factor(&col);
        for z in col.iter_mut() {
            *z = *z * factor;
        }
        eigenvectors.set_column(slot, &col);
    }

    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::inner;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn profile(dim: usize) -> ToleranceProfile<f64> {
        ToleranceProfile::for_dim(dim)
    }

    fn reconstruction_residual(m: &M, eig: &HermitianEig<f64>) -> f64 {
        let rebuilt = eig.apply_fn(|x| x);
        (&rebuilt - m).frobenius_norm()
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let m = M::diag(&[c(0.3, 0.0), c(0.7, 0.0)]);
        let eig = hermitian_eig(&m, &profile(2)).unwrap();
        assert!((eig.eigenvalues[0] - 0.3).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 0.7).abs() < 1e-15);
        assert!((&eig.eigenvectors - &M::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn exchange_symmetry() {
        let m = M::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let eig = hermitian_eig(&m, &profile(2)).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(reconstruction_residual(&m, &eig) < 1e-14);
    }

    #[test]
    fn complex_offdiagonal() {
        let m = M::from_rows(&[vec![c(0.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(0.0, 0.0)]])
            .unwrap();
        let eig = hermitian_eig(&m, &profile(2)).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(reconstruction_residual(&m, &eig) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        assert!(matches!(
            hermitian_eig(&m, &profile(2)),
            Err(Error::NotHermitian { .. })
        ));
    }

    /// Closed-form characteristic-polynomial oracle for 2x2 Hermitian
    /// matrices.
    fn eig2_oracle(m: &M) -> (f64, f64) {
        let a = m.get(0, 0).re;
        let d = m.get(1, 1).re;
        let b2 = m.get(0, 1).norm_sqr();
        let tr = a + d;
        let disc = ((a - d) * (a - d) + 4.0 * b2).sqrt();
        ((tr - disc) / 2.0, (tr + disc) / 2.0)
    }

    /// Cardano oracle for 3x3 Hermitian matrices.
    fn eig3_oracle(m: &M) -> [f64; 3] {
        // Characteristic polynomial x^3 - c2 x^2 + c1 x - c0.
        let a = m.get(0, 0).re;
        let b = m.get(1, 1).re;
        let cc = m.get(2, 2).re;
        let p = m.get(0, 1);
        let q = m.get(0, 2);
        let r = m.get(1, 2);
        let c2 = a + b + cc;
        let c1 = a * b + a * cc + b * cc - p.norm_sqr() - q.norm_sqr() - r.norm_sqr();
        let det = a * (b * cc - r.norm_sqr()) - (p.conj() * (p * cc - q * r.conj())).re
            + (q.conj() * (p * r - q * b)).re;
        // Shift to depressed cubic y^3 + py + q0 with x = y + c2/3.
        let shift = c2 / 3.0;
        let pp = c1 - c2 * c2 / 3.0;
        let qq = -det + c2 * c1 / 3.0 - 2.0 * c2 * c2 * c2 / 27.0;
        // All roots real for Hermitian input: trigonometric form.
        let m2 = (-pp / 3.0).max(0.0);
        let mrt = m2.sqrt();
        let arg = if mrt == 0.0 {
            0.0
        } else {
            (-qq / (2.0 * m2 * mrt)).clamp(-1.0, 1.0)
        };
        let theta = arg.acos() / 3.0;
        let mut roots = [
            shift + 2.0 * mrt * theta.cos(),
            shift + 2.0 * mrt * (theta - 2.0 * std::f64::consts::PI / 3.0).cos(),
            shift + 2.0 * mrt * (theta + 2.0 * std::f64::consts::PI / 3.0).cos(),
        ];
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        roots
    }

    fn splitmix_matrix(dim: usize, seed: u64, hermitian: bool) -> M {
        let mut rng = crate::rng::SplitMix64::new(seed);
        let g = M::from_fn(dim, |_, _| {
            let (x, y) = rng.next_gaussian_pair();
            c(x, y)
        })
        .unwrap();
        if hermitian {
            (&g + &g.adjoint()).scale_re(0.5)
        } else {
            g
        }
    }

    #[test]
    fn matches_characteristic_polynomial_roots() {
        for seed in 0..40u64 {
            let m2 = splitmix_matrix(2, 1000 + seed, true);
            let eig = hermitian_eig(&m2, &profile(2)).unwrap();
            let (l0, l1) = eig2_oracle(&m2);
            assert!((eig.eigenvalues[0] - l0).abs() < 1e-10 * (1.0 + l0.abs()));
            assert!((eig.eigenvalues[1] - l1).abs() < 1e-10 * (1.0 + l1.abs()));

            let m3 = splitmix_matrix(3, 2000 + seed, true);
            let eig = hermitian_eig(&m3, &profile(3)).unwrap();
            let oracle = eig3_oracle(&m3);
            for k in 0..3 {
                assert!(
                    (eig.eigenvalues[k] - oracle[k]).abs() < 1e-9 * (1.0 + oracle[k].abs()),
                    "seed {seed}: {:?} vs {:?}",
                    eig.eigenvalues,
                    oracle
                );
            }
        }
    }

    #[test]
    fn random_hermitian_reconstruction_and_orthonormality() {
        let dim = 5;
        let p = profile(dim);
        for seed in 0..20u64 {
            let m = splitmix_matrix(dim, 31 * seed + 7, true);
            let eig = hermitian_eig(&m, &p).unwrap();
            let bound = dim as f64 * p.rank_cutoff_rel * m.frobenius_norm().max(1.0);
            assert!(reconstruction_residual(&m, &eig) <= bound);
            for i in 0..dim {
                for j in 0..dim {
                    let d = inner(&eig.eigenvectors.column(i), &eig.eigenvectors.column(j));
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((d - c(expect, 0.0)).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn deterministic_across_calls() {
        let m = splitmix_matrix(6, 99, true);
        let p = profile(6);
        let e1 = hermitian_eig(&m, &p).unwrap();
        let e2 = hermitian_eig(&m, &p).unwrap();
        assert_eq!(e1.eigenvectors, e2.eigenvectors);
        assert_eq!(e1.eigenvalues, e2.eigenvalues);
    }
}
