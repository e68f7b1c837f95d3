//! Dense square complex matrices.
//!
//! The ambient element of a matrix factor `M_n(C)`. Storage is row-major.
//! Rectangular data is rejected: the algebra is unital and square.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
#[derive(Serialize, Deserialize)]
#[serde(
    try_from = "MatrixRepr<T>",
    into = "MatrixRepr<T>",
    bound(serialize = "T: Real", deserialize = "T: Real")
)]
pub struct ComplexMatrix<T: Real> {
    dim: usize,
    data: Vec<Complex<T>>,
}

/// Wire format: `{"dim": n, "entries": [[re, im], ...]}` row-major, length n^2.
#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct MatrixRepr<T: Real> {
    dim: usize,
    entries: Vec<(T, T)>,
}

impl<T: Real> From<ComplexMatrix<T>> for MatrixRepr<T> {
    fn from(m: ComplexMatrix<T>) -> Self {
        MatrixRepr {
            dim: m.dim,
            entries: m.data.iter().map(|z| (z.re, z.im)).collect(),
        }
    }
}

impl<T: Real> TryFrom<MatrixRepr<T>> for ComplexMatrix<T> {
    type Error = Error;

    fn try_from(r: MatrixRepr<T>) -> Result<Self> {
        ComplexMatrix::new(
            r.dim,
            r.entries
                .into_iter()
                .map(|(re, im)| Complex::new(re, im))
                .collect(),
        )
    }
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major data, validating squareness and
    /// finiteness.
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        let m = ComplexMatrix { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self::new(dim, data)
    }

    /// All-zero matrix. Panics on `dim == 0`; use [`ComplexMatrix::new`] for
    /// fallible construction from external data.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        ComplexMatrix {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    pub fn diag(values: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    /// The matrix unit `e_{ij}` in `M_dim`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(i, j, Complex::new(T::one(), T::zero()));
        m
    }

    fn check_finite(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self.get(i, j);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|w| w * z).collect(),
        }
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim)
            .map(|i| self.get(i, i))
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Frobenius norm of `M - M^*`.
    pub fn hermitian_residual(&self) -> T {
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                let d = self.get(i, j) - self.get(j, i).conj();
                acc = acc + d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex<T>]) {
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, *v);
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim;
        assert_eq!(v.len(), n);
        let mut out = vec![Complex::new(T::zero(), T::zero()); n];
        for i in 0..n {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                acc = acc + self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Whether `self` and `other` have the same dimension.
    pub fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            })
        }
    }
}

impl<T: Real> std::ops::Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> std::ops::Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> std::ops::Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl<T: Real> std::ops::Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl<T: Real> std::fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix(dim = {})", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, " {:+.4}{:+.4}i", z.re.as_f64(), z.im.as_f64())?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Inner product `<a, b> = a^H b` of two vectors.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.conj() * y)
        .fold(Complex::new(T::zero(), T::zero()), |s, t| s + t)
}

/// Euclidean norm of a vector.
pub fn vec_norm<T: Real>(a: &[Complex<T>]) -> T {
    a.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |s, t| s + t)
        .sqrt()
}

/// Sum of rank-one terms `sum_i c_i c_i^H` over the given columns.
pub fn outer_sum<T: Real>(dim: usize, cols: &[Vec<Complex<T>>]) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::zeros(dim);
    for c in cols {
        assert_eq!(c.len(), dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = out.get(i, j) + c[i] * c[j].conj();
                out.set(i, j, v);
            }
        }
    }
    out
}

/// Rank-one matrix `a b^H`.
pub fn outer<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> ComplexMatrix<T> {
    let dim = a.len();
    assert_eq!(b.len(), dim);
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(i, j, a[i] * b[j].conj());
        }
    }
    out
}

/// Compression `B^H M B` of an `n x n` matrix to the span of `r` orthonormal
/// columns, returned as an `r x r` matrix. Returns `None` when the basis is
/// empty (the corner is the zero algebra).
pub fn compress<T: Real>(m: &ComplexMatrix<T>, basis: &[Vec<Complex<T>>]) -> Option<ComplexMatrix<T>> {
    let r = basis.len();
    if r == 0 {
        return None;
    }
    let mut out = ComplexMatrix::zeros(r);
    // mb[k] = M * basis[k]
    let mb: Vec<Vec<Complex<T>>> = basis.iter().map(|b| m.apply(b)).collect();
    for i in 0..r {
        for j in 0..r {
            out.set(i, j, inner(&basis[i], &mb[j]));
        }
    }
    Some(out)
}

/// Expansion `B X B^H` of an `r x r` matrix back to the full space.
pub fn expand<T: Real>(dim: usize, x: &ComplexMatrix<T>, basis: &[Vec<Complex<T>>]) -> ComplexMatrix<T> {
    let r = basis.len();
    assert_eq!(x.dim(), r);
    let mut out = ComplexMatrix::zeros(dim);
    for a in 0..r {
        for b in 0..r {
            let w = x.get(a, b);
            if w.re.is_zero() && w.im.is_zero() {
                continue;
            }
            for i in 0..dim {
                for j in 0..dim {
                    let v = out.get(i, j) + w * basis[a][i] * basis[b][j].conj();
                    out.set(i, j, v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn rejects_empty_and_rectangular() {
        assert!(matches!(M::new(0, vec![]), Err(Error::EmptyMatrix)));
        assert!(matches!(
            M::new(2, vec![c(1.0, 0.0); 3]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let bad = M::new(1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(bad, Err(Error::NonFiniteEntry { .. })));
        let bad = M::new(1, vec![c(0.0, f64::INFINITY)]);
        assert!(matches!(bad, Err(Error::NonFiniteEntry { .. })));
    }

    #[test]
    fn product_and_adjoint() {
        let a = M::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let aa = &a * &a.adjoint();
        assert_eq!(aa.get(0, 0), c(1.0, 0.0));
        assert_eq!(aa.get(1, 1), c(0.0, 0.0));
        let i2 = M::identity(2);
        assert_eq!((&a * &i2), a);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let a = M::from_rows(&[
            vec![c(0.5, -0.25), c(1.0, 2.0)],
            vec![c(-3.0, 0.125), c(0.0, 1.0)],
        ])
        .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"dim\":2"));
        assert!(s.contains("\"entries\":[[0.5,-0.25],[1.0,2.0],[-3.0,0.125],[0.0,1.0]]"));
        let b: M = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_rejects_bad_shapes() {
        let r: std::result::Result<M, _> =
            serde_json::from_str("{\"dim\":2,\"entries\":[[1.0,0.0]]}");
        assert!(r.is_err());
        let r: std::result::Result<M, _> = serde_json::from_str("{\"dim\":0,\"entries\":[]}");
        assert!(r.is_err());
    }

    #[test]
    fn compress_expand_round_trip_on_full_basis() {
        let a = M::from_rows(&[vec![c(1.0, 0.0), c(2.0, 1.0)], vec![c(2.0, -1.0), c(3.0, 0.0)]])
            .unwrap();
        let basis = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ];
        let compressed = compress(&a, &basis).unwrap();
        assert_eq!(compressed, a);
        let back = expand(2, &compressed, &basis);
        assert!( (&back - &a).frobenius_norm() < 1e-15 );
    }
}
