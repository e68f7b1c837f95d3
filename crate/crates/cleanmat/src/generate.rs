//! Deterministic random-instance generators.
//!
//! Every generator is a pure function of `(kind, dim, seed)`; the campaign
//! derives per-trial seeds with [`crate::rng::derive_seed`], so any failing
//! instance is exactly reproducible from its dump.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Projection;
use crate::matrix::{inner, vec_norm, ComplexMatrix};
use crate::rng::SplitMix64;
use crate::scalar::Real;

/// Instance generator kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Ginibre,
    HaarUnitaryScaled,
    Nilpotent,
    RankDeficient,
    Hermitian,
    NearHalfNorm,
    Block,
}

pub const ALL_GENERATORS: [Generator; 7] = [
    Generator::Ginibre,
    Generator::HaarUnitaryScaled,
    Generator::Nilpotent,
    Generator::RankDeficient,
    Generator::Hermitian,
    Generator::NearHalfNorm,
    Generator::Block,
];

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Ginibre => "ginibre",
            Generator::HaarUnitaryScaled => "haar_unitary_scaled",
            Generator::Nilpotent => "nilpotent",
            Generator::RankDeficient => "rank_deficient",
            Generator::Hermitian => "hermitian",
            Generator::NearHalfNorm => "near_half_norm",
            Generator::Block => "block",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        ALL_GENERATORS
            .iter()
            .copied()
            .find(|g| g.name() == name)
            .ok_or_else(|| Error::UnknownGenerator { name: name.into() })
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn complex_gaussian<T: Real>(rng: &mut SplitMix64) -> Complex<T> {
    let (a, b) = rng.next_gaussian_pair();
    Complex::new(T::of(a), T::of(b)).unscale(T::of(2.0).sqrt())
}

/// Square matrix of iid standard complex Gaussians.
pub fn ginibre<T: Real>(dim: usize, rng: &mut SplitMix64) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng)).expect("finite by construction")
}

/// Haar-distributed unitary: Gram-Schmidt of a Ginibre draw with the
/// positive-diagonal normalization.
pub fn haar_unitary<T: Real>(dim: usize, rng: &mut SplitMix64) -> ComplexMatrix<T> {
    let g = ginibre::<T>(dim, rng);
    let mut cols: Vec<Vec<Complex<T>>> = (0..dim).map(|j| g.column(j)).collect();
    for j in 0..dim {
        // Two orthogonalization passes keep the basis orthonormal to
        // working precision even for unlucky draws.
        for _ in 0..2 {
            for k in 0..j {
                let overlap = inner(&cols[k], &cols[j]);
                for i in 0..dim {
                    cols[j][i] = cols[j][i] - cols[k][i] * overlap;
                }
            }
        }
        let n = vec_norm(&cols[j]);
        for z in cols[j].iter_mut() {
            *z = z.unscale(n);
        }
    }
    let mut out = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        out.set_column(j, col);
    }
    out
}

/// Deterministic instance for `(kind, dim, seed)`.
///
/// `rank_deficient` draws its rank uniformly from `0..dim`;
/// `near_half_norm` rescales a Ginibre draw so its operator norm lies in
/// `{1/2 - 1e-9, 1/2, 1/2 + 1e-9}`, the target cycling with `seed % 3`;
/// `block` returns the dense embedding of a random block partition.
pub fn generate<T: Real>(kind: Generator, dim: usize, seed: u64) -> Result<ComplexMatrix<T>> {
    if dim == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut rng = SplitMix64::new(seed);
    let m = match kind {
        Generator::Ginibre => ginibre(dim, &mut rng),
        Generator::HaarUnitaryScaled => haar_unitary(dim, &mut rng),
        Generator::Nilpotent => ComplexMatrix::from_fn(dim, |i, j| {
            if j > i {
                complex_gaussian(&mut rng)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .expect("finite by construction"),
        Generator::RankDeficient => {
            let r = rng.next_below(dim);
            let u = haar_unitary::<T>(dim, &mut rng);
            let v = haar_unitary::<T>(dim, &mut rng);
            let mut diag = vec![Complex::new(T::zero(), T::zero()); dim];
            for d in diag.iter_mut().take(r) {
                *d = Complex::new(T::one(), T::zero());
            }
            &(&u * &ComplexMatrix::diag(&diag)) * &v.adjoint()
        }
        Generator::Hermitian => {
            let g = ginibre::<T>(dim, &mut rng);
            (&g + &g.adjoint()).scale_re(T::of(0.5))
        }
        Generator::NearHalfNorm => {
            let g = ginibre::<T>(dim, &mut rng);
            let targets = [0.5 - 1e-9, 0.5, 0.5 + 1e-9];
            let target = T::of(targets[(seed % 3) as usize]);
            let norm = crate::kernel::operator_norm(&g);
            if norm.is_zero() {
                g
            } else {
                g.scale_re(target / norm)
            }
        }
        Generator::Block => generate_block(dim, seed)?.to_dense(),
    };
    Ok(m)
}

/// Random block partition of `dim` (pieces of size 1 to 4) filled with
/// Ginibre blocks.
pub fn generate_block<T: Real>(dim: usize, seed: u64) -> Result<crate::block::BlockOperator<T>> {
    if dim == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut rng = SplitMix64::new(seed);
    let mut remaining = dim;
    let mut blocks = Vec::new();
    while remaining > 0 {
        let size = 1 + rng.next_below(remaining.min(4));
        blocks.push(ginibre::<T>(size, &mut rng));
        remaining -= size;
    }
    crate::block::BlockOperator::new(blocks)
}

/// Haar-random projection of the given rank.
pub fn generate_projection<T: Real>(dim: usize, rank: usize, rng: &mut SplitMix64) -> Projection<T> {
    assert!(rank <= dim);
    if rank == 0 {
        return Projection::zero(dim);
    }
    let u = haar_unitary::<T>(dim, rng);
    let cols: Vec<Vec<Complex<T>>> = (0..rank).map(|j| u.column(j)).collect();
    Projection::from_orthonormal_columns(dim, &cols)
}

/// Styles of projection pairs exercised by the property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStyle {
    /// Two diagonal 0/1 patterns in a common Haar eigenbasis.
    Commuting,
    /// A pattern and a sub-pattern of it, sharing a Haar eigenbasis.
    Nested,
    /// Two independent Haar-random ranges.
    Haar,
}

/// Deterministic projection pair of the given style.
pub fn generate_projection_pair<T: Real>(
    style: PairStyle,
    dim: usize,
    seed: u64,
) -> (Projection<T>, Projection<T>) {
    let mut rng = SplitMix64::new(seed);
    match style {
        PairStyle::Commuting => {
            let u = haar_unitary::<T>(dim, &mut rng);
            let mut cols_e = Vec::new();
            let mut cols_f = Vec::new();
            for j in 0..dim {
                if rng.next_below(2) == 1 {
                    cols_e.push(u.column(j));
                }
                if rng.next_below(2) == 1 {
                    cols_f.push(u.column(j));
                }
            }
            (
                Projection::from_orthonormal_columns(dim, &cols_e),
                Projection::from_orthonormal_columns(dim, &cols_f),
            )
        }
        PairStyle::Nested => {
            let u = haar_unitary::<T>(dim, &mut rng);
            let big = 1 + rng.next_below(dim);
            let small = rng.next_below(big + 1);
            let cols_big: Vec<_> = (0..big).map(|j| u.column(j)).collect();
            let cols_small: Vec<_> = (0..small).map(|j| u.column(j)).collect();
            (
                Projection::from_orthonormal_columns(dim, &cols_small),
                Projection::from_orthonormal_columns(dim, &cols_big),
            )
        }
        PairStyle::Haar => {
            let re = rng.next_below(dim + 1);
            let rf = rng.next_below(dim + 1);
            let e = generate_projection(dim, re, &mut rng);
            let f = generate_projection(dim, rf, &mut rng);
            (e, f)
        }
    }
}
