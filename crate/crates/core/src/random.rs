//! Seeded random test systems.
//!
//! Everything is driven by [`ChaCha8Rng`] so a seed reproduces the same
//! systems on every platform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::factorization::OrbitalSet;
use crate::linalg::CMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A Haar-like random unitary of size `n` (QR of a complex Gaussian matrix
/// with the diagonal phases of `R` removed).
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// `n` random orthonormal orbitals in a `dim`-dimensional space.
pub fn orbitals<R: Rng>(rng: &mut R, dim: usize, n: usize) -> OrbitalSet {
    let u = unitary(rng, dim);
    let rows = u.columns(0, n).transpose();
    OrbitalSet::new(rows).expect("columns of a unitary are orthonormal")
}

/// Random Hermitian matrix with Gaussian entries scaled by `scale`.
pub fn hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> CMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    (&g + g.adjoint()).scale(0.5 * scale)
}

/// A random non-empty proper subset of `0..dim` (or the single site when
/// `dim == 1`), sorted.
pub fn region_sites<R: Rng>(rng: &mut R, dim: usize) -> Vec<usize> {
    let size = if dim <= 1 {
        dim
    } else {
        rng.random_range(1..dim)
    };
    let mut sites = sample(rng, dim, size).into_vec();
    sites.sort_unstable();
    sites
}

/// Uniform occupation probabilities.
pub fn occupations<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random::<f64>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(1);
        let u = unitary(&mut r, 5);
        assert!(max_abs(&(u.adjoint() * &u - CMatrix::identity(5, 5))) < 1e-12);
    }

    #[test]
    fn seeds_reproduce() {
        let a = orbitals(&mut rng(9), 6, 3);
        let b = orbitals(&mut rng(9), 6, 3);
        assert_eq!(a, b);
        assert_eq!(region_sites(&mut rng(4), 7), region_sites(&mut rng(4), 7));
    }

    #[test]
    fn region_is_proper_subset() {
        let mut r = rng(3);
        for _ in 0..50 {
            let s = region_sites(&mut r, 5);
            assert!(!s.is_empty() && s.len() < 5);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
