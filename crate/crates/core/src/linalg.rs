//! Dense complex Hermitian helpers shared by the rest of the crate.
//!
//! Eigendecompositions are backed by `nalgebra`'s symmetric eigensolver. On
//! top of it this module fixes the output conventions the rest of the crate
//! relies on: eigenvalues are sorted in descending order, near-ties are broken
//! by the lexicographic order of the eigenvectors' real parts, and each
//! eigenvector's largest-magnitude entry is rotated to be real and positive.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues closer than this are treated as degenerate when ordering.
const TIE_TOLERANCE: f64 = 1e-12;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Sum in index order with compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

pub fn require_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Largest entry of `|m - m†|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

fn symmetrized(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// the columns of the second element, with the ordering and phase
/// conventions described in the module docs.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = symmetrized(m).symmetric_eigen();
    let mut columns: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|j| {
            let mut v: Vec<Complex64> = eig.eigenvectors.column(j).iter().copied().collect();
            fix_phase(&mut v);
            (eig.eigenvalues[j], v)
        })
        .collect();
    columns.sort_by(|a, b| b.0.total_cmp(&a.0));

    // Reorder clusters of near-equal eigenvalues by their vectors.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (columns[end - 1].0 - columns[end].0).abs() <= TIE_TOLERANCE {
            end += 1;
        }
        if end - start > 1 {
            columns[start..end].sort_by(|a, b| lexicographic_real(&a.1, &b.1));
        }
        start = end;
    }

    let values = columns.iter().map(|(v, _)| *v).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| columns[j].1[i]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = symmetrized(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// `V f(Λ) V†` for a Hermitian `m = V Λ V†`.
pub fn hermitian_function<F: Fn(f64) -> f64>(m: &CMatrix, f: F) -> CMatrix {
    let (values, vectors) = eigh(m);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let fj = f(lambda);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    &scaled * vectors.adjoint()
}

fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .expect("a maximal entry exists");
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
}

fn lexicographic_real(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.re.total_cmp(&y.re) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let values = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn eigh_reconstructs_and_orders() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(0.5, 0.3),
                c(0.0, -0.2),
                c(0.5, -0.3),
                c(1.0, 0.0),
                c(0.1, 0.0),
                c(0.0, 0.2),
                c(0.1, 0.0),
                c(-1.0, 0.0),
            ],
        );
        let (values, vectors) = eigh(&m);
        assert!(values.windows(2).all(|w| w[0] >= w[1]));
        let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            3,
            values.iter().map(|&v| c(v, 0.0)),
        ));
        let rebuilt = &vectors * lambda * vectors.adjoint();
        assert!(max_abs(&(rebuilt - &m)) < 1e-12);
        let gram = vectors.adjoint() * &vectors;
        assert!(max_abs(&(gram - CMatrix::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn eigenvector_pivot_is_real_positive() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)]);
        let (_, vectors) = eigh(&m);
        for j in 0..2 {
            let col = vectors.column(j);
            let max = col.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
            let pivot = col
                .iter()
                .find(|z| z.norm() >= max * (1.0 - 1e-12))
                .unwrap();
            assert!(pivot.re > 0.0 && pivot.im == 0.0);
        }
    }

    #[test]
    fn degenerate_cluster_is_ordered_by_real_parts() {
        let m = CMatrix::identity(3, 3);
        let (_, vectors) = eigh(&m);
        for j in 0..2 {
            let a: Vec<_> = vectors.column(j).iter().copied().collect();
            let b: Vec<_> = vectors.column(j + 1).iter().copied().collect();
            assert_ne!(lexicographic_real(&a, &b), std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn hermitian_deviation_detects_asymmetry() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!((hermitian_deviation(&m) - 2.0).abs() < 1e-15);
    }
}
