//! Overlap matrix of a Fermi sea with a region, and its mode-pair
//! factorization.
//!
//! Given occupied orbitals `φ_1..φ_N` and an orthogonal projector `P` onto a
//! region of the single-particle space, the overlap matrix
//! `M_ij = <P φ_j, P φ_i>` is Hermitian with spectrum in `[0, 1]`. If
//! `M = U† diag(d) U`, the vectors
//!
//! ```text
//! A_l = Σ_k U_lk P φ_k / √d_l          (inside the region)
//! B_l = Σ_k U_lk (1 - P) φ_k / √(1-d_l) (outside)
//! ```
//!
//! are orthonormal, and the Slater determinant is a product over pairs of the
//! single-fermion states `√d_l A_l + √(1-d_l) B_l`. Tracing out the outside
//! modes leaves `⊗_l diag(1 - d_l, d_l)`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::counting::OccupationSpectrum;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Rows of an [`OrbitalSet`] must be orthonormal to this accuracy.
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-10;
/// Largest accepted `|P - P†|` entry.
pub const PROJECTOR_HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Largest accepted `|P² - P|` entry.
pub const PROJECTOR_IDEMPOTENT_TOLERANCE: f64 = 1e-10;
/// Eigenvalues this far outside `[0, 1]` are clamped; further is an error.
pub const SPECTRUM_CLAMP_TOLERANCE: f64 = 1e-10;
/// Modes with weight at or below this are left undefined.
pub const MODE_THRESHOLD: f64 = 1e-8;
/// Largest mode count for explicit reduced-state spectra.
pub const MAX_RHO_MODES: usize = 20;

/// Occupied single-particle orbitals; row `i` of `coeffs` is `φ_i` in the
/// canonical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalSet {
    coeffs: CMatrix,
}

impl OrbitalSet {
    pub fn new(coeffs: CMatrix) -> Result<Self> {
        let (n, dim) = coeffs.shape();
        if n == 0 || n > dim {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= N <= D, got N = {n}, D = {dim}"
            )));
        }
        let gram = &coeffs * coeffs.adjoint();
        let deviation = linalg::max_abs(&(gram - CMatrix::identity(n, n)));
        if deviation > ORTHONORMALITY_TOLERANCE {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { coeffs })
    }

    /// Orbitals with real coefficients, given row by row.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("ragged orbital rows".into()));
        }
        Self::new(CMatrix::from_fn(n, dim, |i, j| {
            Complex64::new(rows[i][j], 0.0)
        }))
    }

    /// The first `n` canonical basis vectors of a `dim`-dimensional space.
    pub fn basis_vectors(dim: usize, n: usize) -> Result<Self> {
        Self::new(CMatrix::identity(n, dim))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn n_occ(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    /// Replace the orbitals by `mixing · coeffs`; a unitary `mixing` leaves
    /// the Fermi sea unchanged.
    pub fn mixed(&self, mixing: &CMatrix) -> Result<Self> {
        if mixing.ncols() != self.n_occ() {
            return Err(Error::DimensionMismatch {
                expected: self.n_occ(),
                found: mixing.ncols(),
            });
        }
        Self::new(mixing * &self.coeffs)
    }
}

/// Orthogonal projector onto a region of the single-particle space.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionProjector {
    /// Projection onto a set of basis sites (0-based, sorted, distinct).
    Sites { dim: usize, sites: Vec<usize> },
    /// A general Hermitian idempotent matrix.
    Matrix(CMatrix),
}

impl RegionProjector {
    /// Projector onto the given basis sites. Order and repetition in the
    /// input do not matter.
    pub fn sites(dim: usize, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut sites: Vec<usize> = sites.into_iter().collect();
        sites.sort_unstable();
        sites.dedup();
        if let Some(&bad) = sites.iter().find(|&&s| s >= dim) {
            return Err(Error::InvalidRegion(format!(
                "site {bad} out of range for dimension {dim}"
            )));
        }
        Ok(Self::Sites { dim, sites })
    }

    /// Validated projector matrix.
    pub fn matrix(matrix: CMatrix) -> Result<Self> {
        linalg::require_square(&matrix)?;
        let deviation = linalg::hermitian_deviation(&matrix);
        if deviation > PROJECTOR_HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let deviation = linalg::max_abs(&(&matrix * &matrix - &matrix));
        if deviation > PROJECTOR_IDEMPOTENT_TOLERANCE {
            return Err(Error::NotIdempotent { deviation });
        }
        Ok(Self::Matrix(matrix))
    }

    /// Projector onto the span of the given orthonormal row vectors.
    pub fn from_orthonormal_rows(rows: &CMatrix) -> Result<Self> {
        let p = rows.transpose() * rows.map(|z| z.conj());
        Self::matrix(p)
    }

    pub fn full(dim: usize) -> Self {
        Self::Sites {
            dim,
            sites: (0..dim).collect(),
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self::Sites {
            dim,
            sites: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Sites { dim, .. } => *dim,
            Self::Matrix(m) => m.nrows(),
        }
    }

    /// Projector onto the orthogonal complement.
    pub fn complement(&self) -> Self {
        match self {
            Self::Sites { dim, sites } => Self::Sites {
                dim: *dim,
                sites: (0..*dim)
                    .filter(|s| sites.binary_search(s).is_err())
                    .collect(),
            },
            Self::Matrix(m) => Self::Matrix(CMatrix::identity(m.nrows(), m.nrows()) - m),
        }
    }

    /// Apply the projector to each column of `vectors`.
    pub fn apply_columns(&self, vectors: &CMatrix) -> CMatrix {
        match self {
            Self::Sites { sites, .. } => {
                let mut out = CMatrix::zeros(vectors.nrows(), vectors.ncols());
                for &s in sites {
                    out.set_row(s, &vectors.row(s));
                }
                out
            }
            Self::Matrix(m) => m * vectors,
        }
    }

    /// Dense `D×D` matrix.
    pub fn to_matrix(&self) -> CMatrix {
        match self {
            Self::Sites { dim, sites } => {
                let mut m = CMatrix::zeros(*dim, *dim);
                for &s in sites {
                    m[(s, s)] = Complex64::new(1.0, 0.0);
                }
                m
            }
            Self::Matrix(m) => m.clone(),
        }
    }

    /// Orthonormal basis of the region as the columns of a `D×m` matrix.
    pub fn basis(&self) -> CMatrix {
        match self {
            Self::Sites { dim, sites } => {
                let mut w = CMatrix::zeros(*dim, sites.len());
                for (j, &s) in sites.iter().enumerate() {
                    w[(s, j)] = Complex64::new(1.0, 0.0);
                }
                w
            }
            Self::Matrix(m) => {
                let (values, vectors) = linalg::eigh(m);
                let rank = values.iter().filter(|&&v| v > 0.5).count();
                vectors.columns(0, rank).into_owned()
            }
        }
    }

    fn check(&self) -> Result<()> {
        if let Self::Matrix(m) = self {
            let deviation = linalg::max_abs(&(m * m - m));
            if deviation > PROJECTOR_IDEMPOTENT_TOLERANCE {
                return Err(Error::NotIdempotent { deviation });
            }
        }
        Ok(())
    }
}

/// The `N×N` overlap matrix `M_ij = <P φ_j, P φ_i>`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    matrix: CMatrix,
}

impl OverlapMatrix {
    /// Wrap a Hermitian matrix whose spectrum should lie in `[0, 1]`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        linalg::require_square(&matrix)?;
        let deviation = linalg::hermitian_deviation(&matrix);
        if deviation > 1e-12 {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::compensated_sum((0..self.n()).map(|i| self.matrix[(i, i)].re))
    }

    /// Eigenvalues in descending order, clamped to `[0, 1]`.
    pub fn spectrum(&self) -> Result<OccupationSpectrum> {
        let values = clamp_spectrum(linalg::eigvalsh(&self.matrix))?;
        OccupationSpectrum::new(values)
    }
}

pub(crate) fn clamp_spectrum(values: Vec<f64>) -> Result<Vec<f64>> {
    values
        .into_iter()
        .map(|v| {
            if (-SPECTRUM_CLAMP_TOLERANCE..=1.0 + SPECTRUM_CLAMP_TOLERANCE).contains(&v) {
                Ok(v.clamp(0.0, 1.0))
            } else {
                Err(Error::SpectrumOutOfRange { value: v })
            }
        })
        .collect()
}

fn check_dims(orbitals: &OrbitalSet, region: &RegionProjector) -> Result<()> {
    if orbitals.dim() != region.dim() {
        return Err(Error::DimensionMismatch {
            expected: orbitals.dim(),
            found: region.dim(),
        });
    }
    region.check()
}

/// Orbitals as the columns of a `D×N` matrix.
fn orbital_columns(orbitals: &OrbitalSet) -> CMatrix {
    orbitals.coeffs.transpose()
}

/// `M_ij = <P φ_j, P φ_i>`, without clamping or diagonalization.
pub fn overlap_matrix(orbitals: &OrbitalSet, region: &RegionProjector) -> Result<OverlapMatrix> {
    check_dims(orbitals, region)?;
    let projected = region.apply_columns(&orbital_columns(orbitals));
    // (P Φ)† (P Φ) has entries <P φ_i, P φ_j>; M is its transpose.
    let gram = projected.adjoint() * &projected;
    let mut m = gram.transpose();
    // Enforce exact Hermiticity of the rounded product.
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in 0..i {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    OverlapMatrix::new(m)
}

/// Occupation probabilities and paired inside/outside modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeFactorization {
    d: Vec<f64>,
    modes_a: CMatrix,
    modes_b: CMatrix,
    defined_a: Vec<bool>,
    defined_b: Vec<bool>,
    unitary: CMatrix,
}

impl ModeFactorization {
    /// Occupation probabilities, descending.
    pub fn occupations(&self) -> &[f64] {
        &self.d
    }

    pub fn spectrum(&self) -> OccupationSpectrum {
        OccupationSpectrum::new(self.d.clone()).expect("clamped during factorization")
    }

    /// Inside modes as rows; rows with `d_l <= MODE_THRESHOLD` are zero.
    pub fn modes_a(&self) -> &CMatrix {
        &self.modes_a
    }

    /// Outside modes as rows; rows with `1 - d_l <= MODE_THRESHOLD` are zero.
    pub fn modes_b(&self) -> &CMatrix {
        &self.modes_b
    }

    pub fn mode_a(&self, l: usize) -> Option<DVector<Complex64>> {
        self.defined_a
            .get(l)
            .copied()
            .filter(|&ok| ok)
            .map(|_| self.modes_a.row(l).transpose())
    }

    pub fn mode_b(&self, l: usize) -> Option<DVector<Complex64>> {
        self.defined_b
            .get(l)
            .copied()
            .filter(|&ok| ok)
            .map(|_| self.modes_b.row(l).transpose())
    }

    pub fn defined_a(&self) -> &[bool] {
        &self.defined_a
    }

    pub fn defined_b(&self) -> &[bool] {
        &self.defined_b
    }

    /// `U` with `M = U† diag(d) U`.
    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    /// The single-fermion state `√d_l A_l + √(1-d_l) B_l` of pair `l`,
    /// which equals `Σ_k U_lk φ_k`.
    pub fn paired_state(&self, l: usize) -> DVector<Complex64> {
        let dim = self.modes_a.ncols();
        let mut v = DVector::zeros(dim);
        if self.defined_a[l] {
            v += self.modes_a.row(l).transpose() * Complex64::new(self.d[l].sqrt(), 0.0);
        }
        if self.defined_b[l] {
            v += self.modes_b.row(l).transpose() * Complex64::new((1.0 - self.d[l]).sqrt(), 0.0);
        }
        v
    }
}

/// Diagonalize the overlap matrix and build the paired modes.
pub fn factorize(orbitals: &OrbitalSet, region: &RegionProjector) -> Result<ModeFactorization> {
    let m = overlap_matrix(orbitals, region)?;
    let (raw, eigvecs) = linalg::eigh(m.matrix());
    let d = clamp_spectrum(raw)?;
    let n = d.len();

    // Columns of `eigvecs` are eigenvectors u_l of M, so U = eigvecs†. The
    // combination Σ_k U_lk φ_k uses the conjugated eigenvector.
    let unitary = eigvecs.adjoint();
    let phi = orbital_columns(orbitals);
    let combined = &phi * unitary.transpose();
    let inside = region.apply_columns(&combined);
    let outside = &combined - &inside;

    let dim = orbitals.dim();
    let mut modes_a = CMatrix::zeros(n, dim);
    let mut modes_b = CMatrix::zeros(n, dim);
    let mut defined_a = vec![false; n];
    let mut defined_b = vec![false; n];
    for l in 0..n {
        if d[l] > MODE_THRESHOLD {
            let scale = Complex64::new(1.0 / d[l].sqrt(), 0.0);
            modes_a.set_row(l, &(inside.column(l).transpose() * scale));
            defined_a[l] = true;
        }
        if 1.0 - d[l] > MODE_THRESHOLD {
            let scale = Complex64::new(1.0 / (1.0 - d[l]).sqrt(), 0.0);
            modes_b.set_row(l, &(outside.column(l).transpose() * scale));
            defined_b[l] = true;
        }
    }

    Ok(ModeFactorization {
        d,
        modes_a,
        modes_b,
        defined_a,
        defined_b,
        unitary,
    })
}

/// Spectrum of `⊗_i diag(1 - d_i, d_i)`: all `2^n` products, descending.
pub fn eigenvalues_of_rho_a(d: &OccupationSpectrum, max_modes: usize) -> Result<Vec<f64>> {
    let cap = max_modes.min(MAX_RHO_MODES);
    if d.len() > cap {
        return Err(Error::TooLarge {
            what: "mode count",
            size: d.len(),
            max: cap,
        });
    }
    let mut products = vec![1.0];
    for &di in d.as_slice() {
        let mut next = Vec::with_capacity(products.len() * 2);
        for &p in &products {
            next.push(p * (1.0 - di));
            next.push(p * di);
        }
        products = next;
    }
    products.sort_by(|a, b| b.total_cmp(a));
    Ok(products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn single_orbital() -> OrbitalSet {
        OrbitalSet::from_real_rows(&[vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]]).unwrap()
    }

    #[test]
    fn orbital_set_validation() {
        assert!(matches!(
            OrbitalSet::from_real_rows(&[vec![1.0, 1.0]]),
            Err(Error::NotOrthonormal { .. })
        ));
        assert!(OrbitalSet::from_real_rows(&[vec![1.0], vec![1.0]]).is_err());
        assert!(OrbitalSet::new(CMatrix::zeros(0, 3)).is_err());
    }

    #[test]
    fn projector_validation() {
        let not_idem = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.5)]);
        assert!(matches!(
            RegionProjector::matrix(not_idem),
            Err(Error::NotIdempotent { .. })
        ));
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(0.0)]);
        assert!(matches!(
            RegionProjector::matrix(not_herm),
            Err(Error::NotHermitian { .. })
        ));
        assert!(RegionProjector::sites(3, [3]).is_err());
    }

    #[test]
    fn overlap_full_and_empty_regions() {
        let orb = OrbitalSet::basis_vectors(4, 2).unwrap();
        let full = overlap_matrix(&orb, &RegionProjector::full(4)).unwrap();
        assert!(linalg::max_abs(&(full.matrix() - CMatrix::identity(2, 2))) < 1e-15);
        let empty = overlap_matrix(&orb, &RegionProjector::empty(4)).unwrap();
        assert_eq!(linalg::max_abs(empty.matrix()), 0.0);
    }

    #[test]
    fn overlap_single_orbital_half() {
        let m =
            overlap_matrix(&single_orbital(), &RegionProjector::sites(2, [0]).unwrap()).unwrap();
        assert!((m.matrix()[(0, 0)] - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let err = overlap_matrix(&single_orbital(), &RegionProjector::full(3)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn factorize_single_orbital() {
        let f = factorize(&single_orbital(), &RegionProjector::sites(2, [0]).unwrap()).unwrap();
        assert!((f.occupations()[0] - 0.5).abs() < 1e-15);
        let a = f.mode_a(0).unwrap();
        let b = f.mode_b(0).unwrap();
        assert!((a[0].norm() - 1.0).abs() < 1e-14 && a[1].norm() < 1e-15);
        assert!((b[1].norm() - 1.0).abs() < 1e-14 && b[0].norm() < 1e-15);
    }

    #[test]
    fn factorize_commuting_case_is_trivial() {
        let orb = OrbitalSet::basis_vectors(6, 3).unwrap();
        let region = RegionProjector::sites(6, 0..4).unwrap();
        let f = factorize(&orb, &region).unwrap();
        assert!(f.occupations().iter().all(|&d| (d - 1.0).abs() < 1e-14));
        assert!(f.defined_a().iter().all(|&x| x));
        assert!(f.defined_b().iter().all(|&x| !x));
        assert!(f.mode_b(0).is_none());
    }

    #[test]
    fn factorize_with_matrix_projector_matches_sites() {
        let orb = single_orbital();
        let by_sites = factorize(&orb, &RegionProjector::sites(2, [1]).unwrap()).unwrap();
        let by_matrix = factorize(
            &orb,
            &RegionProjector::matrix(CMatrix::from_row_slice(
                2,
                2,
                &[c(0.0), c(0.0), c(0.0), c(1.0)],
            ))
            .unwrap(),
        )
        .unwrap();
        assert!((by_sites.occupations()[0] - by_matrix.occupations()[0]).abs() < 1e-15);
    }

    #[test]
    fn rho_a_spectrum_examples() {
        let spec = |d: &[f64]| OccupationSpectrum::new(d.to_vec()).unwrap();
        assert_eq!(
            eigenvalues_of_rho_a(&spec(&[1.0]), 20).unwrap(),
            vec![1.0, 0.0]
        );
        assert_eq!(
            eigenvalues_of_rho_a(&spec(&[0.5, 0.5]), 20).unwrap(),
            vec![0.25; 4]
        );
        let got = eigenvalues_of_rho_a(&spec(&[0.3, 0.9]), 20).unwrap();
        for (g, w) in got.iter().zip([0.63, 0.27, 0.07, 0.03]) {
            assert!((g - w).abs() < 1e-15);
        }
        assert!(matches!(
            eigenvalues_of_rho_a(&spec(&[0.5; 3]), 2),
            Err(Error::TooLarge { .. })
        ));
        assert!(eigenvalues_of_rho_a(&spec(&[0.5; 21]), 30).is_err());
    }

    #[test]
    fn clamp_rejects_far_outliers() {
        assert_eq!(
            clamp_spectrum(vec![-5e-11, 1.0 + 5e-11]).unwrap(),
            vec![0.0, 1.0]
        );
        assert!(matches!(
            clamp_spectrum(vec![1.0 + 1e-6]),
            Err(Error::SpectrumOutOfRange { .. })
        ));
    }
}
