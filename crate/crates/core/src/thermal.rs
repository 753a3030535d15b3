//! Quasi-free thermal states `ρ = Z⁻¹ exp(-Σ K_ij a†_i a_j)`.
//!
//! The single-particle occupation operator is `n = (1 + e^K)⁻¹`. Restricted
//! to a region it gives `n_A`, whose eigenvalues play the role of the
//! zero-temperature overlap spectrum: the reduced state is again a product of
//! independent modes, so every statistic in [`crate::counting`] applies.
//! Inverse temperature and chemical potential are folded into `K` by the
//! caller.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::counting::{inequality_report, CountingReport, OccupationSpectrum};
use crate::error::{Error, Result};
use crate::factorization::{clamp_spectrum, RegionProjector};
use crate::linalg::{self, CMatrix};

/// Tolerance on `|K - K†|`.
pub const KERNEL_HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Single-particle kernel `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSystem {
    kernel: CMatrix,
}

impl ThermalSystem {
    pub fn new(kernel: CMatrix) -> Result<Self> {
        linalg::require_square(&kernel)?;
        let deviation = linalg::hermitian_deviation(&kernel);
        if deviation > KERNEL_HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { kernel })
    }

    /// Diagonal kernel.
    pub fn diagonal(kappa: &[f64]) -> Self {
        let n = kappa.len();
        let mut k = CMatrix::zeros(n, n);
        for (i, &v) in kappa.iter().enumerate() {
            k[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { kernel: k }
    }

    pub fn dim(&self) -> usize {
        self.kernel.nrows()
    }

    pub fn kernel(&self) -> &CMatrix {
        &self.kernel
    }
}

/// Fermi function `1 / (1 + e^κ)` without overflow.
pub fn fermi(kappa: f64) -> f64 {
    if kappa > 40.0 {
        let e = (-kappa).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + kappa.exp())
    }
}

/// `n = (1 + e^K)⁻¹` via the eigendecomposition of `K`.
pub fn occupation_operator(sys: &ThermalSystem) -> CMatrix {
    linalg::hermitian_function(&sys.kernel, fermi)
}

/// The occupation operator restricted to a region, in an orthonormal basis
/// of the region.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedOccupation {
    matrix: CMatrix,
    eigenvalues: Vec<f64>,
}

impl RestrictedOccupation {
    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues clamped to `[0, 1]`, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn spectrum(&self) -> OccupationSpectrum {
        OccupationSpectrum::new(self.eigenvalues.clone()).expect("clamped")
    }
}

/// `W† n W` for an orthonormal basis `W` of the region.
pub fn restricted_occupation(
    n: &CMatrix,
    region: &RegionProjector,
) -> Result<RestrictedOccupation> {
    linalg::require_square(n)?;
    if n.nrows() != region.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.nrows(),
            found: region.dim(),
        });
    }
    let matrix = match region {
        RegionProjector::Sites { sites, .. } => {
            CMatrix::from_fn(sites.len(), sites.len(), |i, j| n[(sites[i], sites[j])])
        }
        RegionProjector::Matrix(_) => {
            let w = region.basis();
            w.adjoint() * n * w
        }
    };
    let eigenvalues = clamp_spectrum(linalg::eigvalsh(&matrix))?;
    Ok(RestrictedOccupation {
        matrix,
        eigenvalues,
    })
}

/// Counting statistics of the restricted thermal state.
pub fn thermal_report(sys: &ThermalSystem, region: &RegionProjector) -> Result<CountingReport> {
    let n = occupation_operator(sys);
    let restricted = restricted_occupation(&n, region)?;
    Ok(inequality_report(&restricted.spectrum()))
}

/// Mode energy `ε = ln((1 - d) / d)` of the reduced state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveEnergy {
    pub occupation: f64,
    /// `±∞` when the mode is pinned at occupation 0 or 1.
    pub value: f64,
    pub pinned: bool,
}

/// Effective energies of the restricted state, one per eigenvalue.
pub fn effective_energies(occ: &RestrictedOccupation) -> Vec<EffectiveEnergy> {
    occ.eigenvalues
        .iter()
        .map(|&d| {
            if d <= 0.0 {
                EffectiveEnergy {
                    occupation: d,
                    value: f64::INFINITY,
                    pinned: true,
                }
            } else if d >= 1.0 {
                EffectiveEnergy {
                    occupation: d,
                    value: f64::NEG_INFINITY,
                    pinned: true,
                }
            } else {
                EffectiveEnergy {
                    occupation: d,
                    value: logit_energy(d),
                    pinned: false,
                }
            }
        })
        .collect()
}

/// Finite effective energies, clamping occupations into
/// `[1e-300, 1 - 1e-16]` first.
pub fn finite_effective_energies(occ: &RestrictedOccupation) -> Vec<f64> {
    occ.eigenvalues
        .iter()
        .map(|&d| logit_energy(d.clamp(1e-300, 1.0 - 1e-16)))
        .collect()
}

fn logit_energy(d: f64) -> f64 {
    (-d).ln_1p() - d.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn rejects_non_hermitian_kernel() {
        let k = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert!(matches!(
            ThermalSystem::new(k),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn fermi_is_stable_for_large_arguments() {
        assert_eq!(fermi(0.0), 0.5);
        assert!((fermi(800.0)).is_finite());
        assert!(fermi(800.0) >= 0.0 && fermi(800.0) < 1e-300);
        assert_eq!(fermi(-800.0), 1.0);
        assert!((fermi(41.0) - (-41f64).exp() / (1.0 + (-41f64).exp())).abs() < 1e-30);
    }

    #[test]
    fn occupation_operator_examples() {
        let n = occupation_operator(&ThermalSystem::diagonal(&[0.0, 0.0]));
        assert!(linalg::max_abs(&(n - CMatrix::identity(2, 2).scale(0.5))) < 1e-15);
        let n = occupation_operator(&ThermalSystem::diagonal(&[3f64.ln()]));
        assert!((n[(0, 0)].re - 0.25).abs() < 1e-15);
        let n = occupation_operator(&ThermalSystem::diagonal(&[-(3f64.ln()), 3f64.ln()]));
        assert!((n[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((n[(1, 1)].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn restricted_full_region_is_identity_map() {
        let sys = ThermalSystem::diagonal(&[0.3, -1.2, 2.0]);
        let n = occupation_operator(&sys);
        let r = restricted_occupation(&n, &RegionProjector::full(3)).unwrap();
        assert!(linalg::max_abs(&(r.matrix() - &n)) < 1e-15);
        assert!(restricted_occupation(&n, &RegionProjector::full(2)).is_err());
    }

    #[test]
    fn zero_kernel_region_is_half_filled() {
        let sys = ThermalSystem::diagonal(&[0.0; 4]);
        let n = occupation_operator(&sys);
        let r = restricted_occupation(&n, &RegionProjector::sites(4, [1, 3]).unwrap()).unwrap();
        assert!(r.eigenvalues().iter().all(|&d| (d - 0.5).abs() < 1e-15));
        let report = thermal_report(&sys, &RegionProjector::sites(4, [1, 3]).unwrap()).unwrap();
        assert!((report.entropy_nats - 2.0 * LN_2).abs() < 1e-14);
        assert!((report.variance - 0.5).abs() < 1e-15);
        assert!((report.entropy_nats - report.bound2).abs() < 1e-14);
        assert!((report.bound2 - report.bound4).abs() < 1e-14);
    }

    #[test]
    fn diagonal_kernel_variance() {
        let k = 3f64.ln();
        let report =
            thermal_report(&ThermalSystem::diagonal(&[k, k]), &RegionProjector::full(2)).unwrap();
        assert!((report.variance - 0.375).abs() < 1e-15);
    }

    #[test]
    fn effective_energy_examples() {
        let occ = RestrictedOccupation {
            matrix: CMatrix::zeros(4, 4),
            eigenvalues: vec![1.0, 0.5, 0.25, 0.0],
        };
        let e = effective_energies(&occ);
        assert!(e[0].pinned && e[0].value == f64::NEG_INFINITY);
        assert!(!e[1].pinned && e[1].value.abs() < 1e-16);
        assert!((e[2].value - 1.098_612_288_668_109_7).abs() < 1e-15);
        assert!(e[3].pinned && e[3].value == f64::INFINITY);
        let finite = finite_effective_energies(&occ);
        assert!(finite.iter().all(|v| v.is_finite()));
    }
}
