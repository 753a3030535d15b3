//! Filled lowest Landau level restricted to a disc.
//!
//! In the symmetric gauge the angular-momentum orbitals
//! `|k> = z^k e^{-|z|²/2} / √(π k!)` (lengths in units of `√2` magnetic
//! lengths) are already adapted to a disc of radius `R` centred at the
//! origin: the overlap matrix is diagonal with
//!
//! ```text
//! d_k = 1 - Γ(k+1, R²) / k! = P(k+1, R²)
//! ```
//!
//! so the factorization pairs each `|k>` with itself, split at `|z| = R`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::{ln_gamma, regularized_lower};
use super::quadrature::{composite_rule, integrate};
use crate::counting::{inequality_report, CountingReport, OccupationSpectrum};
use crate::error::{Error, Result};
use crate::factorization::{OrbitalSet, RegionProjector};
use crate::linalg::CMatrix;

/// Default tail tolerance for [`LllDisc`].
pub const DEFAULT_TAIL_EPSILON: f64 = 1e-12;

/// Smallest in-disc weight for which a mode profile is defined.
pub const MIN_MODE_WEIGHT: f64 = 1e-12;

/// Occupation of the angular-momentum orbital `k` inside a disc of radius
/// `radius`.
pub fn lll_occupation(k: usize, radius: f64) -> f64 {
    let x = radius * radius;
    regularized_lower(k as f64 + 1.0, x)
}

/// A disc together with the truncation of the angular-momentum ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LllDisc {
    radius: f64,
    kmax: usize,
    epsilon_tail: f64,
}

impl LllDisc {
    /// Disc with `kmax = ceil(R² + 12R + 50)` and tail tolerance `1e-12`.
    pub fn new(radius: f64) -> Result<Self> {
        Self::with_truncation(radius, default_kmax(radius), DEFAULT_TAIL_EPSILON)
    }

    pub fn with_truncation(radius: f64, kmax: usize, epsilon_tail: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "disc radius must be positive, got {radius}"
            )));
        }
        let min_k = (radius * radius).ceil() as usize;
        if kmax < min_k {
            return Err(Error::InvalidParameter(format!(
                "kmax = {kmax} is below ceil(R²) = {min_k}"
            )));
        }
        let tail = lll_occupation(kmax, radius);
        if tail >= epsilon_tail {
            return Err(Error::TailNotConverged {
                kmax,
                tail,
                epsilon: epsilon_tail,
            });
        }
        Ok(Self {
            radius,
            kmax,
            epsilon_tail,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn epsilon_tail(&self) -> f64 {
        self.epsilon_tail
    }
}

fn default_kmax(radius: f64) -> usize {
    (radius * radius + 12.0 * radius + 50.0).ceil() as usize
}

/// `(d_0, ..., d_kmax)`.
pub fn lll_spectrum(disc: &LllDisc) -> OccupationSpectrum {
    let d = (0..=disc.kmax)
        .map(|k| lll_occupation(k, disc.radius))
        .collect();
    OccupationSpectrum::new(d).expect("incomplete gamma ratios lie in [0, 1]")
}

/// One point of a radius scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LllPoint {
    pub radius: f64,
    pub report: CountingReport,
}

impl LllPoint {
    /// `entropy / variance`
    pub fn ratio(&self) -> f64 {
        self.report.ratio()
    }
}

/// Counting report for each radius, in input order.
pub fn lll_scan(radii: &[f64]) -> Result<Vec<LllPoint>> {
    radii
        .iter()
        .map(|&radius| {
            let disc = LllDisc::new(radius)?;
            Ok(LllPoint {
                radius,
                report: inequality_report(&lll_spectrum(&disc)),
            })
        })
        .collect()
}

fn ln_unrestricted_density(k: usize, r: f64) -> f64 {
    // 2 r^{2k+1} e^{-r²} / k!
    std::f64::consts::LN_2 + (2 * k + 1) as f64 * r.ln() - r * r - ln_gamma(k as f64 + 1.0)
}

fn checked_weight(k: usize, radius: f64) -> Result<f64> {
    let weight = lll_occupation(k, radius);
    if weight <= MIN_MODE_WEIGHT {
        return Err(Error::ModeAbsent { k, weight });
    }
    Ok(weight)
}

fn profile_at(k: usize, ln_weight: f64, r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        (ln_unrestricted_density(k, r) - ln_weight).exp()
    }
}

/// Radial probability density `p_k(r) = 2 r^{2k+1} e^{-r²} / (k! d_k)` of
/// the in-disc mode `|k>_A`, sampled on `r_grid ⊂ [0, R]`.
pub fn lll_mode_profile(k: usize, radius: f64, r_grid: &[f64]) -> Result<Vec<f64>> {
    let ln_weight = checked_weight(k, radius)?.ln();
    r_grid
        .iter()
        .map(|&r| {
            if !(0.0..=radius).contains(&r) {
                return Err(Error::InvalidParameter(format!(
                    "radius {r} outside the disc [0, {radius}]"
                )));
            }
            Ok(profile_at(k, ln_weight, r))
        })
        .collect()
}

/// `∫_0^R p_k(r) dr`, which should be one.
pub fn mode_normalization(k: usize, radius: f64) -> Result<f64> {
    let ln_weight = checked_weight(k, radius)?.ln();
    Ok(integrate(|r| profile_at(k, ln_weight, r), 0.0, radius))
}

/// Mean radius `∫_0^R r p_k(r) dr` of the in-disc mode.
pub fn mode_mean_radius(k: usize, radius: f64) -> Result<f64> {
    let ln_weight = checked_weight(k, radius)?.ln();
    Ok(integrate(|r| r * profile_at(k, ln_weight, r), 0.0, radius))
}

/// The lowest `kmax + 1` orbitals sampled on a polar grid, as an explicit
/// finite single-particle space with the disc as a set of grid sites.
///
/// Radial nodes come from composite Gauss–Legendre panels on `[0, R]` and
/// `[R, r_outer]`; the angular grid has `n_theta` equally spaced points,
/// which integrates `e^{i(k-k')θ}` exactly while `kmax < n_theta`. Each
/// component carries the square root of its quadrature weight so the
/// canonical inner product reproduces the continuum one.
#[derive(Debug, Clone)]
pub struct DiscretizedDisc {
    pub orbitals: OrbitalSet,
    pub region: RegionProjector,
    pub radius: f64,
    pub kmax: usize,
}

impl DiscretizedDisc {
    pub fn new(radius: f64, kmax: usize, n_theta: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "disc radius must be positive, got {radius}"
            )));
        }
        if n_theta <= kmax {
            return Err(Error::InvalidParameter(format!(
                "need n_theta > kmax, got n_theta = {n_theta}, kmax = {kmax}"
            )));
        }
        let r_outer = radius.max(((2 * kmax + 1) as f64 / 2.0).sqrt()) + 7.0;
        let (inner_r, inner_w) = composite_rule(0.0, radius);
        let (outer_r, outer_w) = composite_rule(radius, r_outer);
        let n_inner = inner_r.len();
        let radial: Vec<(f64, f64)> = inner_r
            .into_iter()
            .zip(inner_w)
            .chain(outer_r.into_iter().zip(outer_w))
            .collect();

        let dim = radial.len() * n_theta;
        let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
        let mut coeffs = CMatrix::zeros(kmax + 1, dim);
        for k in 0..=kmax {
            let ln_norm = -0.5 * (std::f64::consts::PI.ln() + ln_gamma(k as f64 + 1.0));
            for (ir, &(r, w)) in radial.iter().enumerate() {
                let amplitude =
                    (k as f64 * r.ln() - 0.5 * r * r + ln_norm).exp() * (w * r * dtheta).sqrt();
                for it in 0..n_theta {
                    let theta = it as f64 * dtheta;
                    coeffs[(k, ir * n_theta + it)] =
                        Complex64::from_polar(amplitude, k as f64 * theta);
                }
            }
        }
        let orbitals = OrbitalSet::new(coeffs)?;
        let region = RegionProjector::sites(dim, 0..n_inner * n_theta)?;
        Ok(Self {
            orbitals,
            region,
            radius,
            kmax,
        })
    }
}
