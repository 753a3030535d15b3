//! Entropy and particle-number statistics of an occupation spectrum.
//!
//! A reduced free-fermion state is a product of independent two-level modes,
//! mode `i` being occupied with probability `d_i`. Everything here is a
//! function of that list of probabilities alone: the von Neumann entropy, the
//! cumulants of the particle number in the region, its generating function
//! and full distribution, and the chain of lower bounds
//!
//! ```text
//! S  >=  4 ln2 · Var N  >=  -8 ln2 · κ4
//! ```
//!
//! The same functions apply unchanged at finite temperature once the
//! eigenvalues of the restricted occupation operator are used as `d`.
//! All entropies are in nats.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, CompensatedSum};

/// Slack allowed when checking the inequality chain.
pub const CHAIN_SLACK: f64 = 1e-12;

/// Highest cumulant order with exact integer coefficients.
pub const MAX_CUMULANT_ORDER: usize = 12;

/// Longest spectrum accepted by [`number_distribution`].
pub const MAX_DISTRIBUTION_LEN: usize = 1_000_000;

/// Occupation probabilities of independent fermionic modes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccupationSpectrum(Vec<f64>);

impl OccupationSpectrum {
    /// Every entry must lie in `[0, 1]`.
    pub fn new(d: Vec<f64>) -> Result<Self> {
        for (index, &value) in d.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidOccupation { index, value });
            }
        }
        Ok(Self(d))
    }

    /// Clamp into `[0, 1]`, rejecting NaN.
    pub fn clamped(d: Vec<f64>) -> Result<Self> {
        let mut out = Vec::with_capacity(d.len());
        for (index, value) in d.into_iter().enumerate() {
            if value.is_nan() {
                return Err(Error::InvalidOccupation { index, value });
            }
            out.push(value.clamp(0.0, 1.0));
        }
        Ok(Self(out))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Spectrum of two independent subsystems.
    pub fn concat(&self, other: &Self) -> Self {
        let mut d = self.0.clone();
        d.extend_from_slice(&other.0);
        Self(d)
    }
}

impl AsRef<[f64]> for OccupationSpectrum {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Entropy, low cumulants and the inequality verdicts for one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    pub mean: f64,
    pub variance: f64,
    pub kappa4: f64,
    pub entropy_nats: f64,
    /// `4 ln2 · variance`
    pub bound2: f64,
    /// `-8 ln2 · kappa4`
    pub bound4: f64,
    /// `(entropy >= bound2, bound2 >= bound4)` up to [`CHAIN_SLACK`].
    pub chain_holds: (bool, bool),
}

impl CountingReport {
    /// Assemble a report from independently computed statistics.
    pub fn from_statistics(mean: f64, variance: f64, kappa4: f64, entropy_nats: f64) -> Self {
        let bound2 = 4.0 * LN_2 * variance;
        let bound4 = -8.0 * LN_2 * kappa4;
        Self {
            mean,
            variance,
            kappa4,
            entropy_nats,
            bound2,
            bound4,
            chain_holds: (
                entropy_nats - bound2 >= -CHAIN_SLACK,
                bound2 - bound4 >= -CHAIN_SLACK,
            ),
        }
    }

    pub fn chain_ok(&self) -> bool {
        self.chain_holds.0 && self.chain_holds.1
    }

    /// `entropy / variance`; NaN when the variance vanishes.
    pub fn ratio(&self) -> f64 {
        if self.variance > 0.0 {
            self.entropy_nats / self.variance
        } else {
            f64::NAN
        }
    }
}

/// Binary entropy `-x ln x - (1-x) ln(1-x)` with `0 ln 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let small = x.min(1.0 - x);
    if small <= 0.0 {
        return 0.0;
    }
    if small < 1e-300 || 1.0 - small == 1.0 {
        // -x ln x - (1-x) ln(1-x) ≈ x (1 - ln x) for x -> 0
        return small * (1.0 - small.ln());
    }
    let large = 1.0 - small;
    -small * small.ln() - large * (-small).ln_1p()
}

/// Von Neumann entropy of the product state, in nats.
pub fn entropy(spec: &OccupationSpectrum) -> f64 {
    compensated_sum(spec.0.iter().map(|&d| binary_entropy(d)))
}

/// `<N> = Σ d_i`.
pub fn mean_number(spec: &OccupationSpectrum) -> f64 {
    compensated_sum(spec.0.iter().copied())
}

/// `Var N = Σ d_i (1 - d_i)`.
pub fn variance(spec: &OccupationSpectrum) -> f64 {
    compensated_sum(spec.0.iter().map(|&d| d * (1.0 - d)))
}

/// `κ4 = Σ d_i (1-d_i)(1 - 6 d_i + 6 d_i²)`; may be negative.
pub fn fourth_cumulant(spec: &OccupationSpectrum) -> f64 {
    compensated_sum(spec.0.iter().map(|&d| quartic_factor(d)))
}

fn quartic_factor(x: f64) -> f64 {
    x * (1.0 - x) * (1.0 - 6.0 * x + 6.0 * x * x)
}

/// Integer coefficients (ascending powers of `d`) of the per-mode cumulant
/// polynomial `κ_m(d)`, from `κ_1 = d` and `κ_{m+1} = d(1-d) κ_m'(d)`.
pub fn cumulant_polynomial(order: usize) -> Result<Vec<i64>> {
    if order == 0 || order > MAX_CUMULANT_ORDER {
        return Err(Error::OrderOutOfRange(order));
    }
    let mut poly = vec![0_i64, 1];
    for _ in 1..order {
        let derivative: Vec<i64> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(p, &c)| c * p as i64)
            .collect();
        // multiply by d - d²
        let mut next = vec![0_i64; derivative.len() + 2];
        for (p, &c) in derivative.iter().enumerate() {
            next[p + 1] += c;
            next[p + 2] -= c;
        }
        while next.len() > 1 && *next.last().unwrap() == 0 {
            next.pop();
        }
        poly = next;
    }
    Ok(poly)
}

/// Cumulant of the particle number of the given order (`1..=12`).
pub fn cumulant(spec: &OccupationSpectrum, order: usize) -> Result<f64> {
    let poly = cumulant_polynomial(order)?;
    Ok(compensated_sum(spec.0.iter().map(|&d| {
        poly.iter().rev().fold(0.0, |acc, &c| acc * d + c as f64)
    })))
}

/// `χ(λ) = Π_i (1 + d_i (e^{iλ} - 1))`.
pub fn generating_function(spec: &OccupationSpectrum, lambda: f64) -> Complex64 {
    let shift = Complex64::from_polar(1.0, lambda) - 1.0;
    spec.0
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &d| acc * (1.0 + shift * d))
}

/// Distribution `P(k)`, `k = 0..=n`, of the number of particles in the
/// region (a Poisson-binomial law), by iterated convolution.
pub fn number_distribution(spec: &OccupationSpectrum) -> Result<Vec<f64>> {
    let n = spec.len();
    if n > MAX_DISTRIBUTION_LEN {
        return Err(Error::TooLarge {
            what: "spectrum length",
            size: n,
            max: MAX_DISTRIBUTION_LEN,
        });
    }
    let mut p: Vec<f64> = Vec::with_capacity(n + 1);
    p.push(1.0);
    for &d in &spec.0 {
        let q = 1.0 - d;
        p.push(0.0);
        for k in (1..p.len()).rev() {
            p[k] = p[k].mul_add(q, p[k - 1] * d);
        }
        p[0] *= q;
    }
    for v in &mut p {
        if *v < 0.0 && *v >= -1e-14 {
            *v = 0.0;
        }
    }
    Ok(p)
}

/// Mean, variance and fourth cumulant from an explicit distribution over
/// `k = 0, 1, 2, ...`.
pub fn distribution_cumulants(p: &[f64]) -> [f64; 4] {
    let mean = compensated_sum(p.iter().enumerate().map(|(k, &pk)| k as f64 * pk));
    let mut central = [CompensatedSum::new(); 5];
    for (k, &pk) in p.iter().enumerate() {
        let x = k as f64 - mean;
        let mut power = 1.0;
        for acc in central.iter_mut() {
            acc.add(pk * power);
            power *= x;
        }
    }
    let mu2 = central[2].value();
    let mu3 = central[3].value();
    let mu4 = central[4].value();
    [mean, mu2, mu3, mu4 - 3.0 * mu2 * mu2]
}

/// All statistics and the inequality verdicts for one spectrum.
pub fn inequality_report(spec: &OccupationSpectrum) -> CountingReport {
    CountingReport::from_statistics(
        mean_number(spec),
        variance(spec),
        fourth_cumulant(spec),
        entropy(spec),
    )
}

/// Pointwise single-mode curves `(f_S, f_2, f_4)` whose sums over the
/// spectrum give the entropy, `4 ln2 · Var N` and `-8 ln2 · κ4`.
///
/// `x` must lie in `[0, 1]`.
pub fn fig1_functions(x: f64) -> (f64, f64, f64) {
    let f_s = binary_entropy(x);
    let f_2 = 4.0 * LN_2 * x * (1.0 - x);
    let f_4 = -8.0 * LN_2 * quartic_factor(x);
    (f_s, f_2, f_4)
}

/// Mean occupations of independent bosonic modes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BosonOccupations(Vec<f64>);

impl BosonOccupations {
    pub fn new(n: Vec<f64>) -> Result<Self> {
        for (index, &value) in n.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidOccupation { index, value });
            }
        }
        Ok(Self(n))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `Σ (1+n) ln(1+n) - n ln n`.
pub fn boson_entropy(occ: &BosonOccupations) -> f64 {
    compensated_sum(occ.0.iter().map(|&n| {
        let gain = (1.0 + n) * n.ln_1p();
        if n > 0.0 {
            gain - n * n.ln()
        } else {
            gain
        }
    }))
}

/// `Σ n (1 + n)`.
pub fn boson_variance(occ: &BosonOccupations) -> f64 {
    compensated_sum(occ.0.iter().map(|&n| n * (1.0 + n)))
}

/// Outcome of the dilute-gas entropy bound `S >= ln2 · Var N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BosonVerdict {
    /// All occupations are below one, where the bound is guaranteed.
    pub applicable: bool,
    pub holds: bool,
}

pub fn boson_inequality_check(occ: &BosonOccupations) -> BosonVerdict {
    let applicable = occ.0.iter().all(|&n| n < 1.0);
    let holds = boson_entropy(occ) >= LN_2 * boson_variance(occ) - CHAIN_SLACK;
    BosonVerdict { applicable, holds }
}
