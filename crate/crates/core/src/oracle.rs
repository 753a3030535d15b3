//! Exact many-body brute force on small systems.
//!
//! States live in the `2^D`-dimensional Fock space of `D` single-particle
//! sites. Basis states are indexed by occupation bitmask, bit `j` set when
//! site `j` (0-based) is occupied, and `|S> = c†_{s1} c†_{s2} ... |0>` with
//! `s1 < s2 < ...`. Annihilating or creating at site `j` therefore carries
//! the sign `(-1)^{#occupied sites below j}`.
//!
//! Partial traces first reorder the creation operators so that region sites
//! come before the complement (each in ascending order), picking up the sign
//! of that permutation, and then trace out the complement factor. Nothing in
//! this module uses the overlap matrix; it is the independent check of the
//! closed forms in [`crate::factorization`], [`crate::counting`] and
//! [`crate::thermal`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::counting::{
    distribution_cumulants, inequality_report, number_distribution, CountingReport,
    OccupationSpectrum,
};
use crate::error::{Error, Result};
use crate::factorization::{eigenvalues_of_rho_a, factorize, OrbitalSet, RegionProjector};
use crate::linalg::{self, CMatrix};
use crate::thermal::{occupation_operator, restricted_occupation, ThermalSystem};

/// Largest single-particle dimension for pure states.
pub const MAX_PURE_SITES: usize = 14;
/// Largest single-particle dimension for Gibbs states.
pub const MAX_THERMAL_SITES: usize = 10;
/// Largest region for an explicit reduced density matrix.
pub const MAX_REGION_SITES: usize = 12;

const DENSITY_TOLERANCE: f64 = 1e-10;

fn parity_below(mask: usize, site: usize) -> f64 {
    if (mask & ((1 << site) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `a†_i a_j |mask>` as `(new_mask, sign)`, or `None` when it vanishes.
pub fn hop(mask: usize, i: usize, j: usize) -> Option<(usize, f64)> {
    if mask & (1 << j) == 0 {
        return None;
    }
    let removed = mask ^ (1 << j);
    if removed & (1 << i) != 0 {
        return None;
    }
    let sign = parity_below(mask, j) * parity_below(removed, i);
    Some((removed | (1 << i), sign))
}

/// A normalized many-body pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    dim_sp: usize,
    amplitudes: Vec<Complex64>,
}

impl FockState {
    pub fn new(dim_sp: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if dim_sp > MAX_PURE_SITES {
            return Err(Error::TooLarge {
                what: "single-particle dimension",
                size: dim_sp,
                max: MAX_PURE_SITES,
            });
        }
        if amplitudes.len() != 1 << dim_sp {
            return Err(Error::DimensionMismatch {
                expected: 1 << dim_sp,
                found: amplitudes.len(),
            });
        }
        let state = Self { dim_sp, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "state norm {norm} is not 1"
            )));
        }
        Ok(state)
    }

    pub fn dim_sp(&self) -> usize {
        self.dim_sp
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, mask: usize) -> Complex64 {
        self.amplitudes[mask]
    }

    pub fn norm(&self) -> f64 {
        linalg::compensated_sum(self.amplitudes.iter().map(|z| z.norm_sqr())).sqrt()
    }
}

/// The Slater determinant `ψ†(φ_1) ... ψ†(φ_N) |0>`.
///
/// The amplitude on the occupied set `S` is the determinant of the columns
/// `S` of the coefficient matrix.
pub fn slater_state(orbitals: &OrbitalSet) -> Result<FockState> {
    let dim = orbitals.dim();
    if dim > MAX_PURE_SITES {
        return Err(Error::TooLarge {
            what: "single-particle dimension",
            size: dim,
            max: MAX_PURE_SITES,
        });
    }
    let n = orbitals.n_occ() as u32;
    let coeffs = orbitals.coeffs();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << dim];
    for (mask, amp) in amplitudes.iter_mut().enumerate() {
        if mask.count_ones() != n {
            continue;
        }
        let cols: Vec<usize> = (0..dim).filter(|&s| mask & (1 << s) != 0).collect();
        let sub = DMatrix::from_fn(cols.len(), cols.len(), |i, j| coeffs[(i, cols[j])]);
        *amp = sub.determinant();
    }
    FockState::new(dim, amplitudes)
}

/// Trace-one Hermitian positive semidefinite operator on the Fock space of
/// `n_sites` sites.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_sites: usize,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validated density operator; the matrix side must be a power of two.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let side = linalg::require_square(&matrix)?;
        if !side.is_power_of_two() {
            return Err(Error::InvalidDensity(format!(
                "side {side} is not a power of two"
            )));
        }
        let rho = Self {
            n_sites: side.trailing_zeros() as usize,
            matrix,
        };
        let deviation = linalg::hermitian_deviation(&rho.matrix);
        if deviation > DENSITY_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = rho.trace();
        if (trace - 1.0).abs() > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {trace} is not 1")));
        }
        if let Some(&min) = rho.eigenvalues().last() {
            if min < -DENSITY_TOLERANCE {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
            }
        }
        Ok(rho)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::compensated_sum((0..self.matrix.nrows()).map(|i| self.matrix[(i, i)].re))
    }

    /// Eigenvalues in descending order.
    ///
    /// Number-conserving operators are diagonalized sector by sector.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sectors = particle_sectors(self.n_sites);
        let mut coupling = 0.0_f64;
        let side = self.matrix.nrows();
        for x in 0..side {
            for y in 0..side {
                if x.count_ones() != y.count_ones() {
                    coupling = coupling.max(self.matrix[(x, y)].norm());
                }
            }
        }
        let mut values = if coupling <= 1e-14 {
            sectors
                .iter()
                .flat_map(|sector| {
                    let block = CMatrix::from_fn(sector.len(), sector.len(), |i, j| {
                        self.matrix[(sector[i], sector[j])]
                    });
                    linalg::eigvalsh(&block)
                })
                .collect()
        } else {
            linalg::eigvalsh(&self.matrix)
        };
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }

    /// `P(k)`: total weight of basis states with `k` particles.
    pub fn number_distribution(&self) -> Vec<f64> {
        let mut p = vec![linalg::CompensatedSum::new(); self.n_sites + 1];
        for x in 0..self.matrix.nrows() {
            p[x.count_ones() as usize].add(self.matrix[(x, x)].re);
        }
        p.iter().map(|acc| acc.value()).collect()
    }
}

/// Basis masks grouped by particle number.
fn particle_sectors(n_sites: usize) -> Vec<Vec<usize>> {
    let mut sectors = vec![Vec::new(); n_sites + 1];
    for mask in 0..1usize << n_sites {
        sectors[mask.count_ones() as usize].push(mask);
    }
    sectors
}

/// Reordering of the sites of a system into a region and its complement.
struct Bipartition {
    region: Vec<usize>,
    complement: Vec<usize>,
}

impl Bipartition {
    fn new(n_sites: usize, region_sites: &[usize]) -> Result<Self> {
        let mut region = region_sites.to_vec();
        region.sort_unstable();
        region.dedup();
        if region.len() != region_sites.len() {
            return Err(Error::InvalidRegion("repeated site".into()));
        }
        if let Some(&bad) = region.iter().find(|&&s| s >= n_sites) {
            return Err(Error::InvalidRegion(format!(
                "site {bad} is not among the {n_sites} sites"
            )));
        }
        if region.len() > MAX_REGION_SITES {
            return Err(Error::TooLarge {
                what: "region size",
                size: region.len(),
                max: MAX_REGION_SITES,
            });
        }
        let complement = (0..n_sites)
            .filter(|s| region.binary_search(s).is_err())
            .collect();
        Ok(Self { region, complement })
    }

    /// Split a full mask into `(region_mask, complement_mask, sign)`.
    fn split(&self, mask: usize) -> (usize, usize, f64) {
        let mut a = 0;
        let mut b = 0;
        let mut swaps = 0u32;
        for (bit, &site) in self.region.iter().enumerate() {
            if mask & (1 << site) != 0 {
                a |= 1 << bit;
                // occupied complement sites below this one must be moved past it
                swaps += self
                    .complement
                    .iter()
                    .take_while(|&&c| c < site)
                    .filter(|&&c| mask & (1 << c) != 0)
                    .count() as u32;
            }
        }
        for (bit, &site) in self.complement.iter().enumerate() {
            if mask & (1 << site) != 0 {
                b |= 1 << bit;
            }
        }
        (a, b, if swaps.is_multiple_of(2) { 1.0 } else { -1.0 })
    }
}

/// Reduction of a many-body state to a subset of sites.
pub trait PartialTrace {
    fn partial_trace(&self, region_sites: &[usize]) -> Result<DensityOperator>;
}

impl PartialTrace for FockState {
    fn partial_trace(&self, region_sites: &[usize]) -> Result<DensityOperator> {
        let parts = Bipartition::new(self.dim_sp, region_sites)?;
        let rows = 1 << parts.region.len();
        let cols = 1 << parts.complement.len();
        let mut psi = CMatrix::zeros(rows, cols);
        for (mask, &amp) in self.amplitudes.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let (a, b, sign) = parts.split(mask);
            psi[(a, b)] = amp * sign;
        }
        Ok(DensityOperator {
            n_sites: parts.region.len(),
            matrix: &psi * psi.adjoint(),
        })
    }
}

impl PartialTrace for DensityOperator {
    fn partial_trace(&self, region_sites: &[usize]) -> Result<DensityOperator> {
        let parts = Bipartition::new(self.n_sites, region_sites)?;
        let side = 1 << parts.region.len();
        let split: Vec<(usize, usize, f64)> = (0..self.matrix.nrows())
            .map(|mask| parts.split(mask))
            .collect();
        // group full masks by their complement part
        let mut by_complement = vec![Vec::new(); 1 << parts.complement.len()];
        for (mask, &(a, b, sign)) in split.iter().enumerate() {
            by_complement[b].push((mask, a, sign));
        }
        let mut reduced = CMatrix::zeros(side, side);
        for group in &by_complement {
            for &(x, a, sx) in group {
                for &(y, a2, sy) in group {
                    reduced[(a, a2)] += self.matrix[(x, y)] * (sx * sy);
                }
            }
        }
        Ok(DensityOperator {
            n_sites: parts.region.len(),
            matrix: reduced,
        })
    }
}

/// Reduce a pure or mixed many-body state to the given sites.
pub fn partial_trace<T: PartialTrace + ?Sized>(
    state: &T,
    region_sites: &[usize],
) -> Result<DensityOperator> {
    state.partial_trace(region_sites)
}

/// Statistics computed directly from a reduced density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCounting {
    pub report: CountingReport,
    pub distribution: Vec<f64>,
    pub eigenvalues: Vec<f64>,
}

/// Entropy from the eigenvalues of `rho`; `P(k)` from its diagonal; moments
/// from `P(k)`.
pub fn oracle_counting(rho: &DensityOperator) -> OracleCounting {
    let eigenvalues = rho.eigenvalues();
    let entropy = linalg::compensated_sum(
        eigenvalues
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| -l * l.ln()),
    );
    let distribution = rho.number_distribution();
    let [mean, variance, _, kappa4] = distribution_cumulants(&distribution);
    OracleCounting {
        report: CountingReport::from_statistics(mean, variance, kappa4, entropy),
        distribution,
        eigenvalues,
    }
}

/// `Z⁻¹ exp(-Σ K_ij a†_i a_j)` on the full Fock space.
pub fn gibbs_state(sys: &ThermalSystem) -> Result<DensityOperator> {
    let dim = sys.dim();
    if dim > MAX_THERMAL_SITES {
        return Err(Error::TooLarge {
            what: "single-particle dimension",
            size: dim,
            max: MAX_THERMAL_SITES,
        });
    }
    let k = sys.kernel();
    let sectors = particle_sectors(dim);
    let mut decompositions = Vec::with_capacity(sectors.len());
    for sector in &sectors {
        let index_of = |mask: usize| sector.binary_search(&mask).expect("same particle number");
        let mut h = CMatrix::zeros(sector.len(), sector.len());
        for (col, &mask) in sector.iter().enumerate() {
            for i in 0..dim {
                for j in 0..dim {
                    if let Some((target, sign)) = hop(mask, i, j) {
                        h[(index_of(target), col)] += k[(i, j)] * sign;
                    }
                }
            }
        }
        decompositions.push(linalg::eigh(&h));
    }
    let ground = decompositions
        .iter()
        .flat_map(|(values, _)| values.iter().copied())
        .fold(f64::INFINITY, f64::min);
    let partition = linalg::compensated_sum(
        decompositions
            .iter()
            .flat_map(|(values, _)| values.iter().map(|&e| (ground - e).exp())),
    );

    let mut rho = CMatrix::zeros(1 << dim, 1 << dim);
    for (sector, (values, vectors)) in sectors.iter().zip(&decompositions) {
        let weights: Vec<f64> = values
            .iter()
            .map(|&e| (ground - e).exp() / partition)
            .collect();
        let mut scaled = vectors.clone();
        for (j, w) in weights.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*w);
        }
        let block = &scaled * vectors.adjoint();
        for (bi, &x) in sector.iter().enumerate() {
            for (bj, &y) in sector.iter().enumerate() {
                rho[(x, y)] = block[(bi, bj)];
            }
        }
    }
    Ok(DensityOperator {
        n_sites: dim,
        matrix: rho,
    })
}

/// `C_ij = Tr(ρ a†_i a_j)`.
pub fn one_body_correlation(rho: &DensityOperator) -> CMatrix {
    let dim = rho.n_sites;
    let mut c = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..rho.matrix.nrows() {
                if let Some((x, sign)) = hop(y, i, j) {
                    acc += rho.matrix[(y, x)] * sign;
                }
            }
            c[(i, j)] = acc;
        }
    }
    c
}

/// Largest elementwise difference of two descending spectra, the shorter
/// one padded with zeros.
pub fn spectrum_deviation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    spectrum_deviation(a, b)
}

/// Deviations between brute-force and closed-form results for one system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// Reduced-state spectrum vs products of `{d_i, 1 - d_i}`.
    pub spectrum: f64,
    pub entropy: f64,
    pub mean: f64,
    pub variance: f64,
    pub kappa4: f64,
    /// Largest per-entry difference of `P(k)`.
    pub distribution: f64,
}

impl Comparison {
    fn between(
        oracle: &OracleCounting,
        closed: &CountingReport,
        products: &[f64],
        distribution: &[f64],
    ) -> Self {
        Self {
            spectrum: spectrum_deviation(&oracle.eigenvalues, products),
            entropy: (oracle.report.entropy_nats - closed.entropy_nats).abs(),
            mean: (oracle.report.mean - closed.mean).abs(),
            variance: (oracle.report.variance - closed.variance).abs(),
            kappa4: (oracle.report.kappa4 - closed.kappa4).abs(),
            distribution: max_abs_diff(&oracle.distribution, distribution),
        }
    }

    /// Largest of all deviations.
    pub fn max_deviation(&self) -> f64 {
        [
            self.spectrum,
            self.entropy,
            self.mean,
            self.variance,
            self.kappa4,
            self.distribution,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Check a Fermi sea against the mode-pair factorization.
pub fn pure_oracle_check(orbitals: &OrbitalSet, region_sites: &[usize]) -> Result<Comparison> {
    let region = RegionProjector::sites(orbitals.dim(), region_sites.iter().copied())?;
    let state = slater_state(orbitals)?;
    let rho = state.partial_trace(region_sites)?;
    let oracle = oracle_counting(&rho);

    let spectrum = factorize(orbitals, &region)?.spectrum();
    let products = eigenvalues_of_rho_a(&spectrum, crate::factorization::MAX_RHO_MODES)?;
    let closed = inequality_report(&spectrum);
    let distribution = number_distribution(&spectrum)?;
    Ok(Comparison::between(
        &oracle,
        &closed,
        &products,
        &distribution,
    ))
}

/// Check the reduced Gibbs state against the restricted occupation
/// operator.
pub fn thermal_oracle_check(sys: &ThermalSystem, region_sites: &[usize]) -> Result<Comparison> {
    let region = RegionProjector::sites(sys.dim(), region_sites.iter().copied())?;
    let rho = gibbs_state(sys)?.partial_trace(region_sites)?;
    let oracle = oracle_counting(&rho);

    let n = occupation_operator(sys);
    let spectrum: OccupationSpectrum = restricted_occupation(&n, &region)?.spectrum();
    let products = eigenvalues_of_rho_a(&spectrum, crate::factorization::MAX_RHO_MODES)?;
    let closed = inequality_report(&spectrum);
    let distribution = number_distribution(&spectrum)?;
    Ok(Comparison::between(
        &oracle,
        &closed,
        &products,
        &distribution,
    ))
}
