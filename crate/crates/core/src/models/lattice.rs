//! Free fermions on a ring of `L` sites, restricted to a segment.
//!
//! The Fermi sea fills the `N` plane waves `e^{iqj}/√L`, `q = 2πm/L`, of
//! lowest `|q|`. For odd `N` the set `m = -(N-1)/2..=(N-1)/2` is symmetric;
//! for even `N` the convention `m = -N/2+1..=N/2` is used, which adds a
//! phase `e^{iπ(j-k)/L}` to the overlap matrix but leaves its spectrum
//! unchanged. The overlap matrix of a segment of `ℓ` consecutive sites is
//!
//! ```text
//! M_jk = e^{iπ s (j-k)/L} sin(πN(j-k)/L) / (L sin(π(j-k)/L)),   M_jj = N/L,
//! ```
//!
//! with `s = 0` for odd and `s = 1` for even `N`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::counting::{inequality_report, CountingReport};
use crate::error::{Error, Result};
use crate::factorization::OverlapMatrix;
use crate::linalg::CMatrix;

/// Ring size, filling and segment length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRing {
    sites: usize,
    filled: usize,
    segment: usize,
}

impl LatticeRing {
    pub fn new(sites: usize, filled: usize, segment: usize) -> Result<Self> {
        if filled == 0 || filled > sites {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= N <= L, got N = {filled}, L = {sites}"
            )));
        }
        if segment == 0 || segment > sites {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= segment <= L, got {segment} with L = {sites}"
            )));
        }
        Ok(Self {
            sites,
            filled,
            segment,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn filled(&self) -> usize {
        self.filled
    }

    pub fn segment(&self) -> usize {
        self.segment
    }

    /// `false` when `N` is even and the filled set is the shifted,
    /// convention-dependent one.
    pub fn symmetric_filling(&self) -> bool {
        self.filled % 2 == 1
    }

    /// Integer momenta `m` of the filled plane waves, ascending.
    pub fn momenta(&self) -> Vec<i64> {
        let n = self.filled as i64;
        let lo = if n % 2 == 1 { -(n - 1) / 2 } else { -n / 2 + 1 };
        (lo..lo + n).collect()
    }
}

/// Segment overlap matrix of the ring Fermi sea.
pub fn lattice_overlap(ring: &LatticeRing) -> OverlapMatrix {
    let l = ring.sites as f64;
    let n = ring.filled as f64;
    let shift = if ring.symmetric_filling() { 0.0 } else { 1.0 };
    let size = ring.segment;
    let m = CMatrix::from_fn(size, size, |j, k| {
        if j == k {
            return Complex64::new(n / l, 0.0);
        }
        let x = j as f64 - k as f64;
        let magnitude = (PI * n * x / l).sin() / (l * (PI * x / l).sin());
        Complex64::from_polar(1.0, PI * shift * x / l) * magnitude
    });
    // exact Hermiticity
    let m = (&m + m.adjoint()).scale(0.5);
    OverlapMatrix::new(m).expect("Hermitian by construction")
}

/// One segment length of a lattice scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub segment: usize,
    pub report: CountingReport,
}

/// Counting reports for each segment length, in input order.
pub fn lattice_scan(sites: usize, filled: usize, segments: &[usize]) -> Result<Vec<LatticePoint>> {
    segments
        .iter()
        .map(|&segment| {
            let ring = LatticeRing::new(sites, filled, segment)?;
            let spectrum = lattice_overlap(&ring).spectrum()?;
            Ok(LatticePoint {
                segment,
                report: inequality_report(&spectrum),
            })
        })
        .collect()
}
