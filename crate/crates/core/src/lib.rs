//! Entanglement entropy and particle-number statistics of free-fermion
//! states.
//!
//! A Slater determinant restricted to a region factorizes into independent
//! mode pairs, one per eigenvalue `d` of the overlap matrix. Entropy,
//! cumulants and the full counting distribution follow from that spectrum,
//! and obey `S >= 4 ln2 · Var >= -8 ln2 · κ4`.
//!
//! ```
//! use fermisea::factorization::{factorize, OrbitalSet, RegionProjector};
//! use fermisea::counting::inequality_report;
//!
//! let orbitals = OrbitalSet::from_real_rows(&[vec![0.6, 0.8, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
//! let region = RegionProjector::sites(3, [0]).unwrap();
//! let d = factorize(&orbitals, &region).unwrap().spectrum();
//! let report = inequality_report(&d);
//! assert!((report.variance - 0.36 * 0.64).abs() < 1e-12);
//! assert!(report.chain_ok());
//! ```

pub mod counting;
pub mod error;
pub mod factorization;
pub mod linalg;
pub mod models;
pub mod oracle;
pub mod random;
pub mod thermal;

pub use counting::{inequality_report, CountingReport, OccupationSpectrum};
pub use error::{Error, Result};
pub use factorization::{factorize, overlap_matrix, OrbitalSet, RegionProjector};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/factorization.md")]
    mod factorization {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/thermal.md")]
    mod thermal {}
    #[doc = include_str!("../../../book/src/landau.md")]
    mod landau {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
