//! Physical model builders.

pub mod gamma;
pub mod lattice;
pub mod lll;
pub mod quadrature;

pub use lattice::{lattice_overlap, lattice_scan, LatticePoint, LatticeRing};
pub use lll::{
    lll_mode_profile, lll_occupation, lll_scan, lll_spectrum, mode_mean_radius, mode_normalization,
    DiscretizedDisc, LllDisc, LllPoint,
};
