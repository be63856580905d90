//! Lowest-band physics of the 1D lattice `v_depth · cos²(πx)`.
//!
//! Lengths are in lattice periods (λ/2), energies in E_R, so the kinetic
//! operator is `-(1/π²) d²/dx²`. For `v_depth ≤ 0` the wells sit at integer
//! positions; for `v_depth > 0` they sit at half-integers and the band problem
//! is solved in the frame centered on the well.

mod bands;
mod elements;
mod wannier;

pub use bands::{lowest_band_energy, solve_bloch_band, BlochSpectrum, LatticeDepthSpec};
pub use elements::{
    compute_matrix_elements, matrix_elements_at_depth, overlap_integrals, MatrixElements,
    OverlapIntegrals,
};
pub use wannier::{build_wannier, WannierFunction};

/// `ħ²/2m` in E_R·(λ/2)² units.
pub(crate) const KINETIC_PREFACTOR: f64 = 1.0 / (core::f64::consts::PI * core::f64::consts::PI);

/// Ratio of next-nearest to nearest net hopping above which the tight-binding
/// truncation is flagged.
pub const NEXT_NEAREST_WARNING: f64 = 0.1;
