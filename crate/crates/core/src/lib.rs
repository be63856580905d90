//! Generalized Bose–Hubbard model for ultracold bosons in an optical lattice
//! formed by a quantized cavity mode.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the whole numerical
//! pipeline: lowest-band Bloch/Wannier construction and tight-binding matrix
//! elements ([`lattice`]), bosonic Fock bases and operators ([`fock`]),
//! Hamiltonian assembly and field elimination ([`cavity`]), state observables
//! ([`observables`]) and mean-field atom–field dynamics ([`semiclassical`]).
//!
//! Units: lengths in λ/2 (one lattice period), energies in the recoil energy
//! E_R, ħ = 1. Cavity quantities (U0, Δc, κ, η) are given in units of κ and
//! converted to E_R through [`cavity::ModelParams::kappa_in_recoils`]. Times in
//! the dynamics are measured in 1/κ.

#![no_std]
#![allow(clippy::too_many_arguments)]
// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cavity;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod observables;
pub mod semiclassical;

pub use error::{Error, Result};

/// Complex scalar used for all state vectors and operators.
pub type C64 = num_complex::Complex64;
