//! Bosonic occupation-number bases and the operators built on them.

mod basis;
mod builders;
mod operator;

pub use basis::{
    basis_dimension, enumerate_basis, enumerate_basis_with_capacity, AtomBasis, BasisTag,
    CoupledBasis, PhotonBasis, DEFAULT_CAPACITY,
};
pub use builders::{
    hop_operator, interaction_operator, number_operator, photon_number_operator, photon_ops,
    staggered_number_operator, tensor, total_number_operator, Boundary,
};
pub use operator::{CsrMatrix, OperatorMatrix, Storage, HERMITIAN_TOLERANCE, SPARSE_THRESHOLD};
