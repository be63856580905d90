use alloc::string::String;
use core::fmt;

use crate::fock::BasisTag;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Parameter or numerics validation failed.
    InvalidInput(String),
    /// Plane-wave diagonalization did not converge at this quasimomentum.
    BandSolve {
        q: f64,
    },
    /// Bloch eigenvector has (numerically) no weight at the well center.
    PhaseFixing {
        q: f64,
    },
    /// Basis dimension above the configured cap.
    Capacity {
        dim: u128,
        cap: usize,
    },
    SiteOutOfRange {
        site: usize,
        n_sites: usize,
    },
    BasisMismatch {
        left: BasisTag,
        right: BasisTag,
    },
    NonHermitian {
        residual: f64,
    },
    NoConvergence {
        iterations: usize,
        residual: f64,
    },
    /// Adaptive photon cutoff would pass `Numerics::max_photons`.
    PhotonCutoff {
        needed: usize,
        limit: usize,
    },
    /// Fixed-point iteration for the lattice depth did not settle.
    SelfConsistency {
        last: f64,
        previous: f64,
    },
    /// RK4 norm drift exceeded the abort threshold.
    NormDrift {
        time: f64,
        drift: f64,
    },
    /// Atom-only state without an attached field operator.
    MissingField,
    DegenerateFit,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::BandSolve { q } => {
                write!(f, "plane-wave diagonalization failed at quasimomentum q = {q}")
            }
            Error::PhaseFixing { q } => write!(
                f,
                "cannot fix Bloch phase at quasimomentum q = {q}: no weight at the well center"
            ),
            Error::Capacity { dim, cap } => {
                write!(f, "basis dimension {dim} exceeds capacity {cap}")
            }
            Error::SiteOutOfRange { site, n_sites } => {
                write!(f, "site {site} out of range for {n_sites} sites")
            }
            Error::BasisMismatch { left, right } => {
                write!(f, "basis mismatch: {left:?} vs {right:?}")
            }
            Error::NonHermitian { residual } => {
                write!(f, "operator is not Hermitian (max |A - A^H| = {residual:e})")
            }
            Error::NoConvergence { iterations, residual } => write!(
                f,
                "eigensolver did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::PhotonCutoff { needed, limit } => write!(
                f,
                "photon cutoff {needed} needed, above the limit of {limit}"
            ),
            Error::SelfConsistency { last, previous } => write!(
                f,
                "lattice depth iteration did not converge: last V_eff = {last}, previous = {previous}"
            ),
            Error::NormDrift { time, drift } => write!(
                f,
                "norm drift {drift:e} at t = {time}; reduce dt"
            ),
            Error::MissingField => {
                write!(f, "atom-only state needs an attached field operator")
            }
            Error::DegenerateFit => write!(f, "linear fit is degenerate (all abscissae equal)"),
        }
    }
}

impl core::error::Error for Error {}
