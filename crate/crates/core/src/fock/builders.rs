use alloc::vec::Vec;

use super::{AtomBasis, BasisTag, OperatorMatrix, PhotonBasis};
use crate::{Error, Result, C64};

/// Boundary condition of the hopping operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Jump operator `B = Σ_k (b†_{k+1} b_k + h.c.)`.
///
/// The periodic variant adds the `M → 1` bond and needs at least three sites.
pub fn hop_operator(basis: &AtomBasis, boundary: Boundary) -> Result<OperatorMatrix> {
    let m = basis.n_sites();
    if boundary == Boundary::Periodic && m < 3 {
        return Err(Error::InvalidInput(alloc::format!(
            "periodic hopping needs at least 3 sites, got {m}"
        )));
    }
    let bonds: Vec<(usize, usize)> = match boundary {
        Boundary::Open => (0..m.saturating_sub(1)).map(|k| (k, k + 1)).collect(),
        Boundary::Periodic => (0..m).map(|k| (k, (k + 1) % m)).collect(),
    };
    let mut trip = Vec::new();
    let mut target = Vec::with_capacity(m);
    for (src, occ) in basis.states().iter().enumerate() {
        for &(a, b) in &bonds {
            // a → b and b → a
            for (from, to) in [(a, b), (b, a)] {
                if occ[from] == 0 {
                    continue;
                }
                let amp = libm::sqrt(occ[from] as f64 * (occ[to] as f64 + 1.0));
                target.clear();
                target.extend_from_slice(occ);
                target[from] -= 1;
                target[to] += 1;
                let dst = basis
                    .index_of(&target)
                    .expect("hop stays inside the fixed-N basis");
                trip.push((dst, src, real(amp)));
            }
        }
    }
    OperatorMatrix::from_triplets(basis.tag(), basis.dim(), trip, true)
}

/// `n̂_site` (0-based site index).
pub fn number_operator(basis: &AtomBasis, site: usize) -> Result<OperatorMatrix> {
    basis.check_site(site)?;
    let diag: Vec<f64> = basis.states().iter().map(|s| s[site] as f64).collect();
    Ok(OperatorMatrix::diagonal(basis.tag(), &diag))
}

/// `N̂ = Σ_k n̂_k`.
pub fn total_number_operator(basis: &AtomBasis) -> OperatorMatrix {
    let diag: Vec<f64> = basis
        .states()
        .iter()
        .map(|s| s.iter().map(|&n| n as f64).sum())
        .collect();
    OperatorMatrix::diagonal(basis.tag(), &diag)
}

/// `Σ_k n̂_k (n̂_k − 1)`; multiply by `U/2` for the on-site interaction.
pub fn interaction_operator(basis: &AtomBasis) -> OperatorMatrix {
    let diag: Vec<f64> = basis
        .states()
        .iter()
        .map(|s| s.iter().map(|&n| n as f64 * (n as f64 - 1.0)).sum())
        .collect();
    OperatorMatrix::diagonal(basis.tag(), &diag)
}

/// `Σ_k (−1)^{k+1} n̂_k` with sites counted from 1, i.e. `+n̂` on even 0-based sites.
pub fn staggered_number_operator(basis: &AtomBasis) -> OperatorMatrix {
    let diag: Vec<f64> = basis
        .states()
        .iter()
        .map(|s| {
            s.iter()
                .enumerate()
                .map(|(k, &n)| if k % 2 == 0 { n as f64 } else { -(n as f64) })
                .sum()
        })
        .collect();
    OperatorMatrix::diagonal(basis.tag(), &diag)
}

/// Truncated ladder operators `(a, a†)`.
pub fn photon_ops(pb: &PhotonBasis) -> (OperatorMatrix, OperatorMatrix) {
    let trip: Vec<_> = (1..pb.dim())
        .map(|n| (n - 1, n, real(libm::sqrt(n as f64))))
        .collect();
    let a = OperatorMatrix::from_triplets(pb.tag(), pb.dim(), trip, false)
        .expect("ladder assembly cannot fail");
    let adag = a.adjoint();
    (a, adag)
}

/// `a†a`, diagonal `0..=n_max`.
pub fn photon_number_operator(pb: &PhotonBasis) -> OperatorMatrix {
    let diag: Vec<f64> = (0..pb.dim()).map(|n| n as f64).collect();
    OperatorMatrix::diagonal(pb.tag(), &diag)
}

/// Kronecker product `A ⊗ P` on atoms ⊗ photons (atom index slow).
pub fn tensor(atom_op: &OperatorMatrix, photon_op: &OperatorMatrix) -> Result<OperatorMatrix> {
    let (sites, atoms) = match atom_op.basis() {
        BasisTag::Atom { sites, atoms } => (sites, atoms),
        other => {
            return Err(Error::BasisMismatch {
                left: other,
                right: photon_op.basis(),
            })
        }
    };
    let n_max = match photon_op.basis() {
        BasisTag::Photon { n_max } => n_max,
        other => {
            return Err(Error::BasisMismatch {
                left: atom_op.basis(),
                right: other,
            })
        }
    };
    let pd = photon_op.dim();
    let pt = photon_op.triplets();
    let mut trip = Vec::with_capacity(atom_op.nnz() * pt.len());
    for (ar, ac, av) in atom_op.triplets() {
        for &(pr, pc, pv) in &pt {
            trip.push((ar * pd + pr, ac * pd + pc, av * pv));
        }
    }
    let tag = BasisTag::Coupled {
        sites,
        atoms,
        n_max,
    };
    let hermitian = atom_op.is_hermitian() && photon_op.is_hermitian();
    let op = OperatorMatrix::from_triplets(tag, atom_op.dim() * pd, trip, false)?;
    Ok(if hermitian {
        op.into_hermitian()?
    } else {
        op.retagged(tag)
    })
}
