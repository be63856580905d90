use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::{Error, Result};

pub const DEFAULT_CAPACITY: usize = 1_000_000;

/// Identity of the space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisTag {
    Atom {
        sites: usize,
        atoms: usize,
    },
    Photon {
        n_max: usize,
    },
    Coupled {
        sites: usize,
        atoms: usize,
        n_max: usize,
    },
}

/// Fixed-N Fock basis over M sites, in descending lexicographic order
/// (`(N,0,…,0)` first).
#[derive(Debug, Clone)]
pub struct AtomBasis {
    n_sites: usize,
    n_atoms: usize,
    states: Vec<Vec<u32>>,
    index_map: BTreeMap<Vec<u32>, usize>,
}

/// `C(N + M − 1, M − 1)`, saturating at `u128::MAX`.
pub fn basis_dimension(n_sites: usize, n_atoms: usize) -> u128 {
    if n_sites == 0 {
        return 0;
    }
    let k = (n_sites - 1).min(n_atoms) as u128;
    let n = (n_atoms + n_sites - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at each step
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn enumerate_basis(n_sites: usize, n_atoms: usize) -> Result<AtomBasis> {
    enumerate_basis_with_capacity(n_sites, n_atoms, DEFAULT_CAPACITY)
}

pub fn enumerate_basis_with_capacity(
    n_sites: usize,
    n_atoms: usize,
    capacity: usize,
) -> Result<AtomBasis> {
    if n_sites == 0 {
        return Err(Error::InvalidInput("basis needs at least one site".into()));
    }
    if n_atoms > u32::MAX as usize {
        return Err(Error::InvalidInput("atom number too large".into()));
    }
    let dim = basis_dimension(n_sites, n_atoms);
    if dim > capacity as u128 {
        return Err(Error::Capacity { dim, cap: capacity });
    }
    let mut states = Vec::with_capacity(dim as usize);
    let mut current = alloc::vec![0u32; n_sites];
    fill(&mut current, 0, n_atoms as u32, &mut states);
    let index_map = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    Ok(AtomBasis {
        n_sites,
        n_atoms,
        states,
        index_map,
    })
}

fn fill(current: &mut [u32], site: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if site + 1 == current.len() {
        current[site] = remaining;
        out.push(current.to_vec());
        return;
    }
    for n in (0..=remaining).rev() {
        current[site] = n;
        fill(current, site + 1, remaining - n, out);
    }
}

impl AtomBasis {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &[u32] {
        &self.states[index]
    }

    pub fn index_of(&self, occupations: &[u32]) -> Option<usize> {
        self.index_map.get(occupations).copied()
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag::Atom {
            sites: self.n_sites,
            atoms: self.n_atoms,
        }
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        Ok(())
    }
}

/// Truncated photon Fock space `|0⟩ … |n_max⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhotonBasis {
    n_max: usize,
}

impl PhotonBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidInput("photon cutoff must be >= 1".into()));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag::Photon { n_max: self.n_max }
    }
}

/// Atoms ⊗ photons; the atom index is slow, the photon index fast.
#[derive(Debug, Clone)]
pub struct CoupledBasis {
    pub atoms: AtomBasis,
    pub photons: PhotonBasis,
}

impl CoupledBasis {
    pub fn new(atoms: AtomBasis, photons: PhotonBasis) -> Self {
        Self { atoms, photons }
    }

    pub fn dim(&self) -> usize {
        self.atoms.dim() * self.photons.dim()
    }

    pub fn index(&self, atom: usize, photons: usize) -> usize {
        atom * self.photons.dim() + photons
    }

    /// `(atom index, photon number)` of a coupled index.
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.photons.dim(), index % self.photons.dim())
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag::Coupled {
            sites: self.atoms.n_sites(),
            atoms: self.atoms.n_atoms(),
            n_max: self.photons.n_max(),
        }
    }
}
