//! Expectation values read off ground states and trajectories.
//!
//! Sites are 0-based. On coupled atom ⊗ photon states the photon index is
//! traced out unless stated otherwise.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cavity::{effective_coefficients, ModelParams};
use crate::fock::{AtomBasis, BasisTag, CoupledBasis, OperatorMatrix};
use crate::lattice::MatrixElements;
use crate::{Error, Result, C64};

/// A basis whose states carry site occupations.
pub trait OccupationBasis {
    fn n_sites(&self) -> usize;
    fn n_atoms(&self) -> usize;
    fn dim(&self) -> usize;
    fn occupations(&self, index: usize) -> &[u32];
}

impl OccupationBasis for AtomBasis {
    fn n_sites(&self) -> usize {
        AtomBasis::n_sites(self)
    }
    fn n_atoms(&self) -> usize {
        AtomBasis::n_atoms(self)
    }
    fn dim(&self) -> usize {
        AtomBasis::dim(self)
    }
    fn occupations(&self, index: usize) -> &[u32] {
        self.state(index)
    }
}

impl OccupationBasis for CoupledBasis {
    fn n_sites(&self) -> usize {
        self.atoms.n_sites()
    }
    fn n_atoms(&self) -> usize {
        self.atoms.n_atoms()
    }
    fn dim(&self) -> usize {
        CoupledBasis::dim(self)
    }
    fn occupations(&self, index: usize) -> &[u32] {
        self.atoms.state(self.split(index).0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteStatistics {
    pub site: usize,
    /// `p[i]` = probability of `i` atoms on the site, `i = 0..=N`.
    pub p_occupation: Vec<f64>,
    pub mean_n: f64,
    pub variance_n: f64,
}

impl SiteStatistics {
    fn from_probabilities(site: usize, p_occupation: Vec<f64>) -> Self {
        let mean_n: f64 = p_occupation
            .iter()
            .enumerate()
            .map(|(i, p)| i as f64 * p)
            .sum();
        let second: f64 = p_occupation
            .iter()
            .enumerate()
            .map(|(i, p)| (i * i) as f64 * p)
            .sum();
        Self {
            site,
            p_occupation,
            mean_n,
            variance_n: second - mean_n * mean_n,
        }
    }
}

fn check_state(len: usize, dim: usize) -> Result<()> {
    if len != dim {
        return Err(Error::InvalidInput(format!(
            "state has {len} amplitudes, basis has dimension {dim}"
        )));
    }
    Ok(())
}

fn check_site(site: usize, n_sites: usize) -> Result<()> {
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    Ok(())
}

fn weights(state: &[C64]) -> Vec<f64> {
    let w: Vec<f64> = state.iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.into_iter().map(|x| x / total).collect()
    } else {
        w
    }
}

/// Occupation distribution of one site.
pub fn site_statistics<B: OccupationBasis>(
    state: &[C64],
    basis: &B,
    site: usize,
) -> Result<SiteStatistics> {
    check_state(state.len(), basis.dim())?;
    check_site(site, basis.n_sites())?;
    let mut p = vec![0.0; basis.n_atoms() + 1];
    for (i, w) in weights(state).into_iter().enumerate() {
        p[basis.occupations(i)[site] as usize] += w;
    }
    Ok(SiteStatistics::from_probabilities(site, p))
}

/// [`site_statistics`] for every site.
pub fn all_site_statistics<B: OccupationBasis>(
    state: &[C64],
    basis: &B,
) -> Result<Vec<SiteStatistics>> {
    (0..basis.n_sites())
        .map(|k| site_statistics(state, basis, k))
        .collect()
}

/// Density–density correlations `⟨n_i n_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub n_sites: usize,
    /// Row-major `M × M` table.
    pub pairs: Vec<f64>,
    /// `⟨n_1 n_3⟩ − ⟨n_1 n_2⟩` with sites counted from 1; absent for `M < 3`.
    pub difference_13_12: Option<f64>,
}

impl CorrelationReport {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pairs[i * self.n_sites + j]
    }

    /// `Σ_{i,j} ⟨n_i n_j⟩ = ⟨N²⟩`.
    pub fn total(&self) -> f64 {
        self.pairs.iter().sum()
    }
}

pub fn density_correlations<B: OccupationBasis>(
    state: &[C64],
    basis: &B,
) -> Result<CorrelationReport> {
    check_state(state.len(), basis.dim())?;
    let m = basis.n_sites();
    let mut pairs = vec![0.0; m * m];
    for (idx, w) in weights(state).into_iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let occ = basis.occupations(idx);
        for i in 0..m {
            for j in 0..m {
                pairs[i * m + j] += w * (occ[i] * occ[j]) as f64;
            }
        }
    }
    let difference_13_12 = (m >= 3).then(|| pairs[2] - pairs[1]);
    Ok(CorrelationReport {
        n_sites: m,
        pairs,
        difference_13_12,
    })
}

/// Closed-form splitting of a single atom in two wells,
/// `ΔE = 2[E + J(V_cl − ħU0η²(κ² − Δ'²)/(κ² + Δ'²)²)]`.
///
/// This is `E_sym − E_anti` for the states with `B = ±1`; it is negative when
/// the symmetric state lies lowest.
pub fn energy_gap_two_well(p: &ModelParams, me: &MatrixElements) -> f64 {
    2.0 * effective_coefficients(p, me).0
}

/// `V_cl + ħU0⟨a†a⟩` in E_R.
///
/// Coupled states carry their own photon number. Atom-only states need the
/// eliminated field operator `a` on the atom space.
pub fn effective_depth(
    state: &[C64],
    basis: BasisTag,
    field: Option<&OperatorMatrix>,
    p: &ModelParams,
) -> Result<f64> {
    let photons = match basis {
        BasisTag::Coupled { n_max, .. } => {
            let d = n_max + 1;
            if !state.len().is_multiple_of(d) {
                return Err(Error::InvalidInput(
                    "state does not fit the coupled basis".into(),
                ));
            }
            let w = weights(state);
            w.iter().enumerate().map(|(i, x)| (i % d) as f64 * x).sum()
        }
        BasisTag::Atom { .. } => {
            let a = field.ok_or(Error::MissingField)?;
            if a.basis() != basis {
                return Err(Error::BasisMismatch {
                    left: a.basis(),
                    right: basis,
                });
            }
            check_state(state.len(), a.dim())?;
            let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
            crate::cavity::photon_mean_with_field(a, state) / norm
        }
        BasisTag::Photon { .. } => {
            return Err(Error::InvalidInput("effective depth needs atoms".into()))
        }
    };
    Ok(p.depth_for_photons(photons))
}

/// Photon-number-resolved atomic statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedStatistics {
    /// `P(n)`.
    pub probability: f64,
    /// Statistics of the atomic state projected on `n` photons.
    pub stats: SiteStatistics,
}

/// Entries with `P(n) < 1e−12` are omitted.
pub fn photon_conditioned_statistics(
    state: &[C64],
    basis: &CoupledBasis,
    site: usize,
) -> Result<BTreeMap<usize, ConditionedStatistics>> {
    check_state(state.len(), basis.dim())?;
    check_site(site, basis.atoms.n_sites())?;
    let n_ph = basis.photons.dim();
    let n_atoms = basis.atoms.n_atoms();
    let mut by_photon = vec![vec![0.0; n_atoms + 1]; n_ph];
    for (idx, w) in weights(state).into_iter().enumerate() {
        let (atom, n) = basis.split(idx);
        by_photon[n][basis.atoms.state(atom)[site] as usize] += w;
    }
    let mut out = BTreeMap::new();
    for (n, p) in by_photon.into_iter().enumerate() {
        let total: f64 = p.iter().sum();
        if total < 1e-12 {
            continue;
        }
        let cond = p.into_iter().map(|x| x / total).collect();
        out.insert(
            n,
            ConditionedStatistics {
                probability: total,
                stats: SiteStatistics::from_probabilities(site, cond),
            },
        );
    }
    Ok(out)
}
