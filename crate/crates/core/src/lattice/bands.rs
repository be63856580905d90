use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;

use super::KINETIC_PREFACTOR;
use crate::{Error, Result};

/// Depth and discretization of one band-structure calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeDepthSpec {
    /// Lattice depth in E_R. Negative values put the wells at `cos² = 1`.
    pub v_depth: f64,
    /// Odd plane-wave cutoff.
    pub n_planewaves: usize,
    /// Number of quasimomentum samples (even). Also the supercell length in periods.
    pub n_q: usize,
    /// Real-space grid points per period.
    pub n_grid: usize,
}

impl LatticeDepthSpec {
    pub const DEFAULT_PLANEWAVES: usize = 31;
    pub const DEFAULT_QUASIMOMENTA: usize = 32;
    pub const DEFAULT_GRID: usize = 128;

    pub fn new(v_depth: f64) -> Self {
        Self {
            v_depth,
            n_planewaves: Self::DEFAULT_PLANEWAVES,
            n_q: Self::DEFAULT_QUASIMOMENTA,
            n_grid: Self::DEFAULT_GRID,
        }
    }

    pub fn with_depth(self, v_depth: f64) -> Self {
        Self { v_depth, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.v_depth.is_finite() {
            return Err(Error::InvalidInput("lattice depth must be finite".into()));
        }
        if self.n_planewaves < 11 || self.n_planewaves.is_multiple_of(2) {
            return Err(Error::InvalidInput(alloc::format!(
                "n_planewaves must be odd and >= 11, got {}",
                self.n_planewaves
            )));
        }
        if self.n_q < 16 || !self.n_q.is_multiple_of(2) {
            return Err(Error::InvalidInput(alloc::format!(
                "n_q must be even and >= 16, got {}",
                self.n_q
            )));
        }
        if self.n_grid < 64 {
            return Err(Error::InvalidInput(alloc::format!(
                "n_grid must be >= 64, got {}",
                self.n_grid
            )));
        }
        Ok(())
    }

    /// Position of the well of site 0.
    pub fn well_offset(&self) -> f64 {
        if self.v_depth > 0.0 {
            0.5
        } else {
            0.0
        }
    }

    /// Depth of the equivalent problem with the well at the origin, and the
    /// constant energy shift between the two.
    pub(crate) fn centered_frame(&self) -> (f64, f64) {
        if self.v_depth > 0.0 {
            // v cos²(π(y + 1/2)) = v − v cos²(πy)
            (-self.v_depth, self.v_depth)
        } else {
            (self.v_depth, 0.0)
        }
    }
}

/// Lowest band on the symmetric quasimomentum grid
/// `q_j = 2π(j + 1/2)/n_q − π`.
///
/// Coefficients are real plane-wave amplitudes `c_G(q)` of
/// `e^{i(q + 2πG)y}`, `G = −n_pw/2 ..= n_pw/2`, with `y` measured from the
/// well center and the sign fixed so that `Σ_G c_G > 0`.
#[derive(Debug, Clone)]
pub struct BlochSpectrum {
    pub spec: LatticeDepthSpec,
    pub quasimomenta: Vec<f64>,
    pub band_energy: Vec<f64>,
    pub coefficients: Vec<Vec<f64>>,
}

impl BlochSpectrum {
    /// Reciprocal-lattice index of coefficient slot `g`.
    pub fn g_index(&self, g: usize) -> i64 {
        g as i64 - (self.spec.n_planewaves / 2) as i64
    }
}

pub(crate) fn plane_wave_hamiltonian(v_depth: f64, q: f64, n_pw: usize) -> DMatrix<f64> {
    let half = (n_pw / 2) as i64;
    let mut h = DMatrix::<f64>::zeros(n_pw, n_pw);
    for i in 0..n_pw {
        let k = q + 2.0 * PI * (i as i64 - half) as f64;
        h[(i, i)] = KINETIC_PREFACTOR * k * k + 0.5 * v_depth;
        if i + 1 < n_pw {
            h[(i, i + 1)] = 0.25 * v_depth;
            h[(i + 1, i)] = 0.25 * v_depth;
        }
    }
    h
}

fn lowest_state(v_depth: f64, q: f64, n_pw: usize) -> Result<(f64, Vec<f64>)> {
    let h = plane_wave_hamiltonian(v_depth, q, n_pw);
    let asym = (&h - h.transpose()).amax();
    if asym != 0.0 {
        return Err(Error::NonHermitian { residual: asym });
    }
    let eig = h
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or(Error::BandSolve { q })?;
    let (idx, energy) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::BandSolve { q })?;
    if !energy.is_finite() {
        return Err(Error::BandSolve { q });
    }
    let mut c: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    let norm = libm::sqrt(c.iter().map(|x| x * x).sum::<f64>());
    let weight: f64 = c.iter().sum();
    let sign = if weight < 0.0 { -1.0 } else { 1.0 };
    for x in &mut c {
        *x *= sign / norm;
    }
    Ok((energy, c))
}

/// Lowest-band energy at an arbitrary quasimomentum.
pub fn lowest_band_energy(v_depth: f64, n_planewaves: usize, q: f64) -> Result<f64> {
    let spec = LatticeDepthSpec {
        v_depth,
        n_planewaves,
        ..LatticeDepthSpec::new(v_depth)
    };
    spec.validate()?;
    let (v_ref, shift) = spec.centered_frame();
    Ok(lowest_state(v_ref, q, n_planewaves)?.0 + shift)
}

pub fn solve_bloch_band(spec: &LatticeDepthSpec) -> Result<BlochSpectrum> {
    spec.validate()?;
    let (v_ref, shift) = spec.centered_frame();
    let n_q = spec.n_q;
    let mut quasimomenta = Vec::with_capacity(n_q);
    let mut band_energy = Vec::with_capacity(n_q);
    let mut coefficients = Vec::with_capacity(n_q);
    for j in 0..n_q {
        let q = 2.0 * PI * (j as f64 + 0.5) / n_q as f64 - PI;
        let (e, c) = lowest_state(v_ref, q, spec.n_planewaves)?;
        quasimomenta.push(q);
        band_energy.push(e + shift);
        coefficients.push(c);
    }
    Ok(BlochSpectrum {
        spec: *spec,
        quasimomenta,
        band_energy,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_particle_band_is_parabolic() {
        let s = solve_bloch_band(&LatticeDepthSpec::new(0.0)).unwrap();
        for (q, e) in s.quasimomenta.iter().zip(&s.band_energy) {
            let exact = q * q / (PI * PI);
            assert!((e - exact).abs() < 1e-12, "q={q} e={e} exact={exact}");
        }
        let centre = s.spec.n_planewaves / 2;
        for c in &s.coefficients {
            assert!((c[centre] - 1.0).abs() < 1e-12);
            let others: f64 = c
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != centre)
                .map(|(_, x)| x.abs())
                .sum();
            assert!(others < 1e-12);
        }
    }

    #[test]
    fn band_is_symmetric_in_q() {
        let s = solve_bloch_band(&LatticeDepthSpec::new(-6.0)).unwrap();
        let n = s.quasimomenta.len();
        for j in 0..n / 2 {
            let (a, b) = (s.band_energy[j], s.band_energy[n - 1 - j]);
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn planewave_convergence_at_ten_recoils() {
        for &q in &[0.0, 1.0, PI] {
            let a = lowest_band_energy(-10.0, 21, q).unwrap();
            let b = lowest_band_energy(-10.0, 41, q).unwrap();
            assert!(((a - b) / a).abs() < 1e-10, "q={q}: {a} vs {b}");
        }
    }

    #[test]
    fn positive_depth_is_shifted_negative_problem() {
        let a = lowest_band_energy(5.0, 31, 0.7).unwrap();
        let b = lowest_band_energy(-5.0, 31, 0.7).unwrap();
        assert!((a - (b + 5.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_numerics() {
        let mut s = LatticeDepthSpec::new(-4.0);
        s.n_planewaves = 20;
        assert!(matches!(solve_bloch_band(&s), Err(Error::InvalidInput(_))));
        let mut s = LatticeDepthSpec::new(-4.0);
        s.n_q = 15;
        assert!(s.validate().is_err());
        let mut s = LatticeDepthSpec::new(-4.0);
        s.n_grid = 32;
        assert!(s.validate().is_err());
    }
}
