use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::BlochSpectrum;
use crate::{Error, Result};

/// Bloch amplitudes below this are dropped from the Wannier sum.
const AMPLITUDE_FLOOR: f64 = 1e-18;
/// Minimum `|φ_q(0)|` (relative to unit-normalized coefficients) for phase fixing.
const PHASE_WEIGHT_FLOOR: f64 = 1e-8;

/// Real, even, lowest-band Wannier function sampled on the Born–von Kármán
/// supercell of `n_q` periods centered on its site.
///
/// The supercell is antiperiodic (`w(x + n_q) = −w(x)`) because the
/// quasimomentum grid avoids `q = 0, ±π`; products of two Wannier functions are
/// periodic, so trapezoidal sums over the full cell are exact for the
/// band-limited integrands used here.
#[derive(Debug, Clone)]
pub struct WannierFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Second derivative `w''(x)` on the same grid.
    pub curvature: Vec<f64>,
    pub center_site: i64,
    /// Position of the well center (`center_site` plus the well offset).
    pub center: f64,
    pub points_per_period: usize,
    pub n_periods: usize,
    /// Depth the function was built at.
    pub depth: f64,
}

impl WannierFunction {
    pub fn spacing(&self) -> f64 {
        1.0 / self.points_per_period as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `∫ w² dx` by the trapezoidal rule over the periodic cell.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|w| w * w).sum::<f64>() * self.spacing()
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, w| m.max(w.abs()))
    }

    /// Samples of `w(x − shift)` on this grid, i.e. the Wannier function of
    /// site `center_site + shift`.
    pub fn shifted_values(&self, shift: i64) -> Vec<f64> {
        shift_antiperiodic(&self.values, shift * self.points_per_period as i64)
    }

    pub fn shifted_curvature(&self, shift: i64) -> Vec<f64> {
        shift_antiperiodic(&self.curvature, shift * self.points_per_period as i64)
    }

    /// Value at the grid point closest to `x` (no interpolation).
    pub fn nearest_value(&self, x: f64) -> f64 {
        let start = self.grid[0];
        let idx = libm::round((x - start) / self.spacing());
        if idx < 0.0 || idx as usize >= self.values.len() {
            return 0.0;
        }
        self.values[idx as usize]
    }
}

fn shift_antiperiodic(values: &[f64], shift: i64) -> Vec<f64> {
    let n = values.len() as i64;
    (0..n)
        .map(|i| {
            let j = i - shift;
            let wraps = j.div_euclid(n);
            let v = values[j.rem_euclid(n) as usize];
            if wraps % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

/// Build the Wannier function of `center_site` from the lowest Bloch band.
///
/// Uses `w(y) = (1/n_q) Σ_q Σ_G c_G(q) cos((q + 2πG) y)`, which is the real
/// part of the Bloch sum once every `φ_q` is phase fixed to be real and
/// positive at the well center (Kohn's choice for a symmetric potential).
pub fn build_wannier(spectrum: &BlochSpectrum, center_site: i64) -> Result<WannierFunction> {
    let spec = spectrum.spec;
    let n_q = spectrum.quasimomenta.len();
    let per = spec.n_grid;
    let n_points = n_q * per;
    let h = 1.0 / per as f64;
    let center = center_site as f64 + spec.well_offset();
    let y0 = -(n_q as f64) / 2.0;

    for (q, c) in spectrum.quasimomenta.iter().zip(&spectrum.coefficients) {
        let weight: f64 = c.iter().sum();
        if weight < PHASE_WEIGHT_FLOOR {
            return Err(Error::PhaseFixing { q: *q });
        }
    }

    let mut values = vec![0.0; n_points];
    let mut curvature = vec![0.0; n_points];
    let scale = 1.0 / n_q as f64;
    // Re-anchor the rotation recurrence periodically to bound round-off.
    const RESYNC: usize = 128;
    for (q, coeffs) in spectrum.quasimomenta.iter().zip(&spectrum.coefficients) {
        for (g, &c) in coeffs.iter().enumerate() {
            if c.abs() < AMPLITUDE_FLOOR {
                continue;
            }
            let k = q + 2.0 * PI * spectrum.g_index(g) as f64;
            let amp = c * scale;
            let curv_amp = -amp * k * k;
            let (step_s, step_c) = libm::sincos(k * h);
            let mut i = 0;
            while i < n_points {
                let (mut s, mut co) = libm::sincos(k * (y0 + i as f64 * h));
                let end = (i + RESYNC).min(n_points);
                for idx in i..end {
                    values[idx] += amp * co;
                    curvature[idx] += curv_amp * co;
                    let next_c = co * step_c - s * step_s;
                    s = s * step_c + co * step_s;
                    co = next_c;
                }
                i = end;
            }
        }
    }

    let grid = (0..n_points).map(|i| center + y0 + i as f64 * h).collect();
    Ok(WannierFunction {
        grid,
        values,
        curvature,
        center_site,
        center,
        points_per_period: per,
        n_periods: n_q,
        depth: spec.v_depth,
    })
}
