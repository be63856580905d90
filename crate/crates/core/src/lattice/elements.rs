use core::f64::consts::PI;

use super::{build_wannier, solve_bloch_band, LatticeDepthSpec, WannierFunction};
use super::{KINETIC_PREFACTOR, NEXT_NEAREST_WARNING};
use crate::{Error, Result};

/// The three single-particle overlap integrals between the Wannier functions
/// of two sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapIntegrals {
    /// `∫ w_k (−ħ²/2m ∂²) w_l` in E_R.
    pub kinetic: f64,
    /// `∫ w_k cos²(πx) w_l`.
    pub cos2: f64,
    /// `∫ w_k cos(πx) w_l`.
    pub cos: f64,
}

/// Tight-binding parameters of the lowest band at one lattice depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElements {
    /// Depth (E_R) the Wannier functions were computed at.
    pub depth: f64,
    pub e0: f64,
    pub e1: f64,
    pub j0: f64,
    pub j1: f64,
    /// `J̃_{0,0}`; site `k` carries `(−1)^k · jt0`.
    pub jt0: f64,
    pub jt1: f64,
    /// `∫ w⁴ dx`, in 1/(λ/2).
    pub interaction_integral: f64,
    /// On-site interaction `U = g1d ∫ w⁴` in E_R.
    pub u_onsite: f64,
    /// `|t₂| / |t₁|` with `t_d = E_{0,d} + v·J_{0,d}`; dropped from the model.
    pub next_nearest_ratio: f64,
}

impl MatrixElements {
    /// Net single-particle hopping `E + J·v` for an external depth `v`.
    pub fn hopping(&self, v: f64) -> f64 {
        self.e1 + self.j1 * v
    }

    /// `J̃_{k,k}` including the alternating sign of the `cos` potential.
    pub fn jt0_at(&self, site: usize) -> f64 {
        if site.is_multiple_of(2) {
            self.jt0
        } else {
            -self.jt0
        }
    }

    /// Same elements with a different 1D coupling `g1d`.
    pub fn with_coupling(mut self, g1d: f64) -> Self {
        self.u_onsite = g1d * self.interaction_integral;
        self
    }

    /// True when next-nearest hopping is not negligible (shallow lattice).
    pub fn beyond_tight_binding(&self) -> bool {
        self.next_nearest_ratio > NEXT_NEAREST_WARNING
    }
}

/// Overlap integrals between sites `k` and `l`, evaluated on the grid of `w`.
pub fn overlap_integrals(w: &WannierFunction, k: i64, l: i64) -> OverlapIntegrals {
    let wk = w.shifted_values(k - w.center_site);
    let wl = w.shifted_values(l - w.center_site);
    let cl = w.shifted_curvature(l - w.center_site);
    let h = w.spacing();
    let (mut kinetic, mut cos2, mut cos) = (0.0, 0.0, 0.0);
    for (i, x) in w.grid.iter().enumerate() {
        let c = libm::cos(PI * x);
        let p = wk[i] * wl[i];
        kinetic -= wk[i] * cl[i];
        cos2 += p * c * c;
        cos += p * c;
    }
    OverlapIntegrals {
        kinetic: kinetic * KINETIC_PREFACTOR * h,
        cos2: cos2 * h,
        cos: cos * h,
    }
}

pub fn compute_matrix_elements(w: &WannierFunction, g1d: f64) -> Result<MatrixElements> {
    if !(g1d >= 0.0) {
        return Err(Error::InvalidInput(alloc::format!(
            "interaction coupling must be >= 0, got {g1d}"
        )));
    }
    let norm = w.norm_sq();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(alloc::format!(
            "Wannier function not normalized (norm² = {norm})"
        )));
    }
    let c = w.center_site;
    let onsite = overlap_integrals(w, c, c);
    let nearest = overlap_integrals(w, c, c + 1);
    let next = overlap_integrals(w, c, c + 2);
    let sign = if c.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let v = w.depth;
    let t1 = nearest.kinetic + v * nearest.cos2;
    let t2 = next.kinetic + v * next.cos2;
    let h = w.spacing();
    let interaction_integral = w.values.iter().map(|x| (x * x) * (x * x)).sum::<f64>() * h;
    Ok(MatrixElements {
        depth: v,
        e0: onsite.kinetic,
        e1: nearest.kinetic,
        j0: onsite.cos2,
        j1: nearest.cos2,
        jt0: sign * onsite.cos,
        jt1: sign * nearest.cos,
        interaction_integral,
        u_onsite: g1d * interaction_integral,
        next_nearest_ratio: if t1 == 0.0 {
            f64::INFINITY
        } else {
            (t2 / t1).abs()
        },
    })
}

/// Band solve, Wannier construction and matrix elements in one call.
pub fn matrix_elements_at_depth(spec: &LatticeDepthSpec, g1d: f64) -> Result<MatrixElements> {
    let spectrum = solve_bloch_band(spec)?;
    let w = build_wannier(&spectrum, 0)?;
    compute_matrix_elements(&w, g1d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elements(v: f64) -> MatrixElements {
        matrix_elements_at_depth(&LatticeDepthSpec::new(v), 1.0).unwrap()
    }

    #[test]
    fn zero_coupling_gives_zero_interaction() {
        let me = matrix_elements_at_depth(&LatticeDepthSpec::new(-4.0), 0.0).unwrap();
        assert_eq!(me.u_onsite, 0.0);
        assert!(me.interaction_integral > 0.0);
    }

    #[test]
    fn negative_coupling_rejected() {
        let spectrum = solve_bloch_band(&LatticeDepthSpec::new(-4.0)).unwrap();
        let w = build_wannier(&spectrum, 0).unwrap();
        assert!(compute_matrix_elements(&w, -1.0).is_err());
    }

    #[test]
    fn bounds_on_cos2_overlaps() {
        for v in [-1.0, -4.0, -10.0, 2.0] {
            let me = elements(v);
            assert!((0.0..=1.0).contains(&me.j0), "v={v} j0={}", me.j0);
            assert!(me.j1.abs() <= me.j0);
            assert!(me.u_onsite >= 0.0);
        }
    }

    #[test]
    fn cos_overlap_alternates_and_vanishes_between_neighbours() {
        let spectrum = solve_bloch_band(&LatticeDepthSpec::new(-4.0)).unwrap();
        let w = build_wannier(&spectrum, 0).unwrap();
        let a = overlap_integrals(&w, 0, 0).cos;
        let b = overlap_integrals(&w, 1, 1).cos;
        assert!(a > 0.1);
        assert!((a + b).abs() < 1e-12);
        assert!(overlap_integrals(&w, 0, 1).cos.abs() < 1e-12);
        let me = compute_matrix_elements(&w, 1.0).unwrap();
        assert_eq!(me.jt0_at(3), -me.jt0);
    }

    #[test]
    fn shallow_lattice_is_flagged() {
        assert!(elements(-1.0).beyond_tight_binding());
        assert!(!elements(-4.0).beyond_tight_binding());
    }

    #[test]
    fn positive_depth_puts_wells_on_nodes() {
        let neg = elements(-6.0);
        let pos = elements(6.0);
        // cos² ↔ sin² under the half-period shift
        assert!((pos.j0 - (1.0 - neg.j0)).abs() < 1e-10);
        assert!((pos.j1 + neg.j1).abs() < 1e-10);
        assert!((pos.e1 - neg.e1).abs() < 1e-10);
        assert!(pos.jt0.abs() < 1e-12);
    }
}
