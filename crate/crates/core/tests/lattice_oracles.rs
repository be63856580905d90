//! Band structure and tight-binding elements checked against oracles that do
//! not go through the Wannier construction.

#[path = "support/mathieu.rs"]
mod mathieu;

use std::f64::consts::PI;

use cavity_lattice::lattice::{
    build_wannier, lowest_band_energy, matrix_elements_at_depth, overlap_integrals,
    solve_bloch_band, LatticeDepthSpec, MatrixElements,
};

fn elements(v: f64) -> MatrixElements {
    matrix_elements_at_depth(&LatticeDepthSpec::new(v), 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn band_edges_match_mathieu_values() {
    for v in [-0.5, -1.0, -2.0, -4.0, -7.5, -10.0, -20.0, -40.0, -60.0] {
        let (bottom, top) = mathieu::band_edges(v);
        let n_pw = LatticeDepthSpec::DEFAULT_PLANEWAVES;
        let e0 = lowest_band_energy(v, n_pw, 0.0).unwrap();
        let epi = lowest_band_energy(v, n_pw, PI).unwrap();
        assert!(rel(e0, bottom) < 1e-8, "v={v}: bottom {e0} vs {bottom}");
        assert!(rel(epi, top) < 1e-8, "v={v}: top {epi} vs {top}");
    }
}

#[test]
fn mathieu_oracle_free_particle_and_symmetry() {
    assert!(mathieu::a0(0.0).abs() < 1e-13);
    assert!((mathieu::a1(0.0) - 1.0).abs() < 1e-13);
    // a1(−q) = b1(q)
    for q in [0.3, 1.0, 5.0] {
        assert!((mathieu::a1(-q) - mathieu::b1(q)).abs() < 1e-10);
    }
    // small-q series a0 ≈ −q²/2
    let q = 1e-3;
    assert!((mathieu::a0(q) + 0.5 * q * q).abs() < 1e-12);
}

/// Tight-binding elements from the band alone: `t_d = ⟨ε(q) cos qd⟩_q` and,
/// by Hellmann–Feynman, `J_{0,d} = ⟨∂ε/∂v cos qd⟩_q`.
fn k_space_elements(v: f64) -> (f64, f64, f64, f64) {
    let spec = LatticeDepthSpec::new(v);
    let n_pw = spec.n_planewaves;
    let h = 1e-4;
    let mut acc = [0.0; 4];
    let n = spec.n_q;
    for j in 0..n {
        let q = 2.0 * PI * (j as f64 + 0.5) / n as f64 - PI;
        let e = lowest_band_energy(v, n_pw, q).unwrap();
        let de = (lowest_band_energy(v + h, n_pw, q).unwrap()
            - lowest_band_energy(v - h, n_pw, q).unwrap())
            / (2.0 * h);
        acc[0] += e;
        acc[1] += e * q.cos();
        acc[2] += de;
        acc[3] += de * q.cos();
    }
    let [t0, t1, j0, j1] = acc.map(|x| x / n as f64);
    (t0 - v * j0, t1 - v * j1, j0, j1)
}

#[test]
fn elements_agree_with_band_fourier_coefficients() {
    for v in [-2.0, -4.0, -8.0, -15.0] {
        let me = elements(v);
        let (e0, e1, j0, j1) = k_space_elements(v);
        assert!((me.e0 - e0).abs() < 1e-7, "v={v}: e0 {} vs {e0}", me.e0);
        assert!((me.e1 - e1).abs() < 1e-7, "v={v}: e1 {} vs {e1}", me.e1);
        assert!((me.j0 - j0).abs() < 1e-7, "v={v}: j0 {} vs {j0}", me.j0);
        assert!((me.j1 - j1).abs() < 1e-7, "v={v}: j1 {} vs {j1}", me.j1);
    }
}

#[test]
fn reference_values_at_four_recoils() {
    let me = elements(-4.0);
    assert!((me.e0 - 0.6956).abs() < 1e-4);
    assert!((me.e1 + 0.17537).abs() < 1e-5);
    assert!((me.j0 - 0.74771).abs() < 1e-5);
    assert!((me.j1 + 0.022471).abs() < 1e-6);
    assert!((me.jt0 - 0.82789).abs() < 1e-5);
    assert!((me.interaction_integral - 1.49318).abs() < 1e-5);
}

#[test]
fn deep_lattice_overlap_follows_harmonic_width() {
    // Gaussian ground state of the harmonic well: ⟨cos 2πx⟩ = e^{−1/√|v|}
    let mut previous = f64::INFINITY;
    for v in [-30.0, -60.0, -120.0] {
        let me = elements(v);
        let harmonic = 0.5 * (1.0 + (-1.0 / (-v).sqrt()).exp());
        let ratio = (1.0 - me.j0) / (1.0 - harmonic);
        let mismatch = (ratio - 1.0).abs();
        assert!(mismatch < 0.1, "v={v}: ratio {ratio}");
        assert!(mismatch < previous, "v={v}: harmonic limit not approached");
        previous = mismatch;
    }
}

#[test]
fn net_hopping_decreases_monotonically_with_depth() {
    let mut previous = f64::INFINITY;
    let mut v = -3.0;
    while v >= -20.0 {
        let me = elements(v);
        let t = me.hopping(v).abs();
        assert!(t < previous, "v={v}: |t|={t} not below {previous}");
        assert!(me.hopping(v) < 0.0);
        previous = t;
        v -= 0.5;
    }
}

#[test]
fn doubling_grid_leaves_elements_unchanged() {
    for v in [-4.0, -10.0] {
        let coarse = LatticeDepthSpec::new(v);
        let fine = LatticeDepthSpec {
            n_grid: 2 * coarse.n_grid,
            ..coarse
        };
        let a = matrix_elements_at_depth(&coarse, 1.0).unwrap();
        let b = matrix_elements_at_depth(&fine, 1.0).unwrap();
        for (x, y) in [
            (a.e0, b.e0),
            (a.e1, b.e1),
            (a.j0, b.j0),
            (a.j1, b.j1),
            (a.jt0, b.jt0),
            (a.interaction_integral, b.interaction_integral),
        ] {
            assert!(rel(x, y) < 1e-8, "v={v}: {x} vs {y}");
        }
    }
}

#[test]
fn doubling_planewaves_leaves_bands_unchanged() {
    let spectra: Vec<_> = [21, 41]
        .into_iter()
        .map(|n_planewaves| {
            solve_bloch_band(&LatticeDepthSpec {
                n_planewaves,
                ..LatticeDepthSpec::new(-10.0)
            })
            .unwrap()
        })
        .collect();
    for (a, b) in spectra[0].band_energy.iter().zip(&spectra[1].band_energy) {
        assert!(rel(*a, *b) < 1e-10);
    }
}

#[test]
fn overlaps_are_symmetric_and_translation_invariant() {
    let spectrum = solve_bloch_band(&LatticeDepthSpec::new(-5.0)).unwrap();
    let w = build_wannier(&spectrum, 0).unwrap();
    let o01 = overlap_integrals(&w, 0, 1);
    let o10 = overlap_integrals(&w, 1, 0);
    let o12 = overlap_integrals(&w, 1, 2);
    assert!((o01.kinetic - o10.kinetic).abs() < 1e-12);
    assert!((o01.cos2 - o10.cos2).abs() < 1e-12);
    assert!((o01.kinetic - o12.kinetic).abs() < 1e-10);
    assert!((o01.cos2 - o12.cos2).abs() < 1e-10);
    let d0 = overlap_integrals(&w, 0, 0);
    let d1 = overlap_integrals(&w, 1, 1);
    assert!((d0.cos + d1.cos).abs() < 1e-10, "cos overlap alternates");
}
