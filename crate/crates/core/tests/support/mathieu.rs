//! Characteristic values of Mathieu's equation `y'' + (a − 2q cos 2z) y = 0`
//! from the three-term recurrences of the Fourier coefficients, solved by
//! Sturm-sequence bisection. Independent of the plane-wave band solver.
//!
//! With `z = πx` the lattice Hamiltonian `−(1/π²)∂² + v cos²(πx)` becomes
//! `−∂_z² + v/2 + (v/2) cos 2z`, i.e. `a = ε − v/2` and `q = v/4`.

#![allow(dead_code)]

const TERMS: usize = 60;

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if q == 0.0 { f64::EPSILON } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn lowest(diag: &[f64], off: &[f64]) -> f64 {
    let radius = |i: usize| {
        let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let r = if i < off.len() { off[i].abs() } else { 0.0 };
        l + r
    };
    let mut lo = (0..diag.len())
        .map(|i| diag[i] - radius(i))
        .fold(f64::INFINITY, f64::min);
    let mut hi = (0..diag.len())
        .map(|i| diag[i] + radius(i))
        .fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `a_0(q)`: even, π-periodic solution `Σ A_{2r} cos 2rz`.
pub fn a0(q: f64) -> f64 {
    let diag: Vec<f64> = (0..TERMS).map(|r| (2 * r * 2 * r) as f64).collect();
    let mut off = vec![q; TERMS - 1];
    off[0] = core::f64::consts::SQRT_2 * q;
    lowest(&diag, &off)
}

/// `a_1(q)`: even, 2π-periodic solution `Σ A_{2r+1} cos (2r+1)z`.
pub fn a1(q: f64) -> f64 {
    let mut diag: Vec<f64> = (0..TERMS)
        .map(|r| ((2 * r + 1) * (2 * r + 1)) as f64)
        .collect();
    diag[0] += q;
    lowest(&diag, &vec![q; TERMS - 1])
}

/// `b_1(q)`: odd, 2π-periodic solution `Σ B_{2r+1} sin (2r+1)z`.
pub fn b1(q: f64) -> f64 {
    let mut diag: Vec<f64> = (0..TERMS)
        .map(|r| ((2 * r + 1) * (2 * r + 1)) as f64)
        .collect();
    diag[0] -= q;
    lowest(&diag, &vec![q; TERMS - 1])
}

/// Bottom (`k = 0`) and top (`k = π`) of the lowest band at depth `v` (E_R).
pub fn band_edges(v: f64) -> (f64, f64) {
    let q = v / 4.0;
    (a0(q) + 0.5 * v, a1(q).min(b1(q)) + 0.5 * v)
}
