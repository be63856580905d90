//! Eigensolvers for the ground-state problems.
//!
//! Small problems go through nalgebra's dense Hermitian decomposition; larger
//! ones through a restarted Lanczos iteration that only needs matrix–vector
//! products. Both return the same phase-fixed [`Eigenpair`].

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::fock::OperatorMatrix;
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Problems up to this dimension use the dense solver.
    pub dense_limit: usize,
    /// Target residual `‖Hψ − Eψ‖`.
    pub tolerance: f64,
    pub krylov_dim: usize,
    pub max_restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            dense_limit: 400,
            tolerance: 1e-9,
            krylov_dim: 100,
            max_restarts: 400,
        }
    }
}

impl SolverOptions {
    pub fn dense() -> Self {
        Self {
            dense_limit: usize::MAX,
            ..Self::default()
        }
    }

    pub fn iterative() -> Self {
        Self {
            dense_limit: 0,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub energy: f64,
    pub state: Vec<C64>,
    pub residual: f64,
    /// Lanczos restarts used (0 for the dense path).
    pub iterations: usize,
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let n = m.nrows();
    if m.iter().all(|z| z.im == 0.0) {
        let re = m.map(|z| z.re);
        let eig = re
            .try_symmetric_eigen(f64::EPSILON, 100_000)
            .ok_or(Error::NoConvergence {
                iterations: 100_000,
                residual: f64::NAN,
            })?;
        let order = sorted_order(eig.eigenvalues.as_slice());
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(n, n, |r, c| C64::new(eig.eigenvectors[(r, order[c])], 0.0));
        return Ok((values, vectors));
    }
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 100_000)
        .ok_or(Error::NoConvergence {
            iterations: 100_000,
            residual: f64::NAN,
        })?;
    let order = sorted_order(eig.eigenvalues.as_slice());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
}

/// Make the amplitude on the first basis state real positive; when that
/// amplitude vanishes, use the largest one instead.
pub fn fix_phase(state: &mut [C64]) {
    let Some(first) = state.first().copied() else {
        return;
    };
    let max = state.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let pivot = if first.norm() > 1e-8 * max {
        first
    } else {
        state
            .iter()
            .copied()
            .find(|z| z.norm() >= max * (1.0 - 1e-12))
            .unwrap_or(first)
    };
    if pivot.norm() == 0.0 {
        return;
    }
    let phase = pivot.conj() / pivot.norm();
    for z in state.iter_mut() {
        *z *= phase;
    }
}

pub fn norm(v: &[C64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `‖Hψ − Eψ‖`.
pub fn residual(op: &OperatorMatrix, state: &[C64], energy: f64) -> f64 {
    let hv = op.mul_vec(state);
    libm::sqrt(
        hv.iter()
            .zip(state)
            .map(|(h, s)| (h - s * energy).norm_sqr())
            .sum::<f64>(),
    )
}

/// Lowest eigenpair of a Hermitian operator.
pub fn lowest_eigenpair(op: &OperatorMatrix, opts: &SolverOptions) -> Result<Eigenpair> {
    if !op.is_hermitian() {
        let r = op.hermiticity_residual();
        if r > crate::fock::HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitian { residual: r });
        }
    }
    if op.dim() <= opts.dense_limit {
        dense_lowest(op)
    } else {
        lanczos_lowest(op, opts)
    }
}

/// Dense path. Degenerate ground states are resolved by projecting the first
/// basis state onto the ground eigenspace.
pub fn dense_lowest(op: &OperatorMatrix) -> Result<Eigenpair> {
    let (values, vectors) = hermitian_eigen(&op.to_dense())?;
    let e0 = values[0];
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let n = op.dim();
    let mut state = vec![ZERO; n];
    for (k, &e) in values.iter().enumerate() {
        if e - e0 > 1e-10 * scale {
            break;
        }
        let w = vectors[(0, k)].conj();
        for i in 0..n {
            state[i] += w * vectors[(i, k)];
        }
    }
    let nrm = norm(&state);
    if nrm < 1e-8 {
        state = vectors.column(0).iter().copied().collect();
    } else {
        for z in &mut state {
            *z /= nrm;
        }
    }
    fix_phase(&mut state);
    let residual = residual(op, &state, e0);
    Ok(Eigenpair {
        energy: e0,
        state,
        residual,
        iterations: 0,
    })
}

/// Deterministic start vector weighted towards the first basis state.
fn start_vector(n: usize) -> Vec<C64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let mut v: Vec<C64> = (0..n)
        .map(|i| {
            C64::new(
                1.0 + {
                    let x = (i + 1) as f64 * GOLDEN;
                    x - libm::trunc(x)
                },
                0.0,
            )
        })
        .collect();
    v[0] += C64::new(1.0, 0.0);
    let nrm = norm(&v);
    v.iter_mut().for_each(|z| *z /= nrm);
    v
}

/// Explicitly restarted Lanczos with full reorthogonalization.
pub fn lanczos_lowest(op: &OperatorMatrix, opts: &SolverOptions) -> Result<Eigenpair> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty operator".into()));
    }
    let k_max = opts.krylov_dim.max(2).min(n);
    let mut x = start_vector(n);
    let mut best_residual = f64::INFINITY;
    let mut w = vec![ZERO; n];
    for restart in 0..opts.max_restarts.max(1) {
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(k_max);
        let mut alpha: Vec<f64> = Vec::with_capacity(k_max);
        let mut beta: Vec<f64> = Vec::with_capacity(k_max);
        basis.push(x.clone());
        for j in 0..k_max {
            op.apply(&basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            for (wi, vi) in w.iter_mut().zip(&basis[j]) {
                *wi -= vi * a;
            }
            if j > 0 {
                let b = beta[j - 1];
                for (wi, vi) in w.iter_mut().zip(&basis[j - 1]) {
                    *wi -= vi * b;
                }
            }
            // two passes of classical Gram–Schmidt
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    for (wi, vi) in w.iter_mut().zip(v) {
                        *wi -= vi * c;
                    }
                }
            }
            let b = norm(&w);
            if j + 1 == k_max || b < 1e-13 * (a.abs() + 1.0) {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|z| z / b).collect());
        }
        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = t
            .try_symmetric_eigen(f64::EPSILON, 100_000)
            .ok_or(Error::NoConvergence {
                iterations: restart,
                residual: best_residual,
            })?;
        let (idx, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty tridiagonal");
        let mut ritz = vec![ZERO; n];
        for (i, v) in basis.iter().take(m).enumerate() {
            let y = eig.eigenvectors[(i, idx)];
            for (r, vi) in ritz.iter_mut().zip(v) {
                *r += vi * y;
            }
        }
        let nrm = norm(&ritz);
        ritz.iter_mut().for_each(|z| *z /= nrm);
        let res = residual(op, &ritz, theta);
        best_residual = best_residual.min(res);
        if res < opts.tolerance {
            fix_phase(&mut ritz);
            return Ok(Eigenpair {
                energy: theta,
                state: ritz,
                residual: res,
                iterations: restart + 1,
            });
        }
        x = ritz;
    }
    Err(Error::NoConvergence {
        iterations: opts.max_restarts,
        residual: best_residual,
    })
}

/// Eigenpair with the smallest real part of a general complex matrix
/// (Schur eigenvalues, then inverse iteration for the vector).
pub fn lowest_real_part_eigenpair(m: &DMatrix<C64>) -> Result<(C64, Vec<C64>)> {
    let n = m.nrows();
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 100_000)
        .ok_or(Error::NoConvergence {
            iterations: 100_000,
            residual: f64::NAN,
        })?;
    let (_, t) = schur.unpack();
    let lambda = (0..n)
        .map(|i| t[(i, i)])
        .min_by(|a, b| a.re.total_cmp(&b.re))
        .ok_or(Error::InvalidInput("empty matrix".into()))?;
    let scale = m.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
    let shift = lambda + C64::new(1e-10 * scale, 1e-10 * scale);
    let shifted = m - DMatrix::<C64>::identity(n, n) * shift;
    let lu = shifted.lu();
    let mut x = DVector::from_vec(start_vector(n));
    for _ in 0..8 {
        let y = lu.solve(&x).ok_or(Error::NoConvergence {
            iterations: 0,
            residual: f64::NAN,
        })?;
        let nrm = y.norm();
        x = y / C64::new(nrm, 0.0);
    }
    let mut v: Vec<C64> = x.iter().copied().collect();
    fix_phase(&mut v);
    Ok((lambda, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::BasisTag;

    const TAG: BasisTag = BasisTag::Photon { n_max: 0 };

    fn random_hermitian(n: usize, seed: u64) -> OperatorMatrix {
        let mut s = seed;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, C64::new(4.0 * next(), 0.0)));
            for j in (i + 1)..n {
                if next() > 0.3 {
                    let z = C64::new(next(), next());
                    trip.push((i, j, z));
                    trip.push((j, i, z.conj()));
                }
            }
        }
        OperatorMatrix::from_triplets(TAG, n, trip, true).unwrap()
    }

    #[test]
    fn two_by_two_hop() {
        let op = OperatorMatrix::from_triplets(
            TAG,
            2,
            [(0, 1, C64::new(1.0, 0.0)), (1, 0, C64::new(1.0, 0.0))],
            true,
        )
        .unwrap();
        let gs = lowest_eigenpair(&op, &SolverOptions::default()).unwrap();
        assert!((gs.energy + 1.0).abs() < 1e-14);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((gs.state[0] - C64::new(s, 0.0)).norm() < 1e-12);
        assert!((gs.state[1] + C64::new(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dense_and_iterative_agree_on_random_500() {
        let op = random_hermitian(500, 11);
        let d = lowest_eigenpair(&op, &SolverOptions::dense()).unwrap();
        let l = lowest_eigenpair(&op, &SolverOptions::iterative()).unwrap();
        assert!(
            (d.energy - l.energy).abs() < 1e-9,
            "{} vs {}",
            d.energy,
            l.energy
        );
        assert!(l.residual < 1e-9);
        let overlap: C64 = d
            .state
            .iter()
            .zip(&l.state)
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn degenerate_ground_state_prefers_first_basis_state() {
        // diag(-1, -1, 0) rotated within the degenerate block
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let m = DMatrix::from_row_slice(3, 3, &[-1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        let op = OperatorMatrix::from_dense(TAG, m.map(|x| C64::new(x, 0.0)), true).unwrap();
        let gs = dense_lowest(&op).unwrap();
        assert!((gs.state[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        let _ = s;
    }

    #[test]
    fn phase_is_fixed_on_first_amplitude() {
        let mut v = vec![C64::new(0.0, -0.6), C64::new(0.8, 0.0)];
        fix_phase(&mut v);
        assert!((v[0] - C64::new(0.6, 0.0)).norm() < 1e-15);
        assert!((v[1] - C64::new(0.0, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn non_hermitian_lowest_real_part() {
        // upper triangular: eigenvalues on the diagonal
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(2.0, -1.0),
                C64::new(1.0, 0.0),
                ZERO,
                ZERO,
                C64::new(-1.0, -0.5),
                C64::new(0.3, 0.0),
                ZERO,
                ZERO,
                C64::new(0.5, 0.0),
            ],
        );
        let (lambda, v) = lowest_real_part_eigenpair(&m).unwrap();
        assert!((lambda - C64::new(-1.0, -0.5)).norm() < 1e-12);
        let mv = &m * DVector::from_vec(v.clone());
        for i in 0..3 {
            assert!((mv[i] - lambda * v[i]).norm() < 1e-8);
        }
    }
}
