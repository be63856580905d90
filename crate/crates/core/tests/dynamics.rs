//! Integrator order, conservation and quench set-up of the mean-field dynamics.

use cavity_lattice::cavity::ModelParams;
use cavity_lattice::fock::enumerate_basis;
use cavity_lattice::lattice::LatticeDepthSpec;
use cavity_lattice::observables::site_statistics;
use cavity_lattice::semiclassical::{
    discard_transient, evolve, linear_fit, prepare_quench_initial, MatrixElementCache, PumpSetting,
    QuenchSpec,
};
use cavity_lattice::C64;

fn coarse() -> LatticeDepthSpec {
    LatticeDepthSpec {
        n_planewaves: 21,
        n_q: 16,
        n_grid: 64,
        ..LatticeDepthSpec::new(0.0)
    }
}

fn quench_params() -> ModelParams {
    ModelParams {
        n_atoms: 4,
        n_sites: 4,
        u0: -1.0,
        delta_c: -4.2,
        v_cl: 0.0,
        ..ModelParams::default()
    }
}

fn final_point(dt: f64, t_final: f64, cache: &mut MatrixElementCache) -> (C64, Vec<C64>) {
    let q = QuenchSpec {
        t_final,
        dt,
        record_every: 1_000_000,
        ..QuenchSpec::default()
    };
    let init = prepare_quench_initial(&quench_params(), &q, PumpSetting::TargetDepth(-4.0), cache)
        .unwrap();
    let tr = evolve(&init.psi, init.alpha, &init.params, &q, cache).unwrap();
    (tr.final_alpha, tr.final_state)
}

fn distance(a: &(C64, Vec<C64>), b: &(C64, Vec<C64>)) -> f64 {
    let field = (a.0 - b.0).norm_sqr();
    let atoms: f64 = a.1.iter().zip(&b.1).map(|(x, y)| (x - y).norm_sqr()).sum();
    (field + atoms).sqrt()
}

#[test]
fn rk4_self_convergence_is_fourth_order() {
    let mut cache = MatrixElementCache::new(coarse());
    let runs: Vec<_> = [0.004, 0.002, 0.001, 0.0005]
        .into_iter()
        .map(|dt| final_point(dt, 1.0, &mut cache))
        .collect();
    let diffs: Vec<f64> = runs.windows(2).map(|w| distance(&w[0], &w[1])).collect();
    for w in diffs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 4.0).abs() < 0.3, "order {order} from {diffs:?}");
    }
}

#[test]
fn quench_conserves_norm_and_damps_fluctuations() {
    let mut cache = MatrixElementCache::new(coarse());
    let q = QuenchSpec {
        t_final: 100.0,
        dt: 1e-3,
        ..QuenchSpec::default()
    };
    let init = prepare_quench_initial(
        &quench_params(),
        &q,
        PumpSetting::TargetDepth(-4.0),
        &mut cache,
    )
    .unwrap();
    let tr = evolve(&init.psi, init.alpha, &init.params, &q, &mut cache).unwrap();
    assert!(tr.max_norm_drift < 1e-8, "drift {}", tr.max_norm_drift);
    // index 1 is an inner well; on the open chain the edge wells trend upward
    let var = tr.variance_of(1);
    let (t, v) = discard_transient(&tr.times, &var, 0.1);
    let (slope, _) = linear_fit(t, v).unwrap();
    assert!(slope < 0.0, "slope {slope}");
    assert!(tr.warnings.is_empty());
}

#[test]
fn quench_starts_from_hopping_ground_state() {
    let mut cache = MatrixElementCache::new(coarse());
    let q = QuenchSpec::default();
    let init = prepare_quench_initial(
        &quench_params(),
        &q,
        PumpSetting::TargetDepth(-4.0),
        &mut cache,
    )
    .unwrap();
    // net hopping is negative, so the ground state maximizes B
    assert!(init.hop_mean > 0.0);
    assert!((init.v_eff + 4.0).abs() < 1e-12);
    let basis = enumerate_basis(4, 4).unwrap();
    let s = site_statistics(&init.psi, &basis, 1).unwrap();
    // non-interacting bosons in one orbital: n_k is binomial(N, |φ_k|²)
    let occupied = s.mean_n / 4.0;
    assert!((s.variance_n - 4.0 * occupied * (1.0 - occupied)).abs() < 1e-9);
    let frozen = QuenchSpec {
        a_s_after: 0.0,
        t_final: 1.0,
        dt: 1e-3,
        ..QuenchSpec::default()
    };
    let tr = evolve(&init.psi, init.alpha, &init.params, &frozen, &mut cache).unwrap();
    assert!((tr.final_alpha - init.alpha).norm() < 1e-8);
    assert!((tr.variance_of(1).last().unwrap() - s.variance_n).abs() < 1e-8);
}
