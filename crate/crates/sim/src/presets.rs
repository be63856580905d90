//! Parameter sets of the figure scenarios.
//!
//! Values quoted in the figure captions are checked against
//! `tests/data/captions.txt` by the preset audit test. Everything else here
//! (sweep ranges, numerics) is a choice of this crate.

use cavity_lattice::cavity::SolveMode;

use crate::config::{Scenario, ScenarioConfig, Sweep, SweepParam};

fn sweep(parameter: SweepParam, start: f64, stop: f64, n_points: usize) -> Sweep {
    Sweep {
        parameter: Some(parameter),
        start,
        stop,
        n_points,
    }
}

/// Atoms in four wells of a cavity lattice, pump chosen for `V_eff = −4 E_R`.
fn four_wells(cfg: &mut ScenarioConfig) {
    let p = &mut cfg.params;
    p.n_atoms = 4;
    p.n_sites = 4;
    p.u0 = -1.0;
    p.delta_c = -3.75;
    p.v_cl = 0.0;
    cfg.v_eff_target = Some(-4.0);
    cfg.classical_v_cl = -4.0;
    cfg.sweep = sweep(SweepParam::As, 0.0, 10.0, 21);
}

/// Overwrite `cfg` (fresh from [`ScenarioConfig::base`]) with its preset.
pub fn apply(cfg: &mut ScenarioConfig) {
    match cfg.scenario {
        Scenario::Fig2a | Scenario::Fig2b => {
            let p = &mut cfg.params;
            p.n_atoms = 2;
            p.n_sites = 2;
            p.eta = 2.0;
            p.v_cl = -4.0;
            p.a_s = 0.1;
            p.u0 = -1.0;
            p.delta_c = -3.0;
            cfg.mode = SolveMode::ExactElimination;
            cfg.sweep = sweep(SweepParam::U0, -2.0, -0.1, 20);
            cfg.sweep2 = sweep(SweepParam::DeltaC, -8.0, 0.0, 33);
            // agrees with the default band resolution to ~1e-10 at these depths
            cfg.numerics.n_planewaves = 21;
            cfg.numerics.n_q = 16;
            cfg.numerics.n_grid = 64;
        }
        Scenario::Fig3 => {
            let p = &mut cfg.params;
            p.n_atoms = 1;
            p.n_sites = 2;
            p.eta = 2.0;
            p.v_cl = -4.0;
            p.u0 = -1.2;
            cfg.u0_values = vec![-1.2, -0.4];
            cfg.mode = SolveMode::ExactElimination;
            cfg.sweep = sweep(SweepParam::DeltaC, -6.0, 2.0, 161);
            cfg.numerics.n_planewaves = 21;
            cfg.numerics.n_q = 16;
            cfg.numerics.n_grid = 64;
        }
        Scenario::Fig4a => {
            four_wells(cfg);
            cfg.mode = SolveMode::Coupled;
        }
        Scenario::Fig4b | Scenario::Fig5a => {
            four_wells(cfg);
            cfg.detunings = vec![-5.0, -3.0];
            cfg.mode = SolveMode::ExactElimination;
        }
        Scenario::Fig5b => {
            let p = &mut cfg.params;
            p.n_atoms = 4;
            p.n_sites = 4;
            p.u0 = -1.0;
            p.delta_c = -4.2;
            p.v_cl = 0.0;
            p.a_s = 3.0;
            cfg.v_eff_target = Some(-4.0);
            cfg.a_s_before = 0.0;
            cfg.numerics.t_final = 100.0;
            cfg.numerics.dt = 1e-3;
            cfg.numerics.record_every = 100;
        }
        Scenario::Custom => {}
    }
}
