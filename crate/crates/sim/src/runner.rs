//! Scenario pipelines.
//!
//! Sweep points run on a rayon pool of `jobs` threads and come back in sweep
//! order. A point that fails becomes a row of NaN with the message in the
//! `error` column; a run without a sweep fails as a whole instead.

use cavity_lattice::cavity::{
    build_exact_elimination_hamiltonian, mean_photons, pump_for_depth, self_consistent_depth,
    solve_with_elements, ModelParams, ModelSolution, Numerics, SolveMode,
};
use cavity_lattice::fock::{enumerate_basis, CoupledBasis, PhotonBasis};
use cavity_lattice::lattice::MatrixElements;
use cavity_lattice::observables::{
    density_correlations, site_statistics, CorrelationReport, OccupationBasis, SiteStatistics,
};
use cavity_lattice::semiclassical::{
    discard_transient, evolve, linear_fit, prepare_quench_initial, MatrixElementCache, PumpSetting,
};
use rayon::prelude::*;

use crate::config::{mode_name, Scenario, ScenarioConfig, SweepParam};
use crate::table::{ResultTable, Row, CONFIG_PREFIX};

/// Fraction of a quench discarded before the variance fit.
pub const TRANSIENT_FRACTION: f64 = 0.1;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl From<cavity_lattice::Error> for RunError {
    fn from(e: cavity_lattice::Error) -> Self {
        RunError::Numerical(e.to_string())
    }
}

type PointResult = cavity_lattice::Result<Vec<f64>>;

/// Version line written at the top of every table.
pub fn version_line() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

pub fn run_scenario(cfg: &ScenarioConfig, jobs: usize) -> Result<ResultTable, RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    let mut table = pool.install(|| match cfg.scenario {
        Scenario::Fig2a | Scenario::Fig2b => Ok(expansion_sweep(cfg)),
        Scenario::Fig3 => Ok(two_well_splitting(cfg)),
        Scenario::Fig4a => Ok(occupation_sweep(cfg)),
        Scenario::Fig4b | Scenario::Fig5a => Ok(detuning_comparison(cfg)),
        Scenario::Fig5b => quench(cfg),
        Scenario::Custom => Ok(custom(cfg)),
    })?;
    if cfg.sweep.parameter.is_none() {
        if let Some(msg) = table.rows.iter().find_map(|r| r.error.clone()) {
            return Err(RunError::Numerical(msg));
        }
    }
    let mut metadata = vec![version_line()];
    metadata.extend(
        cfg.echo()
            .into_iter()
            .map(|l| format!("{}{l}", CONFIG_PREFIX.trim_start_matches("# "))),
    );
    metadata.append(&mut table.metadata);
    table.metadata = metadata;
    Ok(table)
}

/// Sweep coordinates of every point, outer axis first.
fn grid(cfg: &ScenarioConfig) -> Vec<Vec<(SweepParam, f64)>> {
    let axis = |s: &crate::config::Sweep| {
        s.parameter
            .map(|p| s.values().into_iter().map(|v| (p, v)).collect::<Vec<_>>())
    };
    match (axis(&cfg.sweep), axis(&cfg.sweep2)) {
        (None, _) => vec![Vec::new()],
        (Some(a), None) => a.into_iter().map(|x| vec![x]).collect(),
        (Some(a), Some(b)) => a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| vec![x, y]))
            .collect(),
    }
}

fn sweep_columns(cfg: &ScenarioConfig) -> Vec<String> {
    [cfg.sweep.parameter, cfg.sweep2.parameter]
        .into_iter()
        .flatten()
        .map(SweepParam::column)
        .collect()
}

fn at_point(cfg: &ScenarioConfig, point: &[(SweepParam, f64)]) -> ScenarioConfig {
    let mut c = cfg.clone();
    for &(p, v) in point {
        p.apply(&mut c, v);
    }
    c
}

/// Run `f` on every sweep point; the leading `keys` values of each row are
/// kept when the point fails.
fn sweep_rows<P, F>(
    header: &[String],
    points: Vec<P>,
    keys: impl Fn(&P) -> Vec<f64> + Sync,
    f: F,
) -> Vec<Row>
where
    P: Send + Sync,
    F: Fn(&P) -> PointResult + Sync,
{
    points
        .par_iter()
        .map(|p| {
            let k = keys(p);
            match f(p) {
                Ok(mut rest) => {
                    let mut values = k;
                    values.append(&mut rest);
                    debug_assert_eq!(values.len(), header.len());
                    Row::ok(values)
                }
                Err(e) => {
                    if k.is_empty() {
                        log::warn!("run failed: {e}");
                    } else {
                        log::warn!("point {k:?} failed: {e}");
                    }
                    Row::failed(header.len(), &k, e.to_string())
                }
            }
        })
        .collect()
}

// takes `&Vec` to fit the `Fn(&P)` bound of `sweep_rows` as a plain fn item
#[allow(clippy::ptr_arg)]
fn point_keys(point: &Vec<(SweepParam, f64)>) -> Vec<f64> {
    point.iter().map(|x| x.1).collect()
}

/// Pump and matrix elements: back-solved for a target depth when one is set,
/// otherwise at the self-consistent depth.
fn resolve_pump(
    cfg: &ScenarioConfig,
    p: &mut ModelParams,
    numerics: &Numerics,
    mode: SolveMode,
) -> cavity_lattice::Result<MatrixElements> {
    match cfg.v_eff_target {
        Some(target) => {
            let (eta, me) = pump_for_depth(p, numerics, target, mode)?;
            p.eta = eta;
            Ok(me)
        }
        None => Ok(self_consistent_depth(p, numerics, mode)?.elements),
    }
}

fn statistics(
    p: &ModelParams,
    sol: &ModelSolution,
    site: usize,
) -> cavity_lattice::Result<(SiteStatistics, CorrelationReport)> {
    let atoms = enumerate_basis(p.n_sites, p.n_atoms)?;
    fn stats<B: OccupationBasis>(
        psi: &[cavity_lattice::C64],
        b: &B,
        site: usize,
    ) -> cavity_lattice::Result<(SiteStatistics, CorrelationReport)> {
        Ok((
            site_statistics(psi, b, site)?,
            density_correlations(psi, b)?,
        ))
    }
    match sol.n_max {
        Some(n) => stats(
            &sol.ground.state,
            &CoupledBasis::new(atoms, PhotonBasis::new(n)?),
            site,
        ),
        None => stats(&sol.ground.state, &atoms, site),
    }
}

/// Ground state of the classical lattice of depth `classical_v_cl`.
fn classical(
    cfg: &ScenarioConfig,
    p: &ModelParams,
    numerics: &Numerics,
) -> cavity_lattice::Result<ModelSolution> {
    let pc = ModelParams {
        u0: 0.0,
        eta: 0.0,
        eta_eff: 0.0,
        v_cl: cfg.classical_v_cl,
        ..*p
    };
    let me = numerics.elements(cfg.classical_v_cl, p.a_s)?;
    solve_with_elements(&pc, &me, numerics, SolveMode::ExactElimination)
}

fn relative(a: f64, reference: f64) -> f64 {
    ((a - reference) / reference).abs()
}

/// Field from the second-order expansion against the reference model.
fn expansion_sweep(cfg: &ScenarioConfig) -> ResultTable {
    let mut header = sweep_columns(cfg);
    let n_keys = header.len();
    header.extend(
        [
            "eta[kappa]",
            "delta_c_prime[kappa]",
            "v_eff_exact[E_R]",
            "v_eff_expansion[E_R]",
            "relative_error",
            "photons_exact",
            "photons_expansion",
            "photon_relative_error",
        ]
        .map(String::from),
    );
    let numerics = cfg.numerics.numerics();
    let rows = sweep_rows(&header, grid(cfg), point_keys, |point| {
        let c = at_point(cfg, point);
        let mut p = c.params;
        let me = resolve_pump(&c, &mut p, &numerics, c.mode)?;
        let reference = solve_with_elements(&p, &me, &numerics, c.mode)?;
        // same pump for both models; only the coupled modes use another depth
        let me_exp = if matches!(c.mode, SolveMode::Effective | SolveMode::ExactElimination) {
            me
        } else {
            self_consistent_depth(&p, &numerics, SolveMode::Effective)?.elements
        };
        let expansion = solve_with_elements(&p, &me_exp, &numerics, SolveMode::Effective)?;
        let (ve, vx) = (
            reference.ground.v_eff.unwrap_or(f64::NAN),
            expansion.ground.v_eff.unwrap_or(f64::NAN),
        );
        let (ne, nx) = (
            reference.ground.photon_mean.unwrap_or(f64::NAN),
            expansion.ground.photon_mean.unwrap_or(f64::NAN),
        );
        Ok(vec![
            p.eta,
            p.delta_c_prime(p.field_j0(&me)),
            ve,
            vx,
            relative(vx, ve),
            ne,
            nx,
            relative(nx, ne),
        ])
    });
    debug_assert!(rows.iter().all(|r| r.values.len() == n_keys + 8));
    ResultTable {
        header,
        rows,
        metadata: vec![format!("reference model: {}", mode_name(cfg.mode))],
    }
}

/// `E_sym − E_anti` of one atom in two wells, closed form and numerical.
fn two_well_splitting(cfg: &ScenarioConfig) -> ResultTable {
    let mut header = vec!["u0[kappa]".to_string()];
    header.extend(sweep_columns(cfg));
    header.extend(
        [
            "delta_c_prime[kappa]",
            "delta_e_closed_form[E_R]",
            "delta_e_exact[E_R]",
            "v_eff[E_R]",
            "photons",
        ]
        .map(String::from),
    );
    let numerics = cfg.numerics.numerics();
    let points: Vec<(f64, Vec<(SweepParam, f64)>)> = cfg
        .u0_values
        .iter()
        .flat_map(|&u0| grid(cfg).into_iter().map(move |g| (u0, g)))
        .collect();
    let keys = |(u0, g): &(f64, Vec<(SweepParam, f64)>)| {
        let mut k = vec![*u0];
        k.extend(point_keys(g));
        k
    };
    let rows = sweep_rows(&header, points, keys, |(u0, g)| {
        let mut c = cfg.clone();
        c.params.u0 = *u0;
        let c = at_point(&c, g);
        let mut p = c.params;
        let me = resolve_pump(&c, &mut p, &numerics, c.mode)?;
        let photons = mean_photons(&p, &me, c.mode)?;
        let basis = enumerate_basis(2, 1)?;
        let h = build_exact_elimination_hamiltonian(&p, &me, &basis)?;
        // B eigenstates (1, ±1)/√2: E_sym − E_anti = 2 Re H_01
        let gap = 2.0 * h.get(0, 1).re;
        Ok(vec![
            p.delta_c_prime(p.field_j0(&me)),
            cavity_lattice::observables::energy_gap_two_well(&p, &me),
            gap,
            p.depth_for_photons(photons),
            photons,
        ])
    });
    ResultTable {
        header,
        rows,
        metadata: Vec::new(),
    }
}

/// Occupation probabilities of one well, cavity against classical lattice.
fn occupation_sweep(cfg: &ScenarioConfig) -> ResultTable {
    let n = cfg.params.n_atoms;
    let mut header = sweep_columns(cfg);
    header.push("eta[kappa]".into());
    header.extend((0..=n).map(|i| format!("p_{i}")));
    header.extend((0..=n).map(|i| format!("p_{i}_classical")));
    header.extend(
        [
            "variance",
            "variance_classical",
            "v_eff[E_R]",
            "photons",
            "n_max",
        ]
        .map(String::from),
    );
    let numerics = cfg.numerics.numerics();
    let site = cfg.site - 1;
    let rows = sweep_rows(&header, grid(cfg), point_keys, |point| {
        let c = at_point(cfg, point);
        let mut p = c.params;
        let me = resolve_pump(&c, &mut p, &numerics, c.mode)?;
        let sol = solve_with_elements(&p, &me, &numerics, c.mode)?;
        let (sq, _) = statistics(&p, &sol, site)?;
        let cl = classical(&c, &p, &numerics)?;
        let (sc, _) = statistics(&p, &cl, site)?;
        let mut v = vec![p.eta];
        v.extend(&sq.p_occupation);
        v.extend(&sc.p_occupation);
        v.extend([
            sq.variance_n,
            sc.variance_n,
            sol.ground.v_eff.unwrap_or(f64::NAN),
            sol.ground.photon_mean.unwrap_or(f64::NAN),
            sol.n_max.map_or(f64::NAN, |x| x as f64),
        ]);
        Ok(v)
    });
    ResultTable {
        header,
        rows,
        metadata: vec![format!("cavity model: {}", mode_name(cfg.mode))],
    }
}

fn detuning_label(dc: f64) -> String {
    format!("[delta_c={dc}]")
}

/// Fluctuations (fig4b) or density correlations (fig5a) at several
/// detunings against the classical lattice.
fn detuning_comparison(cfg: &ScenarioConfig) -> ResultTable {
    let correlations = cfg.scenario == Scenario::Fig5a;
    let per_case: &[&str] = if correlations {
        &["corr_diff", "n1n2", "n1n3"]
    } else {
        &["variance", "p_1"]
    };
    let mut header = sweep_columns(cfg);
    let labels: Vec<String> = cfg
        .detunings
        .iter()
        .map(|&d| detuning_label(d))
        .chain(["[classical]".to_string()])
        .collect();
    for l in &labels {
        header.extend(per_case.iter().map(|c| format!("{c}{l}")));
    }
    header.extend(
        cfg.detunings
            .iter()
            .map(|&d| format!("eta{}", detuning_label(d))),
    );
    let numerics = cfg.numerics.numerics();
    let site = cfg.site - 1;
    let pick = |s: &SiteStatistics, r: &CorrelationReport| -> Vec<f64> {
        if correlations {
            vec![
                r.difference_13_12.unwrap_or(f64::NAN),
                r.get(0, 1),
                r.get(0, 2),
            ]
        } else {
            vec![
                s.variance_n,
                s.p_occupation.get(1).copied().unwrap_or(f64::NAN),
            ]
        }
    };
    let rows = sweep_rows(&header, grid(cfg), point_keys, |point| {
        let c = at_point(cfg, point);
        let mut values = Vec::new();
        let mut etas = Vec::new();
        for &dc in &c.detunings {
            let mut p = ModelParams {
                delta_c: dc,
                ..c.params
            };
            let me = resolve_pump(&c, &mut p, &numerics, c.mode)?;
            let sol = solve_with_elements(&p, &me, &numerics, c.mode)?;
            let (s, r) = statistics(&p, &sol, site)?;
            values.extend(pick(&s, &r));
            etas.push(p.eta);
        }
        let cl = classical(&c, &c.params, &numerics)?;
        let (s, r) = statistics(&c.params, &cl, site)?;
        values.extend(pick(&s, &r));
        values.extend(etas);
        Ok(values)
    });
    ResultTable {
        header,
        rows,
        metadata: vec![format!("cavity model: {}", mode_name(cfg.mode))],
    }
}

/// Sudden switch-on of the interaction, mean-field dynamics.
fn quench(cfg: &ScenarioConfig) -> Result<ResultTable, RunError> {
    let p = cfg.params;
    let q = cfg.quench();
    let pump = cfg
        .v_eff_target
        .map_or(PumpSetting::Fixed, PumpSetting::TargetDepth);
    let mut cache = MatrixElementCache::new(cfg.numerics.lattice());
    let init = prepare_quench_initial(&p, &q, pump, &mut cache)?;
    let tr = evolve(&init.psi, init.alpha, &init.params, &q, &mut cache)?;

    let m = p.n_sites;
    let mut header: Vec<String> = [
        "t[1/kappa]",
        "re_alpha",
        "im_alpha",
        "alpha_sq",
        "v_eff[E_R]",
        "norm",
        "hop_mean",
    ]
    .map(String::from)
    .to_vec();
    header.extend((1..=m).map(|k| format!("mean_n_{k}")));
    header.extend((1..=m).map(|k| format!("variance_{k}")));
    let rows = (0..tr.len())
        .map(|i| {
            let a = tr.alpha[i];
            let mut v = vec![
                tr.times[i],
                a.re,
                a.im,
                a.norm_sqr(),
                tr.v_eff[i],
                tr.norm[i],
                tr.hop_mean[i],
            ];
            v.extend(&tr.site_mean[i]);
            v.extend(&tr.site_variance[i]);
            Row::ok(v)
        })
        .collect();

    let site = cfg.site - 1;
    let var = tr.variance_of(site);
    let (t, v) = discard_transient(&tr.times, &var, TRANSIENT_FRACTION);
    let mut metadata = vec![
        format!("pump eta = {} kappa", init.params.eta),
        format!("max norm drift = {:e}", tr.max_norm_drift),
    ];
    match linear_fit(t, v) {
        Ok((slope, intercept)) => metadata.push(format!(
            "variance_{} fit after {}% of the run: slope = {slope:e} per 1/kappa, intercept = {intercept}",
            cfg.site,
            TRANSIENT_FRACTION * 100.0
        )),
        Err(e) => metadata.push(format!("variance fit unavailable: {e}")),
    }
    for w in &tr.warnings {
        metadata.push(format!(
            "warning: |V_eff| = {} E_R below the lowest-band validity bound at t = {}",
            w.v_eff.abs(),
            w.time
        ));
    }
    Ok(ResultTable {
        header,
        rows,
        metadata,
    })
}

/// One ground state per sweep point.
fn custom(cfg: &ScenarioConfig) -> ResultTable {
    let n = cfg.params.n_atoms;
    let mut header = sweep_columns(cfg);
    header.extend(["eta[kappa]", "energy[E_R]", "v_eff[E_R]", "photons"].map(String::from));
    header.extend((0..=n).map(|i| format!("p_{i}")));
    header.extend(["variance", "corr_diff"].map(String::from));
    let numerics = cfg.numerics.numerics();
    let site = cfg.site - 1;
    let rows = sweep_rows(&header, grid(cfg), point_keys, |point| {
        let c = at_point(cfg, point);
        let mut p = c.params;
        let me = resolve_pump(&c, &mut p, &numerics, c.mode)?;
        let sol = solve_with_elements(&p, &me, &numerics, c.mode)?;
        let (s, r) = statistics(&p, &sol, site)?;
        let mut v = vec![
            p.eta,
            sol.ground.energy,
            sol.ground.v_eff.unwrap_or(f64::NAN),
            sol.ground.photon_mean.unwrap_or(f64::NAN),
        ];
        v.extend(&s.p_occupation);
        v.push(s.variance_n);
        v.push(r.difference_13_12.unwrap_or(f64::NAN));
        Ok(v)
    });
    ResultTable {
        header,
        rows,
        metadata: vec![format!("model: {}", mode_name(cfg.mode))],
    }
}
