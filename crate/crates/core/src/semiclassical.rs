//! Mean-field atom–field dynamics: a classical cavity amplitude `α(t)` coupled
//! to a many-body atomic state `ψ(t)` in the instantaneous lattice.
//!
//! Times are in 1/κ. With `K = ħκ/E_R`,
//!
//! ```text
//! dα/dτ = [i(Δc − U0⟨J0 N + J B⟩) − κ] α + η
//! dψ/dτ = −(i/K) ([E + J(V_cl + ħU0|α|²)] B + (U/2) Σ n(n − 1)) ψ
//! ```
//!
//! with `E`, `J`, `J0` and `U` taken at the instantaneous depth
//! `V_eff = V_cl + ħU0|α|²`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::cavity::ModelParams;
use crate::fock::{enumerate_basis, hop_operator, interaction_operator, AtomBasis, OperatorMatrix};
use crate::lattice::{matrix_elements_at_depth, LatticeDepthSpec, MatrixElements};
use crate::linalg::{lowest_eigenpair, norm, SolverOptions};
use crate::observables::all_site_statistics;
use crate::{Error, Result, C64};

/// Below this `|V_eff|` (E_R) the lowest-band description is flagged.
pub const SHALLOW_LATTICE: f64 = 2.0;
/// Norm drift that aborts a run.
pub const NORM_ABORT: f64 = 1e-6;

/// Sudden switch-on of the on-site interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchSpec {
    /// Interaction scale of the initial state (E_R).
    pub a_s_before: f64,
    /// Interaction scale during the evolution (E_R).
    pub a_s_after: f64,
    pub t_final: f64,
    pub dt: f64,
    /// Matrix elements follow `α` at every RK stage for 1; for `k > 1` they
    /// are frozen over blocks of `k` steps.
    pub recompute_cadence: usize,
    /// Observables are recorded every this many steps (and at the end).
    pub record_every: usize,
    /// State vectors are stored every this many steps; 0 disables snapshots.
    pub snapshot_every: usize,
}

impl Default for QuenchSpec {
    fn default() -> Self {
        Self {
            a_s_before: 0.0,
            a_s_after: 3.0,
            t_final: 100.0,
            dt: 1e-3,
            recompute_cadence: 1,
            record_every: 100,
            snapshot_every: 0,
        }
    }
}

impl QuenchSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidInput(alloc::format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidInput(alloc::format!(
                "t_final must be > 0, got {}",
                self.t_final
            )));
        }
        if self.recompute_cadence == 0 || self.record_every == 0 {
            return Err(Error::InvalidInput(
                "recompute_cadence and record_every must be >= 1".into(),
            ));
        }
        if self.a_s_before < 0.0 || self.a_s_after < 0.0 {
            return Err(Error::InvalidInput("a_s must be >= 0".into()));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        libm::ceil((self.t_final / self.dt) - 1e-9).max(1.0) as usize
    }
}

const FIELDS: usize = 8;

fn pack(me: &MatrixElements) -> [f64; FIELDS] {
    [
        me.e0,
        me.e1,
        me.j0,
        me.j1,
        me.jt0,
        me.jt1,
        me.interaction_integral,
        me.next_nearest_ratio,
    ]
}

/// Matrix elements on a uniform depth grid, evaluated through a cubic
/// B-spline quasi-interpolant (fourth order, twice differentiable).
///
/// Grid nodes are band-solved lazily and kept. `u_onsite` of the returned
/// elements is the bare `∫w⁴`; scale it with the interaction strength.
#[derive(Debug, Clone)]
pub struct MatrixElementCache {
    lattice: LatticeDepthSpec,
    spacing: f64,
    nodes: BTreeMap<i64, [f64; FIELDS]>,
}

impl MatrixElementCache {
    pub const DEFAULT_SPACING: f64 = 0.01;

    pub fn new(lattice: LatticeDepthSpec) -> Self {
        Self::with_spacing(lattice, Self::DEFAULT_SPACING)
    }

    pub fn with_spacing(lattice: LatticeDepthSpec, spacing: f64) -> Self {
        Self {
            lattice,
            spacing,
            nodes: BTreeMap::new(),
        }
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of band solves performed so far.
    pub fn solved_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn node(&mut self, i: i64) -> Result<[f64; FIELDS]> {
        if let Some(v) = self.nodes.get(&i) {
            return Ok(*v);
        }
        let me = matrix_elements_at_depth(&self.lattice.with_depth(i as f64 * self.spacing), 1.0)?;
        let v = pack(&me);
        self.nodes.insert(i, v);
        Ok(v)
    }

    fn coefficient(&mut self, k: i64) -> Result<[f64; FIELDS]> {
        let (a, b, c) = (self.node(k - 1)?, self.node(k)?, self.node(k + 1)?);
        let mut out = [0.0; FIELDS];
        for f in 0..FIELDS {
            out[f] = (-a[f] + 8.0 * b[f] - c[f]) / 6.0;
        }
        Ok(out)
    }

    pub fn at(&mut self, depth: f64) -> Result<MatrixElements> {
        if !depth.is_finite() {
            return Err(Error::InvalidInput("lattice depth must be finite".into()));
        }
        let x = depth / self.spacing;
        let i = libm::floor(x);
        let u = x - i;
        let i = i as i64;
        let w = [
            (1.0 - u) * (1.0 - u) * (1.0 - u) / 6.0,
            (3.0 * u * u * u - 6.0 * u * u + 4.0) / 6.0,
            (-3.0 * u * u * u + 3.0 * u * u + 3.0 * u + 1.0) / 6.0,
            u * u * u / 6.0,
        ];
        let mut s = [0.0; FIELDS];
        for (off, wk) in w.iter().enumerate() {
            let c = self.coefficient(i - 1 + off as i64)?;
            for f in 0..FIELDS {
                s[f] += wk * c[f];
            }
        }
        Ok(MatrixElements {
            depth,
            e0: s[0],
            e1: s[1],
            j0: s[2],
            j1: s[3],
            jt0: s[4],
            jt1: s[5],
            interaction_integral: s[6],
            u_onsite: s[6],
            next_nearest_ratio: s[7],
        })
    }
}

/// Atom-space operators used by the dynamics.
#[derive(Debug, Clone)]
pub struct AtomOperators {
    pub basis: AtomBasis,
    pub hop: OperatorMatrix,
    /// `Σ n(n − 1)`.
    pub interaction: OperatorMatrix,
    /// Midpoint of the `Σ n(n − 1)` spectrum. The propagator subtracts it,
    /// which only changes the global phase but keeps the RK4 amplification
    /// factor closer to one.
    pub interaction_center: f64,
}

impl AtomOperators {
    pub fn new(p: &ModelParams) -> Result<Self> {
        p.validate()?;
        let basis = enumerate_basis(p.n_sites, p.n_atoms)?;
        let hop = hop_operator(&basis, p.boundary)?;
        let interaction = interaction_operator(&basis);
        let n = p.n_atoms as f64;
        Ok(Self {
            basis,
            hop,
            interaction,
            interaction_center: 0.5 * n * (n - 1.0),
        })
    }

    /// Atomic Hamiltonian in E_R at field intensity `|α|²`.
    pub fn hamiltonian(
        &self,
        p: &ModelParams,
        me: &MatrixElements,
        intensity: f64,
    ) -> Result<OperatorMatrix> {
        let t = me.e1 + me.j1 * p.depth_for_photons(intensity);
        let u = p.a_s * me.interaction_integral;
        self.hop
            .scale_real(t)
            .add(&self.interaction.scale_real(0.5 * u))
    }
}

fn expectation_normalized(op: &OperatorMatrix, psi: &[C64]) -> f64 {
    let n2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    op.expectation(psi).re / n2
}

/// Right-hand side of the coupled equations; `me` must belong to the depth
/// set by `alpha`. `p.a_s` sets the interaction. The atomic part is taken
/// relative to `ops.interaction_center`, so `ψ` picks up a global phase.
pub fn rhs(
    alpha: C64,
    psi: &[C64],
    p: &ModelParams,
    me: &MatrixElements,
    ops: &AtomOperators,
) -> (C64, Vec<C64>) {
    let b_mean = expectation_normalized(&ops.hop, psi);
    let shifted = p.delta_c - p.u0 * (p.field_j0(me) * p.n_atoms as f64 + me.j1 * b_mean);
    let dalpha = C64::new(-p.kappa, shifted) * alpha + p.eta;

    let t = me.e1 + me.j1 * p.depth_for_photons(alpha.norm_sqr());
    let half_u = 0.5 * p.a_s * me.interaction_integral;
    let bpsi = ops.hop.mul_vec(psi);
    let ipsi = ops.interaction.mul_vec(psi);
    let scale = C64::new(0.0, -1.0 / p.kappa_in_recoils);
    let center = ops.interaction_center;
    let dpsi = bpsi
        .iter()
        .zip(&ipsi)
        .zip(psi)
        .map(|((b, i), s)| scale * (b * t + (i - s * center) * half_u))
        .collect();
    (dalpha, dpsi)
}

/// Shallow-lattice validity warning raised during a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShallowLatticeWarning {
    pub time: f64,
    pub v_eff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub alpha: Vec<C64>,
    pub v_eff: Vec<f64>,
    /// `‖ψ‖` of the propagated state; it is never renormalized.
    pub norm: Vec<f64>,
    pub hop_mean: Vec<f64>,
    /// `[record][site]`.
    pub site_mean: Vec<Vec<f64>>,
    pub site_variance: Vec<Vec<f64>>,
    pub snapshots: Vec<(f64, Vec<C64>)>,
    pub warnings: Vec<ShallowLatticeWarning>,
    pub final_state: Vec<C64>,
    pub final_alpha: C64,
    pub max_norm_drift: f64,
    pub steps: usize,
}

impl Trajectory {
    /// Variance time series of one site.
    pub fn variance_of(&self, site: usize) -> Vec<f64> {
        self.site_variance.iter().map(|v| v[site]).collect()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn axpy(out: &mut Vec<C64>, base: &[C64], k: &[C64], h: f64) {
    out.clear();
    out.extend(base.iter().zip(k).map(|(b, d)| b + d * h));
}

/// Fixed-step RK4 integration of the coupled equations from `(psi0, alpha0)`
/// with interaction `q.a_s_after`.
pub fn evolve(
    psi0: &[C64],
    alpha0: C64,
    p: &ModelParams,
    q: &QuenchSpec,
    cache: &mut MatrixElementCache,
) -> Result<Trajectory> {
    q.validate()?;
    let p = ModelParams {
        a_s: q.a_s_after,
        ..*p
    };
    let ops = AtomOperators::new(&p)?;
    if psi0.len() != ops.basis.dim() {
        return Err(Error::InvalidInput(alloc::format!(
            "initial state has {} amplitudes, basis has {}",
            psi0.len(),
            ops.basis.dim()
        )));
    }
    let n0 = norm(psi0);
    if (n0 - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(alloc::format!(
            "initial state must be normalized, got norm {n0}"
        )));
    }
    let n_steps = q.n_steps();
    let dt = q.t_final / n_steps as f64;

    let mut traj = Trajectory {
        times: Vec::new(),
        alpha: Vec::new(),
        v_eff: Vec::new(),
        norm: Vec::new(),
        hop_mean: Vec::new(),
        site_mean: Vec::new(),
        site_variance: Vec::new(),
        snapshots: Vec::new(),
        warnings: Vec::new(),
        final_state: Vec::new(),
        final_alpha: alpha0,
        max_norm_drift: 0.0,
        steps: n_steps,
    };
    let mut shallow = false;
    let record = |traj: &mut Trajectory, t: f64, alpha: C64, psi: &[C64]| -> Result<()> {
        let nrm = norm(psi);
        let unit: Vec<C64> = psi.iter().map(|z| z / nrm).collect();
        let v = p.depth_for_photons(alpha.norm_sqr());
        let stats = all_site_statistics(&unit, &ops.basis)?;
        traj.times.push(t);
        traj.alpha.push(alpha);
        traj.v_eff.push(v);
        traj.norm.push(nrm);
        traj.hop_mean.push(ops.hop.expectation(&unit).re);
        traj.site_mean
            .push(stats.iter().map(|s| s.mean_n).collect());
        traj.site_variance
            .push(stats.iter().map(|s| s.variance_n).collect());
        Ok(())
    };

    let mut alpha = alpha0;
    let mut psi = psi0.to_vec();
    record(&mut traj, 0.0, alpha, &psi)?;
    if q.snapshot_every > 0 {
        traj.snapshots.push((0.0, psi.clone()));
    }

    let mut frozen: Option<MatrixElements> = None;
    let mut tmp = Vec::with_capacity(psi.len());
    for step in 0..n_steps {
        let t = step as f64 * dt;
        let v_now = p.depth_for_photons(alpha.norm_sqr());
        if v_now.abs() < SHALLOW_LATTICE {
            if !shallow {
                traj.warnings.push(ShallowLatticeWarning {
                    time: t,
                    v_eff: v_now,
                });
            }
            shallow = true;
        } else {
            shallow = false;
        }
        if q.recompute_cadence > 1 && step % q.recompute_cadence == 0 {
            frozen = Some(cache.at(v_now)?);
        }
        let mut eval = |a: C64, s: &[C64]| -> Result<(C64, Vec<C64>)> {
            let me = match frozen {
                Some(me) => me,
                None => cache.at(p.depth_for_photons(a.norm_sqr()))?,
            };
            Ok(rhs(a, s, &p, &me, &ops))
        };
        let (ka1, kp1) = eval(alpha, &psi)?;
        axpy(&mut tmp, &psi, &kp1, 0.5 * dt);
        let (ka2, kp2) = eval(alpha + ka1 * (0.5 * dt), &tmp)?;
        axpy(&mut tmp, &psi, &kp2, 0.5 * dt);
        let (ka3, kp3) = eval(alpha + ka2 * (0.5 * dt), &tmp)?;
        axpy(&mut tmp, &psi, &kp3, dt);
        let (ka4, kp4) = eval(alpha + ka3 * dt, &tmp)?;
        alpha += (ka1 + ka2 * 2.0 + ka3 * 2.0 + ka4) * (dt / 6.0);
        for (i, z) in psi.iter_mut().enumerate() {
            *z += (kp1[i] + kp2[i] * 2.0 + kp3[i] * 2.0 + kp4[i]) * (dt / 6.0);
        }
        let t_next = (step + 1) as f64 * dt;
        let drift = (norm(&psi) - 1.0).abs();
        traj.max_norm_drift = traj.max_norm_drift.max(drift);
        if !(drift <= NORM_ABORT) {
            return Err(Error::NormDrift {
                time: t_next,
                drift,
            });
        }
        let done = step + 1 == n_steps;
        if (step + 1) % q.record_every == 0 || done {
            record(&mut traj, t_next, alpha, &psi)?;
        }
        if q.snapshot_every > 0 && ((step + 1) % q.snapshot_every == 0 || done) {
            traj.snapshots.push((t_next, psi.clone()));
        }
    }
    traj.final_alpha = alpha;
    traj.final_state = psi;
    Ok(traj)
}

/// How the pump is fixed for the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpSetting {
    /// Use `p.eta` and iterate to the self-consistent depth.
    Fixed,
    /// Choose `η` so the stationary depth equals this value (E_R).
    TargetDepth(f64),
}

/// Stationary starting point of a quench.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchInitial {
    pub psi: Vec<C64>,
    pub alpha: C64,
    /// Parameters with the resolved pump.
    pub params: ModelParams,
    pub v_eff: f64,
    pub hop_mean: f64,
    pub elements: MatrixElements,
}

/// Ground state of the atomic Hamiltonian with interaction `q.a_s_before`
/// together with the field at its fixed point, so that the pair is
/// stationary under [`rhs`] as long as the interaction is unchanged.
pub fn prepare_quench_initial(
    p: &ModelParams,
    q: &QuenchSpec,
    pump: PumpSetting,
    cache: &mut MatrixElementCache,
) -> Result<QuenchInitial> {
    q.validate()?;
    let p0 = ModelParams {
        a_s: q.a_s_before,
        ..*p
    };
    let ops = AtomOperators::new(&p0)?;
    let opts = SolverOptions::default();
    let n = p0.n_atoms as f64;
    let ground = |me: &MatrixElements, intensity: f64| -> Result<(Vec<C64>, f64)> {
        let h = ops.hamiltonian(&p0, me, intensity)?;
        let pair = lowest_eigenpair(&h, &opts)?;
        let b = ops.hop.expectation(&pair.state).re;
        Ok((pair.state, b))
    };
    match pump {
        PumpSetting::TargetDepth(v) => {
            if p0.u0 == 0.0 {
                return Err(Error::InvalidInput(
                    "cannot reach a cavity depth with u0 = 0".into(),
                ));
            }
            let photons = (v - p0.v_cl) / p0.recoils(p0.u0);
            if !(photons >= 0.0) {
                return Err(Error::InvalidInput(alloc::format!(
                    "depth {v} E_R is not reachable from v_cl = {} with u0 = {}",
                    p0.v_cl,
                    p0.u0
                )));
            }
            let me = cache.at(v)?;
            let (psi, b) = ground(&me, photons)?;
            let d = p0.delta_c - p0.u0 * (p0.field_j0(&me) * n + me.j1 * b);
            let eta = libm::sqrt(photons * (p0.kappa * p0.kappa + d * d));
            let alpha = C64::new(eta, 0.0) / C64::new(p0.kappa, -d);
            Ok(QuenchInitial {
                psi,
                alpha,
                params: ModelParams { eta, ..*p },
                v_eff: v,
                hop_mean: b,
                elements: me,
            })
        }
        PumpSetting::Fixed => {
            let mut alpha = p0.steady_amplitude(1.0);
            let mut v = p0.depth_for_photons(alpha.norm_sqr());
            let mut previous = v;
            for _ in 0..200 {
                let me = cache.at(v)?;
                let (psi, b) = ground(&me, alpha.norm_sqr())?;
                let d = p0.delta_c - p0.u0 * (p0.field_j0(&me) * n + me.j1 * b);
                alpha = C64::new(p0.eta, 0.0) / C64::new(p0.kappa, -d);
                let v_new = p0.depth_for_photons(alpha.norm_sqr());
                if (v_new - v).abs() < 1e-12 * v.abs().max(1.0) {
                    return Ok(QuenchInitial {
                        psi,
                        alpha,
                        params: *p,
                        v_eff: v,
                        hop_mean: b,
                        elements: me,
                    });
                }
                previous = v;
                v = v_new;
            }
            Err(Error::SelfConsistency { last: v, previous })
        }
    }
}

/// Least-squares line `values ≈ slope · times + intercept`.
pub fn linear_fit(times: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if times.len() != values.len() || times.len() < 2 {
        return Err(Error::InvalidInput(
            "linear fit needs >= 2 paired samples".into(),
        ));
    }
    let n = times.len() as f64;
    let mt = times.iter().sum::<f64>() / n;
    let mv = values.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (t, v) in times.iter().zip(values) {
        sxx += (t - mt) * (t - mt);
        sxy += (t - mt) * (v - mv);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let slope = sxy / sxx;
    Ok((slope, mv - slope * mt))
}

/// Drop the leading `fraction` of samples (transient) from paired series.
pub fn discard_transient<'a>(
    times: &'a [f64],
    values: &'a [f64],
    fraction: f64,
) -> (&'a [f64], &'a [f64]) {
    let t_end = times.last().copied().unwrap_or(0.0);
    let t0 = times.first().copied().unwrap_or(0.0);
    let cut = t0 + fraction * (t_end - t0);
    let start = times.iter().position(|&t| t >= cut).unwrap_or(times.len());
    (&times[start..], &values[start..])
}
