//! Flat `key = value` scenario files.
//!
//! A file names a `scenario`; its preset is applied first and every other
//! line overrides one value. `#` starts a comment. Unknown keys, malformed
//! values and duplicate keys are errors that carry the line number.

use std::fmt;
use std::path::PathBuf;

use cavity_lattice::cavity::{FieldOverlap, ModelParams, Numerics, PhotonCutoff, SolveMode};
use cavity_lattice::fock::Boundary;
use cavity_lattice::lattice::LatticeDepthSpec;
use cavity_lattice::linalg::SolverOptions;
use cavity_lattice::semiclassical::QuenchSpec;

use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Custom,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Fig2a,
        Scenario::Fig2b,
        Scenario::Fig3,
        Scenario::Fig4a,
        Scenario::Fig4b,
        Scenario::Fig5a,
        Scenario::Fig5b,
        Scenario::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig2a => "fig2a",
            Scenario::Fig2b => "fig2b",
            Scenario::Fig3 => "fig3",
            Scenario::Fig4a => "fig4a",
            Scenario::Fig4b => "fig4b",
            Scenario::Fig5a => "fig5a",
            Scenario::Fig5b => "fig5b",
            Scenario::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Model quantities a sweep may scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    U0,
    DeltaC,
    Kappa,
    Eta,
    EtaEff,
    VCl,
    As,
    KappaInRecoils,
    VEffTarget,
}

impl SweepParam {
    const ALL: [SweepParam; 9] = [
        SweepParam::U0,
        SweepParam::DeltaC,
        SweepParam::Kappa,
        SweepParam::Eta,
        SweepParam::EtaEff,
        SweepParam::VCl,
        SweepParam::As,
        SweepParam::KappaInRecoils,
        SweepParam::VEffTarget,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SweepParam::U0 => "u0",
            SweepParam::DeltaC => "delta_c",
            SweepParam::Kappa => "kappa",
            SweepParam::Eta => "eta",
            SweepParam::EtaEff => "eta_eff",
            SweepParam::VCl => "v_cl",
            SweepParam::As => "a_s",
            SweepParam::KappaInRecoils => "kappa_in_recoils",
            SweepParam::VEffTarget => "v_eff_target",
        }
    }

    /// Column header including the unit.
    pub fn column(self) -> String {
        let unit = match self {
            SweepParam::U0
            | SweepParam::DeltaC
            | SweepParam::Kappa
            | SweepParam::Eta
            | SweepParam::EtaEff => "[kappa]",
            SweepParam::VCl | SweepParam::As | SweepParam::VEffTarget => "[E_R]",
            SweepParam::KappaInRecoils => "[E_R/kappa]",
        };
        format!("{}{unit}", self.key())
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.key() == s)
    }

    /// Write `value` into the matching field of `cfg`.
    pub fn apply(self, cfg: &mut ScenarioConfig, value: f64) {
        let p = &mut cfg.params;
        match self {
            SweepParam::U0 => p.u0 = value,
            SweepParam::DeltaC => p.delta_c = value,
            SweepParam::Kappa => p.kappa = value,
            SweepParam::Eta => p.eta = value,
            SweepParam::EtaEff => p.eta_eff = value,
            SweepParam::VCl => p.v_cl = value,
            SweepParam::As => p.a_s = value,
            SweepParam::KappaInRecoils => p.kappa_in_recoils = value,
            SweepParam::VEffTarget => cfg.v_eff_target = Some(value),
        }
    }
}

/// Uniform grid over one parameter, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub parameter: Option<SweepParam>,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
}

impl Sweep {
    pub const NONE: Sweep = Sweep {
        parameter: None,
        start: 0.0,
        stop: 0.0,
        n_points: 2,
    };

    pub fn values(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    pub n_planewaves: usize,
    pub n_q: usize,
    pub n_grid: usize,
    pub solver_tolerance: f64,
    pub dense_limit: usize,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub depth_tolerance: f64,
    pub max_iterations: usize,
    pub photon_tolerance: f64,
    pub max_photons: usize,
    pub dt: f64,
    pub t_final: f64,
    pub record_every: usize,
    pub recompute_cadence: usize,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        let n = Numerics::default();
        let q = QuenchSpec::default();
        Self {
            n_planewaves: n.lattice.n_planewaves,
            n_q: n.lattice.n_q,
            n_grid: n.lattice.n_grid,
            solver_tolerance: n.solver.tolerance,
            dense_limit: n.solver.dense_limit,
            krylov_dim: n.solver.krylov_dim,
            max_restarts: n.solver.max_restarts,
            depth_tolerance: n.depth_tolerance,
            max_iterations: n.max_iterations,
            photon_tolerance: n.photon_tolerance,
            max_photons: n.max_photons,
            dt: q.dt,
            t_final: q.t_final,
            record_every: q.record_every,
            recompute_cadence: q.recompute_cadence,
        }
    }
}

impl NumericsConfig {
    pub fn lattice(&self) -> LatticeDepthSpec {
        LatticeDepthSpec {
            n_planewaves: self.n_planewaves,
            n_q: self.n_q,
            n_grid: self.n_grid,
            ..LatticeDepthSpec::new(0.0)
        }
    }

    pub fn numerics(&self) -> Numerics {
        Numerics {
            lattice: self.lattice(),
            solver: SolverOptions {
                dense_limit: self.dense_limit,
                tolerance: self.solver_tolerance,
                krylov_dim: self.krylov_dim,
                max_restarts: self.max_restarts,
            },
            depth_tolerance: self.depth_tolerance,
            max_iterations: self.max_iterations,
            photon_tolerance: self.photon_tolerance,
            max_photons: self.max_photons,
        }
    }
}

/// Fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub params: ModelParams,
    /// Model used for the ground states (the reference model in fig2).
    pub mode: SolveMode,
    /// When set, `eta` is chosen so that the stationary depth equals this (E_R).
    pub v_eff_target: Option<f64>,
    pub sweep: Sweep,
    /// Second sweep axis, varied fastest (fig2 scans a grid).
    pub sweep2: Sweep,
    /// Cavity detunings compared with the classical lattice (fig4b, fig5a).
    pub detunings: Vec<f64>,
    /// Light shifts drawn as separate curves (fig3).
    pub u0_values: Vec<f64>,
    /// Depth of the equivalent classical lattice (E_R).
    pub classical_v_cl: f64,
    /// Reported well, counted from 1.
    pub site: usize,
    /// Interaction of the initial state of a quench (E_R).
    pub a_s_before: f64,
    pub numerics: NumericsConfig,
    /// Not part of the echo.
    pub output: Option<PathBuf>,
}

impl ScenarioConfig {
    /// Library defaults, before any preset.
    pub fn base(scenario: Scenario) -> Self {
        Self {
            scenario,
            params: ModelParams::default(),
            mode: SolveMode::default(),
            v_eff_target: None,
            sweep: Sweep::NONE,
            sweep2: Sweep::NONE,
            detunings: Vec::new(),
            u0_values: Vec::new(),
            classical_v_cl: -4.0,
            site: 1,
            a_s_before: 0.0,
            numerics: NumericsConfig::default(),
            output: None,
        }
    }

    pub fn preset(scenario: Scenario) -> Self {
        let mut cfg = Self::base(scenario);
        presets::apply(&mut cfg);
        cfg
    }

    pub fn quench(&self) -> QuenchSpec {
        QuenchSpec {
            a_s_before: self.a_s_before,
            a_s_after: self.params.a_s,
            t_final: self.numerics.t_final,
            dt: self.numerics.dt,
            recompute_cadence: self.numerics.recompute_cadence,
            record_every: self.numerics.record_every,
            snapshot_every: 0,
        }
    }

    /// Resolved configuration as `key = value` lines, parseable by
    /// [`parse_config`].
    pub fn echo(&self) -> Vec<String> {
        KEYS.iter()
            .map(|k| format!("{} = {}", k.name, (k.get)(self)))
            .collect()
    }

    fn validate(&self) -> Result<(), String> {
        self.params.validate().map_err(|e| e.to_string())?;
        self.numerics
            .lattice()
            .validate()
            .map_err(|e| e.to_string())?;
        for s in [&self.sweep, &self.sweep2] {
            if s.parameter.is_some() {
                if s.n_points < 2 {
                    return Err(format!("sweep needs n_points >= 2, got {}", s.n_points));
                }
                if !s.start.is_finite() || !s.stop.is_finite() {
                    return Err("sweep bounds must be finite".into());
                }
            }
        }
        if self.sweep2.parameter.is_some() && self.sweep.parameter.is_none() {
            return Err("sweep2 needs sweep to be set".into());
        }
        if self.site == 0 || self.site > self.params.n_sites {
            return Err(format!(
                "site must lie in 1..={}, got {}",
                self.params.n_sites, self.site
            ));
        }
        let n = &self.numerics;
        if !(n.dt > 0.0 && n.t_final > 0.0) {
            return Err("dt and t_final must be > 0".into());
        }
        if n.record_every == 0 || n.recompute_cadence == 0 || n.max_iterations == 0 {
            return Err("record_every, recompute_cadence and max_iterations must be >= 1".into());
        }
        if matches!(self.scenario, Scenario::Fig4b | Scenario::Fig5a) && self.detunings.is_empty() {
            return Err(format!("{} needs at least one detuning", self.scenario));
        }
        if self.scenario == Scenario::Fig3 {
            if self.u0_values.is_empty() {
                return Err("fig3 needs at least one value in u0_values".into());
            }
            if self.params.n_atoms != 1 || self.params.n_sites != 2 {
                return Err("fig3 describes one atom in two wells".into());
            }
        }
        if self.scenario == Scenario::Fig5a && self.params.n_sites < 3 {
            return Err("fig5a needs at least 3 sites".into());
        }
        if self.scenario == Scenario::Fig5b && self.sweep.parameter.is_some() {
            return Err("fig5b is a single trajectory and takes no sweep".into());
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Syntax { origin: String, text: String },
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: invalid value `{value}` for `{key}`: {reason}")]
    BadValue {
        origin: String,
        key: String,
        value: String,
        reason: String,
    },
    #[error("{origin}: `{key}` is already set on line {first}")]
    Duplicate {
        origin: String,
        key: String,
        first: usize,
    },
    #[error("no `scenario` key; expected one of {}", scenario_names())]
    MissingScenario,
    #[error("custom scenario is missing required keys: {}", .0.join(", "))]
    MissingKeys(Vec<String>),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

fn scenario_names() -> String {
    Scenario::ALL.map(|s| s.name()).join(", ")
}

type Setter = fn(&mut ScenarioConfig, &str) -> Result<(), String>;
type Getter = fn(&ScenarioConfig) -> String;

struct Key {
    name: &'static str,
    set: Setter,
    get: Getter,
}

fn num(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| "not a number".to_string())?;
    if !x.is_finite() {
        return Err("must be finite".into());
    }
    Ok(x)
}

fn count(v: &str) -> Result<usize, String> {
    v.parse()
        .map_err(|_| "not a non-negative integer".to_string())
}

fn list(v: &str) -> Result<Vec<f64>, String> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| num(x.trim())).collect()
}

fn show(x: f64) -> String {
    format!("{x}")
}

fn show_list(xs: &[f64]) -> String {
    xs.iter().map(|x| show(*x)).collect::<Vec<_>>().join(", ")
}

fn sweep_param(v: &str) -> Result<Option<SweepParam>, String> {
    if v == "none" {
        return Ok(None);
    }
    SweepParam::parse(v).map(Some).ok_or_else(|| {
        format!(
            "not a sweepable parameter; expected none or one of {}",
            SweepParam::ALL.map(|p| p.key()).join(", ")
        )
    })
}

fn show_sweep(p: Option<SweepParam>) -> String {
    p.map_or("none".into(), |p| p.key().into())
}

pub fn parse_mode(v: &str) -> Result<SolveMode, String> {
    match v {
        "coupled" => Ok(SolveMode::Coupled),
        "effective" => Ok(SolveMode::Effective),
        "exact-elim" => Ok(SolveMode::ExactElimination),
        "dissipative" => Ok(SolveMode::Dissipative),
        _ => Err("expected coupled, effective, exact-elim or dissipative".into()),
    }
}

pub fn mode_name(m: SolveMode) -> &'static str {
    match m {
        SolveMode::Coupled => "coupled",
        SolveMode::Effective => "effective",
        SolveMode::ExactElimination => "exact-elim",
        SolveMode::Dissipative => "dissipative",
    }
}

macro_rules! key {
    ($name:literal, $cfg:ident, $v:ident => $set:expr, $get:expr) => {
        Key {
            name: $name,
            set: |$cfg, $v| {
                $set;
                Ok(())
            },
            get: |$cfg| $get,
        }
    };
}

static KEYS: &[Key] = &[
    key!("scenario", c, v => c.scenario = Scenario::parse(v).ok_or("unknown scenario")?, c.scenario.to_string()),
    key!("mode", c, v => c.mode = parse_mode(v)?, mode_name(c.mode).into()),
    key!("u0", c, v => c.params.u0 = num(v)?, show(c.params.u0)),
    key!("delta_c", c, v => c.params.delta_c = num(v)?, show(c.params.delta_c)),
    key!("kappa", c, v => c.params.kappa = num(v)?, show(c.params.kappa)),
    key!("eta", c, v => c.params.eta = num(v)?, show(c.params.eta)),
    key!("eta_eff", c, v => c.params.eta_eff = num(v)?, show(c.params.eta_eff)),
    key!("v_cl", c, v => c.params.v_cl = num(v)?, show(c.params.v_cl)),
    key!("a_s", c, v => c.params.a_s = num(v)?, show(c.params.a_s)),
    key!("n_atoms", c, v => c.params.n_atoms = count(v)?, c.params.n_atoms.to_string()),
    key!("n_sites", c, v => c.params.n_sites = count(v)?, c.params.n_sites.to_string()),
    key!("kappa_in_recoils", c, v => c.params.kappa_in_recoils = num(v)?, show(c.params.kappa_in_recoils)),
    key!("boundary", c, v => c.params.boundary = match v {
        "open" => Boundary::Open,
        "periodic" => Boundary::Periodic,
        _ => return Err("expected open or periodic".into()),
    }, match c.params.boundary {
        Boundary::Open => "open".into(),
        Boundary::Periodic => "periodic".into(),
    }),
    key!("n_max", c, v => c.params.n_max = match v {
        "adaptive" => PhotonCutoff::Adaptive,
        n => PhotonCutoff::Fixed(count(n).map_err(|_| "expected adaptive or an integer")?),
    }, match c.params.n_max {
        PhotonCutoff::Adaptive => "adaptive".into(),
        PhotonCutoff::Fixed(n) => n.to_string(),
    }),
    key!("field_overlap", c, v => c.params.field_overlap = match v {
        "wannier" => FieldOverlap::Wannier,
        "unity" => FieldOverlap::Unity,
        _ => return Err("expected wannier or unity".into()),
    }, match c.params.field_overlap {
        FieldOverlap::Wannier => "wannier".into(),
        FieldOverlap::Unity => "unity".into(),
    }),
    key!("v_eff_target", c, v => c.v_eff_target = if v == "none" { None } else { Some(num(v)?) },
        c.v_eff_target.map_or("none".into(), show)),
    key!("classical_v_cl", c, v => c.classical_v_cl = num(v)?, show(c.classical_v_cl)),
    key!("detunings", c, v => c.detunings = list(v)?, show_list(&c.detunings)),
    key!("u0_values", c, v => c.u0_values = list(v)?, show_list(&c.u0_values)),
    key!("site", c, v => c.site = count(v)?, c.site.to_string()),
    key!("a_s_before", c, v => c.a_s_before = num(v)?, show(c.a_s_before)),
    key!("sweep", c, v => c.sweep.parameter = sweep_param(v)?, show_sweep(c.sweep.parameter)),
    key!("sweep_start", c, v => c.sweep.start = num(v)?, show(c.sweep.start)),
    key!("sweep_stop", c, v => c.sweep.stop = num(v)?, show(c.sweep.stop)),
    key!("sweep_points", c, v => c.sweep.n_points = count(v)?, c.sweep.n_points.to_string()),
    key!("sweep2", c, v => c.sweep2.parameter = sweep_param(v)?, show_sweep(c.sweep2.parameter)),
    key!("sweep2_start", c, v => c.sweep2.start = num(v)?, show(c.sweep2.start)),
    key!("sweep2_stop", c, v => c.sweep2.stop = num(v)?, show(c.sweep2.stop)),
    key!("sweep2_points", c, v => c.sweep2.n_points = count(v)?, c.sweep2.n_points.to_string()),
    key!("n_planewaves", c, v => c.numerics.n_planewaves = count(v)?, c.numerics.n_planewaves.to_string()),
    key!("n_q", c, v => c.numerics.n_q = count(v)?, c.numerics.n_q.to_string()),
    key!("n_grid", c, v => c.numerics.n_grid = count(v)?, c.numerics.n_grid.to_string()),
    key!("solver_tolerance", c, v => c.numerics.solver_tolerance = num(v)?, show(c.numerics.solver_tolerance)),
    key!("dense_limit", c, v => c.numerics.dense_limit = count(v)?, c.numerics.dense_limit.to_string()),
    key!("krylov_dim", c, v => c.numerics.krylov_dim = count(v)?, c.numerics.krylov_dim.to_string()),
    key!("max_restarts", c, v => c.numerics.max_restarts = count(v)?, c.numerics.max_restarts.to_string()),
    key!("depth_tolerance", c, v => c.numerics.depth_tolerance = num(v)?, show(c.numerics.depth_tolerance)),
    key!("max_iterations", c, v => c.numerics.max_iterations = count(v)?, c.numerics.max_iterations.to_string()),
    key!("photon_tolerance", c, v => c.numerics.photon_tolerance = num(v)?, show(c.numerics.photon_tolerance)),
    key!("max_photons", c, v => c.numerics.max_photons = count(v)?, c.numerics.max_photons.to_string()),
    key!("dt", c, v => c.numerics.dt = num(v)?, show(c.numerics.dt)),
    key!("t_final", c, v => c.numerics.t_final = num(v)?, show(c.numerics.t_final)),
    key!("record_every", c, v => c.numerics.record_every = count(v)?, c.numerics.record_every.to_string()),
    key!("recompute_cadence", c, v => c.numerics.recompute_cadence = count(v)?, c.numerics.recompute_cadence.to_string()),
];

/// Output path; accepted in files but not echoed.
const OUTPUT_KEY: &str = "output";

/// Keys without a default in the custom scenario.
const CUSTOM_REQUIRED: [&str; 6] = ["u0", "delta_c", "v_cl", "a_s", "n_atoms", "n_sites"];

/// Every accepted key, echoed ones first in echo order.
pub fn known_keys() -> Vec<&'static str> {
    KEYS.iter().map(|k| k.name).chain([OUTPUT_KEY]).collect()
}

struct Entry<'a> {
    origin: String,
    line: usize,
    key: &'a str,
    value: &'a str,
}

fn split_line(origin: String, line: usize, text: &str) -> Result<Option<Entry<'_>>, ConfigError> {
    let body = text.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
        origin: origin.clone(),
        text: body.to_string(),
    })?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::Syntax {
            origin,
            text: body.to_string(),
        });
    }
    Ok(Some(Entry {
        origin,
        line,
        key,
        value: value.trim(),
    }))
}

fn apply_entry(cfg: &mut ScenarioConfig, e: &Entry<'_>) -> Result<(), ConfigError> {
    if e.key == OUTPUT_KEY {
        cfg.output = Some(PathBuf::from(e.value));
        return Ok(());
    }
    let key = KEYS
        .iter()
        .find(|k| k.name == e.key)
        .ok_or_else(|| ConfigError::UnknownKey {
            origin: e.origin.clone(),
            key: e.key.to_string(),
        })?;
    (key.set)(cfg, e.value).map_err(|reason| ConfigError::BadValue {
        origin: e.origin.clone(),
        key: e.key.to_string(),
        value: e.value.to_string(),
        reason,
    })
}

/// Parse a scenario file and apply `overrides` (`key=value` strings) on top.
pub fn parse_config_with_overrides(
    text: &str,
    overrides: &[String],
) -> Result<ScenarioConfig, ConfigError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(e) = split_line(format!("line {}", i + 1), i + 1, raw)? {
            if let Some(first) = entries.iter().find(|x: &&Entry<'_>| x.key == e.key) {
                return Err(ConfigError::Duplicate {
                    origin: e.origin,
                    key: e.key.to_string(),
                    first: first.line,
                });
            }
            entries.push(e);
        }
    }
    let mut extra = Vec::new();
    for (i, o) in overrides.iter().enumerate() {
        let origin = format!("--set #{}", i + 1);
        match split_line(origin.clone(), 0, o)? {
            Some(e) => extra.push(e),
            None => {
                return Err(ConfigError::Syntax {
                    origin,
                    text: o.clone(),
                })
            }
        }
    }

    // the preset must be in place before anything overrides it
    let scenario_entry = extra
        .iter()
        .rev()
        .chain(entries.iter())
        .find(|e| e.key == "scenario")
        .ok_or(ConfigError::MissingScenario)?;
    let scenario = Scenario::parse(scenario_entry.value).ok_or_else(|| ConfigError::BadValue {
        origin: scenario_entry.origin.clone(),
        key: "scenario".into(),
        value: scenario_entry.value.to_string(),
        reason: format!("expected one of {}", scenario_names()),
    })?;
    let mut cfg = ScenarioConfig::preset(scenario);

    for e in entries.iter().chain(&extra) {
        apply_entry(&mut cfg, e)?;
    }

    if scenario == Scenario::Custom {
        let given = |k: &str| entries.iter().chain(&extra).any(|e| e.key == k);
        let mut missing: Vec<String> = CUSTOM_REQUIRED
            .iter()
            .filter(|k| !given(k))
            .map(|k| k.to_string())
            .collect();
        if !given("eta") && !given("v_eff_target") {
            missing.push("eta (or v_eff_target)".into());
        }
        if !missing.is_empty() {
            return Err(ConfigError::MissingKeys(missing));
        }
    }
    cfg.validate().map_err(ConfigError::Invalid)?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    parse_config_with_overrides(text, &[])
}
