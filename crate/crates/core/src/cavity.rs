//! Cavity-coupled Bose–Hubbard Hamiltonians, field elimination and ground states.
//!
//! Cavity parameters (`u0`, `delta_c`, `kappa`, `eta`, `eta_eff`) are in units
//! of κ; every term that enters a Hamiltonian is converted to E_R with
//! [`ModelParams::kappa_in_recoils`].

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::fock::{
    enumerate_basis, hop_operator, interaction_operator, photon_number_operator, photon_ops,
    staggered_number_operator, tensor, total_number_operator, AtomBasis, BasisTag, Boundary,
    CoupledBasis, OperatorMatrix, PhotonBasis,
};
use crate::lattice::{matrix_elements_at_depth, LatticeDepthSpec, MatrixElements};
use crate::linalg::{hermitian_eigen, lowest_eigenpair, lowest_real_part_eigenpair, SolverOptions};
use crate::{Error, Result, C64};

/// Largest Hermiticity defect accepted from a Hamiltonian builder.
pub const BUILD_HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Photon-number truncation of the coupled space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhotonCutoff {
    Fixed(usize),
    /// Start at `⌈4|α|² + 10⌉` and double until `⟨a†a⟩` settles.
    #[default]
    Adaptive,
}

/// On-site overlap `J0` used in the shifted detuning `Δ' = Δc − U0·J0·N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldOverlap {
    /// `J0` from the Wannier functions at the current depth.
    #[default]
    Wannier,
    /// `J0 = 1`, atoms treated as point-like at the antinodes.
    Unity,
}

/// Which Hamiltonian a ground state is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    /// Hermitian atom + photon Hamiltonian (κ does not appear).
    Coupled,
    /// Atom-only Hamiltonian from the second-order field expansion.
    Effective,
    /// Atom-only Hamiltonian with the field eliminated exactly as a function of `B`.
    #[default]
    ExactElimination,
    /// Coupled Hamiltonian with `−iħκ a†a`; eigenvalue of smallest real part.
    Dissipative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Light shift per photon.
    pub u0: f64,
    pub delta_c: f64,
    pub kappa: f64,
    /// Pump through the cavity mirror.
    pub eta: f64,
    /// Transverse pump.
    pub eta_eff: f64,
    /// Classical lattice depth in E_R.
    pub v_cl: f64,
    /// Interaction scale in E_R; used directly as the 1D coupling `g1d`.
    pub a_s: f64,
    pub n_atoms: usize,
    pub n_sites: usize,
    /// ħκ / E_R.
    pub kappa_in_recoils: f64,
    pub boundary: Boundary,
    pub n_max: PhotonCutoff,
    pub field_overlap: FieldOverlap,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            u0: 0.0,
            delta_c: 0.0,
            kappa: 1.0,
            eta: 0.0,
            eta_eff: 0.0,
            v_cl: 0.0,
            a_s: 0.0,
            n_atoms: 1,
            n_sites: 2,
            kappa_in_recoils: 1.0,
            boundary: Boundary::Open,
            n_max: PhotonCutoff::Adaptive,
            field_overlap: FieldOverlap::Wannier,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.u0,
            self.delta_c,
            self.kappa,
            self.eta,
            self.eta_eff,
            self.v_cl,
            self.a_s,
            self.kappa_in_recoils,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidInput(
                "model parameters must be finite".into(),
            ));
        }
        if !(self.kappa_in_recoils > 0.0) {
            return Err(Error::InvalidInput(format!(
                "kappa_in_recoils must be > 0, got {}",
                self.kappa_in_recoils
            )));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::InvalidInput(format!(
                "kappa must be > 0, got {}",
                self.kappa
            )));
        }
        if self.eta < 0.0 {
            return Err(Error::InvalidInput(format!(
                "eta must be >= 0, got {}",
                self.eta
            )));
        }
        if self.a_s < 0.0 {
            return Err(Error::InvalidInput(format!(
                "a_s must be >= 0, got {}",
                self.a_s
            )));
        }
        if self.n_atoms < 1 {
            return Err(Error::InvalidInput("n_atoms must be >= 1".into()));
        }
        if self.n_sites < 2 {
            return Err(Error::InvalidInput("n_sites must be >= 2".into()));
        }
        if self.boundary == Boundary::Periodic && self.n_sites < 3 {
            return Err(Error::InvalidInput(
                "periodic boundary needs at least 3 sites".into(),
            ));
        }
        if self.n_max == PhotonCutoff::Fixed(0) {
            return Err(Error::InvalidInput("photon cutoff must be >= 1".into()));
        }
        Ok(())
    }

    /// κ-unit quantity in E_R.
    pub fn recoils(&self, x: f64) -> f64 {
        x * self.kappa_in_recoils
    }

    /// `Δ' = Δc − U0·J0·N`.
    pub fn delta_c_prime(&self, j0: f64) -> f64 {
        self.delta_c - self.u0 * j0 * self.n_atoms as f64
    }

    /// `J0` entering the eliminated field under [`Self::field_overlap`].
    pub fn field_j0(&self, me: &MatrixElements) -> f64 {
        match self.field_overlap {
            FieldOverlap::Wannier => me.j0,
            FieldOverlap::Unity => 1.0,
        }
    }

    /// Scalar steady state `α0 = η / (κ − iΔ')`.
    pub fn steady_amplitude(&self, j0: f64) -> C64 {
        C64::new(self.eta, 0.0) / C64::new(self.kappa, -self.delta_c_prime(j0))
    }

    /// `V_cl + ħU0 n̄` in E_R.
    pub fn depth_for_photons(&self, photons: f64) -> f64 {
        self.v_cl + self.recoils(self.u0) * photons
    }

    fn atoms(&self) -> Result<AtomBasis> {
        enumerate_basis(self.n_sites, self.n_atoms)
    }
}

/// Steady-state field of the eliminated cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveField {
    pub alpha0: C64,
    pub delta_c_prime: f64,
    pub a_exact: Option<OperatorMatrix>,
    pub a_expanded: Option<OperatorMatrix>,
}

impl EffectiveField {
    /// Scalar amplitude only, for an on-site overlap `j0`.
    pub fn scalar(p: &ModelParams, j0: f64) -> Self {
        Self {
            alpha0: p.steady_amplitude(j0),
            delta_c_prime: p.delta_c_prime(j0),
            a_exact: None,
            a_expanded: None,
        }
    }

    pub fn photon_number(&self) -> f64 {
        self.alpha0.norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    /// Lowest eigenvalue in E_R (real part for the dissipative mode).
    pub energy: f64,
    pub state: Vec<C64>,
    pub basis: BasisTag,
    pub converged: bool,
    pub residual: f64,
    /// `⟨a†a⟩`, when a field is attached.
    pub photon_mean: Option<f64>,
    /// `V_cl + ħU0⟨a†a⟩` in E_R.
    pub v_eff: Option<f64>,
}

/// Discretization and convergence controls shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    /// Band-structure resolution; the depth field is ignored.
    pub lattice: LatticeDepthSpec,
    pub solver: SolverOptions,
    /// Self-consistent depth tolerance in E_R.
    pub depth_tolerance: f64,
    pub max_iterations: usize,
    /// Relative change of `⟨a†a⟩` accepted by the adaptive cutoff.
    pub photon_tolerance: f64,
    /// Largest photon cutoff the adaptive search may reach.
    pub max_photons: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            lattice: LatticeDepthSpec::new(0.0),
            solver: SolverOptions::default(),
            depth_tolerance: 1e-8,
            max_iterations: 200,
            photon_tolerance: 1e-6,
            max_photons: 4096,
        }
    }
}

impl Numerics {
    /// Matrix elements at `depth` with coupling `g1d`.
    pub fn elements(&self, depth: f64, g1d: f64) -> Result<MatrixElements> {
        matrix_elements_at_depth(&self.lattice.with_depth(depth), g1d)
    }
}

fn cplx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn atom_tag(b: &OperatorMatrix) -> Result<(usize, usize)> {
    match b.basis() {
        BasisTag::Atom { sites, atoms } => Ok((sites, atoms)),
        other => Err(Error::BasisMismatch {
            left: other,
            right: BasisTag::Atom { sites: 0, atoms: 0 },
        }),
    }
}

fn checked_hermitian(h: OperatorMatrix) -> Result<OperatorMatrix> {
    let r = h.hermiticity_residual();
    if r > BUILD_HERMITIAN_TOLERANCE {
        return Err(Error::NonHermitian { residual: r });
    }
    symmetrize(h)
}

/// `(A + A†)/2`, flagged Hermitian.
fn symmetrize(h: OperatorMatrix) -> Result<OperatorMatrix> {
    if h.hermiticity_residual() == 0.0 {
        return h.into_hermitian();
    }
    h.add(&h.adjoint())?.scale_real(0.5).into_hermitian()
}

/// `g(B)` for a Hermitian `B` by spectral calculus.
fn spectral_map(
    b: &OperatorMatrix,
    f: impl Fn(f64) -> C64,
    hermitian: bool,
) -> Result<OperatorMatrix> {
    let (values, vectors) = hermitian_eigen(&b.to_dense())?;
    let n = values.len();
    let mut scaled = vectors.clone();
    for (k, &lam) in values.iter().enumerate() {
        let fk = f(lam);
        for i in 0..n {
            scaled[(i, k)] *= fk;
        }
    }
    let m: DMatrix<C64> = scaled * vectors.adjoint();
    let op = OperatorMatrix::from_dense(b.basis(), m, false)?;
    if hermitian {
        symmetrize(op)
    } else {
        Ok(op)
    }
}

/// Atom-only one-body part `(E0 + V_cl J0) N + (E + V_cl J) B + (U/2) Σ n(n−1)`.
fn atom_part(p: &ModelParams, me: &MatrixElements, basis: &AtomBasis) -> Result<OperatorMatrix> {
    let n = total_number_operator(basis);
    let b = hop_operator(basis, p.boundary)?;
    let int = interaction_operator(basis);
    let u = p.a_s * me.interaction_integral;
    n.scale_real(me.e0 + p.v_cl * me.j0)
        .add(&b.scale_real(me.e1 + p.v_cl * me.j1))?
        .add(&int.scale_real(0.5 * u))
}

/// Coupled Hamiltonian on atoms ⊗ photons:
///
/// `E0 N + E B + (ħU0 a†a + V_cl)(J0 N + J B) + ħη_eff (a + a†) J̃0 Σ(−1)^{k+1} n_k
///  − ħΔc a†a − iħη (a − a†) + (U/2) Σ n(n − 1)`.
pub fn build_full_hamiltonian(
    p: &ModelParams,
    me: &MatrixElements,
    basis: &CoupledBasis,
) -> Result<OperatorMatrix> {
    p.validate()?;
    let atoms = &basis.atoms;
    if atoms.n_sites() != p.n_sites || atoms.n_atoms() != p.n_atoms {
        return Err(Error::BasisMismatch {
            left: atoms.tag(),
            right: BasisTag::Atom {
                sites: p.n_sites,
                atoms: p.n_atoms,
            },
        });
    }
    let pb = &basis.photons;
    let n_at = total_number_operator(atoms);
    let hop = hop_operator(atoms, p.boundary)?;
    let id_ph = OperatorMatrix::identity(pb.tag(), pb.dim());
    let id_at = OperatorMatrix::identity(atoms.tag(), atoms.dim());
    let (a, adag) = photon_ops(pb);
    let n_ph = photon_number_operator(pb);

    let mut h = tensor(&atom_part(p, me, atoms)?, &id_ph)?;
    let lattice = n_at.scale_real(me.j0).add(&hop.scale_real(me.j1))?;
    h = h.add(&tensor(&lattice.scale_real(p.recoils(p.u0)), &n_ph)?)?;
    if p.eta_eff != 0.0 {
        let stag = staggered_number_operator(atoms).scale_real(p.recoils(p.eta_eff) * me.jt0);
        h = h.add(&tensor(&stag, &a.add(&adag)?)?)?;
    }
    let pump = a.sub(&adag)?.scale(cplx(0.0, -p.recoils(p.eta)));
    let photon = n_ph.scale_real(-p.recoils(p.delta_c)).add(&pump)?;
    h = h.add(&tensor(&id_at, &photon)?)?;
    checked_hermitian(h)
}

/// Field operator `a = η / [κ − i(Δc − U0(J0 N + J B))]` on the fixed-N atom space.
pub fn field_operator_exact(
    p: &ModelParams,
    me: &MatrixElements,
    b: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    atom_tag(b)?;
    let j0 = p.field_j0(me);
    let n = p.n_atoms as f64;
    spectral_map(
        b,
        |lam| {
            let d = p.delta_c - p.u0 * (j0 * n + me.j1 * lam);
            cplx(p.eta, 0.0) / cplx(p.kappa, -d)
        },
        false,
    )
}

/// Second-order expansion of the field operator in `J`:
/// `a ≈ η c [1 − iU0 J c B − U0² J² c² B²]`, `c = 1/(κ − iΔ')`.
pub fn field_operator_expansion(
    p: &ModelParams,
    me: &MatrixElements,
    b: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    atom_tag(b)?;
    let dp = p.delta_c_prime(p.field_j0(me));
    let c = cplx(1.0, 0.0) / cplx(p.kappa, -dp);
    let uj = p.u0 * me.j1;
    let id = OperatorMatrix::identity(b.basis(), b.dim());
    let b2 = b.matmul(b)?;
    let inner = id
        .add(&b.scale(cplx(0.0, -uj) * c))?
        .add(&b2.scale(-(uj * uj) * c * c))?;
    Ok(inner.scale(c * p.eta))
}

/// Coefficients `(c_B, c_BB)` of `B` and `B²` in the effective atom Hamiltonian, E_R.
pub fn effective_coefficients(p: &ModelParams, me: &MatrixElements) -> (f64, f64) {
    let dp = p.delta_c_prime(p.field_j0(me));
    let k2 = p.kappa * p.kappa;
    let d2 = dp * dp;
    let den = k2 + d2;
    let eta2 = p.eta * p.eta;
    let c_b = me.e1 + me.j1 * (p.v_cl - p.recoils(p.u0) * eta2 * (k2 - d2) / (den * den));
    let c_bb = -3.0 * p.recoils(p.u0 * p.u0) * eta2 * dp * (3.0 * k2 - d2) / (den * den * den)
        * me.j1
        * me.j1;
    (c_b, c_bb)
}

/// Atom-only Hamiltonian with the field expanded to second order:
/// `c_B B + c_BB B² + (U/2) Σ n(n − 1)`, dropping the constant `N`-terms.
pub fn build_effective_hamiltonian(
    p: &ModelParams,
    me: &MatrixElements,
    basis: &AtomBasis,
) -> Result<OperatorMatrix> {
    p.validate()?;
    let (c_b, c_bb) = effective_coefficients(p, me);
    let b = hop_operator(basis, p.boundary)?;
    let b2 = b.matmul(&b)?;
    let u = p.a_s * me.interaction_integral;
    let h = b
        .scale_real(c_b)
        .add(&b2.scale_real(c_bb))?
        .add(&interaction_operator(basis).scale_real(0.5 * u))?;
    checked_hermitian(h)
}

/// Atom-only Hamiltonian with the field inserted exactly:
/// `(E0 + V_cl J0) N + (E + V_cl J) B + ħη² D(B)/(κ² + D(B)²) + (U/2) Σ n(n − 1)`
/// with `D(B) = Δc − U0(J0 N + J B)`.
pub fn build_exact_elimination_hamiltonian(
    p: &ModelParams,
    me: &MatrixElements,
    basis: &AtomBasis,
) -> Result<OperatorMatrix> {
    p.validate()?;
    let b = hop_operator(basis, p.boundary)?;
    let j0 = p.field_j0(me);
    let n = p.n_atoms as f64;
    let k2 = p.kappa * p.kappa;
    let scale = p.recoils(p.eta * p.eta);
    let cavity = spectral_map(
        &b,
        |lam| {
            let d = p.delta_c - p.u0 * (j0 * n + me.j1 * lam);
            cplx(scale * d / (k2 + d * d), 0.0)
        },
        true,
    )?;
    checked_hermitian(atom_part(p, me, basis)?.add(&cavity)?)
}

/// Lowest eigenpair of a Hermitian Hamiltonian.
pub fn ground_state(h: &OperatorMatrix, opts: &SolverOptions) -> Result<GroundStateResult> {
    let pair = lowest_eigenpair(h, opts)?;
    Ok(GroundStateResult {
        energy: pair.energy,
        converged: pair.residual < opts.tolerance,
        residual: pair.residual,
        state: pair.state,
        basis: h.basis(),
        photon_mean: None,
        v_eff: None,
    })
}

/// Eigenvector of `H − iħκ a†a` whose eigenvalue has the smallest real part.
pub fn dissipative_ground_state(
    p: &ModelParams,
    me: &MatrixElements,
    basis: &CoupledBasis,
) -> Result<GroundStateResult> {
    let h = build_full_hamiltonian(p, me, basis)?;
    let n_ph = tensor(
        &OperatorMatrix::identity(basis.atoms.tag(), basis.atoms.dim()),
        &photon_number_operator(&basis.photons),
    )?;
    let hd = h.add(&n_ph.scale(cplx(0.0, -p.recoils(p.kappa))))?;
    let (lambda, state) = lowest_real_part_eigenpair(&hd.to_dense())?;
    let hv = hd.mul_vec(&state);
    let residual = libm::sqrt(
        hv.iter()
            .zip(&state)
            .map(|(x, s)| (x - s * lambda).norm_sqr())
            .sum::<f64>(),
    );
    let photons = n_ph.expectation(&state).re;
    Ok(GroundStateResult {
        energy: lambda.re,
        converged: residual < 1e-8,
        residual,
        state,
        basis: basis.tag(),
        photon_mean: Some(photons),
        v_eff: Some(p.depth_for_photons(photons)),
    })
}

/// Mean photon number implied by the depth elements `me` for `mode`.
///
/// The Hermitian coupled model has no damping, so its displaced-oscillator
/// occupation is `η²/Δ'²` with the Wannier `J0`; all other modes use
/// `η²/(κ² + Δ'²)`.
pub fn mean_photons(p: &ModelParams, me: &MatrixElements, mode: SolveMode) -> Result<f64> {
    match mode {
        SolveMode::Coupled => {
            let dp = p.delta_c_prime(me.j0);
            if !(dp < 0.0) {
                if p.eta == 0.0 {
                    return Ok(0.0);
                }
                return Err(Error::InvalidInput(format!(
                    "coupled mode needs a negative shifted detuning, got Δ' = {dp}"
                )));
            }
            Ok(p.eta * p.eta / (dp * dp))
        }
        _ => Ok(p.steady_amplitude(p.field_j0(me)).norm_sqr()),
    }
}

/// Result of the fixed-point search for the lattice depth.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthSolution {
    pub elements: MatrixElements,
    pub v_eff: f64,
    /// Successive depth iterates, starting with the `J0 = 1` guess.
    pub history: Vec<f64>,
}

/// Iterate `V → V_cl + ħU0 n̄(V)` with matrix elements recomputed at each depth.
///
/// The first guess uses `J0 = 1`. Relaxation with factor 0.5 switches on once
/// the iterates start to oscillate.
pub fn self_consistent_depth(
    p: &ModelParams,
    numerics: &Numerics,
    mode: SolveMode,
) -> Result<DepthSolution> {
    p.validate()?;
    let guess = match mode {
        SolveMode::Coupled if p.delta_c_prime(1.0) >= 0.0 => p.v_cl,
        SolveMode::Coupled => p.depth_for_photons(libm::pow(p.eta / p.delta_c_prime(1.0), 2.0)),
        _ => p.depth_for_photons(p.steady_amplitude(1.0).norm_sqr()),
    };
    let mut v = guess;
    let mut history = alloc::vec![v];
    let mut damping = 1.0;
    let mut last_step = 0.0_f64;
    for _ in 0..numerics.max_iterations.max(1) {
        let me = numerics.elements(v, p.a_s)?;
        let target = p.depth_for_photons(mean_photons(p, &me, mode)?);
        let step = target - v;
        if step.abs() < numerics.depth_tolerance {
            return Ok(DepthSolution {
                elements: me,
                v_eff: v,
                history,
            });
        }
        if step * last_step < 0.0 {
            damping = 0.5;
        }
        last_step = step;
        v += damping * step;
        history.push(v);
    }
    let n = history.len();
    Err(Error::SelfConsistency {
        last: history[n - 1],
        previous: history[n.saturating_sub(2)],
    })
}

/// Pump strength that produces the depth `target` (E_R) at steady state.
///
/// Returns `η` together with the matrix elements at `target`.
pub fn pump_for_depth(
    p: &ModelParams,
    numerics: &Numerics,
    target: f64,
    mode: SolveMode,
) -> Result<(f64, MatrixElements)> {
    p.validate()?;
    let me = numerics.elements(target, p.a_s)?;
    if p.u0 == 0.0 {
        return Err(Error::InvalidInput(
            "cannot reach a cavity depth with u0 = 0".into(),
        ));
    }
    let photons = (target - p.v_cl) / p.recoils(p.u0);
    if !(photons >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "depth {target} E_R is not reachable from v_cl = {} with u0 = {}",
            p.v_cl, p.u0
        )));
    }
    let eta = match mode {
        SolveMode::Coupled => {
            let dp = p.delta_c_prime(me.j0);
            if !(dp < 0.0) {
                return Err(Error::InvalidInput(format!(
                    "coupled mode needs a negative shifted detuning, got Δ' = {dp}"
                )));
            }
            dp.abs() * libm::sqrt(photons)
        }
        _ => {
            let dp = p.delta_c_prime(p.field_j0(&me));
            libm::sqrt(photons * (p.kappa * p.kappa + dp * dp))
        }
    };
    Ok((eta, me))
}

/// Ground state of one model together with its field description.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSolution {
    pub elements: MatrixElements,
    pub field: EffectiveField,
    pub ground: GroundStateResult,
    /// Photon cutoff used (coupled modes).
    pub n_max: Option<usize>,
}

fn initial_cutoff(p: &ModelParams, photons: f64) -> usize {
    match p.n_max {
        PhotonCutoff::Fixed(n) => n,
        PhotonCutoff::Adaptive => (libm::ceil(4.0 * photons + 10.0) as usize).max(1),
    }
}

fn coupled_bound_check(p: &ModelParams, me: &MatrixElements) -> Result<()> {
    // every B-sector needs a positive photon frequency: |λ| ≤ 2N
    let dp = p.delta_c_prime(me.j0);
    let worst = dp + (p.u0 * me.j1).abs() * 2.0 * p.n_atoms as f64;
    if !(worst < 0.0) && p.eta != 0.0 {
        return Err(Error::InvalidInput(format!(
            "coupled mode needs Δ' + 2N|U0 J| < 0 for a bounded photon sector, got {worst}"
        )));
    }
    Ok(())
}

fn solve_coupled(
    p: &ModelParams,
    me: &MatrixElements,
    numerics: &Numerics,
    dissipative: bool,
) -> Result<(GroundStateResult, usize)> {
    let atoms = p.atoms()?;
    let photons0 = if dissipative {
        p.steady_amplitude(me.j0).norm_sqr()
    } else {
        coupled_bound_check(p, me)?;
        mean_photons(p, me, SolveMode::Coupled)?
    };
    let mut n_max = initial_cutoff(p, photons0);
    if matches!(p.n_max, PhotonCutoff::Adaptive) && n_max > numerics.max_photons {
        return Err(Error::PhotonCutoff {
            needed: n_max,
            limit: numerics.max_photons,
        });
    }
    let mut previous: Option<f64> = None;
    loop {
        let basis = CoupledBasis::new(atoms.clone(), PhotonBasis::new(n_max)?);
        let gs = if dissipative {
            dissipative_ground_state(p, me, &basis)?
        } else {
            let h = build_full_hamiltonian(p, me, &basis)?;
            let mut gs = ground_state(&h, &numerics.solver)?;
            let n_ph = tensor(
                &OperatorMatrix::identity(atoms.tag(), atoms.dim()),
                &photon_number_operator(&basis.photons),
            )?;
            let m = n_ph.expectation(&gs.state).re;
            gs.photon_mean = Some(m);
            gs.v_eff = Some(p.depth_for_photons(m));
            gs
        };
        let m = gs.photon_mean.unwrap_or(0.0);
        if let PhotonCutoff::Fixed(_) = p.n_max {
            return Ok((gs, n_max));
        }
        if let Some(prev) = previous {
            if (m - prev).abs() <= numerics.photon_tolerance * m.abs().max(prev.abs()) {
                return Ok((gs, n_max));
            }
        }
        previous = Some(m);
        n_max *= 2;
        if n_max > numerics.max_photons {
            return Err(Error::PhotonCutoff {
                needed: n_max,
                limit: numerics.max_photons,
            });
        }
    }
}

/// Ground state for fixed matrix elements `me` (no depth iteration).
pub fn solve_with_elements(
    p: &ModelParams,
    me: &MatrixElements,
    numerics: &Numerics,
    mode: SolveMode,
) -> Result<ModelSolution> {
    p.validate()?;
    match mode {
        SolveMode::Coupled | SolveMode::Dissipative => {
            let dissipative = mode == SolveMode::Dissipative;
            let (ground, n_max) = solve_coupled(p, me, numerics, dissipative)?;
            let field = if dissipative {
                EffectiveField::scalar(p, me.j0)
            } else {
                // displaced oscillator: α = iη/Δ'
                let dp = p.delta_c_prime(me.j0);
                EffectiveField {
                    alpha0: if p.eta == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        cplx(0.0, p.eta / dp)
                    },
                    delta_c_prime: dp,
                    a_exact: None,
                    a_expanded: None,
                }
            };
            Ok(ModelSolution {
                elements: *me,
                field,
                ground,
                n_max: Some(n_max),
            })
        }
        SolveMode::Effective | SolveMode::ExactElimination => {
            let atoms = p.atoms()?;
            let b = hop_operator(&atoms, p.boundary)?;
            let (h, a) = if mode == SolveMode::Effective {
                (
                    build_effective_hamiltonian(p, me, &atoms)?,
                    field_operator_expansion(p, me, &b)?,
                )
            } else {
                (
                    build_exact_elimination_hamiltonian(p, me, &atoms)?,
                    field_operator_exact(p, me, &b)?,
                )
            };
            let mut ground = ground_state(&h, &numerics.solver)?;
            let m = photon_mean_with_field(&a, &ground.state);
            ground.photon_mean = Some(m);
            ground.v_eff = Some(p.depth_for_photons(m));
            let mut field = EffectiveField::scalar(p, p.field_j0(me));
            if mode == SolveMode::Effective {
                field.a_expanded = Some(a);
            } else {
                field.a_exact = Some(a);
            }
            Ok(ModelSolution {
                elements: *me,
                field,
                ground,
                n_max: None,
            })
        }
    }
}

/// `⟨ψ|a†a|ψ⟩ = ‖aψ‖²` for an atom-space field operator.
pub fn photon_mean_with_field(a: &OperatorMatrix, state: &[C64]) -> f64 {
    a.mul_vec(state).iter().map(|z| z.norm_sqr()).sum()
}

/// Self-consistent depth followed by the ground state of the chosen model.
pub fn solve_model(p: &ModelParams, numerics: &Numerics, mode: SolveMode) -> Result<ModelSolution> {
    let depth = self_consistent_depth(p, numerics, mode)?;
    solve_with_elements(p, &depth.elements, numerics, mode)
}
