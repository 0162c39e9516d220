//! Dynamical and adiabatic encirclement of exceptional points in the
//! `(Δ, F₃)` plane, with the population-inversion, switch and robustness
//! metrics.
//!
//! The loop is
//!
//! ```text
//! Δ(t)  = x₀ ± ρₓ sin(2π(t − t₀)/T)
//! F₃(t) = y₀ − ρ_y cos(2π(t − t₀)/T)
//! ```
//!
//! with `+` for counterclockwise and `−` for clockwise traversal, so that
//! the loop starts and ends at `F₃ = y₀ − ρ_y`, which is zero for the
//! reference loop.

use std::f64::consts::TAU;

use nhq_core::{eig2, propagate, track_path, BranchTracking, ComplexMatrix2, Convention, EigenSystem2, StateVector2, StepControl};

use crate::error::{Error, Result};
use crate::three_level::{full_hamiltonian, reference_ep, EpPoint, Handedness, MolecularFieldConfig};

/// Sense of traversal in the `(Δ, F₃)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Counterclockwise,
    Clockwise,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Self::Counterclockwise => 1.0,
            Self::Clockwise => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Self::Counterclockwise => Self::Clockwise,
            Self::Clockwise => Self::Counterclockwise,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Counterclockwise => "ccw",
            Self::Clockwise => "cw",
        }
    }
}

/// Adiabatic state the run starts in: `+` has the larger real eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn index(self) -> usize {
        match self {
            Self::Plus => 0,
            Self::Minus => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Plus => "plus",
            Self::Minus => "minus",
        }
    }
}

/// Deformation of the reference loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deformation {
    /// `ρₓ ← ρ·ρₓ⁽⁰⁾`.
    pub radius_scale: f64,
    /// `x₀ ← δ·x₀⁽⁰⁾`.
    pub center_shift: f64,
}

impl Default for Deformation {
    fn default() -> Self {
        Self { radius_scale: 1.0, center_shift: 1.0 }
    }
}

/// Elliptic loop in `(Δ, F₃)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSpec {
    pub center: (f64, f64),
    pub radii: (f64, f64),
    pub direction: Direction,
    pub t_loop: f64,
    pub t0: f64,
    pub deformation: Deformation,
}

impl PathSpec {
    pub fn validate(&self) -> Result<()> {
        let (rx, ry) = self.radii;
        if !(rx > 0.0 && ry > 0.0 && rx.is_finite() && ry.is_finite()) {
            return Err(Error::InvalidArgument(format!("loop radii must be positive: {:?}", self.radii)));
        }
        if !(self.t_loop > 0.0 && self.t_loop.is_finite() && self.t0.is_finite()) {
            return Err(Error::InvalidArgument(format!("loop time must be positive: {}", self.t_loop)));
        }
        if !(self.center.0.is_finite() && self.center.1.is_finite()) {
            return Err(Error::InvalidArgument("non-finite loop center".into()));
        }
        Ok(())
    }

    /// `(Δ, F₃)` at loop angle `theta`.
    pub fn at_angle(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (
            self.center.0 + self.direction.sign() * self.radii.0 * s,
            self.center.1 - self.radii.1 * c,
        )
    }

    /// `(Δ, F₃)` at time `t`.
    pub fn at(&self, t: f64) -> (f64, f64) {
        self.at_angle(TAU * (t - self.t0) / self.t_loop)
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + self.t_loop
    }

    /// Whether `p` lies strictly inside the ellipse.
    pub fn encloses(&self, p: EpPoint) -> bool {
        let u = (p.delta - self.center.0) / self.radii.0;
        let v = (p.f3 - self.center.1) / self.radii.1;
        u * u + v * v < 1.0
    }

    /// The same loop traversed in the opposite sense.
    pub fn reversed(&self) -> Self {
        Self { direction: self.direction.reversed(), ..*self }
    }

    /// Same geometry and timing, ignoring direction.
    pub fn same_geometry(&self, other: &Self) -> bool {
        self.center == other.center && self.radii == other.radii && self.t_loop == other.t_loop && self.t0 == other.t0
    }
}

/// Reference loop through `F₃ = 0` centred at `ep`, with `ρₓ = |Δ^EP|`,
/// `ρ_y = |F₃^EP|`, and the given deformation applied.
pub fn make_loop(ep: EpPoint, deformation: Deformation, direction: Direction, t_loop: f64, t0: f64) -> Result<PathSpec> {
    let path = PathSpec {
        center: (deformation.center_shift * ep.delta, ep.f3.abs()),
        radii: (deformation.radius_scale * ep.delta.abs(), ep.f3.abs()),
        direction,
        t_loop,
        t0,
        deformation,
    };
    path.validate()?;
    Ok(path)
}

/// Reference loop time in a.u.
pub const REFERENCE_T_LOOP: f64 = 3e5;

/// Branch-tracked eigenvalues along a loop.
#[derive(Clone, Debug, PartialEq)]
pub struct AdiabaticTrace {
    pub angles: Vec<f64>,
    pub systems: Vec<EigenSystem2>,
    pub tracking: BranchTracking,
    pub swap_flag: bool,
}

/// Eigen-decomposition of `H(Δ, F₃)` along `path` with branch tracking.
pub fn adiabatic_trace(cfg: &MolecularFieldConfig, path: &PathSpec, n_samples: usize) -> Result<AdiabaticTrace> {
    if n_samples < 256 {
        return Err(Error::InvalidArgument(format!("adiabatic trace needs at least 256 samples, got {n_samples}")));
    }
    path.validate()?;
    let h = |theta: f64| {
        let (d, f) = path.at_angle(theta);
        full_hamiltonian(cfg, d, f)
    };
    let (angles, systems, tracking) = track_path(h, 0.0, TAU, n_samples, 0.5, 20)?;
    let swap_flag = tracking.swapped;
    Ok(AdiabaticTrace { angles, systems, tracking, swap_flag })
}

/// Numerical settings of a dynamical run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopOptions {
    pub outputs: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub trace_samples: usize,
}

impl Default for LoopOptions {
    fn default() -> Self {
        Self { outputs: 4096, rel_tol: 1e-10, abs_tol: 1e-14, trace_samples: 512 }
    }
}

/// Time series of one dynamical encirclement.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopResult {
    pub handedness: Handedness,
    pub path: PathSpec,
    pub initial_branch: Branch,
    pub times: Vec<f64>,
    pub delta: Vec<f64>,
    pub f3: Vec<f64>,
    pub amplitudes: Vec<StateVector2>,
    pub p_plus: Vec<f64>,
    pub p_minus: Vec<f64>,
    pub a_of_t: Vec<f64>,
    /// `A(t₀)·A(t₀ + T)`.
    pub s: f64,
    /// Survival probability `‖ψ(T)‖²`.
    pub residual: f64,
    /// `P₊(T) + P₋(T)`.
    pub adiabatic_sum: f64,
    pub swap_flag: bool,
}

impl LoopResult {
    pub fn final_inversion(&self) -> f64 {
        *self.a_of_t.last().expect("non-empty trace")
    }

    pub fn norms(&self) -> Vec<f64> {
        self.amplitudes.iter().map(StateVector2::norm_sq).collect()
    }
}

/// Biorthogonal populations `P_k = |l_k·ψ|²/|c_k|²` of `ψ` in the eigenbasis of `h`.
pub fn adiabatic_populations(h: &ComplexMatrix2, psi: &StateVector2) -> Result<(f64, f64)> {
    let e = eig2(h)?;
    let p = |k: usize| e.left(k).dot(psi).norm_sqr() / e.norm_c(k).norm_sqr();
    Ok((p(0), p(1)))
}

/// `A = (P₊ − P₋)/(P₊ + P₋)`, zero when both vanish.
pub fn inversion(p_plus: f64, p_minus: f64) -> f64 {
    let sum = p_plus + p_minus;
    if sum > 1e-300 {
        ((p_plus - p_minus) / sum).clamp(-1.0, 1.0)
    } else {
        0.0
    }
}

/// Propagates one enantiomer around `path`, starting in the adiabatic state
/// `initial_branch` of `H(t₀)`.
pub fn run_loop(cfg: &MolecularFieldConfig, path: &PathSpec, initial_branch: Branch, opts: &LoopOptions) -> Result<LoopResult> {
    path.validate()?;
    let h_at = |t: f64| {
        let (d, f) = path.at(t);
        full_hamiltonian(cfg, d, f)
    };
    let e0 = eig2(&h_at(path.t0))?;
    let psi0 = e0.right(initial_branch.index());
    let ctl = StepControl::with_tolerances(opts.rel_tol, opts.abs_tol).with_outputs(opts.outputs);
    let traj = propagate(h_at, Convention::Schrodinger, psi0, path.t0, path.t_end(), &ctl)?;
    let n = traj.times.len();
    let (mut delta, mut f3) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut p_plus, mut p_minus, mut a_of_t) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for (t, psi) in traj.times.iter().zip(&traj.states) {
        let (d, f) = path.at(*t);
        let (pp, pm) = adiabatic_populations(&full_hamiltonian(cfg, d, f), psi)?;
        delta.push(d);
        f3.push(f);
        p_plus.push(pp);
        p_minus.push(pm);
        a_of_t.push(inversion(pp, pm));
    }
    let swap_flag = adiabatic_trace(cfg, path, opts.trace_samples.max(256))?.swap_flag;
    let last = traj.states[n - 1];
    Ok(LoopResult {
        handedness: cfg.handedness,
        path: *path,
        initial_branch,
        s: a_of_t[0] * a_of_t[n - 1],
        residual: last.norm_sq(),
        adiabatic_sum: p_plus[n - 1] + p_minus[n - 1],
        times: traj.times,
        delta,
        f3,
        amplitudes: traj.states,
        p_plus,
        p_minus,
        a_of_t,
        swap_flag,
    })
}

/// The four runs `{↺, ↻} × {+, −}` of one enantiomer on one loop.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchRuns {
    pub ccw_plus: LoopResult,
    pub ccw_minus: LoopResult,
    pub cw_plus: LoopResult,
    pub cw_minus: LoopResult,
}

impl SwitchRuns {
    pub fn all(&self) -> [&LoopResult; 4] {
        [&self.ccw_plus, &self.ccw_minus, &self.cw_plus, &self.cw_minus]
    }
}

/// Runs all four direction/branch combinations on `path`.
pub fn run_switch(cfg: &MolecularFieldConfig, path: &PathSpec, opts: &LoopOptions) -> Result<SwitchRuns> {
    let ccw = PathSpec { direction: Direction::Counterclockwise, ..*path };
    let cw = PathSpec { direction: Direction::Clockwise, ..*path };
    Ok(SwitchRuns {
        ccw_plus: run_loop(cfg, &ccw, Branch::Plus, opts)?,
        ccw_minus: run_loop(cfg, &ccw, Branch::Minus, opts)?,
        cw_plus: run_loop(cfg, &cw, Branch::Plus, opts)?,
        cw_minus: run_loop(cfg, &cw, Branch::Minus, opts)?,
    })
}

/// Switch parameter
/// `α = (S↺₊S↻₊ + S↺₋S↻₋ + S↺₊S↺₋ + S↻₊S↻₋)/4`.
///
/// Pairs each direction's two initial conditions and each initial
/// condition's two directions; `α < 0` signals a direction-determined,
/// initial-condition-independent outcome.
pub fn switch_alpha(runs: &SwitchRuns) -> Result<f64> {
    let expect = [
        (Direction::Counterclockwise, Branch::Plus),
        (Direction::Counterclockwise, Branch::Minus),
        (Direction::Clockwise, Branch::Plus),
        (Direction::Clockwise, Branch::Minus),
    ];
    let first = &runs.ccw_plus;
    for (r, (dir, branch)) in runs.all().iter().zip(expect) {
        if r.path.direction != dir || r.initial_branch != branch {
            return Err(Error::InvalidArgument(format!(
                "run slot {} {} holds {} {}",
                dir.label(),
                branch.label(),
                r.path.direction.label(),
                r.initial_branch.label()
            )));
        }
        if !r.path.same_geometry(&first.path) || r.handedness != first.handedness {
            return Err(Error::InvalidArgument("switch runs differ in path or enantiomer".into()));
        }
    }
    Ok(alpha_from_s(runs.ccw_plus.s, runs.ccw_minus.s, runs.cw_plus.s, runs.cw_minus.s))
}

/// `α` from the four `S` values.
pub fn alpha_from_s(ccw_plus: f64, ccw_minus: f64, cw_plus: f64, cw_minus: f64) -> f64 {
    (ccw_plus * cw_plus + ccw_minus * cw_minus + ccw_plus * ccw_minus + cw_plus * cw_minus) / 4.0
}

/// Loop deformation family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Radius,
    Center,
}

/// One deformation grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityRow {
    pub value: f64,
    pub alpha_r: f64,
    pub alpha_l: f64,
    pub residual_r: f64,
    pub residual_l: f64,
    /// The R point that the reference loop encircles lies inside the path.
    pub encloses_r: bool,
    /// Any L point lies inside the path.
    pub encloses_l: bool,
    pub swap_r: bool,
    pub swap_l: bool,
}

/// Switch parameter of both enantiomers on deformed loops around the
/// reference R point.
pub fn stability_point(
    cfg_r: &MolecularFieldConfig,
    cfg_l: &MolecularFieldConfig,
    mode: SweepMode,
    value: f64,
    t_loop: f64,
    opts: &LoopOptions,
) -> Result<StabilityRow> {
    let ep = reference_ep(cfg_r)?;
    let deformation = match mode {
        SweepMode::Radius => Deformation { radius_scale: value, center_shift: 1.0 },
        SweepMode::Center => Deformation { radius_scale: 1.0, center_shift: value },
    };
    let path = make_loop(ep, deformation, Direction::Counterclockwise, t_loop, 0.0)?;
    let runs_r = run_switch(cfg_r, &path, opts)?;
    let runs_l = run_switch(cfg_l, &path, opts)?;
    let l_points = crate::three_level::ep_closed_form(cfg_l)?;
    let mean_residual = |r: &SwitchRuns| r.all().iter().map(|x| x.residual).sum::<f64>() / 4.0;
    Ok(StabilityRow {
        value,
        alpha_r: switch_alpha(&runs_r)?,
        alpha_l: switch_alpha(&runs_l)?,
        residual_r: mean_residual(&runs_r),
        residual_l: mean_residual(&runs_l),
        encloses_r: path.encloses(ep),
        encloses_l: l_points.iter().any(|p| path.encloses(*p)),
        swap_r: runs_r.ccw_plus.swap_flag,
        swap_l: runs_l.ccw_plus.swap_flag,
    })
}

/// [`stability_point`] over a grid of `ρ` or `δ` values.
pub fn stability_sweep(
    cfg_r: &MolecularFieldConfig,
    cfg_l: &MolecularFieldConfig,
    mode: SweepMode,
    grid: &[f64],
    t_loop: f64,
    opts: &LoopOptions,
) -> Result<Vec<StabilityRow>> {
    if cfg_r.handedness == cfg_l.handedness {
        return Err(Error::InvalidArgument("stability sweep needs one R and one L configuration".into()));
    }
    let range = match mode {
        SweepMode::Radius => (0.25, 2.0),
        SweepMode::Center => (0.0, 2.0),
    };
    if let Some(v) = grid.iter().find(|v| !(range.0..=range.1).contains(*v)) {
        return Err(Error::InvalidArgument(format!("deformation {v} outside [{}, {}]", range.0, range.1)));
    }
    grid.iter().map(|&v| stability_point(cfg_r, cfg_l, mode, v, t_loop, opts)).collect()
}
