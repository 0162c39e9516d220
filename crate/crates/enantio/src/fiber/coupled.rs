//! Coupled-mode propagation, exceptional points and enantiomeric-excess
//! sensitivity of the twisted fiber.

use nhq_core::ep::{ep_locate_with, EpSearch};
use nhq_core::{eig2, propagate, ComplexMatrix2, Convention, EpCandidate, ParamBox, StateVector2, StepControl};
use num_complex::Complex64;

use super::{FiberConfig, SolutionConfig};
use crate::error::{Error, Result};

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `H` in the co-rotating circular basis `(Ψ₋, Ψ₊)`.
pub fn build_fiber_h(fib: &FiberConfig, sol: &SolutionConfig) -> ComplexMatrix2 {
    let d = fib.k_t() - sol.ee * sol.alpha_eff();
    let off = cz(-fib.delta_gamma, -fib.delta_beta);
    ComplexMatrix2::new(cz(0.0, d), off, off, cz(0.0, -d))
}

/// `λ± = ±√((iΔβ + ΔΓ)² − (k_t − ee·α_eff)²)`, principal root first.
pub fn fiber_eigenvalues(fib: &FiberConfig, sol: &SolutionConfig) -> (Complex64, Complex64) {
    let d = fib.k_t() - sol.ee * sol.alpha_eff();
    let w = cz(fib.delta_gamma, fib.delta_beta);
    let s = (w * w - d * d).sqrt();
    (s, -s)
}

/// Exceptional points `(φ_t, Δβ) = ((ee·α_eff ∓ ΔΓ)/(1 − R·G·n_c), 0)`.
pub fn fiber_ep_positions(fib: &FiberConfig, sol: &SolutionConfig) -> [(f64, f64); 2] {
    let scale = 1.0 - fib.photoelastic_rg * fib.n_core;
    let shift = sol.ee * sol.alpha_eff();
    [((shift - fib.delta_gamma) / scale, 0.0), ((shift + fib.delta_gamma) / scale, 0.0)]
}

/// Numerical exceptional points in `(φ_t, Δβ)` over `region`.
pub fn locate_fiber_eps(fib: &FiberConfig, sol: &SolutionConfig, region: &ParamBox, tol: f64) -> Result<Vec<EpCandidate>> {
    let search = EpSearch { tol, ..EpSearch::default() };
    let h = |phi: f64, dbeta: f64| build_fiber_h(&FiberConfig { phi_t: phi, delta_beta: dbeta, ..*fib }, sol);
    Ok(ep_locate_with(h, region, &search)?)
}

/// `|λ₊ − λ₋|` on a `(φ_t, Δβ)` grid; rows follow `phi_grid`.
pub fn gap_map(fib: &FiberConfig, sol: &SolutionConfig, phi_grid: &[f64], dbeta_grid: &[f64]) -> Vec<Vec<f64>> {
    phi_grid
        .iter()
        .map(|&phi| {
            dbeta_grid
                .iter()
                .map(|&db| {
                    let (a, b) = fiber_eigenvalues(&FiberConfig { phi_t: phi, delta_beta: db, ..*fib }, sol);
                    (a - b).norm()
                })
                .collect()
        })
        .collect()
}

/// Spectral phase of the fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberPhase {
    /// Equal gain, split phase constants: beating.
    PtSymmetric,
    /// Equal phase constants, split gain.
    PtBroken,
    Exceptional,
}

impl FiberPhase {
    pub fn label(self) -> &'static str {
        match self {
            Self::PtSymmetric => "pt_symmetric",
            Self::PtBroken => "pt_broken",
            Self::Exceptional => "ep",
        }
    }
}

/// Classifies `H` by the dominant part of `λ₊ − λ₋`; within `10⁻⁶·|ΔΓ|`
/// of coalescence the point is exceptional.
pub fn classify(fib: &FiberConfig, sol: &SolutionConfig) -> Result<FiberPhase> {
    let h = build_fiber_h(fib, sol);
    let e = eig2(&h)?;
    let d = e.lambda_plus - e.lambda_minus;
    let scale = if fib.delta_gamma != 0.0 { fib.delta_gamma.abs() } else { h.norm() };
    Ok(if d.norm() <= 1e-6 * scale {
        FiberPhase::Exceptional
    } else if d.re.abs() >= d.im.abs() {
        FiberPhase::PtBroken
    } else {
        FiberPhase::PtSymmetric
    })
}

/// Input polarization in the laboratory frame at `z = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputPolarization {
    /// `Ψ₊` only (`ξ = +1`).
    Rcp,
    /// `Ψ₋` only (`ξ = −1`).
    Lcp,
    /// Linear at angle `θ` from x̂.
    Linear(f64),
}

impl InputPolarization {
    /// Unit-norm `(Ψ₋, Ψ₊)`.
    pub fn state(self) -> StateVector2 {
        match self {
            Self::Rcp => StateVector2::from_real(0.0, 1.0),
            Self::Lcp => StateVector2::from_real(1.0, 0.0),
            Self::Linear(theta) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                StateVector2::new(Complex64::from_polar(s, -theta), Complex64::from_polar(s, theta))
            }
        }
    }

    /// Mirror image through the x–z plane.
    pub fn mirrored(self) -> Self {
        match self {
            Self::Rcp => Self::Lcp,
            Self::Lcp => Self::Rcp,
            Self::Linear(theta) => Self::Linear(-theta),
        }
    }
}

/// Fields, power and ellipticity along the fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagationTrace {
    pub z: Vec<f64>,
    pub psi_minus: Vec<Complex64>,
    pub psi_plus: Vec<Complex64>,
    /// `|Ψ₊|² + |Ψ₋|²`, relative to the removed common gain.
    pub p: Vec<f64>,
    /// `P(z)/P(0)`.
    pub p_norm: Vec<f64>,
    /// `(|Ψ₊|² − |Ψ₋|²)/P`.
    pub xi: Vec<f64>,
    pub phase_class: FiberPhase,
}

impl PropagationTrace {
    pub fn final_power(&self) -> f64 {
        *self.p.last().expect("non-empty trace")
    }

    pub fn final_ellipticity(&self) -> f64 {
        *self.xi.last().expect("non-empty trace")
    }
}

fn ellipticity(psi: &StateVector2) -> f64 {
    let p = psi.norm_sq();
    if p > 0.0 {
        ((psi.c2.norm_sqr() - psi.c1.norm_sqr()) / p).clamp(-1.0, 1.0)
    } else {
        0.0
    }
}

/// Integrates `dΨ/dz = HΨ` over `[0, L]` with the output grid of `ctl`.
pub fn propagate_fiber(fib: &FiberConfig, sol: &SolutionConfig, input: InputPolarization, ctl: &StepControl) -> Result<PropagationTrace> {
    fib.validate()?;
    sol.validate()?;
    let h = build_fiber_h(fib, sol);
    let psi0 = input.state();
    let traj = propagate(|_| h, Convention::Spatial, psi0, 0.0, fib.length, ctl)?;
    let p0 = psi0.norm_sq();
    let p: Vec<f64> = traj.states.iter().map(StateVector2::norm_sq).collect();
    Ok(PropagationTrace {
        p_norm: p.iter().map(|x| x / p0).collect(),
        xi: traj.states.iter().map(ellipticity).collect(),
        psi_minus: traj.states.iter().map(|s| s.c1).collect(),
        psi_plus: traj.states.iter().map(|s| s.c2).collect(),
        z: traj.times,
        p,
        phase_class: classify(fib, sol)?,
    })
}

/// Signed rotation rate of the laboratory-frame polarization,
/// `Re[(E*×dE/dz)·ẑ]/|E|²`, where `E(z)` is the co-rotating field rotated
/// back by the geometric twist angle `φ_t z`.
pub fn lab_twist_rate(fib: &FiberConfig, sol: &SolutionConfig, trace: &PropagationTrace) -> Vec<f64> {
    let h = build_fiber_h(fib, sol);
    trace
        .z
        .iter()
        .zip(trace.psi_minus.iter().zip(&trace.psi_plus))
        .map(|(&z, (&m, &p))| {
            let psi = StateVector2::new(m, p);
            let dpsi = h.apply(&psi);
            let rot = Complex64::from_polar(1.0, fib.phi_t * z);
            let (a_plus, a_minus) = (rot * p, rot.conj() * m);
            let i_phi = cz(0.0, fib.phi_t);
            let b_plus = rot * (i_phi * p + dpsi.c2);
            let b_minus = rot.conj() * (-i_phi * m + dpsi.c1);
            let norm = a_plus.norm_sqr() + a_minus.norm_sqr();
            ((a_plus.conj() * b_plus).im - (a_minus.conj() * b_minus).im) / norm
        })
        .collect()
}

/// Mean spacing of the interior local maxima of `p(z)`, each refined by a
/// parabola through its three samples; `None` with fewer than two maxima.
pub fn beating_period(z: &[f64], p: &[f64]) -> Option<f64> {
    let mut peaks = Vec::new();
    for i in 1..p.len().saturating_sub(1) {
        if p[i] > p[i - 1] && p[i] >= p[i + 1] {
            let (a, b, c) = (p[i - 1], p[i], p[i + 1]);
            let denom = a - 2.0 * b + c;
            let offset = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            let h = z[i + 1] - z[i];
            peaks.push(z[i] + offset * h);
        }
    }
    if peaks.len() < 2 {
        return None;
    }
    Some((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

/// Observable at the fiber end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    Power,
    Ellipticity,
}

impl Observable {
    pub fn label(self) -> &'static str {
        match self {
            Self::Power => "power",
            Self::Ellipticity => "ellipticity",
        }
    }
}

/// Sensitivity `R = S'(ee)/|S(ee)|` at one excess.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SensitivityRow {
    pub ee: f64,
    pub s: f64,
    pub r: f64,
    /// `|S| < 10⁻¹²`; `r` then carries the largest finite magnitude.
    pub saturated: bool,
}

fn end_value(fib: &FiberConfig, sol: &SolutionConfig, input: InputPolarization, observable: Observable, ctl: &StepControl) -> Result<f64> {
    let h = build_fiber_h(fib, sol);
    let ctl = StepControl { output_intervals: 1, ..*ctl };
    let traj = propagate(|_| h, Convention::Spatial, input.state(), 0.0, fib.length, &ctl)?;
    let psi = traj.states[traj.states.len() - 1];
    Ok(match observable {
        Observable::Power => psi.norm_sq(),
        Observable::Ellipticity => ellipticity(&psi),
    })
}

/// `R(ee)` on `ee_grid` by central differences with step
/// `min(10⁻⁴, spacing/4)`.
pub fn sensitivity(
    fib: &FiberConfig,
    template: &SolutionConfig,
    ee_grid: &[f64],
    observable: Observable,
    input: InputPolarization,
    ctl: &StepControl,
) -> Result<Vec<SensitivityRow>> {
    fib.validate()?;
    template.validate()?;
    if ee_grid.iter().any(|e| !(e.is_finite() && e.abs() <= 1.0)) {
        return Err(Error::InvalidArgument("ee grid must lie in [-1, 1]".into()));
    }
    let spacing = ee_grid
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let h = 1e-4f64.min(spacing / 4.0);
    let at = |ee: f64| end_value(fib, &SolutionConfig { ee, ..*template }, input, observable, ctl);
    ee_grid
        .iter()
        .map(|&ee| {
            let s = at(ee)?;
            let ds = (at(ee + h)? - at(ee - h)?) / (2.0 * h);
            let saturated = s.abs() < 1e-12;
            let r = if saturated { f64::MAX.copysign(ds) } else { ds / s.abs() };
            Ok(SensitivityRow { ee, s, r, saturated })
        })
        .collect()
}
