//! Chiral metastable two-level system: electric and magnetic dipole
//! coupling to circularly polarized light, with tunneling decay `Γ` from the
//! upper level.
//!
//! In the rotating-wave approximation
//!
//! ```text
//! H = [[0, Ω_m + Ω_d], [Ω_m* + Ω_d*, Δ − iΓ]],   Ω_m = ε·Ω_d,
//! ```
//!
//! and the sign of `Re ε` flips between enantiomers. At `Δ = 0` the two
//! enantiomers reach their exceptional points at `Γ = 2|Ω_d(1 ± ε)|`.

use std::f64::consts::TAU;

use nhq_core::{eig2, propagate, ComplexMatrix2, Convention, StateVector2, StepControl};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::three_level::{conj3, dot3, unit_z, Handedness, Vec3};
use crate::units::{au_to_fs, C_AU};

/// Electric Rabi frequency of the reference configuration (a.u.).
pub const REFERENCE_OMEGA_D: f64 = 2.5e-4;

/// One enantiomer of the resonance model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonanceConfig {
    /// Electric Rabi frequency `|Ω_d|` (a.u.).
    pub omega_d: f64,
    /// `Ω_m/Ω_d` for this enantiomer.
    pub epsilon: Complex64,
    /// Detuning (a.u.).
    pub delta: f64,
    /// Tunneling rate of the upper level (a.u.).
    pub gamma: f64,
    pub handedness: Handedness,
}

impl ResonanceConfig {
    /// Scalar model with real `ε`.
    pub fn new(omega_d: f64, epsilon: f64, delta: f64, gamma: f64, handedness: Handedness) -> Result<Self> {
        let cfg = Self { omega_d, epsilon: Complex64::new(epsilon, 0.0), delta, gamma, handedness };
        cfg.validate()?;
        Ok(cfg)
    }

    /// R enantiomer with `Ω_d = 2.5·10⁻⁴` a.u. and `ε = −1/c`.
    pub fn reference(gamma: f64) -> Self {
        Self {
            omega_d: REFERENCE_OMEGA_D,
            epsilon: Complex64::new(-1.0 / C_AU, 0.0),
            delta: 0.0,
            gamma,
            handedness: Handedness::R,
        }
    }

    /// Rabi frequencies from molecular-frame dipoles `d`, `m` and a plane
    /// wave `A = A₀ e exp(i(kz − ωt))`, using `Ω_d = −d·E`, `Ω_m = −m·B`
    /// with `E = iωA`, `B = ik ẑ×A`. The common phase of `Ω_d` is removed.
    pub fn from_vectors(
        d: &Vec3,
        m: &Vec3,
        a0_omega: f64,
        polarization: &Vec3,
        delta: f64,
        gamma: f64,
        handedness: Handedness,
    ) -> Result<Self> {
        let (e, b) = plane_wave_fields(a0_omega, polarization);
        let omega_d = -dot3(d, &e);
        let omega_m = -dot3(m, &b);
        if omega_d.norm() == 0.0 {
            return Err(Error::InvalidArgument("electric coupling vanishes".into()));
        }
        let cfg = Self { omega_d: omega_d.norm(), epsilon: omega_m / omega_d, delta, gamma, handedness };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_d > 0.0 && self.omega_d.is_finite()) {
            return Err(Error::InvalidArgument(format!("omega_d must be positive: {}", self.omega_d)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must be non-negative: {}", self.gamma)));
        }
        if !(self.delta.is_finite() && self.epsilon.re.is_finite() && self.epsilon.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite detuning or epsilon".into()));
        }
        Ok(())
    }

    /// The other enantiomer: `ε → −ε`.
    pub fn mirrored(&self) -> Self {
        Self { epsilon: -self.epsilon, handedness: self.handedness.flipped(), ..*self }
    }

    /// This configuration for the requested enantiomer.
    pub fn for_handedness(&self, h: Handedness) -> Self {
        if h == self.handedness {
            *self
        } else {
            self.mirrored()
        }
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..*self }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon: Complex64::new(epsilon, 0.0), ..*self }
    }

    /// `Ω_d + Ω_m = Ω_d(1 + ε)`.
    pub fn coupling(&self) -> Complex64 {
        self.omega_d * (Complex64::new(1.0, 0.0) + self.epsilon)
    }
}

/// `E = iωA₀e` and `B = i(ωA₀/c) ẑ×e` at the origin.
pub fn plane_wave_fields(a0_omega: f64, e: &Vec3) -> (Vec3, Vec3) {
    let i = Complex64::new(0.0, 1.0);
    let z = unit_z();
    let cross = [z[1] * e[2] - z[2] * e[1], z[2] * e[0] - z[0] * e[2], z[0] * e[1] - z[1] * e[0]];
    let ef = [i * a0_omega * e[0], i * a0_omega * e[1], i * a0_omega * e[2]];
    let k = a0_omega / C_AU;
    let bf = [i * k * cross[0], i * k * cross[1], i * k * cross[2]];
    (ef, bf)
}

/// Optical chirality `Im[E*·B]` of the plane wave.
pub fn field_chirality(a0_omega: f64, e: &Vec3) -> f64 {
    let (ef, bf) = plane_wave_fields(a0_omega, e);
    dot3(&conj3(&ef), &bf).im
}

/// Molecular pseudoscalar `Im[d·m*]`.
pub fn molecular_chirality(d: &Vec3, m: &Vec3) -> f64 {
    dot3(d, &conj3(m)).im
}

pub fn build_h2(cfg: &ResonanceConfig) -> ComplexMatrix2 {
    let w = cfg.coupling();
    ComplexMatrix2::new(Complex64::new(0.0, 0.0), w, w.conj(), Complex64::new(cfg.delta, -cfg.gamma))
}

/// `(λ₊, λ₋)` ordered by real part, then imaginary part.
pub fn eigenvalues2(cfg: &ResonanceConfig) -> Result<(Complex64, Complex64)> {
    let e = eig2(&build_h2(cfg))?;
    Ok((e.lambda_plus, e.lambda_minus))
}

/// Exceptional-point decay rates `(Γ^EP_R, Γ^EP_L)` at `Δ = 0`.
pub fn ep_gamma(cfg: &ResonanceConfig) -> (f64, f64) {
    let own = 2.0 * cfg.coupling().norm();
    let other = 2.0 * cfg.mirrored().coupling().norm();
    match cfg.handedness {
        Handedness::R => (own, other),
        Handedness::L => (other, own),
    }
}

/// Regime of the eigenvalue pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtPhase {
    /// Equal decay, split energies.
    Symmetric,
    /// Equal energies, split decay.
    Broken,
    Exceptional,
}

/// Classifies the spectrum by which part of `λ₊ − λ₋` dominates; within
/// `tol·|λ|` of coalescence the point is exceptional.
pub fn pt_phase(cfg: &ResonanceConfig, tol: f64) -> Result<PtPhase> {
    let (lp, lm) = eigenvalues2(cfg)?;
    let d = lp - lm;
    let scale = lp.norm().max(lm.norm()).max(cfg.omega_d);
    Ok(if d.norm() <= tol * scale {
        PtPhase::Exceptional
    } else if d.re.abs() >= d.im.abs() {
        PtPhase::Symmetric
    } else {
        PtPhase::Broken
    })
}

/// Amplitude lifetime `1/|Im λ₊|` of the longer-lived state at `Δ = 0`.
pub fn lifetime(cfg: &ResonanceConfig) -> Result<f64> {
    let (lp, lm) = eigenvalues2(cfg)?;
    Ok(1.0 / lp.im.abs().min(lm.im.abs()))
}

/// Beating period `2π/|Re(λ₊ − λ₋)|`; infinite when the real parts coincide.
pub fn oscillation_period(cfg: &ResonanceConfig) -> Result<f64> {
    let (lp, lm) = eigenvalues2(cfg)?;
    let d = (lp.re - lm.re).abs();
    Ok(if d > 0.0 { TAU / d } else { f64::INFINITY })
}

/// Dichroism from two amplitude lifetimes after time `t`:
/// `tanh(T(τ_R − τ_L)/(τ_R τ_L))`, the exact value for single-exponential
/// populations `exp(−2T/τ)`.
pub fn cd_tanh_estimate(tau_r: f64, tau_l: f64, t: f64) -> f64 {
    if tau_r == tau_l {
        return 0.0;
    }
    (t * (tau_r - tau_l) / (tau_r * tau_l)).tanh()
}

/// Bound populations and dichroism of both enantiomers.
#[derive(Clone, Debug, PartialEq)]
pub struct CdTrace {
    pub times_au: Vec<f64>,
    pub times_fs: Vec<f64>,
    pub p_r: Vec<f64>,
    pub p_l: Vec<f64>,
    pub cd: Vec<f64>,
    pub residual_r: f64,
    pub residual_l: f64,
}

impl CdTrace {
    pub fn final_cd(&self) -> f64 {
        *self.cd.last().expect("non-empty trace")
    }
}

/// Bound population `|c₁|² + |c₂|²` from `|1⟩` at the uniform output times.
pub fn bound_population(cfg: &ResonanceConfig, t_end: f64, ctl: &StepControl) -> Result<(Vec<f64>, Vec<f64>)> {
    cfg.validate()?;
    let h = build_h2(cfg);
    let traj = propagate(|_| h, Convention::Schrodinger, StateVector2::from_real(1.0, 0.0), 0.0, t_end, ctl)?;
    Ok((traj.times, traj.states.iter().map(StateVector2::norm_sq).collect()))
}

/// Propagates both enantiomers of `cfg` from `|1⟩` up to `t_end` (a.u.).
pub fn evolve_cd(cfg: &ResonanceConfig, t_end: f64, ctl: &StepControl) -> Result<CdTrace> {
    let (times, p_r) = bound_population(&cfg.for_handedness(Handedness::R), t_end, ctl)?;
    let (_, p_l) = bound_population(&cfg.for_handedness(Handedness::L), t_end, ctl)?;
    let cd = p_r
        .iter()
        .zip(&p_l)
        .map(|(r, l)| if r + l > 0.0 { ((r - l) / (r + l)).clamp(-1.0, 1.0) } else { 0.0 })
        .collect();
    Ok(CdTrace {
        times_fs: times.iter().map(|t| au_to_fs(*t)).collect(),
        residual_r: *p_r.last().expect("non-empty"),
        residual_l: *p_l.last().expect("non-empty"),
        times_au: times,
        p_r,
        p_l,
        cd,
    })
}

/// One row of the `(Γ/Ω_d, t)` dichroism map.
#[derive(Clone, Debug, PartialEq)]
pub struct CdMapRow {
    pub gamma_ratio: f64,
    pub trace: CdTrace,
    pub tau_r: f64,
    pub tau_l: f64,
}

/// Dichroism traces for `Γ = r·Ω_d`, `r` in `ratios`.
pub fn cd_gamma_map(template: &ResonanceConfig, ratios: &[f64], t_end: f64, ctl: &StepControl) -> Result<Vec<CdMapRow>> {
    ratios
        .iter()
        .map(|&r| {
            let cfg = template.with_gamma(r * template.omega_d);
            Ok(CdMapRow {
                gamma_ratio: r,
                trace: evolve_cd(&cfg, t_end, ctl)?,
                tau_r: lifetime(&cfg.for_handedness(Handedness::R))?,
                tau_l: lifetime(&cfg.for_handedness(Handedness::L))?,
            })
        })
        .collect()
}
