//! Twisted gain/loss single-mode fiber immersed in a chiral solution.
//!
//! In the frame co-rotating with the fiber the circular components
//! `Ψ = (Ψ₋, Ψ₊)` obey `dΨ/dz = HΨ` with
//!
//! ```text
//! H = [[i k_t, −iΔβ − ΔΓ], [−iΔβ − ΔΓ, −i k_t]] + ee·diag(−iα_eff, iα_eff),
//! ```
//!
//! where `k_t` is the torsion coupling, `ΔΓ` the relative gain/loss, `Δβ`
//! the birefringence and `α_eff` the signed optical rotation of the pure
//! enantiomer, weighted by the evanescent power fraction.

pub mod coupled;
pub mod mode;
pub mod special;

pub use coupled::{
    beating_period, build_fiber_h, classify, fiber_ep_positions, fiber_eigenvalues, gap_map, lab_twist_rate, locate_fiber_eps,
    propagate_fiber, sensitivity, FiberPhase, InputPolarization, Observable, PropagationTrace, SensitivityRow,
};
pub use mode::{alpha_from_solution, solve_lp01, ModeSolution};

use crate::error::{Error, Result};

/// Optical rotation used for the fenchone solution (rad/m).
pub const PAPER_ALPHA: f64 = 2.104;
/// Specific rotation of fenchone at 589 nm, deg·dm⁻¹·(g/mL)⁻¹.
pub const FENCHONE_SPECIFIC_ROTATION: f64 = 57.24;
/// Density of fenchone, g/mL.
pub const FENCHONE_DENSITY: f64 = 0.948;

/// Fiber geometry and non-Hermitian parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberConfig {
    pub n_core: f64,
    pub n_solution: f64,
    /// Core radius (m).
    pub r_core: f64,
    /// Vacuum wavelength (m).
    pub wavelength: f64,
    /// `Γ_x − Γ_y` (1/m).
    pub delta_gamma: f64,
    /// `β_x − β_y` (1/m).
    pub delta_beta: f64,
    /// Signed torsion rate (1/m); positive is a clockwise twist.
    pub phi_t: f64,
    /// Fiber length (m).
    pub length: f64,
    /// Product `R·G` of rigidity modulus and photoelastic constant; zero
    /// gives `k_t = φ_t`.
    pub photoelastic_rg: f64,
}

impl FiberConfig {
    /// PMMA fiber at 589 nm in fenchone, tuned to the racemic exceptional
    /// point with a clockwise twist: `φ_t = ΔΓ = 2.39 m⁻¹`, `L = 10 m`.
    pub fn paper() -> Self {
        Self {
            n_core: 1.4905,
            n_solution: 1.459,
            r_core: 0.5e-6,
            wavelength: 589e-9,
            delta_gamma: 2.39,
            delta_beta: 0.0,
            phi_t: 2.39,
            length: 10.0,
            photoelastic_rg: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.n_core,
            self.n_solution,
            self.r_core,
            self.wavelength,
            self.delta_gamma,
            self.delta_beta,
            self.phi_t,
            self.length,
            self.photoelastic_rg,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::InvalidArgument("non-finite fiber parameter".into()));
        }
        if !(self.n_core > self.n_solution && self.n_solution > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "guidance needs n_core > n_solution > 0: {} vs {}",
                self.n_core, self.n_solution
            )));
        }
        if !(self.r_core > 0.0 && self.wavelength > 0.0 && self.length > 0.0) {
            return Err(Error::InvalidArgument("r_core, wavelength and length must be positive".into()));
        }
        Ok(())
    }

    /// Vacuum wavenumber `2π/λ`.
    pub fn k0(&self) -> f64 {
        std::f64::consts::TAU / self.wavelength
    }

    /// Normalized frequency `V = k r √(n_c² − n_s²)`.
    pub fn v_number(&self) -> f64 {
        self.k0() * self.r_core * (self.n_core * self.n_core - self.n_solution * self.n_solution).sqrt()
    }

    /// Torsion coupling `k_t = φ_t(1 − R·G·n_c)`.
    pub fn k_t(&self) -> f64 {
        self.phi_t * (1.0 - self.photoelastic_rg * self.n_core)
    }
}

/// Sign of the optical-rotation term relative to the torsion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationSign {
    /// `α_eff = −α`: an excess of left-handed molecules (`ee < 0`) puts the
    /// clockwise-twisted fiber `φ_t = +ΔΓ` in the PT-broken phase.
    FigureMatched,
    /// `α_eff = +α`, the Hamiltonian exactly as written above; `ee < 0`
    /// puts the counterclockwise fiber `φ_t = −ΔΓ` in the PT-broken phase.
    AsPrinted,
}

impl RotationSign {
    pub fn factor(self) -> f64 {
        match self {
            Self::FigureMatched => -1.0,
            Self::AsPrinted => 1.0,
        }
    }
}

/// Chiral solution around the fiber.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionConfig {
    /// Enantiomeric excess `C_R − C_L`.
    pub ee: f64,
    /// Magnitude of the optical rotation of the pure R solution (rad/m).
    pub alpha: f64,
    pub sign: RotationSign,
}

impl SolutionConfig {
    pub fn new(ee: f64, alpha: f64, sign: RotationSign) -> Result<Self> {
        let s = Self { ee, alpha, sign };
        s.validate()?;
        Ok(s)
    }

    /// Fenchone with `α = 2.104 rad/m` and the figure-matched sign.
    pub fn paper(ee: f64) -> Self {
        Self { ee, alpha: PAPER_ALPHA, sign: RotationSign::FigureMatched }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ee.is_finite() && self.ee.abs() <= 1.0) {
            return Err(Error::InvalidArgument(format!("ee must lie in [-1, 1]: {}", self.ee)));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::InvalidArgument(format!("alpha must be non-negative: {}", self.alpha)));
        }
        Ok(())
    }

    /// Signed rotation `α_eff`.
    pub fn alpha_eff(&self) -> f64 {
        self.sign.factor() * self.alpha
    }

    pub fn with_ee(&self, ee: f64) -> Self {
        Self { ee, ..*self }
    }
}
