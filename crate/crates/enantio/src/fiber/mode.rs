//! Weakly guiding LP₀₁ mode of a step-index fiber.
//!
//! With `ρ = r/r_core` the field is `J₀(Xρ)` in the core and
//! `J₀(X)K₀(Yρ)/K₀(Y)` outside, where `X² + Y² = V²` and
//! `X J₁(X)/J₀(X) = Y K₁(Y)/K₀(Y)`.

use super::special::{bessel_j0, bessel_j1, bessel_k0, bessel_k1, J0_FIRST_ZERO};
use super::FiberConfig;
use crate::error::{Error, Result};
use crate::units::specific_rotation_to_rad_per_m;

/// Guided LP₀₁ mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeSolution {
    /// Propagation constant (1/m).
    pub beta: f64,
    pub x: f64,
    pub y: f64,
    pub v: f64,
    /// Fraction of the power inside the core.
    pub gamma_core: f64,
    /// Fraction of the power in the evanescent field.
    pub gamma_evan: f64,
    pub single_mode: bool,
}

impl ModeSolution {
    /// `β/(k n_core)`.
    pub fn relative_beta(&self, fib: &FiberConfig) -> f64 {
        self.beta / (fib.k0() * fib.n_core)
    }
}

/// `X J₁(X)/J₀(X) − Y K₁(Y)/K₀(Y)` as a function of `Y`, with `X = √(V² − Y²)`.
fn characteristic(y: f64, v: f64) -> f64 {
    let x = (v * v - y * y).max(0.0).sqrt();
    x * bessel_j1(x) / bessel_j0(x) - y * bessel_k1(y) / bessel_k0(y)
}

/// Composite Simpson rule with an even number of intervals.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// Solves the LP₀₁ characteristic equation by bisection and integrates
/// `|E|² ρ dρ` over core and cladding.
pub fn solve_lp01(fib: &FiberConfig) -> Result<ModeSolution> {
    fib.validate()?;
    let v = fib.v_number();
    if v >= J0_FIRST_ZERO {
        return Err(Error::MultiMode { v });
    }
    if v <= 0.0 {
        return Err(Error::NonGuiding(format!("V = {v}")));
    }
    // Near cutoff Y ≈ 2e^{−γ}·exp(−2/V²) is exponentially small, so the
    // bracket is bisected geometrically while it spans many decades.
    let mut lo = 1e-300 * v;
    let mut hi = v * (1.0 - 1e-12);
    let (glo, ghi) = (characteristic(lo, v), characteristic(hi, v));
    if !(glo > 0.0 && ghi < 0.0) {
        return Err(Error::NonGuiding(format!("no sign change on (0, V): f = {glo}, {ghi}")));
    }
    for _ in 0..400 {
        let mid = if hi > 4.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if characteristic(mid, v) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let y = 0.5 * (lo + hi);
    let x = (v * v - y * y).sqrt();
    let k = fib.k0();
    let beta = ((k * fib.n_core).powi(2) - (x / fib.r_core).powi(2)).sqrt();

    let core = simpson(|r| bessel_j0(x * r).powi(2) * r, 0.0, 1.0, 4000);
    let scale = (bessel_j0(x) / bessel_k0(y)).powi(2);
    // ρ = eᵘ resolves both the logarithmic tail near cutoff and the
    // exponential decay of well-confined modes.
    let u_max = (1.0 + 40.0 / y).ln();
    let clad = scale * simpson(|u| bessel_k0(y * u.exp()).powi(2) * (2.0 * u).exp(), 0.0, u_max, 20_000);
    let total = core + clad;
    Ok(ModeSolution {
        beta,
        x,
        y,
        v,
        gamma_core: core / total,
        gamma_evan: clad / total,
        single_mode: true,
    })
}

/// Optical rotation `[α]·ρ·Γ_evan` in rad/m from a specific rotation in
/// deg·dm⁻¹·(g/mL)⁻¹ and a density in g/mL.
pub fn alpha_from_solution(specific_rotation: f64, density: f64, gamma_evan: f64) -> f64 {
    specific_rotation_to_rad_per_m(specific_rotation, density) * gamma_evan
}
