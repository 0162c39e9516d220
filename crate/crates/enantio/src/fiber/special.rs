//! Bessel functions `Jₙ` and modified Bessel functions `K_ν` from their
//! integral representations.
//!
//! Both integrands are analytic and either periodic (`Jₙ`) or doubly
//! exponentially decaying (`K_ν`), so the trapezoidal rule converges
//! geometrically and reaches machine precision with few nodes.

use std::f64::consts::TAU;

/// `Jₙ(x) = (1/2π) ∫₀^{2π} cos(nτ − x sin τ) dτ`.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nodes = 64 + 2 * (x.abs().ceil() as usize) + 2 * n.unsigned_abs() as usize;
    let h = TAU / nodes as f64;
    let nf = f64::from(n);
    let sum: f64 = (0..nodes)
        .map(|k| {
            let tau = h * k as f64;
            (nf * tau - x * tau.sin()).cos()
        })
        .sum();
    sum / nodes as f64
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j(0, x)
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j(1, x)
}

/// `K_ν(x) = ∫₀^∞ exp(−x cosh t) cosh(νt) dt` for `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    const H: f64 = 0.05;
    let f = |t: f64| (-x * t.cosh()).exp() * (nu * t).cosh();
    let mut sum = 0.5 * f(0.0);
    let mut k = 1;
    loop {
        let term = f(H * k as f64);
        sum += term;
        if term <= 1e-18 * sum || k > 100_000 {
            break;
        }
        k += 1;
    }
    sum * H
}

pub fn bessel_k0(x: f64) -> f64 {
    bessel_k(0.0, x)
}

pub fn bessel_k1(x: f64) -> f64 {
    bessel_k(1.0, x)
}

/// First zero of `J₀`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Ascending series `Σ (−1)^k (x/2)^{2k+n} / (k!(k+n)!)`.
    fn j_series(n: u32, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..80 {
            term *= -(x * x / 4.0) / (f64::from(k) * f64::from(k + n));
            sum += term;
        }
        sum
    }

    /// `Iₙ(x)` by its ascending series.
    fn i_series(n: u32, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..80 {
            term *= (x * x / 4.0) / (f64::from(k) * f64::from(k + n));
            sum += term;
        }
        sum
    }

    /// `K₀(x) = −(ln(x/2) + γ_E) I₀(x) + Σ_{k≥1} (x²/4)^k H_k/(k!)²`.
    fn k0_series(x: f64) -> f64 {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        let mut term = 1.0;
        let mut harmonic = 0.0;
        let mut sum = 0.0;
        for k in 1..80 {
            term *= (x * x / 4.0) / f64::from(k * k);
            harmonic += 1.0 / f64::from(k);
            sum += term * harmonic;
        }
        -((x / 2.0).ln() + EULER_GAMMA) * i_series(0, x) + sum
    }

    #[test]
    fn j_matches_tables() {
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_55).abs() < 1e-15);
        assert!(bessel_j0(J0_FIRST_ZERO).abs() < 1e-15);
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_j1(0.0), 0.0);
    }

    #[test]
    fn j_matches_series() {
        for i in 0..=60 {
            let x = 0.1 * f64::from(i);
            assert!((bessel_j0(x) - j_series(0, x)).abs() < 1e-12, "J0({x})");
            assert!((bessel_j1(x) - j_series(1, x)).abs() < 1e-12, "J1({x})");
            assert!((bessel_j(2, x) - j_series(2, x)).abs() < 1e-12, "J2({x})");
        }
    }

    #[test]
    fn k_matches_tables_and_series() {
        assert!((bessel_k0(1.0) - 0.421_024_438_240_708_34).abs() < 1e-14);
        assert!((bessel_k1(1.0) - 0.601_907_230_197_234_6).abs() < 1e-14);
        for i in 1..=40 {
            let x = 0.1 * f64::from(i);
            let k0 = bessel_k0(x);
            assert!((k0 - k0_series(x)).abs() < 1e-11 * k0, "K0({x})");
        }
    }

    #[test]
    fn k_wronskian() {
        // I₀K₁ + I₁K₀ = 1/x.
        for i in 1..=50 {
            let x = 0.08 * f64::from(i);
            let w = i_series(0, x) * bessel_k1(x) + i_series(1, x) * bessel_k0(x);
            assert!((w * x - 1.0).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn small_and_large_arguments() {
        assert!(bessel_k0(1e-6) > 13.0);
        let x = 30.0;
        let asym = (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 - 1.0 / (8.0 * x) + 9.0 / (128.0 * x * x));
        assert!((bessel_k0(x) - asym).abs() < 1e-4 * asym);
        assert!(bessel_j0(50.0).abs() <= 1.0);
    }
}
