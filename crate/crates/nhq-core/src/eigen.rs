//! Closed-form biorthogonal eigensystem of a 2×2 complex matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix2, StateVector2};

/// Relative gap below which a pair is a candidate for coalescence.
pub const DEFECTIVE_GAP_REL: f64 = 1e-12;
/// Right-eigenvector overlap above which a near-degenerate pair is defective.
pub const DEFECTIVE_OVERLAP: f64 = 1.0 - 1e-8;

/// Eigenvalues, right and left eigenvectors and biorthogonal norms.
///
/// Right eigenvectors are column vectors with `H r = λ r`, left eigenvectors
/// are row vectors with `l H = λ l`. Both have unit Euclidean norm and a
/// phase fixed so that their first nonzero component is real positive.
/// `c_k = l_k·r_k` is the unconjugated biorthogonal norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSystem2 {
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub r_plus: StateVector2,
    pub r_minus: StateVector2,
    pub l_plus: StateVector2,
    pub l_minus: StateVector2,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub defective: bool,
    /// Frobenius norm of the decomposed matrix.
    pub scale: f64,
}

impl EigenSystem2 {
    /// `|λ₊ − λ₋|`.
    pub fn gap(&self) -> f64 {
        (self.lambda_plus - self.lambda_minus).norm()
    }

    /// `min(|c₊|, |c₋|)/(‖l‖‖r‖)`; zero at an exceptional point, one for normal matrices.
    pub fn phase_rigidity(&self) -> f64 {
        let rp = self.c_plus.norm() / (self.l_plus.norm() * self.r_plus.norm());
        let rm = self.c_minus.norm() / (self.l_minus.norm() * self.r_minus.norm());
        rp.min(rm).clamp(0.0, 1.0)
    }

    /// `|⟨r₊|r₋⟩|` for the unit-norm right eigenvectors.
    pub fn overlap(&self) -> f64 {
        self.r_plus.inner(&self.r_minus).norm()
    }

    /// `Σ_k λ_k r_k l_k / c_k`; meaningful only when not defective.
    pub fn reconstruct(&self) -> ComplexMatrix2 {
        ComplexMatrix2::outer(&self.r_plus, &self.l_plus).scale(self.lambda_plus / self.c_plus)
            + ComplexMatrix2::outer(&self.r_minus, &self.l_minus)
                .scale(self.lambda_minus / self.c_minus)
    }

    /// Eigenvalue with index 0 (plus) or 1 (minus).
    pub fn lambda(&self, k: usize) -> Complex64 {
        if k == 0 {
            self.lambda_plus
        } else {
            self.lambda_minus
        }
    }

    pub fn right(&self, k: usize) -> StateVector2 {
        if k == 0 {
            self.r_plus
        } else {
            self.r_minus
        }
    }

    pub fn left(&self, k: usize) -> StateVector2 {
        if k == 0 {
            self.l_plus
        } else {
            self.l_minus
        }
    }

    pub fn norm_c(&self, k: usize) -> Complex64 {
        if k == 0 {
            self.c_plus
        } else {
            self.c_minus
        }
    }
}

/// Decomposes `h` with the quadratic formula.
///
/// `λ₊` has the larger real part; near-equal real parts are ordered by
/// the imaginary part. The pair is flagged defective when the gap is at most
/// `1e-12·‖H‖` and the right eigenvectors overlap by more than `1 − 1e-8`;
/// in that case both slots hold the single eigenvector.
pub fn eig2(h: &ComplexMatrix2) -> Result<EigenSystem2> {
    if !h.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite matrix entries: {h:?}")));
    }
    let (a, b, c, d) = (h.a(), h.b(), h.c(), h.d());
    let scale = h.norm();
    let mean = (a + d) * 0.5;
    let half = (a - d) * 0.5;
    let bc = b * c;
    let s = (half * half + bc).sqrt();

    // p = s + half and q = s − half satisfy p·q = bc; the larger one is
    // formed directly and the other by division to avoid cancellation.
    let (p, q) = {
        let p0 = s + half;
        let q0 = s - half;
        if p0.norm() >= q0.norm() {
            let q = if p0.norm() > 0.0 { bc / p0 } else { q0 };
            (p0, q)
        } else {
            (bc / q0, q0)
        }
    };

    let mut l1 = mean + s;
    let mut l2 = mean - s;
    // The smaller root loses digits to cancellation against a large mean;
    // recover it from the determinant. Traceless input keeps λ₂ = −λ₁ exactly.
    if mean != Complex64::new(0.0, 0.0) {
        let det = a * d - bc;
        if l1.norm() >= l2.norm() && l1.norm() > 0.0 {
            l2 = det / l1;
        } else if l2.norm() > 0.0 {
            l1 = det / l2;
        }
    }
    // Right eigenvector candidates: (b, λ−a) and (λ−d, c); λ₁−a = q, λ₁−d = p,
    // λ₂−a = −p, λ₂−d = −q. Left candidates: (c, λ−a) and (λ−d, b).
    let r1 = pick(StateVector2::new(b, q), StateVector2::new(p, c), 0);
    let r2 = pick(StateVector2::new(b, -p), StateVector2::new(-q, c), 1);
    let v1 = pick(StateVector2::new(c, q), StateVector2::new(p, b), 0);
    let v2 = pick(StateVector2::new(c, -p), StateVector2::new(-q, b), 1);

    let tie = (l1.re - l2.re).abs() <= 8.0 * f64::EPSILON * scale.max(l1.norm()).max(l2.norm());
    let first_is_plus = if tie { l1.im >= l2.im } else { l1.re > l2.re };
    let (lp, lm, rp, rm, vp, vm) = if first_is_plus {
        (l1, l2, r1, r2, v1, v2)
    } else {
        (l2, l1, r2, r1, v2, v1)
    };

    let gap = (lp - lm).norm();
    let overlap = rp.inner(&rm).norm();
    let defective = gap <= DEFECTIVE_GAP_REL * scale && overlap > DEFECTIVE_OVERLAP;
    if defective {
        let cp = vp.dot(&rp);
        return Ok(EigenSystem2 {
            lambda_plus: mean,
            lambda_minus: mean,
            r_plus: rp,
            r_minus: rp,
            l_plus: vp,
            l_minus: vp,
            c_plus: cp,
            c_minus: cp,
            defective,
            scale,
        });
    }
    Ok(EigenSystem2 {
        lambda_plus: lp,
        lambda_minus: lm,
        r_plus: rp,
        r_minus: rm,
        l_plus: vp,
        l_minus: vm,
        c_plus: vp.dot(&rp),
        c_minus: vm.dot(&rm),
        defective,
        scale,
    })
}

/// Chooses the better-conditioned candidate and normalizes it.
///
/// When both candidates vanish the matrix is a multiple of the identity and
/// the canonical basis vector `slot` is returned.
fn pick(u: StateVector2, v: StateVector2, slot: usize) -> StateVector2 {
    let w = if u.norm_sq() >= v.norm_sq() { u } else { v };
    let n = w.norm();
    if n == 0.0 {
        return if slot == 0 {
            StateVector2::from_real(1.0, 0.0)
        } else {
            StateVector2::from_real(0.0, 1.0)
        };
    }
    fix_phase(w.scale(Complex64::new(1.0 / n, 0.0)))
}

/// Rotates the phase so the first nonzero component is real positive.
pub fn fix_phase(v: StateVector2) -> StateVector2 {
    let lead = if v.c1 != Complex64::new(0.0, 0.0) { v.c1 } else { v.c2 };
    if lead == Complex64::new(0.0, 0.0) {
        return v;
    }
    let phase = lead.conj() / lead.norm();
    let mut out = v.scale(phase);
    if v.c1 != Complex64::new(0.0, 0.0) {
        out.c1 = Complex64::new(out.c1.norm(), 0.0);
    } else {
        out.c2 = Complex64::new(out.c2.norm(), 0.0);
    }
    out
}
