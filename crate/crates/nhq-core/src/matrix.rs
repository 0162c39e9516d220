//! Complex 2×2 matrices and 2-component state vectors.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A 2×2 complex matrix stored row-major.
///
/// Units are carried by the caller: energies in atomic units for the
/// molecular models, inverse metres for the fiber generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix2 {
    pub m: [[Complex64; 2]; 2],
}

impl ComplexMatrix2 {
    /// Builds `[[a, b], [c, d]]` without validation.
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    /// Builds `[[a, b], [c, d]]`, rejecting NaN or infinite entries.
    pub fn try_new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let h = Self::new(a, b, c, d);
        if h.is_finite() {
            Ok(h)
        } else {
            Err(Error::InvalidArgument(format!("non-finite matrix entries: {h:?}")))
        }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn zero() -> Self {
        Self::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), d)
    }

    pub fn a(&self) -> Complex64 {
        self.m[0][0]
    }

    pub fn b(&self) -> Complex64 {
        self.m[0][1]
    }

    pub fn c(&self) -> Complex64 {
        self.m[1][0]
    }

    pub fn d(&self) -> Complex64 {
        self.m[1][1]
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> Complex64 {
        self.a() + self.d()
    }

    pub fn det(&self) -> Complex64 {
        self.a() * self.d() - self.b() * self.c()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::new(self.a().conj(), self.c().conj(), self.b().conj(), self.d().conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.a() * s, self.b() * s, self.c() * s, self.d() * s)
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &StateVector2) -> StateVector2 {
        StateVector2::new(
            self.a() * v.c1 + self.b() * v.c2,
            self.c() * v.c1 + self.d() * v.c2,
        )
    }

    /// Row-vector product `v·H`.
    pub fn apply_left(&self, v: &StateVector2) -> StateVector2 {
        StateVector2::new(
            v.c1 * self.a() + v.c2 * self.c(),
            v.c1 * self.b() + v.c2 * self.d(),
        )
    }

    /// Outer product `u vᵀ` (no conjugation).
    pub fn outer(u: &StateVector2, v: &StateVector2) -> Self {
        Self::new(u.c1 * v.c1, u.c1 * v.c2, u.c2 * v.c1, u.c2 * v.c2)
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a() + o.a(), self.b() + o.b(), self.c() + o.c(), self.d() + o.d())
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a() - o.a(), self.b() - o.b(), self.c() - o.c(), self.d() - o.d())
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a() * o.a() + self.b() * o.c(),
            self.a() * o.b() + self.b() * o.d(),
            self.c() * o.a() + self.d() * o.c(),
            self.c() * o.b() + self.d() * o.d(),
        )
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Two complex amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector2 {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl StateVector2 {
    pub const fn new(c1: Complex64, c2: Complex64) -> Self {
        Self { c1, c2 }
    }

    pub fn from_real(c1: f64, c2: f64) -> Self {
        Self::new(c1.into(), c2.into())
    }

    /// `|c1|² + |c2|²`.
    pub fn norm_sq(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        [self.c1, self.c2].iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Unconjugated bilinear product `u·v`.
    pub fn dot(&self, v: &StateVector2) -> Complex64 {
        self.c1 * v.c1 + self.c2 * v.c2
    }

    /// Hermitian inner product `⟨u|v⟩` (conjugates `self`).
    pub fn inner(&self, v: &StateVector2) -> Complex64 {
        self.c1.conj() * v.c1 + self.c2.conj() * v.c2
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.c1 * s, self.c2 * s)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.c1.conj(), self.c2.conj())
    }
}

impl Add for StateVector2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl Sub for StateVector2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.c1 - o.c1, self.c2 - o.c2)
    }
}
