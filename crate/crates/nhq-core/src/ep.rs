//! Numeric location of exceptional points in two-parameter families.

use num_complex::Complex64;

use crate::eigen::eig2;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix2;

/// Rectangular search region in two named parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamBox {
    pub names: [String; 2],
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl ParamBox {
    pub fn new(x: (&str, f64, f64), y: (&str, f64, f64)) -> Self {
        Self {
            names: [x.0.to_string(), y.0.to_string()],
            lo: [x.1, y.1],
            hi: [x.2, y.2],
        }
    }

    pub fn diameter(&self) -> f64 {
        ((self.hi[0] - self.lo[0]).powi(2) + (self.hi[1] - self.lo[1]).powi(2)).sqrt()
    }

    fn validate(&self) -> Result<()> {
        let ok = (0..2).all(|k| self.lo[k].is_finite() && self.hi[k].is_finite() && self.hi[k] > self.lo[k]);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("degenerate or non-finite region {self:?}")))
        }
    }

    fn to_params(&self, u: [f64; 2]) -> [f64; 2] {
        [
            self.lo[0] + u[0] * (self.hi[0] - self.lo[0]),
            self.lo[1] + u[1] * (self.hi[1] - self.lo[1]),
        ]
    }
}

/// A located coalescence.
#[derive(Clone, Debug, PartialEq)]
pub struct EpCandidate {
    pub names: [String; 2],
    pub params: [f64; 2],
    /// `|λ₊ − λ₋|` at `params`.
    pub gap: f64,
    pub phase_rigidity: f64,
    pub converged: bool,
    /// Frobenius norm of the matrix at `params`.
    pub norm: f64,
}

impl EpCandidate {
    /// Coordinate by parameter name.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|k| self.params[k])
    }
}

/// Search settings for [`ep_locate_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpSearch {
    /// Grid nodes per axis for seeding.
    pub grid: usize,
    /// Accept when `gap < tol·‖H‖`.
    pub tol: f64,
    /// Accept only when the phase rigidity is below this value.
    pub max_rigidity: f64,
    /// Merge radius as a fraction of the region diameter.
    pub merge_fraction: f64,
    pub max_seeds: usize,
    pub max_iterations: usize,
}

impl Default for EpSearch {
    fn default() -> Self {
        Self {
            grid: 64,
            tol: 1e-6,
            max_rigidity: 1e-3,
            merge_fraction: 1e-3,
            max_seeds: 24,
            max_iterations: 200,
        }
    }
}

/// Locates exceptional points of `h` inside `region` with default settings.
pub fn ep_locate<F>(h: F, region: &ParamBox, tol: f64) -> Result<Vec<EpCandidate>>
where
    F: Fn(f64, f64) -> ComplexMatrix2,
{
    ep_locate_with(h, region, &EpSearch { tol, ..EpSearch::default() })
}

/// Discriminant `((a − d)/2)² + bc`; the eigenvalue gap is `2√|δ|`.
pub fn discriminant(h: &ComplexMatrix2) -> Complex64 {
    let half = (h.a() - h.d()) * 0.5;
    half * half + h.b() * h.c()
}

/// Multi-start search for zeros of the discriminant.
///
/// The normalized objective `|δ|/‖H‖²` is sampled on a `grid × grid` mesh;
/// every local minimum seeds a Levenberg–Marquardt solve of
/// `(Re δ, Im δ) = 0`. Solutions inside the region with
/// `gap < tol·‖H‖` and phase rigidity below `max_rigidity` are merged and
/// returned sorted by coordinates. An empty list is not an error.
pub fn ep_locate_with<F>(h: F, region: &ParamBox, search: &EpSearch) -> Result<Vec<EpCandidate>>
where
    F: Fn(f64, f64) -> ComplexMatrix2,
{
    region.validate()?;
    if !(search.tol > 0.0) || search.grid < 2 {
        return Err(Error::InvalidArgument(format!("invalid search settings {search:?}")));
    }
    let eval = |u: [f64; 2]| {
        let p = region.to_params(u);
        h(p[0], p[1])
    };

    let n = search.grid;
    let node = |i: usize| i as f64 / (n - 1) as f64;
    let mut values = vec![f64::INFINITY; n * n];
    for i in 0..n {
        for j in 0..n {
            let m = eval([node(i), node(j)]);
            if m.is_finite() {
                let s = m.norm();
                values[i * n + j] = if s > 0.0 { discriminant(&m).norm() / (s * s) } else { 0.0 };
            }
        }
    }
    let mut seeds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = values[i * n + j];
            if !v.is_finite() {
                continue;
            }
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= n as i64 || jj >= n as i64 {
                        continue;
                    }
                    let w = values[ii as usize * n + jj as usize];
                    // Ties are broken by index so plateaus yield one seed.
                    if w < v || (w == v && (ii, jj) < (i as i64, j as i64)) {
                        is_min = false;
                    }
                }
            }
            if is_min {
                seeds.push((v, [node(i), node(j)]));
            }
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1[0].total_cmp(&b.1[0])).then(a.1[1].total_cmp(&b.1[1])));
    seeds.truncate(search.max_seeds);

    let merge = search.merge_fraction * region.diameter();
    let mut found: Vec<EpCandidate> = Vec::new();
    for (_, u0) in seeds {
        let Some((u, converged)) = refine(&eval, u0, search) else { continue };
        if u.iter().any(|&x| !(-1e-9..=1.0 + 1e-9).contains(&x)) {
            continue;
        }
        let p = region.to_params(u);
        let m = h(p[0], p[1]);
        let e = eig2(&m)?;
        let cand = EpCandidate {
            names: region.names.clone(),
            params: p,
            gap: e.gap(),
            phase_rigidity: e.phase_rigidity(),
            converged,
            norm: m.norm(),
        };
        if !(cand.gap < search.tol * cand.norm && cand.phase_rigidity < search.max_rigidity) {
            continue;
        }
        let dup = found.iter_mut().find(|f| {
            ((f.params[0] - p[0]).powi(2) + (f.params[1] - p[1]).powi(2)).sqrt() <= merge
        });
        match dup {
            Some(f) if cand.gap < f.gap => *f = cand,
            Some(_) => {}
            None => found.push(cand),
        }
    }
    found.sort_by(|a, b| a.params[0].total_cmp(&b.params[0]).then(a.params[1].total_cmp(&b.params[1])));
    Ok(found)
}

/// Levenberg–Marquardt on `(Re δ, Im δ)/σ` in unit coordinates.
///
/// Returns `None` when the iterate leaves the slightly enlarged unit box.
/// Only decreasing steps are accepted, so a tighter `tol` can only lower the
/// final residual.
fn refine<E>(eval: &E, u0: [f64; 2], search: &EpSearch) -> Option<([f64; 2], bool)>
where
    E: Fn([f64; 2]) -> ComplexMatrix2,
{
    let sigma = {
        let s = eval(u0).norm();
        if s > 0.0 {
            s * s
        } else {
            1.0
        }
    };
    let resid = |u: [f64; 2]| -> Option<[f64; 2]> {
        let m = eval(u);
        if !m.is_finite() {
            return None;
        }
        let d = discriminant(&m) / sigma;
        Some([d.re, d.im])
    };
    let done = |u: [f64; 2], r: [f64; 2]| {
        let s = eval(u).norm();
        let gap = 2.0 * (r[0].hypot(r[1]) * sigma).sqrt();
        gap < 0.01 * search.tol * s
    };
    let norm2 = |r: [f64; 2]| r[0] * r[0] + r[1] * r[1];
    let fd = 1e-6;

    let mut u = u0;
    let mut r = resid(u)?;
    let mut mu = 1e-3;
    for _ in 0..search.max_iterations {
        if done(u, r) {
            return Some((u, true));
        }
        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let mut up = u;
            let mut dn = u;
            up[k] += fd;
            dn[k] -= fd;
            let (rp, rm) = (resid(up)?, resid(dn)?);
            for row in 0..2 {
                jac[row][k] = (rp[row] - rm[row]) / (2.0 * fd);
            }
        }
        let a = [
            [jac[0][0] * jac[0][0] + jac[1][0] * jac[1][0], jac[0][0] * jac[0][1] + jac[1][0] * jac[1][1]],
            [jac[0][1] * jac[0][0] + jac[1][1] * jac[1][0], jac[0][1] * jac[0][1] + jac[1][1] * jac[1][1]],
        ];
        let g = [
            jac[0][0] * r[0] + jac[1][0] * r[1],
            jac[0][1] * r[0] + jac[1][1] * r[1],
        ];
        let mut accepted = false;
        while mu < 1e16 {
            let m00 = a[0][0] * (1.0 + mu) + 1e-300;
            let m11 = a[1][1] * (1.0 + mu) + 1e-300;
            let det = m00 * m11 - a[0][1] * a[1][0];
            if det == 0.0 || !det.is_finite() {
                mu *= 4.0;
                continue;
            }
            let step = [
                -(m11 * g[0] - a[0][1] * g[1]) / det,
                -(m00 * g[1] - a[1][0] * g[0]) / det,
            ];
            let trial = [u[0] + step[0], u[1] + step[1]];
            if trial.iter().any(|&x| !(-0.05..=1.05).contains(&x)) {
                mu *= 4.0;
                continue;
            }
            match resid(trial) {
                Some(rt) if norm2(rt) < norm2(r) => {
                    u = trial;
                    r = rt;
                    mu = (mu / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
                _ => mu *= 4.0,
            }
        }
        if !accepted {
            break;
        }
    }
    let s = eval(u).norm();
    let gap = 2.0 * (r[0].hypot(r[1]) * sigma).sqrt();
    Some((u, gap < search.tol * s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_family_has_no_candidates() {
        let region = ParamBox::new(("x", -1.0, 1.3), ("y", -0.7, 1.0));
        let h = |x: f64, y: f64| ComplexMatrix2::new(c(x, 0.0), c(y, 0.2), c(y, -0.2), c(-x, 0.0));
        assert!(ep_locate(h, &region, 1e-6).unwrap().is_empty());
        let h = |x: f64, y: f64| ComplexMatrix2::new(c(x, 0.0), c(y, 0.0), c(y, 0.0), c(-x, 0.0));
        assert!(ep_locate(h, &region, 1e-6).unwrap().is_empty());
    }

    #[test]
    fn gain_loss_dimer_points() {
        // [[Δ + iγ, κ], [κ, −Δ − iγ]] coalesces at Δ = 0, κ = ±γ.
        let g = 0.8;
        let region = ParamBox::new(("kappa", -2.0, 2.1), ("delta", -0.5, 0.6));
        let h = |k: f64, d: f64| ComplexMatrix2::new(c(d, g), c(k, 0.0), c(k, 0.0), c(-d, -g));
        let found = ep_locate(h, &region, 1e-6).unwrap();
        assert_eq!(found.len(), 2);
        for (f, k) in found.iter().zip([-g, g]) {
            assert!((f.params[0] - k).abs() < 1e-12);
            assert!(f.params[1].abs() < 1e-12);
            assert!(f.phase_rigidity < 1e-3);
        }
    }

    #[test]
    fn isolated_point_is_found_to_high_accuracy() {
        // δ = (x − 0.3 + i(y + 0.2))·(fixed) vanishes only at (0.3, −0.2).
        let h = |x: f64, y: f64| ComplexMatrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(x - 0.3, y + 0.2), c(0.0, 0.0));
        let region = ParamBox::new(("x", -1.0, 1.0), ("y", -1.0, 1.0));
        let found = ep_locate(h, &region, 1e-6).unwrap();
        assert_eq!(found.len(), 1);
        assert!((found[0].params[0] - 0.3).abs() < 1e-12);
        assert!((found[0].params[1] + 0.2).abs() < 1e-12);
        assert!(found[0].converged);
        assert_eq!(found[0].get("y"), Some(found[0].params[1]));
    }

    #[test]
    fn invalid_region_is_rejected() {
        let region = ParamBox::new(("x", 1.0, 1.0), ("y", -1.0, 1.0));
        assert!(ep_locate(|_, _| ComplexMatrix2::zero(), &region, 1e-6).is_err());
    }
}
