//! Adaptive Dormand–Prince 5(4) propagation of two-component amplitudes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix2, StateVector2};

/// Sign and factor convention of the evolution equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `dψ/dt = −i H(t) ψ`.
    Schrodinger,
    /// `dψ/dz = H(z) ψ`.
    Spatial,
}

/// Step-size control and output sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step, in the units of the independent variable.
    pub max_step: f64,
    /// First trial step; a non-positive value selects one from `‖H(t0)‖`.
    pub initial_step: f64,
    /// Number of uniform output intervals on `[t0, t1]`.
    pub output_intervals: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_step: f64::INFINITY,
            initial_step: 0.0,
            output_intervals: 1,
        }
    }
}

impl StepControl {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self { rel_tol, abs_tol, ..Self::default() }
    }

    pub fn with_outputs(mut self, n: usize) -> Self {
        self.output_intervals = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok_tol = |x: f64| x > 0.0 && x <= 1e-2;
        if !ok_tol(self.rel_tol) || !ok_tol(self.abs_tol) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must lie in (0, 1e-2]: rel_tol={}, abs_tol={}",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_step.is_nan() || self.max_step <= 0.0 {
            return Err(Error::InvalidArgument(format!("max_step must be positive: {}", self.max_step)));
        }
        if self.output_intervals == 0 {
            return Err(Error::InvalidArgument("output_intervals must be at least 1".into()));
        }
        Ok(())
    }
}

/// Output samples of a propagation run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector2>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> Option<(f64, StateVector2)> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Smallest step relative to the span before the run is declared stiff.
const MIN_STEP_REL: f64 = 1e-14;
const MAX_STEPS: usize = 50_000_000;

/// Integrates from `t0` to `t1` and returns `output_intervals + 1` uniform samples.
///
/// Steps are clipped so that every output time is hit exactly; no
/// interpolation is involved, and the result depends only on the inputs.
pub fn propagate<G>(
    generator: G,
    convention: Convention,
    psi0: StateVector2,
    t0: f64,
    t1: f64,
    ctl: &StepControl,
) -> Result<Trajectory>
where
    G: Fn(f64) -> ComplexMatrix2,
{
    ctl.validate()?;
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite t1 > t0, got [{t0}, {t1}]")));
    }
    if !psi0.is_finite() {
        return Err(Error::InvalidArgument("non-finite initial state".into()));
    }
    let factor = match convention {
        Convention::Schrodinger => Complex64::new(0.0, -1.0),
        Convention::Spatial => Complex64::new(1.0, 0.0),
    };
    let rhs = |t: f64, y: &StateVector2| -> StateVector2 { generator(t).apply(y).scale(factor) };

    let span = t1 - t0;
    let n_out = ctl.output_intervals;
    let out_time = |k: usize| if k == n_out { t1 } else { t0 + span * (k as f64) / (n_out as f64) };
    let h_min = MIN_STEP_REL * span.max(t0.abs()).max(t1.abs());

    let mut traj = Trajectory {
        times: Vec::with_capacity(n_out + 1),
        states: Vec::with_capacity(n_out + 1),
        ..Trajectory::default()
    };
    traj.times.push(t0);
    traj.states.push(psi0);

    let mut t = t0;
    let mut y = psi0;
    let mut k1 = rhs(t, &y);
    let mut h = if ctl.initial_step > 0.0 {
        ctl.initial_step
    } else {
        let hn = generator(t0).norm();
        if hn > 0.0 {
            0.01 / hn
        } else {
            span
        }
    }
    .min(ctl.max_step)
    .min(span);
    let mut next = 1;

    let fail = |t_last: f64, reason: String, traj: Trajectory| Error::IntegrationFailure {
        t_last,
        reason,
        partial: Box::new(traj),
    };

    while next <= n_out {
        if traj.accepted_steps + traj.rejected_steps > MAX_STEPS {
            return Err(fail(t, "step budget exhausted".into(), traj));
        }
        let target = out_time(next);
        let lands = h >= target - t;
        let step = if lands { target - t } else { h };
        if step < h_min && !lands {
            return Err(fail(t, format!("step size {step:e} underflow"), traj));
        }
        let k = |a: &[(f64, &StateVector2)]| -> StateVector2 {
            let mut acc = y;
            for (c, v) in a {
                acc = acc + v.scale(Complex64::new(c * step, 0.0));
            }
            acc
        };
        let k2 = rhs(t + C2 * step, &k(&[(A21, &k1)]));
        let k3 = rhs(t + C3 * step, &k(&[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * step, &k(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(t + C5 * step, &k(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let t_end = if lands { target } else { t + step };
        let k6 = rhs(t_end, &k(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = k(&[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(t_end, &y_new);

        let mut err = StateVector2::from_real(0.0, 0.0);
        for (e, v) in [(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)] {
            err = err + v.scale(Complex64::new(e * step, 0.0));
        }
        let comp = |e: Complex64, a: Complex64, b: Complex64| {
            let sc = ctl.abs_tol + ctl.rel_tol * a.norm().max(b.norm());
            (e.re / sc).powi(2) + (e.im / sc).powi(2)
        };
        let err_norm = ((comp(err.c1, y.c1, y_new.c1) + comp(err.c2, y.c2, y_new.c2)) / 4.0).sqrt();

        if !y_new.is_finite() || !err_norm.is_finite() {
            traj.rejected_steps += 1;
            h = step * 0.2;
            if h < h_min {
                return Err(fail(t, "non-finite state".into(), traj));
            }
            continue;
        }
        let fac = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
        if err_norm <= 1.0 {
            traj.accepted_steps += 1;
            t = t_end;
            y = y_new;
            k1 = k7;
            if lands {
                traj.times.push(t);
                traj.states.push(y);
                next += 1;
                // A clipped step says nothing about the admissible size.
                h = h.max(step * fac).min(ctl.max_step);
            } else {
                h = (step * fac).min(ctl.max_step);
            }
        } else {
            traj.rejected_steps += 1;
            h = step * fac.min(1.0);
            if h < h_min {
                return Err(fail(t, format!("step size {h:e} underflow"), traj));
            }
        }
    }
    Ok(traj)
}
