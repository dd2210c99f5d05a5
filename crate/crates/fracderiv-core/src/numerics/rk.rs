//! Embedded Runge-Kutta 5(4) initial-value solver (Dormand-Prince pair)
//! with PI step-size control and a quartic dense-output interpolant stored
//! per accepted step, so the returned solution is a callable on the whole
//! integration interval.

use crate::Error;
use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::float::FloatExt;

/// First-order system `dy/dt = rhs(t, y)` with its initial state.
///
/// The right-hand side writes the derivative into the output slice, which
/// always has length `dim`. The lifetime lets the right-hand side borrow
/// caller data (for example a function being expanded); the returned
/// [`Trajectory`] owns only plain numbers and outlives the borrow.
pub struct OdeSystem<'a> {
    pub dim: usize,
    pub t0: f64,
    pub y0: Vec<f64>,
    pub rhs: Box<dyn Fn(f64, &[f64], &mut [f64]) + 'a>,
}

impl<'a> OdeSystem<'a> {
    pub fn new(t0: f64, y0: Vec<f64>, rhs: Box<dyn Fn(f64, &[f64], &mut [f64]) + 'a>) -> Self {
        OdeSystem {
            dim: y0.len(),
            t0,
            y0,
            rhs,
        }
    }
}

/// One accepted step: interpolation coefficients for each component on
/// `[t, t + h]`.
struct Segment {
    t: f64,
    h: f64,
    /// Quartic coefficients per component; evaluation is Horner in
    /// `theta = (t - t_step) / h` and `1 - theta`.
    cont: Vec<[f64; 5]>,
}

/// Dense solution of an initial-value problem.
///
/// Evaluation outside the integration interval clamps to the nearer
/// endpoint state (continuous extension by the boundary value).
pub struct Trajectory {
    dim: usize,
    t0: f64,
    t_end: f64,
    segments: Vec<Segment>,
    y_end: Vec<f64>,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_start(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn end_state(&self) -> &[f64] {
        &self.y_end
    }

    fn segment_at(&self, t: f64) -> &Segment {
        let mut lo = 0usize;
        let mut hi = self.segments.len() - 1;
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if self.segments[mid].t <= t {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        &self.segments[lo]
    }

    /// State at `t`, written into `out`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let t = t.clamp(self.t0, self.t_end);
        let seg = self.segment_at(t);
        let theta = ((t - seg.t) / seg.h).clamp(0.0, 1.0);
        let omt = 1.0 - theta;
        for (i, c) in seg.cont.iter().enumerate() {
            out[i] = c[0] + theta * (c[1] + omt * (c[2] + theta * (c[3] + omt * c[4])));
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval_component(&self, t: f64, idx: usize) -> f64 {
        let t = t.clamp(self.t0, self.t_end);
        let seg = self.segment_at(t);
        let theta = ((t - seg.t) / seg.h).clamp(0.0, 1.0);
        let omt = 1.0 - theta;
        let c = &seg.cont[idx];
        c[0] + theta * (c[1] + omt * (c[2] + theta * (c[3] + omt * c[4])))
    }

    /// Time derivative of the interpolant at `t`, written into `out`.
    pub fn derivative_into(&self, t: f64, out: &mut [f64]) {
        let t = t.clamp(self.t0, self.t_end);
        let seg = self.segment_at(t);
        let theta = ((t - seg.t) / seg.h).clamp(0.0, 1.0);
        let omt = 1.0 - theta;
        for (i, c) in seg.cont.iter().enumerate() {
            let d_theta = c[1] + (1.0 - 2.0 * theta) * c[2] + theta * (2.0 - 3.0 * theta) * c[3]
                + 2.0 * theta * omt * (1.0 - 2.0 * theta) * c[4];
            out[i] = d_theta / seg.h;
        }
    }

    pub fn derivative(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.derivative_into(t, &mut out);
        out
    }
}

// Dormand-Prince 5(4) tableau.
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
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output weights.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - BETA * 0.75;
const MAX_GROW: f64 = 10.0;
const MAX_SHRINK: f64 = 0.2;
const MAX_STEPS: usize = 2_000_000;

/// Integrates `sys` forward to `t_end`, returning the dense solution.
///
/// Local error per step is controlled against
/// `abs_tol + rel_tol * max(|y|, |y_new|)` componentwise using the embedded
/// fourth-order estimate with PI damping of the step-size sequence. A step
/// size driven below machine resolution (typically by a right-hand side
/// blowing up) is reported as an integration error carrying the failure
/// time.
pub fn solve_ivp(
    sys: &OdeSystem<'_>,
    t_end: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Trajectory, Error> {
    let dim = sys.dim;
    if sys.y0.len() != dim {
        return Err(Error::Domain(format!(
            "initial state has length {}, expected {dim}",
            sys.y0.len()
        )));
    }
    if !(t_end > sys.t0) {
        return Err(Error::Domain(format!(
            "integration end {t_end} must exceed start {}",
            sys.t0
        )));
    }
    if !(rel_tol > 0.0 && abs_tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerances must be positive, got rel {rel_tol}, abs {abs_tol}"
        )));
    }

    let rhs = &sys.rhs;
    let mut t = sys.t0;
    let mut y = sys.y0.clone();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut k5 = vec![0.0; dim];
    let mut k6 = vec![0.0; dim];
    let mut k7 = vec![0.0; dim];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];

    rhs(t, &y, &mut k1);
    if k1.iter().any(|v| !v.is_finite()) {
        return Err(Error::Integration {
            t,
            reason: format!("right-hand side not finite at the initial point"),
        });
    }

    // Initial step heuristic: scale from the state and slope, then cap.
    let span = t_end - t;
    let mut h = {
        let sc = |i: usize| abs_tol + rel_tol * y[i].abs();
        let d0: f64 = (0..dim).map(|i| (y[i] / sc(i)).powi(2)).sum::<f64>().sqrt();
        let d1: f64 = (0..dim).map(|i| (k1[i] / sc(i)).powi(2)).sum::<f64>().sqrt();
        let guess = if d0 > 1e-10 && d1 > 1e-10 {
            0.01 * d0 / d1
        } else {
            1e-6 * span
        };
        guess.min(0.1 * span).max(1e-12 * span)
    };

    let mut segments: Vec<Segment> = Vec::new();
    let mut err_old: f64 = 1e-4;
    let mut steps = 0usize;

    while t < t_end {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Integration {
                t,
                reason: format!("step budget of {MAX_STEPS} exhausted"),
            });
        }
        let h_min = 16.0 * f64::EPSILON * (t.abs().max(1.0));
        if h < h_min {
            return Err(Error::Integration {
                t,
                reason: format!("step size underflow (h = {h:e})"),
            });
        }
        if t + h > t_end {
            h = t_end - t;
        }

        macro_rules! combine {
            ($($w:expr => $k:ident),+) => {{
                for i in 0..dim {
                    stage[i] = y[i] + h * (0.0 $(+ $w * $k[i])+);
                }
            }};
        }
        combine!(A21 => k1);
        rhs(t + C2 * h, &stage, &mut k2);
        combine!(A31 => k1, A32 => k2);
        rhs(t + C3 * h, &stage, &mut k3);
        combine!(A41 => k1, A42 => k2, A43 => k3);
        rhs(t + C4 * h, &stage, &mut k4);
        combine!(A51 => k1, A52 => k2, A53 => k3, A54 => k4);
        rhs(t + C5 * h, &stage, &mut k5);
        combine!(A61 => k1, A62 => k2, A63 => k3, A64 => k4, A65 => k5);
        rhs(t + h, &stage, &mut k6);
        for i in 0..dim {
            y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        rhs(t + h, &y_new, &mut k7);

        let mut err_sq = 0.0;
        let mut finite = y_new.iter().all(|v| v.is_finite());
        if finite {
            for i in 0..dim {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
                err_sq += (e / sc) * (e / sc);
                if !e.is_finite() {
                    finite = false;
                }
            }
        }
        let err = if finite {
            (err_sq / dim as f64).sqrt()
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            // Accept: store the dense coefficients for this step.
            let mut cont = Vec::with_capacity(dim);
            for i in 0..dim {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont.push([
                    y[i],
                    ydiff,
                    bspl,
                    ydiff - h * k7[i] - bspl,
                    h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]),
                ]);
            }
            segments.push(Segment { t, h, cont });
            t += h;
            y.copy_from_slice(&y_new);
            k1.copy_from_slice(&k7); // first-same-as-last
            let fac = if err == 0.0 {
                MAX_GROW
            } else {
                let fac11 = err.powf(EXPO);
                let f = SAFETY * err_old.powf(BETA) / fac11;
                f.clamp(MAX_SHRINK, MAX_GROW)
            };
            err_old = err.max(1e-4);
            h *= fac;
        } else {
            let fac11 = if err.is_finite() { err.powf(EXPO) } else { 10.0 };
            h *= (SAFETY / fac11).max(MAX_SHRINK);
        }
    }

    Ok(Trajectory {
        dim,
        t0: sys.t0,
        t_end,
        segments,
        y_end: y,
    })
}
