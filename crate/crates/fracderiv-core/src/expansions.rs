//! Series approximations of left and right Riemann–Liouville derivatives,
//! with computable truncation bounds.
//!
//! Two families are implemented. The integer-series family expands the
//! derivative in powers of `(t - a)` against the integer derivatives of the
//! input,
//!
//! ```text
//! D^alpha x(t) ~ sum_(k=0..N) C(k, alpha) (t-a)^(k-alpha) x^(k)(t),
//! ```
//!
//! which is exact for polynomials of degree at most `N` but needs one more
//! derivative per term. The moment family trades derivatives for integrals:
//! only `x` and `xdot` appear directly, and the history of `x` enters through
//! moments `V_p(t) = (1-p) int_a^t (tau-a)^(p-2) x(tau) dtau`,
//!
//! ```text
//! D^alpha x(t) ~ A (t-a)^(-alpha) x(t) + B (t-a)^(1-alpha) xdot(t)
//!                - sum_(p=2..N) C_p (t-a)^(1-p-alpha) V_p(t).
//! ```
//!
//! A generalization keeps derivatives up to a chosen order `n - 1` and
//! starts the moment sum at `p = n`; `n = 2` recovers the moment family and
//! larger `n` buys accuracy where higher derivatives are available. Each
//! family has a right-sided mirror obtained by the change of variables
//! `tau -> a + b - tau`.
//!
//! Truncation errors are bounded by [`bound_int`] for the integer series and
//! [`bound_mom_general`] for the moment families; both take the relevant
//! derivative bound of the input as an explicit argument.
//!
//! The integer series inherits the convergence caveat of its parent Taylor
//! expansion: the input must be analytic in a wide enough region, which no
//! runtime check can verify. That is a caller contract. The moment family
//! only needs `C^1` (or `C^(n-1)`) smoothness.

use crate::numerics::{integrate_adaptive, solve_ivp, OdeSystem, Trajectory};
use crate::specfun::{coeff_a_gen, coeff_b_gen, coeff_c_int, CoeffTable, FracOrder, KahanSum};
use crate::Error;
use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::float::FloatExt;

/// Tolerances for the dense moment-system integration used on grids.
const VP_ODE_REL_TOL: f64 = 1e-10;
const VP_ODE_ABS_TOL: f64 = 1e-13;
/// Dense moment values below this magnitude are recomputed by quadrature
/// during grid assembly. The integration controls absolute error, but the
/// assembly multiplies `V_p` by `(t-a)^(1-p-alpha)`, which can reach 1e19;
/// only moments large enough to dominate the integration's absolute error
/// may be read off the dense trajectory.
const VP_DENSE_FLOOR: f64 = 1e-4;

/// Integrates a moment kernel to near the roundoff floor of its own mass.
///
/// Moments must carry *relative*, not absolute, accuracy: the expansion
/// multiplies `V_p` by `(t-a)^(1-p-alpha)`, so any fixed absolute tolerance
/// is amplified without bound as `p` grows or `t` approaches the base point.
/// The tolerance is therefore anchored to a coarse composite-Simpson
/// estimate of `int |f|` — the mass the integral can draw on — instead of a
/// constant. A purely panel-relative target would not terminate: near a
/// simple root of `f` the panel estimate cancels to zero faster than its
/// error estimate, and refinement grinds to the width floor.
fn vp_integrate(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64, Error> {
    let mut mass = KahanSum::default();
    let h = (hi - lo) / 32.0;
    for i in 0..=32u32 {
        let t = if i == 32 { hi } else { lo + h * f64::from(i) };
        let w = if i == 0 || i == 32 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let v = f(t).abs();
        if v.is_finite() {
            mass.add(w * v);
        }
    }
    let tol = (1e-14 * mass.value() * h / 3.0).max(f64::MIN_POSITIVE);
    integrate_adaptive(f, lo, hi, tol)
}

/// Which approximation family a spec selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Finite integer-derivative series, exact on low-degree polynomials.
    IntegerSeries,
    /// Value + first derivative + moment sum.
    Moment,
    /// Moment family with the first-derivative term dropped.
    MomentNoB,
    /// Derivatives up to `inner_order - 1` plus a moment sum.
    GeneralN,
}

/// Side of the derivative: expansion around the lower or upper endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// History runs from the base point `a` forward to `t`.
    Left,
    /// History runs from `t` forward to the base point `b`.
    Right,
}

/// A validated selection of family, order, side, and base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionSpec {
    method: Method,
    alpha: FracOrder,
    n_terms: usize,
    inner_order: usize,
    side: Side,
    base: f64,
}

impl ExpansionSpec {
    /// Integer-derivative series truncated after the `N`-th derivative
    /// (`n_terms` may be 0: the constant rule).
    pub fn integer_series(
        alpha: FracOrder,
        side: Side,
        base: f64,
        n_terms: usize,
    ) -> Result<Self, Error> {
        Self::validated(Method::IntegerSeries, alpha, side, base, n_terms, 2)
    }

    /// Moment expansion with weights `A`, `B`, `C_2..C_N`; needs `n_terms >= 2`.
    pub fn moment(alpha: FracOrder, side: Side, base: f64, n_terms: usize) -> Result<Self, Error> {
        Self::validated(Method::Moment, alpha, side, base, n_terms, 2)
    }

    /// Moment expansion without the first-derivative term; needs `n_terms >= 2`.
    pub fn moment_no_b(
        alpha: FracOrder,
        side: Side,
        base: f64,
        n_terms: usize,
    ) -> Result<Self, Error> {
        Self::validated(Method::MomentNoB, alpha, side, base, n_terms, 2)
    }

    /// Generalized expansion keeping derivatives up to `inner_order - 1`;
    /// needs `1 <= inner_order <= n_terms`.
    pub fn general(
        alpha: FracOrder,
        side: Side,
        base: f64,
        n_terms: usize,
        inner_order: usize,
    ) -> Result<Self, Error> {
        Self::validated(Method::GeneralN, alpha, side, base, n_terms, inner_order)
    }

    fn validated(
        method: Method,
        alpha: FracOrder,
        side: Side,
        base: f64,
        n_terms: usize,
        inner_order: usize,
    ) -> Result<Self, Error> {
        if !base.is_finite() {
            return Err(Error::Domain(format!(
                "expansion base point must be finite, got {base}"
            )));
        }
        match method {
            Method::IntegerSeries => {}
            Method::Moment | Method::MomentNoB => {
                if n_terms < 2 {
                    return Err(Error::Domain(format!(
                        "moment expansion needs n_terms >= 2, got {n_terms}"
                    )));
                }
            }
            Method::GeneralN => {
                if inner_order < 1 || inner_order > n_terms {
                    return Err(Error::Domain(format!(
                        "generalized expansion needs 1 <= inner_order <= n_terms, \
                         got inner_order = {inner_order}, n_terms = {n_terms}"
                    )));
                }
            }
        }
        Ok(ExpansionSpec {
            method,
            alpha,
            n_terms,
            inner_order,
            side,
            base,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    /// Truncation order `N`.
    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    /// Highest kept derivative order plus one (`n` of the generalized family;
    /// 2 for the moment families).
    pub fn inner_order(&self) -> usize {
        self.inner_order
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `a` for a left spec, `b` for a right spec.
    pub fn base(&self) -> f64 {
        self.base
    }

    fn expect(&self, method: Method, side: Side) -> Result<(), Error> {
        if self.method != method {
            return Err(Error::Domain(format!(
                "spec selects {:?}, but the called operation implements {:?}",
                self.method, method
            )));
        }
        if self.side != side {
            return Err(Error::Domain(format!(
                "spec is {:?}-sided, but the called operation is {side:?}-sided",
                self.side
            )));
        }
        Ok(())
    }

    /// Rejects evaluation at or past the base point, where every term of the
    /// expansion is singular. Callers wanting values "at" the endpoint
    /// evaluate at `base + delta` (left) or `base - delta` (right) and rely
    /// on the continuous extension.
    fn check_point(&self, t: f64) -> Result<(), Error> {
        let ok = t.is_finite()
            && match self.side {
                Side::Left => t > self.base,
                Side::Right => t < self.base,
            };
        if ok {
            Ok(())
        } else {
            let rel = match self.side {
                Side::Left => "above",
                Side::Right => "below",
            };
            Err(Error::Domain(format!(
                "evaluation point must lie strictly {rel} the base point {}, got {t}",
                self.base
            )))
        }
    }
}

/// A function together with however many derivatives the chosen expansion
/// needs. Order 0 always routes to the value callable, so the two agree by
/// construction.
pub struct SmoothInput<'a> {
    value: Box<dyn Fn(f64) -> f64 + 'a>,
    derivative: Box<dyn Fn(f64, usize) -> f64 + 'a>,
}

impl<'a> SmoothInput<'a> {
    /// Wraps a value callable and a derivative callable
    /// `(t, order) -> x^(order)(t)`. The derivative callable is consulted for
    /// orders 1 and up; it must be valid up to the order the chosen method
    /// uses (`N` for the integer series, `inner_order - 1` for the moment
    /// families).
    pub fn new(
        value: impl Fn(f64) -> f64 + 'a,
        derivative: impl Fn(f64, usize) -> f64 + 'a,
    ) -> Self {
        SmoothInput {
            value: Box::new(value),
            derivative: Box::new(derivative),
        }
    }

    /// Polynomial `sum_i coeffs[i] t^i` with exact derivatives of all orders.
    pub fn polynomial(coeffs: &[f64]) -> SmoothInput<'static> {
        let owned: Vec<f64> = coeffs.to_vec();
        let for_value = owned.clone();
        SmoothInput {
            value: Box::new(move |t| poly_derivative(&for_value, t, 0)),
            derivative: Box::new(move |t, k| poly_derivative(&owned, t, k)),
        }
    }

    /// Exponential `scale * e^(rate t)` with exact derivatives of all orders.
    pub fn exponential(scale: f64, rate: f64) -> SmoothInput<'static> {
        SmoothInput {
            value: Box::new(move |t| scale * (rate * t).exp()),
            derivative: Box::new(move |t, k| scale * rate.powi(k as i32) * (rate * t).exp()),
        }
    }

    pub fn value_at(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    /// `x^(order)(t)`; order 0 is the value itself.
    pub fn derivative_at(&self, t: f64, order: usize) -> f64 {
        if order == 0 {
            (self.value)(t)
        } else {
            (self.derivative)(t, order)
        }
    }
}

/// `d^k/dt^k sum_i c[i] t^i` by Horner evaluation of the differentiated
/// coefficients.
fn poly_derivative(coeffs: &[f64], t: f64, k: usize) -> f64 {
    let mut acc = 0.0;
    for i in (k..coeffs.len()).rev() {
        // Falling factorial i (i-1) ... (i-k+1).
        let mut w = coeffs[i];
        for j in 0..k {
            w *= (i - j) as f64;
        }
        acc = acc * t + w;
    }
    acc
}

/// A labeled moment value, as used in diagnostic output: the `p`-th moment of
/// the family with inner order `n`, evaluated at some fixed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    /// Moment index, `p >= max(n, 2)` for the classic family, `p >= n` in
    /// general.
    pub p: usize,
    /// Inner order of the family the moment belongs to.
    pub inner_order: usize,
    /// `V_p` at the evaluation time; zero at the base point.
    pub value: f64,
}

/// Weight and power-kernel exponent of `V_p` under the two conventions.
///
/// The two-term moment family (`n = 2`) is conventionally written with
/// moments `V_p = (1-p) int (tau-a)^(p-2) x`, while the generalized family
/// uses `V_p = (p-n+1) int (tau-a)^(p-n) x`. At `n = 2` the kernels agree and
/// the factors differ by sign; the expansion weights absorb the difference.
fn vp_factor_exponent(p: usize, n: usize, classic: bool) -> (f64, u32) {
    if classic {
        (1.0 - p as f64, (p - 2) as u32)
    } else {
        ((p - n + 1) as f64, (p - n) as u32)
    }
}

/// Moment `V_p(t)` of the input about the left base point `a`, by adaptive
/// quadrature.
///
/// For `n = 2` this is the two-term family's moment,
/// `(1-p) int_a^t (tau-a)^(p-2) x(tau) dtau`; for any other `n` it is the
/// generalized family's `(p-n+1) int_a^t (tau-a)^(p-n) x(tau) dtau`.
///
/// # Errors
///
/// `Error::Domain` for `t < a` or index violations (`p >= n >= 1`, and
/// `p >= 2` when `n = 2`); quadrature failures propagate.
pub fn moment_vp(x: &SmoothInput, a: f64, p: usize, n: usize, t: f64) -> Result<f64, Error> {
    if n < 1 || p < n || (n == 2 && p < 2) {
        return Err(Error::Domain(format!(
            "moment indices must satisfy p >= n >= 1, got p = {p}, n = {n}"
        )));
    }
    if !t.is_finite() || !a.is_finite() || t < a {
        return Err(Error::Domain(format!(
            "moment evaluation needs t >= a, got t = {t}, a = {a}"
        )));
    }
    if t == a {
        return Ok(0.0);
    }
    let (factor, exponent) = vp_factor_exponent(p, n, n == 2);
    let integrand = move |tau: f64| (tau - a).powi(exponent as i32) * x.value_at(tau);
    Ok(factor * vp_integrate(&integrand, a, t)?)
}

/// Moment under the generalized convention for every `n`, including `n = 2`
/// (where [`moment_vp`] switches to the classic sign).
fn moment_vp_general(x: &SmoothInput, a: f64, p: usize, n: usize, t: f64) -> Result<f64, Error> {
    if t == a {
        return Ok(0.0);
    }
    let (factor, exponent) = vp_factor_exponent(p, n, false);
    let integrand = move |tau: f64| (tau - a).powi(exponent as i32) * x.value_at(tau);
    Ok(factor * vp_integrate(&integrand, a, t)?)
}

/// Right-sided moment `W_p(t)`: same kernels as [`moment_vp`] but integrating
/// from `t` up to the base point `b` against powers of `(b - tau)`.
fn moment_wp(x: &SmoothInput, b: f64, p: usize, n: usize, t: f64, classic: bool) -> Result<f64, Error> {
    if t == b {
        return Ok(0.0);
    }
    let (factor, exponent) = vp_factor_exponent(p, n, classic);
    let integrand = move |tau: f64| (b - tau).powi(exponent as i32) * x.value_at(tau);
    Ok(factor * vp_integrate(&integrand, t, b)?)
}

/// All moments of one family at one time, labeled. `p` runs from
/// `max(n, 2)` for the classic two-term family (`n = 2`) and from `n`
/// otherwise, up to `n_terms` inclusive.
pub fn moment_states(
    x: &SmoothInput,
    a: f64,
    n: usize,
    n_terms: usize,
    t: f64,
) -> Result<Vec<MomentState>, Error> {
    let p_min = if n == 2 { 2 } else { n };
    let mut out = Vec::new();
    for p in p_min..=n_terms {
        out.push(MomentState {
            p,
            inner_order: n,
            value: moment_vp(x, a, p, n, t)?,
        });
    }
    Ok(out)
}

/// Dense trajectories of the whole moment family `V_(p_min..=N)`, computed by
/// one integration of the defining ODEs `Vdot_p = factor (t-a)^exponent x(t)`,
/// `V_p(a) = 0`. One integration serves every evaluation point of a grid;
/// values anywhere in `[a, t_end]` come from the dense interpolant.
pub(crate) struct MomentTrajectories {
    p_min: usize,
    traj: Trajectory,
}

impl MomentTrajectories {
    pub(crate) fn build(
        x: &SmoothInput,
        a: f64,
        n: usize,
        classic: bool,
        n_terms: usize,
        t_end: f64,
    ) -> Result<Self, Error> {
        let p_min = if classic { 2 } else { n };
        debug_assert!(n_terms >= p_min);
        let dim = n_terms - p_min + 1;
        let weights: Vec<(f64, u32)> = (p_min..=n_terms)
            .map(|p| vp_factor_exponent(p, n, classic))
            .collect();
        // Borrowed closures cannot cross into the boxed rhs, so sample x
        // through a raw value closure captured by reference is not possible
        // here; instead wrap the borrow in a local that the box may keep for
        // the integration's duration only.
        let value = &x.value;
        let rhs = move |t: f64, _y: &[f64], dy: &mut [f64]| {
            let xv = value(t);
            for (slot, &(factor, exponent)) in dy.iter_mut().zip(&weights) {
                *slot = factor * (t - a).powi(exponent as i32) * xv;
            }
        };
        // SAFETY-free lifetime workaround: integrate immediately, while the
        // borrow of `x` is alive; the trajectory owns only plain numbers.
        let traj = {
            let sys = OdeSystem::new(a, alloc::vec![0.0; dim], Box::new(rhs));
            solve_ivp(&sys, t_end, VP_ODE_REL_TOL, VP_ODE_ABS_TOL)?
        };
        Ok(MomentTrajectories { p_min, traj })
    }

    pub(crate) fn value(&self, p: usize, t: f64) -> f64 {
        self.traj.eval_component(t, p - self.p_min)
    }
}

/// Integer-series approximation of the left derivative:
/// `sum_(k=0..N) C(k, alpha) (t-a)^(k-alpha) x^(k)(t)`.
///
/// Exact (up to rounding) whenever `x` is a polynomial of degree at most `N`.
///
/// # Errors
///
/// `Error::Domain` if the spec is not a left integer-series spec or
/// `t <= a`.
pub fn approx_left_int(x: &SmoothInput, spec: &ExpansionSpec, t: f64) -> Result<f64, Error> {
    spec.expect(Method::IntegerSeries, Side::Left)?;
    spec.check_point(t)?;
    let dt = t - spec.base;
    let al = spec.alpha.value();
    let mut sum = KahanSum::default();
    for k in 0..=spec.n_terms {
        let weight = coeff_c_int(spec.alpha, k);
        sum.add(weight * dt.powf(k as f64 - al) * x.derivative_at(t, k));
    }
    Ok(sum.value())
}

/// Shared assembly of the classic moment sum once the moments are known.
fn classic_moment_sum(
    x: &SmoothInput,
    spec: &ExpansionSpec,
    t: f64,
    keep_b: bool,
    table: &CoeffTable,
    vp: &mut dyn FnMut(usize) -> Result<f64, Error>,
) -> Result<f64, Error> {
    let al = spec.alpha.value();
    let (dt, b_sign) = match spec.side {
        Side::Left => (t - spec.base, 1.0),
        Side::Right => (spec.base - t, -1.0),
    };
    let mut sum = KahanSum::new(table.a * dt.powf(-al) * x.value_at(t));
    if keep_b {
        sum.add(b_sign * table.b * dt.powf(1.0 - al) * x.derivative_at(t, 1));
    }
    for p in 2..=spec.n_terms {
        sum.add(-table.c_at(p) * dt.powf(1.0 - p as f64 - al) * vp(p)?);
    }
    Ok(sum.value())
}

/// Moment approximation of the left derivative:
/// `A (t-a)^(-alpha) x + B (t-a)^(1-alpha) xdot - sum_p C_p (t-a)^(1-p-alpha) V_p`.
///
/// Moments are evaluated by adaptive quadrature; for many points on a grid
/// prefer [`approx_left_grid`], which integrates the moment ODEs once.
///
/// # Errors
///
/// `Error::Domain` for spec/point mismatches; quadrature failures propagate.
pub fn approx_left_mom(x: &SmoothInput, spec: &ExpansionSpec, t: f64) -> Result<f64, Error> {
    spec.expect(Method::Moment, Side::Left)?;
    spec.check_point(t)?;
    let table = CoeffTable::build(spec.alpha, spec.n_terms)?;
    classic_moment_sum(x, spec, t, true, &table, &mut |p| {
        moment_vp(x, spec.base, p, 2, t)
    })
}

/// Moment approximation with the first-derivative term dropped. Cheaper when
/// `xdot` is unavailable, at a real cost in accuracy against
/// [`approx_left_mom`] at the same order.
pub fn approx_left_mom_no_b(x: &SmoothInput, spec: &ExpansionSpec, t: f64) -> Result<f64, Error> {
    spec.expect(Method::MomentNoB, Side::Left)?;
    spec.check_point(t)?;
    let table = CoeffTable::build(spec.alpha, spec.n_terms)?;
    classic_moment_sum(x, spec, t, false, &table, &mut |p| {
        moment_vp(x, spec.base, p, 2, t)
    })
}

/// Shared assembly of the generalized sum. The right-sided mirror carries
/// `(-1)^i` on the derivative weights and nothing on the moment weights:
/// reflecting `x` through the interval midpoint turns the right derivative
/// into the left derivative of the reflected input, and matching the two
/// expansions term by term flips exactly the odd-order derivative terms
/// while the moment integrals `(p - n + 1) int (b - tau)^(p-n) x` map onto
/// their left counterparts with weight unchanged. Direct evaluation against
/// the defining integral confirms this (a printed variant with an extra
/// `(-1)^n` on the moment weights diverges from it for odd `n`).
fn general_sum(
    x: &SmoothInput,
    spec: &ExpansionSpec,
    t: f64,
    vp: &mut dyn FnMut(usize) -> Result<f64, Error>,
) -> Result<f64, Error> {
    let al = spec.alpha.value();
    let n = spec.inner_order;
    let (dt, mirror) = match spec.side {
        Side::Left => (t - spec.base, false),
        Side::Right => (spec.base - t, true),
    };
    let mut sum = KahanSum::default();
    for i in 0..n {
        let mut weight = coeff_a_gen(spec.alpha, i, n, spec.n_terms);
        if mirror && i % 2 == 1 {
            weight = -weight;
        }
        sum.add(weight * dt.powf(i as f64 - al) * x.derivative_at(t, i));
    }
    for p in n..=spec.n_terms {
        let weight = coeff_b_gen(spec.alpha, p, n);
        sum.add(weight * dt.powf(n as f64 - 1.0 - p as f64 - al) * vp(p)?);
    }
    Ok(sum.value())
}

/// Generalized approximation of the left derivative, keeping derivatives up
/// to order `inner_order - 1`:
/// `sum_(i<n) A_i (t-a)^(i-alpha) x^(i) + sum_(p=n..N) B_p (t-a)^(n-1-p-alpha) V_p`.
///
/// With `inner_order = 2` this reproduces [`approx_left_mom`]; larger inner
/// orders improve accuracy when the extra derivatives exist.
pub fn approx_left_gen(x: &SmoothInput, spec: &ExpansionSpec, t: f64) -> Result<f64, Error> {
    spec.expect(Method::GeneralN, Side::Left)?;
    spec.check_point(t)?;
    general_sum(x, spec, t, &mut |p| {
        moment_vp_general(x, spec.base, p, spec.inner_order, t)
    })
}

/// Moment approximation of the right derivative:
/// `A (b-t)^(-alpha) x - B (b-t)^(1-alpha) xdot - sum_p C_p (b-t)^(1-p-alpha) W_p`
/// with `W_p = (1-p) int_t^b (b-tau)^(p-2) x(tau) dtau`.
pub fn approx_right_mom(x: &SmoothInput, spec: &ExpansionSpec, t: f64) -> Result<f64, Error> {
    spec.expect(Method::Moment, Side::Right)?;
    spec.check_point(t)?;
    let table = CoeffTable::build(spec.alpha, spec.n_terms)?;
    classic_moment_sum(x, spec, t, true, &table, &mut |p| {
        moment_wp(x, spec.base, p, 2, t, true)
    })
}

/// Generalized approximation of the right derivative; mirrors
/// [`approx_left_gen`] with `(-1)^i` on the derivative weights, `(-1)^n` on
/// the moment weights, and `W_p = (p-n+1) int_t^b (b-tau)^(p-n) x(tau) dtau`.
pub fn approx_right_gen(x: &SmoothInput, spec: &ExpansionSpec, t: f64) -> Result<f64, Error> {
    spec.expect(Method::GeneralN, Side::Right)?;
    spec.check_point(t)?;
    general_sum(x, spec, t, &mut |p| {
        moment_wp(x, spec.base, p, spec.inner_order, t, false)
    })
}

/// Evaluates a left-sided spec at every point of an ascending grid. For the
/// moment families this integrates the moment ODEs once and reads the dense
/// interpolant per point, instead of one quadrature per (point, moment) pair.
///
/// # Errors
///
/// `Error::Domain` if the spec is right-sided, the grid is empty or not
/// strictly ascending, or any point sits at or below the base point.
pub fn approx_left_grid(
    x: &SmoothInput,
    spec: &ExpansionSpec,
    ts: &[f64],
) -> Result<Vec<f64>, Error> {
    if spec.side != Side::Left {
        return Err(Error::Domain(
            "grid evaluation is implemented for left-sided specs".into(),
        ));
    }
    if ts.is_empty() {
        return Err(Error::Domain("grid evaluation needs at least one point".into()));
    }
    for w in ts.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Domain(
                "grid points must be strictly ascending".into(),
            ));
        }
    }
    spec.check_point(ts[0])?;
    let t_end = *ts.last().expect("nonempty");

    match spec.method {
        Method::IntegerSeries => ts.iter().map(|&t| approx_left_int(x, spec, t)).collect(),
        Method::Moment | Method::MomentNoB => {
            let table = CoeffTable::build(spec.alpha, spec.n_terms)?;
            let keep_b = spec.method == Method::Moment;
            let vps = MomentTrajectories::build(x, spec.base, 2, true, spec.n_terms, t_end)?;
            ts.iter()
                .map(|&t| {
                    classic_moment_sum(x, spec, t, keep_b, &table, &mut |p| {
                        let dense = vps.value(p, t);
                        if dense.abs() >= VP_DENSE_FLOOR {
                            Ok(dense)
                        } else {
                            moment_vp(x, spec.base, p, 2, t)
                        }
                    })
                })
                .collect()
        }
        Method::GeneralN => {
            let vps = MomentTrajectories::build(
                x,
                spec.base,
                spec.inner_order,
                false,
                spec.n_terms,
                t_end,
            )?;
            ts.iter()
                .map(|&t| {
                    general_sum(x, spec, t, &mut |p| {
                        let dense = vps.value(p, t);
                        if dense.abs() >= VP_DENSE_FLOOR {
                            Ok(dense)
                        } else {
                            moment_vp_general(x, spec.base, p, spec.inner_order, t)
                        }
                    })
                })
                .collect()
        }
    }
}

/// Truncation bound for the integer series:
/// `M dt^(N+1-alpha) / (Gamma(1-alpha) (N+1)!)`, where `M` bounds
/// `|x^(N+1)|` on the interval and `dt = t - a`.
pub fn bound_int(alpha: FracOrder, n_terms: usize, deriv_bound: f64, dt: f64) -> f64 {
    debug_assert!(deriv_bound >= 0.0 && dt > 0.0);
    let al = alpha.value();
    // (N+1)! accumulated in place; exact in f64 through N = 169.
    let mut factorial = 1.0;
    for k in 2..=(n_terms + 1) {
        factorial *= k as f64;
    }
    deriv_bound * dt.powf(n_terms as f64 + 1.0 - al)
        / (crate::specfun::gamma(1.0 - al) * factorial)
}

/// Truncation bound for the moment families with inner order `n >= 2`:
///
/// ```text
/// L_n e^((n-1-alpha)^2 + (n-1-alpha))
/// ------------------------------------- dt^(n-alpha),
/// Gamma(n-alpha) (n-1-alpha) N^(n-1-alpha)
/// ```
///
/// where `L_n` bounds `|x^(n)|` on the interval. The two-term family is the
/// `n = 2` case. The bound decays only algebraically in `N`, which is the
/// honest price of trading derivatives for moments.
///
/// # Panics
///
/// If `n < 2`: with `alpha` in (0, 1) the exponent `n - 1 - alpha` must be
/// positive for the bound to exist.
pub fn bound_mom_general(
    alpha: FracOrder,
    n: usize,
    n_terms: usize,
    deriv_bound: f64,
    dt: f64,
) -> f64 {
    assert!(n >= 2, "the moment-family bound needs inner order n >= 2");
    debug_assert!(n_terms >= 1 && deriv_bound >= 0.0 && dt > 0.0);
    let al = alpha.value();
    let q = n as f64 - 1.0 - al;
    deriv_bound * (q * q + q).exp() * dt.powf(n as f64 - al)
        / (crate::specfun::gamma(n as f64 - al) * q * (n_terms as f64).powf(q))
}
