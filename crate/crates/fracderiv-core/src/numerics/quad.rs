//! Adaptive Simpson quadrature with geometric grading toward endpoint
//! singularities.
//!
//! Regular integrands get plain recursive Simpson with the Richardson
//! correction `(S2 - S1) / 15`. If the integrand is non-finite at an
//! endpoint, the interval is covered by geometrically shrinking panels
//! toward that endpoint; the panel contributions of an integrable power
//! singularity `(t - a)^(-gamma)`, `gamma < 1`, decay by the constant
//! factor `2^(gamma - 1)` per level, so the leftover mass is summed by its
//! geometric model once the observed ratio stabilizes.

use crate::Error;
use alloc::format;

#[cfg(not(feature = "std"))]
use crate::float::FloatExt;

/// Hard cap on integrand evaluations per [`integrate_adaptive`] call.
const EVAL_BUDGET: usize = 4_000_000;
/// Maximum bisection depth inside one panel.
const MAX_DEPTH: u32 = 55;
/// Maximum number of geometric panels per singular endpoint.
const MAX_PANELS: usize = 2_000;

struct Ctx<'a> {
    f: &'a dyn Fn(f64) -> f64,
    evals: usize,
}

impl<'a> Ctx<'a> {
    fn eval(&mut self, t: f64) -> Result<f64, Error> {
        if self.evals >= EVAL_BUDGET {
            return Err(Error::Accuracy(format!(
                "quadrature exceeded its budget of {EVAL_BUDGET} evaluations"
            )));
        }
        self.evals += 1;
        Ok((self.f)(t))
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    (fa + 4.0 * fm + fb) * h / 6.0
}

/// Recursive bisection on [a, b] with midpoint values already computed.
#[allow(clippy::too_many_arguments)]
fn adapt(
    ctx: &mut Ctx,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, Error> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = ctx.eval(lm)?;
    let frm = ctx.eval(rm)?;
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let s2 = left + right;
    let delta = s2 - whole;
    // The 1e-14 floor stops refinement chasing rounding noise once the
    // interval estimate itself is at machine precision.
    let accept = delta.abs() <= 15.0 * tol.max(1e-14 * s2.abs())
        || depth == 0
        || (b - a) <= 1e-13 * (a.abs() + b.abs() + 1.0);
    if accept {
        if !s2.is_finite() {
            return Err(Error::Accuracy(format!(
                "integrand is not finite inside [{a}, {b}]"
            )));
        }
        return Ok(s2 + delta / 15.0);
    }
    let half = 0.5 * tol;
    let l = adapt(ctx, a, fa, m, fm, lm, flm, left, half, depth - 1)?;
    let r = adapt(ctx, m, fm, b, fb, rm, frm, right, half, depth - 1)?;
    Ok(l + r)
}

fn integrate_panel(ctx: &mut Ctx, a: f64, b: f64, tol: f64) -> Result<f64, Error> {
    let m = 0.5 * (a + b);
    let fa = ctx.eval(a)?;
    let fb = ctx.eval(b)?;
    let fm = ctx.eval(m)?;
    let whole = simpson(fa, fm, fb, b - a);
    adapt(ctx, a, fa, b, fb, m, fm, whole, tol, MAX_DEPTH)
}

/// Sums panels shrinking geometrically toward the singular endpoint (`a`
/// when `singular_left`, else `b`), then adds a geometric tail model for
/// the part not covered: the sliver still outstanding when the panel
/// contributions drop below the tolerance share, or the one below float
/// resolution at the endpoint. For a power singularity the panel masses
/// decay by an exact constant factor, so the model converges with them.
fn integrate_graded(
    ctx: &mut Ctx,
    a: f64,
    b: f64,
    tol: f64,
    singular_left: bool,
) -> Result<f64, Error> {
    let width = b - a;
    let cut = |k: i32| {
        if singular_left {
            a + width * 0.5f64.powi(k)
        } else {
            b - width * 0.5f64.powi(k)
        }
    };
    let mut total = 0.0;
    let mut last_panel: Option<f64> = None;
    let mut ratios = [None::<f64>, None::<f64>];
    let mut prev_cut = if singular_left { b } else { a };
    for k in 0..MAX_PANELS as i32 {
        let next_cut = cut(k + 1);
        let resolution_hit = if singular_left {
            next_cut <= a || next_cut >= prev_cut
        } else {
            next_cut >= b || next_cut <= prev_cut
        };
        let tail = match (last_panel, ratios[0].or(ratios[1])) {
            (Some(panel), Some(_)) => {
                let rho = ratios[0].unwrap_or(0.0).max(ratios[1].unwrap_or(0.0));
                panel.abs() * rho / (1.0 - rho)
            }
            _ => f64::INFINITY,
        };
        if (tail <= 0.5 * tol && last_panel.is_some()) || resolution_hit {
            if resolution_hit && !tail.is_finite() {
                return Err(Error::Accuracy(format!(
                    "singular endpoint reached float resolution before its \
                     contribution could be modeled (interval [{a}, {b}])"
                )));
            }
            total += last_panel.map_or(0.0, f64::signum) * tail;
            return Ok(total);
        }
        let (lo, hi) = if singular_left {
            (next_cut, prev_cut)
        } else {
            (prev_cut, next_cut)
        };
        let share = 0.25 * tol * 0.5f64.powi(k);
        let panel = integrate_panel(ctx, lo, hi, share)?;
        total += panel;
        if let Some(prev) = last_panel {
            if prev.abs() > 0.0 && panel.abs() > 0.0 {
                ratios = [Some((panel.abs() / prev.abs()).min(0.995)), ratios[0]];
            } else if panel == 0.0 && prev == 0.0 {
                return Ok(total);
            }
        }
        last_panel = Some(panel);
        prev_cut = next_cut;
    }
    Err(Error::Accuracy(format!(
        "singular endpoint did not yield to graded subdivision within \
         {MAX_PANELS} levels (interval [{a}, {b}])"
    )))
}

/// Adaptive integral of `f` over `[a, b]` with absolute error target `tol`.
///
/// Endpoint singularities are allowed: if `f` is non-finite at `a` or `b`
/// but integrable there (any power blow-up milder than first order), the
/// affected side is covered by geometrically graded panels. Non-finite
/// values strictly inside the interval are an accuracy error, as is
/// exhausting the evaluation budget.
///
/// ```
/// use fracderiv_core::numerics::integrate_adaptive;
/// let v = integrate_adaptive(&|t: f64| t * t, 0.0, 1.0, 1e-12).unwrap();
/// assert!((v - 1.0 / 3.0).abs() < 1e-11);
/// // Integrable singularity at the left endpoint:
/// let v = integrate_adaptive(&|t: f64| t.powf(-0.5), 0.0, 1.0, 1e-9).unwrap();
/// assert!((v - 2.0).abs() < 1e-8);
/// ```
pub fn integrate_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, Error> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::Domain(format!(
            "integration interval must be finite with a <= b, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut ctx = Ctx { f, evals: 0 };
    let singular_left = !ctx.eval(a)?.is_finite();
    let singular_right = !ctx.eval(b)?.is_finite();
    match (singular_left, singular_right) {
        (false, false) => integrate_panel(&mut ctx, a, b, tol),
        (true, false) => integrate_graded(&mut ctx, a, b, tol, true),
        (false, true) => integrate_graded(&mut ctx, a, b, tol, false),
        (true, true) => {
            let m = 0.5 * (a + b);
            let left = integrate_graded(&mut ctx, a, m, 0.5 * tol, true)?;
            let right = integrate_graded(&mut ctx, m, b, 0.5 * tol, false)?;
            Ok(left + right)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_integrated_to_roundoff() {
        let v = integrate_adaptive(&|t| t * t * t - 2.0 * t + 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate_adaptive(&|t: f64| (10.0 * t).sin(), 0.0, 1.0, 1e-11).unwrap();
        let want = (1.0 - (10.0f64).cos()) / 10.0;
        assert!((v - want).abs() < 1e-10);
    }

    #[test]
    fn inverse_sqrt_singularity_at_left_end() {
        let v = integrate_adaptive(&|t: f64| t.powf(-0.5), 0.0, 1.0, 1e-9).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn strong_power_singularity() {
        // integral of t^(-0.9) over [0, 1] = 10.
        let v = integrate_adaptive(&|t: f64| t.powf(-0.9), 0.0, 1.0, 1e-6).unwrap();
        assert!((v - 10.0).abs() < 1e-4, "got {v}");
    }

    #[test]
    fn singularity_at_right_end() {
        let v = integrate_adaptive(&|t: f64| (1.0 - t).powf(-0.5), 0.0, 1.0, 1e-9).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn singularities_at_both_ends() {
        // integral of 1/sqrt(t(1-t)) over [0,1] = pi.
        let v = integrate_adaptive(
            &|t: f64| 1.0 / (t * (1.0 - t)).sqrt(),
            0.0,
            1.0,
            1e-8,
        )
        .unwrap();
        assert!((v - core::f64::consts::PI).abs() < 1e-7, "got {v}");
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(integrate_adaptive(&|t| t, 1.5, 1.5, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_interval_and_tolerance() {
        assert!(matches!(
            integrate_adaptive(&|t| t, 1.0, 0.0, 1e-10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            integrate_adaptive(&|t| t, 0.0, 1.0, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn interior_blowup_is_an_accuracy_error() {
        let f = |t: f64| 1.0 / (t - 0.5);
        assert!(matches!(
            integrate_adaptive(&f, 0.0, 1.0, 1e-10),
            Err(Error::Accuracy(_))
        ));
    }
}
