//! Independent ground-truth evaluators for left Riemann–Liouville
//! derivatives of order `alpha` in (0, 1).
//!
//! Every series expansion in this crate is judged against the values
//! produced here. Two kinds of ground truth are available:
//!
//! * Closed forms. For powers, `D^alpha (t-a)^k = Gamma(k+1) / Gamma(k+1-alpha)
//!   * (t-a)^(k-alpha)`, and for exponentials with base point 0,
//!   `D^alpha e^(lambda t) = t^(-alpha) * E_(1,1-alpha)(lambda t)` with `E` the
//!   two-parameter Mittag–Leffler function. Constants are the `k = 0` power
//!   case.
//! * A Grünwald–Letnikov evaluator, `gl_evaluate`, which discretizes the
//!   fractional difference quotient directly. It converges only linearly in
//!   the step `h`, but it is derived from a different definition of the
//!   derivative than any expansion here, which makes it a genuinely
//!   independent cross-check.
//!
//! The module also carries the exact minimizers of the two built-in
//! variational benchmark problems (see the `varsolve` module):
//! [`exact_linear_solution`] for the problem whose Lagrangian is linear in
//! the fractional derivative, and [`exact_tracking_solution`] for the
//! quadratic tracking problem, whose minimizer `t^alpha / Gamma(alpha+1)` has
//! unit fractional derivative.

use crate::specfun::{binom_real, gamma, mittag_leffler, try_gamma, FracOrder, KahanSum};
use crate::Error;
use alloc::format;

#[cfg(not(feature = "std"))]
use crate::float::FloatExt;

/// Which ground-truth evaluator produced a reference value.
///
/// Carried alongside comparison columns (for example by the command-line
/// tool) so output records where its "exact" numbers came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Closed-form power rule, `exact_power`.
    PowerRule,
    /// Mittag–Leffler closed form for exponentials, `exact_exp`.
    ExpML,
    /// Constant case `k = 0` of the power rule.
    Constant,
    /// Grünwald–Letnikov finite difference, `gl_evaluate`.
    GrunwaldLetnikov,
}

/// Left fractional derivative of the power `(t - a)^k` for `k > -1`:
/// `Gamma(k+1) / Gamma(k+1-alpha) * (t-a)^(k-alpha)`.
///
/// When `k + 1 - alpha` lands on a pole of the gamma function (possible only
/// at 0, for `k = alpha - 1`) the reciprocal gamma factor vanishes and the
/// derivative is exactly zero.
///
/// # Errors
///
/// `Error::Domain` if `k <= -1` or `t <= a`; `Error::Accuracy` if the gamma
/// ratio overflows (very large `k`).
pub fn exact_power(k: f64, alpha: FracOrder, a: f64, t: f64) -> Result<f64, Error> {
    if !k.is_finite() || k <= -1.0 {
        return Err(Error::Domain(format!(
            "power-rule exponent must exceed -1, got {k}"
        )));
    }
    if !t.is_finite() || !a.is_finite() || t <= a {
        return Err(Error::Domain(format!(
            "power rule requires t > a, got t = {t}, a = {a}"
        )));
    }
    let denom = gamma(k + 1.0 - alpha.value());
    if denom.is_nan() {
        // Pole of gamma: the 1/Gamma factor is zero, hence so is the derivative.
        return Ok(0.0);
    }
    let ratio = try_gamma(k + 1.0)? / denom;
    let value = ratio * (t - a).powf(k - alpha.value());
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Accuracy(format!(
            "power-rule value overflowed for k = {k}"
        )))
    }
}

/// Left fractional derivative of `e^(lambda t)` with base point 0:
/// `t^(-alpha) * E_(1, 1-alpha)(lambda t)`.
///
/// # Errors
///
/// `Error::Domain` if `t <= 0` (the closed form is tied to base point 0) or
/// `lambda` is not finite; accuracy errors propagate from the Mittag–Leffler
/// series for arguments too large to sum in `f64`.
pub fn exact_exp(lambda: f64, alpha: FracOrder, t: f64) -> Result<f64, Error> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "exponential rate must be finite, got {lambda}"
        )));
    }
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "exponential closed form requires t > 0, got {t}"
        )));
    }
    let ml = mittag_leffler(1.0, 1.0 - alpha.value(), lambda * t)?;
    Ok(t.powf(-alpha.value()) * ml)
}

/// Grünwald–Letnikov approximation of the left derivative at `t`:
/// `h^(-alpha) * sum_(j=0..n) (-1)^j binom(alpha, j) x(t - j h)` with
/// `n = floor((t - a) / h)`.
///
/// The alternating binomial weights are generated by the stable recurrence
/// `w_0 = 1`, `w_j = w_(j-1) * (j - 1 - alpha) / j`, and the sum is
/// compensated. The truncation error is O(h), so this evaluator is a
/// cross-check, not a production approximation.
///
/// # Errors
///
/// `Error::Domain` when `h <= 0`, `t <= a`, or the step resolves fewer than
/// ten points across `[a, t]`; `Error::Accuracy` if the sampled values
/// produce a non-finite sum.
pub fn gl_evaluate(
    x: &dyn Fn(f64) -> f64,
    alpha: FracOrder,
    a: f64,
    t: f64,
    h: f64,
) -> Result<f64, Error> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    if !t.is_finite() || !a.is_finite() || t <= a {
        return Err(Error::Domain(format!(
            "evaluation point must satisfy t > a, got t = {t}, a = {a}"
        )));
    }
    let span_steps = (t - a) / h;
    if span_steps < 10.0 {
        return Err(Error::Domain(format!(
            "step {h} too coarse: only {span_steps:.2} points across [{a}, {t}], need at least 10"
        )));
    }
    // Nudge before flooring so an exact multiple of h is not lost to the
    // rounding of (t - a) / h one ulp below an integer.
    let n = (span_steps * (1.0 + 4.0 * f64::EPSILON)).floor() as usize;
    let al = alpha.value();
    let mut weight = 1.0; // (-1)^j binom(alpha, j), updated multiplicatively
    let mut sum = KahanSum::new(x(t));
    for j in 1..=n {
        weight *= (j as f64 - 1.0 - al) / j as f64;
        sum.add(weight * x(t - j as f64 * h));
    }
    let value = h.powf(-al) * sum.value();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Accuracy(
            "Grünwald–Letnikov sum is not finite; the sampled function may blow up".into(),
        ))
    }
}

/// Exact minimizer of the first built-in variational benchmark: minimize
/// `integral_0^1 [D^alpha x - xdot^2] dt` with `x(0) = 0`, `x(1) = 1`.
///
/// Because the Lagrangian is linear in the fractional derivative, the
/// Euler–Lagrange equation collapses to the classical ODE
/// `xddot = -(1-t)^(-alpha) / (2 Gamma(1-alpha))`, whose solution under the
/// boundary conditions is
/// `x(t) = -(1-t)^(2-alpha) / (2 Gamma(3-alpha))
///         + (1 - 1/(2 Gamma(3-alpha))) t + 1/(2 Gamma(3-alpha))`.
pub fn exact_linear_solution(alpha: FracOrder, t: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&t), "solution is defined on [0, 1]");
    let half_inv_g3 = 0.5 / gamma(3.0 - alpha.value());
    -(1.0 - t).powf(2.0 - alpha.value()) * half_inv_g3 + (1.0 - half_inv_g3) * t + half_inv_g3
}

/// Exact minimizer of the second built-in variational benchmark: minimize
/// `integral_0^1 (D^alpha x - 1)^2 dt` with `x(0) = 0`,
/// `x(1) = 1/Gamma(alpha+1)`.
///
/// The integrand is non-negative and vanishes exactly when `D^alpha x = 1`,
/// so the minimizer is `x(t) = t^alpha / Gamma(alpha + 1)` and the minimal
/// objective value is zero.
pub fn exact_tracking_solution(alpha: FracOrder, t: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&t), "solution is defined on [0, 1]");
    t.powf(alpha.value()) / gamma(alpha.value() + 1.0)
}

/// Alternating Grünwald–Letnikov weight `(-1)^j binom(alpha, j)` computed
/// directly, used in tests to pin the recurrence inside [`gl_evaluate`].
#[cfg(test)]
fn gl_weight_direct(alpha: f64, j: usize) -> f64 {
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    sign * binom_real(alpha, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn order(alpha: f64) -> FracOrder {
        FracOrder::new(alpha).unwrap()
    }

    #[test]
    fn power_rule_matches_frozen_values() {
        let alpha = order(0.5);
        // D^0.5 t^2 = 2/Gamma(2.5) t^1.5; coefficient 1.5045...
        let coeff = 2.0 / gamma(2.5);
        for &t in &[0.25, 0.5, 1.0, 2.0] {
            let got = exact_power(2.0, alpha, 0.0, t).unwrap();
            let want = coeff * t.powf(1.5);
            assert!((got - want).abs() <= 1e-14 * want.abs());
        }
        // D^0.5 t^4 at t=1 is Gamma(5)/Gamma(4.5).
        let got = exact_power(4.0, alpha, 0.0, 1.0).unwrap();
        assert!((got - 2.0633219055460801).abs() < 1e-13);
        // Base point shifts move the singularity: k=0 gives (t-a)^(-alpha)/Gamma(1-alpha).
        let got = exact_power(0.0, alpha, 2.0, 3.5).unwrap();
        let want = 1.5f64.powf(-0.5) / gamma(0.5);
        assert!((got - want).abs() <= 1e-15);
    }

    #[test]
    fn power_rule_degenerate_exponent_is_zero() {
        // k = alpha - 1 puts k+1-alpha on the gamma pole at 0; the derivative
        // of (t-a)^(alpha-1) vanishes identically.
        let alpha = order(0.7);
        let got = exact_power(-0.3, alpha, 0.0, 0.8).unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn power_rule_rejects_bad_arguments() {
        let alpha = order(0.5);
        assert!(matches!(
            exact_power(-1.0, alpha, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            exact_power(2.0, alpha, 1.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            exact_power(2.0, alpha, 1.0, 0.5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn exp_oracle_matches_frozen_value() {
        // t^(-0.5) E_(1,0.5)(2) at t=1; reference summed in 30-digit arithmetic.
        let got = exact_exp(2.0, order(0.5), 1.0).unwrap();
        assert!((got - 10.538428671807383).abs() < 1e-12);
    }

    #[test]
    fn exp_oracle_zero_rate_reduces_to_constant_rule() {
        for &alpha in &[0.3, 0.5, 0.7] {
            let al = order(alpha);
            for &t in &[0.2, 1.0, 4.0] {
                let via_exp = exact_exp(0.0, al, t).unwrap();
                let via_power = exact_power(0.0, al, 0.0, t).unwrap();
                assert!((via_exp - via_power).abs() <= 1e-14 * via_power.abs());
            }
        }
    }

    #[test]
    fn exp_oracle_rejects_nonpositive_time() {
        assert!(matches!(
            exact_exp(2.0, order(0.5), 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            exact_exp(2.0, order(0.5), -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gl_weights_follow_direct_binomials() {
        // The in-loop recurrence must reproduce (-1)^j binom(alpha, j).
        let alpha = 0.6;
        let mut weight = 1.0;
        for j in 1..=40 {
            weight *= (j as f64 - 1.0 - alpha) / j as f64;
            let direct = gl_weight_direct(alpha, j);
            assert!(
                (weight - direct).abs() <= 1e-14 * direct.abs().max(1e-300),
                "weight recurrence diverged at j = {j}"
            );
        }
    }

    #[test]
    fn gl_constant_converges_linearly() {
        // D^alpha 1 = t^(-alpha)/Gamma(1-alpha); error of the GL sum is O(h).
        let alpha = order(0.5);
        let exact = 1.0 / gamma(0.5);
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&h| {
                let got = gl_evaluate(&|_| 1.0, alpha, 0.0, 1.0, h).unwrap();
                (got - exact).abs()
            })
            .collect();
        // Successive step refinements by 10 should cut the error by ~10.
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (4.0..25.0).contains(&ratio),
                "expected roughly linear convergence, got ratio {ratio}"
            );
        }
    }

    #[test]
    fn gl_matches_power_rule_oracles() {
        let alpha = order(0.5);
        // x = t at t = 1: Gamma(2)/Gamma(1.5).
        let got = gl_evaluate(&|t| t, alpha, 0.0, 1.0, 1e-4).unwrap();
        assert!((got - 1.1283791670955126).abs() < 1e-3);
        // x = t^4 at t = 1: Gamma(5)/Gamma(4.5).
        let got = gl_evaluate(&|t| t.powi(4), alpha, 0.0, 1.0, 1e-4).unwrap();
        assert!((got - 2.0633219055460801).abs() < 2e-3);
    }

    #[test]
    fn gl_matches_exp_oracle_with_linear_rate() {
        let alpha = order(0.5);
        let exact = exact_exp(2.0, alpha, 1.0).unwrap();
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&h| {
                let got = gl_evaluate(&|t| (2.0 * t).exp(), alpha, 0.0, 1.0, h).unwrap();
                (got - exact).abs()
            })
            .collect();
        assert!(errs[2] < 2e-3, "h = 1e-4 error too large: {}", errs[2]);
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (4.0..25.0).contains(&ratio),
                "expected roughly linear convergence, got ratio {ratio}"
            );
        }
    }

    #[test]
    fn gl_rejects_coarse_steps() {
        let alpha = order(0.5);
        assert!(matches!(
            gl_evaluate(&|t| t, alpha, 0.0, 1.0, 0.2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            gl_evaluate(&|t| t, alpha, 0.0, 1.0, -0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gl_counts_an_exact_step_multiple_fully() {
        // (t - a)/h = 50 exactly; the nudge before flooring must keep all 51
        // terms rather than dropping the tail sample at t = a.
        let alpha = order(0.5);
        let h: f64 = 0.02;
        let direct: f64 = {
            let mut weight = 1.0;
            let mut sum = KahanSum::new(1.0);
            for j in 1..=50 {
                weight *= (j as f64 - 1.0 - 0.5) / j as f64;
                sum.add(weight);
            }
            h.powf(-0.5) * sum.value()
        };
        let got = gl_evaluate(&|_| 1.0, alpha, 0.0, 1.0, h).unwrap();
        assert!((got - direct).abs() <= 1e-12 * direct.abs());
    }

    #[test]
    fn linear_benchmark_solution_hits_boundary_conditions() {
        for &alpha in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let al = order(alpha);
            assert_eq!(exact_linear_solution(al, 0.0), 0.0);
            assert!((exact_linear_solution(al, 1.0) - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
        // Frozen interior value, alpha = 1/2 at the midpoint.
        let got = exact_linear_solution(order(0.5), 0.5);
        assert!((got - 0.55508243438210787).abs() < 1e-15);
    }

    #[test]
    fn linear_benchmark_second_derivative_matches_forcing() {
        // Differentiating the closed form twice by hand gives
        // -(2-alpha)(1-alpha)(1-t)^(-alpha) / (2 Gamma(3-alpha)); the gamma
        // recurrence must collapse that to -(1-t)^(-alpha)/(2 Gamma(1-alpha)).
        for &alpha in &[0.3, 0.5, 0.8] {
            let g3 = gamma(3.0 - alpha);
            let g1 = gamma(1.0 - alpha);
            for i in 1..=20 {
                let t = i as f64 / 21.0;
                let from_solution =
                    -(2.0 - alpha) * (1.0 - alpha) * (1.0 - t).powf(-alpha) / (2.0 * g3);
                let forcing = -(1.0 - t).powf(-alpha) / (2.0 * g1);
                assert!(
                    (from_solution - forcing).abs() <= 1e-10 * forcing.abs(),
                    "mismatch at alpha = {alpha}, t = {t}"
                );
            }
        }
    }

    #[test]
    fn tracking_benchmark_solution_has_unit_derivative() {
        for &alpha in &[0.25, 0.5, 0.75] {
            let al = order(alpha);
            assert_eq!(exact_tracking_solution(al, 0.0), 0.0);
            let g = gamma(alpha + 1.0);
            assert!((exact_tracking_solution(al, 1.0) - 1.0 / g).abs() <= 1e-15 / g);
            // D^alpha [t^alpha / Gamma(alpha+1)] = 1 by the power rule.
            for &t in &[0.3, 0.7, 1.0] {
                let d = exact_power(alpha, al, 0.0, t).unwrap() / g;
                assert!((d - 1.0).abs() <= 1e-12);
            }
        }
        let got = exact_tracking_solution(order(0.5), 1.0);
        assert!((got - 1.1283791670955126).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn exp_oracle_at_zero_rate_is_constant_rule(
            alpha in 0.05f64..0.95,
            t in 0.1f64..5.0,
        ) {
            let al = order(alpha);
            let via_exp = exact_exp(0.0, al, t).unwrap();
            let via_power = exact_power(0.0, al, 0.0, t).unwrap();
            let agree = (via_exp - via_power).abs() <= 1e-13 * via_power.abs();
            prop_assert!(agree);
        }

        #[test]
        fn power_rule_scales_with_translation(
            alpha in 0.05f64..0.95,
            k in 0.0f64..4.0,
            shift in -2.0f64..2.0,
            span in 0.1f64..3.0,
        ) {
            // The closed form depends on t and a only through t - a.
            let al = order(alpha);
            let base = exact_power(k, al, 0.0, span).unwrap();
            let moved = exact_power(k, al, shift, shift + span).unwrap();
            let agree = (base - moved).abs() <= 1e-12 * base.abs().max(1e-12);
            prop_assert!(agree);
        }
    }
}
