//! Special functions and expansion coefficients.
//!
//! The gamma function is evaluated by a Lanczos approximation (g = 7, nine
//! coefficients) with the reflection formula for arguments below 1/2. All
//! coefficient families below are built from gamma-ratio recurrences rather
//! than raw gamma quotients, so they stay finite for term counts far beyond
//! the point where `gamma(p)` itself overflows.
//!
//! Coefficient families, with `alpha` in (0, 1):
//!
//! * `coeff_c_int(alpha, n)`: weight of the n-th derivative term in the
//!   integer-series expansion, `binom(alpha, n) / gamma(n + 1 - alpha)`.
//! * `coeff_a`, `coeff_b`, `coeff_c_mom`: weights of the value, first
//!   derivative, and moment terms in the two-term-plus-moments expansion.
//! * `coeff_a_gen`, `coeff_b_gen`: the same roles for the expansion that
//!   keeps derivatives up to order `n - 1`.
//!
//! `coeff_a_gen_tail` evaluates the closed-form truncation tail of the
//! derivative weights, which is the quantity tabulated when choosing how
//! many moment terms are worth keeping.

use crate::Error;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use crate::float::FloatExt;

/// Fractional differentiation order, validated to lie strictly in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder(f64);

impl FracOrder {
    /// Validates `alpha`; only orders strictly between 0 and 1 are accepted.
    pub fn new(alpha: f64) -> Result<Self, Error> {
        if alpha.is_finite() && 0.0 < alpha && alpha < 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::Domain(format!(
                "fractional order must lie in (0, 1), got {alpha}"
            )))
        }
    }

    /// The underlying order.
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Compensated (Kahan) accumulator for sums whose partial terms cancel.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub(crate) fn new(first: f64) -> Self {
        KahanSum {
            sum: first,
            carry: 0.0,
        }
    }

    pub(crate) fn add(&mut self, term: f64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(pi x)` with exact integer reduction, accurate near the zeros where
/// `(PI * x).sin()` loses digits to argument rounding.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Gamma function for real arguments.
///
/// Returns NaN at the poles (zero and the negative integers) and for NaN
/// input; overflows to infinity above roughly 171.6. Relative accuracy is
/// better than 1e-13 for |x| <= 50. See [`try_gamma`] for a checked variant.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        // Reflection: gamma(x) = pi / (sin(pi x) gamma(1 - x)).
        if x == x.floor() {
            return f64::NAN;
        }
        let s = sin_pi(x);
        if s == 0.0 {
            return f64::NAN;
        }
        return PI / (s * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // Split the power so the intermediate stays finite up to the true
    // overflow threshold near x = 171.6.
    let half_pow = t.powf((z + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half_pow * (-t).exp() * half_pow * acc
}

/// Gamma function that reports pole arguments as a domain error.
pub fn try_gamma(x: f64) -> Result<f64, Error> {
    if x <= 0.0 && (x == x.floor() || x.is_nan()) {
        return Err(Error::Domain(format!(
            "gamma is undefined at the pole x = {x}"
        )));
    }
    let v = gamma(x);
    if v.is_nan() {
        return Err(Error::Domain(format!("gamma evaluation failed at x = {x}")));
    }
    Ok(v)
}

/// Generalized binomial coefficient `binom(alpha, n)` for real upper index.
///
/// Evaluated by the multiplicative recurrence
/// `binom(alpha, k) = binom(alpha, k-1) (alpha - k + 1) / k`, which is stable
/// for arbitrary `n` and exact for `n = 0`.
///
/// ```
/// use fracderiv_core::specfun::binom_real;
/// assert_eq!(binom_real(0.5, 0), 1.0);
/// assert!((binom_real(0.5, 2) - (-0.125)).abs() < 1e-15);
/// ```
pub fn binom_real(alpha: f64, n: usize) -> f64 {
    let mut b = 1.0;
    for k in 1..=n {
        b *= (alpha - (k as f64 - 1.0)) / k as f64;
    }
    b
}

/// Maximum number of series terms attempted by [`mittag_leffler`].
pub const MITTAG_LEFFLER_MAX_TERMS: usize = 10_000;

/// Two-parameter Mittag-Leffler function `E_{a,b}(z) = sum z^k / gamma(a k + b)`.
///
/// Terms whose gamma argument lands on a pole are skipped (their reciprocal
/// gamma weight is zero). Summation stops once the next term magnitude falls
/// below `1e-15 (1 + |sum|)`; failure to get there within
/// [`MITTAG_LEFFLER_MAX_TERMS`] terms is an accuracy error.
///
/// ```
/// use fracderiv_core::specfun::mittag_leffler;
/// let v = mittag_leffler(1.0, 1.0, 1.0).unwrap();
/// assert!((v - 1.0f64.exp()).abs() < 1e-14);
/// ```
pub fn mittag_leffler(a: f64, b: f64, z: f64) -> Result<f64, Error> {
    if !(a > 0.0) || !b.is_finite() || !z.is_finite() {
        return Err(Error::Domain(format!(
            "mittag_leffler requires a > 0 and finite b, z; got a = {a}, b = {b}, z = {z}"
        )));
    }
    let mut sum = KahanSum::default();
    let mut z_pow = 1.0;
    for k in 0..MITTAG_LEFFLER_MAX_TERMS {
        let arg = a * k as f64 + b;
        let near_int = (arg - arg.round()).abs() <= 1e-12 * (1.0 + arg.abs());
        if !(arg <= 0.0 && near_int) {
            let term = z_pow / gamma(arg);
            if !term.is_finite() {
                return Err(Error::Accuracy(format!(
                    "mittag_leffler term overflowed at k = {k} for a = {a}, b = {b}, z = {z}"
                )));
            }
            sum.add(term);
            // The term magnitudes are eventually dominated by the gamma
            // growth, so a single below-threshold trailing term ends the sum.
            let next = z_pow * z / gamma(a * (k as f64 + 1.0) + b);
            if next.is_finite() && next.abs() < 1e-15 * (1.0 + sum.value().abs()) {
                return Ok(sum.value());
            }
        }
        z_pow *= z;
        if !z_pow.is_finite() {
            return Err(Error::Accuracy(format!(
                "mittag_leffler power overflowed at k = {k} for z = {z}"
            )));
        }
    }
    Err(Error::Accuracy(format!(
        "mittag_leffler did not converge within {MITTAG_LEFFLER_MAX_TERMS} terms \
         for a = {a}, b = {b}, z = {z}"
    )))
}

/// Weight of the n-th derivative term in the integer-series expansion:
/// `binom(alpha, n) / gamma(n + 1 - alpha)`.
pub fn coeff_c_int(alpha: FracOrder, n: usize) -> f64 {
    binom_real(alpha.value(), n) / gamma(n as f64 + 1.0 - alpha.value())
}

/// Weight of the value term in the moment expansion with `n_terms` moments:
/// `(1 / gamma(1 - alpha)) [1 + sum_{p=2..n_terms} gamma(p - 1 + alpha) / (gamma(alpha) (p-1)!)]`.
pub fn coeff_a(alpha: FracOrder, n_terms: usize) -> f64 {
    let al = alpha.value();
    let mut sum = KahanSum::new(1.0);
    // p = 2 term: gamma(1 + alpha) / gamma(alpha) = alpha.
    let mut term = al;
    for p in 2..=n_terms {
        sum.add(term);
        term *= (p as f64 - 1.0 + al) / p as f64;
    }
    sum.value() / gamma(1.0 - al)
}

/// Weight of the first-derivative term in the moment expansion:
/// `(1 / gamma(2 - alpha)) [1 + sum_{p=1..n_terms} gamma(p - 1 + alpha) / (gamma(alpha - 1) p!)]`.
///
/// The bracket cancels toward zero as `n_terms` grows, so the terms are
/// accumulated with compensated summation.
pub fn coeff_b(alpha: FracOrder, n_terms: usize) -> f64 {
    let al = alpha.value();
    let mut sum = KahanSum::new(1.0);
    // p = 1 term: gamma(alpha) / (gamma(alpha - 1) 1!) = alpha - 1.
    let mut term = al - 1.0;
    for p in 1..=n_terms {
        sum.add(term);
        term *= (p as f64 - 1.0 + al) / (p as f64 + 1.0);
    }
    sum.value() / gamma(2.0 - al)
}

/// Weight of the p-th moment term in the moment expansion:
/// `gamma(p - 1 + alpha) / (gamma(2 - alpha) gamma(alpha - 1) (p-1)!)`.
///
/// Negative for every `p >= 2` since `gamma(alpha - 1) < 0` on (0, 1).
pub fn coeff_c_mom(alpha: FracOrder, p: usize) -> f64 {
    debug_assert!(p >= 2);
    let al = alpha.value();
    // ratio_p = gamma(p - 1 + alpha) / (p - 1)!, grown from ratio_2 = gamma(1 + alpha).
    let mut ratio = gamma(1.0 + al);
    for q in 2..p {
        ratio *= (q as f64 - 1.0 + al) / q as f64;
    }
    ratio / (gamma(2.0 - al) * gamma(al - 1.0))
}

/// Weight of the i-th derivative term in the expansion that keeps
/// derivatives up to order `n - 1` and moments up to `n_terms`.
///
/// For `1 <= i <= n - 1` this is
/// `(1 / gamma(i + 1 - alpha)) [1 + sum_{p=n-i..n_terms} gamma(p - n + 1 + alpha) / (gamma(alpha - i) (p - n + i + 1)!)]`.
/// For `i = 0` it returns the merged value weight
/// `1 / gamma(1 - alpha) - sum_{p=n..n_terms} coeff_b_gen(alpha, p, n)`,
/// which bundles the value corrections that pair with each moment term.
pub fn coeff_a_gen(alpha: FracOrder, i: usize, n: usize, n_terms: usize) -> f64 {
    debug_assert!(n >= 1 && i < n);
    let al = alpha.value();
    if i == 0 {
        let mut sum = KahanSum::new(1.0 / gamma(1.0 - al));
        // q = p - n + 1 >= 1; term_q = gamma(q + alpha) / (gamma(-alpha) gamma(1 + alpha) q!).
        let mut num = gamma(1.0 + al);
        let denom = gamma(-al) * gamma(1.0 + al);
        for p in n..=n_terms {
            let q = (p - n + 1) as f64;
            sum.add(-num / denom);
            num *= (q + al) / (q + 1.0);
        }
        return sum.value();
    }
    let mut sum = KahanSum::new(1.0);
    // First summand, at p = n - i: gamma(1 - i + alpha) / gamma(alpha - i) = alpha - i.
    let mut term = al - i as f64;
    let mut s = -(i as f64);
    let last = n_terms as i64 - n as i64;
    while s as i64 <= last {
        sum.add(term);
        term *= (s + 1.0 + al) / (s + i as f64 + 2.0);
        s += 1.0;
    }
    sum.value() / gamma(i as f64 + 1.0 - al)
}

/// Weight of the p-th moment term in the expansion that keeps derivatives up
/// to order `n - 1`: `gamma(p - n + 1 + alpha) / (gamma(-alpha) gamma(1 + alpha) (p - n + 1)!)`.
///
/// Equivalent, by the reflection formula, to
/// `-sin(pi alpha) gamma(p - n + 1 + alpha) / (pi (p - n + 1)!)`.
pub fn coeff_b_gen(alpha: FracOrder, p: usize, n: usize) -> f64 {
    debug_assert!(p >= n && n >= 1);
    let al = alpha.value();
    // num_q = gamma(q + alpha) / q! for q = p - n + 1, grown from q = 1.
    let mut num = gamma(1.0 + al);
    for q in 1..(p - n + 1) {
        num *= (q as f64 + al) / (q as f64 + 1.0);
    }
    num / (gamma(-al) * gamma(1.0 + al))
}

/// Truncation tail of [`coeff_a_gen`] for `i >= 1`: the exact discrepancy
/// between the weight at `n_terms` moments and its infinite-sum limit,
/// `-(1 / gamma(i + 1 - alpha)) sum_{p=0}^{n_terms - n + i + 1} gamma(p + alpha - i) / (gamma(alpha - i) p!)`.
///
/// Depends on `n` and `n_terms` only through `n_terms - n`.
pub fn coeff_a_gen_tail(alpha: FracOrder, i: usize, n: usize, n_terms: usize) -> f64 {
    debug_assert!(i >= 1 && n >= 1 && n_terms >= n);
    let al = alpha.value();
    let upper = n_terms - n + i + 1;
    let mut sum = KahanSum::default();
    // p = 0 term: gamma(alpha - i) / gamma(alpha - i) = 1.
    let mut term = 1.0;
    for p in 0..=upper {
        sum.add(term);
        term *= (p as f64 + al - i as f64) / (p as f64 + 1.0);
    }
    -sum.value() / gamma(i as f64 + 1.0 - al)
}

/// Precomputed moment-expansion weights for a fixed order and moment count.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    pub alpha: FracOrder,
    pub n_terms: usize,
    /// Value weight `A(alpha, n_terms)`.
    pub a: f64,
    /// First-derivative weight `B(alpha, n_terms)`.
    pub b: f64,
    /// Moment weights `C(alpha, p)` for `p = 2..=n_terms`, indexed `p - 2`.
    pub c: Vec<f64>,
}

impl CoeffTable {
    /// Builds the table; `n_terms >= 2` so that at least one moment exists.
    pub fn build(alpha: FracOrder, n_terms: usize) -> Result<Self, Error> {
        if n_terms < 2 {
            return Err(Error::Domain(format!(
                "moment expansion needs at least 2 terms, got {n_terms}"
            )));
        }
        let al = alpha.value();
        let mut c = Vec::with_capacity(n_terms - 1);
        // ratio_p = gamma(p - 1 + alpha) / (p - 1)!, one sweep for all p.
        let mut ratio = gamma(1.0 + al);
        let scale = gamma(2.0 - al) * gamma(al - 1.0);
        for p in 2..=n_terms {
            c.push(ratio / scale);
            ratio *= (p as f64 - 1.0 + al) / p as f64;
        }
        Ok(CoeffTable {
            alpha,
            n_terms,
            a: coeff_a(alpha, n_terms),
            b: coeff_b(alpha, n_terms),
            c,
        })
    }

    /// Moment weight `C(alpha, p)` for `2 <= p <= n_terms`.
    pub fn c_at(&self, p: usize) -> f64 {
        self.c[p - 2]
    }
}
