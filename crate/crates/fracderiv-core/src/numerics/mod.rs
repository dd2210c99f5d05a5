//! Classical numerical building blocks: adaptive quadrature, an embedded
//! Runge-Kutta initial-value solver with dense output, three-point finite
//! differences on arbitrary grids, and linear shooting for two-point
//! boundary value problems.
//!
//! Everything here is ordinary real analysis; the fractional structure of
//! the library enters only through the coefficient singularities these
//! routines are asked to tolerate, such as integrands blowing up at an
//! endpoint like `(t - a)^(-gamma)` with `gamma < 1`, or right-hand sides
//! with `t^(alpha - 1)` factors near `t = 0`.

mod fd;
mod grid;
mod quad;
mod rk;
mod tpbvp;

pub use fd::finite_difference_first;
pub use grid::Grid;
pub use quad::integrate_adaptive;
pub use rk::{solve_ivp, OdeSystem, Trajectory};
pub use tpbvp::{solve_tpbvp_linear, TpbvpLinear, TpbvpSolution};

use crate::Error;

#[cfg(not(feature = "std"))]
use crate::float::FloatExt;

/// Absolute quadrature tolerance used by [`error_norm`].
pub const ERROR_NORM_TOL: f64 = 1e-10;

/// L2 distance `(integral of (f - g)^2 over [a, b])^(1/2)`.
///
/// The squared difference is integrated adaptively to [`ERROR_NORM_TOL`];
/// the norm is symmetric in `f` and `g` and exactly zero when both
/// callables agree pointwise.
pub fn error_norm(
    f: &dyn Fn(f64) -> f64,
    g: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
) -> Result<f64, Error> {
    let sq = |t: f64| {
        let d = f(t) - g(t);
        d * d
    };
    let integral = integrate_adaptive(&sq, a, b, ERROR_NORM_TOL)?;
    // Tiny negative values can only come from the tail model of the
    // quadrature; clamp them instead of producing NaN.
    Ok(integral.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn error_norm_of_line_against_zero() {
        // integral of t^2 over [0,1] = 1/3.
        let f = |t: f64| t;
        let g = |_: f64| 0.0;
        let got = error_norm(&f, &g, 0.0, 1.0).unwrap();
        assert!((got - (1.0f64 / 3.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn error_norm_identical_inputs_is_zero() {
        let f = |t: f64| (3.0 * t).sin() + t * t;
        assert_eq!(error_norm(&f, &f, 0.0, 2.0).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn error_norm_is_symmetric(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
            let f = move |t: f64| c0 + c1 * t + c2 * t * t;
            let g = move |t: f64| c1 - c0 * t;
            let fg = error_norm(&f, &g, 0.0, 1.0).unwrap();
            let gf = error_norm(&g, &f, 0.0, 1.0).unwrap();
            prop_assert!((fg - gf).abs() <= 1e-12 * (1.0 + fg.abs()));
        }
    }
}
