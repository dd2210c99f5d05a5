//! Numerical approximation of Riemann-Liouville fractional derivatives of
//! order `alpha` in (0, 1) by series expansions that involve only integer-order
//! derivatives and moment integrals of the function.
//!
//! Two expansion families are provided. The integer-series form needs
//! `N + 1` derivatives of the input; the moment form needs only the value,
//! the first derivative, and a set of moment integrals `V_p`, which makes it
//! usable on tabular data and inside differential-equation solvers where
//! higher derivatives are unavailable. Both come with computable truncation
//! bounds.
//!
//! Modules:
//!
//! | module | contents |
//! |--------|----------|
//! | [`specfun`] | gamma function, generalized binomials, Mittag-Leffler, expansion coefficients |
//! | [`numerics`] | adaptive quadrature, embedded Runge-Kutta IVP solver, finite differences, linear shooting |
//! | [`expansions`] | the expansion evaluators and their truncation bounds |
//! | [`oracles`] | closed-form and Grunwald-Letnikov reference evaluators |
//! | [`tabular`] | fractional differentiation of sampled data |
//! | [`fode`] | scalar fractional initial-value problems via reduction to classical ODEs |
//! | [`varsolve`] | two fractional variational benchmark problems |
//!
//! The crate is `no_std`-compatible (allocation is required): disable the
//! default `std` feature and enable `libm` to supply the float math.
//!
//! # Example
//!
//! Approximate the left derivative of `x(t) = t^2` of order `1/2` at `t = 1`
//! and compare with the closed form:
//!
//! ```
//! use fracderiv_core::expansions::{approx_left_int, ExpansionSpec, Side, SmoothInput};
//! use fracderiv_core::oracles::exact_power;
//! use fracderiv_core::specfun::FracOrder;
//!
//! let alpha = FracOrder::new(0.5).unwrap();
//! let x = SmoothInput::polynomial(&[0.0, 0.0, 1.0]); // t^2
//! let spec = ExpansionSpec::integer_series(alpha, Side::Left, 0.0, 2).unwrap();
//! let approx = approx_left_int(&x, &spec, 1.0).unwrap();
//! let exact = exact_power(2.0, alpha, 0.0, 1.0).unwrap();
//! assert!((approx - exact).abs() < 1e-12);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("either the `std` or the `libm` feature must be enabled");

pub(crate) mod float;

mod error;
pub use error::Error;

pub mod expansions;
pub mod fode;
pub mod numerics;
pub mod oracles;
pub mod specfun;
pub mod tabular;
pub mod varsolve;
