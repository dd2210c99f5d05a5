//! Float math that is inherent on `f64` under `std` but must come from
//! `libm` in `no_std` builds. Modules that need it import `FloatExt`; with
//! `std` enabled the trait is empty and the inherent methods win.

#![allow(unused)]

#[cfg(not(feature = "std"))]
pub(crate) trait FloatExt {
    fn abs(self) -> f64;
    fn powi(self, n: i32) -> f64;
    fn powf(self, e: f64) -> f64;
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn sqrt(self) -> f64;
    fn sin(self) -> f64;
    fn cos(self) -> f64;
    fn floor(self) -> f64;
    fn round(self) -> f64;
    fn log10(self) -> f64;
}

#[cfg(not(feature = "std"))]
impl FloatExt for f64 {
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn powi(self, n: i32) -> f64 {
        libm::pow(self, n as f64)
    }
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    fn round(self) -> f64 {
        libm::round(self)
    }
    fn log10(self) -> f64 {
        libm::log10(self)
    }
}

#[cfg(not(feature = "std"))]
pub(crate) use FloatExt as _;
