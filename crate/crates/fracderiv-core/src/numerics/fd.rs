//! First-derivative estimates on arbitrary strictly increasing grids using
//! three-point Lagrange stencils: centered in the interior, one-sided at
//! the two ends. Exact for quadratics on any grid.

use crate::numerics::Grid;
use crate::Error;
use alloc::format;
use alloc::vec::Vec;

/// Derivative of the quadratic through `(x0,f0), (x1,f1), (x2,f2)` at `x`.
fn lagrange3_deriv(x: f64, x0: f64, f0: f64, x1: f64, f1: f64, x2: f64, f2: f64) -> f64 {
    f0 * (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + f1 * (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2))
        + f2 * (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1))
}

/// First derivative of sampled values at every grid point.
///
/// Needs at least three points. Interior points use the centered
/// three-point stencil; the first and last points use the one-sided
/// stencil over their nearest three neighbors.
///
/// ```
/// use fracderiv_core::numerics::{finite_difference_first, Grid};
/// let grid = Grid::uniform(0.0, 1.0, 11).unwrap();
/// let xs: Vec<f64> = grid.points().iter().map(|&t| t * t).collect();
/// let d = finite_difference_first(&grid, &xs).unwrap();
/// for (t, dx) in grid.points().iter().zip(&d) {
///     assert!((dx - 2.0 * t).abs() < 1e-12);
/// }
/// ```
pub fn finite_difference_first(grid: &Grid, values: &[f64]) -> Result<Vec<f64>, Error> {
    let ts = grid.points();
    if ts.len() < 3 {
        return Err(Error::Domain(format!(
            "three-point differentiation needs at least 3 points, got {}",
            ts.len()
        )));
    }
    if values.len() != ts.len() {
        return Err(Error::Domain(format!(
            "got {} values for {} grid points",
            values.len(),
            ts.len()
        )));
    }
    let n = ts.len();
    let mut out = Vec::with_capacity(n);
    out.push(lagrange3_deriv(
        ts[0], ts[0], values[0], ts[1], values[1], ts[2], values[2],
    ));
    for i in 1..n - 1 {
        out.push(lagrange3_deriv(
            ts[i],
            ts[i - 1],
            values[i - 1],
            ts[i],
            values[i],
            ts[i + 1],
            values[i + 1],
        ));
    }
    out.push(lagrange3_deriv(
        ts[n - 1],
        ts[n - 3],
        values[n - 3],
        ts[n - 2],
        values[n - 2],
        ts[n - 1],
        values[n - 1],
    ));
    Ok(out)
}
