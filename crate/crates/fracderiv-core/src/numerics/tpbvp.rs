//! Linear two-point boundary value problems by the shooting method with
//! superposition: one particular trajectory plus one homogeneous basis
//! trajectory per free left value, combined through a small linear solve
//! against the right-end conditions.

use crate::numerics::rk::{solve_ivp, OdeSystem, Trajectory};
use crate::Error;
use alloc::boxed::Box;
use alloc::format;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::float::FloatExt;

/// Boundary value problem for a system linear in the state:
/// `dy/dt = L(t) y + q(t)`, expressed through a single callable, with some
/// components fixed at the left end and the rest pinned down by conditions
/// at the right end.
pub struct TpbvpLinear<'a> {
    pub dim: usize,
    /// Right-hand side; must be affine in the state for the superposition
    /// construction to be valid. The lifetime lets it borrow caller data;
    /// the returned solution owns only plain numbers.
    pub rhs: Rc<dyn Fn(f64, &[f64], &mut [f64]) + 'a>,
    /// `(component index, value)` pairs imposed at `t = a`.
    pub left_fixed: Vec<(usize, f64)>,
    /// `(component index, value)` pairs imposed at `t = b`.
    pub right_fixed: Vec<(usize, f64)>,
}

/// Dense solution of a [`TpbvpLinear`]: the particular trajectory plus the
/// weighted homogeneous basis.
pub struct TpbvpSolution {
    dim: usize,
    particular: Trajectory,
    basis: Vec<Trajectory>,
    weights: Vec<f64>,
}

impl TpbvpSolution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_start(&self) -> f64 {
        self.particular.t_start()
    }

    pub fn t_end(&self) -> f64 {
        self.particular.t_end()
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        self.particular.eval_into(t, out);
        let mut tmp = vec![0.0; self.dim];
        for (traj, w) in self.basis.iter().zip(&self.weights) {
            traj.eval_into(t, &mut tmp);
            for i in 0..self.dim {
                out[i] += w * tmp[i];
            }
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval_component(&self, t: f64, idx: usize) -> f64 {
        let mut v = self.particular.eval_component(t, idx);
        for (traj, w) in self.basis.iter().zip(&self.weights) {
            v += w * traj.eval_component(t, idx);
        }
        v
    }

    /// Interpolant time derivative; superposition preserves it because the
    /// basis trajectories carry the homogeneous part of the dynamics.
    pub fn derivative_into(&self, t: f64, out: &mut [f64]) {
        self.particular.derivative_into(t, out);
        let mut tmp = vec![0.0; self.dim];
        for (traj, w) in self.basis.iter().zip(&self.weights) {
            traj.derivative_into(t, &mut tmp);
            for i in 0..self.dim {
                out[i] += w * tmp[i];
            }
        }
    }
}

/// Gaussian elimination with partial pivoting; `a` is row-major `n x n`.
fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Result<Vec<f64>, Error> {
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if !(best > 0.0) || !best.is_finite() {
            return Err(Error::IllPosed(format!(
                "shooting matrix is singular at column {col}"
            )));
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / d;
            if factor != 0.0 {
                for k in col..n {
                    a[row * n + k] -= factor * a[col * n + k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    Ok(x)
}

/// Solves the boundary value problem on `[a, b]` by linear shooting.
///
/// `tol` bounds the right-end boundary residual; internal integrations run
/// two orders tighter. Coefficients of the system may be singular at the
/// original left endpoint as long as the caller places `a` strictly inside
/// the coefficients' domain (the usual start-offset convention).
///
/// The count of left plus right conditions must equal the dimension, and a
/// homogeneous basis that cannot influence the right-end conditions is
/// reported as ill-posed.
pub fn solve_tpbvp_linear(
    problem: &TpbvpLinear<'_>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<TpbvpSolution, Error> {
    let dim = problem.dim;
    if !(b > a) {
        return Err(Error::Domain(format!(
            "interval must satisfy a < b, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if problem.left_fixed.len() + problem.right_fixed.len() != dim {
        return Err(Error::Domain(format!(
            "{} left and {} right conditions do not determine a dimension-{dim} state",
            problem.left_fixed.len(),
            problem.right_fixed.len()
        )));
    }
    let mut seen = vec![false; dim];
    for &(idx, _) in &problem.left_fixed {
        if idx >= dim || seen[idx] {
            return Err(Error::Domain(format!(
                "left condition index {idx} is out of range or repeated"
            )));
        }
        seen[idx] = true;
    }
    for &(idx, _) in &problem.right_fixed {
        if idx >= dim {
            return Err(Error::Domain(format!(
                "right condition index {idx} is out of range"
            )));
        }
    }
    let free: Vec<usize> = (0..dim).filter(|i| !seen[*i]).collect();
    let m = free.len();

    let rel = (tol * 1e-2).clamp(1e-13, 1e-3);
    let abs = rel * 1e-2;

    // Particular trajectory: fixed left values, zero free values, full rhs.
    let mut y0 = vec![0.0; dim];
    for &(idx, val) in &problem.left_fixed {
        y0[idx] = val;
    }
    let rhs = Rc::clone(&problem.rhs);
    let particular = solve_ivp(
        &OdeSystem::new(
            a,
            y0,
            Box::new(move |t, y, out| rhs(t, y, out)),
        ),
        b,
        rel,
        abs,
    )?;

    // Homogeneous basis: unit vector on each free component, forcing
    // removed by subtracting the rhs at the zero state.
    let mut basis = Vec::with_capacity(m);
    for &j in &free {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        let rhs = Rc::clone(&problem.rhs);
        let hom = Box::new(move |t: f64, y: &[f64], out: &mut [f64]| {
            let dim = y.len();
            let mut at_zero = vec![0.0; dim];
            let zero = vec![0.0; dim];
            rhs(t, y, out);
            rhs(t, &zero, &mut at_zero);
            for i in 0..dim {
                out[i] -= at_zero[i];
            }
        });
        basis.push(solve_ivp(&OdeSystem::new(a, e, hom), b, rel, abs)?);
    }

    // Right-end conditions give an m x m system for the basis weights.
    let mut mat = vec![0.0; m * m];
    let mut rhs_vec = vec![0.0; m];
    for (row, &(idx, val)) in problem.right_fixed.iter().enumerate() {
        for (col, traj) in basis.iter().enumerate() {
            mat[row * m + col] = traj.end_state()[idx];
        }
        rhs_vec[row] = val - particular.end_state()[idx];
    }
    let weights = solve_dense(mat, rhs_vec, m)?;

    let solution = TpbvpSolution {
        dim,
        particular,
        basis,
        weights,
    };
    for &(idx, val) in &problem.right_fixed {
        let got = solution.eval_component(b, idx);
        let scale = 1.0 + val.abs();
        if !((got - val).abs() <= tol * scale) {
            return Err(Error::Accuracy(format!(
                "right boundary residual {:e} on component {idx} exceeds {tol:e}",
                (got - val).abs()
            )));
        }
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// x'' = 0 as a first-order system; x(0) = 0, x(1) = 1 gives x(t) = t.
    fn straight_line_problem() -> TpbvpLinear<'static> {
        TpbvpLinear {
            dim: 2,
            rhs: Rc::new(|_, y, out| {
                out[0] = y[1];
                out[1] = 0.0;
            }),
            left_fixed: vec![(0, 0.0)],
            right_fixed: vec![(0, 1.0)],
        }
    }

    #[test]
    fn straight_line_is_recovered() {
        let sol = solve_tpbvp_linear(&straight_line_problem(), 0.0, 1.0, 1e-8).unwrap();
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!((sol.eval_component(t, 0) - t).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn sine_solution_of_oscillator() {
        // x'' = -x with x(0) = 0, x(pi/2) = 1 gives x = sin t.
        let p = TpbvpLinear {
            dim: 2,
            rhs: Rc::new(|_, y, out| {
                out[0] = y[1];
                out[1] = -y[0];
            }),
            left_fixed: vec![(0, 0.0)],
            right_fixed: vec![(0, 1.0)],
        };
        let half_pi = core::f64::consts::FRAC_PI_2;
        let sol = solve_tpbvp_linear(&p, 0.0, half_pi, 1e-8).unwrap();
        for k in 0..=20 {
            let t = half_pi * k as f64 / 20.0;
            assert!((sol.eval_component(t, 0) - t.sin()).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn both_boundary_residuals_and_defect_are_small() {
        let p = TpbvpLinear {
            dim: 2,
            rhs: Rc::new(|t: f64, y: &[f64], out: &mut [f64]| {
                out[0] = y[1];
                out[1] = -y[0] + t;
            }),
            left_fixed: vec![(0, 0.5)],
            right_fixed: vec![(0, -0.25)],
        };
        let tol = 1e-8;
        let sol = solve_tpbvp_linear(&p, 0.0, 2.0, tol).unwrap();
        assert!((sol.eval_component(0.0, 0) - 0.5).abs() <= tol);
        assert!((sol.eval_component(2.0, 0) + 0.25).abs() <= tol * 1.25);
        // Defect of the interpolant against the dynamics at probe points.
        let mut dy = vec![0.0; 2];
        let mut want = vec![0.0; 2];
        for k in 0..100 {
            let t = 2.0 * (k as f64 + 0.5) / 100.0;
            sol.derivative_into(t, &mut dy);
            let y = sol.eval(t);
            (p.rhs)(t, &y, &mut want);
            for i in 0..2 {
                assert!(
                    (dy[i] - want[i]).abs() <= 10.0 * tol,
                    "defect {:e} at t = {t}, component {i}",
                    (dy[i] - want[i]).abs()
                );
            }
        }
    }

    #[test]
    fn unreachable_right_condition_is_ill_posed() {
        // Second component never couples into the first, so fixing the
        // first at both ends leaves the free value undetermined.
        let p = TpbvpLinear {
            dim: 2,
            rhs: Rc::new(|_, _, out| {
                out[0] = 0.0;
                out[1] = 0.0;
            }),
            left_fixed: vec![(0, 0.0)],
            right_fixed: vec![(0, 0.0)],
        };
        assert!(matches!(
            solve_tpbvp_linear(&p, 0.0, 1.0, 1e-8),
            Err(Error::IllPosed(_))
        ));
    }

    #[test]
    fn rejects_miscounted_conditions() {
        let mut p = straight_line_problem();
        p.right_fixed.push((1, 0.0));
        assert!(matches!(
            solve_tpbvp_linear(&p, 0.0, 1.0, 1e-8),
            Err(Error::Domain(_))
        ));
    }
}
