//! Thin wrappers over `argmin` for the scalar and low-dimensional problems
//! that appear in the solvers.

use argmin::core::{CostFunction, Executor, State, TerminationReason};
use argmin::solver::brent::BrentRoot;
use argmin::solver::neldermead::NelderMead;

use crate::error::{Error, Result};

struct Closure<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Closure<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok((self.0)(p))
    }
}

struct Scalar<F>(F);

impl<F: Fn(f64) -> f64> CostFunction for Scalar<F> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok((self.0)(*x))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

fn argmin_error(e: argmin::core::Error) -> Error {
    Error::InvalidParameter(format!("optimizer setup failed: {e}"))
}

/// Nelder–Mead from `start` with an axis-aligned initial simplex of edge `scale`.
pub(crate) fn nelder_mead<F>(f: F, start: &[f64], scale: f64, max_iters: u64) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut v = start.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-15)
        .map_err(argmin_error)?;
    let res = Executor::new(Closure(f), solver)
        .configure(|s| s.max_iters(max_iters))
        .run()
        .map_err(argmin_error)?;
    let state = res.state();
    let x = state
        .get_best_param()
        .cloned()
        .unwrap_or_else(|| start.to_vec());
    Ok(Minimum {
        x,
        value: state.get_best_cost(),
        converged: state.get_termination_reason() == Some(&TerminationReason::SolverConverged),
    })
}

/// Root of `f` on `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
pub(crate) fn brent_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::BracketFailure { lo, hi });
    }
    let res = Executor::new(Scalar(f), BrentRoot::new(lo, hi, tol))
        .configure(|s| s.param(0.5 * (lo + hi)).max_iters(200))
        .run()
        .map_err(argmin_error)?;
    res.state()
        .get_best_param()
        .copied()
        .ok_or(Error::BracketFailure { lo, hi })
}

/// Bisection on a boolean predicate that is false at `lo` and true at `hi`.
/// Returns the midpoint of the final bracket.
pub(crate) fn bisect_predicate<P>(mut pred: P, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    P: FnMut(f64) -> Result<bool>,
{
    if pred(lo)? || !pred(hi)? {
        return Err(Error::BracketFailure { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if pred(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_minimum() {
        let f = |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let m = nelder_mead(f, &[-1.0, 1.0], 0.5, 5000).unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn cube_root_of_two() {
        let r = brent_root(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn bracket_failures() {
        assert!(matches!(brent_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12), Err(Error::BracketFailure { .. })));
        assert!(matches!(bisect_predicate(|_| Ok(true), 0.0, 1.0, 1e-3), Err(Error::BracketFailure { .. })));
    }

    #[test]
    fn predicate_bisection() {
        let x = bisect_predicate(|x| Ok(x > 0.3), 0.0, 1.0, 1e-6).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
    }
}
