//! Zero-energy edge modes on open chains.
//!
//! With all even sites (one-based) empty, stationarity at `μ = 0` reduces to
//! the odd-site recursion `(J + γ|Ψ_a|²)Ψ_a = (−J + γ*|Ψ_b|²)Ψ_b` between
//! consecutive odd sites `a` and `b = a + 2`. For `γ_R ≤ 0` the recursion is
//! seeded on the left edge and produces non-increasing moduli; for `γ_R > 0`
//! it is seeded on the right edge and run backwards.
//!
//! Rescaling a solution breaks it, so the unit norm is reached by solving for
//! the seed amplitude instead.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{rhs, Boundary, LatticeState, ModelParams, C64};
use crate::optimize::brent_root;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModeProfile {
    pub state: LatticeState,
    /// `‖F(Ψ)‖`, the stationarity residual at `μ = 0`.
    pub residual: f64,
    pub localization_ratio: f64,
    /// Modulus of the seed site after normalization.
    pub seed: f64,
    /// True when the recursion was seeded on the right edge.
    pub mirrored: bool,
}

fn seeded_from_right(params: &ModelParams) -> bool {
    params.gamma().re > 0.0
}

/// Smallest positive root `x = |Ψ_b|²` of `x·|s + g·x|² = target`, where the
/// left-hand side is `|s + g·x|²·x` written as a cubic in `x`.
fn smallest_root(s: f64, g: C64, target: f64, upper: f64, site: usize) -> Result<f64> {
    // x(s² + 2s·g_R·x + |g|²x²) − target
    let (c1, c2, c3) = (s * s, 2.0 * s * g.re, g.norm_sqr());
    let f = |x: f64| x * (c1 + x * (c2 + x * c3)) - target;
    if target == 0.0 {
        return Ok(0.0);
    }
    // split [0, upper] at the critical points of the cubic so that the first
    // sign change is the smallest root
    let mut knots = vec![0.0];
    let (qa, qb, qc) = (3.0 * c3, 2.0 * c2, c1);
    if qa > 0.0 {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let r = disc.sqrt();
            let mut crit = [(-qb - r) / (2.0 * qa), (-qb + r) / (2.0 * qa)];
            crit.sort_by(f64::total_cmp);
            knots.extend(crit.into_iter().filter(|x| *x > 0.0 && *x < upper));
        }
    }
    let slack = upper * (1.0 + 1e-12);
    knots.push(slack);
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if f(a) <= 0.0 && f(b) >= 0.0 {
            let x = brent_root(f, a, b, 1e-15)?;
            return Ok(x.min(upper));
        }
    }
    Err(Error::RootSelection { site })
}

/// Runs the recursion from a seed of modulus `seed`. Returns one-based odd
/// sites in chain order; `Ok(None)` never occurs, failures are errors.
fn recursion(params: &ModelParams, len: usize, seed: f64) -> Result<Vec<C64>> {
    if len % 2 == 0 {
        return Err(Error::EvenZeroMode(len));
    }
    let hop = params.hopping();
    let g = params.gamma();
    let reverse = seeded_from_right(params);
    let count = len.div_ceil(2);
    let mut odd = Vec::with_capacity(count);
    let mut a = C64::new(seed, 0.0);
    odd.push(a);
    for i in 1..count {
        let na = a.norm_sqr();
        let (c, s, gb) = if reverse {
            // (J + γ|b|²) b = (−J + γ*|a|²) a, solve for the left site b
            ((-hop + g.conj() * na) * a, hop, g)
        } else {
            // (−J + γ*|b|²) b = (J + γ|a|²) a, solve for the right site b
            ((hop + g * na) * a, -hop, g.conj())
        };
        let site = if reverse { len - 2 * i } else { 2 * i + 1 };
        let nb = smallest_root(s, gb, c.norm_sqr(), na, site)?;
        let coeff = s + gb * nb;
        let b = if coeff.norm() == 0.0 {
            if c.norm() == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                return Err(Error::RootSelection { site });
            }
        } else {
            c / coeff
        };
        odd.push(b);
        a = b;
    }
    if reverse {
        odd.reverse();
    }
    Ok(odd)
}

fn assemble(len: usize, odd: &[C64]) -> Vec<C64> {
    let mut amps = vec![C64::new(0.0, 0.0); len];
    for (i, v) in odd.iter().enumerate() {
        amps[2 * i] = *v;
    }
    amps
}

/// Unnormalized profile grown from a seed of the given modulus.
pub fn zero_mode_from_seed(params: &ModelParams, len: usize, seed: f64) -> Result<LatticeState> {
    if !(seed > 0.0) {
        return Err(Error::InvalidParameter(format!("seed modulus must be positive, got {seed}")));
    }
    let odd = recursion(params, len, seed)?;
    LatticeState::new(assemble(len, &odd), Boundary::Open)
}

/// Unit-norm zero mode on an open chain of odd length.
pub fn build_zero_mode(params: &ModelParams, len: usize) -> Result<ZeroModeProfile> {
    if len % 2 == 0 {
        return Err(Error::EvenZeroMode(len));
    }
    if len < 3 {
        return Err(Error::TooFewSites(len));
    }
    let total = |s: f64| -> Result<f64> { Ok(recursion(params, len, s)?.iter().map(|z| z.norm_sqr()).sum()) };
    // the seed alone carries s², so a seed of 1 never undershoots
    let at_one = total(1.0)?;
    let seed = if (at_one - 1.0).abs() <= 1e-15 {
        1.0
    } else {
        let lo = (1.0 / len as f64).sqrt() * 0.5;
        let err = std::cell::Cell::new(None);
        let f = |s: f64| match total(s) {
            Ok(t) => t - 1.0,
            Err(e) => {
                err.set(Some(e));
                f64::NAN
            }
        };
        let root = brent_root(f, lo, 1.0, 1e-15);
        if let Some(e) = err.take() {
            return Err(e);
        }
        root?
    };
    let odd = recursion(params, len, seed)?;
    let state = LatticeState::new(assemble(len, &odd), Boundary::Open)?;
    let residual = rhs(&state, params).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mirrored = seeded_from_right(params);
    let mut profile = ZeroModeProfile { state, residual, localization_ratio: 0.0, seed, mirrored };
    profile.localization_ratio = localization_ratio(&profile);
    Ok(profile)
}

/// `|Ψ₃|²/|Ψ₁|²`, or the mirrored `|Ψ_{L−2}|²/|Ψ_L|²` for right-seeded modes.
pub fn localization_ratio(profile: &ZeroModeProfile) -> f64 {
    let n = profile.state.densities();
    let len = n.len();
    if profile.mirrored || n[0] == 0.0 {
        n[len - 3] / n[len - 1]
    } else {
        n[2] / n[0]
    }
}

/// The one-site zero mode, exact at `γ = −J` on any open chain.
pub fn singleton(len: usize) -> Result<LatticeState> {
    LatticeState::single_site(len, 0, Boundary::Open)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroModeScanRow {
    pub gamma: C64,
    pub localization_ratio: Option<f64>,
    pub residual: Option<f64>,
    pub error: Option<String>,
}

/// Builds the zero mode at every grid point. Rows follow grid order.
pub fn gamma_plane_scan(grid: &[C64], hopping: f64, len: usize) -> Result<Vec<ZeroModeScanRow>> {
    if len % 2 == 0 {
        return Err(Error::EvenZeroMode(len));
    }
    Ok(grid
        .par_iter()
        .map(|&gamma| {
            let res = ModelParams::new(hopping, gamma).and_then(|p| build_zero_mode(&p, len));
            match res {
                Ok(p) => ZeroModeScanRow {
                    gamma,
                    localization_ratio: Some(p.localization_ratio),
                    residual: Some(p.residual),
                    error: None,
                },
                Err(e) => ZeroModeScanRow { gamma, localization_ratio: None, residual: None, error: Some(e.to_string()) },
            }
        })
        .collect())
}
