//! Linear stability of plane-wave condensates and numeric linearization around
//! arbitrary stationary states.
//!
//! Density convention: the main-text formulas use a unit-norm field, so the
//! condensate density entering the arbitrary-`k` spectrum is `n_k = 1/L` times
//! the weight carried by mode `k`. With that bridge the `k = 0` case of
//! [`dispersion_arbitrary_k`] reproduces [`dispersion_k0`] exactly.

use nalgebra::{DMatrix, Matrix2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{search_candidates, FlowDirection, IntegratorConfig};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, ModelParams, StationaryState, C64};
use crate::stationary::{
    classify, solve_self_consistent, three_site_optimize, SelfConsistentConfig, StateClass, StateKind,
};

/// Tolerance on `ε²` below which a mode still counts as stable.
pub const EPS_SQUARED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovResult {
    pub k: f64,
    pub p: f64,
    pub eps_squared: f64,
    pub stable: bool,
    pub n_k: f64,
}

impl BogoliubovResult {
    fn new(k: f64, p: f64, eps_squared: f64, n_k: f64) -> Self {
        Self { k, p, eps_squared, stable: eps_squared >= -EPS_SQUARED_TOL, n_k }
    }

    /// `ε` as a complex number: real for stable modes, imaginary otherwise.
    pub fn eps(&self) -> C64 {
        C64::new(self.eps_squared, 0.0).sqrt()
    }

    /// Exponential growth rate `|Im ε|`.
    pub fn growth_rate(&self) -> f64 {
        if self.eps_squared < 0.0 {
            (-self.eps_squared).sqrt()
        } else {
            0.0
        }
    }
}

/// `ε(p)² = [2J(1 − cos p)]²(1 − 4γ_I²/(J²L²))` around the `k = 0` condensate.
pub fn dispersion_k0(p: f64, params: &ModelParams, len: usize) -> BogoliubovResult {
    let j = params.hopping();
    let gi = params.gamma().im;
    let l = len as f64;
    let free = 2.0 * j * (1.0 - p.cos());
    let eps_squared = free * free * (1.0 - 4.0 * gi * gi / (j * j * l * l));
    BogoliubovResult::new(0.0, p, eps_squared, 1.0 / l)
}

/// `γ_k = γ_R sin k − γ_I cos k`
pub fn gamma_k(k: f64, params: &ModelParams) -> f64 {
    let g = params.gamma();
    g.re * k.sin() - g.im * k.cos()
}

/// `ε(p)² = 4J²(cos p − cos k)² − 16 n_k² γ_k² (cos p − 1)²`
pub fn dispersion_arbitrary_k(k: f64, p: f64, n_k: f64, params: &ModelParams) -> BogoliubovResult {
    let j = params.hopping();
    let gk = gamma_k(k, params);
    let a = p.cos() - k.cos();
    let b = p.cos() - 1.0;
    let eps_squared = 4.0 * j * j * a * a - 16.0 * n_k * n_k * gk * gk * b * b;
    BogoliubovResult::new(k, p, eps_squared, n_k)
}

/// Condensate momentum with `tan k = γ_I/γ_R`, where `γ_k` vanishes.
pub fn stable_condensate_momentum(params: &ModelParams) -> f64 {
    let g = params.gamma();
    g.im.atan2(g.re)
}

/// Linearized evolution matrix of `(δΨ_p, δΨ*_{−p})` around `k = 0`:
/// `[[a, b], [b, −a]]` with `a = 2J(1 − cos p)` and `b = (4iγ_I/L)(cos p − 1)`.
pub fn perturbation_matrix_k0(p: f64, params: &ModelParams, len: usize) -> Matrix2<C64> {
    let a = C64::new(2.0 * params.hopping() * (1.0 - p.cos()), 0.0);
    let b = C64::new(0.0, 4.0 * params.gamma().im / len as f64 * (p.cos() - 1.0));
    Matrix2::new(a, b, b, -a)
}

/// Eigenvalues `±√(a² + b²)` of [`perturbation_matrix_k0`].
pub fn perturbation_eigenvalues(m: &Matrix2<C64>) -> [C64; 2] {
    let half_trace = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (half_trace * half_trace - det).sqrt();
    [half_trace + disc, half_trace - disc]
}

/// Smallest `γ_I` at which the `k = 0` condensate turns unstable: `JL/2`.
pub fn instability_threshold(hopping: f64, len: usize) -> f64 {
    0.5 * hopping * len as f64
}

/// Whether the `k = 0` condensate is linearly stable on every grid momentum.
pub fn condensate_stable_k0(params: &ModelParams, len: usize) -> bool {
    crate::lattice::momentum_grid(len)
        .into_iter()
        .filter(|p| p.abs() > 0.0)
        .all(|p| dispersion_k0(p, params, len).stable)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSpectrum {
    /// Frequencies `ω` of perturbations `∝ e^{−iωt}`, `2L` of them.
    pub frequencies: Vec<C64>,
    /// Largest `|Im ω|` outside the symmetry zero modes.
    pub max_growth_rate: f64,
    pub unstable: bool,
}

/// `P = ∂F/∂Ψ` and `Q = ∂F/∂Ψ*` of the equation-of-motion right-hand side.
pub fn rhs_jacobian(amps: &[C64], boundary: Boundary, params: &ModelParams) -> (DMatrix<C64>, DMatrix<C64>) {
    let len = amps.len();
    let (hop, g) = (params.hopping(), params.gamma());
    let gc = g.conj();
    let mut p = DMatrix::<C64>::zeros(len, len);
    let mut q = DMatrix::<C64>::zeros(len, len);
    for j in 0..len {
        let (left, right) = match boundary {
            Boundary::Periodic => (Some((j + len - 1) % len), Some((j + 1) % len)),
            Boundary::Open => ((j > 0).then(|| j - 1), (j + 1 < len).then_some(j + 1)),
        };
        let psi = amps[j];
        let n = psi.norm_sqr();
        if let Some(l) = left {
            let pl = amps[l];
            let nl = pl.norm_sqr();
            // {−J + γ(2n_j − n_l)}Ψ_l + γ*Ψ_j²Ψ*_l
            p[(j, l)] += g * (2.0 * n - nl) - hop - g * nl;
            q[(j, l)] += -g * pl * pl + gc * psi * psi;
            p[(j, j)] += 2.0 * g * psi.conj() * pl + 2.0 * gc * psi * pl.conj();
            q[(j, j)] += 2.0 * g * psi * pl;
        }
        if let Some(r) = right {
            let pr = amps[r];
            let nr = pr.norm_sqr();
            // {−J − γ*(2n_j − n_r)}Ψ_r − γΨ_j²Ψ*_r
            p[(j, r)] += -hop - gc * (2.0 * n - nr) + gc * nr;
            q[(j, r)] += gc * pr * pr - g * psi * psi;
            p[(j, j)] += -2.0 * gc * psi.conj() * pr - 2.0 * g * psi * pr.conj();
            q[(j, j)] += -2.0 * gc * psi * pr;
        }
    }
    (p, q)
}

/// Real `2L×2L` matrix of the linear map `δ ↦ −i[(P − μ)δ + Qδ*]` acting on
/// `(Re δ, Im δ)`.
pub fn linearization_matrix(state: &StationaryState, params: &ModelParams) -> DMatrix<f64> {
    let amps = state.state.amplitudes();
    let len = amps.len();
    let (mut p, q) = rhs_jacobian(amps, state.state.boundary(), params);
    for j in 0..len {
        p[(j, j)] -= state.mu;
    }
    // δ ↦ Pδ + Qδ*, realified
    let mut a = DMatrix::<f64>::zeros(2 * len, 2 * len);
    for r in 0..len {
        for c in 0..len {
            let (s, d) = (p[(r, c)] + q[(r, c)], p[(r, c)] - q[(r, c)]);
            a[(r, c)] = s.re;
            a[(r, len + c)] = -d.im;
            a[(len + r, c)] = s.im;
            a[(len + r, len + c)] = d.re;
        }
    }
    // multiply by −i: (x, y) ↦ (y, −x)
    let mut m = DMatrix::<f64>::zeros(2 * len, 2 * len);
    for c in 0..2 * len {
        for r in 0..len {
            m[(r, c)] = a[(len + r, c)];
            m[(len + r, c)] = -a[(r, c)];
        }
    }
    m
}

/// Residual a state must satisfy before it can be linearized.
pub const LINEARIZATION_RESIDUAL: f64 = 1e-8;

/// Spectrum of the linearized dynamics around a stationary state.
///
/// Eigenvalues `λ` of the real Jacobian give frequencies `ω = iλ`. Modes with
/// `|ω|` below `1e−6` of the spectral scale belong to the phase and norm
/// symmetries and are left out of the stability verdict.
pub fn numeric_linearization(state: &StationaryState, params: &ModelParams) -> Result<LinearSpectrum> {
    if !(state.residual < LINEARIZATION_RESIDUAL) {
        return Err(Error::ResidualTooLarge { residual: state.residual, limit: LINEARIZATION_RESIDUAL });
    }
    let m = linearization_matrix(state, params);
    let scale = m.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);
    let lambdas = m.complex_eigenvalues();
    let frequencies: Vec<C64> = lambdas.iter().map(|l| C64::new(0.0, 1.0) * l).collect();
    let zero_cut = 1e-6 * scale;
    let max_growth_rate = frequencies
        .iter()
        .filter(|w| w.norm() > zero_cut)
        .map(|w| w.im.abs())
        .fold(0.0, f64::max);
    Ok(LinearSpectrum { frequencies, max_growth_rate, unstable: max_growth_rate > 1e-8 * scale })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub gamma: C64,
    pub ground_class: Option<StateClass>,
    pub e_ground: Option<f64>,
    /// Lowest converged plane-wave candidate among the restarts.
    pub e_plane_wave: Option<f64>,
    /// Lowest converged soliton candidate among the restarts.
    pub e_soliton_candidate: Option<f64>,
    pub condensate_stable: bool,
    pub soliton_exists: bool,
    /// Energy of the soliton seeded from the three-site ansatz, when found.
    pub e_soliton: Option<f64>,
    pub error: Option<String>,
}

impl SweepRecord {
    pub fn ground_kind(&self) -> Option<StateKind> {
        self.ground_class.map(|c| c.kind)
    }
}

fn sweep_point(gamma: C64, hopping: f64, len: usize, cfg: &IntegratorConfig, restarts: usize) -> SweepRecord {
    let mut rec = SweepRecord {
        gamma,
        ground_class: None,
        e_ground: None,
        e_plane_wave: None,
        e_soliton_candidate: None,
        condensate_stable: false,
        soliton_exists: false,
        e_soliton: None,
        error: None,
    };
    let params = match ModelParams::new(hopping, gamma) {
        Ok(p) => p,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.condensate_stable = condensate_stable_k0(&params, len);

    let mut errors = Vec::new();
    match search_candidates(&params, len, Boundary::Periodic, cfg, restarts, FlowDirection::Descent) {
        Ok(cands) => {
            let converged: Vec<_> = cands.iter().filter(|c| c.converged).collect();
            let lowest = |kind: StateKind| {
                converged
                    .iter()
                    .filter(|c| classify(&c.state).kind == kind)
                    .map(|c| c.energy)
                    .min_by(f64::total_cmp)
            };
            rec.e_plane_wave = lowest(StateKind::PlaneWave);
            rec.e_soliton_candidate = lowest(StateKind::Soliton);
            if let Some(best) = converged.iter().min_by(|a, b| a.energy.total_cmp(&b.energy)) {
                rec.e_ground = Some(best.energy);
                rec.ground_class = Some(classify(&best.state));
            } else {
                errors.push("no restart converged".to_string());
            }
        }
        Err(e) => errors.push(e.to_string()),
    }

    let soliton = (|| -> Result<StationaryState> {
        let opt = three_site_optimize(&params)?;
        let init = opt.argmin.embed(len, len.div_ceil(2) - 1, Boundary::Periodic)?;
        solve_self_consistent(&params, &init, &SelfConsistentConfig::default())
    })();
    match soliton {
        Ok(s) => {
            if s.converged && classify(&s.state).kind == StateKind::Soliton {
                rec.soliton_exists = true;
                rec.e_soliton = Some(s.energy);
            }
        }
        Err(e) => errors.push(e.to_string()),
    }
    if !errors.is_empty() {
        rec.error = Some(errors.join("; "));
    }
    rec
}

/// Phase-diagram sweep over complex couplings. Points run concurrently and
/// come back in grid order; per-point failures are stored in the record.
pub fn phase_diagram_sweep(
    grid: &[C64],
    hopping: f64,
    len: usize,
    cfg: &IntegratorConfig,
    restarts: usize,
) -> Result<Vec<SweepRecord>> {
    if grid.iter().any(|g| !g.re.is_finite() || !g.im.is_finite()) {
        return Err(Error::InvalidParameter("sweep grid must be finite".into()));
    }
    ModelParams::new(hopping, C64::new(0.0, 0.0))?;
    Ok(grid.par_iter().map(|g| sweep_point(*g, hopping, len, cfg, restarts)).collect())
}
