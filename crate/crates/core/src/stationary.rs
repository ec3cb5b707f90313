//! Stationary states beyond brute propagation: chiral partner, self-consistent
//! eigensolver, three-site variational ansatz, classification, critical
//! couplings and soliton-branch continuation.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::dynamics::{canonicalize, find_ground_state, IntegratorConfig};
use crate::error::{Error, Result};
use crate::lattice::{
    energy_raw, frozen_operator, inner, norm_sqr, stationary_residual, Boundary, LatticeState,
    ModelParams, StationaryState, C64,
};
use crate::optimize::{bisect_predicate, nelder_mead};

/// `Ψ_j ↦ (−1)^j Ψ_j`.
///
/// Maps a stationary state `(μ, E)` to one with `(−μ, −E)` on open chains and
/// on even periodic rings. On odd rings the sign flip is discontinuous across
/// the seam and the image is in general not stationary.
pub fn chiral_transform(state: &LatticeState) -> LatticeState {
    let amps = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, a)| if j % 2 == 0 { *a } else { -a })
        .collect();
    LatticeState::new(amps, state.boundary()).expect("length preserved")
}

/// Whether the chiral transform is an exact symmetry for this geometry.
pub fn chiral_symmetry_exact(len: usize, boundary: Boundary) -> bool {
    boundary == Boundary::Open || len % 2 == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfConsistentConfig {
    /// Mixing factor `η` in `(0, 1]`.
    pub mixing: f64,
    /// Convergence threshold on the change of `μ` between iterations.
    pub tol: f64,
    /// Residual `‖F − μΨ‖` required in addition to a settled `μ`.
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for SelfConsistentConfig {
    fn default() -> Self {
        Self { mixing: 0.5, tol: 1e-12, residual_tol: 1e-9, max_iter: 5000 }
    }
}

impl SelfConsistentConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

const OSCILLATION_WINDOW: usize = 50;
const MIN_MIXING: f64 = 1.0 / 256.0;

/// Damped fixed-point iteration on the frozen-density operator `M(Ψ)`.
///
/// Each iteration diagonalizes `M(Ψ)`, picks the eigenvector with the largest
/// overlap with `Ψ`, aligns its phase and mixes it in with weight `η`. The
/// mixing is halved whenever `μ` keeps flipping direction over a window of
/// iterations.
pub fn solve_self_consistent(
    params: &ModelParams,
    init: &LatticeState,
    cfg: &SelfConsistentConfig,
) -> Result<StationaryState> {
    init.check_normalized()?;
    if !(cfg.mixing > 0.0 && cfg.mixing <= 1.0) {
        return Err(Error::InvalidParameter(format!("mixing must lie in (0, 1], got {}", cfg.mixing)));
    }
    let boundary = init.boundary();
    let len = init.len();
    let mut psi = init.amplitudes().to_vec();
    let mut eta = cfg.mixing;
    let mut mu_prev = f64::NAN;
    let mut last_step = 0.0f64;
    let mut flips: Vec<bool> = Vec::with_capacity(cfg.max_iter);
    let mut converged = false;

    for _ in 0..cfg.max_iter {
        let eig = SymmetricEigen::new(frozen_operator(&psi, boundary, params));
        let (idx, ov) = (0..len)
            .map(|i| (i, inner(eig.eigenvectors.column(i).as_slice(), &psi)))
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("non-empty spectrum");
        let align = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
        let v = eig.eigenvectors.column(idx);
        for (p, vi) in psi.iter_mut().zip(v.iter()) {
            *p = (1.0 - eta) * *p + eta * vi * align;
        }
        let n = norm_sqr(&psi).sqrt();
        psi.iter_mut().for_each(|p| *p /= n);

        let mu = eig.eigenvalues[idx];
        let step = mu - mu_prev;
        mu_prev = mu;
        if step.abs() < cfg.tol && stationary_residual(&psi, boundary, params) < cfg.residual_tol {
            converged = true;
            break;
        }
        if step.is_finite() {
            flips.push(step * last_step < 0.0);
            last_step = step;
        }
        if flips.len() >= OSCILLATION_WINDOW {
            let recent = &flips[flips.len() - OSCILLATION_WINDOW..];
            if recent.iter().filter(|f| **f).count() > OSCILLATION_WINDOW * 4 / 5 {
                if eta <= MIN_MIXING {
                    break;
                }
                eta *= 0.5;
                flips.clear();
            }
        }
    }
    StationaryState::evaluate(LatticeState::new(psi, boundary)?, params, converged)
}

/// Three-site soliton ansatz centred on one site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeSiteAnsatz {
    /// Weight on the central site.
    pub alpha: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
}

impl ThreeSiteAnsatz {
    pub fn new(alpha: f64, phi_plus: f64, phi_minus: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { alpha, phi_plus, phi_minus })
    }

    /// `(Ψ_{n−1}, Ψ_n, Ψ_{n+1})`
    pub fn amplitudes(&self) -> [C64; 3] {
        let side = ((1.0 - self.alpha) / 2.0).max(0.0).sqrt();
        [
            C64::from_polar(side, self.phi_minus),
            C64::new(self.alpha.sqrt(), 0.0),
            C64::from_polar(side, self.phi_plus),
        ]
    }

    /// The ansatz placed on a lattice of `len` sites around `centre`.
    pub fn embed(&self, len: usize, centre: usize, boundary: Boundary) -> Result<LatticeState> {
        if centre >= len || (boundary == Boundary::Open && (centre == 0 || centre + 1 == len)) {
            return Err(Error::InvalidParameter(format!("ansatz centre {centre} does not fit {len} sites")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); len];
        let [l, c, r] = self.amplitudes();
        amps[(centre + len - 1) % len] += l;
        amps[centre] += c;
        amps[(centre + 1) % len] += r;
        LatticeState::new(amps, boundary)
    }
}

/// Energy of the ansatz. Only the two bonds touching the centre are occupied.
pub fn three_site_energy(ansatz: &ThreeSiteAnsatz, params: &ModelParams) -> f64 {
    energy_raw(&ansatz.amplitudes(), Boundary::Open, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeSiteExtrema {
    pub argmin: ThreeSiteAnsatz,
    pub e_min: f64,
    pub argmax: ThreeSiteAnsatz,
    pub e_max: f64,
    /// False if any of the winning local searches hit its iteration cap.
    pub converged: bool,
}

fn fold_phase(x: f64) -> f64 {
    crate::lattice::fold_momentum(x)
}

fn ansatz_from(p: &[f64]) -> ThreeSiteAnsatz {
    // α = sin²u keeps the weight inside [0, 1] without box constraints
    let alpha = p[0].sin().powi(2).max(f64::MIN_POSITIVE);
    ThreeSiteAnsatz { alpha, phi_plus: fold_phase(p[1]), phi_minus: fold_phase(p[2]) }
}

/// Multi-start Nelder–Mead over `(α, φ₊, φ₋)` for the minimum and maximum
/// ansatz energy.
pub fn three_site_optimize(params: &ModelParams) -> Result<ThreeSiteExtrema> {
    let alphas = [0.2f64, 0.5, 0.8];
    let phases = [0.0, 0.5 * PI, PI, -0.5 * PI];
    let mut starts = Vec::new();
    for &a in &alphas {
        for &pp in &phases {
            for &pm in &phases {
                starts.push([a.sqrt().asin(), pp, pm]);
            }
        }
    }
    let search = |sign: f64| -> Result<(ThreeSiteAnsatz, f64, bool)> {
        let cost = |p: &[f64]| sign * three_site_energy(&ansatz_from(p), params);
        let mut best: Option<(Vec<f64>, f64, bool)> = None;
        for s in &starts {
            let m = nelder_mead(cost, s, 0.3, 4000)?;
            // restart once from the optimum to escape simplex collapse
            let m = nelder_mead(cost, &m.x, 0.05, 4000)?;
            if best.as_ref().is_none_or(|b| m.value < b.1) {
                best = Some((m.x, m.value, m.converged));
            }
        }
        let (x, v, ok) = best.expect("at least one start");
        Ok((ansatz_from(&x), sign * v, ok))
    };
    let (argmin, e_min, ok_min) = search(1.0)?;
    let (argmax, e_max, ok_max) = search(-1.0)?;
    Ok(ThreeSiteExtrema { argmin, e_min, argmax, e_max, converged: ok_min && ok_max })
}

/// `|γ|` at which the minimal ansatz energy crosses `−2J`, for `arg γ = phase`.
pub fn three_site_critical_gamma(phase: f64, hopping: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    bisect_predicate(
        |g| {
            let p = ModelParams::polar(hopping, g, phase)?;
            Ok(three_site_optimize(&p)?.e_min < -2.0 * hopping)
        },
        lo,
        hi,
        tol,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    PlaneWave,
    Soliton,
    Other,
}

impl StateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StateKind::PlaneWave => "plane-wave",
            StateKind::Soliton => "soliton",
            StateKind::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateClass {
    pub kind: StateKind,
    /// Largest weight on any three contiguous sites.
    pub three_site_weight: f64,
    /// `1 / Σ n_j²`
    pub participation_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyThresholds {
    /// Three-site weight above which a state is a soliton.
    pub soliton_weight: f64,
    /// Plane wave if `max n_j < peak_factor / L`.
    pub peak_factor: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        Self { soliton_weight: 0.5, peak_factor: 2.0 }
    }
}

pub fn classify(state: &LatticeState) -> StateClass {
    classify_with(state, &ClassifyThresholds::default())
}

pub fn classify_with(state: &LatticeState, th: &ClassifyThresholds) -> StateClass {
    let n = state.densities();
    let len = n.len();
    let windows = match state.boundary() {
        Boundary::Periodic => len,
        Boundary::Open => len - 2,
    };
    let three_site_weight = (0..windows)
        .map(|i| n[i] + n[(i + 1) % len] + n[(i + 2) % len])
        .fold(0.0, f64::max);
    let participation_ratio = 1.0 / n.iter().map(|x| x * x).sum::<f64>();
    let peak = n.iter().copied().fold(0.0, f64::max);
    // flat profiles first: on short chains they also carry three-site weight
    let kind = if peak < th.peak_factor / len as f64 {
        StateKind::PlaneWave
    } else if three_site_weight > th.soliton_weight {
        StateKind::Soliton
    } else {
        StateKind::Other
    };
    StateClass { kind, three_site_weight, participation_ratio }
}

/// Energy margin below `−2J` that counts as a soliton ground state.
pub const TRANSITION_MARGIN: f64 = 1e-6;
/// Default bisection tolerance on `|γ|_c`, in units of `J`.
pub const CRITICAL_GAMMA_TOL: f64 = 1e-3;

/// Bisects `|γ|` in `[lo, hi]` on "ground-state energy below `−2J`".
pub fn critical_gamma(
    phase: f64,
    hopping: f64,
    len: usize,
    cfg: &IntegratorConfig,
    restarts: usize,
    (lo, hi): (f64, f64),
    tol: f64,
) -> Result<f64> {
    bisect_predicate(
        |g| {
            let p = ModelParams::polar(hopping, g, phase)?;
            let s = find_ground_state(&p, len, cfg, restarts)?;
            Ok(s.energy < -2.0 * hopping - TRANSITION_MARGIN)
        },
        lo,
        hi,
        tol,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub gamma_abs: f64,
    pub energy: f64,
    pub mu: f64,
    pub residual: f64,
    pub converged: bool,
    pub class: StateClass,
}

impl BranchPoint {
    pub fn on_branch(&self) -> bool {
        self.converged && self.class.kind == StateKind::Soliton
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchTrace {
    pub phase: f64,
    /// Points in order of decreasing `|γ|`. The last point is the first one
    /// off the branch, if the branch terminated inside the range.
    pub points: Vec<BranchPoint>,
    /// Smallest `|γ|` at which the soliton was still found.
    pub termination: Option<BranchPoint>,
}

/// Continuation grid: `0.01J` steps in `[1.5J, 1.8J]`, `0.05J` elsewhere,
/// descending from `hi` to `lo`.
pub fn default_branch_grid(lo: f64, hi: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut g = hi;
    while g >= lo - 1e-12 {
        grid.push(g);
        let step = if g > 1.5 + 1e-12 && g <= 1.8 + 1e-12 { 0.01 } else { 0.05 };
        // snap onto the fine grid when entering the window
        let next = g - step;
        g = if g > 1.8 + 1e-12 && next < 1.8 - 1e-12 { 1.8 } else { (next * 1e9).round() / 1e9 };
    }
    grid
}

/// Uniform continuation grid of `steps` points from `hi` down to `lo`.
pub fn uniform_branch_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    crate::grid::linspace(hi, lo, steps)
}

const REFINE_HALVINGS: usize = 6;

/// Follows the soliton downwards in `|γ|` along `grid` (descending), reusing
/// each solution as the next initial guess. When the branch is lost the last
/// interval is bisected a few times to sharpen the termination point.
pub fn soliton_branch_trace(
    phase: f64,
    hopping: f64,
    len: usize,
    grid: &[f64],
    cfg: &SelfConsistentConfig,
) -> Result<BranchTrace> {
    if grid.iter().any(|g| !(*g > 0.0 && *g <= 10.0 * hopping)) {
        return Err(Error::InvalidParameter("branch grid must lie in (0, 10J]".into()));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("branch grid must be strictly decreasing".into()));
    }
    let mut trace = BranchTrace { phase, points: Vec::new(), termination: None };
    let Some(&first) = grid.first() else {
        return Ok(trace);
    };
    let solve = |g: f64, init: &LatticeState| -> Result<(BranchPoint, LatticeState)> {
        let p = ModelParams::polar(hopping, g, phase)?;
        let s = solve_self_consistent(&p, init, cfg)?;
        let point = BranchPoint {
            gamma_abs: g,
            energy: s.energy,
            mu: s.mu,
            residual: s.residual,
            converged: s.converged,
            class: classify(&s.state),
        };
        Ok((point, canonicalize(&s.state)))
    };

    let seed = {
        let p = ModelParams::polar(hopping, first, phase)?;
        let opt = three_site_optimize(&p)?;
        opt.argmin.embed(len, len.div_ceil(2) - 1, Boundary::Periodic)?
    };
    let mut current = seed;
    let mut last_good: Option<(BranchPoint, LatticeState)> = None;
    for &g in grid {
        let (point, state) = solve(g, &current)?;
        if !point.on_branch() {
            if let Some((good, good_state)) = last_good.take() {
                let (mut a, mut s_a, mut b) = (good, good_state, g);
                for _ in 0..REFINE_HALVINGS {
                    let m = 0.5 * (a.gamma_abs + b);
                    let (pm, sm) = solve(m, &s_a)?;
                    if pm.on_branch() {
                        trace.points.push(pm);
                        a = pm;
                        s_a = sm;
                    } else {
                        b = m;
                    }
                }
                trace.termination = Some(a);
            }
            trace.points.push(point);
            return Ok(trace);
        }
        trace.points.push(point);
        last_good = Some((point, state.clone()));
        current = state;
    }
    trace.termination = last_good.map(|(p, _)| p);
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chiral_is_involution() {
        let s = LatticeState::plane_wave(7, 2, Boundary::Periodic).unwrap();
        assert_eq!(chiral_transform(&chiral_transform(&s)), s);
    }

    #[test]
    fn ansatz_limits() {
        let p = ModelParams::unit(C64::new(0.3, -1.2));
        let single = ThreeSiteAnsatz::new(1.0, 0.4, -0.2).unwrap();
        assert_eq!(three_site_energy(&single, &p), 0.0);
        let flat = ThreeSiteAnsatz::new(1.0 / 3.0, 0.0, 0.0).unwrap();
        let free = ModelParams::unit(C64::new(0.0, 0.0));
        assert_relative_eq!(three_site_energy(&flat, &free), -4.0 / 3.0, epsilon = 1e-14);
        assert!(ThreeSiteAnsatz::new(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn embedding_matches_lattice_energy() {
        let p = ModelParams::unit(C64::new(0.7, 0.3));
        let a = ThreeSiteAnsatz::new(0.6, 0.3, -1.1).unwrap();
        let s = a.embed(7, 3, Boundary::Periodic).unwrap();
        let e = crate::lattice::energy(&s, &p).unwrap();
        assert_relative_eq!(e, three_site_energy(&a, &p), epsilon = 1e-14);
        assert!(a.embed(7, 0, Boundary::Open).is_err());
    }

    #[test]
    fn classification_basics() {
        let u = LatticeState::uniform(12, Boundary::Periodic).unwrap();
        let c = classify(&u);
        assert_eq!(c.kind, StateKind::PlaneWave);
        assert_relative_eq!(c.participation_ratio, 12.0, epsilon = 1e-10);
        let s = LatticeState::single_site(12, 11, Boundary::Periodic).unwrap();
        let c = classify(&s);
        assert_eq!(c.kind, StateKind::Soliton);
        assert_eq!(c.three_site_weight, 1.0);
    }

    #[test]
    fn default_grid_shape() {
        let g = default_branch_grid(1.5, 2.0);
        assert_eq!(g[..5], [2.0, 1.95, 1.9, 1.85, 1.8]);
        assert!((g[5] - 1.79).abs() < 1e-12);
        assert!((g.last().unwrap() - 1.5).abs() < 1e-9);
        assert_eq!(g.len(), 5 + 30);
    }

    #[test]
    fn free_lattice_one_shot() {
        let p = ModelParams::unit(C64::new(0.0, 0.0));
        let init = LatticeState::uniform(10, Boundary::Periodic).unwrap();
        let s = solve_self_consistent(&p, &init, &SelfConsistentConfig::default()).unwrap();
        assert!(s.converged);
        assert_relative_eq!(s.mu, -2.0, epsilon = 1e-12);
    }
}
