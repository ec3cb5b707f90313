//! Real- and imaginary-time propagation of the lattice equation of motion.
//!
//! Real time integrates `i dΨ/dt = F(Ψ)` with RK4 at fixed step.
//! Imaginary time integrates the norm-preserving gradient flow
//! `dΨ/dτ = ∓(F(Ψ) − μ(Ψ)Ψ)` and renormalizes after every step. Subtracting
//! `μΨ` does not change the continuous normalized flow, but it keeps the
//! fixed points of the discrete RK4 map on the true stationary states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::Rk4;
use crate::lattice::{
    energy_raw, inner, norm_sqr, rhs_into, stationary_residual, Boundary, LatticeState,
    ModelParams, StationaryState, C64,
};

/// Upper bound on `dt·J` for the explicit integrator.
pub const MAX_DT_TIMES_J: f64 = 0.1;
/// Norm drift that aborts a real-time run.
pub const REAL_TIME_NORM_DRIFT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub max_steps: usize,
    /// Stationarity tolerance on the residual `‖F − μΨ‖`.
    pub tol: f64,
    pub renormalize: bool,
    pub rng_seed: u64,
    /// Trajectory sampling interval in steps (real time only).
    pub sample_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self::imaginary_time()
    }
}

impl IntegratorConfig {
    pub fn imaginary_time() -> Self {
        Self {
            dt: 0.01,
            max_steps: 400_000,
            tol: 1e-10,
            renormalize: true,
            rng_seed: 0,
            sample_every: 100,
        }
    }

    pub fn real_time(dt: f64, steps: usize) -> Self {
        Self {
            dt,
            max_steps: steps,
            tol: 0.0,
            renormalize: false,
            rng_seed: 0,
            sample_every: 100,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    fn validate(&self, params: &ModelParams) -> Result<()> {
        if !(self.dt > 0.0) || self.dt * params.hopping() > MAX_DT_TIMES_J {
            return Err(Error::InvalidParameter(format!(
                "dt·J must lie in (0, {MAX_DT_TIMES_J}], got {}",
                self.dt * params.hopping()
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub norm: f64,
    pub energy: f64,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<LatticeState>,
    pub observables: Vec<Observables>,
}

impl Trajectory {
    pub fn last(&self) -> &LatticeState {
        self.states.last().expect("trajectory holds the initial sample")
    }

    pub fn max_norm_drift(&self) -> f64 {
        let n0 = self.observables[0].norm;
        self.observables.iter().map(|o| (o.norm - n0).abs()).fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.observables[0].energy;
        self.observables.iter().map(|o| (o.energy - e0).abs()).fold(0.0, f64::max)
    }
}

fn observe(amps: &[C64], boundary: Boundary, params: &ModelParams, scratch: &mut [C64]) -> Observables {
    let norm = norm_sqr(amps);
    rhs_into(amps, boundary, params, scratch);
    Observables {
        norm,
        energy: energy_raw(amps, boundary, params) / (norm * norm),
        mu: inner(amps, scratch).re / norm,
    }
}

/// Integrates `i dΨ/dt = F(Ψ)` for `cfg.max_steps` steps of size `cfg.dt`.
///
/// The steps are taken in a frame rotating at the initial chemical potential
/// `μ₀`, integrating `i dΦ/dt = F(Φ) − μ₀Φ` with `Ψ = e^{−iμ₀t}Φ`. This is
/// exact because `F` commutes with global phases, and it keeps the trivial
/// phase rotation out of the RK4 truncation error.
pub fn evolve_real(state: &LatticeState, params: &ModelParams, cfg: &IntegratorConfig) -> Result<Trajectory> {
    state.check_normalized()?;
    cfg.validate(params)?;
    if cfg.renormalize {
        return Err(Error::InvalidParameter("real-time evolution must not renormalize".into()));
    }
    let boundary = state.boundary();
    let mut y = state.amplitudes().to_vec();
    let mut rk = Rk4::new(y.len());
    let mut scratch = vec![C64::new(0.0, 0.0); y.len()];
    let sample_every = cfg.sample_every.max(1);

    let first = observe(&y, boundary, params, &mut scratch);
    let n0 = first.norm;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![state.clone()],
        observables: vec![first],
    };
    let mu0 = first.mu;
    let minus_i = C64::new(0.0, -1.0);
    let mut phi = y.clone();
    for step in 1..=cfg.max_steps {
        rk.step(&mut phi, cfg.dt, |psi, out| {
            rhs_into(psi, boundary, params, out);
            out.iter_mut().zip(psi).for_each(|(z, p)| *z = minus_i * (*z - mu0 * p));
        });
        let rotation = C64::from_polar(1.0, -mu0 * step as f64 * cfg.dt);
        y.iter_mut().zip(&phi).for_each(|(a, b)| *a = rotation * b);
        let drift = (norm_sqr(&y) - n0).abs();
        if !(drift <= REAL_TIME_NORM_DRIFT) {
            return Err(Error::IntegratorDiverged { step, drift });
        }
        if step % sample_every == 0 || step == cfg.max_steps {
            traj.times.push(step as f64 * cfg.dt);
            traj.states.push(LatticeState::new(y.clone(), boundary)?);
            traj.observables.push(observe(&y, boundary, params, &mut scratch));
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowDirection {
    /// Energy descent, towards the ground state.
    Descent,
    /// Energy ascent, towards the highest-energy state.
    Ascent,
}

const RESIDUAL_CHECK_INTERVAL: usize = 10;

fn projected_flow(
    psi: &[C64],
    boundary: Boundary,
    params: &ModelParams,
    sign: f64,
    out: &mut [C64],
) {
    rhs_into(psi, boundary, params, out);
    let mu = inner(psi, out).re / norm_sqr(psi);
    for (o, p) in out.iter_mut().zip(psi) {
        *o = sign * (*o - mu * p);
    }
}

/// Normalized gradient flow in the given direction.
pub fn evolve_gradient_flow(
    state: &LatticeState,
    params: &ModelParams,
    cfg: &IntegratorConfig,
    direction: FlowDirection,
) -> Result<StationaryState> {
    cfg.validate(params)?;
    if !cfg.renormalize {
        return Err(Error::InvalidParameter("imaginary-time evolution must renormalize".into()));
    }
    let boundary = state.boundary();
    let mut y = state.normalized()?.into_amplitudes();
    let mut rk = Rk4::new(y.len());
    let sign = match direction {
        FlowDirection::Descent => -1.0,
        FlowDirection::Ascent => 1.0,
    };
    let mut converged = false;
    for step in 1..=cfg.max_steps {
        rk.step(&mut y, cfg.dt, |psi, out| projected_flow(psi, boundary, params, sign, out));
        let n = norm_sqr(&y).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::IntegratorDiverged { step, drift: f64::INFINITY });
        }
        y.iter_mut().for_each(|z| *z /= n);
        if step % RESIDUAL_CHECK_INTERVAL == 0
            && stationary_residual(&y, boundary, params) < cfg.tol
        {
            converged = true;
            break;
        }
    }
    StationaryState::evaluate(LatticeState::new(y, boundary)?, params, converged)
}

/// Imaginary-time propagation towards the lowest reachable stationary state.
pub fn evolve_imaginary(state: &LatticeState, params: &ModelParams, cfg: &IntegratorConfig) -> Result<StationaryState> {
    evolve_gradient_flow(state, params, cfg, FlowDirection::Descent)
}

/// Kind of random initial profile used for a restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialProfile {
    /// Independent complex Gaussian amplitudes on every site.
    Extended,
    /// Complex Gaussian amplitudes under a unit-width Gaussian envelope
    /// centred on a random site.
    Localized,
}

/// Restart `index` alternates extended (even) and localized (odd) profiles.
pub fn restart_profile(index: usize) -> InitialProfile {
    if index % 2 == 0 {
        InitialProfile::Extended
    } else {
        InitialProfile::Localized
    }
}

/// Deterministic random initial state for restart `index` of a run seeded by `seed`.
pub fn random_state(
    len: usize,
    boundary: Boundary,
    seed: u64,
    index: usize,
    profile: InitialProfile,
) -> Result<LatticeState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut amps: Vec<C64> = (0..len)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    if profile == InitialProfile::Localized {
        let centre = rng.random_range(0..len) as f64;
        let l = len as f64;
        for (j, a) in amps.iter_mut().enumerate() {
            let mut d = (j as f64 - centre).abs();
            if boundary == Boundary::Periodic {
                d = d.min(l - d);
            }
            *a *= (-0.5 * d * d).exp();
        }
    }
    LatticeState::new(amps, boundary)?.normalized()
}

/// Canonical representative of a stationary state: density maximum moved to
/// site `⌈L/2⌉` (one-based) on periodic lattices, and the largest amplitude
/// made real positive.
pub fn canonicalize(state: &LatticeState) -> LatticeState {
    let len = state.len();
    let peak = argmax_amplitude(state.amplitudes());
    let shifted = match state.boundary() {
        Boundary::Periodic => {
            let target = len.div_ceil(2) - 1;
            state.shifted((target + len - peak) % len)
        }
        Boundary::Open => state.clone(),
    };
    let peak = argmax_amplitude(shifted.amplitudes());
    let phase = shifted.amplitudes()[peak].arg();
    shifted.with_phase(-phase)
}

fn argmax_amplitude(amps: &[C64]) -> usize {
    // ties resolved towards the lowest index, within a relative 1e-12
    let max = amps.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
    amps.iter()
        .position(|a| a.norm_sqr() >= max * (1.0 - 1e-12))
        .unwrap_or(0)
}

/// All restart outcomes of a stationary-state search, in restart order.
pub fn search_candidates(
    params: &ModelParams,
    len: usize,
    boundary: Boundary,
    cfg: &IntegratorConfig,
    restarts: usize,
    direction: FlowDirection,
) -> Result<Vec<StationaryState>> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    (0..restarts)
        .into_par_iter()
        .map(|r| {
            let init = random_state(len, boundary, cfg.rng_seed, r, restart_profile(r))?;
            let mut s = evolve_gradient_flow(&init, params, cfg, direction)?;
            s.state = canonicalize(&s.state);
            Ok(s)
        })
        .collect()
}

fn select_extremal(candidates: Vec<StationaryState>, direction: FlowDirection) -> Result<StationaryState> {
    let restarts = candidates.len();
    let best_residual = candidates.iter().map(|c| c.residual).fold(f64::INFINITY, f64::min);
    let key = |s: &StationaryState| match direction {
        FlowDirection::Descent => s.energy,
        FlowDirection::Ascent => -s.energy,
    };
    candidates
        .into_iter()
        .filter(|c| c.converged)
        .min_by(|a, b| key(a).total_cmp(&key(b)))
        .ok_or(Error::NoConvergence { restarts, best_residual })
}

/// Lowest-energy converged state over `restarts` seeded imaginary-time runs.
pub fn find_ground_state(
    params: &ModelParams,
    len: usize,
    cfg: &IntegratorConfig,
    restarts: usize,
) -> Result<StationaryState> {
    let c = search_candidates(params, len, Boundary::Periodic, cfg, restarts, FlowDirection::Descent)?;
    select_extremal(c, FlowDirection::Descent)
}

/// Highest-energy converged state, found by energy ascent.
pub fn find_highest_state(
    params: &ModelParams,
    len: usize,
    cfg: &IntegratorConfig,
    restarts: usize,
) -> Result<StationaryState> {
    let c = search_candidates(params, len, Boundary::Periodic, cfg, restarts, FlowDirection::Ascent)?;
    select_extremal(c, FlowDirection::Ascent)
}
