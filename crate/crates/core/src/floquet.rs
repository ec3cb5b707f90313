//! Mean-field simulation of the three-step drive and comparison with the
//! effective lattice model.
//!
//! One period `T = 2π/ω` is split into three segments of length `T/3` with
//! generators `H₀ + V₁`, `H₀ + V₂` and `H₀ − V₁ − V₂`, where
//! `H₀` is plain hopping `−J`, `V₁ = J₁ Ψ*_{j+1}Ψ_j + c.c.` and `V₂` is the
//! on-site term `U Σ n_j²` with equation-of-motion contribution `2U n_j Ψ_j`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_real, IntegratorConfig, REAL_TIME_NORM_DRIFT};
use crate::error::{Error, Result};
use crate::integrate::Rk4;
use crate::lattice::{norm_sqr, Boundary, LatticeState, ModelParams, C64};

/// Ratio `|U|/ω` or `|J₁|/ω` above which the high-frequency expansion is
/// considered doubtful.
pub const HIGH_FREQUENCY_WARNING: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetParams {
    pub hopping: f64,
    pub j1: C64,
    pub u: f64,
    pub omega: f64,
}

impl FloquetParams {
    pub fn new(hopping: f64, j1: C64, u: f64, omega: f64) -> Result<Self> {
        if !(hopping > 0.0) || !(omega > 0.0) || !u.is_finite() || !j1.re.is_finite() || !j1.im.is_finite() {
            return Err(Error::InvalidParameter("Floquet parameters need J > 0, ω > 0 and finite U, J₁".into()));
        }
        Ok(Self { hopping, j1, u, omega })
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn u_over_omega(&self) -> f64 {
        self.u.abs() / self.omega
    }

    pub fn j1_over_omega(&self) -> f64 {
        self.j1.norm() / self.omega
    }

    pub fn high_frequency_warning(&self) -> bool {
        self.u_over_omega() > HIGH_FREQUENCY_WARNING || self.j1_over_omega() > HIGH_FREQUENCY_WARNING
    }
}

/// Candidate coefficients for the effective coupling `γ = c·2iπUJ₁/ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientVariant {
    /// `+1/27`, the mapping stated alongside the effective Hamiltonian.
    #[default]
    Plus27,
    Minus27,
    Plus9,
    /// `−1/9`: the effective Hamiltonian's own `1/9` coefficient, whose
    /// `(n_j − n_{j+1})` ordering flips the sign relative to the model.
    Minus9,
}

impl CoefficientVariant {
    pub const ALL: [CoefficientVariant; 4] = [Self::Plus27, Self::Minus27, Self::Plus9, Self::Minus9];

    pub fn coefficient(&self) -> f64 {
        match self {
            Self::Plus27 => 1.0 / 27.0,
            Self::Minus27 => -1.0 / 27.0,
            Self::Plus9 => 1.0 / 9.0,
            Self::Minus9 => -1.0 / 9.0,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Plus27 => "+27",
            Self::Minus27 => "-27",
            Self::Plus9 => "+9",
            Self::Minus9 => "-9",
        }
    }
}

pub fn effective_gamma(fp: &FloquetParams, variant: CoefficientVariant) -> C64 {
    C64::new(0.0, 2.0 * PI * variant.coefficient() / fp.omega) * fp.u * fp.j1
}

/// Drive amplitudes that realize `target` under `variant` at frequency `ω`,
/// with `|U| = |J₁|`. The phase of `γ` goes into `J₁`.
pub fn drive_for_gamma(target: C64, variant: CoefficientVariant, hopping: f64, omega: f64) -> Result<FloquetParams> {
    // U·J₁ = γ ω / (2πi c)
    let product = target * omega / (C64::new(0.0, 2.0 * PI * variant.coefficient()));
    let m = product.norm().sqrt();
    FloquetParams::new(hopping, C64::from_polar(m, product.arg()), m, omega)
}

/// One segment generator: hopping coefficient `c` on `Ψ_{j−1}` (and `c*` on
/// `Ψ_{j+1}`) plus the on-site term `2u n_j Ψ_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentGenerator {
    pub hop: C64,
    pub onsite: f64,
}

/// The three generators of one period, in order.
pub fn segment_generators(fp: &FloquetParams) -> [SegmentGenerator; 3] {
    let j = C64::new(-fp.hopping, 0.0);
    [
        SegmentGenerator { hop: j + fp.j1, onsite: 0.0 },
        SegmentGenerator { hop: j, onsite: fp.u },
        SegmentGenerator { hop: j - fp.j1, onsite: -fp.u },
    ]
}

fn generator_rhs(psi: &[C64], g: SegmentGenerator, boundary: Boundary, out: &mut [C64]) {
    let len = psi.len();
    for j in 0..len {
        let mut f = 2.0 * g.onsite * psi[j].norm_sqr() * psi[j];
        let left = match boundary {
            Boundary::Periodic => Some((j + len - 1) % len),
            Boundary::Open => j.checked_sub(1),
        };
        let right = match boundary {
            Boundary::Periodic => Some((j + 1) % len),
            Boundary::Open => (j + 1 < len).then_some(j + 1),
        };
        if let Some(l) = left {
            f += g.hop * psi[l];
        }
        if let Some(r) = right {
            f += g.hop.conj() * psi[r];
        }
        out[j] = C64::new(0.0, -1.0) * f;
    }
}

fn propagate(y: &mut [C64], g: SegmentGenerator, boundary: Boundary, time: f64, steps: usize, rk: &mut Rk4) {
    let dt = time / steps as f64;
    for _ in 0..steps {
        rk.step(y, dt, |p, out| generator_rhs(p, g, boundary, out));
    }
}

/// Minimum number of integration steps per period.
pub const MIN_SUBSTEPS: usize = 300;

/// Stroboscopic state after `periods` drive periods. `substeps` per period
/// are shared equally by the three segments, so no step straddles a switch.
pub fn evolve_floquet(state: &LatticeState, fp: &FloquetParams, periods: usize, substeps: usize) -> Result<LatticeState> {
    state.check_normalized()?;
    if substeps < MIN_SUBSTEPS {
        return Err(Error::InvalidParameter(format!("need at least {MIN_SUBSTEPS} substeps per period, got {substeps}")));
    }
    let per_segment = substeps.div_ceil(3);
    let seg_time = fp.period() / 3.0;
    let gens = segment_generators(fp);
    let boundary = state.boundary();
    let mut y = state.amplitudes().to_vec();
    let mut rk = Rk4::new(y.len());
    let n0 = norm_sqr(&y);
    for period in 0..periods {
        for g in gens {
            propagate(&mut y, g, boundary, seg_time, per_segment, &mut rk);
        }
        let drift = (norm_sqr(&y) - n0).abs();
        if !(drift <= REAL_TIME_NORM_DRIFT) {
            return Err(Error::IntegratorDiverged { step: (period + 1) * 3 * per_segment, drift });
        }
    }
    LatticeState::new(y, boundary)
}

/// Applies the micromotion kick `e^{±iK}` with `K = −τ(2V₁ + V₂)/3`,
/// `τ = T/3`, by evolving under `(2V₁ + V₂)/3` for time `±τ`.
pub fn micromotion_kick(state: &LatticeState, fp: &FloquetParams, inverse: bool, steps: usize) -> LatticeState {
    let g = SegmentGenerator { hop: 2.0 * fp.j1 / 3.0, onsite: fp.u / 3.0 };
    let tau = fp.period() / 3.0;
    let mut y = state.amplitudes().to_vec();
    let mut rk = Rk4::new(y.len());
    propagate(&mut y, g, state.boundary(), if inverse { -tau } else { tau }, steps, &mut rk);
    LatticeState::new(y, state.boundary()).expect("length preserved")
}

/// Step size for the effective-model reference evolution.
pub const REFERENCE_DT: f64 = 0.002;

fn infidelity(a: &LatticeState, b: &LatticeState) -> f64 {
    (1.0 - a.overlap(b).norm_sqr()).max(0.0)
}

fn evolve_effective(state: &LatticeState, params: &ModelParams, time: f64) -> Result<LatticeState> {
    let steps = (time / REFERENCE_DT).ceil().max(1.0) as usize;
    let mut cfg = IntegratorConfig::real_time(time / steps as f64, steps);
    cfg.sample_every = steps;
    Ok(evolve_real(state, params, &cfg)?.last().clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StroboscopicReport {
    pub omega: f64,
    pub periods: usize,
    pub time: f64,
    pub gamma_eff: C64,
    /// `1 − |⟨Ψ_drive|Ψ_eff⟩|²`
    pub infidelity: f64,
    /// Same, with the effective evolution dressed by the micromotion kicks.
    pub dressed_infidelity: f64,
    pub u_over_omega: f64,
    pub j1_over_omega: f64,
    pub high_frequency_warning: bool,
}

impl StroboscopicReport {
    pub fn infidelity_per_time(&self) -> f64 {
        self.infidelity / self.time
    }

    pub fn dressed_infidelity_per_time(&self) -> f64 {
        self.dressed_infidelity / self.time
    }
}

/// Default integration steps per drive period.
pub const DEFAULT_SUBSTEPS: usize = 600;

/// Evolves `state` through `periods` drive periods and, separately, under the
/// effective model for the same time; reports the final infidelities.
pub fn compare_stroboscopic(
    state: &LatticeState,
    fp: &FloquetParams,
    periods: usize,
    variant: CoefficientVariant,
    substeps: usize,
) -> Result<StroboscopicReport> {
    state.check_normalized()?;
    let gamma_eff = effective_gamma(fp, variant);
    let params = ModelParams::new(fp.hopping, gamma_eff)?;
    let time = periods as f64 * fp.period();
    let driven = evolve_floquet(state, fp, periods, substeps)?;
    let bare = evolve_effective(state, &params, time)?;
    let kick_steps = substeps.div_ceil(3);
    let dressed = {
        let kicked = micromotion_kick(state, fp, false, kick_steps);
        let evolved = evolve_effective(&kicked.normalized()?, &params, time)?;
        micromotion_kick(&evolved, fp, true, kick_steps)
    };
    Ok(StroboscopicReport {
        omega: fp.omega,
        periods,
        time,
        gamma_eff,
        infidelity: infidelity(&driven, &bare),
        dressed_infidelity: infidelity(&driven, &dressed),
        u_over_omega: fp.u_over_omega(),
        j1_over_omega: fp.j1_over_omega(),
        high_frequency_warning: fp.high_frequency_warning(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub target_gamma: C64,
    pub variant: CoefficientVariant,
    pub rungs: Vec<StroboscopicReport>,
}

impl LadderReport {
    /// Successive ratios of dressed infidelity per unit time.
    pub fn dressed_ratios(&self) -> Vec<f64> {
        self.rungs
            .windows(2)
            .map(|w| w[0].dressed_infidelity_per_time() / w[1].dressed_infidelity_per_time())
            .collect()
    }

    pub fn bare_ratios(&self) -> Vec<f64> {
        self.rungs
            .windows(2)
            .map(|w| w[0].infidelity_per_time() / w[1].infidelity_per_time())
            .collect()
    }
}

/// Default drive frequencies of the convergence ladder, in units of `J`.
pub const DEFAULT_LADDER: [f64; 4] = [25.0, 50.0, 100.0, 200.0];

/// Runs [`compare_stroboscopic`] at each `ω` with `γ_eff` held at `target`.
/// `|U| = |J₁| ∝ √ω` keeps both drive ratios shrinking as `ω` grows. Each rung
/// runs for the whole number of periods closest to `time`.
pub fn floquet_ladder(
    state: &LatticeState,
    target: C64,
    variant: CoefficientVariant,
    hopping: f64,
    omegas: &[f64],
    time: f64,
    substeps: usize,
) -> Result<LadderReport> {
    let rungs = omegas
        .par_iter()
        .map(|&w| {
            let fp = drive_for_gamma(target, variant, hopping, w)?;
            let periods = (time / fp.period()).round().max(1.0) as usize;
            compare_stroboscopic(state, &fp, periods, variant, substeps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LadderReport { target_gamma: target, variant, rungs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arbitration {
    pub omega: f64,
    pub drive: FloquetParams,
    /// `(variant, bare infidelity)` for every candidate coefficient.
    pub scores: Vec<(CoefficientVariant, f64)>,
    pub best: CoefficientVariant,
}

/// Evolves one fixed drive and scores each coefficient variant by the bare
/// infidelity of its effective model.
pub fn arbitrate_variants(state: &LatticeState, fp: &FloquetParams, time: f64, substeps: usize) -> Result<Arbitration> {
    let periods = (time / fp.period()).round().max(1.0) as usize;
    let scores = CoefficientVariant::ALL
        .par_iter()
        .map(|&v| Ok((v, compare_stroboscopic(state, fp, periods, v, substeps)?.infidelity)))
        .collect::<Result<Vec<_>>>()?;
    let best = scores
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|s| s.0)
        .expect("four variants");
    Ok(Arbitration { omega: fp.omega, drive: *fp, scores, best })
}

/// Normalized Gaussian wave packet `exp(−(j − c)²/(2w²) + i q j)`.
pub fn gaussian_packet(len: usize, centre: f64, width: f64, momentum: f64, boundary: Boundary) -> Result<LatticeState> {
    let amps = (0..len)
        .map(|j| {
            let x = j as f64 - centre;
            C64::from_polar((-x * x / (2.0 * width * width)).exp(), momentum * j as f64)
        })
        .collect();
    LatticeState::new(amps, boundary)?.normalized()
}
