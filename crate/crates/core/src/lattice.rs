//! Lattice state, model parameters and the classical Hamiltonian
//!
//! The model lives on a one-dimensional chain with amplitudes `Ψ_j`,
//! densities `n_j = |Ψ_j|²` and the energy functional
//!
//! ```text
//! H = Σ_j Ψ*_{j+1} [−J + γ (n_{j+1} − n_j)] Ψ_j + c.c.
//! ```
//!
//! with real hopping `J > 0` and complex density-difference coupling `γ`.
//! The equation of motion is `i dΨ_j/dt = ∂H/∂Ψ*_j`, evaluated by [`rhs`].
//!
//! Site indices are zero-based. Lattice spacing is unity.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on the imaginary part of the energy sum.
pub const ENERGY_IMAG_TOL: f64 = 1e-12;
/// Allowed norm deviation for operations requiring a normalized state.
pub const NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

/// Complex amplitudes on `L >= 3` sites.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    amplitudes: Vec<C64>,
    boundary: Boundary,
}

impl LatticeState {
    pub fn new(amplitudes: Vec<C64>, boundary: Boundary) -> Result<Self> {
        if amplitudes.len() < 3 {
            return Err(Error::TooFewSites(amplitudes.len()));
        }
        Ok(Self { amplitudes, boundary })
    }

    /// Uniform density `1/L`, zero phase.
    pub fn uniform(len: usize, boundary: Boundary) -> Result<Self> {
        let a = C64::new(1.0 / (len as f64).sqrt(), 0.0);
        Self::new(vec![a; len], boundary)
    }

    /// Plane wave `e^{−ijk}/√L` with `k = 2πm/L`.
    pub fn plane_wave(len: usize, m: i64, boundary: Boundary) -> Result<Self> {
        let k = 2.0 * PI * m as f64 / len as f64;
        let norm = 1.0 / (len as f64).sqrt();
        let amps = (0..len)
            .map(|j| C64::from_polar(norm, -(j as f64) * k))
            .collect();
        Self::new(amps, boundary)
    }

    /// All weight on one site.
    pub fn single_site(len: usize, site: usize, boundary: Boundary) -> Result<Self> {
        if site >= len {
            return Err(Error::InvalidParameter(format!(
                "site {site} outside lattice of {len} sites"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); len];
        amps[site] = C64::new(1.0, 0.0);
        Self::new(amps, boundary)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn densities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Returns a copy rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero state".into()));
        }
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
            boundary: self.boundary,
        })
    }

    pub fn with_phase(&self, theta: f64) -> Self {
        let rot = C64::from_polar(1.0, theta);
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * rot).collect(),
            boundary: self.boundary,
        }
    }

    /// Cyclic shift: site `j` moves to `j + shift (mod L)`.
    pub fn shifted(&self, shift: usize) -> Self {
        let len = self.len();
        let mut amps = vec![C64::new(0.0, 0.0); len];
        for (j, a) in self.amplitudes.iter().enumerate() {
            amps[(j + shift) % len] = *a;
        }
        Self { amplitudes: amps, boundary: self.boundary }
    }

    /// `⟨self|other⟩`
    pub fn overlap(&self, other: &LatticeState) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let deviation = (self.norm_sqr() - 1.0).abs();
        if deviation > NORM_TOL || !deviation.is_finite() {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(())
    }
}

/// Hopping `J` and complex coupling `γ = γ_R + iγ_I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    hopping: f64,
    gamma: C64,
}

impl ModelParams {
    pub fn new(hopping: f64, gamma: C64) -> Result<Self> {
        if !(hopping > 0.0) || !hopping.is_finite() {
            return Err(Error::InvalidParameter(format!("hopping J must be positive, got {hopping}")));
        }
        if !gamma.re.is_finite() || !gamma.im.is_finite() {
            return Err(Error::InvalidParameter("gamma must be finite".into()));
        }
        Ok(Self { hopping, gamma })
    }

    /// `J = 1` with the given coupling.
    pub fn unit(gamma: C64) -> Self {
        Self { hopping: 1.0, gamma }
    }

    /// Coupling with modulus `magnitude` and argument `phase`.
    pub fn polar(hopping: f64, magnitude: f64, phase: f64) -> Result<Self> {
        Self::new(hopping, C64::from_polar(magnitude, phase))
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }

    pub fn with_gamma(&self, gamma: C64) -> Self {
        Self { hopping: self.hopping, gamma }
    }
}

/// A state together with its chemical potential, energy and stationarity residual.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryState {
    pub state: LatticeState,
    pub mu: f64,
    pub energy: f64,
    /// `‖F(Ψ) − μΨ‖`
    pub residual: f64,
    pub converged: bool,
}

impl StationaryState {
    /// Evaluates `μ`, `E` and the residual of a normalized state.
    pub fn evaluate(state: LatticeState, params: &ModelParams, converged: bool) -> Result<Self> {
        let mu = chemical_potential(&state, params)?;
        let energy = energy(&state, params)?;
        let residual = stationary_residual(state.amplitudes(), state.boundary(), params);
        Ok(Self { state, mu, energy, residual, converged })
    }
}

/// `V(q, k)` of the momentum-space interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumVertex {
    pub q: f64,
    pub k: f64,
    pub value: C64,
}

impl MomentumVertex {
    pub fn new(q: f64, k: f64, params: &ModelParams) -> Self {
        Self { q, k, value: vertex(q, k, params) }
    }
}

pub(crate) fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[inline]
fn neighbours(j: usize, len: usize, boundary: Boundary) -> (Option<usize>, Option<usize>) {
    match boundary {
        Boundary::Periodic => (Some((j + len - 1) % len), Some((j + 1) % len)),
        Boundary::Open => (
            if j == 0 { None } else { Some(j - 1) },
            if j + 1 == len { None } else { Some(j + 1) },
        ),
    }
}

/// Energy of arbitrary (not necessarily normalized) amplitudes.
pub fn energy_raw(amps: &[C64], boundary: Boundary, params: &ModelParams) -> f64 {
    let len = amps.len();
    let bonds = match boundary {
        Boundary::Periodic => len,
        Boundary::Open => len - 1,
    };
    let (hop, gamma) = (params.hopping, params.gamma);
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..bonds {
        let jp = (j + 1) % len;
        let diff = amps[jp].norm_sqr() - amps[j].norm_sqr();
        let term = amps[jp].conj() * (gamma * diff - hop) * amps[j];
        sum += term + term.conj();
    }
    debug_assert!(sum.im.abs() < ENERGY_IMAG_TOL * (1.0 + sum.re.abs()));
    sum.re
}

/// Value of the Hamiltonian. Requires a normalized state.
pub fn energy(state: &LatticeState, params: &ModelParams) -> Result<f64> {
    state.check_normalized()?;
    Ok(energy_raw(&state.amplitudes, state.boundary, params))
}

/// Writes `F_j = ∂H/∂Ψ*_j` into `out`.
pub fn rhs_into(amps: &[C64], boundary: Boundary, params: &ModelParams, out: &mut [C64]) {
    let len = amps.len();
    let (hop, g) = (params.hopping, params.gamma);
    let gc = g.conj();
    let zero = C64::new(0.0, 0.0);
    for j in 0..len {
        let (left, right) = neighbours(j, len, boundary);
        let psi = amps[j];
        let n = psi.norm_sqr();
        let psi2 = psi * psi;
        let mut f = zero;
        if let Some(l) = left {
            let pl = amps[l];
            f += (g * (2.0 * n - pl.norm_sqr()) - hop) * pl + gc * psi2 * pl.conj();
        }
        if let Some(r) = right {
            let pr = amps[r];
            f += (-hop - gc * (2.0 * n - pr.norm_sqr())) * pr - g * psi2 * pr.conj();
        }
        out[j] = f;
    }
}

/// Right-hand side of `i dΨ/dt = F(Ψ)`. No normalization required.
pub fn rhs(state: &LatticeState, params: &ModelParams) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); state.len()];
    rhs_into(&state.amplitudes, state.boundary, params, &mut out);
    out
}

/// `Re⟨Ψ, F(Ψ)⟩`, the chemical potential of a stationary state.
pub fn chemical_potential(state: &LatticeState, params: &ModelParams) -> Result<f64> {
    state.check_normalized()?;
    let f = rhs(state, params);
    Ok(inner(&state.amplitudes, &f).re)
}

/// `‖F(Ψ) − μΨ‖` with `μ = Re⟨Ψ,F⟩ / ⟨Ψ,Ψ⟩`.
pub fn stationary_residual(amps: &[C64], boundary: Boundary, params: &ModelParams) -> f64 {
    let mut f = vec![C64::new(0.0, 0.0); amps.len()];
    rhs_into(amps, boundary, params, &mut f);
    let mu = inner(amps, &f).re / norm_sqr(amps);
    f.iter()
        .zip(amps)
        .map(|(fj, a)| (fj - mu * a).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `V(q,k) = 2iγ_R(sin k − sin q) + 2iγ_I(cos q − cos k)`
pub fn vertex(q: f64, k: f64, params: &ModelParams) -> C64 {
    let (gr, gi) = (params.gamma.re, params.gamma.im);
    C64::new(0.0, 2.0 * gr * (k.sin() - q.sin()) + 2.0 * gi * (q.cos() - k.cos()))
}

/// Fold an angle into `(−π, π]`.
pub fn fold_momentum(k: f64) -> f64 {
    let mut k = k.rem_euclid(2.0 * PI);
    if k > PI {
        k -= 2.0 * PI;
    }
    k
}

/// `k_m = 2πm/L` for `m = 0..L`, folded into `(−π, π]`.
pub fn momentum_grid(len: usize) -> Vec<f64> {
    (0..len)
        .map(|m| fold_momentum(2.0 * PI * m as f64 / len as f64))
        .collect()
}

/// Unitary transform `Ψ̃_k = L^{-1/2} Σ_j Ψ_j e^{ijk}`, ordered like [`momentum_grid`].
pub fn fourier(state: &LatticeState) -> Result<Vec<C64>> {
    if state.boundary != Boundary::Periodic {
        return Err(Error::UnsupportedBoundary);
    }
    let len = state.len();
    let scale = 1.0 / (len as f64).sqrt();
    Ok((0..len)
        .map(|m| {
            let k = 2.0 * PI * m as f64 / len as f64;
            state
                .amplitudes
                .iter()
                .enumerate()
                .map(|(j, a)| a * C64::from_polar(1.0, k * j as f64))
                .sum::<C64>()
                * scale
        })
        .collect())
}

/// Inverse of [`fourier`]: `Ψ_j = L^{-1/2} Σ_k Ψ̃_k e^{−ijk}`.
pub fn inverse_fourier(coeffs: &[C64]) -> Result<LatticeState> {
    let len = coeffs.len();
    let scale = 1.0 / (len as f64).sqrt();
    let amps = (0..len)
        .map(|j| {
            coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| {
                    let k = 2.0 * PI * m as f64 / len as f64;
                    c * C64::from_polar(1.0, -k * j as f64)
                })
                .sum::<C64>()
                * scale
        })
        .collect();
    LatticeState::new(amps, Boundary::Periodic)
}

/// Hermitian operator `M(Ψ)` with `M(Ψ)Ψ = F(Ψ)`.
///
/// Off-diagonal entries are the frozen-density hoppings `−J + γ(n_{j+1} − n_j)`;
/// the remaining density-locked terms of the equation of motion collapse
/// into a real on-site potential
/// `2 Re(γ Ψ*_j Ψ_{j−1}) − 2 Re(γ Ψ_j Ψ*_{j+1})`.
pub fn frozen_operator(amps: &[C64], boundary: Boundary, params: &ModelParams) -> DMatrix<C64> {
    let len = amps.len();
    let (hop, g) = (params.hopping, params.gamma);
    let mut m = DMatrix::<C64>::zeros(len, len);
    let bonds = match boundary {
        Boundary::Periodic => len,
        Boundary::Open => len - 1,
    };
    for j in 0..bonds {
        let jp = (j + 1) % len;
        let t = g * (amps[jp].norm_sqr() - amps[j].norm_sqr()) - hop;
        m[(jp, j)] += t;
        m[(j, jp)] += t.conj();
        // bond (j, j+1) contributes to the on-site potential of both ends
        m[(jp, jp)] += 2.0 * (g * amps[jp].conj() * amps[j]).re;
        m[(j, j)] -= 2.0 * (g * amps[j] * amps[jp].conj()).re;
    }
    m
}
