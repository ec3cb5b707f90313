//! Long-wavelength limit: Gaussian variational energy, its reduction along
//! the optimal chirp, and the continuum excitation spectrum.
//!
//! The field is `φ(x) = Ψ_n/√α` at `x = nα`. The continuum energy density
//! (dropping the `(−2J − μ)|φ|²` term, which vanishes at `μ = −2J`) is
//! `Jα²|∂φ|² − iγ_Iα³[φ*²(∂φ)² − (∂φ*)²φ²]`; the `γ_R` part is a total
//! derivative and does not contribute.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianAnsatz {
    /// Inverse squared width, `a > 0`.
    pub a: f64,
    /// Chirp.
    pub b: f64,
    /// Lattice spacing.
    pub spacing: f64,
    pub gamma_i: f64,
}

impl GaussianAnsatz {
    pub fn new(a: f64, b: f64, spacing: f64, gamma_i: f64) -> Result<Self> {
        if !(a > 0.0) || !(spacing > 0.0) || !b.is_finite() || !gamma_i.is_finite() {
            return Err(Error::InvalidParameter("Gaussian ansatz needs a > 0, spacing > 0".into()));
        }
        Ok(Self { a, b, spacing, gamma_i })
    }

    /// `φ(x) = (2a/π)^{1/4} e^{−(a + ib)x²}`
    pub fn field(&self, x: f64) -> C64 {
        (2.0 * self.a / PI).powf(0.25) * (-C64::new(self.a, self.b) * x * x).exp()
    }

    /// `∂φ/∂x = −2(a + ib)x φ`
    pub fn field_derivative(&self, x: f64) -> C64 {
        -2.0 * C64::new(self.a, self.b) * x * self.field(x)
    }

    fn with_a(&self, a: f64) -> Self {
        Self { a, ..*self }
    }
}

/// `E(a, b) = Jα²(a² + b²)/a + 2γ_Iα³√(a/π)·b`
pub fn gaussian_energy(g: &GaussianAnsatz, hopping: f64) -> f64 {
    let al = g.spacing;
    hopping * al * al * (g.a * g.a + g.b * g.b) / g.a + 2.0 * g.gamma_i * al.powi(3) * (g.a / PI).sqrt() * g.b
}

/// Stationary chirp `b = −αγ_I a^{3/2} / (J√π)`.
pub fn optimal_b(a: f64, g: &GaussianAnsatz, hopping: f64) -> f64 {
    -g.spacing * g.gamma_i * a.powf(1.5) / (hopping * PI.sqrt())
}

/// `E(a) = Jα²a − α⁴γ_I² a² / (Jπ)` along the optimal chirp.
pub fn reduced_energy(a: f64, g: &GaussianAnsatz, hopping: f64) -> f64 {
    let al2 = g.spacing * g.spacing;
    hopping * al2 * a - al2 * al2 * g.gamma_i * g.gamma_i * a * a / (hopping * PI)
}

/// Maximizer `a* = J²π / (2α²γ_I²)` of [`reduced_energy`].
pub fn reduced_energy_maximizer(g: &GaussianAnsatz, hopping: f64) -> f64 {
    hopping * hopping * PI / (2.0 * g.spacing * g.spacing * g.gamma_i * g.gamma_i)
}

/// Continuum energy density of the ansatz at `x`.
pub fn energy_density(g: &GaussianAnsatz, hopping: f64, x: f64) -> f64 {
    let phi = g.field(x);
    let dphi = g.field_derivative(x);
    let z = phi.conj() * phi.conj() * dphi * dphi;
    // −iγ_Iα³(z − z*) = 2γ_Iα³ Im z
    hopping * g.spacing * g.spacing * dphi.norm_sqr() + 2.0 * g.gamma_i * g.spacing.powi(3) * z.im
}

/// Half-width of the integration window, in standard deviations of `|φ|²`.
pub const QUADRATURE_SIGMAS: f64 = 12.0;

/// Energy of the ansatz by numerical integration of [`energy_density`].
pub fn gaussian_energy_quadrature(g: &GaussianAnsatz, hopping: f64, tol: f64) -> f64 {
    // |φ|² ∝ e^{−2ax²}, standard deviation 1/(2√a)
    let half = QUADRATURE_SIGMAS / (2.0 * g.a.sqrt());
    quadrature::integrate(|x| energy_density(g, hopping, x), -half, half, tol).integral
}

/// `E(a)` evaluated through [`gaussian_energy`] at the optimal chirp.
pub fn energy_along_optimal_chirp(a: f64, g: &GaussianAnsatz, hopping: f64) -> f64 {
    let b = optimal_b(a, g, hopping);
    gaussian_energy(&GaussianAnsatz { b, ..g.with_a(a) }, hopping)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumDispersion {
    /// `(αp)⁴ (J² − 4γ_I²/L²)`
    pub eps_squared: f64,
    pub stable: bool,
}

impl ContinuumDispersion {
    /// Positive branch `(αp)²√(J² − 4γ_I²/L²)`, `None` when unstable.
    pub fn eps(&self) -> Option<f64> {
        self.stable.then(|| self.eps_squared.max(0.0).sqrt())
    }
}

pub fn continuum_dispersion(p: f64, hopping: f64, gamma_i: f64, spacing: f64, len: f64) -> ContinuumDispersion {
    let k2 = (spacing * p).powi(2);
    let radicand = hopping * hopping - 4.0 * gamma_i * gamma_i / (len * len);
    ContinuumDispersion { eps_squared: k2 * k2 * radicand, stable: radicand >= 0.0 }
}
