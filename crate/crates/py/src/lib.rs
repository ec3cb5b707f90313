//! Python bindings. Complex numbers cross as Python `complex`, boundaries as
//! the strings `"periodic"` and `"open"`.

use d4nlse::continuum::{self, GaussianAnsatz};
use d4nlse::dynamics::{self, IntegratorConfig};
use d4nlse::floquet::{self, CoefficientVariant, FloquetParams};
use d4nlse::stationary::{self, SelfConsistentConfig};
use d4nlse::{edge_modes, lattice, stability, Boundary, Error, C64};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e.category() {
        "precondition" | "unsupported-boundary" | "construction-impossible" => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn boundary(name: &str) -> PyResult<Boundary> {
    match name {
        "periodic" => Ok(Boundary::Periodic),
        "open" => Ok(Boundary::Open),
        _ => Err(PyValueError::new_err(format!("boundary must be 'periodic' or 'open', got '{name}'"))),
    }
}

fn boundary_name(b: Boundary) -> &'static str {
    match b {
        Boundary::Periodic => "periodic",
        Boundary::Open => "open",
    }
}

fn variant(name: &str) -> PyResult<CoefficientVariant> {
    CoefficientVariant::ALL
        .into_iter()
        .find(|v| v.as_str() == name)
        .ok_or_else(|| PyValueError::new_err(format!("variant must be one of +27, -27, +9, -9, got '{name}'")))
}

#[pyclass(name = "ModelParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModelParams(d4nlse::ModelParams);

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (gamma, hopping = 1.0))]
    fn new(gamma: C64, hopping: f64) -> PyResult<Self> {
        d4nlse::ModelParams::new(hopping, gamma).map(Self).map_err(to_py)
    }

    #[getter]
    fn hopping(&self) -> f64 {
        self.0.hopping()
    }

    #[getter]
    fn gamma(&self) -> C64 {
        self.0.gamma()
    }

    fn __repr__(&self) -> String {
        format!("ModelParams(gamma={}, hopping={})", self.0.gamma(), self.0.hopping())
    }
}

#[pyclass(name = "LatticeState", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLatticeState(d4nlse::LatticeState);

#[pymethods]
impl PyLatticeState {
    /// Wraps the amplitudes as given; call `normalized()` before solving.
    #[new]
    #[pyo3(signature = (amplitudes, boundary = "periodic"))]
    fn new(amplitudes: Vec<C64>, boundary: &str) -> PyResult<Self> {
        d4nlse::LatticeState::new(amplitudes, self::boundary(boundary)?).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (length, boundary = "periodic"))]
    fn uniform(length: usize, boundary: &str) -> PyResult<Self> {
        d4nlse::LatticeState::uniform(length, self::boundary(boundary)?).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (length, m, boundary = "periodic"))]
    fn plane_wave(length: usize, m: i64, boundary: &str) -> PyResult<Self> {
        d4nlse::LatticeState::plane_wave(length, m, self::boundary(boundary)?).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (length, site, boundary = "periodic"))]
    fn single_site(length: usize, site: usize, boundary: &str) -> PyResult<Self> {
        d4nlse::LatticeState::single_site(length, site, self::boundary(boundary)?).map(Self).map_err(to_py)
    }

    fn normalized(&self) -> PyResult<Self> {
        self.0.normalized().map(Self).map_err(to_py)
    }

    #[getter]
    fn amplitudes(&self) -> Vec<C64> {
        self.0.amplitudes().to_vec()
    }

    #[getter]
    fn densities(&self) -> Vec<f64> {
        self.0.densities()
    }

    #[getter]
    fn boundary(&self) -> &'static str {
        boundary_name(self.0.boundary())
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn overlap(&self, other: &PyLatticeState) -> C64 {
        self.0.overlap(&other.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("LatticeState(length={}, boundary='{}')", self.0.len(), boundary_name(self.0.boundary()))
    }
}

#[pyclass(name = "StationaryState", frozen, get_all)]
struct PyStationaryState {
    state: PyLatticeState,
    mu: f64,
    energy: f64,
    residual: f64,
    converged: bool,
    kind: &'static str,
    three_site_weight: f64,
}

impl From<d4nlse::StationaryState> for PyStationaryState {
    fn from(s: d4nlse::StationaryState) -> Self {
        let class = stationary::classify(&s.state);
        Self {
            state: PyLatticeState(s.state),
            mu: s.mu,
            energy: s.energy,
            residual: s.residual,
            converged: s.converged,
            kind: class.kind.as_str(),
            three_site_weight: class.three_site_weight,
        }
    }
}

#[pymethods]
impl PyStationaryState {
    fn __repr__(&self) -> String {
        format!("StationaryState(kind='{}', energy={}, mu={}, residual={:.2e})", self.kind, self.energy, self.mu, self.residual)
    }
}

#[pyfunction]
fn energy(state: &PyLatticeState, params: &PyModelParams) -> PyResult<f64> {
    lattice::energy(&state.0, &params.0).map_err(to_py)
}

#[pyfunction]
fn rhs(state: &PyLatticeState, params: &PyModelParams) -> Vec<C64> {
    lattice::rhs(&state.0, &params.0)
}

#[pyfunction]
fn chemical_potential(state: &PyLatticeState, params: &PyModelParams) -> PyResult<f64> {
    lattice::chemical_potential(&state.0, &params.0).map_err(to_py)
}

#[pyfunction]
fn fourier(state: &PyLatticeState) -> PyResult<Vec<C64>> {
    lattice::fourier(&state.0).map_err(to_py)
}

#[pyfunction]
fn inverse_fourier(coefficients: Vec<C64>) -> PyResult<PyLatticeState> {
    lattice::inverse_fourier(&coefficients).map(PyLatticeState).map_err(to_py)
}

/// Returns `(times, states, norms, energies)` sampled every `sample_every` steps.
#[pyfunction]
#[pyo3(signature = (state, params, dt = 0.01, steps = 1000, sample_every = 100))]
fn evolve_real(
    py: Python<'_>,
    state: &PyLatticeState,
    params: &PyModelParams,
    dt: f64,
    steps: usize,
    sample_every: usize,
) -> PyResult<(Vec<f64>, Vec<PyLatticeState>, Vec<f64>, Vec<f64>)> {
    let mut cfg = IntegratorConfig::real_time(dt, steps);
    cfg.sample_every = sample_every;
    let traj = py.detach(|| dynamics::evolve_real(&state.0, &params.0, &cfg)).map_err(to_py)?;
    let norms = traj.observables.iter().map(|o| o.norm).collect();
    let energies = traj.observables.iter().map(|o| o.energy).collect();
    Ok((traj.times, traj.states.into_iter().map(PyLatticeState).collect(), norms, energies))
}

#[pyfunction]
#[pyo3(signature = (params, length, restarts = 8, seed = 0))]
fn find_ground_state(py: Python<'_>, params: &PyModelParams, length: usize, restarts: usize, seed: u64) -> PyResult<PyStationaryState> {
    let cfg = IntegratorConfig::imaginary_time().with_seed(seed);
    py.detach(|| dynamics::find_ground_state(&params.0, length, &cfg, restarts)).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (params, length, restarts = 8, seed = 0))]
fn find_highest_state(py: Python<'_>, params: &PyModelParams, length: usize, restarts: usize, seed: u64) -> PyResult<PyStationaryState> {
    let cfg = IntegratorConfig::imaginary_time().with_seed(seed);
    py.detach(|| dynamics::find_highest_state(&params.0, length, &cfg, restarts)).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn solve_self_consistent(py: Python<'_>, params: &PyModelParams, initial: &PyLatticeState) -> PyResult<PyStationaryState> {
    py.detach(|| stationary::solve_self_consistent(&params.0, &initial.0, &SelfConsistentConfig::default()))
        .map(Into::into)
        .map_err(to_py)
}

/// Returns `(e_min, e_max, (alpha, phi_plus, phi_minus))` of the three-site ansatz.
#[pyfunction]
fn three_site_optimize(params: &PyModelParams) -> PyResult<(f64, f64, (f64, f64, f64))> {
    let opt = stationary::three_site_optimize(&params.0).map_err(to_py)?;
    let a = opt.argmin;
    Ok((opt.e_min, opt.e_max, (a.alpha, a.phi_plus, a.phi_minus)))
}

/// Soliton seeded from the three-site optimum and refined self-consistently.
#[pyfunction]
fn soliton(py: Python<'_>, params: &PyModelParams, length: usize) -> PyResult<PyStationaryState> {
    py.detach(|| {
        let opt = stationary::three_site_optimize(&params.0)?;
        let seed = opt.argmin.embed(length, length / 2, Boundary::Periodic)?;
        stationary::solve_self_consistent(&params.0, &seed, &SelfConsistentConfig::default())
    })
    .map(Into::into)
    .map_err(to_py)
}

/// Returns `(kind, three_site_weight, participation_ratio)`.
#[pyfunction]
fn classify(state: &PyLatticeState) -> (&'static str, f64, f64) {
    let c = stationary::classify(&state.0);
    (c.kind.as_str(), c.three_site_weight, c.participation_ratio)
}

#[pyfunction]
fn chiral_transform(state: &PyLatticeState) -> PyLatticeState {
    PyLatticeState(stationary::chiral_transform(&state.0))
}

/// `ε(p)²` around the `k = 0` condensate.
#[pyfunction]
fn dispersion_k0(p: f64, params: &PyModelParams, length: usize) -> f64 {
    stability::dispersion_k0(p, &params.0, length).eps_squared
}

#[pyfunction]
fn dispersion_arbitrary_k(k: f64, p: f64, n_k: f64, params: &PyModelParams) -> f64 {
    stability::dispersion_arbitrary_k(k, p, n_k, &params.0).eps_squared
}

#[pyfunction]
fn condensate_stable_k0(params: &PyModelParams, length: usize) -> bool {
    stability::condensate_stable_k0(&params.0, length)
}

/// Returns `(frequencies, max_growth_rate, unstable)`.
#[pyfunction]
fn numeric_linearization(state: &PyLatticeState, params: &PyModelParams) -> PyResult<(Vec<C64>, f64, bool)> {
    let s = d4nlse::StationaryState::evaluate(state.0.clone(), &params.0, true).map_err(to_py)?;
    let spec = stability::numeric_linearization(&s, &params.0).map_err(to_py)?;
    Ok((spec.frequencies, spec.max_growth_rate, spec.unstable))
}

/// Returns `(state, residual, localization_ratio)`.
#[pyfunction]
fn build_zero_mode(params: &PyModelParams, length: usize) -> PyResult<(PyLatticeState, f64, f64)> {
    let p = edge_modes::build_zero_mode(&params.0, length).map_err(to_py)?;
    Ok((PyLatticeState(p.state), p.residual, p.localization_ratio))
}

/// Localization ratio per grid point, `None` where the construction failed.
#[pyfunction]
#[pyo3(signature = (gammas, length, hopping = 1.0))]
fn gamma_plane_scan(py: Python<'_>, gammas: Vec<C64>, length: usize, hopping: f64) -> PyResult<Vec<Option<f64>>> {
    let rows = py.detach(|| edge_modes::gamma_plane_scan(&gammas, hopping, length)).map_err(to_py)?;
    Ok(rows.into_iter().map(|r| r.localization_ratio).collect())
}

#[pyfunction]
#[pyo3(signature = (j1, u, omega, variant = "+27", hopping = 1.0))]
fn effective_gamma(j1: C64, u: f64, omega: f64, variant: &str, hopping: f64) -> PyResult<C64> {
    let fp = FloquetParams::new(hopping, j1, u, omega).map_err(to_py)?;
    Ok(floquet::effective_gamma(&fp, self::variant(variant)?))
}

/// Stroboscopic state after `periods` drive periods, with the drive tuned to
/// `gamma` under `variant`.
#[pyfunction]
#[pyo3(signature = (state, gamma, omega, periods, variant = "+27", substeps = 600, hopping = 1.0))]
fn evolve_floquet(
    py: Python<'_>,
    state: &PyLatticeState,
    gamma: C64,
    omega: f64,
    periods: usize,
    variant: &str,
    substeps: usize,
    hopping: f64,
) -> PyResult<PyLatticeState> {
    let fp = floquet::drive_for_gamma(gamma, self::variant(variant)?, hopping, omega).map_err(to_py)?;
    py.detach(|| floquet::evolve_floquet(&state.0, &fp, periods, substeps)).map(PyLatticeState).map_err(to_py)
}

/// Returns `(infidelity, dressed_infidelity)` per rung of the `ω` ladder.
#[pyfunction]
#[pyo3(signature = (state, gamma, omegas, time = 2.0, variant = "+27", substeps = 600, hopping = 1.0))]
fn floquet_ladder(
    py: Python<'_>,
    state: &PyLatticeState,
    gamma: C64,
    omegas: Vec<f64>,
    time: f64,
    variant: &str,
    substeps: usize,
    hopping: f64,
) -> PyResult<Vec<(f64, f64)>> {
    let v = self::variant(variant)?;
    let lad = py
        .detach(|| floquet::floquet_ladder(&state.0, gamma, v, hopping, &omegas, time, substeps))
        .map_err(to_py)?;
    Ok(lad.rungs.iter().map(|r| (r.infidelity, r.dressed_infidelity)).collect())
}

#[pyfunction]
#[pyo3(signature = (a, b, spacing, gamma_i, hopping = 1.0))]
fn gaussian_energy(a: f64, b: f64, spacing: f64, gamma_i: f64, hopping: f64) -> PyResult<f64> {
    let g = GaussianAnsatz::new(a, b, spacing, gamma_i).map_err(to_py)?;
    Ok(continuum::gaussian_energy(&g, hopping))
}

#[pyfunction]
#[pyo3(signature = (a, spacing, gamma_i, hopping = 1.0))]
fn optimal_b(a: f64, spacing: f64, gamma_i: f64, hopping: f64) -> PyResult<f64> {
    let g = GaussianAnsatz::new(a, 0.0, spacing, gamma_i).map_err(to_py)?;
    Ok(continuum::optimal_b(a, &g, hopping))
}

#[pyfunction]
#[pyo3(signature = (a, spacing, gamma_i, hopping = 1.0))]
fn reduced_energy(a: f64, spacing: f64, gamma_i: f64, hopping: f64) -> PyResult<f64> {
    let g = GaussianAnsatz::new(a, 0.0, spacing, gamma_i).map_err(to_py)?;
    Ok(continuum::reduced_energy(a, &g, hopping))
}

/// `ε(p)²` of the continuum model.
#[pyfunction]
fn continuum_dispersion(p: f64, hopping: f64, gamma_i: f64, spacing: f64, length: f64) -> f64 {
    continuum::continuum_dispersion(p, hopping, gamma_i, spacing, length).eps_squared
}

#[pymodule]
#[pyo3(name = "d4nlse")]
fn d4nlse_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyLatticeState>()?;
    m.add_class::<PyStationaryState>()?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(rhs, m)?)?;
    m.add_function(wrap_pyfunction!(chemical_potential, m)?)?;
    m.add_function(wrap_pyfunction!(fourier, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_fourier, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_real, m)?)?;
    m.add_function(wrap_pyfunction!(find_ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(find_highest_state, m)?)?;
    m.add_function(wrap_pyfunction!(solve_self_consistent, m)?)?;
    m.add_function(wrap_pyfunction!(three_site_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(soliton, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(chiral_transform, m)?)?;
    m.add_function(wrap_pyfunction!(dispersion_k0, m)?)?;
    m.add_function(wrap_pyfunction!(dispersion_arbitrary_k, m)?)?;
    m.add_function(wrap_pyfunction!(condensate_stable_k0, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_linearization, m)?)?;
    m.add_function(wrap_pyfunction!(build_zero_mode, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_plane_scan, m)?)?;
    m.add_function(wrap_pyfunction!(effective_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_floquet, m)?)?;
    m.add_function(wrap_pyfunction!(floquet_ladder, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_energy, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_b, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_energy, m)?)?;
    m.add_function(wrap_pyfunction!(continuum_dispersion, m)?)?;
    Ok(())
}
