mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use common::{energy_oracle, max_abs_diff};
use d4nlse::dynamics::{find_ground_state, IntegratorConfig};
use d4nlse::lattice::energy;
use d4nlse::stationary::{
    chiral_transform, classify, classify_with, default_branch_grid, solve_self_consistent, soliton_branch_trace,
    three_site_critical_gamma, three_site_energy, three_site_optimize, uniform_branch_grid, ClassifyThresholds,
    SelfConsistentConfig, StateKind, ThreeSiteAnsatz,
};
use d4nlse::{Boundary, Error, LatticeState, ModelParams, StationaryState, C64};

fn ansatz_seed(params: &ModelParams, len: usize) -> LatticeState {
    three_site_optimize(params).unwrap().argmin.embed(len, len / 2, Boundary::Periodic).unwrap()
}

#[test]
fn chiral_transform_flips_momentum_and_chemical_potential() {
    let params = ModelParams::unit(C64::new(0.3, 1.0));
    let pw = LatticeState::uniform(10, Boundary::Periodic).unwrap();
    let flipped = StationaryState::evaluate(chiral_transform(&pw), &params, true).unwrap();
    let expected = LatticeState::plane_wave(10, 5, Boundary::Periodic).unwrap();
    assert!(max_abs_diff(flipped.state.amplitudes(), expected.amplitudes()) < 1e-14);
    assert_abs_diff_eq!(flipped.mu, 2.0, epsilon = 1e-14);
    assert_abs_diff_eq!(flipped.energy, 2.0, epsilon = 1e-14);
    let twice = chiral_transform(&chiral_transform(&pw));
    assert_eq!(twice.amplitudes(), pw.amplitudes());
}

#[test]
fn ansatz_energy_examples() {
    let p = ModelParams::unit(C64::new(-0.7, 2.1));
    assert_eq!(three_site_energy(&ThreeSiteAnsatz::new(1.0, 0.3, 1.1).unwrap(), &p), 0.0);
    let free = ModelParams::unit(C64::new(0.0, 0.0));
    let flat = ThreeSiteAnsatz::new(1.0 / 3.0, 0.0, 0.0).unwrap();
    assert_abs_diff_eq!(three_site_energy(&flat, &free), -4.0 / 3.0, epsilon = 1e-14);
}

#[test]
fn optimized_ansatz_agrees_with_the_embedded_lattice_energy() {
    for gamma in [C64::new(2.5, 0.0), C64::new(0.0, -3.0), C64::new(1.0, 1.0)] {
        let params = ModelParams::unit(gamma);
        let opt = three_site_optimize(&params).unwrap();
        let embedded = opt.argmin.embed(7, 3, Boundary::Open).unwrap();
        assert_abs_diff_eq!(energy(&embedded, &params).unwrap(), opt.e_min, epsilon = 1e-12);
        let direct = energy_oracle(embedded.amplitudes(), false, 1.0, gamma);
        assert_abs_diff_eq!(direct, opt.e_min, epsilon = 1e-12);
        assert_abs_diff_eq!(opt.e_max, -opt.e_min, epsilon = 1e-9);
    }
}

#[test]
fn free_ansatz_optimum_matches_a_dense_scan() {
    let free = ModelParams::unit(C64::new(0.0, 0.0));
    let mut best = f64::INFINITY;
    for i in 1..=400 {
        let alpha = i as f64 / 400.0;
        for a in 0..24 {
            for b in 0..24 {
                let (pp, pm) = (2.0 * PI * a as f64 / 24.0, 2.0 * PI * b as f64 / 24.0);
                best = best.min(three_site_energy(&ThreeSiteAnsatz::new(alpha, pp, pm).unwrap(), &free));
            }
        }
    }
    let opt = three_site_optimize(&free).unwrap();
    assert!(opt.e_min <= best + 1e-12);
    assert_abs_diff_eq!(opt.e_min, best, epsilon = 1e-5);
    assert!(opt.e_min > -2.0);
    assert_abs_diff_eq!(opt.e_min, -2f64.sqrt(), epsilon = 1e-9);
}

#[test]
fn ansatz_crossing_for_real_coupling() {
    let g = three_site_critical_gamma(0.0, 1.0, 1.0, 4.0, 1e-4).unwrap();
    assert_abs_diff_eq!(g, 2.53, epsilon = 0.01);
    assert!(matches!(three_site_critical_gamma(0.0, 1.0, 0.5, 1.0, 1e-3), Err(Error::BracketFailure { .. })));
}

#[test]
fn ansatz_is_an_upper_bound_that_tightens() {
    let cfg = IntegratorConfig::imaginary_time().with_seed(2);
    let mut prev_rel = f64::INFINITY;
    for gi in [3.0, 4.0, 5.0, 6.0] {
        let params = ModelParams::unit(C64::new(0.0, gi));
        let ansatz = three_site_optimize(&params).unwrap().e_min;
        let full = find_ground_state(&params, 29, &cfg, 4).unwrap().energy;
        assert!(ansatz >= full - 1e-9, "γ_I = {gi}: ansatz {ansatz} below ground {full}");
        let rel = (ansatz - full).abs() / full.abs();
        assert!(rel < prev_rel, "relative error grew at γ_I = {gi}");
        prev_rel = rel;
    }
}

#[test]
fn classification_examples() {
    let u = LatticeState::uniform(12, Boundary::Periodic).unwrap();
    let c = classify(&u);
    assert_eq!(c.kind, StateKind::PlaneWave);
    assert_abs_diff_eq!(c.participation_ratio, 12.0, epsilon = 1e-12);
    for m in 0..12 {
        assert_eq!(classify(&LatticeState::plane_wave(12, m, Boundary::Periodic).unwrap()).kind, StateKind::PlaneWave);
    }
    let single = classify(&LatticeState::single_site(12, 11, Boundary::Periodic).unwrap());
    assert_eq!(single.kind, StateKind::Soliton);
    assert_eq!(single.three_site_weight, 1.0);
    let strict = ClassifyThresholds { soliton_weight: 1.5, ..ClassifyThresholds::default() };
    assert_eq!(classify_with(&LatticeState::single_site(12, 0, Boundary::Open).unwrap(), &strict).kind, StateKind::Other);
}

#[test]
fn self_consistent_free_lattice() {
    let params = ModelParams::unit(C64::new(0.0, 0.0));
    let amps: Vec<C64> = (0..11).map(|j| C64::new(1.0 + 0.1 * (j as f64).sin(), 0.0)).collect();
    let init = LatticeState::new(amps, Boundary::Periodic).unwrap().normalized().unwrap();
    let s = solve_self_consistent(&params, &init, &SelfConsistentConfig::default()).unwrap();
    assert!(s.converged);
    assert_abs_diff_eq!(s.mu, -2.0, epsilon = 1e-12);
}

#[test]
fn self_consistent_matches_imaginary_time_soliton() {
    let params = ModelParams::unit(C64::new(0.0, -4.0));
    let it = find_ground_state(&params, 29, &IntegratorConfig::imaginary_time().with_seed(3), 4).unwrap();
    let sc = solve_self_consistent(&params, &ansatz_seed(&params, 29), &SelfConsistentConfig::default()).unwrap();
    assert!(sc.converged);
    assert_abs_diff_eq!(sc.energy, it.energy, epsilon = 1e-8);
    assert!(classify(&sc.state).three_site_weight > 0.95);
    assert_eq!(classify(&chiral_transform(&sc.state)).kind, StateKind::Soliton);
}

#[test]
fn coexistence_window_holds_across_its_width() {
    let cfg = SelfConsistentConfig::default();
    for gi in [1.70, 1.75, 1.80, 1.85, 1.88] {
        let params = ModelParams::unit(C64::new(0.0, gi));
        let pw = solve_self_consistent(&params, &LatticeState::uniform(29, Boundary::Periodic).unwrap(), &cfg).unwrap();
        assert!(pw.residual < 1e-8);
        assert_abs_diff_eq!(pw.energy, -2.0, epsilon = 1e-10);
        let sol = solve_self_consistent(&params, &ansatz_seed(&params, 29), &cfg).unwrap();
        assert!(sol.converged && sol.residual < 1e-8, "γ_I = {gi}");
        assert_eq!(classify(&sol.state).kind, StateKind::Soliton);
        assert!(sol.energy > -2.0, "γ_I = {gi}: E = {}", sol.energy);
    }
}

#[test]
fn branch_chemical_potential_is_monotone() {
    let grid = default_branch_grid(1.5, 6.0);
    assert_abs_diff_eq!(grid[0], 6.0);
    assert!(grid.windows(2).all(|w| w[1] < w[0]));
    let trace = soliton_branch_trace(FRAC_PI_2, 1.0, 29, &grid, &SelfConsistentConfig::default()).unwrap();
    let on: Vec<_> = trace.points.iter().filter(|p| p.on_branch()).collect();
    // μ rises towards the band as |γ| falls; points are in trace order, which
    // includes the refinement steps in increasing depth
    let mut sorted = on.clone();
    sorted.sort_by(|a, b| b.gamma_abs.total_cmp(&a.gamma_abs));
    assert!(sorted.windows(2).all(|w| w[1].mu > w[0].mu));
    assert!(sorted[0].mu < -6.0);
}

#[test]
fn branch_grid_validation() {
    let cfg = SelfConsistentConfig::default();
    assert!(soliton_branch_trace(FRAC_PI_2, 1.0, 15, &[2.0, 3.0], &cfg).is_err());
    assert!(soliton_branch_trace(FRAC_PI_2, 1.0, 15, &[11.0, 3.0], &cfg).is_err());
    assert!(soliton_branch_trace(FRAC_PI_2, 1.0, 15, &[], &cfg).unwrap().points.is_empty());
    let g = uniform_branch_grid(1.5, 6.0, 10);
    assert_eq!((g[0], g[9]), (6.0, 1.5));
}

#[test]
fn self_consistent_rejects_bad_input() {
    let params = ModelParams::unit(C64::new(0.0, 1.0));
    let big = LatticeState::new(vec![C64::new(1.0, 0.0); 5], Boundary::Periodic).unwrap();
    assert!(solve_self_consistent(&params, &big, &SelfConsistentConfig::default()).is_err());
    let bad = SelfConsistentConfig { mixing: 0.0, ..SelfConsistentConfig::default() };
    let u = LatticeState::uniform(5, Boundary::Periodic).unwrap();
    assert!(solve_self_consistent(&params, &u, &bad).is_err());
}
