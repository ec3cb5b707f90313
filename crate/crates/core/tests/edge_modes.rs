mod common;

use approx::assert_abs_diff_eq;
use common::bisect;
use d4nlse::edge_modes::{build_zero_mode, gamma_plane_scan, localization_ratio, singleton, zero_mode_from_seed};
use d4nlse::lattice::rhs;
use d4nlse::stationary::chiral_transform;
use d4nlse::{Boundary, Error, ModelParams, C64};

fn rhs_norm(state: &d4nlse::LatticeState, params: &ModelParams) -> f64 {
    rhs(state, params).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn singleton_is_exact_on_any_chain() {
    let params = ModelParams::unit(C64::new(-1.0, 0.0));
    for len in [3, 4, 8, 9, 21] {
        let s = singleton(len).unwrap();
        assert!(rhs(&s, &params).iter().all(|z| *z == C64::new(0.0, 0.0)));
    }
    let p = build_zero_mode(&params, 21).unwrap();
    assert_eq!(p.residual, 0.0);
    assert_eq!(p.localization_ratio, 0.0);
    assert_eq!(p.state.amplitudes()[0], C64::new(1.0, 0.0));
}

#[test]
fn strong_real_coupling_residual() {
    let params = ModelParams::unit(C64::new(-1.5, 0.0));
    let p = build_zero_mode(&params, 21).unwrap();
    assert!(rhs_norm(&p.state, &params) < 1e-10);
    assert_abs_diff_eq!(p.state.norm_sqr(), 1.0, epsilon = 1e-12);
}

#[test]
fn imaginary_coupling_spreads_evenly() {
    for gi in [-0.8, 0.3, 1.0] {
        let params = ModelParams::unit(C64::new(0.0, gi));
        let p = build_zero_mode(&params, 9).unwrap();
        assert_abs_diff_eq!(p.localization_ratio, 1.0, epsilon = 1e-8);
        let n = p.state.densities();
        for j in (0..9).step_by(2) {
            assert_abs_diff_eq!(n[j], 0.2, epsilon = 1e-8);
        }
    }
}

#[test]
fn first_ratio_matches_a_scalar_root_oracle() {
    // with |Ψ₁|² fixed, |Ψ₃|² is the smallest positive root of
    // x·|−J + γ*x|² = |J + γ|Ψ₁|²|²·|Ψ₁|²
    let gamma = C64::new(-0.5, 0.0);
    let params = ModelParams::unit(gamma);
    let p = build_zero_mode(&params, 21).unwrap();
    let n = p.state.densities();
    let n1 = n[0];
    let target = (1.0 + gamma * n1).norm_sqr() * n1;
    let f = |x: f64| x * (-1.0 + gamma.conj() * x).norm_sqr() - target;
    // scan for the first sign change, then refine
    let steps = 10_000;
    let mut lo = 0.0;
    let mut hi = n1;
    for i in 1..=steps {
        let x = n1 * i as f64 / steps as f64;
        if f(x) >= 0.0 {
            hi = x;
            lo = n1 * (i - 1) as f64 / steps as f64;
            break;
        }
    }
    let n3 = bisect(f, lo, hi);
    assert_abs_diff_eq!(localization_ratio(&p), n3 / n1, epsilon = 1e-10);
    assert!(p.localization_ratio > 0.0 && p.localization_ratio < 1.0);
}

#[test]
fn ratio_grows_with_imaginary_coupling() {
    let ratio = |g: C64| build_zero_mode(&ModelParams::unit(g), 21).unwrap().localization_ratio;
    // equal distance 0.3 from γ = −1
    let flat = ratio(C64::new(-1.3, 0.0));
    let up = ratio(C64::new(-1.0, 0.3));
    assert!(up > flat, "{up} vs {flat}");
    let further = ratio(C64::new(-1.0, 0.6));
    assert!(further > up);
    assert!(ratio(C64::new(-0.6, 0.0)) > ratio(C64::new(-0.9, 0.0)));
}

#[test]
fn odd_sites_carry_the_whole_mode() {
    for g in [C64::new(-0.4, 0.7), C64::new(-1.8, -0.2), C64::new(0.6, 0.5)] {
        let params = ModelParams::unit(g);
        for len in [9, 21, 29] {
            let p = build_zero_mode(&params, len).unwrap();
            assert!(p.residual < 1e-10, "γ = {g}, L = {len}: {}", p.residual);
            assert!(rhs_norm(&p.state, &params) < 1e-10);
            let f = rhs(&p.state, &params);
            for j in (1..len).step_by(2) {
                assert_eq!(p.state.amplitudes()[j], C64::new(0.0, 0.0));
                assert!(f[j].norm() < 1e-12);
            }
            assert_eq!(p.state.boundary(), Boundary::Open);
        }
    }
}

#[test]
fn positive_real_part_seeds_from_the_right() {
    let params = ModelParams::unit(C64::new(0.8, 0.2));
    let p = build_zero_mode(&params, 21).unwrap();
    assert!(p.mirrored);
    let n = p.state.densities();
    assert_abs_diff_eq!(p.localization_ratio, n[18] / n[20], epsilon = 1e-15);
}

#[test]
fn chiral_image_is_also_a_zero_mode() {
    let params = ModelParams::unit(C64::new(-0.7, 0.4));
    let p = build_zero_mode(&params, 21).unwrap();
    let image = chiral_transform(&p.state);
    assert!(rhs_norm(&image, &params) < 1e-10);
}

#[test]
fn construction_errors() {
    let params = ModelParams::unit(C64::new(-0.5, 0.0));
    assert!(matches!(build_zero_mode(&params, 20), Err(Error::EvenZeroMode(20))));
    assert!(matches!(build_zero_mode(&params, 1), Err(Error::TooFewSites(1))));
    assert!(zero_mode_from_seed(&params, 9, 0.0).is_err());
    let raw = zero_mode_from_seed(&params, 9, 0.5).unwrap();
    assert!(rhs_norm(&raw, &params) < 1e-12);
    assert!(gamma_plane_scan(&[C64::new(-1.0, 0.0)], 1.0, 8).is_err());
}

#[test]
fn full_plane_scan_completes() {
    let mut grid = Vec::new();
    for i in 0..41 {
        for r in 0..41 {
            grid.push(C64::new(-2.0 + 2.0 * r as f64 / 40.0, -1.0 + 2.0 * i as f64 / 40.0));
        }
    }
    let rows = gamma_plane_scan(&grid, 1.0, 21).unwrap();
    assert_eq!(rows.len(), grid.len());
    let valid = rows.iter().filter(|r| r.localization_ratio.is_some()).count();
    assert!(valid as f64 > 0.95 * grid.len() as f64, "{valid} valid points");
    let at_minus_one = rows.iter().find(|r| r.gamma == C64::new(-1.0, 0.0)).unwrap();
    assert_eq!(at_minus_one.localization_ratio, Some(0.0));
    for (r, g) in rows.iter().zip(&grid) {
        assert_eq!(r.gamma, *g);
        if let Some(res) = r.residual {
            assert!(res < 1e-10);
        }
    }
}
