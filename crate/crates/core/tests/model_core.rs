mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use common::{energy_oracle, gradient_oracle, lcg_state, max_abs_diff};
use d4nlse::lattice::{self, chemical_potential, energy, fourier, inverse_fourier, momentum_grid, rhs, vertex};
use d4nlse::{Boundary, Error, LatticeState, ModelParams, C64};

#[test]
fn energy_matches_direct_summation_on_five_sites() {
    let params = ModelParams::new(1.0, C64::new(0.7, 0.3)).unwrap();
    for boundary in [Boundary::Periodic, Boundary::Open] {
        let s = lcg_state(5, 42, boundary);
        let oracle = energy_oracle(s.amplitudes(), boundary == Boundary::Periodic, 1.0, params.gamma());
        assert_abs_diff_eq!(energy(&s, &params).unwrap(), oracle, epsilon = 1e-14);
    }
}

#[test]
fn chemical_potential_matches_oracle_gradient() {
    let params = ModelParams::new(1.0, C64::new(0.7, 0.3)).unwrap();
    let s = lcg_state(5, 42, Boundary::Periodic);
    let f = gradient_oracle(s.amplitudes(), true, 1.0, params.gamma(), 1e-5);
    let mu: f64 = s.amplitudes().iter().zip(&f).map(|(a, b)| (a.conj() * b).re).sum();
    assert_abs_diff_eq!(chemical_potential(&s, &params).unwrap(), mu, epsilon = 1e-9);
}

#[test]
fn rhs_is_the_energy_gradient() {
    for (len, seed, gamma, boundary) in [
        (5, 1, C64::new(0.7, 0.3), Boundary::Periodic),
        (8, 2, C64::new(-2.0, 1.5), Boundary::Open),
        (11, 3, C64::new(0.0, -4.0), Boundary::Periodic),
    ] {
        let params = ModelParams::new(1.3, gamma).unwrap();
        let s = lcg_state(len, seed, boundary);
        let f = rhs(&s, &params);
        let g = gradient_oracle(s.amplitudes(), boundary == Boundary::Periodic, 1.3, gamma, 1e-5);
        let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max_abs_diff(&f, &g) < 1e-6 * scale, "len {len}");
    }
}

#[test]
fn plane_waves_are_eigenstates() {
    let params = ModelParams::new(1.0, C64::new(0.4, -2.2)).unwrap();
    for m in -3..=3 {
        let s = LatticeState::plane_wave(12, m, Boundary::Periodic).unwrap();
        let k = 2.0 * PI * m as f64 / 12.0;
        let expected = -2.0 * k.cos();
        let f = rhs(&s, &params);
        for (fj, a) in f.iter().zip(s.amplitudes()) {
            assert_abs_diff_eq!((fj - expected * a).norm(), 0.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(chemical_potential(&s, &params).unwrap(), expected, epsilon = 1e-14);
    }
}

#[test]
fn singleton_is_a_zero_mode_at_minus_j() {
    let params = ModelParams::new(1.0, C64::new(-1.0, 0.0)).unwrap();
    for len in [4, 7] {
        let s = LatticeState::single_site(len, 0, Boundary::Open).unwrap();
        assert!(rhs(&s, &params).iter().all(|z| *z == C64::new(0.0, 0.0)));
    }
}

#[test]
fn uniform_density_hides_the_coupling() {
    let free = ModelParams::unit(C64::new(0.0, 0.0));
    let amps: Vec<C64> = (0..9).map(|j| C64::from_polar(1.0 / 3.0, 0.37 * (j * j) as f64)).collect();
    let s = LatticeState::new(amps, Boundary::Periodic).unwrap();
    for gamma in [C64::new(3.0, 0.0), C64::new(-1.0, 2.5)] {
        let p = ModelParams::unit(gamma);
        assert_abs_diff_eq!(energy(&s, &p).unwrap(), energy(&s, &free).unwrap(), epsilon = 1e-12);
    }
}

#[test]
fn unnormalized_input_is_rejected() {
    let params = ModelParams::unit(C64::new(1.0, 0.0));
    let s = LatticeState::new(vec![C64::new(1.0, 0.0); 4], Boundary::Periodic).unwrap();
    assert!(matches!(energy(&s, &params), Err(Error::NotNormalized { .. })));
    assert!(matches!(chemical_potential(&s, &params), Err(Error::NotNormalized { .. })));
    assert!(LatticeState::new(vec![C64::new(1.0, 0.0); 2], Boundary::Periodic).is_err());
    assert!(ModelParams::new(0.0, C64::new(0.0, 0.0)).is_err());
}

#[test]
fn vertex_examples() {
    let p = ModelParams::unit(C64::new(0.0, 1.0));
    // 2iγ_I(cos 0 − cos π/2) = 2i
    assert_abs_diff_eq!((vertex(0.0, FRAC_PI_2, &p) - C64::new(0.0, 2.0)).norm(), 0.0, epsilon = 1e-15);
    let q = ModelParams::unit(C64::new(1.3, -0.4));
    for &a in &momentum_grid(10) {
        assert_eq!(vertex(a, a, &q), C64::new(0.0, 0.0));
        for &b in &momentum_grid(10) {
            assert_abs_diff_eq!((vertex(a, b, &q) + vertex(b, a, &q)).norm(), 0.0, epsilon = 1e-15);
        }
    }
}

#[test]
fn fourier_examples() {
    let u = LatticeState::uniform(8, Boundary::Periodic).unwrap();
    let c = fourier(&u).unwrap();
    assert_abs_diff_eq!(c[0].norm(), 1.0, epsilon = 1e-14);
    assert!(c[1..].iter().all(|z| z.norm() < 1e-14));

    let pw = LatticeState::plane_wave(8, 3, Boundary::Periodic).unwrap();
    let c = fourier(&pw).unwrap();
    for (m, z) in c.iter().enumerate() {
        assert_abs_diff_eq!(z.norm(), if m == 3 { 1.0 } else { 0.0 }, epsilon = 1e-14);
    }
    assert_abs_diff_eq!(momentum_grid(8)[3], 3.0 * PI / 4.0, epsilon = 1e-15);

    let s = lcg_state(13, 9, Boundary::Periodic);
    let c = fourier(&s).unwrap();
    assert_abs_diff_eq!(c.iter().map(|z| z.norm_sqr()).sum::<f64>(), 1.0, epsilon = 1e-13);
    let back = inverse_fourier(&c).unwrap();
    assert!(max_abs_diff(back.amplitudes(), s.amplitudes()) < 1e-13);

    assert_eq!(fourier(&lcg_state(5, 1, Boundary::Open)), Err(Error::UnsupportedBoundary));
}

#[test]
fn momentum_grid_is_folded() {
    let g = momentum_grid(7);
    assert!(g.iter().all(|k| *k > -PI && *k <= PI));
    assert_eq!(lattice::fold_momentum(PI), PI);
    assert_abs_diff_eq!(lattice::fold_momentum(-PI), PI, epsilon = 1e-15);
}
