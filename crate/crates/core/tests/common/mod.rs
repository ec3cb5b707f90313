//! Reference implementations written independently of the library code.
#![allow(dead_code)]

use d4nlse::{Boundary, LatticeState, C64};

/// Deterministic amplitudes from a 64-bit LCG, normalized.
pub fn lcg_state(len: usize, seed: u64, boundary: Boundary) -> LatticeState {
    let mut x = seed ^ 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let amps: Vec<C64> = (0..len).map(|_| C64::new(next(), next())).collect();
    LatticeState::new(amps, boundary).unwrap().normalized().unwrap()
}

/// Bond-by-bond evaluation of H = Σ Ψ*_{j+1}[−J + γ(n_{j+1} − n_j)]Ψ_j + c.c.
pub fn energy_oracle(psi: &[C64], periodic: bool, hopping: f64, gamma: C64) -> f64 {
    let l = psi.len();
    let mut total = 0.0;
    let last = if periodic { l } else { l - 1 };
    for j in 0..last {
        let a = psi[j];
        let b = psi[if j + 1 == l { 0 } else { j + 1 }];
        let coupling = gamma * (b.norm_sqr() - a.norm_sqr()) - hopping;
        let bond = b.conj() * coupling * a;
        total += 2.0 * bond.re;
    }
    total
}

/// Wirtinger derivative ∂H/∂Ψ*_j = (∂_x + i∂_y)H / 2 by central differences.
pub fn gradient_oracle(psi: &[C64], periodic: bool, hopping: f64, gamma: C64, h: f64) -> Vec<C64> {
    let mut out = Vec::with_capacity(psi.len());
    for j in 0..psi.len() {
        let shifted = |d: C64| {
            let mut p = psi.to_vec();
            p[j] += d;
            energy_oracle(&p, periodic, hopping, gamma)
        };
        let dx = (shifted(C64::new(h, 0.0)) - shifted(C64::new(-h, 0.0))) / (2.0 * h);
        let dy = (shifted(C64::new(0.0, h)) - shifted(C64::new(0.0, -h))) / (2.0 * h);
        out.push(0.5 * C64::new(dx, dy));
    }
    out
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Brent-free bisection on a continuous function with a sign change.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for the minimum of a unimodal function.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    while (b - a).abs() > 1e-13 * (1.0 + a.abs() + b.abs()) {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    0.5 * (a + b)
}
