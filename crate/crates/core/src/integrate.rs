//! Classical fixed-step fourth-order Runge-Kutta on complex vectors.

use crate::lattice::C64;

pub(crate) struct Rk4 {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4 {
    pub fn new(len: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); len];
        Self { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    /// One step of `dy/dt = f(y)`; `f(y, out)` writes the derivative.
    pub fn step<F>(&mut self, y: &mut [C64], dt: f64, mut f: F)
    where
        F: FnMut(&[C64], &mut [C64]),
    {
        f(y, &mut self.k1);
        for i in 0..y.len() {
            self.tmp[i] = y[i] + 0.5 * dt * self.k1[i];
        }
        f(&self.tmp, &mut self.k2);
        for i in 0..y.len() {
            self.tmp[i] = y[i] + 0.5 * dt * self.k2[i];
        }
        f(&self.tmp, &mut self.k3);
        for i in 0..y.len() {
            self.tmp[i] = y[i] + dt * self.k3[i];
        }
        f(&self.tmp, &mut self.k4);
        let w = dt / 6.0;
        for i in 0..y.len() {
            y[i] += w * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}
