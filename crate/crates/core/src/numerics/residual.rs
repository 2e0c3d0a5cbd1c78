//! Finite-difference checks on evaluated fields.

use alloc::vec::Vec;

use super::field::Field;
use super::grid::Grid2D;
use crate::constants::FD_STEP;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// `y_tt - y_xx = 0`
    Linear,
    /// `y_tt - y_xx = y_t^2 - y_x^2`
    WaveMap,
}

/// Maximum over interior grid nodes of the centered-difference residual.
pub fn fd_residual(field: &dyn Field, grid: &Grid2D, equation: Equation) -> f64 {
    let (nt, nx) = (grid.nt, grid.nx);
    let (dt, dx) = (grid.dt(), grid.dx());
    let row = |i: usize| -> Vec<f64> { (0..=nx).map(|j| field.value(grid.t(i), grid.x(j))).collect() };
    let mut before = row(0);
    let mut here = row(1);
    let mut worst: f64 = 0.0;
    for i in 1..nt {
        let after = row(i + 1);
        for j in 1..nx {
            let ytt = (after[j] - 2.0 * here[j] + before[j]) / (dt * dt);
            let yxx = (here[j + 1] - 2.0 * here[j] + here[j - 1]) / (dx * dx);
            let mut r = ytt - yxx;
            if equation == Equation::WaveMap {
                let yt = (after[j] - before[j]) / (2.0 * dt);
                let yx = (here[j + 1] - here[j - 1]) / (2.0 * dx);
                r -= yt * yt - yx * yx;
            }
            // NaN propagates so that undefined fields never look converged.
            worst = if r.is_nan() { f64::NAN } else { worst.max(r.abs()) };
        }
        before = core::mem::replace(&mut here, after);
    }
    worst
}

/// Sample count of the energy quadrature.
const ENERGY_PANELS: usize = 2048;

/// `int_a^b (y_t^2 + y_x^2) dx` at time `t`, derivatives by centered
/// differences with step `1e-5`.
///
/// Periodic domains use the trapezoid rule, which is spectrally accurate
/// there; otherwise composite Simpson.
pub fn energy(field: &dyn Field, t: f64, domain: (f64, f64), periodic: bool) -> f64 {
    let (a, b) = domain;
    let h = FD_STEP;
    let density = |x: f64| {
        let yt = (field.value(t + h, x) - field.value(t - h, x)) / (2.0 * h);
        let yx = (field.value(t, x + h) - field.value(t, x - h)) / (2.0 * h);
        yt * yt + yx * yx
    };
    let n = ENERGY_PANELS;
    let dx = (b - a) / n as f64;
    if periodic {
        (0..n).map(|k| density(a + k as f64 * dx)).sum::<f64>() * dx
    } else {
        let mut s = density(a) + density(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * density(a + k as f64 * dx);
        }
        s * dx / 3.0
    }
}

/// Largest relative deviation of the energy from its value at the first
/// sample time.
pub fn energy_drift(field: &dyn Field, times: &[f64], domain: (f64, f64), periodic: bool) -> f64 {
    let values: Vec<f64> = times.iter().map(|&t| energy(field, t, domain, periodic)).collect();
    let Some(&e0) = values.first() else {
        return 0.0;
    };
    let scale = e0.abs().max(f64::MIN_POSITIVE);
    values.iter().map(|e| (e - e0).abs() / scale).fold(0.0, f64::max)
}
