use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::constants::QUAD_TOL_TIGHT;
use crate::error::Result;
use crate::function::RealFunction;
use crate::numerics::integrate_function;

/// A plane polyline rebuilt from a curvature function.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// Points `X(s_j)` at `s_j = j L / n`, `j = 0..=n`.
    pub points: Vec<(f64, f64)>,
    /// Tangent angles `theta(s_j)`.
    pub angles: Vec<f64>,
    /// `|theta(L) - 2 pi|`.
    pub angle_defect: f64,
    /// `|X(L) - X(0)|`.
    pub position_defect: f64,
}

/// `theta(s) = int_0^s k`, `X(s) = int_0^s (cos theta, sin theta)` with
/// `n` Simpson panels.
pub fn reconstruct_curve<K: RealFunction + ?Sized>(k: &K, l: f64, n: usize) -> Result<Curve> {
    let n = n.max(2);
    let h = l / n as f64;
    // Angles at panel ends and midpoints.
    let m = 2 * n;
    let mut theta = Vec::with_capacity(m + 1);
    theta.push(0.0);
    for j in 0..m {
        let a = l * j as f64 / m as f64;
        let b = l * (j + 1) as f64 / m as f64;
        let next = theta[j] + integrate_function(k, a, b, QUAD_TOL_TIGHT)?.value;
        theta.push(next);
    }
    let mut points = Vec::with_capacity(n + 1);
    let mut angles = Vec::with_capacity(n + 1);
    let (mut x, mut y) = (0.0, 0.0);
    points.push((x, y));
    angles.push(0.0);
    for j in 0..n {
        let (t0, t1, t2) = (theta[2 * j], theta[2 * j + 1], theta[2 * j + 2]);
        x += h / 6.0 * (libm::cos(t0) + 4.0 * libm::cos(t1) + libm::cos(t2));
        y += h / 6.0 * (libm::sin(t0) + 4.0 * libm::sin(t1) + libm::sin(t2));
        points.push((x, y));
        angles.push(t2);
    }
    let angle_defect = (theta[m] - 2.0 * PI).abs();
    let position_defect = libm::hypot(x, y);
    Ok(Curve { points, angles, angle_defect, position_defect })
}
