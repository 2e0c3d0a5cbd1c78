use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expr::PointProfile;
use crate::numerics::gauss_legendre;

/// A real function on three-dimensional space.
pub trait SpatialFunction: Send + Sync {
    fn value(&self, p: &[f64; 3]) -> f64;
}

impl SpatialFunction for PointProfile {
    fn value(&self, p: &[f64; 3]) -> f64 {
        PointProfile::value(self, p)
    }
}

impl<F: Fn(&[f64; 3]) -> f64 + Send + Sync> SpatialFunction for F {
    fn value(&self, p: &[f64; 3]) -> f64 {
        self(p)
    }
}

/// Product rule on the unit sphere: Gauss-Legendre in `cos(polar angle)`
/// times the trapezoid rule with `2 * order` azimuths. Weights sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    order: usize,
    nodes: Vec<([f64; 3], f64)>,
}

impl SphereRule {
    pub fn new(order: usize) -> Result<SphereRule> {
        if order == 0 {
            return Err(Error::Invalid("sphere quadrature order must be positive".into()));
        }
        let (mu, w) = gauss_legendre(order);
        let m = 2 * order;
        let mut nodes = Vec::with_capacity(order * m);
        for (&c, &wi) in mu.iter().zip(&w) {
            let s = libm::sqrt((1.0 - c * c).max(0.0));
            for j in 0..m {
                let phi = 2.0 * PI * j as f64 / m as f64;
                let dir = [s * libm::cos(phi), s * libm::sin(phi), c];
                nodes.push((dir, wi / (2.0 * m as f64)));
            }
        }
        Ok(SphereRule { order, nodes })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Mean of `h` over the sphere of radius `|r|` about `x`.
    pub fn mean(&self, h: &dyn SpatialFunction, x: &[f64; 3], r: f64) -> f64 {
        let r = r.abs();
        if r == 0.0 {
            return h.value(x);
        }
        let mut acc = 0.0;
        for (d, w) in &self.nodes {
            let p = [x[0] + r * d[0], x[1] + r * d[1], x[2] + r * d[2]];
            acc += w * h.value(&p);
        }
        acc
    }
}

/// Mean of `h` over the sphere of radius `|r|` about `x`, with a rule of
/// the given order.
pub fn spherical_mean(h: &dyn SpatialFunction, x: &[f64; 3], r: f64, quad_order: usize) -> Result<f64> {
    Ok(SphereRule::new(quad_order)?.mean(h, x, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PointProfile {
        PointProfile::parse(s).unwrap()
    }

    #[test]
    fn constants_and_linear_functions() {
        let x = [0.3, -1.2, 2.0];
        for r in [0.0, 0.4, -0.4, 3.0] {
            assert!((spherical_mean(&p("7"), &x, r, 16).unwrap() - 7.0).abs() < 1e-13);
            assert!((spherical_mean(&p("x"), &x, r, 16).unwrap() - 0.3).abs() < 1e-13);
        }
    }

    #[test]
    fn squared_norm() {
        let h = p("x^2 + y^2 + z^2");
        assert!((spherical_mean(&h, &[0.0; 3], 1.5, 16).unwrap() - 2.25).abs() < 1e-13);
        let x = [1.0, 2.0, -0.5];
        let m = spherical_mean(&h, &x, 0.7, 16).unwrap();
        assert!((m - (5.25 + 0.49)).abs() < 1e-13);
    }

    #[test]
    fn even_in_r() {
        let h = p("exp(-(x^2 + y^2 + z^2)) * (1 + x*y)");
        let rule = SphereRule::new(12).unwrap();
        let x = [0.2, 0.1, -0.4];
        assert_eq!(rule.mean(&h, &x, 0.9), rule.mean(&h, &x, -0.9));
        assert_eq!(rule.len(), 12 * 24);
    }

    #[test]
    fn closures_are_spatial_functions() {
        let f = |q: &[f64; 3]| q[2] * q[2];
        // Mean of z^2 over the sphere of radius r about 0 is r^2 / 3.
        assert!((spherical_mean(&f, &[0.0; 3], 3.0, 8).unwrap() - 3.0).abs() < 1e-13);
    }
}
