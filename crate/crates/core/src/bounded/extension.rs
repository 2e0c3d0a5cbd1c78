use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::BoundaryKind;
use crate::constants::COMPATIBILITY_TOL;
use crate::error::{Error, Result};
use crate::function::RealFunction;

/// The `2L`-periodic odd (Dirichlet) or even (Neumann) extension of a
/// function given on `[0, L]`.
#[derive(Clone)]
pub struct Extension {
    p: Arc<dyn RealFunction>,
    l: f64,
    kind: BoundaryKind,
}

/// Odd `2L`-periodic extension; needs `p` and `p''` to vanish at `0` and `L`.
pub fn odd_extension(p: Arc<dyn RealFunction>, l: f64) -> Result<Extension> {
    Extension::new(p, l, BoundaryKind::Dirichlet)
}

/// Even `2L`-periodic extension; needs `p'` to vanish at `0` and `L`.
pub fn even_extension(p: Arc<dyn RealFunction>, l: f64) -> Result<Extension> {
    Extension::new(p, l, BoundaryKind::Neumann)
}

impl Extension {
    fn new(p: Arc<dyn RealFunction>, l: f64, kind: BoundaryKind) -> Result<Extension> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Invalid(format!("interval length must be positive, got {l}")));
        }
        let orders: &[usize] = match kind {
            BoundaryKind::Dirichlet => &[0, 2],
            BoundaryKind::Neumann => &[1],
        };
        for &j in orders {
            for x in [0.0, l] {
                let r = p.derivative(x, j);
                if !(r.abs() <= COMPATIBILITY_TOL) {
                    return Err(Error::Compatibility(format!(
                        "derivative of order {j} is {r:e} at x = {x}, not zero; the {} extension would not be C2",
                        if kind == BoundaryKind::Dirichlet { "odd" } else { "even" }
                    )));
                }
            }
        }
        Ok(Extension { p, l, kind })
    }

    /// Without the endpoint check, for data that are compatible by construction.
    pub(crate) fn unchecked(p: Arc<dyn RealFunction>, l: f64, kind: BoundaryKind) -> Extension {
        Extension { p, l, kind }
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    /// `x` reduced to `[-L, L)`.
    fn reduce(&self, x: f64) -> f64 {
        let two_l = 2.0 * self.l;
        x - two_l * libm::floor((x + self.l) / two_l)
    }
}

impl RealFunction for Extension {
    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    fn derivative(&self, x: f64, order: usize) -> f64 {
        let y = self.reduce(x);
        if y >= 0.0 {
            return self.p.derivative(y, order);
        }
        // d^n/dx^n [s p(-x)] = s (-1)^n p^(n)(-x)
        let parity = if self.kind == BoundaryKind::Dirichlet { -1.0 } else { 1.0 };
        let sign = if order % 2 == 0 { parity } else { -parity };
        sign * self.p.derivative(-y, order)
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let lo = libm::floor(a / self.l) as i64;
        let hi = libm::ceil(b / self.l) as i64;
        (lo..=hi).map(|j| j as f64 * self.l).filter(|&p| p > a && p < b).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Profile;
    use crate::periodic::analyze;

    fn p(s: &str) -> Arc<dyn RealFunction> {
        Arc::new(Profile::parse(s).unwrap())
    }

    #[test]
    fn sine_extends_to_itself() {
        let e = odd_extension(p("sin(pi*x/2)"), 2.0).unwrap();
        for i in 0..40 {
            let x = -7.0 + 0.37 * i as f64;
            assert!((e.value(x) - libm::sin(core::f64::consts::PI * x / 2.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn cosine_extends_to_itself() {
        let e = even_extension(p("cos(pi*x)"), 1.0).unwrap();
        for i in 0..40 {
            let x = -3.0 + 0.17 * i as f64;
            for n in 0..3 {
                let want = Profile::parse("cos(pi*x)").unwrap().derivative(x, n);
                assert!((e.derivative(x, n) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parity_of_spectrum() {
        assert!(odd_extension(p("x^3*(1-x)^3"), 1.0).is_ok());
        let odd = odd_extension(p("sin(pi*x) + sin(3*pi*x)"), 1.0).unwrap();
        let s = analyze(&odd, 2.0, 16).unwrap();
        for k in 0..=16 {
            assert!(s.a(k).abs() < 1e-10);
            if k % 2 == 0 {
                assert!(s.b(k).abs() < 1e-10);
            }
        }
        let even = even_extension(p("x^2*(1-x)^2 + 3"), 1.0).unwrap();
        let s = analyze(&even, 2.0, 16).unwrap();
        for k in 0..=16 {
            assert!(s.b(k).abs() < 1e-10);
        }
    }

    #[test]
    fn incompatible_data_rejected() {
        assert!(matches!(odd_extension(p("x"), 1.0), Err(Error::Compatibility(_))));
        assert!(matches!(even_extension(p("x"), 1.0), Err(Error::Compatibility(_))));
        assert!(odd_extension(p("0"), 1.0).is_ok());
    }
}
