//! Scalar functions of one real variable with derivatives.

use alloc::vec::Vec;

/// Fractional part, `x - trunc(x)`.
pub(crate) fn fract(x: f64) -> f64 {
    x - libm::trunc(x)
}

/// A real function of one variable that knows its derivatives.
///
/// Implementations return `NaN` outside their domain or for unsupported
/// derivative orders; callers that verify results treat non-finite values as
/// failures.
pub trait RealFunction: Send + Sync {
    fn value(&self, x: f64) -> f64;

    /// Derivative of the given order at `x`; order 0 is the value.
    fn derivative(&self, x: f64, order: usize) -> f64;

    /// Points in `(a, b)` where the function is only finitely smooth.
    /// Integrators split there.
    fn breakpoints(&self, _a: f64, _b: f64) -> Vec<f64> {
        Vec::new()
    }
}

impl<F: RealFunction + ?Sized> RealFunction for &F {
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        (**self).derivative(x, order)
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        (**self).breakpoints(a, b)
    }
}

impl<F: RealFunction + ?Sized> RealFunction for alloc::sync::Arc<F> {
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        (**self).derivative(x, order)
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        (**self).breakpoints(a, b)
    }
}

impl<F: RealFunction + ?Sized> RealFunction for alloc::boxed::Box<F> {
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        (**self).derivative(x, order)
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        (**self).breakpoints(a, b)
    }
}

/// The constant function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl RealFunction for Constant {
    fn value(&self, _x: f64) -> f64 {
        self.0
    }
    fn derivative(&self, _x: f64, order: usize) -> f64 {
        if order == 0 {
            self.0
        } else {
            0.0
        }
    }
}

/// `a * f + b * g`.
pub struct Combination<F, G> {
    pub a: f64,
    pub f: F,
    pub b: f64,
    pub g: G,
}

impl<F: RealFunction, G: RealFunction> RealFunction for Combination<F, G> {
    fn value(&self, x: f64) -> f64 {
        self.a * self.f.value(x) + self.b * self.g.value(x)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.a * self.f.derivative(x, order) + self.b * self.g.derivative(x, order)
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut pts = self.f.breakpoints(a, b);
        pts.extend(self.g.breakpoints(a, b));
        sort_dedup(&mut pts);
        pts
    }
}

/// Sorts and removes (near-)duplicate points.
pub fn sort_dedup(pts: &mut Vec<f64>) {
    pts.retain(|p| p.is_finite());
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
}
