use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::reduced::ReducedTerminal;
use crate::constants::{BRIDGE_ENDPOINT_TOL, BRIDGE_INTEGRAL_TOL, BRIDGE_SLOPE_TOL, QUAD_TOL_TIGHT};
use crate::error::{BridgeCondition, Error, Result};
use crate::function::RealFunction;
use crate::numerics::integrate_split;

/// Which bridge to build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BridgeChoice {
    /// The quadratic `u = f~''(0)/(2T) x^2 + f~'(0)/T x + f~(0)/T - f~''(0) T/6`.
    Poly,
    /// A cosine arch on `[-T, 0)` joined to a parabola on `[0, T]`.
    Sine,
    /// `(1 - theta) * Poly + theta * Sine`. The three conditions are linear
    /// in `u`, so every member satisfies them.
    Blend(f64),
}

impl BridgeChoice {
    fn theta(self) -> f64 {
        match self {
            BridgeChoice::Poly => 0.0,
            BridgeChoice::Sine => 1.0,
            BridgeChoice::Blend(t) => t,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BridgeChoice::Poly => "poly",
            BridgeChoice::Sine => "sine",
            BridgeChoice::Blend(_) => "blend",
        }
    }
}

/// A C1 function `u` on `[-T, T]` with
/// `int u = 2 f~(0)`, `u(T) - u(-T) = 2 f~'(0)` and
/// `u'(T-) - u'(-T+) = 2 f~''(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeFunction {
    t: f64,
    jet: [f64; 3],
    choice: BridgeChoice,
    poly: [f64; 3],
    h: f64,
    h_tilde: f64,
}

/// Residuals of the three bridge conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeResiduals {
    pub integral: f64,
    pub endpoint_difference: f64,
    pub slope_difference: f64,
}

impl BridgeResiduals {
    /// The first condition exceeding its tolerance.
    pub fn violation(&self) -> Option<Error> {
        let checks = [
            (BridgeCondition::Integral, self.integral, BRIDGE_INTEGRAL_TOL),
            (BridgeCondition::EndpointDifference, self.endpoint_difference, BRIDGE_ENDPOINT_TOL),
            (BridgeCondition::SlopeDifference, self.slope_difference, BRIDGE_SLOPE_TOL),
        ];
        checks
            .into_iter()
            .find(|(_, r, tol)| !(r.abs() <= *tol))
            .map(|(condition, residual, tolerance)| Error::Bridge { condition, residual, tolerance })
    }
}

pub fn build_bridge_poly(rt: &ReducedTerminal) -> Result<BridgeFunction> {
    BridgeFunction::from_jet(rt.jet()?, rt.horizon(), BridgeChoice::Poly)
}

pub fn build_bridge_sine(rt: &ReducedTerminal) -> Result<BridgeFunction> {
    BridgeFunction::from_jet(rt.jet()?, rt.horizon(), BridgeChoice::Sine)
}

impl BridgeFunction {
    /// Bridge for the jet `(f~(0), f~'(0), f~''(0))` on `[-t, t]`.
    pub fn from_jet(jet: [f64; 3], t: f64, choice: BridgeChoice) -> Result<BridgeFunction> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Invalid(alloc::format!("time horizon must be positive, got {t}")));
        }
        if jet.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("bridge jet"));
        }
        let theta = choice.theta();
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Invalid(alloc::format!("blend parameter must lie in [0, 1], got {theta}")));
        }
        let [f0, f1, f2] = jet;
        let poly = [f0 / t - f2 * t / 6.0, f1 / t, f2 / (2.0 * t)];
        let h = 2.0 * f1 - t * f2;
        let h_tilde = f0 / t + (7.0 / 12.0 * t * f2 - 1.5 * f1);
        Ok(BridgeFunction { t, jet, choice, poly, h, h_tilde })
    }

    pub fn horizon(&self) -> f64 {
        self.t
    }

    pub fn choice(&self) -> BridgeChoice {
        self.choice
    }

    pub fn jet(&self) -> [f64; 3] {
        self.jet
    }

    /// Coefficients `[c0, c1, c2]` of the quadratic member.
    pub fn poly_coefficients(&self) -> [f64; 3] {
        self.poly
    }

    /// `(h, h~)` of the piecewise member.
    pub fn sine_parameters(&self) -> (f64, f64) {
        (self.h, self.h_tilde)
    }

    fn poly_eval(&self, x: f64, order: usize) -> f64 {
        let [c0, c1, c2] = self.poly;
        match order {
            0 => c0 + x * (c1 + x * c2),
            1 => c1 + 2.0 * c2 * x,
            2 => 2.0 * c2,
            _ => 0.0,
        }
    }

    /// The piecewise member; `left` selects the arch formula.
    fn sine_piece(&self, x: f64, order: usize, left: bool) -> f64 {
        let (h, ht, t) = (self.h, self.h_tilde, self.t);
        if left {
            let w = PI / t;
            let (s, c) = (libm::sin(w * x), libm::cos(w * x));
            let a = 0.5 * h;
            match order {
                0 => ht + a + a * c,
                1 => -a * w * s,
                2 => -a * w * w * c,
                3 => a * w * w * w * s,
                _ => f64::NAN,
            }
        } else {
            let c2 = self.jet[2] / t;
            match order {
                0 => ht + h + c2 * x * x,
                1 => 2.0 * c2 * x,
                2 => 2.0 * c2,
                _ => 0.0,
            }
        }
    }

    fn eval_piece(&self, x: f64, order: usize, left: bool) -> f64 {
        let theta = self.choice.theta();
        let mut v = 0.0;
        if theta != 1.0 {
            v += (1.0 - theta) * self.poly_eval(x, order);
        }
        if theta != 0.0 {
            v += theta * self.sine_piece(x, order, left);
        }
        v
    }

    /// `u'(T-)` and `u'(-T+)`.
    pub fn one_sided_slopes(&self) -> (f64, f64) {
        (self.eval_piece(self.t, 1, false), self.eval_piece(-self.t, 1, true))
    }

    /// Antiderivative with `U(0) = 0`.
    pub fn primitive(&self, x: f64) -> f64 {
        let theta = self.choice.theta();
        let [c0, c1, c2] = self.poly;
        let mut v = 0.0;
        if theta != 1.0 {
            v += (1.0 - theta) * x * (c0 + x * (c1 / 2.0 + x * c2 / 3.0));
        }
        if theta != 0.0 {
            let (h, ht, t) = (self.h, self.h_tilde, self.t);
            let s = if x < 0.0 {
                (ht + 0.5 * h) * x + 0.5 * h * t / PI * libm::sin(PI * x / t)
            } else {
                (ht + h) * x + self.jet[2] / t * x * x * x / 3.0
            };
            v += theta * s;
        }
        v
    }

    /// Residuals of the three conditions, the integral by quadrature.
    pub fn residuals(&self) -> Result<BridgeResiduals> {
        let t = self.t;
        let integral = integrate_split(|x| self.value(x), -t, t, &[0.0], QUAD_TOL_TIGHT)?.value;
        let (right, left) = self.one_sided_slopes();
        Ok(BridgeResiduals {
            integral: integral - 2.0 * self.jet[0],
            endpoint_difference: self.value(t) - self.value(-t) - 2.0 * self.jet[1],
            slope_difference: right - left - 2.0 * self.jet[2],
        })
    }

    /// Errors with the first violated condition.
    pub fn check(&self) -> Result<BridgeResiduals> {
        let r = self.residuals()?;
        match r.violation() {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }

    /// Smallest sampled value on `[-T, T]`.
    pub fn min_sampled(&self, samples: usize) -> f64 {
        let n = samples.max(2);
        (0..n)
            .map(|k| self.value(-self.t + 2.0 * self.t * k as f64 / (n - 1) as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

impl RealFunction for BridgeFunction {
    fn value(&self, x: f64) -> f64 {
        self.eval_piece(x, 0, x < 0.0)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.eval_piece(x, order, x < 0.0)
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        if self.choice.theta() != 0.0 && a < 0.0 && b > 0.0 {
            vec![0.0]
        } else {
            Vec::new()
        }
    }
}
