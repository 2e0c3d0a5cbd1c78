use alloc::vec::Vec;

use super::sphere::{SpatialFunction, SphereRule};
use crate::error::{Error, Result};
use crate::function::RealFunction;

/// `r -> r * A_r h(x)` tabulated on `0, dr, 2 dr, ...` up to `r_max` and
/// interpolated by a C2 piecewise quintic Hermite spline. Nodal first and
/// second derivatives come from sixth-order centered differences, using
/// oddness for the nodes next to zero. Negative arguments are mirrored, so
/// the profile is exactly odd.
#[derive(Debug, Clone)]
pub struct RadialTable {
    step: f64,
    r_max: f64,
    /// `(w, w', w'')` per node.
    nodes: Vec<[f64; 3]>,
}

impl RadialTable {
    pub fn new(h: &dyn SpatialFunction, x: &[f64; 3], rule: &SphereRule, step: f64, r_max: f64) -> Result<RadialTable> {
        let raw = |r: f64| r * rule.mean(h, x, r);
        RadialTable::from_samples(raw, step, r_max)
    }

    /// Tabulates any odd function given on `r >= 0`.
    pub fn from_samples(w: impl Fn(f64) -> f64, step: f64, r_max: f64) -> Result<RadialTable> {
        if !(step > 0.0 && r_max > step && r_max.is_finite()) {
            return Err(Error::Invalid(alloc::format!("bad radial table: step {step}, r_max {r_max}")));
        }
        let n = libm::ceil(r_max / step) as usize;
        let pad = 3;
        let samples: Vec<f64> = (0..=n + pad).map(|j| if j == 0 { 0.0 } else { w(j as f64 * step) }).collect();
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("spherical mean"));
        }
        let at = |j: i64| if j < 0 { -samples[(-j) as usize] } else { samples[j as usize] };
        let nodes = (0..=n as i64)
            .map(|j| {
                let d1 = (-at(j - 3) + 9.0 * at(j - 2) - 45.0 * at(j - 1) + 45.0 * at(j + 1) - 9.0 * at(j + 2)
                    + at(j + 3))
                    / (60.0 * step);
                let d2 = (2.0 * at(j - 3) - 27.0 * at(j - 2) + 270.0 * at(j - 1) - 490.0 * at(j)
                    + 270.0 * at(j + 1)
                    - 27.0 * at(j + 2)
                    + 2.0 * at(j + 3))
                    / (180.0 * step * step);
                // The second derivative of an odd function vanishes at 0;
                // the stencil only cancels up to rounding.
                [at(j), d1, if j == 0 { 0.0 } else { d2 }]
            })
            .collect();
        Ok(RadialTable { step, r_max: n as f64 * step, nodes })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Largest tabulated radius.
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    fn eval_nonneg(&self, r: f64, order: usize) -> f64 {
        if !(r <= self.r_max) {
            return f64::NAN;
        }
        let h = self.step;
        let j = (libm::floor(r / h) as usize).min(self.nodes.len() - 2);
        let s = r / h - j as f64;
        let [y0, d0, e0] = self.nodes[j];
        let [y1, d1, e1] = self.nodes[j + 1];
        let (d0, d1, e0, e1) = (h * d0, h * d1, h * h * e0, h * h * e1);
        let dy = y1 - y0;
        let c = [
            y0,
            d0,
            0.5 * e0,
            10.0 * dy - 6.0 * d0 - 4.0 * d1 - 1.5 * e0 + 0.5 * e1,
            -15.0 * dy + 8.0 * d0 + 7.0 * d1 + 1.5 * e0 - e1,
            6.0 * dy - 3.0 * (d0 + d1) - 0.5 * e0 + 0.5 * e1,
        ];
        if order > 5 {
            return 0.0;
        }
        let mut acc = 0.0;
        for k in (order..6).rev() {
            let mut f = 1.0;
            for i in 0..order {
                f *= (k - i) as f64;
            }
            acc = acc * s + c[k] * f;
        }
        acc / libm::pow(h, order as f64)
    }
}

impl RealFunction for RadialTable {
    fn value(&self, r: f64) -> f64 {
        self.derivative(r, 0)
    }

    fn derivative(&self, r: f64, order: usize) -> f64 {
        // w is odd, so w^(k) has parity (-1)^(k+1).
        if r < 0.0 {
            let v = self.eval_nonneg(-r, order);
            if order % 2 == 0 {
                -v
            } else {
                v
            }
        } else {
            self.eval_nonneg(r, order)
        }
    }
}
