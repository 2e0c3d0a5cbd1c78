use alloc::vec::Vec;

use super::bridge::{BridgeChoice, BridgeFunction};
use super::reduced::ReducedTerminal;
use crate::constants::LINE_WINDOW;
use crate::error::Result;
use crate::function::RealFunction;

/// The piecewise control velocity. With `N = floor((|x| + T) / (2T))`,
///
/// ```text
/// v(x) = u(x - 2NT) + 2 sum_{i=1}^{N} f~'(x - (2i-1)T)    for x >= 0,
/// v(x) = u(x + 2NT) - 2 sum_{i=1}^{N} f~'(x + (2i-1)T)    for x < 0.
/// ```
///
/// Segment `k` is the piece centred at `2kT` (with `k = -N` for `x < 0`).
/// At a junction `x = (2N-1)T` the segment on the far side of zero is used.
#[derive(Clone)]
pub struct VelocityControl {
    bridge: BridgeFunction,
    reduced: ReducedTerminal,
    t: f64,
    /// `V((2k+1)T)` and `V(-(2k+1)T)` for `V(x) = int_0^x v`.
    pos: Vec<f64>,
    neg: Vec<f64>,
}

/// One-sided mismatch of `v` at a junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Junction {
    pub x: f64,
    pub value_jump: f64,
    pub slope_jump: f64,
}

/// Checks the bridge conditions, then assembles `v`.
pub fn build_velocity(bridge: BridgeFunction, reduced: ReducedTerminal) -> Result<VelocityControl> {
    bridge.check()?;
    Ok(VelocityControl::assemble(bridge, reduced, LINE_WINDOW))
}

impl VelocityControl {
    /// Assembles without checking; `extent` sizes the primitive tables.
    pub(crate) fn assemble(bridge: BridgeFunction, reduced: ReducedTerminal, extent: f64) -> VelocityControl {
        let t = bridge.horizon();
        let mut v = VelocityControl { bridge, reduced, t, pos: Vec::new(), neg: Vec::new() };
        v.extend_tables(extent);
        v
    }

    /// Precomputes primitive values at segment ends out to `|x| <= extent`.
    pub fn extend_tables(&mut self, extent: f64) {
        let t = self.t;
        let kmax = libm::ceil((extent.abs() + t) / (2.0 * t)) as usize + 1;
        if self.pos.is_empty() {
            self.pos.push(self.seg_prim(0, t) - self.seg_prim(0, 0.0));
            self.neg.push(self.seg_prim(0, -t) - self.seg_prim(0, 0.0));
        }
        while self.pos.len() <= kmax {
            let k = self.pos.len();
            let next = self.pos[k - 1] + self.seg_full(k as i64);
            self.pos.push(next);
            let next = self.neg[k - 1] - self.seg_full(-(k as i64));
            self.neg.push(next);
        }
    }

    pub fn bridge(&self) -> &BridgeFunction {
        &self.bridge
    }

    pub fn reduced(&self) -> &ReducedTerminal {
        &self.reduced
    }

    pub fn horizon(&self) -> f64 {
        self.t
    }

    /// Segment index of `x`.
    pub fn segment(&self, x: f64) -> i64 {
        let t = self.t;
        let ax = x.abs();
        let mut n = libm::floor((ax + t) / (2.0 * t));
        // Exact junctions belong to the outer segment even when the quotient
        // rounds down.
        if ax >= (2.0 * (n + 1.0) - 1.0) * t {
            n += 1.0;
        }
        let n = n as i64;
        if x >= 0.0 {
            n
        } else {
            -n
        }
    }

    /// Derivative `order` of the segment-`k` formula at `x`.
    fn seg_eval(&self, k: i64, x: f64, order: usize) -> f64 {
        let t = self.t;
        let f = &self.reduced;
        let m = k.unsigned_abs();
        let sign = if k >= 0 { 1.0 } else { -1.0 };
        let mut v = self.bridge.derivative(x - 2.0 * k as f64 * t, order);
        let mut sum = 0.0;
        for i in 1..=m {
            sum += f.derivative(x - sign * (2 * i - 1) as f64 * t, order + 1);
        }
        v += sign * 2.0 * sum;
        v
    }

    /// An antiderivative of the segment-`k` formula.
    fn seg_prim(&self, k: i64, x: f64) -> f64 {
        let t = self.t;
        let m = k.unsigned_abs();
        let sign = if k >= 0 { 1.0 } else { -1.0 };
        let mut sum = 0.0;
        for i in 1..=m {
            sum += self.reduced.value(x - sign * (2 * i - 1) as f64 * t);
        }
        self.bridge.primitive(x - 2.0 * k as f64 * t) + sign * 2.0 * sum
    }

    /// Integral of `v` over the whole segment `k != 0`.
    fn seg_full(&self, k: i64) -> f64 {
        let c = 2.0 * k as f64 * self.t;
        self.seg_prim(k, c + self.t) - self.seg_prim(k, c - self.t)
    }

    fn boundary_pos(&self, k: usize) -> f64 {
        if let Some(v) = self.pos.get(k) {
            return *v;
        }
        let mut v = *self.pos.last().unwrap_or(&0.0);
        for j in self.pos.len()..=k {
            v += self.seg_full(j as i64);
        }
        v
    }

    fn boundary_neg(&self, k: usize) -> f64 {
        if let Some(v) = self.neg.get(k) {
            return *v;
        }
        let mut v = *self.neg.last().unwrap_or(&0.0);
        for j in self.neg.len()..=k {
            v -= self.seg_full(-(j as i64));
        }
        v
    }

    /// `V(x) = int_0^x v`, in closed form segment by segment.
    pub fn primitive(&self, x: f64) -> f64 {
        let t = self.t;
        let k = self.segment(x);
        match k {
            0 => self.seg_prim(0, x) - self.seg_prim(0, 0.0),
            k if k > 0 => {
                let start = (2 * k - 1) as f64 * t;
                self.boundary_pos(k as usize - 1) + self.seg_prim(k, x) - self.seg_prim(k, start)
            }
            k => {
                let m = (-k) as usize;
                let start = -((2 * m - 1) as f64) * t;
                self.boundary_neg(m - 1) + self.seg_prim(k, x) - self.seg_prim(k, start)
            }
        }
    }

    /// Value and slope jumps at `x = +-(2N-1)T`, `N = 1..=n_max`, from the
    /// formulas of the two adjacent segments.
    pub fn junctions(&self, n_max: usize) -> Vec<Junction> {
        let t = self.t;
        let mut out = Vec::with_capacity(2 * n_max);
        for n in 1..=n_max as i64 {
            let x = (2 * n - 1) as f64 * t;
            for (x, left, right) in [(x, n - 1, n), (-x, -n, -(n - 1))] {
                out.push(Junction {
                    x,
                    value_jump: self.seg_eval(right, x, 0) - self.seg_eval(left, x, 0),
                    slope_jump: self.seg_eval(right, x, 1) - self.seg_eval(left, x, 1),
                });
            }
        }
        out
    }
}

impl RealFunction for VelocityControl {
    fn value(&self, x: f64) -> f64 {
        self.seg_eval(self.segment(x), x, 0)
    }

    /// Orders up to 2; higher orders need a fourth derivative of `f~`.
    fn derivative(&self, x: f64, order: usize) -> f64 {
        if order > 2 {
            return f64::NAN;
        }
        self.seg_eval(self.segment(x), x, order)
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let t = self.t;
        let with_mid = self.bridge.choice() != BridgeChoice::Poly;
        let lo = libm::floor(a / t) as i64;
        let hi = libm::ceil(b / t) as i64;
        let mut pts: Vec<f64> = (lo..=hi)
            .filter(|j| j.rem_euclid(2) == 1 || with_mid)
            .map(|j| j as f64 * t)
            .filter(|&p| p > a && p < b)
            .collect();
        for p in self.reduced.breakpoints(a - 2.0 * t, b + 2.0 * t) {
            // Kinks of f~ reappear shifted by odd multiples of T.
            let mut s = p + t;
            while s < b {
                if s > a {
                    pts.push(s);
                }
                s += 2.0 * t;
            }
            let mut s = p - t;
            while s > a {
                if s < b {
                    pts.push(s);
                }
                s -= 2.0 * t;
            }
        }
        crate::function::sort_dedup(&mut pts);
        pts
    }
}
