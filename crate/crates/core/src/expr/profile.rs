use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::diff::MAX_ORDER;
use super::{parse, parse_point, Expr, Func, Program};
use crate::error::{Error, Result};
use crate::function::RealFunction;

/// Samples used to check a declared period.
const PERIOD_SAMPLES: usize = 64;
const PERIOD_TOL: f64 = 1e-9;

/// An expression with its derivatives up to order 3, a validity interval and
/// an optional period.
#[derive(Debug, Clone)]
pub struct Profile {
    derivs: [Expr; MAX_ORDER + 1],
    programs: [Program; MAX_ORDER + 1],
    domain: (f64, f64),
    period: Option<f64>,
    warnings: Vec<String>,
}

impl Profile {
    pub fn new(expr: Expr) -> Profile {
        let d1 = expr.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        let derivs = [expr, d1, d2, d3];
        let programs = [derivs[0].compile(), derivs[1].compile(), derivs[2].compile(), derivs[3].compile()];
        let mut warnings = Vec::new();
        if derivs[0].contains_func(Func::Abs) {
            let msg = format!(
                "profile `{}` contains abs; it is only C2 where the argument keeps one sign",
                derivs[0]
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
        Profile { derivs, programs, domain: (f64::NEG_INFINITY, f64::INFINITY), period: None, warnings }
    }

    pub fn parse(text: &str) -> Result<Profile> {
        parse(text).map(Profile::new)
    }

    pub fn constant(c: f64) -> Profile {
        Profile::new(Expr::Num(c))
    }

    /// Restricts the validity interval.
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Profile> {
        if !(lo < hi) {
            return Err(Error::Invalid(format!("empty validity interval [{lo}, {hi}]")));
        }
        self.domain = (lo, hi);
        Ok(self)
    }

    /// Declares the period `l`, checked on sampled points.
    pub fn with_period(mut self, l: f64) -> Result<Profile> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Invalid(format!("period must be positive, got {l}")));
        }
        for i in 0..PERIOD_SAMPLES {
            let x = l * (i as f64 + 0.37) / PERIOD_SAMPLES as f64;
            let a = self.try_eval(x, 0)?;
            let b = self.try_eval(x + l, 0)?;
            if (a - b).abs() > PERIOD_TOL * (1.0 + a.abs()) {
                return Err(Error::NotPeriodic { period: l, at: x, mismatch: (a - b).abs() });
            }
        }
        self.period = Some(l);
        Ok(self)
    }

    pub fn expr(&self) -> &Expr {
        &self.derivs[0]
    }

    pub fn derivative_expr(&self, order: usize) -> Result<&Expr> {
        self.derivs.get(order).ok_or(Error::DerivativeOrder(order))
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Checked evaluation of the derivative of the given order.
    pub fn try_eval(&self, x: f64, order: usize) -> Result<f64> {
        let e = self.derivative_expr(order)?;
        if x < self.domain.0 || x > self.domain.1 {
            return Err(Error::Domain { node: format!("{e}"), detail: "argument outside the validity interval" });
        }
        e.eval(x)
    }

    /// `self(x - shift)`, as a new profile on the shifted interval.
    pub fn shifted(&self, shift: f64) -> Profile {
        let mut p = Profile::new(self.expr().shifted(-shift));
        p.domain = (self.domain.0 + shift, self.domain.1 + shift);
        p.period = self.period;
        p
    }
}

impl RealFunction for Profile {
    fn value(&self, x: f64) -> f64 {
        self.programs[0].eval(x)
    }

    fn derivative(&self, x: f64, order: usize) -> f64 {
        match self.programs.get(order) {
            Some(p) => p.eval(x),
            None => f64::NAN,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self.expr(), f)
    }
}

impl From<Expr> for Profile {
    fn from(e: Expr) -> Profile {
        Profile::new(e)
    }
}

/// An expression in the coordinates `x`, `y`, `z` of a point in space.
#[derive(Debug, Clone)]
pub struct PointProfile {
    expr: Expr,
    program: Program,
}

impl PointProfile {
    pub fn new(expr: Expr) -> PointProfile {
        let program = expr.compile();
        PointProfile { expr, program }
    }

    pub fn parse(text: &str) -> Result<PointProfile> {
        parse_point(text).map(PointProfile::new)
    }

    pub fn constant(c: f64) -> PointProfile {
        PointProfile::new(Expr::Num(c))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn value(&self, p: &[f64; 3]) -> f64 {
        self.program.eval_point(p)
    }
}

impl fmt::Display for PointProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.expr, f)
    }
}
