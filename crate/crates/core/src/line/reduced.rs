use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{Expr, Profile};
use crate::function::{sort_dedup, RealFunction};

/// The terminal profile after removing the free evolution of `f`:
/// `f~(x) = g(x) - (f(x - T) + f(x + T)) / 2`.
#[derive(Clone)]
pub struct ReducedTerminal {
    func: Arc<dyn RealFunction>,
    expr: Option<Expr>,
    t: f64,
}

impl ReducedTerminal {
    /// Symbolic reduction of two profiles.
    pub fn from_profiles(f: &Profile, g: &Profile, t: f64) -> Result<ReducedTerminal> {
        check_horizon(t)?;
        let fe = f.expr();
        let avg = Expr::div(Expr::add(fe.shifted(-t), fe.shifted(t)), Expr::Num(2.0));
        let expr = Expr::sub(g.expr().clone(), avg);
        Ok(ReducedTerminal { func: Arc::new(Profile::new(expr.clone())), expr: Some(expr), t })
    }

    /// Reduction of arbitrary functions, evaluated pointwise.
    pub fn from_functions(f: Arc<dyn RealFunction>, g: Arc<dyn RealFunction>, t: f64) -> Result<ReducedTerminal> {
        check_horizon(t)?;
        Ok(ReducedTerminal { func: Arc::new(Reduced { f, g, t }), expr: None, t })
    }

    /// Wraps an already reduced profile.
    pub fn from_reduced(func: Arc<dyn RealFunction>, t: f64) -> Result<ReducedTerminal> {
        check_horizon(t)?;
        Ok(ReducedTerminal { func, expr: None, t })
    }

    pub fn horizon(&self) -> f64 {
        self.t
    }

    /// The symbolic form, when the inputs were profiles.
    pub fn expr(&self) -> Option<&Expr> {
        self.expr.as_ref()
    }

    pub fn function(&self) -> &Arc<dyn RealFunction> {
        &self.func
    }

    /// `(f~(0), f~'(0), f~''(0))`.
    pub fn jet(&self) -> Result<[f64; 3]> {
        let jet = [self.func.value(0.0), self.func.derivative(0.0, 1), self.func.derivative(0.0, 2)];
        if jet.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("reduced terminal profile or its derivatives at 0"));
        }
        Ok(jet)
    }
}

impl RealFunction for ReducedTerminal {
    fn value(&self, x: f64) -> f64 {
        self.func.value(x)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.func.derivative(x, order)
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        self.func.breakpoints(a, b)
    }
}

fn check_horizon(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Invalid(alloc::format!("time horizon must be positive, got {t}")));
    }
    Ok(())
}

struct Reduced {
    f: Arc<dyn RealFunction>,
    g: Arc<dyn RealFunction>,
    t: f64,
}

impl RealFunction for Reduced {
    fn value(&self, x: f64) -> f64 {
        self.g.value(x) - 0.5 * (self.f.value(x - self.t) + self.f.value(x + self.t))
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.g.derivative(x, order) - 0.5 * (self.f.derivative(x - self.t, order) + self.f.derivative(x + self.t, order))
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let t = self.t;
        let mut pts = self.g.breakpoints(a, b);
        pts.extend(self.f.breakpoints(a - t, b - t).into_iter().map(|p| p + t));
        pts.extend(self.f.breakpoints(a + t, b + t).into_iter().map(|p| p - t));
        sort_dedup(&mut pts);
        pts
    }
}
