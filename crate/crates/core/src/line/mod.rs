//! Controls on the whole line.
//!
//! The problem `y_tt = y_xx`, `y(0) = f`, `y(T) = g` is reduced to zero
//! initial data with terminal profile `f~` ([`ReducedTerminal`]). A bridge
//! `u` on `[-T, T]` ([`BridgeFunction`]) seeds the piecewise velocity `v`
//! ([`VelocityControl`]), and
//!
//! ```text
//! y(t, x) = (f(x - t) + f(x + t)) / 2 + 1/2 int_{x-t}^{x+t} v
//! ```
//!
//! is the controlled solution.

mod bridge;
mod reduced;
mod velocity;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use bridge::{build_bridge_poly, build_bridge_sine, BridgeChoice, BridgeFunction, BridgeResiduals};
pub use reduced::ReducedTerminal;
pub use velocity::{build_velocity, Junction, VelocityControl};

use crate::constants::{LINE_WINDOW, LINE_WINDOW_POINTS, PERTURBATION_TOL, QUAD_TOL, QUAD_TOL_TIGHT};
use crate::error::{Error, Result};
use crate::expr::Profile;
use crate::function::RealFunction;
use crate::numerics::{fd_residual, integrate_function, integrate_split, Equation, Field, FieldMetadata, Grid2D};

/// How `int v` is evaluated inside the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    /// Adaptive quadrature split at the joints of `v`.
    Quadrature,
    /// Closed-form antiderivative of `v`, segment by segment.
    Primitive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineOptions {
    pub bridge: BridgeChoice,
    /// Report window `[-window, window]`.
    pub window: f64,
    pub points: usize,
    pub quad_tol: f64,
    pub integration: Integration,
    /// Compute terminal error and PDE residual into the metadata.
    pub verify: bool,
}

impl Default for LineOptions {
    fn default() -> Self {
        LineOptions {
            bridge: BridgeChoice::Poly,
            window: LINE_WINDOW,
            points: LINE_WINDOW_POINTS,
            quad_tol: QUAD_TOL,
            integration: Integration::Quadrature,
            verify: true,
        }
    }
}

/// `y_tt = y_xx` on the line with `y(0) = f`, `y(T) = g`.
#[derive(Clone)]
pub struct LineProblem {
    pub f: Arc<dyn RealFunction>,
    pub g: Arc<dyn RealFunction>,
    pub t: f64,
    reduced: ReducedTerminal,
}

impl LineProblem {
    pub fn from_profiles(f: &Profile, g: &Profile, t: f64) -> Result<LineProblem> {
        let reduced = ReducedTerminal::from_profiles(f, g, t)?;
        Ok(LineProblem { f: Arc::new(f.clone()), g: Arc::new(g.clone()), t, reduced })
    }

    pub fn from_functions(f: Arc<dyn RealFunction>, g: Arc<dyn RealFunction>, t: f64) -> Result<LineProblem> {
        let reduced = ReducedTerminal::from_functions(f.clone(), g.clone(), t)?;
        Ok(LineProblem { f, g, t, reduced })
    }

    pub fn reduced(&self) -> &ReducedTerminal {
        &self.reduced
    }
}

/// The controlled solution with its velocity.
#[derive(Clone)]
pub struct LineSolution {
    f: Arc<dyn RealFunction>,
    g: Arc<dyn RealFunction>,
    t: f64,
    velocity: Arc<VelocityControl>,
    perturbation: Option<Arc<dyn RealFunction>>,
    options: LineOptions,
    pub metadata: FieldMetadata,
}

/// Builds the bridge and velocity and assembles the solution.
pub fn solve_line(problem: &LineProblem, options: &LineOptions) -> Result<LineSolution> {
    let rt = problem.reduced.clone();
    let bridge = BridgeFunction::from_jet(rt.jet()?, problem.t, options.bridge)?;
    bridge.check()?;
    let velocity = VelocityControl::assemble(bridge, rt, options.window + 2.0 * problem.t);
    let mut sol = LineSolution {
        f: problem.f.clone(),
        g: problem.g.clone(),
        t: problem.t,
        velocity: Arc::new(velocity),
        perturbation: None,
        options: *options,
        metadata: FieldMetadata { provenance: format!("line/{}-bridge", options.bridge.name()), ..Default::default() },
    };
    if options.verify {
        sol.verify()?;
    }
    Ok(sol)
}

/// Adds a `2T`-periodic, zero-mean velocity; the terminal profile is kept.
pub fn perturb_velocity(sol: &LineSolution, v1: Arc<dyn RealFunction>) -> Result<LineSolution> {
    let t = sol.t;
    let samples = 64;
    for k in 0..samples {
        let x = -t + 2.0 * t * (k as f64 + 0.5) / samples as f64;
        let (a, b) = (v1.value(x), v1.value(x + 2.0 * t));
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite("perturbation"));
        }
        if (a - b).abs() > PERTURBATION_TOL * (1.0 + a.abs()) {
            return Err(Error::Perturbation(format!(
                "not 2T-periodic: v1({x}) - v1({}) = {:e}",
                x + 2.0 * t,
                a - b
            )));
        }
    }
    let mean = integrate_function(&*v1, -t, t, QUAD_TOL_TIGHT)?.value;
    if mean.abs() > PERTURBATION_TOL {
        return Err(Error::Perturbation(format!("integral over [-T, T] is {mean:e}, not zero")));
    }
    let mut out = sol.clone();
    out.perturbation = Some(match &sol.perturbation {
        None => v1,
        Some(old) => Arc::new(Sum(old.clone(), v1)),
    });
    out.metadata.provenance = format!("{}+perturbation", sol.metadata.provenance);
    out.metadata.terminal_sup_error = None;
    out.metadata.max_pde_residual = None;
    if sol.options.verify {
        out.verify()?;
    }
    Ok(out)
}

struct Sum(Arc<dyn RealFunction>, Arc<dyn RealFunction>);

impl RealFunction for Sum {
    fn value(&self, x: f64) -> f64 {
        self.0.value(x) + self.1.value(x)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.0.derivative(x, order) + self.1.derivative(x, order)
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut p = self.0.breakpoints(a, b);
        p.extend(self.1.breakpoints(a, b));
        crate::function::sort_dedup(&mut p);
        p
    }
}

/// Grid for the residual recorded in the metadata: `dt = dx / 2` over the
/// report window, so truncation terms do not cancel.
fn residual_grid(t: f64, window: f64) -> Result<Grid2D> {
    let nt = 32;
    let dx = 2.0 * t / nt as f64;
    let nx = libm::ceil(2.0 * window / dx).max(4.0) as usize;
    let half = 0.5 * nx as f64 * dx;
    Grid2D::new(t, -half, half, nt, nx)
}

impl LineSolution {
    pub fn horizon(&self) -> f64 {
        self.t
    }

    pub fn options(&self) -> &LineOptions {
        &self.options
    }

    pub fn velocity(&self) -> &VelocityControl {
        &self.velocity
    }

    pub fn initial(&self) -> &Arc<dyn RealFunction> {
        &self.f
    }

    pub fn terminal(&self) -> &Arc<dyn RealFunction> {
        &self.g
    }

    /// Same solution evaluated through the other integration route.
    pub fn with_integration(&self, integration: Integration) -> LineSolution {
        let mut s = self.clone();
        s.options.integration = integration;
        s
    }

    /// The full control `v + v1`.
    pub fn control_value(&self, x: f64) -> f64 {
        let v = self.velocity.value(x);
        match &self.perturbation {
            Some(p) => v + p.value(x),
            None => v,
        }
    }

    /// `1/2 int_{x-t}^{x+t} (v + v1)`: the solution with `f` removed.
    pub fn reduced_value(&self, t: f64, x: f64) -> Result<f64> {
        let (a, b) = (x - t, x + t);
        let main = match self.options.integration {
            Integration::Quadrature => {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let pts = self.velocity.breakpoints(lo, hi);
                integrate_split(|s| self.velocity.value(s), a, b, &pts, self.options.quad_tol)?.value
            }
            Integration::Primitive => self.velocity.primitive(b) - self.velocity.primitive(a),
        };
        let extra = match &self.perturbation {
            Some(p) => integrate_function(&**p, a, b, self.options.quad_tol)?.value,
            None => 0.0,
        };
        Ok(0.5 * (main + extra))
    }

    pub fn try_value(&self, t: f64, x: f64) -> Result<f64> {
        let free = 0.5 * (self.f.value(x - t) + self.f.value(x + t));
        Ok(free + self.reduced_value(t, x)?)
    }

    /// `max |y(T, x) - g(x)|` over `points` samples of `[-window, window]`.
    pub fn terminal_sup_error(&self, window: f64, points: usize) -> Result<f64> {
        let n = points.max(2);
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let x = -window + 2.0 * window * j as f64 / (n - 1) as f64;
            let e = (self.try_value(self.t, x)? - self.g.value(x)).abs();
            if !e.is_finite() {
                return Err(Error::NonFinite("terminal profile"));
            }
            worst = worst.max(e);
        }
        Ok(worst)
    }

    fn verify(&mut self) -> Result<()> {
        let err = self.terminal_sup_error(self.options.window, self.options.points)?;
        self.metadata.terminal_sup_error = Some(err);
        // Differencing divides quadrature noise by dx^2, so the residual is
        // taken on the closed-form route.
        let grid = residual_grid(self.t, self.options.window)?;
        let exact = self.with_integration(Integration::Primitive);
        self.metadata.max_pde_residual = Some(fd_residual(&exact, &grid, Equation::Linear));
        Ok(())
    }

    pub fn warnings(&self) -> &[String] {
        &self.metadata.warnings
    }
}

impl Field for LineSolution {
    fn value(&self, t: f64, x: f64) -> f64 {
        self.try_value(t, x).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(f: &str, g: &str, t: f64) -> LineProblem {
        LineProblem::from_profiles(&Profile::parse(f).unwrap(), &Profile::parse(g).unwrap(), t).unwrap()
    }

    #[test]
    fn constant_solution() {
        let sol = solve_line(&problem("5", "5", 0.9), &LineOptions::default()).unwrap();
        assert_eq!(sol.metadata.terminal_sup_error, Some(0.0));
        assert_eq!(sol.value(0.3, 1.7), 5.0);
    }

    #[test]
    fn sine_terminal_profile() {
        let opts = LineOptions { points: 401, ..LineOptions::default() };
        for bridge in [BridgeChoice::Poly, BridgeChoice::Sine] {
            let sol = solve_line(&problem("0", "sin(x)", 1.0), &LineOptions { bridge, ..opts }).unwrap();
            assert!(sol.metadata.terminal_sup_error.unwrap() <= 1e-6);
            assert_eq!(sol.value(0.0, 0.3), 0.0);
        }
    }

    #[test]
    fn routes_agree() {
        let sol = solve_line(&problem("cos(x)", "x^2/4", 0.7), &LineOptions { verify: false, ..Default::default() })
            .unwrap();
        let prim = sol.with_integration(Integration::Primitive);
        for (t, x) in [(0.1, -3.0), (0.35, 0.2), (0.7, 4.4)] {
            assert!((sol.value(t, x) - prim.value(t, x)).abs() < 1e-9);
        }
    }

    #[test]
    fn perturbation_checks() {
        let sol = solve_line(&problem("0", "sin(x)", 1.0), &LineOptions { points: 201, ..Default::default() }).unwrap();
        let bad = Arc::new(Profile::parse("sin(x)").unwrap());
        assert!(matches!(perturb_velocity(&sol, bad), Err(Error::Perturbation(_))));
        let shifted = Arc::new(Profile::parse("1 + sin(pi*x)").unwrap());
        assert!(matches!(perturb_velocity(&sol, shifted), Err(Error::Perturbation(_))));
        let good = Arc::new(Profile::parse("sin(pi*x)").unwrap());
        let p = perturb_velocity(&sol, good).unwrap();
        assert!(p.metadata.terminal_sup_error.unwrap() <= 1e-6);
        assert!((p.control_value(0.5) - sol.control_value(0.5) - 1.0).abs() < 1e-15);
    }
}
