//! The 3-D wave equation at a point, via spherical means.
//!
//! For a centre `x`, `w(t, r) = r * A_r y(t, x)` solves the 1-D wave equation
//! in `r` with odd data `r * A_r f` and `r * A_r g`, so the line construction
//! applies. The value at the centre is the limit of `w / r` as `r -> 0`.
//! Only `n = 3` is supported.

mod sphere;
mod table;


use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use sphere::{spherical_mean, SpatialFunction, SphereRule};
pub use table::RadialTable;

use crate::constants::{
    LINE_WINDOW_POINTS, QUAD_TOL_TIGHT, RADIAL_EXTRAPOLATION_TOL, RADIAL_MARGIN, RADIAL_RICHARDSON_STEP,
    RADIAL_TABLE_STEP, RADIAL_TERMINAL_TOL, SPHERE_QUAD_ORDER,
};
use crate::error::{Error, Result};
use crate::line::{solve_line, BridgeChoice, Integration, LineOptions, LineProblem, LineSolution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    /// Spatial dimension; anything but 3 is rejected.
    pub dimension: usize,
    pub quad_order: usize,
    pub table_step: f64,
    /// `R_max = T + margin`; the reduced problem is verified on `|r| <= margin`.
    pub margin: f64,
    pub richardson_step: f64,
    pub bridge: BridgeChoice,
    pub verify: bool,
}

impl Default for RadialOptions {
    fn default() -> Self {
        RadialOptions {
            dimension: 3,
            quad_order: SPHERE_QUAD_ORDER,
            table_step: RADIAL_TABLE_STEP,
            margin: RADIAL_MARGIN,
            richardson_step: RADIAL_RICHARDSON_STEP,
            bridge: BridgeChoice::Poly,
            verify: true,
        }
    }
}

impl RadialOptions {
    pub fn check(&self) -> Result<()> {
        if self.dimension != 3 {
            return Err(Error::Dimension(self.dimension));
        }
        if !(self.margin > 0.0 && self.richardson_step > 0.0 && self.richardson_step < self.margin) {
            return Err(Error::Invalid(format!(
                "radial margin {} and Richardson step {} must satisfy 0 < step < margin",
                self.margin, self.richardson_step
            )));
        }
        Ok(())
    }
}

/// The reduced problem at one centre and its solution `w`.
#[derive(Clone)]
pub struct RadialReduction {
    pub center: [f64; 3],
    pub initial: Arc<RadialTable>,
    pub terminal: Arc<RadialTable>,
    pub solution: LineSolution,
    step: f64,
}

/// A recovered value with its extrapolation error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recovered {
    pub value: f64,
    pub error_estimate: f64,
}

/// Tabulates `r * A_r f` and `r * A_r g` about `x` on `[0, T + margin]` and
/// solves the line problem for `w`.
pub fn reduce_and_solve(
    f3: &dyn SpatialFunction,
    g3: &dyn SpatialFunction,
    x: &[f64; 3],
    t: f64,
    options: &RadialOptions,
) -> Result<RadialReduction> {
    options.check()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Invalid(format!("time horizon must be positive, got {t}")));
    }
    let rule = SphereRule::new(options.quad_order)?;
    let r_max = t + options.margin;
    let initial = Arc::new(RadialTable::new(f3, x, &rule, options.table_step, r_max)?);
    let terminal = Arc::new(RadialTable::new(g3, x, &rule, options.table_step, r_max)?);
    let problem = LineProblem::from_functions(initial.clone(), terminal.clone(), t)?;
    let line = LineOptions {
        bridge: options.bridge,
        window: options.margin,
        points: LINE_WINDOW_POINTS,
        quad_tol: QUAD_TOL_TIGHT,
        integration: Integration::Primitive,
        verify: options.verify,
    };
    let solution = solve_line(&problem, &line)?;
    Ok(RadialReduction { center: *x, initial, terminal, solution, step: options.richardson_step })
}

/// `lim_{r -> 0} w(t, r) / r` by Richardson extrapolation of the even
/// function `q(r) = w(t, r) / r` from `r = h, h/2, h/4`.
pub fn recover_point(w: &dyn Fn(f64) -> Result<f64>, h: f64) -> Result<Recovered> {
    let q = |r: f64| -> Result<f64> { Ok(w(r)? / r) };
    let (q1, q2, q4) = (q(h)?, q(h / 2.0)?, q(h / 4.0)?);
    let a = (4.0 * q2 - q1) / 3.0;
    let b = (4.0 * q4 - q2) / 3.0;
    let value = (16.0 * b - a) / 15.0;
    let error_estimate = (value - b).abs();
    if !value.is_finite() {
        return Err(Error::NonFinite("recovered value"));
    }
    if error_estimate > RADIAL_EXTRAPOLATION_TOL {
        return Err(Error::Extrapolation(error_estimate));
    }
    Ok(Recovered { value, error_estimate })
}

impl RadialReduction {
    pub fn horizon(&self) -> f64 {
        self.solution.horizon()
    }

    /// `y(t, center)`.
    pub fn value_at(&self, t: f64) -> Result<Recovered> {
        recover_point(&|r| self.solution.try_value(t, r), self.step)
    }
}

/// Results at one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    pub center: [f64; 3],
    pub initial: Recovered,
    pub terminal: Recovered,
    /// `|y(0, x) - f(x)|`.
    pub initial_error: f64,
    /// `|y(T, x) - g(x)|`.
    pub terminal_error: f64,
    /// Terminal sup-error of the reduced line problem.
    pub reduced_terminal_error: Option<f64>,
}

/// Per-point reductions with their checks.
#[derive(Clone)]
pub struct RadialSolution {
    pub t: f64,
    pub points: Vec<RadialPoint>,
    pub reductions: Vec<RadialReduction>,
}

impl RadialSolution {
    pub fn max_terminal_error(&self) -> f64 {
        self.points.iter().map(|p| p.terminal_error).fold(0.0, f64::max)
    }

    pub fn max_initial_error(&self) -> f64 {
        self.points.iter().map(|p| p.initial_error).fold(0.0, f64::max)
    }

    pub fn within_tolerances(&self) -> bool {
        self.max_terminal_error() <= RADIAL_TERMINAL_TOL
    }

    /// `y(t, x)` at every evaluation point.
    pub fn sample(&self, t: f64) -> Result<Vec<Recovered>> {
        self.reductions.iter().map(|r| r.value_at(t)).collect()
    }
}

/// Checks one reduction against the data at its centre.
pub fn check_point(
    reduction: &RadialReduction,
    f3: &dyn SpatialFunction,
    g3: &dyn SpatialFunction,
) -> Result<RadialPoint> {
    let x = reduction.center;
    let initial = reduction.value_at(0.0)?;
    let terminal = reduction.value_at(reduction.horizon())?;
    Ok(RadialPoint {
        center: x,
        initial,
        terminal,
        initial_error: (initial.value - f3.value(&x)).abs(),
        terminal_error: (terminal.value - g3.value(&x)).abs(),
        reduced_terminal_error: reduction.solution.metadata.terminal_sup_error,
    })
}

/// Reduces, solves and checks at every evaluation point.
pub fn solve_radial3d(
    f3: &dyn SpatialFunction,
    g3: &dyn SpatialFunction,
    t: f64,
    points: &[[f64; 3]],
    options: &RadialOptions,
) -> Result<RadialSolution> {
    options.check()?;
    let mut reductions = Vec::with_capacity(points.len());
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        let red = reduce_and_solve(f3, g3, x, t, options)?;
        out.push(check_point(&red, f3, g3)?);
        reductions.push(red);
    }
    Ok(RadialSolution { t, points: out, reductions })
}
