//! The interval `[0, L]` with Dirichlet or Neumann conditions.
//!
//! Homogeneous problems become periodic problems of period `2L` through the
//! odd (Dirichlet) or even (Neumann) extension of the data. Inhomogeneous
//! boundary data are first removed by the substitutions
//!
//! ```text
//! Dirichlet:  y~ = y - (h(t + x) + h(t - x)) / 2,
//! Neumann:    y~ = y - 1/2 int_{t-x}^{t+x} H,
//! ```
//!
//! where `h` (resp. `H`) is extended past `[0, T]` so that the right-hand
//! condition becomes homogeneous too.

mod compat;
mod datum;
mod extension;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use compat::{check_compatibility, CompatibilityCondition, CompatibilityReport};
pub use datum::{ExtendedBoundaryDatum, PieceKind};
pub use extension::{even_extension, odd_extension, Extension};

use crate::constants::{FD_STEP, K_MAX_BOUNDED};
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::numerics::{fd_residual, Equation, Field, FieldMetadata, Grid2D};
use crate::periodic::{admissibility, solve_periodic, Admissibility, PeriodicOptions, PeriodicSolution};
use crate::rational::Timing;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Dirichlet,
    Neumann,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Neumann => "neumann",
        }
    }
}

/// `y(0) = f`, `y(T) = g` on `[0, L]` with boundary values (Dirichlet) or
/// fluxes `y_x` (Neumann) at `x = 0` and `x = L`; `None` means zero.
#[derive(Clone)]
pub struct BoundedProblem {
    pub f: Arc<dyn RealFunction>,
    pub g: Arc<dyn RealFunction>,
    pub timing: Timing,
    pub kind: BoundaryKind,
    pub boundary: Option<(Arc<dyn RealFunction>, Arc<dyn RealFunction>)>,
}

impl BoundedProblem {
    pub fn homogeneous(kind: BoundaryKind, f: Arc<dyn RealFunction>, g: Arc<dyn RealFunction>, timing: Timing) -> Self {
        BoundedProblem { f, g, timing, kind, boundary: None }
    }

    pub fn inhomogeneous(
        kind: BoundaryKind,
        f: Arc<dyn RealFunction>,
        g: Arc<dyn RealFunction>,
        left: Arc<dyn RealFunction>,
        right: Arc<dyn RealFunction>,
        timing: Timing,
    ) -> Self {
        BoundedProblem { f, g, timing, kind, boundary: Some((left, right)) }
    }

    pub fn length(&self) -> f64 {
        self.timing.period()
    }

    pub fn horizon(&self) -> f64 {
        self.timing.horizon()
    }

    fn left(&self, t: f64, order: usize) -> f64 {
        self.boundary.as_ref().map_or(0.0, |(h, _)| h.derivative(t, order))
    }

    fn right(&self, t: f64, order: usize) -> f64 {
        self.boundary.as_ref().map_or(0.0, |(_, l)| l.derivative(t, order))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundedOptions {
    pub k_max: usize,
    pub samples: Option<usize>,
    pub verify_points: usize,
    pub trace_times: usize,
    pub verify: bool,
}

impl Default for BoundedOptions {
    fn default() -> Self {
        BoundedOptions { k_max: K_MAX_BOUNDED, samples: None, verify_points: 400, trace_times: 200, verify: true }
    }
}

/// Largest boundary-condition mismatch at each end over the sampled times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceErrors {
    pub left: f64,
    pub right: f64,
}

impl TraceErrors {
    pub fn max(&self) -> f64 {
        if self.left.is_nan() || self.right.is_nan() {
            f64::NAN
        } else {
            self.left.max(self.right)
        }
    }
}

/// The part removed by the substitution, `w(t, x)`.
#[derive(Clone)]
struct Substitution {
    kind: BoundaryKind,
    datum: Arc<ExtendedBoundaryDatum>,
}

impl Substitution {
    /// `d^order w / dx^order`.
    fn eval(&self, t: f64, x: f64, order: usize) -> f64 {
        let h = &self.datum;
        match self.kind {
            BoundaryKind::Dirichlet => {
                let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
                0.5 * (h.eval(t + x, order) + sign * h.eval(t - x, order))
            }
            BoundaryKind::Neumann if order == 0 => 0.5 * h.integral(t - x, t + x).unwrap_or(f64::NAN),
            BoundaryKind::Neumann => {
                let n = order - 1;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                0.5 * (h.eval(t + x, n) + sign * h.eval(t - x, n))
            }
        }
    }

    /// `w_t(0, x)`.
    fn time_derivative(&self, x: f64) -> f64 {
        let h = &self.datum;
        match self.kind {
            BoundaryKind::Dirichlet => 0.5 * (h.eval(x, 1) + h.eval(-x, 1)),
            BoundaryKind::Neumann => 0.5 * (h.eval(x, 0) - h.eval(-x, 0)),
        }
    }
}

/// `p(x) - w(t, x)` on `[0, L]`.
struct Derived {
    p: Arc<dyn RealFunction>,
    w: Substitution,
    t: f64,
}

impl RealFunction for Derived {
    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.p.derivative(x, order) - self.w.eval(self.t, x, order)
    }
}

#[derive(Clone)]
pub struct BoundedSolution {
    problem: BoundedProblem,
    pub compatibility: CompatibilityReport,
    pub admissibility: Admissibility,
    /// The homogeneous periodic problem of period `2L`.
    pub periodic: PeriodicSolution,
    pub datum: Option<Arc<ExtendedBoundaryDatum>>,
    w: Option<Substitution>,
    pub traces: Option<TraceErrors>,
    pub initial_sup_error: Option<f64>,
    /// Residual of `h(t + L) + h(t - L) = 2 l(t)` (inhomogeneous only).
    pub extension_identity: Option<f64>,
    pub metadata: FieldMetadata,
}

/// Solves a homogeneous or inhomogeneous bounded problem.
pub fn solve_bounded(problem: &BoundedProblem, options: &BoundedOptions) -> Result<BoundedSolution> {
    let compatibility = check_compatibility(problem);
    compatibility.require()?;
    let l = problem.length();
    let t = problem.horizon();
    let doubled = problem.timing.doubled_period()?;
    let adm = admissibility(&doubled)?;
    if !adm.admissible {
        return Err(Error::Inadmissible(format!(
            "T/L = {} is an integer; the extended problem of period 2L has no free velocity in its resonant modes",
            problem.timing.t_over_l()?
        )));
    }
    let (datum, w) = match &problem.boundary {
        None => (None, None),
        Some((left, right)) => {
            let d = Arc::new(ExtendedBoundaryDatum::new(problem.kind, left.clone(), right.clone(), t, l)?);
            (Some(d.clone()), Some(Substitution { kind: problem.kind, datum: d }))
        }
    };
    let (f_red, g_red): (Arc<dyn RealFunction>, Arc<dyn RealFunction>) = match &w {
        None => (problem.f.clone(), problem.g.clone()),
        Some(w) => (
            Arc::new(Derived { p: problem.f.clone(), w: w.clone(), t: 0.0 }),
            Arc::new(Derived { p: problem.g.clone(), w: w.clone(), t }),
        ),
    };
    let extend = |p: Arc<dyn RealFunction>| -> Result<Extension> {
        if w.is_some() {
            // The reduced data satisfy the homogeneous conditions whenever the
            // corner conditions hold; recheck to report round-off problems.
            match problem.kind {
                BoundaryKind::Dirichlet => odd_extension(p, l),
                BoundaryKind::Neumann => even_extension(p, l),
            }
            .map_err(|e| Error::Compatibility(format!("reduced data: {e}")))
        } else {
            Ok(Extension::unchecked(p, l, problem.kind))
        }
    };
    let ef = extend(f_red)?;
    let eg = extend(g_red)?;
    let popts = PeriodicOptions { k_max: options.k_max, samples: options.samples, verify: false, ..Default::default() };
    let periodic = solve_periodic(&ef, &eg, &doubled, &popts)?;
    let kind = if w.is_some() { "inhomogeneous" } else { "homogeneous" };
    let mut sol = BoundedSolution {
        problem: problem.clone(),
        metadata: FieldMetadata {
            provenance: format!("bounded/{}-{kind}", problem.kind.name()),
            warnings: periodic.metadata.warnings.clone(),
            ..Default::default()
        },
        compatibility,
        admissibility: adm,
        periodic,
        datum,
        w,
        traces: None,
        initial_sup_error: None,
        extension_identity: None,
    };
    if options.verify {
        sol.verify(options)?;
    }
    Ok(sol)
}

impl BoundedSolution {
    pub fn kind(&self) -> BoundaryKind {
        self.problem.kind
    }

    pub fn problem(&self) -> &BoundedProblem {
        &self.problem
    }

    pub fn length(&self) -> f64 {
        self.problem.length()
    }

    pub fn horizon(&self) -> f64 {
        self.problem.horizon()
    }

    /// `y~(t, x)`, the homogeneous part.
    pub fn reduced_value(&self, t: f64, x: f64) -> f64 {
        self.periodic.coefficients.synthesize(t, x)
    }

    /// `w(t, x)`, zero for homogeneous problems.
    pub fn substitution(&self, t: f64, x: f64) -> f64 {
        self.w.as_ref().map_or(0.0, |w| w.eval(t, x, 0))
    }

    /// The control `v(x) = y_t(0, x)`.
    pub fn control_value(&self, x: f64) -> f64 {
        let v = self.periodic.coefficients.control_velocity().value(x);
        v + self.w.as_ref().map_or(0.0, |w| w.time_derivative(x))
    }

    /// The control as a function.
    pub fn velocity(&self) -> BoundedVelocity {
        BoundedVelocity { series: self.periodic.coefficients.control_velocity(), w: self.w.clone() }
    }

    /// `y_x` by a centered difference.
    pub fn flux(&self, t: f64, x: f64) -> f64 {
        let h = FD_STEP;
        (self.value(t, x + h) - self.value(t, x - h)) / (2.0 * h)
    }

    pub fn sup_error(&self, t: f64, p: &dyn RealFunction, points: usize) -> f64 {
        let l = self.length();
        let n = points.max(2);
        (0..n)
            .map(|i| {
                let x = l * i as f64 / (n - 1) as f64;
                (self.value(t, x) - p.value(x)).abs()
            })
            .fold(0.0, |m: f64, e| if e.is_nan() { f64::NAN } else { m.max(e) })
    }

    pub fn trace_errors(&self, times: usize) -> TraceErrors {
        let n = times.max(2);
        let l = self.length();
        let mut out = TraceErrors { left: 0.0, right: 0.0 };
        for i in 0..n {
            let t = self.horizon() * i as f64 / (n - 1) as f64;
            let (a, b) = match self.kind() {
                BoundaryKind::Dirichlet => (
                    (self.value(t, 0.0) - self.problem.left(t, 0)).abs(),
                    (self.value(t, l) - self.problem.right(t, 0)).abs(),
                ),
                BoundaryKind::Neumann => (
                    (self.flux(t, 0.0) - self.problem.left(t, 0)).abs(),
                    (self.flux(t, l) - self.problem.right(t, 0)).abs(),
                ),
            };
            out.left = if a.is_nan() { f64::NAN } else { out.left.max(a) };
            out.right = if b.is_nan() { f64::NAN } else { out.right.max(b) };
        }
        out
    }

    fn verify(&mut self, options: &BoundedOptions) -> Result<()> {
        let n = options.verify_points;
        let f = self.problem.f.clone();
        let g = self.problem.g.clone();
        self.initial_sup_error = Some(self.sup_error(0.0, &*f, n));
        self.metadata.terminal_sup_error = Some(self.sup_error(self.horizon(), &*g, n));
        self.traces = Some(self.trace_errors(options.trace_times));
        self.extension_identity = self.datum.as_ref().map(|d| d.identity_residual(options.trace_times));
        let grid = Grid2D::new(self.horizon(), 0.0, self.length(), 64, 128)?;
        self.metadata.max_pde_residual = Some(fd_residual(self, &grid, Equation::Linear));
        Ok(())
    }

    pub fn warnings(&self) -> &[String] {
        &self.metadata.warnings
    }
}

impl Field for BoundedSolution {
    fn value(&self, t: f64, x: f64) -> f64 {
        self.reduced_value(t, x) + self.substitution(t, x)
    }
}

/// `v(x) = y_t(0, x)` for a bounded solution.
#[derive(Clone)]
pub struct BoundedVelocity {
    series: crate::periodic::FourierSeries,
    w: Option<Substitution>,
}

impl RealFunction for BoundedVelocity {
    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        let base = self.series.derivative(x, order);
        match &self.w {
            None => base,
            Some(w) => {
                let h = &w.datum;
                let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
                base + match w.kind {
                    BoundaryKind::Dirichlet => 0.5 * (h.eval(x, order + 1) + sign * h.eval(-x, order + 1)),
                    BoundaryKind::Neumann => 0.5 * (h.eval(x, order) - sign * h.eval(-x, order)),
                }
            }
        }
    }
}

/// Reference samples of the boundary data for reports: `(t, left, right)`.
pub fn boundary_samples(problem: &BoundedProblem, times: usize) -> Vec<(f64, f64, f64)> {
    let n = times.max(2);
    (0..n)
        .map(|i| {
            let t = problem.horizon() * i as f64 / (n - 1) as f64;
            (t, problem.left(t, 0), problem.right(t, 0))
        })
        .collect()
}
