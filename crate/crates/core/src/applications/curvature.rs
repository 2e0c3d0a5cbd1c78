use alloc::format;
use alloc::sync::Arc;

use crate::constants::{CURVATURE_GOLDEN_TOL, CURVATURE_NONNEG_TOL, CURVATURE_SCAN_POINTS, CURVATURE_TERMINAL_TOL};
use crate::error::{Error, Result};
use crate::function::{Constant, RealFunction};
use crate::numerics::{fd_residual, scan_min, Equation, Field, FieldMetadata, Grid2D};
use crate::periodic::{solve_periodic, FourierSeries, PeriodicOptions, PeriodicSolution};
use crate::rational::Timing;

/// Curvature `k(t, s)` of the hyperbolic flow `k_tt = k_ss` steered from `f`
/// to the constant `k*`, shifted by `|M| t` with `M = min k_t(0, .)` so
/// that the initial velocity, and hence the whole field, is non-negative.
#[derive(Debug, Clone)]
pub struct CurvatureFlowResult {
    pub k_star: f64,
    pub periodic: PeriodicSolution,
    pub velocity: FourierSeries,
    /// `M = min v` and where it is attained.
    pub m: f64,
    pub argmin: f64,
    /// `|M|` if `M < 0`, else 0.
    pub shift: f64,
    /// Terminal constant `k* + shift * T`.
    pub k0: f64,
    pub min_input: f64,
    pub min_kbar: Option<f64>,
    /// `sup |k~(T, s) - k0|`.
    pub terminal_spread: Option<f64>,
    /// `min (v + shift)` over the scan points.
    pub min_vbar: Option<f64>,
    pub metadata: FieldMetadata,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOptions {
    pub k_max: usize,
    pub scan_points: usize,
    pub golden_tol: f64,
    /// Time samples of the non-negativity check.
    pub time_samples: usize,
    pub verify: bool,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        CurvatureOptions {
            k_max: crate::constants::K_MAX,
            scan_points: CURVATURE_SCAN_POINTS,
            golden_tol: CURVATURE_GOLDEN_TOL,
            time_samples: 101,
            verify: true,
        }
    }
}

pub fn curvature_flow_control(
    f: Arc<dyn RealFunction>,
    timing: &Timing,
    k_star: f64,
    options: &CurvatureOptions,
) -> Result<CurvatureFlowResult> {
    if !(k_star > 0.0 && k_star.is_finite()) {
        return Err(Error::Invalid(format!("target curvature must be positive, got {k_star}")));
    }
    let l = timing.period();
    let (at, min_input) = scan_min(|s| f.value(s), 0.0, l, options.scan_points, options.golden_tol);
    if !min_input.is_finite() {
        return Err(Error::NonFinite("input curvature"));
    }
    if min_input < -CURVATURE_NONNEG_TOL {
        return Err(Error::NegativeCurvature { value: min_input, at });
    }
    let popts = PeriodicOptions { k_max: options.k_max, verify: false, ..Default::default() };
    let periodic = solve_periodic(&*f, &Constant(k_star), timing, &popts)?;
    let velocity = periodic.velocity();
    let (argmin, m) = scan_min(|s| velocity.value(s), 0.0, l, options.scan_points, options.golden_tol);
    let shift = if m < 0.0 { -m } else { 0.0 };
    let mut out = CurvatureFlowResult {
        k_star,
        k0: k_star + shift * timing.horizon(),
        metadata: FieldMetadata {
            provenance: "curvature-flow/fourier".into(),
            warnings: periodic.metadata.warnings.clone(),
            ..Default::default()
        },
        periodic,
        velocity,
        m,
        argmin,
        shift,
        min_input,
        min_kbar: None,
        terminal_spread: None,
        min_vbar: None,
    };
    if options.verify {
        out.verify(&*f, options)?;
    }
    Ok(out)
}

impl CurvatureFlowResult {
    pub fn horizon(&self) -> f64 {
        self.periodic.horizon()
    }

    pub fn period(&self) -> f64 {
        self.periodic.period()
    }

    /// The unshifted field `k(t, s)`.
    pub fn k(&self, t: f64, s: f64) -> f64 {
        self.periodic.value(t, s)
    }

    fn verify(&mut self, f: &dyn RealFunction, options: &CurvatureOptions) -> Result<()> {
        let (l, t_end) = (self.period(), self.horizon());
        let n = options.scan_points.max(2);
        let s_at = |j: usize| l * j as f64 / (n - 1) as f64;
        self.min_vbar = Some((0..n).map(|j| self.velocity.value(s_at(j)) + self.shift).fold(f64::INFINITY, f64::min));
        let nt = options.time_samples.max(2);
        let mut min_kbar = f64::INFINITY;
        for i in 0..nt {
            let t = t_end * i as f64 / (nt - 1) as f64;
            for j in (0..n).step_by(4) {
                min_kbar = min_kbar.min(self.value(t, s_at(j)));
            }
        }
        self.min_kbar = Some(min_kbar);
        self.terminal_spread = Some((0..n).map(|j| (self.value(t_end, s_at(j)) - self.k0).abs()).fold(0.0, f64::max));
        self.metadata.terminal_sup_error = self.terminal_spread;
        let init = (0..n).map(|j| (self.value(0.0, s_at(j)) - f.value(s_at(j))).abs()).fold(0.0, f64::max);
        self.periodic.initial_sup_error = Some(init);
        let grid = Grid2D::new(t_end, 0.0, l, 64, 128)?;
        self.metadata.max_pde_residual = Some(fd_residual(self, &grid, Equation::Linear));
        Ok(())
    }

    pub fn within_tolerances(&self) -> bool {
        self.min_kbar.is_some_and(|m| m >= -CURVATURE_NONNEG_TOL)
            && self.terminal_spread.is_some_and(|e| e <= CURVATURE_TERMINAL_TOL)
            && self.min_vbar.is_some_and(|m| m >= -CURVATURE_NONNEG_TOL)
    }
}

impl Field for CurvatureFlowResult {
    /// `k~(t, s) = k(t, s) + |M| t`.
    fn value(&self, t: f64, s: f64) -> f64 {
        self.k(t, s) + self.shift * t
    }
}
