//! Exact controllability on the circle of length `L` by Fourier synthesis.
//!
//! The problem is solvable for all data exactly when `2T/L` is not an
//! integer. `T` and `L` are exact fractions (see [`Timing`]) so this is
//! decided in integer arithmetic.

mod admissibility;
mod coefficients;
mod obstruction;
mod series;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use admissibility::{admissibility, Admissibility, SINUSOID_CHECK_MODES};
pub use coefficients::{control_coefficients, ControlCoefficients};
pub use obstruction::{decay_check, decay_check_profile, obstruction_residual, DecayReport, OBSTRUCTION_POINTS};
pub use series::{analyze, analyze_sampled, analyze_values, default_samples, FourierSeries};

use crate::constants::K_MAX;
use crate::error::Result;
use crate::function::RealFunction;
use crate::numerics::{energy_drift, fd_residual, Equation, Field, FieldMetadata, Grid2D};
use crate::rational::Timing;

/// Coefficients at or above this in the last retained mode trigger a
/// truncation warning.
pub const TRUNCATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOptions {
    pub k_max: usize,
    /// Samples per period for the analysis; `None` picks [`default_samples`].
    pub samples: Option<usize>,
    /// Points the endpoint errors are sampled at.
    pub verify_points: usize,
    /// Time samples of the energy check.
    pub energy_times: usize,
    /// `(k, beta_k, beta~_k)` for resonant modes.
    pub injections: Vec<(usize, f64, f64)>,
    pub verify: bool,
}

impl Default for PeriodicOptions {
    fn default() -> Self {
        PeriodicOptions {
            k_max: K_MAX,
            samples: None,
            verify_points: 400,
            energy_times: 50,
            injections: Vec::new(),
            verify: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PeriodicSolution {
    pub timing: Timing,
    pub admissibility: Admissibility,
    pub initial: FourierSeries,
    pub terminal: FourierSeries,
    pub coefficients: ControlCoefficients,
    /// `sup |y(0, x) - f(x)|` over the verification points.
    pub initial_sup_error: Option<f64>,
    pub metadata: FieldMetadata,
}

/// Builds the control for `y(0) = f`, `y(T) = g` on the circle.
pub fn solve_periodic(
    f: &dyn RealFunction,
    g: &dyn RealFunction,
    timing: &Timing,
    options: &PeriodicOptions,
) -> Result<PeriodicSolution> {
    let adm = admissibility(timing)?;
    adm.require()?;
    let l = timing.period();
    let samples = options.samples.unwrap_or_else(|| default_samples(options.k_max));
    let ff = analyze_sampled(f, l, options.k_max, samples)?;
    let fg = analyze_sampled(g, l, options.k_max, samples)?;
    let mut coefficients = control_coefficients(&ff, &fg, &adm, timing.horizon())?;
    for &(k, b, bb) in &options.injections {
        coefficients.inject_resonant(k, b, bb)?;
    }
    let mut warnings = Vec::new();
    for (name, s) in [("initial", &ff), ("terminal", &fg)] {
        if s.tail() >= TRUNCATION_TOL {
            let msg = format!(
                "{name} profile is not resolved by {} modes (last mode magnitude {:.3e})",
                s.k_max(),
                s.tail()
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }
    let mut sol = PeriodicSolution {
        timing: *timing,
        admissibility: adm,
        initial: ff,
        terminal: fg,
        coefficients,
        initial_sup_error: None,
        metadata: FieldMetadata { provenance: String::from("periodic/fourier"), warnings, ..Default::default() },
    };
    if options.verify {
        sol.verify(f, g, options)?;
    }
    Ok(sol)
}

impl PeriodicSolution {
    pub fn horizon(&self) -> f64 {
        self.timing.horizon()
    }

    pub fn period(&self) -> f64 {
        self.timing.period()
    }

    pub fn velocity(&self) -> FourierSeries {
        self.coefficients.control_velocity()
    }

    /// `sup |y(t, x) - p(x)|` over `points` equispaced `x` in `[0, L)`.
    pub fn sup_error(&self, t: f64, p: &dyn RealFunction, points: usize) -> f64 {
        let l = self.period();
        (0..points)
            .map(|i| {
                let x = l * i as f64 / points as f64;
                (self.coefficients.synthesize(t, x) - p.value(x)).abs()
            })
            .fold(0.0, |m: f64, e| if e.is_nan() { f64::NAN } else { m.max(e) })
    }

    /// Relative energy drift of the `beta_0`-free part over `times` samples in `[0, T]`.
    pub fn energy_drift(&self, times: usize) -> f64 {
        let free = self.coefficients.without_drift();
        let n = times.max(2);
        let ts: Vec<f64> = (0..n).map(|i| self.horizon() * i as f64 / (n - 1) as f64).collect();
        energy_drift(&free, &ts, (0.0, self.period()), true)
    }

    fn verify(&mut self, f: &dyn RealFunction, g: &dyn RealFunction, options: &PeriodicOptions) -> Result<()> {
        let n = options.verify_points;
        self.initial_sup_error = Some(self.sup_error(0.0, f, n));
        self.metadata.terminal_sup_error = Some(self.sup_error(self.horizon(), g, n));
        self.metadata.energy_drift = Some(self.energy_drift(options.energy_times));
        let grid = Grid2D::new(self.horizon(), 0.0, self.period(), 128, 256)?;
        self.metadata.max_pde_residual = Some(fd_residual(self, &grid, Equation::Linear));
        Ok(())
    }
}

impl Field for PeriodicSolution {
    fn value(&self, t: f64, x: f64) -> f64 {
        self.coefficients.synthesize(t, x)
    }
}

/// A velocity series as a shareable function.
pub fn velocity_function(sol: &PeriodicSolution) -> Arc<dyn RealFunction> {
    Arc::new(sol.velocity())
}
