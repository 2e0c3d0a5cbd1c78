//! Default tolerances and sizes, in one place.

/// Default absolute tolerance of the adaptive Simpson integrator.
pub const QUAD_TOL: f64 = 1e-9;
/// Recursion depth cap of the adaptive Simpson integrator.
pub const QUAD_MAX_DEPTH: u32 = 40;

/// Bridge conditions: integral, endpoint difference, slope difference.
pub const BRIDGE_INTEGRAL_TOL: f64 = 1e-9;
pub const BRIDGE_ENDPOINT_TOL: f64 = 1e-10;
pub const BRIDGE_SLOPE_TOL: f64 = 1e-8;

/// Terminal sup-error accepted for linear constructions on the line.
pub const LINE_TERMINAL_TOL: f64 = 1e-6;
/// Default report window half-width and sample count.
pub const LINE_WINDOW: f64 = 5.0;
pub const LINE_WINDOW_POINTS: usize = 2001;

/// Zero-mean and periodicity checks on velocity perturbations.
pub const PERTURBATION_TOL: f64 = 1e-9;

/// Default number of Fourier modes.
pub const K_MAX: usize = 64;
/// Default number of modes for bounded problems, whose extended data are
/// only finitely smooth.
pub const K_MAX_BOUNDED: usize = 512;
/// A resonant mode is consistent when its forced relation holds to this.
pub const RESONANCE_TOL: f64 = 1e-8;
/// Endpoint reproduction of periodic constructions.
pub const PERIODIC_ENDPOINT_TOL: f64 = 1e-8;

/// Endpoint compatibility residual tolerance.
pub const COMPATIBILITY_TOL: f64 = 1e-9;
/// Boundary-trace tolerances.
pub const DIRICHLET_TRACE_TOL: f64 = 1e-8;
pub const NEUMANN_TRACE_TOL: f64 = 1e-6;
pub const INHOMOGENEOUS_VALUE_TRACE_TOL: f64 = 1e-6;
pub const INHOMOGENEOUS_FLUX_TRACE_TOL: f64 = 1e-5;
pub const BOUNDED_TERMINAL_TOL: f64 = 1e-6;
/// Extension identity `h(t+L) + h(t-L) = 2 l(t)`.
pub const EXTENSION_IDENTITY_TOL: f64 = 1e-9;

/// Step for finite-difference derivatives of evaluated fields.
pub const FD_STEP: f64 = 1e-5;

/// Wave map: residual step, residual tolerance, endpoint tolerances.
pub const WAVEMAP_FD_STEP: f64 = 1e-3;
pub const WAVEMAP_RESIDUAL_TOL: f64 = 1e-4;
pub const WAVEMAP_INITIAL_TOL: f64 = 1e-6;
pub const WAVEMAP_TERMINAL_TOL: f64 = 1e-5;
/// Tight integrator tolerance for fields that are differentiated numerically.
pub const QUAD_TOL_TIGHT: f64 = 1e-12;

/// Curvature flow: scan size, golden-section tolerance, checks.
pub const CURVATURE_SCAN_POINTS: usize = 4001;
pub const CURVATURE_GOLDEN_TOL: f64 = 1e-10;
pub const CURVATURE_NONNEG_TOL: f64 = 1e-12;
pub const CURVATURE_TERMINAL_TOL: f64 = 1e-8;

/// Radial reduction: sphere quadrature order, table spacing, Richardson step.
pub const SPHERE_QUAD_ORDER: usize = 16;
pub const RADIAL_TABLE_STEP: f64 = 1e-3;
pub const RADIAL_RICHARDSON_STEP: f64 = 1e-2;
pub const RADIAL_EXTRAPOLATION_TOL: f64 = 1e-4;
pub const RADIAL_TERMINAL_TOL: f64 = 1e-4;
/// `R_max = T + RADIAL_MARGIN`.
pub const RADIAL_MARGIN: f64 = 5.0;
