//! Two nonlinear applications of the linear constructions.
//!
//! * A wave map `y_tt - y_xx = y_t^2 - y_x^2` on the line, linearized by
//!   `z = exp(-y)`. The control must keep `z > 0`, which holds when the
//!   velocity of the linear problem is non-negative.
//! * The hyperbolic flow `k_tt = k_ss` of the curvature of a closed curve,
//!   steered to a circle while staying non-negative by adding `|M| t`.

mod curvature;
mod curve;
mod wavemap;

pub use curvature::{curvature_flow_control, CurvatureFlowResult, CurvatureOptions};
pub use curve::{reconstruct_curve, Curve};
pub use wavemap::{
    check_wavemap_conditions, exp_neg, nonnegative_bridge, solve_wavemap, wavemap_reduced, SignPattern,
    WaveMapCertificate, WaveMapOptions, WaveMapSolution,
};

#[cfg(test)]
mod tests;
