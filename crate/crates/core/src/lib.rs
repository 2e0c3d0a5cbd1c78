//! Exact controls for two-point boundary value problems of the wave equation.
//!
//! Given an initial profile `f` and a terminal profile `g`, the constructions in
//! this crate produce an initial velocity `v` such that the solution of
//! `y_tt - y_xx = 0`, `y(0) = f`, `y_t(0) = v` satisfies `y(T) = g`. Every
//! constructed field carries verification metadata computed against
//! independent oracles (quadrature, finite differences, a leapfrog solver).
//!
//! Problem families:
//!
//! * [`line`]: the whole real line, via a bridge function and a piecewise
//!   velocity built from shifted derivatives of the reduced terminal profile.
//! * [`periodic`]: the circle of length `L`, via Fourier synthesis, with exact
//!   rational admissibility of `T / L`.
//! * [`bounded`]: the interval `[0, L]` with Dirichlet or Neumann data, reduced
//!   to the periodic case by odd or even extension.
//! * [`applications`]: a wave map reduced by `z = exp(-y)`, and the hyperbolic
//!   curvature flow with a non-negativity shift.
//! * [`radial`]: the 3-D wave equation at a point, via spherical means.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command line
//! front end live in the `wavectl` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod applications;
pub mod bounded;
pub mod constants;
mod error;
pub mod expr;
pub mod function;
pub mod line;
pub mod numerics;
pub mod periodic;
pub mod radial;
pub mod rational;

pub use error::{BridgeCondition, Error, Result};
pub use expr::{Expr, Profile};
pub use function::RealFunction;
pub use numerics::{Field, FieldMetadata, SolutionField};
pub use rational::{Rational, Timing};
