//! Quadrature, grids, finite-difference checks and the leapfrog oracle.

mod field;
mod gauss;
mod grid;
mod hermite;
mod leapfrog;
mod optimize;
mod quadrature;
mod residual;

pub use field::{Field, FieldMetadata, SolutionField};
pub use gauss::gauss_legendre;
pub use grid::Grid2D;
pub use hermite::HermitePoly;
pub use leapfrog::{leapfrog_solve, Boundary, BoundaryData, LeapfrogField, Store};
pub use optimize::{golden_section, scan_min};
pub use quadrature::{integrate, integrate_function, integrate_split, Integral};
pub use residual::{energy, energy_drift, fd_residual, Equation};
