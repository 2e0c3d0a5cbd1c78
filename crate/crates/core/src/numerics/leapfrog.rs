//! Explicit leapfrog solver for `y_tt = y_xx`, used only as an independent
//! oracle for the constructed solutions.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::Field;
use super::grid::Grid2D;
use crate::error::{Error, Result};
use crate::function::RealFunction;

/// Time-dependent boundary datum.
pub type BoundaryData = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Boundary {
    /// `[a, b]` is one period.
    Periodic,
    /// The line: the grid is padded internally by more cells than the wave
    /// can cross in `nt` steps, so the edges never reach `[a, b]`.
    PaddedLine,
    DirichletZero,
    NeumannZero,
    /// `y(t, a) = left(t)`, `y(t, b) = right(t)`.
    Dirichlet { left: BoundaryData, right: BoundaryData },
    /// `y_x(t, a) = left(t)`, `y_x(t, b) = right(t)`, imposed with a
    /// centered ghost node.
    Neumann { left: BoundaryData, right: BoundaryData },
}

impl fmt::Debug for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "Periodic",
            Boundary::PaddedLine => "PaddedLine",
            Boundary::DirichletZero => "DirichletZero",
            Boundary::NeumannZero => "NeumannZero",
            Boundary::Dirichlet { .. } => "Dirichlet",
            Boundary::Neumann { .. } => "Neumann",
        })
    }
}

/// Which time levels to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Store {
    All,
    /// Every `n`-th level plus the last one.
    Every(usize),
    Final,
}

/// Stored time levels of a leapfrog run, restricted to `[a, b]`.
#[derive(Debug, Clone)]
pub struct LeapfrogField {
    grid: Grid2D,
    steps: Vec<usize>,
    levels: Vec<Vec<f64>>,
}

/// Solves `y_tt = y_xx` with `y(0) = f`, `y_t(0) = v` on `grid`.
///
/// The first step is the Taylor start `f + dt v + dt^2/2 f''`; `f''` comes
/// from [`RealFunction::derivative`].
pub fn leapfrog_solve(
    f: &dyn RealFunction,
    v: &dyn RealFunction,
    grid: &Grid2D,
    boundary: &Boundary,
    store: Store,
) -> Result<LeapfrogField> {
    grid.check_cfl()?;
    let dt = grid.dt();
    let dx = grid.dx();
    let c2 = (dt / dx) * (dt / dx);
    let nt = grid.nt;
    let nx = grid.nx;

    let pad = if matches!(boundary, Boundary::PaddedLine) { nt + 2 } else { 0 };
    // Periodic runs drop the duplicate node at b.
    let m = if matches!(boundary, Boundary::Periodic) { nx } else { nx + 1 + 2 * pad };
    let node = |k: usize| grid.a + (k as f64 - pad as f64) * dx;

    let mut prev: Vec<f64> = (0..m).map(|k| f.value(node(k))).collect();
    let mut cur: Vec<f64> = (0..m)
        .map(|k| {
            let x = node(k);
            f.value(x) + dt * v.value(x) + 0.5 * dt * dt * f.derivative(x, 2)
        })
        .collect();
    if prev.iter().chain(cur.iter()).any(|y| !y.is_finite()) {
        return Err(Error::NonFinite("leapfrog initial data"));
    }
    apply_dirichlet(boundary, &mut cur, grid.t(1));
    let mut next = vec![0.0; m];

    let keep = |n: usize| match store {
        Store::All => true,
        Store::Every(k) => n % k.max(1) == 0 || n == nt,
        Store::Final => n == nt,
    };
    let window = |level: &[f64]| -> Vec<f64> {
        if matches!(boundary, Boundary::Periodic) {
            let mut w = level.to_vec();
            w.push(level[0]);
            w
        } else {
            level[pad..pad + nx + 1].to_vec()
        }
    };
    let mut steps = Vec::new();
    let mut levels = Vec::new();
    if keep(0) {
        steps.push(0);
        levels.push(window(&prev));
    }
    if keep(1) {
        steps.push(1);
        levels.push(window(&cur));
    }

    for n in 1..nt {
        let t = grid.t(n);
        for k in 1..m - 1 {
            next[k] = 2.0 * cur[k] - prev[k] + c2 * (cur[k + 1] - 2.0 * cur[k] + cur[k - 1]);
        }
        let last = m - 1;
        match boundary {
            Boundary::Periodic => {
                next[0] = 2.0 * cur[0] - prev[0] + c2 * (cur[1] - 2.0 * cur[0] + cur[last]);
                next[last] = 2.0 * cur[last] - prev[last] + c2 * (cur[0] - 2.0 * cur[last] + cur[last - 1]);
            }
            Boundary::PaddedLine => {
                next[0] = 2.0 * cur[0] - prev[0];
                next[last] = 2.0 * cur[last] - prev[last];
            }
            Boundary::DirichletZero | Boundary::Dirichlet { .. } => {
                apply_dirichlet(boundary, &mut next, grid.t(n + 1));
            }
            Boundary::NeumannZero => {
                next[0] = 2.0 * cur[0] - prev[0] + c2 * (2.0 * cur[1] - 2.0 * cur[0]);
                next[last] = 2.0 * cur[last] - prev[last] + c2 * (2.0 * cur[last - 1] - 2.0 * cur[last]);
            }
            Boundary::Neumann { left, right } => {
                let ghost_l = cur[1] - 2.0 * dx * left(t);
                let ghost_r = cur[last - 1] + 2.0 * dx * right(t);
                next[0] = 2.0 * cur[0] - prev[0] + c2 * (cur[1] - 2.0 * cur[0] + ghost_l);
                next[last] = 2.0 * cur[last] - prev[last] + c2 * (ghost_r - 2.0 * cur[last] + cur[last - 1]);
            }
        }
        core::mem::swap(&mut prev, &mut cur);
        core::mem::swap(&mut cur, &mut next);
        if keep(n + 1) {
            steps.push(n + 1);
            levels.push(window(&cur));
        }
    }
    Ok(LeapfrogField { grid: *grid, steps, levels })
}

fn apply_dirichlet(boundary: &Boundary, level: &mut [f64], t: f64) {
    let last = level.len() - 1;
    match boundary {
        Boundary::DirichletZero => {
            level[0] = 0.0;
            level[last] = 0.0;
        }
        Boundary::Dirichlet { left, right } => {
            level[0] = left(t);
            level[last] = right(t);
        }
        _ => {}
    }
}

impl LeapfrogField {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Indices of the stored time levels.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// Stored level for time step `n`, if kept.
    pub fn level(&self, n: usize) -> Option<&[f64]> {
        self.steps.binary_search(&n).ok().map(|i| self.levels[i].as_slice())
    }

    pub fn final_level(&self) -> &[f64] {
        self.levels.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// `max_j |y(T, x_j) - g(x_j)|`.
    pub fn final_sup_error(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.final_level()
            .iter()
            .enumerate()
            .map(|(j, y)| (y - g(self.grid.x(j))).abs())
            .fold(0.0, f64::max)
    }

    fn interp_x(&self, level: &[f64], x: f64) -> f64 {
        let s = (x - self.grid.a) / self.grid.dx();
        if !(s >= 0.0 && s <= self.grid.nx as f64) {
            return f64::NAN;
        }
        let j = (libm::floor(s) as usize).min(self.grid.nx - 1);
        let w = s - j as f64;
        (1.0 - w) * level[j] + w * level[j + 1]
    }
}

impl Field for LeapfrogField {
    /// Linear interpolation between stored levels and between nodes.
    fn value(&self, t: f64, x: f64) -> f64 {
        let s = t / self.grid.dt();
        let i = self.steps.partition_point(|&n| (n as f64) <= s);
        if i == 0 {
            return f64::NAN;
        }
        let lo = i - 1;
        if lo + 1 == self.steps.len() {
            return if s - self.steps[lo] as f64 <= 1e-9 { self.interp_x(&self.levels[lo], x) } else { f64::NAN };
        }
        let (n0, n1) = (self.steps[lo] as f64, self.steps[lo + 1] as f64);
        let w = (s - n0) / (n1 - n0);
        let y0 = self.interp_x(&self.levels[lo], x);
        if w == 0.0 {
            return y0;
        }
        (1.0 - w) * y0 + w * self.interp_x(&self.levels[lo + 1], x)
    }
}
