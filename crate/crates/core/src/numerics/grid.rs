use crate::error::{Error, Result};

/// Uniform space-time grid on `[0, t_end] x [a, b]` with `nt` time steps and
/// `nx` space intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub t_end: f64,
    pub a: f64,
    pub b: f64,
    pub nt: usize,
    pub nx: usize,
}

/// How far a step may miss dividing its interval before the grid is rejected.
const STEP_FIT_TOL: f64 = 1e-9;

impl Grid2D {
    pub fn new(t_end: f64, a: f64, b: f64, nt: usize, nx: usize) -> Result<Grid2D> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::Grid("time horizon must be positive"));
        }
        if !(b > a && a.is_finite() && b.is_finite()) {
            return Err(Error::Grid("space interval must satisfy a < b"));
        }
        if nt == 0 || nx < 2 {
            return Err(Error::Grid("need at least one time step and two space intervals"));
        }
        Ok(Grid2D { t_end, a, b, nt, nx })
    }

    /// Grid with the given steps; both must divide their intervals.
    pub fn with_steps(t_end: f64, a: f64, b: f64, dt: f64, dx: f64) -> Result<Grid2D> {
        if !(dt > 0.0 && dx > 0.0) {
            return Err(Error::Grid("steps must be positive"));
        }
        let nt = libm::round(t_end / dt);
        let nx = libm::round((b - a) / dx);
        if (nt * dt - t_end).abs() > STEP_FIT_TOL * t_end.max(1.0) {
            return Err(Error::Grid("time step does not divide the horizon"));
        }
        if (nx * dx - (b - a)).abs() > STEP_FIT_TOL * (b - a).max(1.0) {
            return Err(Error::Grid("space step does not divide the interval"));
        }
        Grid2D::new(t_end, a, b, nt as usize, nx as usize)
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.nt as f64
    }

    pub fn dx(&self) -> f64 {
        (self.b - self.a) / self.nx as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        if i == self.nt {
            self.t_end
        } else {
            self.t_end * i as f64 / self.nt as f64
        }
    }

    pub fn x(&self, j: usize) -> f64 {
        if j == self.nx {
            self.b
        } else {
            self.a + (self.b - self.a) * j as f64 / self.nx as f64
        }
    }

    /// `dt / dx`; the leapfrog oracle needs this at most 1.
    pub fn courant(&self) -> f64 {
        self.dt() / self.dx()
    }

    pub fn check_cfl(&self) -> Result<()> {
        let ratio = self.courant();
        if ratio > 1.0 + 1e-12 {
            return Err(Error::Cfl { ratio });
        }
        Ok(())
    }

    /// Both steps halved.
    pub fn refined(&self) -> Grid2D {
        Grid2D { nt: 2 * self.nt, nx: 2 * self.nx, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_must_divide() {
        let g = Grid2D::with_steps(1.0, -5.0, 5.0, 1e-3, 1e-3).unwrap();
        assert_eq!((g.nt, g.nx), (1000, 10000));
        assert_eq!(g.x(g.nx), 5.0);
        assert!(Grid2D::with_steps(1.0, 0.0, 1.0, 0.3, 0.1).is_err());
    }

    #[test]
    fn cfl() {
        let g = Grid2D::new(1.0, 0.0, 1.0, 10, 20).unwrap();
        assert!(matches!(g.check_cfl(), Err(Error::Cfl { .. })));
        assert!(g.refined().check_cfl().is_err());
        assert!(Grid2D::new(1.0, 0.0, 1.0, 20, 10).unwrap().check_cfl().is_ok());
    }
}
