use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{BoundaryKind, BoundedProblem};
use crate::constants::COMPATIBILITY_TOL;
use crate::error::{Error, Result};

/// One endpoint condition and its residual.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityCondition {
    pub name: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    pub kind: BoundaryKind,
    pub conditions: Vec<CompatibilityCondition>,
    pub tolerance: f64,
    pub passed: bool,
}

impl CompatibilityReport {
    pub fn max_residual(&self) -> f64 {
        self.conditions.iter().fold(0.0, |m: f64, c| if c.residual.is_nan() { f64::NAN } else { m.max(c.residual) })
    }

    pub fn first_failure(&self) -> Option<&CompatibilityCondition> {
        self.conditions.iter().find(|c| !(c.residual <= self.tolerance))
    }

    pub fn require(&self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(Error::Compatibility(format!(
                "{} fails with residual {:e} (tolerance {:e})",
                c.name, c.residual, self.tolerance
            ))),
        }
    }
}

/// Evaluates the endpoint conditions of the problem.
///
/// Homogeneous Dirichlet data need `f, f'', g, g''` to vanish at both ends,
/// homogeneous Neumann data need `f', g'` to vanish there. With boundary
/// data the profiles must match `h, l` (resp. `H, K`) at the corners.
pub fn check_compatibility(problem: &BoundedProblem) -> CompatibilityReport {
    let l = problem.timing.period();
    let t = problem.timing.horizon();
    let (f, g) = (&problem.f, &problem.g);
    let orders: &[usize] = match problem.kind {
        BoundaryKind::Dirichlet => &[0, 2],
        BoundaryKind::Neumann => &[1],
    };
    let mut conditions = Vec::new();
    for &j in orders {
        let d = "'".repeat(j);
        let flux = problem.kind == BoundaryKind::Neumann;
        for (name, p, time) in [("f", f, 0.0), ("g", g, t)] {
            for (end, x) in [("0", 0.0), ("L", l)] {
                let lhs = p.derivative(x, j);
                let (rhs, rhs_name) = match &problem.boundary {
                    None => (0.0, String::from("0")),
                    Some((left, right)) => {
                        let (datum, dname) = if x == 0.0 { (left, if flux { "H" } else { "h" }) } else { (right, if flux { "K" } else { "l" }) };
                        // Flux data are already first derivatives.
                        let order = if flux { j - 1 } else { j };
                        let tname = if time == 0.0 { "0" } else { "T" };
                        (datum.derivative(time, order), format!("{dname}{}({tname})", "'".repeat(order)))
                    }
                };
                conditions.push(CompatibilityCondition {
                    name: format!("{name}{d}({end}) = {rhs_name}"),
                    residual: (lhs - rhs).abs(),
                });
            }
        }
    }
    let mut report = CompatibilityReport { kind: problem.kind, conditions, tolerance: COMPATIBILITY_TOL, passed: false };
    report.passed = report.first_failure().is_none();
    report
}
