use std::sync::Arc;

use proptest::prelude::*;
use wavectl_core::bounded::{solve_bounded, BoundaryKind, BoundedOptions, BoundedProblem, BoundedSolution};
use wavectl_core::numerics::{leapfrog_solve, Boundary, Field, Grid2D, Store};
use wavectl_core::{Profile, Rational, RealFunction, Timing};

fn timing() -> Timing {
    Timing::new(Rational::new(1, 3).unwrap(), Rational::integer(1)).unwrap()
}

/// `sum c_k sin(k pi x)` (Dirichlet) or `cos` (Neumann) over modes that are
/// not resonant at `T = 1/3` on the doubled period.
fn modes(kind: BoundaryKind, c: &[f64]) -> String {
    let basis = if kind == BoundaryKind::Dirichlet { "sin" } else { "cos" };
    [1, 2, 4, 5]
        .iter()
        .zip(c)
        .map(|(k, a)| format!("{a:.4}*{basis}({k}*pi*x)"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn solve(kind: BoundaryKind, f: &str, g: &str) -> BoundedSolution {
    let p = |s: &str| -> Arc<dyn RealFunction> { Arc::new(Profile::parse(s).unwrap()) };
    let problem = BoundedProblem::homogeneous(kind, p(f), p(g), timing());
    solve_bounded(&problem, &BoundedOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dirichlet_pairs(c in prop::collection::vec(-1.0f64..1.0, 8)) {
        let (f, g) = (modes(BoundaryKind::Dirichlet, &c[..4]), modes(BoundaryKind::Dirichlet, &c[4..]));
        let sol = solve(BoundaryKind::Dirichlet, &f, &g);
        prop_assert!(sol.metadata.terminal_sup_error.unwrap() <= 1e-6);
        prop_assert!(sol.traces.unwrap().max() <= 1e-8);
        for t in [0.05, 0.2, 0.31] {
            prop_assert!(sol.value(t, 0.0).abs() <= 1e-8);
            prop_assert!(sol.value(t, 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn neumann_pairs(c in prop::collection::vec(-1.0f64..1.0, 8), m in -1.0f64..1.0) {
        let f = format!("{m:.3} + {}", modes(BoundaryKind::Neumann, &c[..4]));
        let g = modes(BoundaryKind::Neumann, &c[4..]);
        let sol = solve(BoundaryKind::Neumann, &f, &g);
        prop_assert!(sol.metadata.terminal_sup_error.unwrap() <= 1e-6);
        prop_assert!(sol.traces.unwrap().max() <= 1e-5);
    }
}

fn leapfrog_error(kind: BoundaryKind, f: &str, g: &str, boundary: Boundary) -> f64 {
    let sol = solve(kind, f, g);
    let dx = 1e-2;
    let grid = Grid2D::new(1.0 / 3.0, 0.0, 1.0, 67, 100).unwrap();
    let fp = Profile::parse(f).unwrap();
    let run = leapfrog_solve(&fp, &sol.velocity(), &grid, &boundary, Store::Final).unwrap();
    let gp = Profile::parse(g).unwrap();
    run.final_sup_error(|x| gp.value(x))
}

#[test]
fn leapfrog_agrees_with_dirichlet_control() {
    let err = leapfrog_error(BoundaryKind::Dirichlet, "sin(pi*x) + 0.3*sin(2*pi*x)", "0.5*sin(4*pi*x)", Boundary::DirichletZero);
    assert!(err <= 5e-4, "{err}");
}

#[test]
fn leapfrog_agrees_with_neumann_control() {
    let err = leapfrog_error(BoundaryKind::Neumann, "1 + cos(pi*x)", "0.4*cos(2*pi*x) + 1", Boundary::NeumannZero);
    // Second-order ghost-node boundary closure on top of the interior error.
    assert!(err <= 5e-4 + 1e-3, "{err}");
}
