use std::sync::Arc;

use proptest::prelude::*;
use wavectl_core::constants::{BRIDGE_ENDPOINT_TOL, BRIDGE_INTEGRAL_TOL, BRIDGE_SLOPE_TOL};
use wavectl_core::line::{
    perturb_velocity, solve_line, BridgeChoice, BridgeFunction, LineOptions, LineProblem, LineSolution,
};
use wavectl_core::numerics::{integrate, leapfrog_solve, Boundary, Field, Grid2D, Store};
use wavectl_core::{Profile, RealFunction};

/// Mixed trigonometric and low-degree polynomial profiles.
fn profile_text() -> impl Strategy<Value = String> {
    (-2.0f64..2.0, 0.5f64..3.0, -1.0f64..1.0, -1.0f64..1.0, -0.3f64..0.3, -0.1f64..0.1).prop_map(
        |(a, k, phase, b, c, d)| format!("{a:.4}*sin({k:.4}*x + {phase:.4}) + {b:.4}*cos(x) + {c:.4}*x^2 + {d:.4}*x^3"),
    )
}

fn horizon() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(1.0), Just(2.718)]
}

fn solve(f: &str, g: &str, t: f64, bridge: BridgeChoice, points: usize) -> LineSolution {
    let problem = LineProblem::from_profiles(&Profile::parse(f).unwrap(), &Profile::parse(g).unwrap(), t).unwrap();
    solve_line(&problem, &LineOptions { bridge, points, ..Default::default() }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn bridge_conditions_hold(f0 in -5.0f64..5.0, f1 in -5.0f64..5.0, f2 in -5.0f64..5.0, t in 0.1f64..3.0) {
        for choice in [BridgeChoice::Poly, BridgeChoice::Sine] {
            let u = BridgeFunction::from_jet([f0, f1, f2], t, choice).unwrap();
            // Independent oracle: Gauss-free composite Simpson with many panels.
            let n = 20_000;
            let h = 2.0 * t / n as f64;
            let mut s = u.value(-t) + u.value(t);
            for i in 1..n {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * u.value(-t + i as f64 * h);
            }
            let integral = s * h / 3.0;
            prop_assert!((integral - 2.0 * f0).abs() <= BRIDGE_INTEGRAL_TOL * (1.0 + f0.abs()) * 10.0);
            prop_assert!((u.value(t) - u.value(-t) - 2.0 * f1).abs() <= BRIDGE_ENDPOINT_TOL * 10.0);
            let (r, l) = u.one_sided_slopes();
            prop_assert!((r - l - 2.0 * f2).abs() <= BRIDGE_SLOPE_TOL);
            let res = u.check().unwrap();
            prop_assert!(res.integral.abs() <= BRIDGE_INTEGRAL_TOL);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn terminal_profile_is_reached(f in profile_text(), g in profile_text(), t in horizon()) {
        for bridge in [BridgeChoice::Poly, BridgeChoice::Sine] {
            let sol = solve(&f, &g, t, bridge, 401);
            prop_assert!(sol.metadata.terminal_sup_error.unwrap() <= 1e-6);
            let gp = Profile::parse(&g).unwrap();
            for x in [-4.3, -0.2, 0.0, 1.9, 4.99] {
                prop_assert!((sol.value(t, x) - gp.value(x)).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn velocity_is_c1_at_junctions(f in profile_text(), g in profile_text(), t in horizon()) {
        for bridge in [BridgeChoice::Poly, BridgeChoice::Sine] {
            let sol = solve(&f, &g, t, bridge, 101);
            for j in sol.velocity().junctions(5) {
                prop_assert!(j.value_jump.abs() <= 1e-7, "{j:?}");
                prop_assert!(j.slope_jump.abs() <= 1e-5, "{j:?}");
            }
        }
    }

    #[test]
    fn initial_profile_is_kept(f in profile_text(), g in profile_text(), t in horizon()) {
        let sol = solve(&f, &g, t, BridgeChoice::Poly, 101);
        let fp = Profile::parse(&f).unwrap();
        for x in [-3.0, 0.1, 2.5] {
            prop_assert!((sol.value(0.0, x) - fp.value(x)).abs() <= 1e-14);
        }
    }

    #[test]
    fn periodic_perturbations_keep_the_terminal(
        g in profile_text(), t in horizon(), amp in 0.1f64..2.0, k in 1usize..4, phase in 0.0f64..6.0,
    ) {
        let sol = solve("0", &g, t, BridgeChoice::Poly, 401);
        let w = std::f64::consts::PI * k as f64 / t;
        let v1 = Profile::parse(&format!("{amp}*sin({w}*x + {phase})")).unwrap();
        let p = perturb_velocity(&sol, Arc::new(v1)).unwrap();
        prop_assert!(p.metadata.terminal_sup_error.unwrap() <= 1e-6);
        let change = (0..=400)
            .map(|i| -5.0 + 0.025 * i as f64)
            .map(|x| (p.control_value(x) - sol.control_value(x)).abs())
            .fold(0.0, f64::max);
        prop_assert!(change >= 0.1 * amp * 0.99);
    }
}

#[test]
fn solution_is_the_dalembert_integral() {
    let sol = solve("cos(x)", "sin(2*x)", 0.8, BridgeChoice::Sine, 201);
    let f = Profile::parse("cos(x)").unwrap();
    for (t, x) in [(0.3, -1.0), (0.55, 2.2), (0.8, 0.0)] {
        let v = |s: f64| sol.control_value(s);
        let mut int = 0.0;
        // Split at the kinks of the piecewise velocity.
        let pts: Vec<f64> = sol.velocity().breakpoints(x - t, x + t);
        let mut a = x - t;
        for b in pts.into_iter().chain([x + t]) {
            int += integrate(v, a, b, 1e-12).unwrap().value;
            a = b;
        }
        let expected = 0.5 * (f.value(x - t) + f.value(x + t)) + 0.5 * int;
        assert!((sol.value(t, x) - expected).abs() < 1e-10);
    }
}

#[test]
fn leapfrog_reproduces_the_terminal_profile() {
    let f = "0.5*sin(2*x) + 0.1*x^2";
    let g = "cos(1.5*x + 0.3) - 0.05*x^3";
    let t = 1.0;
    let sol = solve(f, g, t, BridgeChoice::Poly, 201);
    let dx = 1e-2;
    let grid = Grid2D::with_steps(t, -5.0, 5.0, dx / 2.0, dx).unwrap();
    let fp = Profile::parse(f).unwrap();
    let run = leapfrog_solve(&fp, sol.velocity(), &grid, &Boundary::PaddedLine, Store::Final).unwrap();
    let gp = Profile::parse(g).unwrap();
    let err = run.final_sup_error(|x| gp.value(x));
    assert!(err <= 5.0 * dx * dx, "{err}");
}
