use alloc::sync::Arc;
use core::f64::consts::PI;

use super::*;
use crate::error::Error;
use crate::expr::Profile;
use crate::function::{Constant, RealFunction};
use crate::numerics::Field;
use crate::rational::Timing;

fn p(s: &str) -> Profile {
    Profile::parse(s).unwrap()
}

/// `f = 1` and `g = -ln(phi + e^-1)` give the reduced profile `phi`.
fn engineered(phi: &str) -> (Profile, Profile) {
    (p("1"), p(&alloc::format!("-ln({phi} + exp(-1))")))
}

#[test]
fn gate_on_constants() {
    let c = check_wavemap_conditions(&p("2"), &p("0"), 0.5, 5.0, 2001, 4).unwrap();
    assert!(c.gate());
    assert_eq!(c.margin, 2.0);
    let err = solve_wavemap(&p("1"), &p("1"), 0.5, &WaveMapOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Certificate(_)), "{err:?}");
}

#[test]
fn monotone_pattern() {
    let (f, g) = engineered("x^2 + 1");
    let c = check_wavemap_conditions(&f, &g, 0.5, 5.0, 2001, 6).unwrap();
    assert_eq!(c.pattern, SignPattern::Monotone);
    assert!(c.passed());
    let rt = wavemap_reduced(&f, &g, 0.5).unwrap();
    assert!((rt.value(0.7) - 1.49).abs() < 1e-12);
}

#[test]
fn alternating_pattern_and_solution() {
    let (f, g) = engineered("-cos(pi*x) + 2");
    let c = check_wavemap_conditions(&f, &g, 0.5, 5.0, 2001, 6).unwrap();
    assert_eq!(c.pattern, SignPattern::Alternating);
    assert!(c.passed());
    let sol = solve_wavemap(&f, &g, 0.5, &WaveMapOptions::default()).unwrap();
    assert!(sol.min_z.unwrap() > 0.0);
    assert!(sol.min_v.unwrap() >= -1e-12);
    assert!(sol.metadata.max_pde_residual.unwrap() <= 1e-4, "{:?}", sol.metadata);
    assert!(sol.initial_sup_error.unwrap() <= 1e-6);
    assert!(sol.metadata.terminal_sup_error.unwrap() <= 1e-5);
    assert!(sol.identity_defect.unwrap() <= 1e-12);
    assert!(sol.within_tolerances());
}

#[test]
fn positivity_propagates() {
    let (f, g) = engineered("x^2 + 1");
    let sol = solve_wavemap(&f, &g, 0.5, &WaveMapOptions::default()).unwrap();
    let fh = exp_neg(&f);
    for (t, x) in [(0.1, -3.0), (0.25, 0.4), (0.49, 4.2)] {
        assert!(sol.z(t, x) >= 0.5 * (fh.value(x - t) + fh.value(x + t)) - 1e-14);
    }
}

#[test]
fn negative_bridge_family_is_rejected() {
    // f~ = x^2 + c with c < T^2/3 makes the quadratic bridge dip below zero.
    let err = nonnegative_bridge([0.0, 0.0, 2.0], 1.0, 10).unwrap_err();
    assert!(matches!(err, Error::Certificate(_)));
    let (choice, min) = nonnegative_bridge([1.0, 0.0, 2.0], 0.5, 10).unwrap();
    assert!(min >= 0.0);
    assert_eq!(choice.name(), "poly");
}

fn timing(t: &str, l: &str) -> Timing {
    Timing::new(t.parse().unwrap(), l.parse().unwrap()).unwrap()
}

#[test]
fn circle_stays_put() {
    let r = curvature_flow_control(Arc::new(Constant(3.0)), &timing("1/4", "1"), 3.0, &CurvatureOptions::default())
        .unwrap();
    assert!(r.m.abs() < 1e-10);
    assert!((r.k0 - 3.0).abs() < 1e-10);
    assert!(r.within_tolerances());
}

#[test]
fn quarter_period_example() {
    let f: Arc<dyn RealFunction> = Arc::new(p("2 + cos(2*pi*s)"));
    let r = curvature_flow_control(f, &timing("1/4", "1"), 2.0, &CurvatureOptions::default()).unwrap();
    assert!(r.m.abs() < 1e-10);
    assert!(r.terminal_spread.unwrap() <= 1e-8);
    assert!(r.min_kbar.unwrap() >= -1e-12);
    assert!(r.within_tolerances());
}

#[test]
fn third_period_needs_shift() {
    let f: Arc<dyn RealFunction> = Arc::new(p("2 + cos(2*pi*s)"));
    let r = curvature_flow_control(f, &timing("1/3", "1"), 2.0, &CurvatureOptions::default()).unwrap();
    let want = 2.0 * PI / libm::sqrt(3.0);
    assert!((r.m + want).abs() < 1e-9, "{}", r.m);
    assert!((r.k0 - (2.0 + want / 3.0)).abs() < 1e-9);
    assert!((r.value(0.2, 0.3) - r.k(0.2, 0.3) - want * 0.2).abs() < 1e-12);
    assert!(r.within_tolerances(), "{r:?}");
}

#[test]
fn negative_curvature_rejected() {
    let f: Arc<dyn RealFunction> = Arc::new(p("cos(2*pi*s)"));
    let err = curvature_flow_control(f, &timing("1/4", "1"), 1.0, &CurvatureOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NegativeCurvature { .. }));
}

#[test]
fn circle_reconstruction() {
    let c = reconstruct_curve(&Constant(2.0 * PI), 1.0, 400).unwrap();
    assert!(c.angle_defect < 1e-9 && c.position_defect < 1e-9, "{} {}", c.angle_defect, c.position_defect);
    let (x, y) = c.points[100];
    // Quarter of a circle of radius 1/(2 pi) started heading along +x.
    let r = 1.0 / (2.0 * PI);
    assert!((x - r).abs() < 1e-9 && (y - r).abs() < 1e-9);
}

#[test]
fn perturbed_and_degenerate_curves() {
    let c = reconstruct_curve(&p("2*pi + 0.1*sin(2*pi*s)"), 1.0, 400).unwrap();
    assert!(c.angle_defect < 1e-12);
    let flat = reconstruct_curve(&Constant(0.0), 1.0, 10).unwrap();
    assert!((flat.angle_defect - 2.0 * PI).abs() < 1e-15);
    assert!((flat.position_defect - 1.0).abs() < 1e-15);
}

