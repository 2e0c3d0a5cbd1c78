//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! `cargo test -p wavectl --test acceptance`

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavectl_core::applications::{curvature_flow_control, solve_wavemap, CurvatureOptions, WaveMapOptions};
use wavectl_core::bounded::{solve_bounded, BoundaryKind, BoundedOptions, BoundedProblem};
use wavectl_core::expr::PointProfile;
use wavectl_core::line::{perturb_velocity, solve_line, BridgeChoice, BridgeFunction, LineOptions, LineProblem};
use wavectl_core::numerics::{leapfrog_solve, Boundary, BoundaryData, Field, Grid2D, Store};
use wavectl_core::periodic::{admissibility, decay_check_profile, obstruction_residual, solve_periodic, PeriodicOptions};
use wavectl_core::radial::{check_point, reduce_and_solve, RadialOptions, SphereRule};
use wavectl_core::{Profile, Rational, RealFunction, Timing};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> Profile {
    Profile::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn arc(s: &str) -> Arc<dyn RealFunction> {
    Arc::new(p(s))
}

fn timing(t: (i64, i64), l: i64) -> Timing {
    Timing::new(Rational::new(t.0, t.1).unwrap(), Rational::integer(l)).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Trig plus low-degree polynomial profile.
fn line_profile(r: &mut ChaCha8Rng) -> String {
    let a = r.gen_range(-2.0..2.0);
    let k = r.gen_range(0.5..2.0);
    let phase = r.gen_range(-1.0..1.0);
    let b = r.gen_range(-1.0..1.0);
    let c = r.gen_range(-0.3..0.3);
    let d = r.gen_range(-0.1..0.1);
    format!("{a:.4}*sin({k:.4}*x + {phase:.4}) + {b:.4}*cos(x) + {c:.4}*x^2 + {d:.4}*x^3")
}

const HORIZONS: [(i64, i64); 3] = [(1, 2), (1, 1), (2718, 1000)];

fn line_solution(f: &str, g: &str, t: f64, bridge: BridgeChoice) -> wavectl_core::line::LineSolution {
    let problem = LineProblem::from_profiles(&p(f), &p(g), t).unwrap();
    solve_line(&problem, &LineOptions { bridge, points: 401, ..Default::default() }).unwrap()
}

fn line_controllability() -> Outcome {
    let mut r = rng(1);
    let dx = 1e-3;
    let (mut worst, mut worst_lf) = (0.0f64, 0.0f64);
    for i in 0..25 {
        let (f, g) = (line_profile(&mut r), line_profile(&mut r));
        let (tn, td) = HORIZONS[i % 3];
        let t = tn as f64 / td as f64;
        let bridge = if i % 2 == 0 { BridgeChoice::Poly } else { BridgeChoice::Sine };
        let sol = line_solution(&f, &g, t, bridge);
        let err = sol.metadata.terminal_sup_error.unwrap();
        ensure(err <= 1e-6, || format!("terminal error {err:.3e} for f = {f}, g = {g}, T = {t}"))?;
        worst = worst.max(err);
        let grid = Grid2D::with_steps(t, -5.0, 5.0, dx / 2.0, dx).unwrap();
        let run = leapfrog_solve(&p(&f), sol.velocity(), &grid, &Boundary::PaddedLine, Store::Final).unwrap();
        let gp = p(&g);
        let lf = run.final_sup_error(|x| gp.value(x));
        ensure(lf <= 5.0 * dx * dx, || format!("leapfrog error {lf:.3e} for f = {f}, g = {g}, T = {t}"))?;
        worst_lf = worst_lf.max(lf);
    }
    Ok(format!("25 pairs, terminal {worst:.2e} <= 1e-6, leapfrog {worst_lf:.2e} <= {:.0e}", 5.0 * dx * dx))
}

/// Composite Simpson with `n` (even) panels.
fn simpson(u: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = u(a) + u(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * u(a + i as f64 * h);
    }
    s * h / 3.0
}

fn bridge_conditions() -> Outcome {
    let mut r = rng(2);
    let mut worst = [0.0f64; 3];
    for _ in 0..50 {
        let jet = [r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0)];
        let t = r.gen_range(0.1..3.0);
        for choice in [BridgeChoice::Poly, BridgeChoice::Sine] {
            let u = BridgeFunction::from_jet(jet, t, choice).map_err(|e| format!("{jet:?} T {t}: {e}"))?;
            let integral = (simpson(|x| u.value(x), -t, t, 200_000) - 2.0 * jet[0]).abs();
            let ends = (u.value(t) - u.value(-t) - 2.0 * jet[1]).abs();
            let (right, left) = u.one_sided_slopes();
            let slopes = (right - left - 2.0 * jet[2]).abs();
            let got = [integral, ends, slopes];
            for (w, g) in worst.iter_mut().zip(got) {
                *w = w.max(g);
            }
            ensure(integral <= 1e-9 && ends <= 1e-10 && slopes <= 1e-8, || {
                format!("{} bridge, jet {jet:?}, T {t}: residuals {got:?}", choice.name())
            })?;
        }
    }
    Ok(format!("50 jets x 2 bridges, residuals {:.1e} {:.1e} {:.1e}", worst[0], worst[1], worst[2]))
}

fn junctions() -> Outcome {
    let mut r = rng(3);
    let (mut value, mut slope) = (0.0f64, 0.0f64);
    for i in 0..12 {
        let (f, g) = (line_profile(&mut r), line_profile(&mut r));
        let (tn, td) = HORIZONS[i % 3];
        for bridge in [BridgeChoice::Poly, BridgeChoice::Sine] {
            let sol = line_solution(&f, &g, tn as f64 / td as f64, bridge);
            let js = sol.velocity().junctions(5);
            ensure(js.len() == 10, || format!("expected 10 junctions, got {}", js.len()))?;
            for j in js {
                value = value.max(j.value_jump.abs());
                slope = slope.max(j.slope_jump.abs());
            }
        }
    }
    ensure(value <= 1e-7 && slope <= 1e-5, || format!("jumps {value:.3e} / {slope:.3e}"))?;
    Ok(format!("N <= 5 on 24 controls, value {value:.1e} <= 1e-7, slope {slope:.1e} <= 1e-5"))
}

fn non_uniqueness() -> Outcome {
    let mut r = rng(4);
    let (mut worst, mut least) = (0.0f64, f64::INFINITY);
    for i in 0..10 {
        let g = line_profile(&mut r);
        let (tn, td) = HORIZONS[i % 3];
        let t = tn as f64 / td as f64;
        let sol = line_solution("0", &g, t, BridgeChoice::Poly);
        let amp = r.gen_range(0.2..2.0);
        let k = r.gen_range(1..4);
        let phase = r.gen_range(0.0..6.0);
        let w = PI * k as f64 / t;
        let v1 = format!("{amp}*sin({w}*x + {phase}) + {:.3}*cos({}*x)", amp / 2.0, 2.0 * w);
        let pert = perturb_velocity(&sol, arc(&v1)).map_err(|e| e.to_string())?;
        let err = pert.metadata.terminal_sup_error.unwrap();
        let change = (0..=4000)
            .map(|i| -5.0 + 0.0025 * i as f64)
            .map(|x| (pert.control_value(x) - sol.control_value(x)).abs())
            .fold(0.0, f64::max);
        ensure(err <= 1e-6 && change >= 0.1, || format!("v1 = {v1}: terminal {err:.3e}, change {change:.3}"))?;
        worst = worst.max(err);
        least = least.min(change);
    }
    Ok(format!("10 perturbations, terminal {worst:.1e} <= 1e-6, smallest change {least:.2} >= 0.1"))
}

/// Consistent at `T = 1/4`, `L = 1`: odd modes free, even modes `g_k = cos(k pi / 2) f_k`.
fn periodic_pair(r: &mut ChaCha8Rng) -> (String, String) {
    let mut f = format!("{:.4}", r.gen_range(-2.0..2.0));
    let mut g = format!("{:.4}", r.gen_range(-2.0..2.0));
    for k in 1..=4usize {
        let odd = 2 * k - 1;
        for s in [&mut f, &mut g] {
            let (a, b) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            *s += &format!(" + {a:.4}*cos({}*pi*x) + {b:.4}*sin({}*pi*x)", 2 * odd, 2 * odd);
        }
        let even = 2 * k;
        let (a, b) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        f += &format!(" + {a:.4}*sin({}*pi*x) + {b:.4}*cos({}*pi*x)", 2 * even, 2 * even);
        g += &format!(" + {:.4}*sin({}*pi*x) + {:.4}*cos({}*pi*x)", sign * a, 2 * even, sign * b, 2 * even);
    }
    (f, g)
}

fn periodic_exactness() -> Outcome {
    let mut r = rng(5);
    let mut worst = [0.0f64; 3];
    for _ in 0..16 {
        let (f, g) = periodic_pair(&mut r);
        let sol = solve_periodic(&p(&f), &p(&g), &timing((1, 4), 1), &PeriodicOptions::default()).map_err(|e| e.to_string())?;
        let got = [sol.initial_sup_error.unwrap(), sol.metadata.terminal_sup_error.unwrap(), sol.metadata.energy_drift.unwrap()];
        ensure(got[0] <= 1e-8 && got[1] <= 1e-8 && got[2] <= 1e-6, || format!("f = {f}, g = {g}: {got:?}"))?;
        // Off the verification grid.
        let (fp, gp) = (p(&f), p(&g));
        for i in 0..400 {
            let x = (i as f64 + 0.37) / 400.0;
            let e = (sol.value(0.0, x) - fp.value(x)).abs().max((sol.value(0.25, x) - gp.value(x)).abs());
            ensure(e <= 1e-8, || format!("f = {f}, g = {g}: {e:.3e} at x = {x}"))?;
        }
        for (w, g) in worst.iter_mut().zip(got) {
            *w = w.max(g);
        }
    }
    Ok(format!("16 pairs, initial {:.1e}, terminal {:.1e} <= 1e-8, energy drift {:.1e} <= 1e-6", worst[0], worst[1], worst[2]))
}

fn obstruction() -> Outcome {
    let mut r = rng(6);
    let t = timing((1, 1), 1);
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..10 {
        let (f, _) = periodic_pair(&mut r);
        let c = r.gen_range(-3.0..3.0);
        let same = obstruction_residual(&p(&f), &p(&format!("{f} + {c:.4}")), &t, 64).map_err(|e| e.to_string())?;
        lo = lo.max(same);
        let k = r.gen_range(1..8);
        let bumped = obstruction_residual(&p(&f), &p(&format!("{f} + sin({}*pi*x)", 2 * k)), &t, 64).map_err(|e| e.to_string())?;
        hi = hi.min(bumped);
    }
    ensure(lo <= 1e-9 && hi >= 0.5, || format!("constant shift {lo:.3e}, sine mode {hi:.3}"))?;
    Ok(format!("T = L, constant shifts {lo:.1e} <= 1e-9, sine modes {hi:.2} >= 0.5"))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn sinusoid_bound() -> Outcome {
    let mut cases = 0;
    for q in [2i64, 3, 5, 7, 12] {
        let bound = (PI / q as f64).sin();
        for pp in 1..(2 * q) {
            if gcd(pp, q) != 1 {
                continue;
            }
            for k in 1..=1000i64 {
                if k % q == 0 {
                    continue;
                }
                let s = (PI * (k * pp) as f64 / q as f64).sin().abs();
                ensure(s >= bound - 1e-12, || format!("q {q} p {pp} k {k}: {s} < {bound}"))?;
                cases += 1;
            }
            let adm = admissibility(&timing((pp, 2 * q), 1)).map_err(|e| e.to_string())?;
            ensure(adm.admissible && (adm.c_s - bound).abs() < 1e-12, || format!("2T/L = {pp}/{q}: {adm:?}"))?;
        }
    }
    Ok(format!("{cases} (k, p, q) cases"))
}

fn decay_relation() -> Outcome {
    let mut r = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mut s = format!("{:.3}", r.gen_range(-1.0..1.0));
        for k in 1..=6 {
            let (a, b) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            s += &format!(" + {a:.4}*cos({}*pi*x) + {b:.4}*sin({}*pi*x)", 2 * k, 2 * k);
        }
        let rep = decay_check_profile(&p(&s), 1.0, 16).map_err(|e| e.to_string())?;
        worst = worst.max(rep.max_residual);
    }
    ensure(worst <= 1e-9, || format!("max residual {worst:.3e}"))?;
    Ok(format!("20 trig polynomials, max residual {worst:.1e} <= 1e-9"))
}

fn boundary_fn(s: &str) -> BoundaryData {
    let f = p(s);
    Arc::new(move |t| f.value(t))
}

struct BoundedCase {
    kind: BoundaryKind,
    f: &'static str,
    g: &'static str,
    data: Option<(&'static str, &'static str)>,
    timing: Timing,
}

fn bounded_cases() -> Vec<BoundedCase> {
    // Inhomogeneous data are read off Y = sin(x + t) + cos(2x - 2t)/2.
    let travelling_f = "sin(x) + 0.5*cos(2*x)";
    let travelling_g = "sin(x + 1/4) + 0.5*cos(2*x - 1/2)";
    vec![
        BoundedCase {
            kind: BoundaryKind::Dirichlet,
            f: "sin(pi*x) + 0.3*sin(2*pi*x)",
            g: "0.5*sin(4*pi*x)",
            data: None,
            timing: timing((1, 3), 1),
        },
        BoundedCase {
            kind: BoundaryKind::Neumann,
            f: "1 + cos(pi*x) - 0.2*cos(4*pi*x)",
            g: "0.4*cos(2*pi*x) + 1",
            data: None,
            timing: timing((1, 3), 1),
        },
        BoundedCase {
            kind: BoundaryKind::Dirichlet,
            f: travelling_f,
            g: travelling_g,
            data: Some(("sin(t) + 0.5*cos(2*t)", "sin(1 + t) + 0.5*cos(2 - 2*t)")),
            timing: timing((1, 4), 1),
        },
        BoundedCase {
            kind: BoundaryKind::Neumann,
            f: travelling_f,
            g: travelling_g,
            data: Some(("cos(t) + sin(2*t)", "cos(1 + t) - sin(2 - 2*t)")),
            timing: timing((1, 4), 1),
        },
    ]
}

/// Extra allowance on top of `5 dx^2` for the centred ghost-node Neumann
/// closure; Dirichlet values are imposed exactly and get none.
fn boundary_scheme_allowance(kind: BoundaryKind, dx: f64) -> f64 {
    match kind {
        BoundaryKind::Dirichlet => 0.0,
        BoundaryKind::Neumann => 5.0 * dx * dx,
    }
}

fn dirichlet_neumann() -> Outcome {
    let dx = 1e-3;
    let mut lines = Vec::new();
    for c in bounded_cases() {
        let problem = match c.data {
            None => BoundedProblem::homogeneous(c.kind, arc(c.f), arc(c.g), c.timing),
            Some((h, l)) => BoundedProblem::inhomogeneous(c.kind, arc(c.f), arc(c.g), arc(h), arc(l), c.timing),
        };
        let sol = solve_bounded(&problem, &BoundedOptions::default()).map_err(|e| format!("{} {}: {e}", c.kind.name(), c.f))?;
        let trace = sol.traces.unwrap().max();
        let trace_tol = match (c.kind, c.data.is_some()) {
            (BoundaryKind::Dirichlet, false) => 1e-8,
            (BoundaryKind::Dirichlet, true) => 1e-6,
            (BoundaryKind::Neumann, _) => 1e-5,
        };
        let terminal = sol.metadata.terminal_sup_error.unwrap();
        let identity = sol.extension_identity;
        let name = format!("{}{}", c.kind.name(), if c.data.is_some() { " inhomogeneous" } else { "" });
        ensure(trace <= trace_tol, || format!("{name}: trace {trace:.3e} > {trace_tol:.0e}"))?;
        ensure(terminal <= 1e-6, || format!("{name}: terminal {terminal:.3e}"))?;
        if c.data.is_some() {
            let id = identity.unwrap_or(f64::INFINITY);
            ensure(id <= 1e-9, || format!("{name}: extension identity {id:.3e}"))?;
        }
        let t = c.timing.horizon();
        let nt = (t / (dx / 2.0)).ceil() as usize;
        let grid = Grid2D::new(t, 0.0, 1.0, nt, 1000).unwrap();
        let boundary = match (c.kind, c.data) {
            (BoundaryKind::Dirichlet, None) => Boundary::DirichletZero,
            (BoundaryKind::Neumann, None) => Boundary::NeumannZero,
            (BoundaryKind::Dirichlet, Some((h, l))) => Boundary::Dirichlet { left: boundary_fn(h), right: boundary_fn(l) },
            (BoundaryKind::Neumann, Some((h, l))) => Boundary::Neumann { left: boundary_fn(h), right: boundary_fn(l) },
        };
        let run = leapfrog_solve(&p(c.f), &sol.velocity(), &grid, &boundary, Store::Final).map_err(|e| e.to_string())?;
        let gp = p(c.g);
        let lf = run.final_sup_error(|x| gp.value(x));
        let lf_tol = 5.0 * dx * dx + boundary_scheme_allowance(c.kind, dx);
        ensure(lf <= lf_tol, || format!("{name}: leapfrog {lf:.3e} > {lf_tol:.1e}"))?;
        lines.push(format!("{name} trace {trace:.0e} terminal {terminal:.0e} leapfrog {lf:.1e}"));
    }
    Ok(lines.join("; "))
}

fn wave_map() -> Outcome {
    // f = 1 and g = -ln(phi + 1/e), so the reduced terminal profile is phi.
    let mut lines = Vec::new();
    for (phi, window) in [("x^2 + 1", 2.0), ("2 - exp(-x^2)", 5.0), ("-cos(pi*x) + 2", 5.0)] {
        let (f, g) = (p("1"), p(&format!("-ln({phi} + exp(-1))")));
        let sol = solve_wavemap(&f, &g, 0.5, &WaveMapOptions { window, ..Default::default() }).map_err(|e| format!("{phi}: {e}"))?;
        let min_z = sol.min_z.unwrap();
        let res = sol.metadata.max_pde_residual.unwrap();
        let (ini, term) = (sol.initial_sup_error.unwrap(), sol.metadata.terminal_sup_error.unwrap());
        let id = sol.identity_defect.unwrap();
        ensure(min_z > 0.0 && res <= 1e-4 && ini <= 1e-6 && term <= 1e-5 && id <= 1e-12, || {
            format!("{phi}: min z {min_z}, residual {res:.3e}, endpoints {ini:.3e} {term:.3e}, identity {id:.3e}")
        })?;
        lines.push(format!("{phi}: min z {min_z:.3}, residual {res:.1e}"));
    }
    Ok(lines.join("; "))
}

fn curvature_flow() -> Outcome {
    let res = curvature_flow_control(arc("2 + cos(2*pi*s)"), &timing((1, 4), 1), 1.0, &CurvatureOptions::default())
        .map_err(|e| e.to_string())?;
    let (kbar, spread, vbar) = (res.min_kbar.unwrap(), res.terminal_spread.unwrap(), res.min_vbar.unwrap());
    ensure(kbar >= -1e-12 && spread <= 1e-8 && vbar >= -1e-12, || {
        format!("min kbar {kbar:.3e}, terminal spread {spread:.3e}, min vbar {vbar:.3e}")
    })?;
    Ok(format!("min kbar {kbar:.3}, terminal spread {spread:.1e}, min vbar {vbar:.3}"))
}

fn double_factorial(n: i64) -> f64 {
    if n <= 0 {
        1.0
    } else {
        n as f64 * double_factorial(n - 2)
    }
}

fn monomial_mean(a: i64, b: i64, c: i64, r: f64) -> f64 {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return 0.0;
    }
    let n = a + b + c;
    r.powi(n as i32) * double_factorial(a - 1) * double_factorial(b - 1) * double_factorial(c - 1) / double_factorial(n + 1)
}

fn radial() -> Outcome {
    let opts = RadialOptions::default();
    let pp = |s: &str| PointProfile::parse(s).unwrap();

    let (c0, c1) = (pp("1.5"), pp("-0.25"));
    let mut constant = 0.0f64;
    for x in [[0.0, 0.0, 0.0], [0.3, -0.7, 1.1]] {
        let red = reduce_and_solve(&c0, &c1, &x, 1.0, &opts).map_err(|e| e.to_string())?;
        let pt = check_point(&red, &c0, &c1).map_err(|e| e.to_string())?;
        constant = constant.max(pt.initial_error).max(pt.terminal_error);
    }
    ensure(constant <= 1e-8, || format!("constant pair error {constant:.3e}"))?;

    let (gauss, zero) = (pp("exp(-(x^2 + y^2 + z^2))"), pp("0"));
    let axis = [-1.0, 0.0, 1.0];
    let (mut gaussian, mut recovered) = (0.0f64, 0.0f64);
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                let red = reduce_and_solve(&gauss, &zero, &[x, y, z], 1.0, &opts).map_err(|e| e.to_string())?;
                let pt = check_point(&red, &gauss, &zero).map_err(|e| e.to_string())?;
                gaussian = gaussian.max(pt.terminal_error);
                recovered = recovered.max(pt.initial_error);
            }
        }
    }
    ensure(gaussian <= 1e-4 && recovered <= 1e-4, || format!("Gaussian terminal {gaussian:.3e}, initial {recovered:.3e}"))?;

    let rule = SphereRule::new(opts.quad_order).map_err(|e| e.to_string())?;
    let mut quad = 0.0f64;
    for a in 0..=6 {
        for b in 0..=(6 - a) {
            for c in 0..=(6 - a - b) {
                let h = pp(&format!("x^{a} * y^{b} * z^{c}"));
                for r in [0.5, 1.0, 1.7] {
                    quad = quad.max((rule.mean(&h, &[0.0; 3], r) - monomial_mean(a, b, c, r)).abs());
                }
            }
        }
    }
    ensure(quad <= 1e-12, || format!("monomial quadrature error {quad:.3e}"))?;
    Ok(format!("constant {constant:.1e}, Gaussian at 27 points {gaussian:.1e} (initial {recovered:.1e}), monomials {quad:.1e}"))
}

fn wavectl(args: &[&str], jobs: &str) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_wavectl")).args(args).env("WAVECTL_JOBS", jobs).output().expect("run wavectl")
}

fn without_clock(report: &str) -> String {
    report.lines().filter(|l| !l.trim_start().starts_with("\"wall_clock_seconds\"")).collect::<Vec<_>>().join("\n")
}

fn cli() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 3] = [
        &["solve-periodic", "--f", "sin(2*pi*x)", "--g", "cos(2*pi*x)", "--T", "1/4", "--L", "1"],
        &["solve-line", "--f", "sin(x)", "--g", "x^2/10", "--T", "1", "--points", "201"],
        &["solve-dirichlet", "--f", "sin(pi*x)", "--g", "sin(2*pi*x)", "--T", "1/3", "--L", "1"],
    ];
    for (i, base) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for (n, jobs) in ["1", "3", "1"].iter().enumerate() {
            let csv = dir.path().join(format!("{i}_{n}.csv"));
            let report = dir.path().join(format!("{i}_{n}.json"));
            let mut args: Vec<&str> = base.to_vec();
            let (c, rp) = (csv.to_str().unwrap(), report.to_str().unwrap());
            args.extend(["--csv", c, "--report", rp, "--nt", "5", "--nx", "41"]);
            let out = wavectl(&args, jobs);
            ensure(out.status.code() == Some(0), || format!("{base:?} exited with {:?}", out.status.code()))?;
            outputs.push((read(&csv)?, without_clock(&read(&report)?)));
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{base:?} is not reproducible"))?;
    }

    let codes: [(&[&str], i32); 8] = [
        (&["solve-periodic", "--f", "sin(2*pi*x)", "--g", "cos(2*pi*x)", "--T", "1/4", "--L", "1"], 0),
        (&["check", "--kind", "periodic", "--f", "sin(2*pi*x)", "--T", "1/4", "--L", "1"], 0),
        (&["solve-line", "--f", "sin(x)", "--g", "0", "--T", "0.5"], 1),
        (&["solve-line", "--f", "sin(x", "--g", "0", "--T", "1"], 1),
        (&["solve-periodic", "--f", "0", "--g", "sin(40*pi*x)", "--T", "1/4", "--L", "1", "--k-max", "4"], 2),
        (&["solve-periodic", "--f", "sin(2*pi*x)", "--g", "cos(2*pi*x)", "--T", "1", "--L", "1"], 3),
        (&["solve-dirichlet", "--f", "x", "--g", "0", "--T", "1/3", "--L", "1"], 3),
        (&["wavemap", "--f", "0", "--g", "1", "--T", "1/2"], 3),
    ];
    for (args, want) in codes {
        let got = wavectl(args, "1").status.code();
        ensure(got == Some(want), || format!("{args:?}: exit {got:?}, expected {want}"))?;
    }
    Ok("3 commands byte-identical across 3 runs and job counts; exit codes 0, 1, 2, 3 exercised".into())
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("line controllability", line_controllability),
        ("bridge conditions", bridge_conditions),
        ("C1 junctions", junctions),
        ("non-uniqueness", non_uniqueness),
        ("periodic exactness", periodic_exactness),
        ("resonance obstruction", obstruction),
        ("sinusoid bound", sinusoid_bound),
        ("decay relation", decay_relation),
        ("Dirichlet/Neumann", dirichlet_neumann),
        ("wave map", wave_map),
        ("curvature flow", curvature_flow),
        ("radial 3-D", radial),
        ("CLI determinism and exit codes", cli),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL {n:>2} {name}: {why} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
