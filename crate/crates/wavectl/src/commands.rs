//! One function per subcommand. Each fills the report as it goes, so a
//! failing run still carries what was computed before the failure.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;
use wavectl_core::applications::{
    check_wavemap_conditions, curvature_flow_control, solve_wavemap, CurvatureOptions, WaveMapOptions,
};
use wavectl_core::bounded::{check_compatibility, solve_bounded, BoundaryKind, BoundedOptions, BoundedProblem, CompatibilityReport};
use wavectl_core::constants::*;
use wavectl_core::expr::PointProfile;
use wavectl_core::line::{solve_line, BridgeChoice, Integration, LineOptions, LineProblem};
use wavectl_core::periodic::{admissibility, obstruction_residual, solve_periodic, Admissibility, PeriodicOptions};
use wavectl_core::radial::{check_point, reduce_and_solve, RadialOptions};
use wavectl_core::{Error, Profile, Rational, RealFunction, Timing};

use crate::config::{Command, RunConfig};
use crate::report::{AdmissibilityRecord, CompatibilityRecord, Report};
use crate::table::{linspace, FieldTable};
use crate::{RunError, UsageError};

pub const JUNCTION_VALUE_TOL: f64 = 1e-7;
pub const JUNCTION_SLOPE_TOL: f64 = 1e-5;
pub const JUNCTION_COUNT: usize = 5;
pub const ENERGY_DRIFT_TOL: f64 = 1e-6;
pub const WAVEMAP_IDENTITY_TOL: f64 = 1e-12;

pub type Outcome = Result<Option<FieldTable>, RunError>;

pub fn execute(cfg: &RunConfig, r: &mut Report) -> Outcome {
    match cfg.command {
        Command::SolveLine => line(cfg, r),
        Command::SolvePeriodic => periodic(cfg, r),
        Command::SolveDirichlet => bounded(cfg, r, BoundaryKind::Dirichlet),
        Command::SolveNeumann => bounded(cfg, r, BoundaryKind::Neumann),
        Command::WaveMap => wavemap(cfg, r),
        Command::CurvatureFlow => curvature(cfg, r),
        Command::Radial3d => radial(cfg, r),
        Command::Check => check(cfg, r),
    }
}

fn grid_size(cfg: &RunConfig) -> Result<(usize, usize), UsageError> {
    let nt: usize = cfg.number("nt", 11)?;
    let nx: usize = cfg.number("nx", 101)?;
    if nt == 0 || nx == 0 {
        return Err(UsageError("`nt` and `nx` must be positive".into()));
    }
    Ok((nt, nx))
}

fn bridge(cfg: &RunConfig) -> Result<BridgeChoice, UsageError> {
    Ok(match cfg.choice("bridge", &["poly", "sine"], "poly")? {
        "poly" => BridgeChoice::Poly,
        _ => BridgeChoice::Sine,
    })
}

fn window(cfg: &RunConfig) -> Result<(f64, usize), UsageError> {
    let w: f64 = cfg.number("window", LINE_WINDOW)?;
    let n: usize = cfg.number("points", LINE_WINDOW_POINTS)?;
    if !(w > 0.0 && w.is_finite()) || n < 2 {
        return Err(UsageError("`window` must be positive and `points` at least 2".into()));
    }
    Ok((w, n))
}

fn timing(cfg: &RunConfig) -> Result<Timing, RunError> {
    Ok(Timing::new(cfg.rational("T")?, cfg.rational("L")?)?)
}

fn periodic_profile(cfg: &RunConfig, key: &str, default: Option<&str>, l: f64) -> Result<Profile, RunError> {
    let p = match default {
        Some(d) => cfg.profile_or(key, d)?,
        None => cfg.profile(key)?,
    };
    Ok(p.with_period(l)?)
}

fn admissibility_record(a: &Admissibility) -> AdmissibilityRecord {
    AdmissibilityRecord { t: a.t.to_string(), l: a.l.to_string(), p: a.p, q: a.q, admissible: a.admissible, c_s: a.c_s }
}

fn record_compatibility(r: &mut Report, c: &CompatibilityReport) {
    r.tolerances.insert("compatibility".into(), c.tolerance);
    r.compatibility.extend(c.conditions.iter().map(|k| CompatibilityRecord {
        name: k.name.clone(),
        residual: Some(k.residual).filter(|v| v.is_finite()),
        tolerance: c.tolerance,
        passed: k.residual <= c.tolerance,
    }));
}

/// Records the obstruction residual and rejects the resonant timing.
fn reject_resonant(
    r: &mut Report,
    adm: &Admissibility,
    f: &dyn RealFunction,
    g: &dyn RealFunction,
    timing: &Timing,
    k_max: usize,
) -> RunError {
    let res = obstruction_residual(f, g, timing, k_max);
    if let Ok(v) = res {
        r.result_f64("obstruction_residual", Some(v));
    }
    let detail = match res {
        Ok(v) => format!("; resonance-condition residual of the given pair: {v:.3e}"),
        Err(_) => String::new(),
    };
    RunError::Solver(Error::Inadmissible(format!(
        "2T/L = {}/{} makes the modes k with 2kT/L in N resonant: their terminal coefficients are fixed by the \
         initial data, so g cannot be prescribed freely{detail}",
        adm.p, adm.q
    )))
}

fn line(cfg: &RunConfig, r: &mut Report) -> Outcome {
    let f = cfg.profile("f")?;
    let g = cfg.profile("g")?;
    let t = cfg.rational("T")?.to_f64();
    let (w, points) = window(cfg)?;
    let integration = match cfg.choice("integration", &["quadrature", "primitive"], "quadrature")? {
        "quadrature" => Integration::Quadrature,
        _ => Integration::Primitive,
    };
    let (nt, nx) = grid_size(cfg)?;
    let opts = LineOptions { bridge: bridge(cfg)?, window: w, points, integration, ..Default::default() };
    let sol = solve_line(&LineProblem::from_profiles(&f, &g, t)?, &opts)?;
    let u = sol.velocity().bridge();
    let res = u.residuals()?;
    r.check_max("bridge_integral", Some(res.integral.abs()), BRIDGE_INTEGRAL_TOL);
    r.check_max("bridge_endpoint_difference", Some(res.endpoint_difference.abs()), BRIDGE_ENDPOINT_TOL);
    r.check_max("bridge_slope_difference", Some(res.slope_difference.abs()), BRIDGE_SLOPE_TOL);
    let junctions = sol.velocity().junctions(JUNCTION_COUNT);
    let max_of = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);
    r.check_max("junction_value_jump", Some(max_of(&mut junctions.iter().map(|j| j.value_jump.abs()))), JUNCTION_VALUE_TOL);
    r.check_max("junction_slope_jump", Some(max_of(&mut junctions.iter().map(|j| j.slope_jump.abs()))), JUNCTION_SLOPE_TOL);
    let initial = linspace(-w, w, points)
        .into_par_iter()
        .map(|x| sol.try_value(0.0, x).map(|y| (y - f.value(x)).abs()))
        .collect::<Result<Vec<_>, _>>()?;
    r.check_max("initial_sup_error", Some(initial.into_iter().fold(0.0, f64::max)), LINE_TERMINAL_TOL);
    r.check_max("terminal_sup_error", sol.metadata.terminal_sup_error, LINE_TERMINAL_TOL);
    r.result("bridge", u.choice().name());
    r.result("reduced_jet", json!(u.jet()));
    r.result_f64("max_pde_residual", sol.metadata.max_pde_residual);
    r.result("provenance", sol.metadata.provenance.clone());
    r.warnings.extend(f.warnings().iter().chain(g.warnings()).cloned());
    Ok(Some(FieldTable::sample(["t", "x", "y"], &sol, t, (-w, w), nt, nx)))
}

fn periodic(cfg: &RunConfig, r: &mut Report) -> Outcome {
    let timing = timing(cfg)?;
    let l = timing.period();
    let k_max: usize = cfg.number("k_max", K_MAX)?;
    let (nt, nx) = grid_size(cfg)?;
    let f = periodic_profile(cfg, "f", None, l)?;
    let g = periodic_profile(cfg, "g", None, l)?;
    let adm = admissibility(&timing)?;
    r.admissibility = Some(admissibility_record(&adm));
    if !adm.admissible {
        return Err(reject_resonant(r, &adm, &f, &g, &timing, k_max));
    }
    let opts = PeriodicOptions { k_max, ..Default::default() };
    let sol = solve_periodic(&f, &g, &timing, &opts)?;
    r.check_max("initial_sup_error", sol.initial_sup_error, PERIODIC_ENDPOINT_TOL);
    r.check_max("terminal_sup_error", sol.metadata.terminal_sup_error, PERIODIC_ENDPOINT_TOL);
    r.check_max("energy_drift", sol.metadata.energy_drift, ENERGY_DRIFT_TOL);
    r.result_f64("max_pde_residual", sol.metadata.max_pde_residual);
    r.result("k_max", k_max);
    r.result("provenance", sol.metadata.provenance.clone());
    r.warnings.extend(sol.metadata.warnings.iter().cloned());
    Ok(Some(FieldTable::sample(["t", "theta", "y"], &sol, timing.horizon(), (0.0, l), nt, nx)))
}

fn boundary_data(cfg: &RunConfig) -> Result<Option<(Profile, Profile)>, RunError> {
    if cfg.get("left").is_none() && cfg.get("right").is_none() {
        return Ok(None);
    }
    Ok(Some((cfg.profile_or("left", "0")?, cfg.profile_or("right", "0")?)))
}

fn bounded_problem(kind: BoundaryKind, f: Profile, g: Profile, data: Option<(Profile, Profile)>, timing: Timing) -> BoundedProblem {
    match data {
        None => BoundedProblem::homogeneous(kind, Arc::new(f), Arc::new(g), timing),
        Some((h, k)) => BoundedProblem::inhomogeneous(kind, Arc::new(f), Arc::new(g), Arc::new(h), Arc::new(k), timing),
    }
}

fn trace_tolerance(kind: BoundaryKind, inhomogeneous: bool) -> f64 {
    match (kind, inhomogeneous) {
        (BoundaryKind::Dirichlet, false) => DIRICHLET_TRACE_TOL,
        (BoundaryKind::Dirichlet, true) => INHOMOGENEOUS_VALUE_TRACE_TOL,
        (BoundaryKind::Neumann, false) => NEUMANN_TRACE_TOL,
        (BoundaryKind::Neumann, true) => INHOMOGENEOUS_FLUX_TRACE_TOL,
    }
}

fn bounded(cfg: &RunConfig, r: &mut Report, kind: BoundaryKind) -> Outcome {
    let timing = timing(cfg)?;
    let k_max: usize = cfg.number("k_max", K_MAX_BOUNDED)?;
    let (nt, nx) = grid_size(cfg)?;
    let data = boundary_data(cfg)?;
    let inhomogeneous = data.is_some();
    let problem = bounded_problem(kind, cfg.profile("f")?, cfg.profile("g")?, data, timing);
    let compat = check_compatibility(&problem);
    record_compatibility(r, &compat);
    compat.require()?;
    let adm = admissibility(&timing.doubled_period()?)?;
    r.admissibility = Some(admissibility_record(&adm));
    let sol = solve_bounded(&problem, &BoundedOptions { k_max, ..Default::default() })?;
    r.check_max("initial_sup_error", sol.initial_sup_error, BOUNDED_TERMINAL_TOL);
    r.check_max("terminal_sup_error", sol.metadata.terminal_sup_error, BOUNDED_TERMINAL_TOL);
    let tol = trace_tolerance(kind, inhomogeneous);
    r.check_max("trace_error_left", sol.traces.map(|t| t.left), tol);
    r.check_max("trace_error_right", sol.traces.map(|t| t.right), tol);
    if inhomogeneous {
        r.check_max("extension_identity", sol.extension_identity, EXTENSION_IDENTITY_TOL);
    }
    r.result_f64("max_pde_residual", sol.metadata.max_pde_residual);
    r.result("k_max", k_max);
    r.result("provenance", sol.metadata.provenance.clone());
    r.warnings.extend(sol.metadata.warnings.iter().cloned());
    Ok(Some(FieldTable::sample(["t", "x", "y"], &sol, timing.horizon(), (0.0, timing.period()), nt, nx)))
}

fn wavemap(cfg: &RunConfig, r: &mut Report) -> Outcome {
    let f = cfg.profile("f")?;
    let g = cfg.profile("g")?;
    let t = cfg.rational("T")?.to_f64();
    let (w, points) = window(cfg)?;
    let (nt, nx) = grid_size(cfg)?;
    let opts = WaveMapOptions { window: w, points, ..Default::default() };
    let cert = check_wavemap_conditions(&f, &g, t, w, points, opts.n_max)?;
    r.result_f64("inf_f", Some(cert.inf_f));
    r.result_f64("sup_g", Some(cert.sup_g));
    r.result_f64("margin", Some(cert.margin));
    r.result_f64("reduced_min", Some(cert.reduced_min));
    r.result_f64("min_right_sum", cert.right_sums.iter().copied().reduce(f64::min));
    r.result_f64("max_left_sum", cert.left_sums.iter().copied().reduce(f64::max));
    r.result("sign_pattern", format!("{:?}", cert.pattern).to_lowercase());
    let sol = solve_wavemap(&f, &g, t, &opts)?;
    r.check_above("min_z", sol.min_z, 0.0);
    r.check_max("initial_sup_error", sol.initial_sup_error, WAVEMAP_INITIAL_TOL);
    r.check_max("terminal_sup_error", sol.metadata.terminal_sup_error, WAVEMAP_TERMINAL_TOL);
    r.check_max("max_pde_residual", sol.metadata.max_pde_residual, WAVEMAP_RESIDUAL_TOL);
    r.check_max("identity_defect", sol.identity_defect, WAVEMAP_IDENTITY_TOL);
    r.tolerances.insert("residual_fd_step".into(), WAVEMAP_FD_STEP);
    r.result_f64("min_v", sol.min_v);
    r.result("bridge", sol.bridge.name());
    r.result("provenance", sol.metadata.provenance.clone());
    Ok(Some(FieldTable::sample(["t", "x", "y"], &sol, t, (-w, w), nt, nx)))
}

fn curvature(cfg: &RunConfig, r: &mut Report) -> Outcome {
    let timing = timing(cfg)?;
    let l = timing.period();
    let k_star: f64 = cfg.number("k_star", 1.0)?;
    let k_max: usize = cfg.number("k_max", K_MAX)?;
    let (nt, nx) = grid_size(cfg)?;
    let f = periodic_profile(cfg, "f", None, l)?;
    let adm = admissibility(&timing)?;
    r.admissibility = Some(admissibility_record(&adm));
    if !adm.admissible {
        let target = Profile::constant(k_star);
        return Err(reject_resonant(r, &adm, &f, &target, &timing, k_max));
    }
    let opts = CurvatureOptions { k_max, ..Default::default() };
    let res = curvature_flow_control(Arc::new(f), &timing, k_star, &opts)?;
    r.check_min("min_kbar", res.min_kbar, -CURVATURE_NONNEG_TOL);
    r.check_max("terminal_spread", res.terminal_spread, CURVATURE_TERMINAL_TOL);
    r.check_min("min_vbar", res.min_vbar, -CURVATURE_NONNEG_TOL);
    r.check_max("initial_sup_error", res.periodic.initial_sup_error, PERIODIC_ENDPOINT_TOL);
    r.result_f64("min_input", Some(res.min_input));
    r.result_f64("m", Some(res.m));
    r.result_f64("argmin", Some(res.argmin));
    r.result_f64("shift", Some(res.shift));
    r.result_f64("k0", Some(res.k0));
    r.result_f64("max_pde_residual", res.metadata.max_pde_residual);
    r.result("provenance", res.metadata.provenance.clone());
    r.warnings.extend(res.metadata.warnings.iter().cloned());
    Ok(Some(FieldTable::sample(["t", "s", "k"], &res, timing.horizon(), (0.0, l), nt, nx)))
}

/// `x,y,z; x,y,z; ...`
pub fn parse_points(text: &str) -> Result<Vec<[f64; 3]>, UsageError> {
    let bad = |s: &str| UsageError(format!("`points`: cannot parse `{s}` as x,y,z"));
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let c: Vec<f64> = s.split(',').map(|v| v.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad(s))?;
            match c[..] {
                [x, y, z] if c.iter().all(|v| v.is_finite()) => Ok([x, y, z]),
                _ => Err(bad(s)),
            }
        })
        .collect()
}

/// `n^3` points on `[-1, 1]^3`.
pub fn cube_points(n: usize) -> Vec<[f64; 3]> {
    let axis = linspace(-1.0, 1.0, n);
    let mut out = Vec::with_capacity(n * n * n);
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                out.push([x, y, z]);
            }
        }
    }
    out
}

fn radial(cfg: &RunConfig, r: &mut Report) -> Outcome {
    let f3: PointProfile = cfg.point_profile("f")?;
    let g3: PointProfile = cfg.point_profile("g")?;
    let t = cfg.rational("T")?.to_f64();
    let (nt, _) = grid_size(cfg)?;
    let defaults = RadialOptions::default();
    let opts = RadialOptions {
        dimension: cfg.number("dimension", defaults.dimension)?,
        quad_order: cfg.number("quad_order", defaults.quad_order)?,
        table_step: cfg.number("table_step", defaults.table_step)?,
        margin: cfg.number("margin", defaults.margin)?,
        bridge: bridge(cfg)?,
        ..defaults
    };
    let points = match (cfg.get("points"), cfg.get("grid")) {
        (Some(_), Some(_)) => return Err(UsageError("give either `points` or `grid`, not both".into()).into()),
        (Some(p), None) => parse_points(p)?,
        (None, Some(_)) => match cfg.number::<usize>("grid", 0)? {
            0 => return Err(UsageError("`grid` must be positive".into()).into()),
            n => cube_points(n),
        },
        (None, None) => vec![[0.0; 3]],
    };
    if points.is_empty() {
        return Err(UsageError("no evaluation points".into()).into());
    }
    opts.check()?;
    let solved = points
        .par_iter()
        .map(|x| {
            let red = reduce_and_solve(&f3, &g3, x, t, &opts)?;
            let pt = check_point(&red, &f3, &g3)?;
            Ok((red, pt))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let max = |e: &dyn Fn(&wavectl_core::radial::RadialPoint) -> f64| solved.iter().map(|(_, p)| e(p)).fold(0.0, f64::max);
    r.check_max("initial_error", Some(max(&|p| p.initial_error)), RADIAL_TERMINAL_TOL);
    r.check_max("terminal_error", Some(max(&|p| p.terminal_error)), RADIAL_TERMINAL_TOL);
    r.tolerances.insert("extrapolation".into(), RADIAL_EXTRAPOLATION_TOL);
    let rows: Vec<_> = solved
        .iter()
        .map(|(_, p)| {
            json!({
                "center": p.center,
                "initial": p.initial.value,
                "terminal": p.terminal.value,
                "initial_error": p.initial_error,
                "terminal_error": p.terminal_error,
                "extrapolation_estimate": p.initial.error_estimate.max(p.terminal.error_estimate),
                "reduced_terminal_error": p.reduced_terminal_error,
            })
        })
        .collect();
    r.result("points", rows);
    r.result("dimension", opts.dimension);
    r.result("r_max", t + opts.margin);

    // Rows within a time level are ordered by |xi|.
    let mut order: Vec<usize> = (0..solved.len()).collect();
    let rho = |i: usize| {
        let c = solved[i].0.center;
        (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
    };
    order.sort_by(|&a, &b| rho(a).total_cmp(&rho(b)));
    let levels = linspace(0.0, t, nt)
        .into_par_iter()
        .map(|time| {
            order
                .iter()
                .map(|&i| solved[i].0.value_at(time).map(|v| [time, rho(i), v.value]))
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut table = FieldTable::new(["t", "x", "y"]);
    table.rows = levels.into_iter().flatten().collect();
    Ok(Some(table))
}

fn check(cfg: &RunConfig, r: &mut Report) -> Outcome {
    cfg.require("kind")?;
    let kind = cfg.choice("kind", &["dirichlet", "neumann", "periodic"], "")?;
    let l = cfg.rational("L")?;
    let k_max = K_MAX;
    let t = cfg.get("T").map(|_| cfg.rational("T")).transpose()?;
    if kind == "periodic" {
        let t = t.ok_or_else(|| UsageError("`check --kind periodic` needs `T`".into()))?;
        let timing = Timing::new(t, l)?;
        let f = periodic_profile(cfg, "f", None, l.to_f64())?;
        let g = periodic_profile(cfg, "g", Some("0"), l.to_f64())?;
        let adm = admissibility(&timing)?;
        r.admissibility = Some(admissibility_record(&adm));
        if !adm.admissible {
            return Err(reject_resonant(r, &adm, &f, &g, &timing, k_max));
        }
        return Ok(None);
    }
    let kind = if kind == "dirichlet" { BoundaryKind::Dirichlet } else { BoundaryKind::Neumann };
    let data = boundary_data(cfg)?;
    if data.is_some() && t.is_none() {
        return Err(UsageError("boundary data need `T` for the corner conditions".into()).into());
    }
    // Without boundary data the conditions do not involve T.
    let timing = Timing::new(t.unwrap_or(Rational::integer(1)), l)?;
    let problem = bounded_problem(kind, cfg.profile("f")?, cfg.profile_or("g", "0")?, data, timing);
    let compat = check_compatibility(&problem);
    record_compatibility(r, &compat);
    compat.require()?;
    if t.is_some() {
        let adm = admissibility(&timing.doubled_period()?)?;
        r.admissibility = Some(admissibility_record(&adm));
        adm.require()?;
    }
    Ok(None)
}
