use alloc::format;
use alloc::vec::Vec;

use crate::constants::{
    LINE_WINDOW, LINE_WINDOW_POINTS, QUAD_TOL_TIGHT, WAVEMAP_FD_STEP, WAVEMAP_INITIAL_TOL, WAVEMAP_RESIDUAL_TOL,
    WAVEMAP_TERMINAL_TOL,
};
use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Profile};
use crate::function::RealFunction;
use crate::line::{solve_line, BridgeChoice, BridgeFunction, Integration, LineOptions, LineProblem, LineSolution, ReducedTerminal};
use crate::numerics::{Field, FieldMetadata};

/// Slack for the sign conditions on sums of `f~'`.
const SIGN_TOL: f64 = 1e-10;

/// Which sufficient pattern for the sign conditions `f~'` follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    /// `f~' >= 0` for `x > 0` and `<= 0` for `x < 0`.
    Monotone,
    /// `f~' >= 0` on `[0, 2T]` and `f~'(x + 2T) = -f~'(x)`.
    Alternating,
    None,
}

/// Outcome of the checks that guarantee a positive solution of the
/// transformed problem.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveMapCertificate {
    pub inf_f: f64,
    pub sup_g: f64,
    /// `inf f - sup g`; must be positive.
    pub margin: f64,
    /// Minimum of `f~` over the window.
    pub reduced_min: f64,
    /// For `N = 1, 2, ...`: min of `sum_{i<=N} f~'(x - (2i-1)T)` over the
    /// window points of segment `N`, `x` in `[(2N-1)T, (2N+1)T)`.
    pub right_sums: Vec<f64>,
    /// The mirror image: max of `sum_{i<=N} f~'(x + (2i-1)T)` for
    /// `-x` in `[(2N-1)T, (2N+1)T)`.
    pub left_sums: Vec<f64>,
    pub pattern: SignPattern,
}

impl WaveMapCertificate {
    pub fn gate(&self) -> bool {
        self.margin > 0.0
    }

    pub fn sums_ok(&self) -> bool {
        self.right_sums.iter().all(|s| *s >= -SIGN_TOL) && self.left_sums.iter().all(|s| *s <= SIGN_TOL)
    }

    pub fn passed(&self) -> bool {
        self.gate() && self.sums_ok()
    }

    fn require(&self) -> Result<()> {
        if !self.gate() {
            return Err(Error::Certificate(format!(
                "need inf f > sup g on the window, got inf f = {} and sup g = {}",
                self.inf_f, self.sup_g
            )));
        }
        if let Some((n, s)) = self.right_sums.iter().enumerate().find(|(_, s)| **s < -SIGN_TOL) {
            return Err(Error::Certificate(format!(
                "sum of f~'(x - (2i-1)T) for i <= {} reaches {s:e} < 0 for some x > T",
                n + 1
            )));
        }
        if let Some((n, s)) = self.left_sums.iter().enumerate().find(|(_, s)| **s > SIGN_TOL) {
            return Err(Error::Certificate(format!(
                "sum of f~'(x + (2i-1)T) for i <= {} reaches {s:e} > 0 for some x < -T",
                n + 1
            )));
        }
        Ok(())
    }
}

/// `exp(-p)` as a profile.
pub fn exp_neg(p: &Profile) -> Profile {
    Profile::new(Expr::call(Func::Exp, Expr::neg(p.expr().clone())))
}

/// The reduced terminal profile of the transformed problem,
/// `f~ = exp(-g) - (exp(-f(x - T)) + exp(-f(x + T))) / 2`.
pub fn wavemap_reduced(f: &Profile, g: &Profile, t: f64) -> Result<ReducedTerminal> {
    ReducedTerminal::from_profiles(&exp_neg(f), &exp_neg(g), t)
}

/// Scans the window (`points` samples) for `inf f > sup g`, the sign
/// conditions on partial sums of `f~'` for `N <= n_max` (each on the
/// segment where it enters the velocity), and the two sufficient patterns.
pub fn check_wavemap_conditions(
    f: &Profile,
    g: &Profile,
    t: f64,
    window: f64,
    points: usize,
    n_max: usize,
) -> Result<WaveMapCertificate> {
    let rt = wavemap_reduced(f, g, t)?;
    let n = points.max(3);
    let xs: Vec<f64> = (0..n).map(|j| -window + 2.0 * window * j as f64 / (n - 1) as f64).collect();
    let mut inf_f = f64::INFINITY;
    let mut sup_g = f64::NEG_INFINITY;
    let mut reduced_min = f64::INFINITY;
    for &x in &xs {
        let (a, b, r) = (f.value(x), g.value(x), rt.value(x));
        if !(a.is_finite() && b.is_finite() && r.is_finite()) {
            return Err(Error::NonFinite("wave map data on the window"));
        }
        inf_f = inf_f.min(a);
        sup_g = sup_g.max(b);
        reduced_min = reduced_min.min(r);
    }
    let d = |x: f64| rt.derivative(x, 1);
    // Segment N of the velocity is |x| in [(2N-1)T, (2N+1)T); there the sum
    // over i <= N is the part added to the bridge.
    let segments = libm::ceil((window + t) / (2.0 * t)) as usize;
    let mut right_sums = Vec::new();
    let mut left_sums = Vec::new();
    for big_n in 1..=n_max.min(segments) {
        let (lo_x, hi_x) = ((2 * big_n - 1) as f64 * t, (2 * big_n + 1) as f64 * t);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in &xs {
            if x >= lo_x && x < hi_x {
                lo = lo.min((1..=big_n).map(|i| d(x - (2 * i - 1) as f64 * t)).sum());
            }
            if -x >= lo_x && -x < hi_x {
                hi = hi.max((1..=big_n).map(|i| d(x + (2 * i - 1) as f64 * t)).sum());
            }
        }
        right_sums.push(if lo.is_finite() { lo } else { 0.0 });
        left_sums.push(if hi.is_finite() { hi } else { 0.0 });
    }
    let monotone = xs.iter().all(|&x| {
        let s = d(x);
        (x <= 0.0 || s >= -SIGN_TOL) && (x >= 0.0 || s <= SIGN_TOL)
    });
    let alternating = xs.iter().all(|&x| {
        let s = d(x);
        let rising = !(0.0..=2.0 * t).contains(&x) || s >= -SIGN_TOL;
        let scale = 1.0 + s.abs();
        rising && (s + d(x + 2.0 * t)).abs() <= 1e-9 * scale
    });
    let pattern = if monotone {
        SignPattern::Monotone
    } else if alternating {
        SignPattern::Alternating
    } else {
        SignPattern::None
    };
    Ok(WaveMapCertificate { inf_f, sup_g, margin: inf_f - sup_g, reduced_min, right_sums, left_sums, pattern })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveMapOptions {
    pub window: f64,
    pub points: usize,
    pub n_max: usize,
    /// Members `theta = j / steps` of the poly-to-sine family tried in order.
    pub blend_steps: usize,
    pub verify: bool,
}

impl Default for WaveMapOptions {
    fn default() -> Self {
        WaveMapOptions { window: LINE_WINDOW, points: LINE_WINDOW_POINTS, n_max: 64, blend_steps: 20, verify: true }
    }
}

/// `y = -ln z` for the linear solution `z` of the transformed problem.
#[derive(Clone)]
pub struct WaveMapSolution {
    pub certificate: WaveMapCertificate,
    pub bridge: BridgeChoice,
    /// The linear field `z`.
    pub linear: LineSolution,
    f: Profile,
    g: Profile,
    pub min_z: Option<f64>,
    pub min_v: Option<f64>,
    pub initial_sup_error: Option<f64>,
    /// `max |z e^y - 1|`.
    pub identity_defect: Option<f64>,
    pub metadata: FieldMetadata,
}

/// Picks the first non-negative bridge in the poly-to-sine family.
pub fn nonnegative_bridge(jet: [f64; 3], t: f64, steps: usize) -> Result<(BridgeChoice, f64)> {
    let steps = steps.max(1);
    let mut best = f64::NEG_INFINITY;
    for j in 0..=steps {
        let theta = j as f64 / steps as f64;
        let choice = match j {
            0 => BridgeChoice::Poly,
            j if j == steps => BridgeChoice::Sine,
            _ => BridgeChoice::Blend(theta),
        };
        let u = BridgeFunction::from_jet(jet, t, choice)?;
        let m = u.min_sampled(2001);
        if m >= 0.0 {
            return Ok((choice, m));
        }
        best = best.max(m);
    }
    Err(Error::Certificate(format!(
        "no member of the poly/sine bridge family is non-negative on [-T, T] (best minimum {best:e})"
    )))
}

pub fn solve_wavemap(f: &Profile, g: &Profile, t: f64, options: &WaveMapOptions) -> Result<WaveMapSolution> {
    let certificate = check_wavemap_conditions(f, g, t, options.window, options.points, options.n_max)?;
    certificate.require()?;
    let problem = LineProblem::from_profiles(&exp_neg(f), &exp_neg(g), t)?;
    let (bridge, _) = nonnegative_bridge(problem.reduced().jet()?, t, options.blend_steps)?;
    let line_opts = LineOptions {
        bridge,
        window: options.window,
        points: options.points,
        quad_tol: QUAD_TOL_TIGHT,
        integration: Integration::Primitive,
        verify: false,
    };
    let linear = solve_line(&problem, &line_opts)?;
    let mut sol = WaveMapSolution {
        certificate,
        bridge,
        linear,
        f: f.clone(),
        g: g.clone(),
        min_z: None,
        min_v: None,
        initial_sup_error: None,
        identity_defect: None,
        metadata: FieldMetadata { provenance: format!("wavemap/{}-bridge", bridge.name()), ..Default::default() },
    };
    if options.verify {
        sol.verify(options)?;
    }
    Ok(sol)
}

impl WaveMapSolution {
    pub fn horizon(&self) -> f64 {
        self.linear.horizon()
    }

    pub fn z(&self, t: f64, x: f64) -> f64 {
        self.linear.value(t, x)
    }

    /// `v(x) = z_t(0, x)`.
    pub fn control_value(&self, x: f64) -> f64 {
        self.linear.control_value(x)
    }

    /// Max of `|y_tt - y_xx - (y_t^2 - y_x^2)|` at the given points, by
    /// fourth-order centered differences with step `h`. `|y_t|` is of order
    /// `|v| / z`, so second-order stencils leave an `h^2` error that can
    /// swamp the tolerance.
    pub fn residual_at(&self, points: &[(f64, f64)], h: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for &(t, x) in points {
            let yt = |k: f64| self.value(t + k * h, x);
            let yx = |k: f64| self.value(t, x + k * h);
            let c = self.value(t, x);
            let d2 = |y: &dyn Fn(f64) -> f64| {
                (-y(2.0) + 16.0 * y(1.0) - 30.0 * c + 16.0 * y(-1.0) - y(-2.0)) / (12.0 * h * h)
            };
            let d1 = |y: &dyn Fn(f64) -> f64| (-y(2.0) + 8.0 * y(1.0) - 8.0 * y(-1.0) + y(-2.0)) / (12.0 * h);
            let (t1, x1) = (d1(&yt), d1(&yx));
            let r = (d2(&yt) - d2(&yx) - (t1 * t1 - x1 * x1)).abs();
            worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
        }
        worst
    }

    fn verify(&mut self, options: &WaveMapOptions) -> Result<()> {
        let t_end = self.horizon();
        let w = options.window;
        let n = options.points.max(3);
        let xs: Vec<f64> = (0..n).map(|j| -w + 2.0 * w * j as f64 / (n - 1) as f64).collect();
        let nt = 41;
        let mut min_z = f64::INFINITY;
        let mut at = (0.0, 0.0);
        let mut defect: f64 = 0.0;
        for i in 0..nt {
            let t = t_end * i as f64 / (nt - 1) as f64;
            for &x in xs.iter().step_by(4) {
                let z = self.z(t, x);
                if !(z > 0.0) {
                    return Err(Error::Positivity { min: z, t, x });
                }
                if z < min_z {
                    min_z = z;
                    at = (t, x);
                }
                defect = defect.max((z * libm::exp(-libm::log(z)) - 1.0).abs());
            }
        }
        log::debug!("min z = {min_z} at {at:?}");
        self.min_z = Some(min_z);
        self.identity_defect = Some(defect);
        self.min_v = Some(xs.iter().map(|&x| self.control_value(x)).fold(f64::INFINITY, f64::min));
        let mut e0: f64 = 0.0;
        let mut e1: f64 = 0.0;
        for &x in &xs {
            e0 = e0.max((self.value(0.0, x) - self.f.value(x)).abs());
            e1 = e1.max((self.value(t_end, x) - self.g.value(x)).abs());
        }
        self.initial_sup_error = Some(e0);
        self.metadata.terminal_sup_error = Some(e1);
        let h = WAVEMAP_FD_STEP;
        let mut pts = Vec::new();
        for i in 1..20 {
            let t = t_end * i as f64 / 20.0;
            if t - 2.0 * h <= 0.0 || t + 2.0 * h >= t_end {
                continue;
            }
            for j in 0..=100 {
                pts.push((t, -w + 2.0 * w * j as f64 / 100.0));
            }
        }
        self.metadata.max_pde_residual = Some(self.residual_at(&pts, h));
        Ok(())
    }

    /// Whether every recorded check is inside its tolerance.
    pub fn within_tolerances(&self) -> bool {
        let ok = |v: Option<f64>, tol: f64| v.is_some_and(|v| v <= tol);
        self.min_z.is_some_and(|z| z > 0.0)
            && ok(self.initial_sup_error, WAVEMAP_INITIAL_TOL)
            && ok(self.metadata.terminal_sup_error, WAVEMAP_TERMINAL_TOL)
            && ok(self.metadata.max_pde_residual, WAVEMAP_RESIDUAL_TOL)
    }

    pub fn initial(&self) -> &Profile {
        &self.f
    }

    pub fn terminal(&self) -> &Profile {
        &self.g
    }
}

impl Field for WaveMapSolution {
    fn value(&self, t: f64, x: f64) -> f64 {
        -libm::log(self.z(t, x))
    }
}

impl core::fmt::Debug for WaveMapSolution {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("WaveMapSolution")
            .field("certificate", &self.certificate)
            .field("bridge", &self.bridge)
            .field("min_z", &self.min_z)
            .field("metadata", &self.metadata)
            .finish_non_exhaustive()
    }
}
