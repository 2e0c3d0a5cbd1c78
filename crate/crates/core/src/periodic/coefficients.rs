use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::admissibility::Admissibility;
use super::series::FourierSeries;
use crate::constants::RESONANCE_TOL;
use crate::error::{Error, Result};
use crate::numerics::Field;

/// Coefficients of
///
/// ```text
/// y(t, x) = (alpha_0 + beta_0 t)/2 + sum a_k(t) cos(w_k x) + b_k(t) sin(w_k x),
/// a_k(t) = alpha_k cos(w_k t) + beta_k sin(w_k t),
/// b_k(t) = alpha~_k cos(w_k t) + beta~_k sin(w_k t),     w_k = 2k pi / L.
/// ```
///
/// Index 0 of the per-mode arrays is unused.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlCoefficients {
    pub l: f64,
    pub t: f64,
    pub alpha0: f64,
    pub beta0: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha_bar: Vec<f64>,
    pub beta_bar: Vec<f64>,
    pub resonant: Vec<bool>,
}

/// Solves for the coefficients matching `f` at `t = 0` and `g` at `t = T`.
///
/// Resonant modes get `beta_k = beta~_k = 0` provided the data already
/// satisfy `g-mode = cos(w_k T) f-mode` there.
pub fn control_coefficients(
    ff: &FourierSeries,
    fg: &FourierSeries,
    adm: &Admissibility,
    t: f64,
) -> Result<ControlCoefficients> {
    adm.require()?;
    if ff.k_max() != fg.k_max() || (ff.period() - fg.period()).abs() > 1e-12 * ff.period() {
        return Err(Error::Invalid("initial and terminal series differ in period or length".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Invalid(format!("time horizon must be positive, got {t}")));
    }
    let n = ff.k_max();
    let mut c = ControlCoefficients {
        l: ff.period(),
        t,
        alpha0: ff.a(0),
        beta0: (fg.a(0) - ff.a(0)) / t,
        alpha: vec![0.0; n + 1],
        beta: vec![0.0; n + 1],
        alpha_bar: vec![0.0; n + 1],
        beta_bar: vec![0.0; n + 1],
        resonant: vec![false; n + 1],
    };
    for k in 1..=n {
        let (cos, sin) = adm.phase(k);
        c.alpha[k] = ff.a(k);
        c.alpha_bar[k] = ff.b(k);
        let ra = fg.a(k) - cos * ff.a(k);
        let rb = fg.b(k) - cos * ff.b(k);
        if adm.is_resonant(k) {
            c.resonant[k] = true;
            let residual = ra.abs().max(rb.abs());
            if !(residual <= RESONANCE_TOL) {
                return Err(Error::ResonantMode { mode: k, residual });
            }
        } else {
            c.beta[k] = ra / sin;
            c.beta_bar[k] = rb / sin;
        }
    }
    Ok(c)
}

impl ControlCoefficients {
    pub fn k_max(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn omega(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.l
    }

    /// Sets the free velocity coefficients of a resonant mode. Both endpoint
    /// conditions are unaffected since `sin(w_k T) = 0` there.
    pub fn inject_resonant(&mut self, k: usize, beta: f64, beta_bar: f64) -> Result<()> {
        if !self.resonant.get(k).copied().unwrap_or(false) {
            return Err(Error::Invalid(format!("mode {k} is not resonant")));
        }
        self.beta[k] = beta;
        self.beta_bar[k] = beta_bar;
        Ok(())
    }

    /// The same coefficients with `beta_0 = 0`.
    pub fn without_drift(&self) -> ControlCoefficients {
        ControlCoefficients { beta0: 0.0, ..self.clone() }
    }

    /// `(a_k(t), b_k(t))`.
    pub fn mode(&self, k: usize, t: f64) -> (f64, f64) {
        let w = self.omega(k) * t;
        let (c, s) = (libm::cos(w), libm::sin(w));
        (self.alpha[k] * c + self.beta[k] * s, self.alpha_bar[k] * c + self.beta_bar[k] * s)
    }

    /// `sum_k k^2 (|alpha_k| + |beta_k| + |alpha~_k| + |beta~_k|)`.
    pub fn weighted_sum(&self, k_max: usize) -> f64 {
        (1..=k_max.min(self.k_max()))
            .map(|k| {
                (k * k) as f64
                    * (self.alpha[k].abs() + self.beta[k].abs() + self.alpha_bar[k].abs() + self.beta_bar[k].abs())
            })
            .sum()
    }

    /// `y(t, x)`.
    pub fn synthesize(&self, t: f64, x: f64) -> f64 {
        let mut sum = 0.5 * (self.alpha0 + self.beta0 * t);
        let w1 = self.omega(1);
        let (st1, ct1) = (libm::sin(w1 * t), libm::cos(w1 * t));
        let (sx1, cx1) = (libm::sin(w1 * x), libm::cos(w1 * x));
        let n = self.k_max();
        let mut k = 1;
        while k <= n {
            let w = self.omega(k);
            let (mut st, mut ct) = (libm::sin(w * t), libm::cos(w * t));
            let (mut sx, mut cx) = (libm::sin(w * x), libm::cos(w * x));
            let end = (k + 16).min(n + 1);
            while k < end {
                let a = self.alpha[k] * ct + self.beta[k] * st;
                let b = self.alpha_bar[k] * ct + self.beta_bar[k] * st;
                sum += a * cx + b * sx;
                (ct, st) = (ct * ct1 - st * st1, st * ct1 + ct * st1);
                (cx, sx) = (cx * cx1 - sx * sx1, sx * cx1 + cx * sx1);
                k += 1;
            }
        }
        sum
    }

    /// `(y, y_t, y_x)` at `(t, x)`.
    pub fn synthesize_derivatives(&self, t: f64, x: f64) -> (f64, f64, f64) {
        let s = self.series_at(t, 0);
        (s.eval(x, 0), self.series_at(t, 1).eval(x, 0), s.eval(x, 1))
    }

    /// The series in `x` of `d^order y / dt^order` at time `t`, `order <= 1`.
    pub fn series_at(&self, t: f64, order: usize) -> FourierSeries {
        let n = self.k_max();
        let mut a = vec![0.0; n + 1];
        let mut b = vec![0.0; n + 1];
        if order == 0 {
            a[0] = self.alpha0 + self.beta0 * t;
        } else {
            a[0] = self.beta0;
        }
        for k in 1..=n {
            let w = self.omega(k);
            let (c, s) = (libm::cos(w * t), libm::sin(w * t));
            if order == 0 {
                a[k] = self.alpha[k] * c + self.beta[k] * s;
                b[k] = self.alpha_bar[k] * c + self.beta_bar[k] * s;
            } else {
                a[k] = w * (self.beta[k] * c - self.alpha[k] * s);
                b[k] = w * (self.beta_bar[k] * c - self.alpha_bar[k] * s);
            }
        }
        FourierSeries::new(self.l, a, b).expect("finite coefficients")
    }

    /// `v(x) = y_t(0, x) = beta_0/2 + sum w_k (beta_k cos + beta~_k sin)`.
    pub fn control_velocity(&self) -> FourierSeries {
        self.series_at(0.0, 1)
    }
}

impl Field for ControlCoefficients {
    fn value(&self, t: f64, x: f64) -> f64 {
        self.synthesize(t, x)
    }
}

#[cfg(test)]
mod tests {
    use super::super::admissibility::admissibility;
    use super::super::series::analyze;
    use super::*;
    use crate::expr::Profile;
    use crate::function::RealFunction;
    use crate::rational::Timing;

    fn build(f: &str, g: &str, t: &str, l: &str, scale: f64) -> Result<ControlCoefficients> {
        let tm = Timing::scaled(t.parse().unwrap(), l.parse().unwrap(), scale).unwrap();
        let adm = admissibility(&tm)?;
        let ff = analyze(&Profile::parse(f)?, tm.period(), 16)?;
        let fg = analyze(&Profile::parse(g)?, tm.period(), 16)?;
        control_coefficients(&ff, &fg, &adm, tm.horizon())
    }

    #[test]
    fn constant_steady_state() {
        let c = build("2.5", "2.5", "1/4", "1", 1.0).unwrap();
        assert!((c.alpha0 - 5.0).abs() < 1e-14);
        assert_eq!(c.beta0, 0.0);
        assert!(c.weighted_sum(16) < 1e-10);
        assert!((c.synthesize(0.3, 0.7) - 2.5).abs() < 1e-13);
        assert!(c.control_velocity().value(0.4).abs() < 1e-12);
    }

    #[test]
    fn sine_example() {
        let c = build("sin(2*pi*x)", "sin(2*pi*x)", "1/4", "1", 1.0).unwrap();
        assert!((c.alpha_bar[1] - 1.0).abs() < 1e-12);
        assert!((c.beta_bar[1] - 1.0).abs() < 1e-12);
        assert!((c.synthesize(0.25, 0.125) - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let v = c.control_velocity();
        for x in [0.1, 0.35, 0.8] {
            assert!((v.value(x) - 2.0 * PI * libm::sin(2.0 * PI * x)).abs() < 1e-10);
        }
    }

    #[test]
    fn resonant_mode_is_masked() {
        let c = build("cos(2*x) + sin(x)", "-cos(2*x) + cos(x)", "1/2", "2", PI).unwrap();
        assert!(c.resonant[2] && c.resonant[4] && !c.resonant[1]);
        assert_eq!((c.beta[2], c.beta_bar[2]), (0.0, 0.0));
        for x in [0.0, 1.0, 2.5] {
            let want = -libm::cos(2.0 * x) + libm::cos(x);
            assert!((c.synthesize(PI / 2.0, x) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn inconsistent_resonant_mode_is_reported() {
        let err = build("0", "cos(2*x)", "1/2", "2", PI).unwrap_err();
        assert!(matches!(err, Error::ResonantMode { mode: 2, .. }), "{err:?}");
    }

    #[test]
    fn injection_keeps_endpoints() {
        let mut c = build("cos(2*x)", "-cos(2*x)", "1/2", "2", PI).unwrap();
        let before = (c.synthesize(0.0, 0.3), c.synthesize(PI / 2.0, 0.3), c.synthesize(0.7, 0.3));
        c.inject_resonant(2, 0.4, -0.2).unwrap();
        assert!((c.synthesize(0.0, 0.3) - before.0).abs() < 1e-12);
        assert!((c.synthesize(PI / 2.0, 0.3) - before.1).abs() < 1e-12);
        assert!((c.synthesize(0.7, 0.3) - before.2).abs() > 1e-3);
        assert!(c.inject_resonant(1, 1.0, 1.0).is_err());
    }

    #[test]
    fn time_derivative_matches_difference() {
        let c = build("sin(2*pi*x) + 0.3*cos(4*pi*x)", "0.2 + cos(2*pi*x)", "1/3", "1", 1.0).unwrap();
        let h = 1e-6;
        for (t, x) in [(0.1, 0.2), (0.3, 0.9)] {
            let (_, yt, yx) = c.synthesize_derivatives(t, x);
            let fd_t = (c.synthesize(t + h, x) - c.synthesize(t - h, x)) / (2.0 * h);
            let fd_x = (c.synthesize(t, x + h) - c.synthesize(t, x - h)) / (2.0 * h);
            assert!((yt - fd_t).abs() < 1e-7 && (yx - fd_x).abs() < 1e-7);
        }
    }
}
