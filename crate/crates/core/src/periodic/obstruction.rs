use alloc::vec::Vec;

use super::admissibility::admissibility;
use super::series::{analyze, powi, FourierSeries};
use crate::constants::QUAD_TOL_TIGHT;
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::numerics::integrate_function;
use crate::rational::Timing;

/// Number of `x` samples the obstruction residual is taken over.
pub const OBSTRUCTION_POINTS: usize = 400;

/// When `2T/L` is an integer every mode is resonant and `g` is determined by
/// `f` up to the mean:
///
/// ```text
/// g(x) = mean(g) + sum_k cos(2k pi T/L) (A_k(f) cos(w_k x) + B_k(f) sin(w_k x)),
/// ```
///
/// which for integer `T/L` reads `g = f + mean(g - f)`. Returns the sup over
/// the sample grid of the violation.
pub fn obstruction_residual<F, G>(f: &F, g: &G, timing: &Timing, k_max: usize) -> Result<f64>
where
    F: RealFunction + ?Sized,
    G: RealFunction + ?Sized,
{
    let adm = admissibility(timing)?;
    if adm.admissible {
        return Err(Error::NotResonant { p: adm.p, q: adm.q });
    }
    let l = timing.period();
    let xs = (0..OBSTRUCTION_POINTS).map(|i| l * i as f64 / OBSTRUCTION_POINTS as f64);
    let mut sup = 0.0f64;
    if adm.t_over_l_integer() {
        let mean = integrate_function(&Difference(g, f), 0.0, l, QUAD_TOL_TIGHT)?.value / l;
        for x in xs {
            sup = sup.max((g.value(x) - mean - f.value(x)).abs());
        }
    } else {
        // Odd 2T/L: cos(k p pi) = (-1)^k, so the right side is mean(g) + f(x + L/2) - mean(f).
        let ff = analyze(f, l, k_max)?;
        let mean_g = integrate_function(g, 0.0, l, QUAD_TOL_TIGHT)?.value / l;
        let a: Vec<f64> = (0..=k_max).map(|k| if k == 0 { 2.0 * mean_g } else { sign(k) * ff.a(k) }).collect();
        let b: Vec<f64> = (0..=k_max).map(|k| sign(k) * ff.b(k)).collect();
        let rhs = FourierSeries::new(l, a, b)?;
        for x in xs {
            sup = sup.max((g.value(x) - rhs.value(x)).abs());
        }
    }
    if !sup.is_finite() {
        return Err(Error::NonFinite("obstruction residual"));
    }
    Ok(sup)
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

struct Difference<'a, G: ?Sized, F: ?Sized>(&'a G, &'a F);

impl<G: RealFunction + ?Sized, F: RealFunction + ?Sized> RealFunction for Difference<'_, G, F> {
    fn value(&self, x: f64) -> f64 {
        self.0.value(x) - self.1.value(x)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.0.derivative(x, order) - self.1.derivative(x, order)
    }
}

/// Third-derivative coefficients compared mode by mode against
/// `cos-coef(F''') = -w^3 B_k` and `sin-coef(F''') = w^3 A_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// Cosine and sine coefficients of the third derivative.
    pub third_a: Vec<f64>,
    pub third_b: Vec<f64>,
    /// `|cos-coef(F''') + w^3 B_k|` and `|sin-coef(F''') - w^3 A_k|`.
    pub cos_residuals: Vec<f64>,
    pub sin_residuals: Vec<f64>,
    pub max_residual: f64,
    /// `sum k^2 |A_k|`, `sum k^2 |B_k|`.
    pub weighted_a: f64,
    pub weighted_b: f64,
}

pub fn decay_check(series: &FourierSeries, third: &FourierSeries) -> DecayReport {
    let n = series.k_max().min(third.k_max());
    let mut cos_residuals = alloc::vec![0.0; n + 1];
    let mut sin_residuals = alloc::vec![0.0; n + 1];
    for k in 1..=n {
        let w3 = powi(series.omega(k), 3);
        cos_residuals[k] = (third.a(k) + w3 * series.b(k)).abs();
        sin_residuals[k] = (third.b(k) - w3 * series.a(k)).abs();
    }
    let max_residual = cos_residuals.iter().chain(&sin_residuals).fold(0.0f64, |m, r| m.max(*r));
    let (weighted_a, weighted_b) = series.weighted_sums(n);
    DecayReport {
        third_a: third.cosines()[..=n].to_vec(),
        third_b: third.sines()[..=n].to_vec(),
        cos_residuals,
        sin_residuals,
        max_residual,
        weighted_a,
        weighted_b,
    }
}

/// Analyses `p` and its third derivative and compares them.
pub fn decay_check_profile<P: RealFunction + ?Sized>(p: &P, l: f64, k_max: usize) -> Result<DecayReport> {
    let series = analyze(p, l, k_max)?;
    let third = analyze(&Third(p), l, k_max)?;
    Ok(decay_check(&series, &third))
}

struct Third<'a, P: ?Sized>(&'a P);

impl<P: RealFunction + ?Sized> RealFunction for Third<'_, P> {
    fn value(&self, x: f64) -> f64 {
        self.0.derivative(x, 3)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.0.derivative(x, order + 3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Profile;
    use crate::rational::Rational;

    fn p(s: &str) -> Profile {
        Profile::parse(s).unwrap()
    }

    fn timing(t: i64, tq: i64, l: i64) -> Timing {
        Timing::new(Rational::new(t, tq).unwrap(), Rational::integer(l)).unwrap()
    }

    #[test]
    fn shifted_by_constant_is_consistent() {
        let f = p("1 + sin(2*pi*x)");
        let g = p("sin(2*pi*x) + 4");
        assert!(obstruction_residual(&f, &g, &timing(1, 1, 1), 16).unwrap() < 1e-9);
    }

    #[test]
    fn unsolvable_pair() {
        let r = obstruction_residual(&p("0"), &p("sin(2*pi*x/3)"), &timing(3, 1, 3), 16).unwrap();
        assert!((r - 1.0).abs() < 1e-9, "{r}");
        assert!(obstruction_residual(&p("0"), &p("0"), &timing(3, 1, 3), 16).unwrap() < 1e-15);
    }

    #[test]
    fn half_period_reflects() {
        // 2T/L = 1: y(T, x) = f(x + L/2) for zero velocity.
        let f = p("cos(2*pi*x) + 0.5*sin(4*pi*x)");
        let g = p("-cos(2*pi*x) + 0.5*sin(4*pi*x) + 2");
        assert!(obstruction_residual(&f, &g, &timing(1, 2, 1), 8).unwrap() < 1e-9);
        assert!(obstruction_residual(&f, &f, &timing(1, 2, 1), 8).unwrap() > 1.0);
    }

    #[test]
    fn misuse_in_admissible_regime() {
        assert!(matches!(
            obstruction_residual(&p("0"), &p("0"), &timing(1, 4, 1), 8),
            Err(Error::NotResonant { p: 1, q: 2 })
        ));
    }

    #[test]
    fn decay_relation_on_trig_polynomial() {
        let r = decay_check_profile(&p("sin(2*pi*x) - 0.3*cos(6*pi*x) + 0.1*sin(8*pi*x)"), 1.0, 12).unwrap();
        assert!(r.max_residual < 1e-9, "{}", r.max_residual);
        let c = decay_check_profile(&p("7"), 1.0, 12).unwrap();
        assert!(c.third_a.iter().chain(&c.third_b).all(|v| *v == 0.0));
    }

    #[test]
    fn weighted_sums_stabilise() {
        let q = p("exp(sin(2*pi*x))");
        let s40 = analyze(&q, 1.0, 40).unwrap().weighted_sums(40).1;
        let s60 = analyze(&q, 1.0, 60).unwrap().weighted_sums(60).1;
        assert!((s60 - s40).abs() < 1e-8);
    }
}
