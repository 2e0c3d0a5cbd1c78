//! Adaptive Simpson quadrature with explicit breakpoints.

use alloc::vec::Vec;

use crate::constants::QUAD_MAX_DEPTH;
use crate::error::{Error, Result};
use crate::function::{sort_dedup, RealFunction};

/// Each piece is pre-split this many times before adapting, so that
/// integrands which happen to vanish at the first five samples are not
/// accepted on sight.
const INITIAL_PANELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the local Richardson error estimates.
    pub error: f64,
}

struct Acc {
    value: f64,
    error: f64,
    unconverged: bool,
    non_finite: bool,
}

/// `int_a^b f` to absolute tolerance `tol`. Reversed limits flip the sign.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    integrate_split(f, a, b, &[], tol)
}

/// Like [`integrate`], splitting at every breakpoint inside `(a, b)`.
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<Integral> {
    if !(tol > 0.0) {
        return Err(Error::Invalid(alloc::format!("quadrature tolerance must be positive, got {tol}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("integration limits"));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    if a > b {
        let r = integrate_split(f, b, a, breakpoints, tol)?;
        return Ok(Integral { value: -r.value, error: r.error });
    }
    let mut cuts: Vec<f64> = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(a);
    cuts.extend(breakpoints.iter().copied().filter(|&p| p > a && p < b));
    cuts.push(b);
    sort_dedup(&mut cuts);

    let width = b - a;
    let mut acc = Acc { value: 0.0, error: 0.0, unconverged: false, non_finite: false };
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let h = (hi - lo) / INITIAL_PANELS as f64;
        let panel_tol = tol * h / width;
        for k in 0..INITIAL_PANELS {
            let pa = lo + k as f64 * h;
            let pb = if k + 1 == INITIAL_PANELS { hi } else { pa + h };
            let fa = f(pa);
            let fb = f(pb);
            let m = 0.5 * (pa + pb);
            let fm = f(m);
            let whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
            simpson(&f, pa, pb, fa, fm, fb, whole, panel_tol, 0, &mut acc);
        }
    }
    if acc.non_finite || !acc.value.is_finite() {
        return Err(Error::NonFinite("integrand"));
    }
    if acc.unconverged && acc.error > tol {
        return Err(Error::Quadrature { a, b, achieved: acc.error });
    }
    Ok(Integral { value: acc.value, error: acc.error })
}

/// Integrates a [`RealFunction`], splitting at its own breakpoints.
pub fn integrate_function<R: RealFunction + ?Sized>(p: &R, a: f64, b: f64, tol: f64) -> Result<Integral> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let pts = p.breakpoints(lo, hi);
    integrate_split(|x| p.value(x), a, b, &pts, tol)
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    acc: &mut Acc,
) {
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
        acc.non_finite = true;
        return;
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Below this the difference is rounding, not truncation.
    let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    let converged = delta.abs() <= 15.0 * tol.max(floor);
    if converged || depth >= QUAD_MAX_DEPTH || !(lm > a && rm < b) {
        if !converged {
            acc.unconverged = true;
        }
        if !(flm.is_finite() && frm.is_finite()) {
            acc.non_finite = true;
        }
        acc.value += left + right + delta / 15.0;
        acc.error += delta.abs() / 15.0;
        return;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, acc);
    simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, acc);
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn constant_is_exact() {
        let r = integrate(|_| 1.0, 0.0, 1.0, 1e-9).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn sine_over_half_period() {
        let r = integrate(libm::sin, 0.0, PI, 1e-9).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-10);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate(|x| x, 1.0, 0.0, 1e-9).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn kink_is_resolved_with_breakpoint() {
        let f = |x: f64| (x - 0.3).abs();
        let exact = 0.5 * (0.3f64 * 0.3 + 0.7 * 0.7);
        let split = integrate_split(f, 0.0, 1.0, &[0.3], 1e-12).unwrap();
        assert!((split.value - exact).abs() < 1e-14);
        let blind = integrate(f, 0.0, 1.0, 1e-9).unwrap();
        assert!((blind.value - exact).abs() < 1e-9);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        assert_eq!(integrate(|x| 1.0 / x, 0.0, 1.0, 1e-9), Err(Error::NonFinite("integrand")));
    }

    #[test]
    fn singular_integrand_does_not_converge() {
        let r = integrate(|x| 1.0 / libm::sqrt(x.abs()), -1.0, 1.0 + 1e-3, 1e-12);
        assert!(matches!(r, Err(Error::Quadrature { .. }) | Err(Error::NonFinite(_))), "{r:?}");
    }
}
