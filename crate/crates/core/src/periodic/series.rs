use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::function::RealFunction;

/// A truncated Fourier series of period `L`:
///
/// ```text
/// p(x) = A_0/2 + sum_{k=1}^{K} A_k cos(2k pi x / L) + B_k sin(2k pi x / L).
/// ```
///
/// `a[0]` holds `A_0`; `b[0]` is unused and kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    l: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FourierSeries {
    /// From coefficient arrays of equal length `K + 1`.
    pub fn new(l: f64, a: Vec<f64>, mut b: Vec<f64>) -> Result<FourierSeries> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Invalid(alloc::format!("period must be positive, got {l}")));
        }
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::Invalid("coefficient arrays must be non-empty and of equal length".into()));
        }
        if a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("Fourier coefficient"));
        }
        b[0] = 0.0;
        Ok(FourierSeries { l, a, b })
    }

    pub fn zero(l: f64, k_max: usize) -> FourierSeries {
        FourierSeries { l, a: vec![0.0; k_max + 1], b: vec![0.0; k_max + 1] }
    }

    pub fn period(&self) -> f64 {
        self.l
    }

    pub fn k_max(&self) -> usize {
        self.a.len() - 1
    }

    /// `A_k`, with `A_0` at `k = 0`; zero beyond the truncation.
    pub fn a(&self, k: usize) -> f64 {
        self.a.get(k).copied().unwrap_or(0.0)
    }

    /// `B_k`; zero for `k = 0` and beyond the truncation.
    pub fn b(&self, k: usize) -> f64 {
        self.b.get(k).copied().unwrap_or(0.0)
    }

    pub fn cosines(&self) -> &[f64] {
        &self.a
    }

    pub fn sines(&self) -> &[f64] {
        &self.b
    }

    /// `2k pi / L`.
    pub fn omega(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.l
    }

    /// `sum k^2 |A_k|` and `sum k^2 |B_k|` over `k <= k_max`.
    pub fn weighted_sums(&self, k_max: usize) -> (f64, f64) {
        let n = k_max.min(self.k_max());
        let mut sa = 0.0;
        let mut sb = 0.0;
        for k in 1..=n {
            let w = (k * k) as f64;
            sa += w * self.a[k].abs();
            sb += w * self.b[k].abs();
        }
        (sa, sb)
    }

    /// `|A_K| + |B_K|` for the last retained mode.
    pub fn tail(&self) -> f64 {
        let k = self.k_max();
        self.a[k].abs() + self.b[k].abs()
    }

    /// Evaluates derivative `order` at `x`.
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        let mut sum = if order == 0 { 0.5 * self.a[0] } else { 0.0 };
        let w1 = 2.0 * PI / self.l;
        let mut k = 1;
        while k <= self.k_max() {
            // Re-seed the rotation every 16 modes to keep round-off flat.
            let phase = w1 * k as f64 * x;
            let (mut s, mut c) = (libm::sin(phase), libm::cos(phase));
            let (s1, c1) = (libm::sin(w1 * x), libm::cos(w1 * x));
            let end = (k + 16).min(self.k_max() + 1);
            while k < end {
                let (ak, bk) = (self.a[k], self.b[k]);
                if ak != 0.0 || bk != 0.0 {
                    let w = w1 * k as f64;
                    let (cos_part, sin_part) = match order % 4 {
                        0 => (c, s),
                        1 => (-s, c),
                        2 => (-c, -s),
                        _ => (s, -c),
                    };
                    sum += powi(w, order) * (ak * cos_part + bk * sin_part);
                }
                let next = c * c1 - s * s1;
                s = s * c1 + c * s1;
                c = next;
                k += 1;
            }
        }
        sum
    }
}

pub(crate) fn powi(w: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, _| acc * w)
}

impl RealFunction for FourierSeries {
    fn value(&self, x: f64) -> f64 {
        self.eval(x, 0)
    }
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.eval(x, order)
    }
}

/// Sample count used by [`analyze`] for `k_max` modes.
pub fn default_samples(k_max: usize) -> usize {
    (8 * k_max).max(1024)
}

/// Fourier coefficients of `p` over `[0, L)` up to `k_max`.
///
/// Uses the periodic trapezoid rule, which is exact for trigonometric
/// polynomials of degree below `samples - k_max` and spectrally accurate
/// for smooth periodic input.
pub fn analyze<P: RealFunction + ?Sized>(p: &P, l: f64, k_max: usize) -> Result<FourierSeries> {
    analyze_sampled(p, l, k_max, default_samples(k_max))
}

/// [`analyze`] with an explicit sample count.
pub fn analyze_sampled<P: RealFunction + ?Sized>(
    p: &P,
    l: f64,
    k_max: usize,
    samples: usize,
) -> Result<FourierSeries> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Invalid(alloc::format!("period must be positive, got {l}")));
    }
    let m = samples.max(2 * k_max + 2);
    let values: Vec<f64> = (0..m).map(|j| p.value(l * j as f64 / m as f64)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("profile sample during Fourier analysis"));
    }
    analyze_values(&values, l, k_max)
}

/// Coefficients from `M` equispaced samples `p(jL/M)`, `j < M`.
pub fn analyze_values(values: &[f64], l: f64, k_max: usize) -> Result<FourierSeries> {
    let m = values.len();
    if m < 2 * k_max + 2 {
        return Err(Error::Invalid(alloc::format!("{m} samples cannot resolve {k_max} modes")));
    }
    let table: Vec<(f64, f64)> = (0..m)
        .map(|j| {
            let phase = 2.0 * PI * j as f64 / m as f64;
            (libm::cos(phase), libm::sin(phase))
        })
        .collect();
    let scale = 2.0 / m as f64;
    let mut a = vec![0.0; k_max + 1];
    let mut b = vec![0.0; k_max + 1];
    a[0] = scale * values.iter().sum::<f64>();
    for k in 1..=k_max {
        let (mut sa, mut sb) = (0.0, 0.0);
        let mut idx = 0;
        for v in values {
            let (c, s) = table[idx];
            sa += v * c;
            sb += v * s;
            idx += k;
            if idx >= m {
                idx -= m;
            }
        }
        a[k] = scale * sa;
        b[k] = scale * sb;
    }
    FourierSeries::new(l, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Profile;

    #[test]
    fn constant() {
        let s = analyze(&Profile::constant(1.5), 2.0, 8).unwrap();
        assert!((s.a(0) - 3.0).abs() < 1e-14);
        for k in 1..=8 {
            assert!(s.a(k).abs() < 1e-14 && s.b(k).abs() < 1e-14);
        }
        assert!((s.value(0.3) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn single_sine() {
        let s = analyze(&Profile::parse("sin(2*pi*x/3)").unwrap(), 3.0, 10).unwrap();
        assert!((s.b(1) - 1.0).abs() < 1e-12);
        for k in 0..=10 {
            if k != 1 {
                assert!(s.a(k).abs() < 1e-12 && s.b(k).abs() < 1e-12, "mode {k}");
            }
        }
    }

    #[test]
    fn derivatives_match_symbolic() {
        let p = Profile::parse("cos(2*pi*x) - 0.5*sin(6*pi*x) + 0.25").unwrap();
        let s = analyze(&p, 1.0, 6).unwrap();
        for x in [0.0, 0.13, 0.77] {
            for n in 0..=3 {
                let rel = (s.eval(x, n) - p.derivative(x, n)).abs() / (1.0 + p.derivative(x, n).abs());
                assert!(rel < 1e-11, "order {n}");
            }
        }
    }

    #[test]
    fn rotation_matches_direct_sum() {
        let a: Vec<f64> = (0..=60).map(|k| 1.0 / (1 + k * k) as f64).collect();
        let b: Vec<f64> = (0..=60).map(|k| 0.5 / (1 + k) as f64).collect();
        let s = FourierSeries::new(1.7, a.clone(), b.clone()).unwrap();
        for x in [0.0, 0.4, 1.69, -3.3] {
            let mut direct = 0.5 * a[0];
            for k in 1..=60 {
                let w = 2.0 * PI * k as f64 / 1.7;
                direct += a[k] * libm::cos(w * x) + b[k] * libm::sin(w * x);
            }
            assert!((s.value(x) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite_samples() {
        let p = Profile::parse("1/(x - 0.5)").unwrap();
        assert!(analyze_sampled(&p, 1.0, 4, 16).is_err());
    }
}
