use alloc::format;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rational::{Rational, Timing};

/// Number of modes the sinusoid bound is checked for.
pub const SINUSOID_CHECK_MODES: i64 = 1000;
const SINUSOID_SLACK: f64 = 1e-12;

/// Exact classification of `2T/L = p/q` (reduced).
///
/// Admissible means `q >= 2`, i.e. `2T/L` is not an integer. Then
/// `|sin(k p pi / q)| >= sin(pi / q) = C_s` for every `k` not divisible by `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub t: Rational,
    pub l: Rational,
    pub p: i64,
    pub q: i64,
    pub admissible: bool,
    /// `sin(pi / q)`; zero when inadmissible.
    pub c_s: f64,
    /// Smallest `|sin(k p pi / q)|` over checked `k` with `q` not dividing `k`.
    pub min_sine: f64,
}

impl Admissibility {
    /// Whether mode `k` is resonant, i.e. `2kT/L` is an integer.
    pub fn is_resonant(&self, k: usize) -> bool {
        (k as i64) % self.q == 0
    }

    /// `(cos, sin)` of `2k pi T / L = k p pi / q`, reduced exactly mod `2 pi`.
    pub fn phase(&self, k: usize) -> (f64, f64) {
        phase(k as i64, self.p, self.q)
    }

    /// Whether `T / L` is an integer (the second obstruction form).
    pub fn t_over_l_integer(&self) -> bool {
        self.q == 1 && self.p % 2 == 0
    }

    /// Errors with [`Error::Inadmissible`] unless admissible.
    pub fn require(&self) -> Result<()> {
        if self.admissible {
            Ok(())
        } else {
            Err(Error::Inadmissible(format!(
                "2T/L = {} is an integer (T = {}, L = {}); Fourier modes with 2kT/L in N have no free \
                 velocity coefficient, so the terminal data cannot be arbitrary",
                self.p, self.t, self.l
            )))
        }
    }
}

fn phase(k: i64, p: i64, q: i64) -> (f64, f64) {
    let r = ((k as i128 * p as i128).rem_euclid(2 * q as i128)) as f64;
    let x = r * PI / q as f64;
    // Exact zeros and signs at multiples of pi/2.
    let two_r_over_q = 2.0 * r / q as f64;
    if crate::function::fract(two_r_over_q) == 0.0 {
        return match (two_r_over_q as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    (libm::cos(x), libm::sin(x))
}

/// Classifies the pair `(T, L)`.
pub fn admissibility(timing: &Timing) -> Result<Admissibility> {
    let two_t_over_l = timing.t_over_l()?.checked_mul(&Rational::integer(2))?;
    let (p, q) = (two_t_over_l.numer(), two_t_over_l.denom());
    let admissible = q >= 2;
    let (c_s, min_sine) = if admissible {
        let c_s = libm::sin(PI / q as f64);
        let min = (1..=SINUSOID_CHECK_MODES)
            .filter(|k| k % q != 0)
            .map(|k| phase(k, p, q).1.abs())
            .fold(f64::INFINITY, f64::min);
        if min < c_s - SINUSOID_SLACK {
            return Err(Error::Invalid(format!("sinusoid bound failed: {min} < sin(pi/{q}) = {c_s}")));
        }
        (c_s, min)
    } else {
        (0.0, 0.0)
    };
    Ok(Admissibility { t: timing.t, l: timing.l, p, q, admissible, c_s, min_sine })
}
