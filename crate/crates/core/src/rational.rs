//! Exact rationals for the time horizon and the period.
//!
//! Admissibility of a periodic problem depends on whether `2T/L` is an
//! integer. That question is decided on reduced integer fractions, never on
//! floating-point values.

use alloc::format;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedDiv, CheckedMul};

use crate::error::{Error, Result};

/// A positive or negative fraction `p/q` held in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Invalid(format!("zero denominator in {numer}/{denom}")));
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational> {
        if other.numer() == 0 {
            return Err(Error::Invalid(format!("division of {self} by zero")));
        }
        self.0
            .checked_div(&other.0)
            .map(Rational)
            .ok_or_else(|| Error::Invalid(format!("overflow dividing {self} by {other}")))
    }

    pub fn checked_mul(&self, other: &Rational) -> Result<Rational> {
        self.0
            .checked_mul(&other.0)
            .map(Rational)
            .ok_or_else(|| Error::Invalid(format!("overflow multiplying {self} by {other}")))
    }
}

impl From<Ratio<i64>> for Rational {
    fn from(r: Ratio<i64>) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q` or `-p/q` with integer `p`, `q`. Decimals are
    /// rejected on purpose.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("`{s}` is not an integer fraction p/q"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        Rational::new(n, d)
    }
}

/// Time horizon and period of a periodic problem: `T = t * scale`,
/// `L = l * scale` with `t`, `l` exact.
///
/// The scale lets periods such as `2*pi` be expressed (`l = 2`,
/// `scale = pi`) while `T / L = t / l` stays exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub t: Rational,
    pub l: Rational,
    pub scale: f64,
}

impl Timing {
    pub fn new(t: Rational, l: Rational) -> Result<Self> {
        Self::scaled(t, l, 1.0)
    }

    pub fn scaled(t: Rational, l: Rational, scale: f64) -> Result<Self> {
        if !t.is_positive() || !l.is_positive() {
            return Err(Error::Invalid(format!("T = {t} and L = {l} must both be positive")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Invalid(format!("scale {scale} must be positive and finite")));
        }
        Ok(Timing { t, l, scale })
    }

    pub fn horizon(&self) -> f64 {
        self.t.to_f64() * self.scale
    }

    pub fn period(&self) -> f64 {
        self.l.to_f64() * self.scale
    }

    /// `T / L` as an exact fraction.
    pub fn t_over_l(&self) -> Result<Rational> {
        self.t.checked_div(&self.l)
    }

    /// The same horizon with the period doubled (odd/even extensions).
    pub fn doubled_period(&self) -> Result<Timing> {
        Ok(Timing {
            t: self.t,
            l: self.l.checked_mul(&Rational::integer(2))?,
            scale: self.scale,
        })
    }
}
