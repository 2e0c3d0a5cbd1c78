//! Two-point Hermite interpolation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// The polynomial of degree `2m + 1` matching the jets
/// `(p(x0), ..., p^(m)(x0))` and `(p(x1), ..., p^(m)(x1))`.
///
/// Stored in the local variable `s = (x - x0) / (x1 - x0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitePoly {
    x0: f64,
    h: f64,
    coef: Vec<f64>,
}

impl HermitePoly {
    pub fn new(x0: f64, x1: f64, left: &[f64], right: &[f64]) -> Result<HermitePoly> {
        let m1 = left.len();
        if m1 == 0 || right.len() != m1 {
            return Err(Error::Invalid("Hermite jets must be non-empty and of equal length".into()));
        }
        let h = x1 - x0;
        if !(h.abs() > 0.0) {
            return Err(Error::Invalid("Hermite nodes must differ".into()));
        }
        let n = 2 * m1;
        let mut coef = vec![0.0; n];
        // In s, the j-th derivative picks up a factor h^j.
        let mut hj = 1.0;
        let mut fact = 1.0;
        for j in 0..m1 {
            if j > 0 {
                fact *= j as f64;
            }
            coef[j] = left[j] * hj / fact;
            hj *= h;
        }
        // The remaining coefficients solve an (m+1)x(m+1) system from the
        // conditions at s = 1.
        let mut a = vec![vec![0.0; m1 + 1]; m1];
        let mut hj = 1.0;
        for j in 0..m1 {
            let mut rhs = right[j] * hj;
            for (k, c) in coef.iter().enumerate().take(m1) {
                rhs -= falling(k, j) * c;
            }
            for col in 0..m1 {
                a[j][col] = falling(m1 + col, j);
            }
            a[j][m1] = rhs;
            hj *= h;
        }
        let sol = solve(a)?;
        coef[m1..].copy_from_slice(&sol);
        Ok(HermitePoly { x0, h, coef })
    }

    /// Derivative of order `order` at `x`.
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        let s = (x - self.x0) / self.h;
        let n = self.coef.len();
        if order >= n {
            return 0.0;
        }
        // Horner on the differentiated coefficients.
        let mut acc = 0.0;
        for k in (order..n).rev() {
            acc = acc * s + self.coef[k] * falling(k, order);
        }
        acc / libm::pow(self.h, order as f64)
    }
}

/// `k (k-1) ... (k-j+1)`.
fn falling(k: usize, j: usize) -> f64 {
    if j > k {
        return 0.0;
    }
    (k + 1 - j..=k).fold(1.0, |p, i| p * i as f64)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[piv][col] == 0.0 {
            return Err(Error::Invalid("singular Hermite system".into()));
        }
        a.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..=n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = a[r][n];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_jets() {
        let left = [1.0, -2.0, 0.5, 3.0];
        let right = [0.25, 1.0, -4.0, 2.0];
        let p = HermitePoly::new(-0.5, 1.5, &left, &right).unwrap();
        for j in 0..4 {
            assert!((p.eval(-0.5, j) - left[j]).abs() < 1e-12, "left {j}");
            assert!((p.eval(1.5, j) - right[j]).abs() < 1e-11, "right {j}");
        }
        assert_eq!(p.eval(0.3, 8), 0.0);
    }

    #[test]
    fn reproduces_cubics() {
        let q = |x: f64| [x * x * x - x, 3.0 * x * x - 1.0];
        let p = HermitePoly::new(0.0, 2.0, &q(0.0), &q(2.0)).unwrap();
        for i in 0..=10 {
            let x = 0.2 * i as f64;
            assert!((p.eval(x, 0) - q(x)[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_jets_give_zero() {
        let p = HermitePoly::new(0.0, 1.0, &[0.0; 3], &[0.0; 3]).unwrap();
        assert_eq!(p.eval(0.7, 0), 0.0);
    }
}
