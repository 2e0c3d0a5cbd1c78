/// Minimum of `f` on `[a, b]`: a uniform scan of `points` samples, then
/// golden-section refinement around the best sample down to `tol` in `x`.
///
/// Returns `(argmin, min)`.
pub fn scan_min(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize, tol: f64) -> (f64, f64) {
    let n = points.max(2);
    let h = (b - a) / (n - 1) as f64;
    let (mut best_x, mut best) = (a, f(a));
    for k in 1..n {
        let x = if k == n - 1 { b } else { a + k as f64 * h };
        let y = f(x);
        if y < best || best.is_nan() {
            best_x = x;
            best = y;
        }
    }
    let lo = (best_x - h).max(a);
    let hi = (best_x + h).min(b);
    let (x, y) = golden_section(&f, lo, hi, tol);
    if y < best {
        (x, y)
    } else {
        (best_x, best)
    }
}

/// Golden-section search for a local minimum of a unimodal `f` on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
