use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::BoundaryKind;
use crate::constants::QUAD_TOL_TIGHT;
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::numerics::{integrate_split, HermitePoly};

/// What defines the extended datum on a sub-interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    /// Taylor polynomial of the datum at 0.
    Filler,
    /// The given datum.
    Data,
    /// Hermite interpolant between the datum at `T` and the forced jet at `L`.
    Bridge,
    /// `h(s) = 2 l(s - L) - h(s - 2L)`.
    Recursion,
}

/// A left boundary datum `h` on `[0, T]` extended to `[-L, T + L]` so that
/// `h(t + L) + h(t - L) = 2 l(t)` for `t` in `[0, T]`, with `T < L`.
///
/// Dirichlet data are extended C3 (cubic Taylor filler, degree 7 Hermite),
/// Neumann data C2 (quadratic Taylor filler, quintic Hermite).
#[derive(Clone)]
pub struct ExtendedBoundaryDatum {
    kind: BoundaryKind,
    t: f64,
    l: f64,
    data: Arc<dyn RealFunction>,
    right: Arc<dyn RealFunction>,
    taylor: Vec<f64>,
    bridge: HermitePoly,
}

impl ExtendedBoundaryDatum {
    pub fn new(
        kind: BoundaryKind,
        data: Arc<dyn RealFunction>,
        right: Arc<dyn RealFunction>,
        t: f64,
        l: f64,
    ) -> Result<ExtendedBoundaryDatum> {
        if !(t > 0.0 && t < l && l.is_finite()) {
            return Err(Error::Inadmissible(format!(
                "boundary data extension needs 0 < T < L, got T = {t}, L = {l}; the case T > L \
                 requires exchanging the roles of t and x and is not supported"
            )));
        }
        let order = match kind {
            BoundaryKind::Dirichlet => 3,
            BoundaryKind::Neumann => 2,
        };
        let taylor: Vec<f64> = (0..=order).map(|j| data.derivative(0.0, j)).collect();
        let mut ext = ExtendedBoundaryDatum {
            kind,
            t,
            l,
            data,
            right,
            taylor,
            bridge: HermitePoly::new(0.0, 1.0, &[0.0], &[0.0])?,
        };
        let at_t: Vec<f64> = (0..=order).map(|j| ext.data.derivative(t, j)).collect();
        let at_l: Vec<f64> = (0..=order).map(|j| 2.0 * ext.right.derivative(0.0, j) - ext.filler(-l, j)).collect();
        if at_t.iter().chain(&at_l).chain(&ext.taylor).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("boundary datum jet"));
        }
        ext.bridge = HermitePoly::new(t, l, &at_t, &at_l)?;
        Ok(ext)
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    /// Smoothness order of the extension.
    pub fn order(&self) -> usize {
        self.taylor.len() - 1
    }

    /// `[-L, T + L]`.
    pub fn interval(&self) -> (f64, f64) {
        (-self.l, self.t + self.l)
    }

    /// The sub-intervals in order, with what defines each.
    pub fn pieces(&self) -> [(f64, f64, PieceKind); 4] {
        let (t, l) = (self.t, self.l);
        [
            (-l, 0.0, PieceKind::Filler),
            (0.0, t, PieceKind::Data),
            (t, l, PieceKind::Bridge),
            (l, t + l, PieceKind::Recursion),
        ]
    }

    /// Seams between pieces.
    pub fn seams(&self) -> [f64; 3] {
        [0.0, self.t, self.l]
    }

    fn filler(&self, s: f64, order: usize) -> f64 {
        let n = self.taylor.len();
        if order >= n {
            return 0.0;
        }
        // Taylor polynomial sum_j c_j s^(j - order) / (j - order)!.
        let mut acc = 0.0;
        for j in (order..n).rev() {
            acc = acc * s / ((j - order + 1) as f64) + self.taylor[j];
        }
        acc
    }

    /// Which piece `s` falls in. The outer formulas are continued a little
    /// past `[-L, T + L]` so that difference quotients at the ends work.
    pub fn piece(&self, s: f64) -> Option<PieceKind> {
        let slack = 1e-2 * self.l;
        let (t, l) = (self.t, self.l);
        if s < -l - slack || s > t + l + slack || s.is_nan() {
            None
        } else if s < 0.0 {
            Some(PieceKind::Filler)
        } else if s <= t {
            Some(PieceKind::Data)
        } else if s < l {
            Some(PieceKind::Bridge)
        } else {
            Some(PieceKind::Recursion)
        }
    }

    /// Derivative `order` at `s`; `NaN` well outside `[-L, T + L]`.
    pub fn eval(&self, s: f64, order: usize) -> f64 {
        match self.piece(s) {
            None => f64::NAN,
            Some(PieceKind::Filler) => self.filler(s, order),
            Some(PieceKind::Data) => self.data.derivative(s, order),
            Some(PieceKind::Bridge) => self.bridge.eval(s, order),
            Some(PieceKind::Recursion) => {
                2.0 * self.right.derivative(s - self.l, order) - self.filler(s - 2.0 * self.l, order)
            }
        }
    }

    /// `int_a^b` of the extended datum.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let mut cuts: Vec<f64> = self.seams().into_iter().filter(|&c| c > lo && c < hi).collect();
        cuts.extend(self.data.breakpoints(lo.max(0.0), hi.min(self.t)));
        crate::function::sort_dedup(&mut cuts);
        Ok(integrate_split(|s| self.eval(s, 0), a, b, &cuts, QUAD_TOL_TIGHT)?.value)
    }

    /// `sup_t |h(t + L) + h(t - L) - 2 l(t)|` over `samples` points of `[0, T]`.
    pub fn identity_residual(&self, samples: usize) -> f64 {
        let n = samples.max(2);
        (0..n)
            .map(|i| {
                let s = self.t * i as f64 / (n - 1) as f64;
                (self.eval(s + self.l, 0) + self.eval(s - self.l, 0) - 2.0 * self.right.value(s)).abs()
            })
            .fold(0.0, |m: f64, r| if r.is_nan() { f64::NAN } else { m.max(r) })
    }

    /// Largest jump of derivatives `0..=order` across the interior seams,
    /// from the formulas on either side.
    pub fn seam_jumps(&self) -> Vec<f64> {
        let (t, l) = (self.t, self.l);
        (0..=self.order())
            .map(|j| {
                let at0 = (self.data.derivative(0.0, j) - self.filler(0.0, j)).abs();
                let at_t = (self.bridge.eval(t, j) - self.data.derivative(t, j)).abs();
                let rec = 2.0 * self.right.derivative(0.0, j) - self.filler(-l, j);
                let at_l = (rec - self.bridge.eval(l, j)).abs();
                at0.max(at_t).max(at_l)
            })
            .collect()
    }
}

impl RealFunction for ExtendedBoundaryDatum {
    fn value(&self, s: f64) -> f64 {
        self.eval(s, 0)
    }
    fn derivative(&self, s: f64, order: usize) -> f64 {
        self.eval(s, order)
    }
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        self.seams().into_iter().filter(|&c| c > a && c < b).collect()
    }
}
