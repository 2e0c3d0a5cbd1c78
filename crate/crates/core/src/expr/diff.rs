use super::{Expr, Func, NamedConst};
use crate::error::{Error, Result};

/// Highest derivative order the profiles need.
pub const MAX_ORDER: usize = 3;

impl Expr {
    /// Symbolic derivative of the given order (`order <= 3`).
    pub fn differentiate(&self, order: usize) -> Result<Expr> {
        if order > MAX_ORDER {
            return Err(Error::DerivativeOrder(order));
        }
        let mut e = self.clone();
        for _ in 0..order {
            e = e.derivative();
        }
        Ok(e)
    }

    /// First derivative. `abs` differentiates to `sign`, which is flagged
    /// at evaluation time where its argument vanishes.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Const(_) | Expr::Coord(_) => Expr::Num(0.0),
            Expr::Var => Expr::Num(1.0),
            Expr::Neg(a) => Expr::neg(a.derivative()),
            Expr::Add(a, b) => Expr::add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => Expr::sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.derivative(), (**b).clone()),
                Expr::mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, b) => {
                if !b.has_var() {
                    return Expr::div(a.derivative(), (**b).clone());
                }
                // (a'b - ab') / b^2
                Expr::div(
                    Expr::sub(
                        Expr::mul(a.derivative(), (**b).clone()),
                        Expr::mul((**a).clone(), b.derivative()),
                    ),
                    Expr::pow((**b).clone(), Expr::Num(2.0)),
                )
            }
            Expr::Pow(a, b) => pow_derivative(a, b),
            Expr::Call(f, a) => {
                let inner = a.derivative();
                if inner.is_zero() {
                    return Expr::Num(0.0);
                }
                let a = (**a).clone();
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, a),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, a)),
                    // 1 + tan^2
                    Func::Tan => Expr::add(
                        Expr::Num(1.0),
                        Expr::pow(Expr::call(Func::Tan, a), Expr::Num(2.0)),
                    ),
                    Func::Exp => Expr::call(Func::Exp, a),
                    Func::Ln => return Expr::div(inner, a),
                    Func::Sqrt => {
                        return Expr::div(inner, Expr::mul(Expr::Num(2.0), Expr::call(Func::Sqrt, a)))
                    }
                    Func::Abs => Expr::call(Func::Sign, a),
                    Func::Sign => return Expr::Num(0.0),
                };
                Expr::mul(outer, inner)
            }
        }
    }
}

fn pow_derivative(base: &Expr, exp: &Expr) -> Expr {
    let db = base.derivative();
    if !exp.has_var() {
        // n * b^(n-1) * b'
        if db.is_zero() {
            return Expr::Num(0.0);
        }
        let reduced = match exp.as_num() {
            Some(n) => Expr::Num(n - 1.0),
            None => Expr::sub(exp.clone(), Expr::Num(1.0)),
        };
        return Expr::mul(
            Expr::mul(exp.clone(), Expr::pow(base.clone(), reduced)),
            db,
        );
    }
    let de = exp.derivative();
    let this = Expr::pow(base.clone(), exp.clone());
    if !base.has_var() {
        // a^v * ln(a) * v'
        let ln_a = match base {
            Expr::Const(NamedConst::E) => Expr::Num(1.0),
            _ => Expr::call(Func::Ln, base.clone()),
        };
        return Expr::mul(Expr::mul(this, ln_a), de);
    }
    // b^v * (v' ln b + v b'/b)
    Expr::mul(
        this,
        Expr::add(
            Expr::mul(de, Expr::call(Func::Ln, base.clone())),
            Expr::div(Expr::mul(exp.clone(), db), base.clone()),
        ),
    )
}
