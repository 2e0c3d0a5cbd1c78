use alloc::string::ToString;
use alloc::vec::Vec;

use super::{Expr, Func};
use crate::error::{Error, Result};

/// Integer exponents up to this magnitude use repeated squaring, which
/// keeps `x^2` and `x*x` bit-identical.
const SMALL_INT_POW: f64 = 64.0;

pub(crate) fn pow_value(base: f64, exp: f64) -> f64 {
    if crate::function::fract(exp) == 0.0 && exp.abs() <= SMALL_INT_POW {
        let mut n = exp.abs() as u32;
        let mut acc = 1.0;
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc *= b;
            }
            b *= b;
            n >>= 1;
        }
        return if exp < 0.0 { 1.0 / acc } else { acc };
    }
    libm::pow(base, exp)
}

fn apply(f: Func, x: f64) -> f64 {
    match f {
        Func::Sin => libm::sin(x),
        Func::Cos => libm::cos(x),
        Func::Tan => libm::tan(x),
        Func::Exp => libm::exp(x),
        Func::Ln => libm::log(x),
        Func::Sqrt => libm::sqrt(x),
        Func::Abs => x.abs(),
        Func::Sign => {
            if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                f64::NAN
            }
        }
    }
}

fn domain_detail(f: Func, x: f64) -> Option<&'static str> {
    match f {
        Func::Ln if !(x > 0.0) => Some("logarithm of a non-positive number"),
        Func::Sqrt if x < 0.0 => Some("square root of a negative number"),
        Func::Sign if x == 0.0 => Some("derivative of abs at zero"),
        _ => None,
    }
}

/// `f(x)` when `x` is inside the domain of `f` and the result is finite.
pub(crate) fn apply_checked(f: Func, x: f64) -> Option<f64> {
    if domain_detail(f, x).is_some() {
        return None;
    }
    let v = apply(f, x);
    v.is_finite().then_some(v)
}

fn domain(node: &Expr, detail: &'static str) -> Error {
    Error::Domain { node: node.to_string(), detail }
}

impl Expr {
    /// Evaluates at `x`, reporting domain violations with the offending node.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Const(c) => c.value(),
            Expr::Var => x,
            Expr::Coord(_) => return Err(domain(self, "a coordinate needs a point to evaluate at")),
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let num = a.eval(x)?;
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(domain(self, "division by zero"));
                }
                num / den
            }
            Expr::Pow(a, b) => {
                let base = a.eval(x)?;
                let exp = b.eval(x)?;
                if base == 0.0 && exp < 0.0 {
                    return Err(domain(self, "zero raised to a negative power"));
                }
                if base < 0.0 && crate::function::fract(exp) != 0.0 {
                    return Err(domain(self, "negative base with a non-integer exponent"));
                }
                pow_value(base, exp)
            }
            Expr::Call(f, a) => {
                let arg = a.eval(x)?;
                if let Some(detail) = domain_detail(*f, arg) {
                    return Err(domain(self, detail));
                }
                apply(*f, arg)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain(self, "non-finite value"))
        }
    }

    /// Compiles to a postfix program for repeated evaluation.
    pub fn compile(&self) -> Program {
        let mut ops = Vec::with_capacity(self.size());
        emit(self, &mut ops);
        let depth = max_depth(&ops);
        Program { ops, depth }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Push(f64),
    Var,
    Coord(u8),
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Square,
    Call(Func),
}

fn emit(e: &Expr, ops: &mut Vec<Op>) {
    match e {
        Expr::Num(v) => ops.push(Op::Push(*v)),
        Expr::Const(c) => ops.push(Op::Push(c.value())),
        Expr::Var => ops.push(Op::Var),
        Expr::Coord(i) => ops.push(Op::Coord(*i)),
        Expr::Neg(a) => {
            emit(a, ops);
            ops.push(Op::Neg);
        }
        Expr::Call(f, a) => {
            emit(a, ops);
            ops.push(Op::Call(*f));
        }
        Expr::Pow(a, b) if b.as_num() == Some(2.0) => {
            emit(a, ops);
            ops.push(Op::Square);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
            emit(a, ops);
            emit(b, ops);
            ops.push(match e {
                Expr::Add(..) => Op::Add,
                Expr::Sub(..) => Op::Sub,
                Expr::Mul(..) => Op::Mul,
                Expr::Div(..) => Op::Div,
                _ => Op::Pow,
            });
        }
    }
}

fn max_depth(ops: &[Op]) -> usize {
    let (mut depth, mut max) = (0usize, 0usize);
    for op in ops {
        match op {
            Op::Push(_) | Op::Var | Op::Coord(_) => depth += 1,
            Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Pow => depth -= 1,
            Op::Neg | Op::Square | Op::Call(_) => {}
        }
        max = max.max(depth);
    }
    max
}

const INLINE_STACK: usize = 32;

/// Postfix form of an [`Expr`]. Evaluation never fails: domain violations
/// produce `NaN` or infinities, which callers treat as failures.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    ops: Vec<Op>,
    depth: usize,
}

impl Program {
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with(x, &[f64::NAN; 3])
    }

    /// Evaluates a three-coordinate program at `p`.
    pub fn eval_point(&self, p: &[f64; 3]) -> f64 {
        self.eval_with(f64::NAN, p)
    }

    fn eval_with(&self, x: f64, p: &[f64; 3]) -> f64 {
        if self.depth <= INLINE_STACK {
            let mut stack = [0.0; INLINE_STACK];
            run(&self.ops, x, p, &mut stack)
        } else {
            let mut stack = alloc::vec![0.0; self.depth];
            run(&self.ops, x, p, &mut stack)
        }
    }
}

fn run(ops: &[Op], x: f64, p: &[f64; 3], stack: &mut [f64]) -> f64 {
    let mut sp = 0;
    for op in ops {
        match *op {
            Op::Push(v) => {
                stack[sp] = v;
                sp += 1;
            }
            Op::Var => {
                stack[sp] = x;
                sp += 1;
            }
            Op::Coord(i) => {
                stack[sp] = p[i as usize];
                sp += 1;
            }
            Op::Neg => stack[sp - 1] = -stack[sp - 1],
            Op::Square => stack[sp - 1] *= stack[sp - 1],
            Op::Call(f) => stack[sp - 1] = apply(f, stack[sp - 1]),
            Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Pow => {
                sp -= 1;
                let b = stack[sp];
                let a = stack[sp - 1];
                stack[sp - 1] = match op {
                    Op::Add => a + b,
                    Op::Sub => a - b,
                    Op::Mul => a * b,
                    Op::Div => a / b,
                    _ => {
                        if a < 0.0 && crate::function::fract(b) != 0.0 {
                            f64::NAN
                        } else {
                            pow_value(a, b)
                        }
                    }
                };
            }
        }
    }
    stack[0]
}
