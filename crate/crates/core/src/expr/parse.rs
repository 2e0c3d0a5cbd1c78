use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;

use super::{Expr, Func, NamedConst};
use crate::error::{Error, Result};

const VARIABLES: [&str; 5] = ["x", "t", "s", "r", "theta"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(u8),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the next token and its starting offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        match c {
            b'0'..=b'9' | b'.' => self.number(start).map(|n| (Tok::Num(n), start)),
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Ok((Tok::Op(c), start))
            }
            b'(' => {
                self.pos += 1;
                Ok((Tok::LParen, start))
            }
            b')' => {
                self.pos += 1;
                Ok((Tok::RParen, start))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok((Tok::Ident(self.src[start..self.pos].to_owned()), start))
            }
            _ => Err(Error::Syntax {
                offset: start,
                expected: "a number, identifier, operator or parenthesis".into(),
            }),
        }
    }

    fn number(&mut self, start: usize) -> Result<f64> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let from = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - from
        };
        let mut pos = start;
        let mut n = digits(&mut pos);
        if pos < bytes.len() && bytes[pos] == b'.' {
            pos += 1;
            n += digits(&mut pos);
        }
        if n == 0 {
            return Err(Error::Syntax { offset: start, expected: "digits".into() });
        }
        // An exponent only when digits follow, so `2*e` style input still
        // reaches the constant.
        if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
            let mut p = pos + 1;
            if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                p += 1;
            }
            if digits(&mut p) > 0 {
                pos = p;
            }
        }
        self.pos = pos;
        self.src[start..pos].parse::<f64>().map_err(|_| Error::Syntax {
            offset: start,
            expected: "a valid number".into(),
        })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
    variable: Option<&'static str>,
    /// Read `x`, `y`, `z` as the coordinates of a point.
    point: bool,
}

/// Parses a profile expression.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, false)
}

/// Parses an expression in the coordinates `x`, `y`, `z` of a point.
pub fn parse_point(text: &str) -> Result<Expr> {
    parse_with(text, true)
}

fn parse_with(text: &str, point: bool) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, expected: "an expression".into() });
    }
    let mut p = Parser { lex: Lexer { src: text, pos: 0 }, tok: Tok::End, at: 0, variable: None, point };
    p.advance()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(Error::Syntax { offset: p.at, expected: "an operator or end of input".into() });
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<()> {
        let (tok, at) = self.lex.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Op(b'+') => {
                    self.advance()?;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Op(b'-') => {
                    self.advance()?;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.tok {
                Tok::Op(b'*') => {
                    self.advance()?;
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Op(b'/') => {
                    self.advance()?;
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.tok {
            Tok::Op(b'-') => {
                self.advance()?;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op(b'+') => {
                self.advance()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.tok == Tok::Op(b'^') {
            self.advance()?;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.tok != Tok::RParen {
            return Err(Error::Syntax { offset: self.at, expected: "`)`".into() });
        }
        self.advance()
    }

    fn primary(&mut self) -> Result<Expr> {
        match core::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.advance()?;
                if let Some(f) = Func::from_name(&name) {
                    if self.tok != Tok::LParen {
                        return Err(Error::Syntax {
                            offset: self.at,
                            expected: format!("`(` after `{name}`"),
                        });
                    }
                    self.advance()?;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => return Ok(Expr::Const(NamedConst::Pi)),
                    "e" => return Ok(Expr::Const(NamedConst::E)),
                    _ => {}
                }
                if self.point {
                    if let Some(i) = ["x", "y", "z"].iter().position(|v| *v == name) {
                        return Ok(Expr::Coord(i as u8));
                    }
                    return Err(Error::UnknownIdentifier { offset: at, name });
                }
                if let Some(v) = VARIABLES.iter().find(|v| **v == name) {
                    match self.variable {
                        None => self.variable = Some(v),
                        Some(prev) if prev == *v => {}
                        Some(prev) => {
                            return Err(Error::Syntax {
                                offset: at,
                                expected: format!("the variable `{prev}` (one variable per expression)"),
                            })
                        }
                    }
                    return Ok(Expr::Var);
                }
                Err(Error::UnknownIdentifier { offset: at, name })
            }
            other => {
                self.tok = other;
                Err(Error::Syntax { offset: self.at, expected: "an expression".into() })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        let e = parse("sin(2*pi*x)").unwrap();
        let two_pi_x = Expr::Mul(
            Box::new(Expr::Mul(Box::new(Expr::Num(2.0)), Box::new(Expr::Const(NamedConst::Pi)))),
            Box::new(Expr::Var),
        );
        assert_eq!(e, Expr::Call(Func::Sin, Box::new(two_pi_x)));

        let e = parse("x^2 + 1").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Pow(Box::new(Expr::Var), Box::new(Expr::Num(2.0)))),
                Box::new(Expr::Num(1.0))
            )
        );
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse(" x ^ 2+1 ").unwrap(), parse("x^2+1").unwrap());
    }

    #[test]
    fn precedence_rules() {
        // power > unary minus
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var), Box::new(Expr::Num(2.0)))))
        );
        // right-associative power
        assert_eq!(
            parse("2^3^x").unwrap(),
            Expr::Pow(
                Box::new(Expr::Num(2.0)),
                Box::new(Expr::Pow(Box::new(Expr::Num(3.0)), Box::new(Expr::Var)))
            )
        );
        // unary minus binds tighter than multiplication
        assert_eq!(
            parse("-x*2").unwrap(),
            Expr::Mul(Box::new(Expr::Neg(Box::new(Expr::Var))), Box::new(Expr::Num(2.0)))
        );
    }

    #[test]
    fn unclosed_call_reports_offset() {
        match parse("sin(") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse("x + * 2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse("(x + 1") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identifiers() {
        assert!(matches!(parse("foo(x)"), Err(Error::UnknownIdentifier { offset: 0, .. })));
        assert!(matches!(parse("2*y"), Err(Error::UnknownIdentifier { offset: 2, .. })));
        assert!(matches!(parse("x + t"), Err(Error::Syntax { offset: 4, .. })));
        assert!(parse("cos(theta)").is_ok());
        assert!(matches!(parse("sin x"), Err(Error::Syntax { offset: 4, .. })));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1.5e-3").unwrap(), Expr::Num(1.5e-3));
        assert_eq!(parse(".5").unwrap(), Expr::Num(0.5));
        assert_eq!(
            parse("2*e").unwrap(),
            Expr::Mul(Box::new(Expr::Num(2.0)), Box::new(Expr::Const(NamedConst::E)))
        );
        assert!(parse("").is_err());
        assert!(parse("   ").is_err());
    }
}
