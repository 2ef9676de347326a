//! Recursive-descent parser with byte-offset diagnostics.

use super::{Expr, Func};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num { value: f64, integral: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number `{value}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            let start = lx.pos;
            let Some(&c) = lx.src.get(lx.pos) else {
                out.push((Tok::Eof, start));
                return Ok(out);
            };
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' => lx.number(start)?,
                c if c.is_ascii_alphabetic() => lx.ident(start),
                c => {
                    return Err(Error::Syntax {
                        offset: start,
                        message: format!("unexpected character `{}`", c as char),
                    })
                }
            };
            out.push((tok, start));
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn take_digits(&mut self) -> bool {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn number(&mut self, start: usize) -> Result<Tok> {
        self.take_digits();
        let mut integral = true;
        if self.src.get(self.pos) == Some(&b'.') {
            integral = false;
            self.pos += 1;
            if !self.take_digits() {
                return Err(Error::Syntax {
                    offset: self.pos,
                    message: "expected digits after decimal point".into(),
                });
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            integral = false;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !self.take_digits() {
                return Err(Error::Syntax {
                    offset: self.pos,
                    message: "expected digits in exponent".into(),
                });
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("invalid numeric literal `{text}`"),
        })?;
        Ok(Tok::Num { value, integral })
    }

    fn ident(&mut self, start: usize) -> Tok {
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        Tok::Ident(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string())
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

/// Parse an expression; errors carry the byte offset of the offending token.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, pos: 0 };
    let expr = p.expr()?;
    let (tok, offset) = p.peek();
    if *tok != Tok::Eof {
        return Err(Error::Syntax {
            offset,
            message: format!("unexpected trailing input: {}", tok.describe()),
        });
    }
    Ok(expr)
}

impl Parser {
    fn peek(&self) -> (&Tok, usize) {
        let (tok, off) = &self.toks[self.pos];
        (tok, *off)
    }

    fn bump(&mut self) -> (Tok, usize) {
        let entry = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        entry
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().0 {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek().0 == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while *self.peek().0 == Tok::Caret {
            self.bump();
            base = Expr::pow(base, self.exponent()?);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num { value, integral: true } if value >= 0.0 && value <= u32::MAX as f64 => {
                Ok(value as u32)
            }
            Tok::Num { .. } | Tok::Minus => Err(Error::NonIntegerExponent { offset }),
            other => Err(Error::Syntax {
                offset,
                message: format!("expected nonnegative integer exponent, found {}", other.describe()),
            }),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num { value, .. } => Ok(Expr::Num(value)),
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::var_x()),
                "y" => Ok(Expr::var_y()),
                "sin" => self.call(Func::Sin),
                "cos" => self.call(Func::Cos),
                "exp" => self.call(Func::Exp),
                _ => Err(Error::UnknownIdentifier { offset, name }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            other => Err(Error::Syntax {
                offset,
                message: format!("expected an expression, found {}", other.describe()),
            }),
        }
    }

    fn call(&mut self, func: Func) -> Result<Expr> {
        let (tok, offset) = self.bump();
        if tok != Tok::LParen {
            return Err(Error::Syntax {
                offset,
                message: format!("expected `(` after `{}`, found {}", func.name(), tok.describe()),
            });
        }
        let arg = self.expr()?;
        self.expect_rparen()?;
        Ok(Expr::call(func, arg))
    }

    fn expect_rparen(&mut self) -> Result<()> {
        let (tok, offset) = self.bump();
        if tok != Tok::RParen {
            return Err(Error::Syntax {
                offset,
                message: format!("expected `)`, found {}", tok.describe()),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_field_expression_parses() {
        let e = parse("x^2/2 + sin(x)*sin(y) - y^2/2").unwrap();
        // ((x^2/2) + (sin x * sin y)) - (y^2/2)
        let half_sq = |v: Expr| Expr::div(Expr::pow(v, 2), Expr::Num(2.0));
        let expected = Expr::sub(
            Expr::add(
                half_sq(Expr::var_x()),
                Expr::mul(
                    Expr::call(Func::Sin, Expr::var_x()),
                    Expr::call(Func::Sin, Expr::var_y()),
                ),
            ),
            half_sq(Expr::var_y()),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn malformed_input_reports_byte_offset() {
        match parse("x +* y").unwrap_err() {
            Error::Syntax { offset, .. } => assert_eq!(offset, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        match parse("x + foo(y)").unwrap_err() {
            Error::UnknownIdentifier { offset, name } => {
                assert_eq!(offset, 4);
                assert_eq!(name, "foo");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exponent_must_be_integer_literal() {
        assert!(matches!(
            parse("x^2.5").unwrap_err(),
            Error::NonIntegerExponent { offset: 2 }
        ));
        assert!(matches!(
            parse("x^-1").unwrap_err(),
            Error::NonIntegerExponent { offset: 2 }
        ));
        assert!(matches!(parse("x^y").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(
            parse("x^1e1").unwrap_err(),
            Error::NonIntegerExponent { offset: 2 }
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ binds tighter than unary minus, which binds tighter than *
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::neg(Expr::pow(Expr::var_x(), 2))
        );
        assert_eq!(
            parse("-x*y").unwrap(),
            Expr::mul(Expr::neg(Expr::var_x()), Expr::var_y())
        );
        // left associativity
        assert_eq!(
            parse("x - y - x").unwrap(),
            Expr::sub(Expr::sub(Expr::var_x(), Expr::var_y()), Expr::var_x())
        );
        assert_eq!(
            parse("x/y/x").unwrap(),
            Expr::div(Expr::div(Expr::var_x(), Expr::var_y()), Expr::var_x())
        );
        // chained unary minus
        assert_eq!(
            parse("--x").unwrap(),
            Expr::neg(Expr::neg(Expr::var_x()))
        );
    }

    #[test]
    fn numeric_literal_forms() {
        assert_eq!(parse("1.5e-3").unwrap(), Expr::Num(1.5e-3));
        assert_eq!(parse("2E4").unwrap(), Expr::Num(2e4));
        assert_eq!(parse("0.25").unwrap(), Expr::Num(0.25));
        assert!(matches!(parse("1.").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse(".5").unwrap_err(), Error::Syntax { .. }));
    }

    #[test]
    fn structural_failures() {
        assert!(parse("").is_err());
        assert!(parse("(x + y").is_err());
        assert!(parse("sin x").is_err());
        assert!(parse("x y").is_err());
        assert!(parse("x @ y").is_err());
    }
}
