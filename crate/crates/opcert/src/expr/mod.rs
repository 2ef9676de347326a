//! A small closed-form expression language for scalar fields u(x, y).
//!
//! Grammar (EBNF, documented in the repository README):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' integer)*
//! atom     := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
//! func     := 'sin' | 'cos' | 'exp'
//! number   := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! integer  := digits
//! ```
//!
//! Binary `+ - * /` are left-associative; `^` takes a bare nonnegative
//! integer literal and binds tighter than unary minus, which binds tighter
//! than `*` and `/`. Powers are expanded by repeated multiplication, so the
//! language is total on the plane except at division poles.

mod parser;

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::jet::{Jet1, Jet2};

pub use parser::parse;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VarName {
    X,
    Y,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }
}

/// Expression tree. Numeric literals are finite and nonnegative by
/// construction (the parser and [`Expr::num`] put signs into [`Expr::Neg`]
/// nodes), which keeps pretty-print/re-parse round trips structural.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(VarName),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Literal constructor; negative values become `Neg` of a nonnegative
    /// literal so the canonical-form invariant holds.
    pub fn num(v: f64) -> Expr {
        if v.is_sign_negative() {
            Expr::Neg(Box::new(Expr::Num(-v)))
        } else {
            Expr::Num(v)
        }
    }

    pub fn var_x() -> Expr {
        Expr::Var(VarName::X)
    }

    pub fn var_y() -> Expr {
        Expr::Var(VarName::Y)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: u32) -> Expr {
        Expr::Pow(Box::new(a), n)
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// Evaluate with exact first and second derivatives at `p`.
    pub fn eval_jet(&self, p: Vec2) -> Result<Jet2> {
        let jet = match self {
            Expr::Num(v) => Jet2::constant(*v),
            Expr::Var(VarName::X) => Jet2::var_x(p.x),
            Expr::Var(VarName::Y) => Jet2::var_y(p.y),
            Expr::Neg(a) => -a.eval_jet(p)?,
            Expr::Add(a, b) => a.eval_jet(p)? + b.eval_jet(p)?,
            Expr::Sub(a, b) => a.eval_jet(p)? - b.eval_jet(p)?,
            Expr::Mul(a, b) => a.eval_jet(p)? * b.eval_jet(p)?,
            Expr::Div(a, b) => {
                let num = a.eval_jet(p)?;
                let den = b.eval_jet(p)?;
                if den.v == 0.0 {
                    return Err(self.domain_error("division by zero"));
                }
                num / den
            }
            Expr::Pow(a, n) => a.eval_jet(p)?.powi(*n),
            Expr::Call(Func::Sin, a) => a.eval_jet(p)?.sin(),
            Expr::Call(Func::Cos, a) => a.eval_jet(p)?.cos(),
            Expr::Call(Func::Exp, a) => a.eval_jet(p)?.exp(),
        };
        if !jet.is_finite() {
            return Err(self.domain_error("non-finite result"));
        }
        Ok(jet)
    }

    /// Value and gradient only, skipping the curvature rows; performs the
    /// same f64 operations as the corresponding channels of
    /// [`Expr::eval_jet`], so the two agree exactly.
    pub fn eval_grad(&self, p: Vec2) -> Result<Jet1> {
        let jet = match self {
            Expr::Num(v) => Jet1::constant(*v),
            Expr::Var(VarName::X) => Jet1::var_x(p.x),
            Expr::Var(VarName::Y) => Jet1::var_y(p.y),
            Expr::Neg(a) => -a.eval_grad(p)?,
            Expr::Add(a, b) => a.eval_grad(p)? + b.eval_grad(p)?,
            Expr::Sub(a, b) => a.eval_grad(p)? - b.eval_grad(p)?,
            Expr::Mul(a, b) => a.eval_grad(p)? * b.eval_grad(p)?,
            Expr::Div(a, b) => {
                let num = a.eval_grad(p)?;
                let den = b.eval_grad(p)?;
                if den.v == 0.0 {
                    return Err(self.domain_error("division by zero"));
                }
                num / den
            }
            Expr::Pow(a, n) => a.eval_grad(p)?.powi(*n),
            Expr::Call(Func::Sin, a) => a.eval_grad(p)?.sin(),
            Expr::Call(Func::Cos, a) => a.eval_grad(p)?.cos(),
            Expr::Call(Func::Exp, a) => a.eval_grad(p)?.exp(),
        };
        if !jet.is_finite() {
            return Err(self.domain_error("non-finite result"));
        }
        Ok(jet)
    }

    /// Value-only fast path; performs the same f64 operations as the value
    /// channel of [`Expr::eval_jet`], so the two agree exactly.
    pub fn eval(&self, p: Vec2) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var(VarName::X) => p.x,
            Expr::Var(VarName::Y) => p.y,
            Expr::Neg(a) => -a.eval(p)?,
            Expr::Add(a, b) => a.eval(p)? + b.eval(p)?,
            Expr::Sub(a, b) => a.eval(p)? - b.eval(p)?,
            Expr::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Expr::Div(a, b) => {
                let num = a.eval(p)?;
                let den = b.eval(p)?;
                if den == 0.0 {
                    return Err(self.domain_error("division by zero"));
                }
                num / den
            }
            Expr::Pow(a, n) => {
                let base = a.eval(p)?;
                let mut acc = 1.0;
                for _ in 0..*n {
                    acc *= base;
                }
                acc
            }
            Expr::Call(Func::Sin, a) => a.eval(p)?.sin(),
            Expr::Call(Func::Cos, a) => a.eval(p)?.cos(),
            Expr::Call(Func::Exp, a) => a.eval(p)?.exp(),
        };
        if !v.is_finite() {
            return Err(self.domain_error("non-finite result"));
        }
        Ok(v)
    }

    fn domain_error(&self, message: &str) -> Error {
        Error::Domain {
            subexpr: self.to_string(),
            message: message.to_string(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut std::fmt::Formatter<'_>, min: u8) -> std::fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(VarName::X) => write!(f, "x"),
            Expr::Var(VarName::Y) => write!(f, "y"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 3)
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)
            }
            Expr::Pow(a, n) => {
                a.fmt_prec(f, 4)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

/// Precedence-aware pretty-printer; `parse(e.to_string())` returns a
/// structurally identical tree.
impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2, PI};

    fn p(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn jet_of_sine_product_at_origin() {
        let e = parse("sin(x)*sin(y)").unwrap();
        let j = e.eval_jet(p(0.0, 0.0)).unwrap();
        assert_eq!(
            (j.v, j.gx, j.gy, j.hxx, j.hxy, j.hyy),
            (0.0, 0.0, 0.0, 0.0, 1.0, 0.0)
        );
    }

    #[test]
    fn jet_of_half_square() {
        let e = parse("x^2/2").unwrap();
        let j = e.eval_jet(p(3.0, 7.0)).unwrap();
        assert_eq!((j.v, j.gx, j.gy), (4.5, 3.0, 0.0));
        assert_eq!((j.hxx, j.hxy, j.hyy), (1.0, 0.0, 0.0));
    }

    #[test]
    fn division_pole_is_a_domain_error() {
        let e = parse("1/x").unwrap();
        let err = e.eval_jet(p(0.0, 0.0)).unwrap_err();
        match err {
            Error::Domain { subexpr, message } => {
                assert_eq!(subexpr, "1/x");
                assert!(message.contains("division by zero"));
            }
            other => panic!("expected domain error, got {other:?}"),
        }
        assert!(e.eval(p(0.0, 0.0)).is_err());
    }

    #[test]
    fn value_fast_path_matches_examples() {
        let fp = parse("x^2/2 + sin(x)*sin(y) - y^2/2").unwrap();
        assert_eq!(fp.eval(p(0.0, 0.0)).unwrap(), 0.0);
        let e = parse("sin(x)*sin(y)").unwrap();
        assert_eq!(e.eval(p(FRAC_PI_2, FRAC_PI_2)).unwrap(), 1.0);
        let e = parse("exp(x)").unwrap();
        assert_eq!(e.eval(p(1.0, 0.0)).unwrap(), E);
    }

    #[test]
    fn value_agrees_with_jet_value_exactly() {
        let e = parse("x^3*sin(y) - exp(x*y)/(2 + cos(x)) + y^4").unwrap();
        for &(x, y) in &[(0.3, -1.2), (PI, 0.1), (-2.0, 2.0), (0.0, 0.0)] {
            let q = p(x, y);
            assert_eq!(e.eval(q).unwrap(), e.eval_jet(q).unwrap().v);
        }
    }

    #[test]
    fn num_constructor_canonicalizes_sign() {
        assert_eq!(Expr::num(-0.5), Expr::neg(Expr::Num(0.5)));
        assert_eq!(Expr::num(0.5), Expr::Num(0.5));
    }

    #[test]
    fn pretty_print_uses_minimal_parens() {
        let cases = [
            "x + y*x",
            "(x + y)*x",
            "-(x*y)",
            "-x^2",
            "(-x)^2",
            "x - (y - x)",
            "x/(y*y)",
            "sin(x)^2",
            "x^2^3",
        ];
        for src in cases {
            let e = parse(src).unwrap();
            assert_eq!(e.to_string(), src, "case {src}");
            assert_eq!(parse(&e.to_string()).unwrap(), e, "round trip {src}");
        }
    }
}
