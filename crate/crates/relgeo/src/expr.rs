//! Closed-form scalar expressions in the surface parameters.
//!
//! The text grammar accepted by [`Expr::parse`] (used by surface catalogs and
//! the CLI):
//!
//! ```text
//! expr    := term { ("+" | "-") term }
//! term    := unary { ("*" | "/") unary }
//! unary   := "-" unary | power
//! power   := atom [ "^" exponent ]          exponent: a real literal, or a
//!                                           parenthesized signed literal
//! atom    := number | "u1" | "u2" | "pi" | name | func "(" expr ")"
//!          | "(" expr ")"
//! func    := sin | cos | exp | ln | sqrt | abs
//! ```
//!
//! Any other identifier is a named constant, bound at evaluation time (the
//! CLI binds them from repeated `--param name=value` flags). Evaluating an
//! expression at [`Jet2`] arguments yields a jet of the same order, so every
//! derivative of a parsed expression is available without symbolic work.

use std::collections::BTreeMap;
use std::fmt;

use crate::jet::{Axis, Jet2};
use crate::{Error, Result};

/// Named-constant bindings for expression evaluation.
pub type Bindings = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Param(Axis),
    Const(f64),
    Named(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Power with a fixed real exponent.
    Pow(Box<Expr>, f64),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Sqrt(Box<Expr>),
    Abs(Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!(
                "unexpected input at byte {} of `{src}`",
                p.pos
            )));
        }
        Ok(e)
    }

    /// Evaluate at jet arguments. `u1` and `u2` should have equal orders; the
    /// result is exact to the smaller of the two.
    pub fn eval_jet(&self, u1: &Jet2, u2: &Jet2, params: &Bindings) -> Result<Jet2> {
        let order = u1.order().min(u2.order());
        match self {
            Expr::Param(Axis::U1) => Ok(u1.clone()),
            Expr::Param(Axis::U2) => Ok(u2.clone()),
            Expr::Const(c) => Ok(Jet2::constant(*c, order)),
            Expr::Named(name) => params
                .get(name)
                .map(|v| Jet2::constant(*v, order))
                .ok_or_else(|| Error::UnknownConstant(name.clone())),
            Expr::Add(a, b) => Ok(a.eval_jet(u1, u2, params)? + b.eval_jet(u1, u2, params)?),
            Expr::Sub(a, b) => Ok(a.eval_jet(u1, u2, params)? - b.eval_jet(u1, u2, params)?),
            Expr::Mul(a, b) => Ok(a.eval_jet(u1, u2, params)? * b.eval_jet(u1, u2, params)?),
            Expr::Div(a, b) => a
                .eval_jet(u1, u2, params)?
                .div(&b.eval_jet(u1, u2, params)?),
            Expr::Pow(a, p) => a.eval_jet(u1, u2, params)?.powf(*p),
            Expr::Sin(a) => Ok(a.eval_jet(u1, u2, params)?.sin()),
            Expr::Cos(a) => Ok(a.eval_jet(u1, u2, params)?.cos()),
            Expr::Exp(a) => Ok(a.eval_jet(u1, u2, params)?.exp()),
            Expr::Ln(a) => a.eval_jet(u1, u2, params)?.ln(),
            Expr::Sqrt(a) => a.eval_jet(u1, u2, params)?.sqrt(),
            Expr::Abs(a) => a.eval_jet(u1, u2, params)?.abs(),
            Expr::Neg(a) => Ok(-a.eval_jet(u1, u2, params)?),
        }
    }

    /// Plain scalar evaluation. Deliberately independent of the jet path so
    /// finite-difference oracles can cross-check jet coefficients against it.
    pub fn eval(&self, u1: f64, u2: f64, params: &Bindings) -> Result<f64> {
        match self {
            Expr::Param(Axis::U1) => Ok(u1),
            Expr::Param(Axis::U2) => Ok(u2),
            Expr::Const(c) => Ok(*c),
            Expr::Named(name) => params
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownConstant(name.clone())),
            Expr::Add(a, b) => Ok(a.eval(u1, u2, params)? + b.eval(u1, u2, params)?),
            Expr::Sub(a, b) => Ok(a.eval(u1, u2, params)? - b.eval(u1, u2, params)?),
            Expr::Mul(a, b) => Ok(a.eval(u1, u2, params)? * b.eval(u1, u2, params)?),
            Expr::Div(a, b) => {
                let d = b.eval(u1, u2, params)?;
                if d == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(a.eval(u1, u2, params)? / d)
            }
            Expr::Pow(a, p) => {
                let v = a.eval(u1, u2, params)?;
                if p.fract() == 0.0 {
                    Ok(v.powi(*p as i32))
                } else if v <= 0.0 {
                    Err(Error::Domain {
                        func: "powf",
                        value: v,
                    })
                } else {
                    Ok(v.powf(*p))
                }
            }
            Expr::Sin(a) => Ok(a.eval(u1, u2, params)?.sin()),
            Expr::Cos(a) => Ok(a.eval(u1, u2, params)?.cos()),
            Expr::Exp(a) => Ok(a.eval(u1, u2, params)?.exp()),
            Expr::Ln(a) => {
                let v = a.eval(u1, u2, params)?;
                if v <= 0.0 {
                    return Err(Error::Domain {
                        func: "ln",
                        value: v,
                    });
                }
                Ok(v.ln())
            }
            Expr::Sqrt(a) => {
                let v = a.eval(u1, u2, params)?;
                if v <= 0.0 {
                    return Err(Error::Domain {
                        func: "sqrt",
                        value: v,
                    });
                }
                Ok(v.sqrt())
            }
            Expr::Abs(a) => Ok(a.eval(u1, u2, params)?.abs()),
            Expr::Neg(a) => Ok(-a.eval(u1, u2, params)?),
        }
    }

    /// Convenience: evaluate with jets seeded as the surface parameters.
    pub fn eval_at(&self, u: (f64, f64), order: usize, params: &Bindings) -> Result<Jet2> {
        let u1 = Jet2::variable(Axis::U1, u.0, order);
        let u2 = Jet2::variable(Axis::U2, u.1, order);
        self.eval_jet(&u1, &u2, params)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Param(Axis::U1) => write!(f, "u1"),
            Expr::Param(Axis::U2) => write!(f, "u2"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Named(n) => write!(f, "{n}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, p) => write!(f, "({a}^{p})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected `{}` at byte {}",
                c as char, self.pos
            )))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat(b'+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat(b'-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat(b'*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let p = self.exponent()?;
            Ok(Expr::Pow(Box::new(base), p))
        } else {
            Ok(base)
        }
    }

    // Exponents are literal reals: `x^2`, `x^-0.5`, `x^(-1.5)`.
    fn exponent(&mut self) -> Result<f64> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.number()?;
            self.expect(b')')?;
            Ok(if neg { -n } else { n })
        } else {
            let neg = self.eat(b'-');
            let n = self.number()?;
            Ok(if neg { -n } else { n })
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Expr::Const(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                match name.as_str() {
                    "u1" => Ok(Expr::Param(Axis::U1)),
                    "u2" => Ok(Expr::Param(Axis::U2)),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "sin" | "cos" | "exp" | "ln" | "sqrt" | "abs" => {
                        self.expect(b'(')?;
                        let arg = Box::new(self.expr()?);
                        self.expect(b')')?;
                        Ok(match name.as_str() {
                            "sin" => Expr::Sin(arg),
                            "cos" => Expr::Cos(arg),
                            "exp" => Expr::Exp(arg),
                            "ln" => Expr::Ln(arg),
                            "sqrt" => Expr::Sqrt(arg),
                            _ => Expr::Abs(arg),
                        })
                    }
                    _ => Ok(Expr::Named(name)),
                }
            }
            other => Err(Error::Parse(format!(
                "expected an atom at byte {}, found {:?}",
                self.pos,
                other.map(|c| c as char)
            ))),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // Scientific notation: 1e-3, 2.5E+4.
        if self.pos < self.src.len()
            && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E')
            && self.pos > start
        {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len()
                && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number `{text}` at byte {start}")))
    }
}
