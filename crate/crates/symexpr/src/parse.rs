//! Recursive-descent parser for scalar (and jet) expressions.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'i' | 'l' integer | 'x' integer | '(' expr ')'
//! ```
//! `l1..lN` are the dynamical coordinates; `x1..xN` are only accepted by
//! evaluators that know about group coordinates.

use crate::scalar::Scalar;
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("variable {name} out of range at position {pos}")]
    VariableOutOfRange { pos: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } => *pos,
            ParseError::DivisionByZero { pos } => *pos,
            ParseError::VariableOutOfRange { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Lambda,
    Group,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    I,
    Var { kind: VarKind, index: usize, pos: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

/// A ring the parsed expression can be evaluated into.
pub trait ExprRing: Sized + Clone {
    fn from_int(n: &BigInt) -> Self;
    fn imag() -> Self;
    /// `index` is one-based as written.
    fn var(kind: VarKind, index: usize, pos: usize) -> Result<Self, ParseError>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` when the divisor is not invertible.
    fn div(&self, o: &Self) -> Option<Self>;
    fn one() -> Self;
}

impl Expr {
    pub fn eval<R: ExprRing>(&self) -> Result<R, ParseError> {
        Ok(match self {
            Expr::Int(n) => R::from_int(n),
            Expr::I => R::imag(),
            Expr::Var { kind, index, pos } => R::var(*kind, *index, *pos)?,
            Expr::Neg(a) => a.eval::<R>()?.neg(),
            Expr::Add(a, b) => a.eval::<R>()?.add(&b.eval::<R>()?),
            Expr::Sub(a, b) => a.eval::<R>()?.sub(&b.eval::<R>()?),
            Expr::Mul(a, b) => a.eval::<R>()?.mul(&b.eval::<R>()?),
            Expr::Div(a, b, pos) => {
                a.eval::<R>()?.div(&b.eval::<R>()?).ok_or(ParseError::DivisionByZero { pos: *pos })?
            }
            Expr::Pow(a, e) => {
                let base = a.eval::<R>()?;
                let mut acc = R::one();
                for _ in 0..*e {
                    acc = acc.mul(&base);
                }
                acc
            }
        })
    }

    /// Largest variable index of the given kind (one-based), 0 if none.
    pub fn max_var(&self, k: VarKind) -> usize {
        match self {
            Expr::Int(_) | Expr::I => 0,
            Expr::Var { kind, index, .. } => {
                if *kind == k {
                    *index
                } else {
                    0
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_var(k),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                a.max_var(k).max(b.max_var(k))
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos, msg: msg.to_string() })
    }
    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse::<BigInt>().unwrap())
    }
    fn small_integer(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let n = self.integer()?;
        usize::try_from(n).map_err(|_| ParseError::Syntax { pos: start, msg: "integer too large".into() })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.small_integer()?;
            let e = u32::try_from(e).ok().filter(|e| *e <= 255).ok_or(ParseError::Syntax {
                pos: at,
                msg: "exponent too large".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'i') => {
                let at = self.pos;
                self.pos += 1;
                if self.s.get(self.pos).map(|c| c.is_ascii_alphanumeric()).unwrap_or(false) {
                    self.pos = at;
                    return self.err("unknown identifier");
                }
                Ok(Expr::I)
            }
            Some(c @ (b'l' | b'x')) => {
                let at = self.pos;
                self.pos += 1;
                if !self.s.get(self.pos).map(|c| c.is_ascii_digit()).unwrap_or(false) {
                    self.pos = at;
                    return self.err("expected variable index");
                }
                let index = self.small_integer()?;
                let kind = if c == b'l' { VarKind::Lambda } else { VarKind::Group };
                Ok(Expr::Var { kind, index, pos: at })
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses text into an expression tree without evaluating it.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl ExprRing for Scalar {
    fn from_int(n: &BigInt) -> Self {
        Scalar::from_q(crate::rational::Q::from_bigint(n.clone()))
    }
    fn imag() -> Self {
        Scalar::i()
    }
    fn var(kind: VarKind, index: usize, pos: usize) -> Result<Self, ParseError> {
        match kind {
            VarKind::Lambda if index >= 1 && index <= crate::poly::MAX_VARS => Ok(Scalar::var(index - 1)),
            VarKind::Lambda => Err(ParseError::VariableOutOfRange { pos, name: format!("l{}", index) }),
            VarKind::Group => Err(ParseError::VariableOutOfRange { pos, name: format!("x{}", index) }),
        }
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn one() -> Self {
        Scalar::one()
    }
}

/// Parses a scalar in `num_vars` dynamical variables `l1..l<num_vars>`.
pub fn parse_scalar(text: &str, num_vars: usize) -> Result<Scalar, ParseError> {
    let e = parse_expr(text)?;
    check_vars(&e, num_vars, 0)?;
    e.eval::<Scalar>()
}

/// Rejects variables beyond the allowed ranges, reporting the first offender.
pub fn check_vars(e: &Expr, num_lambda: usize, num_group: usize) -> Result<(), ParseError> {
    match e {
        Expr::Int(_) | Expr::I => Ok(()),
        Expr::Var { kind, index, pos } => {
            let (lim, c) = match kind {
                VarKind::Lambda => (num_lambda, 'l'),
                VarKind::Group => (num_group, 'x'),
            };
            if *index == 0 || *index > lim {
                Err(ParseError::VariableOutOfRange { pos: *pos, name: format!("{}{}", c, index) })
            } else {
                Ok(())
            }
        }
        Expr::Neg(a) | Expr::Pow(a, _) => check_vars(a, num_lambda, num_group),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            check_vars(a, num_lambda, num_group)?;
            check_vars(b, num_lambda, num_group)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_positions() {
        assert_eq!(parse_scalar("1 + * 2", 1).unwrap_err().position(), 4);
        assert_eq!(parse_scalar("1/(l1-l1)", 1).unwrap_err(), ParseError::DivisionByZero { pos: 1 });
        assert_eq!(
            parse_scalar("l2", 1).unwrap_err(),
            ParseError::VariableOutOfRange { pos: 0, name: "l2".into() }
        );
        assert!(matches!(parse_scalar("(1", 1), Err(ParseError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn imaginary_unit() {
        let s = parse_scalar("i*i", 0).unwrap();
        assert_eq!(s, Scalar::from_i64(-1));
    }
}
