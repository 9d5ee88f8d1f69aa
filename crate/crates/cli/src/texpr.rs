//! Enveloping-algebra expressions such as `1 + hbar*h^2` or
//! `1 + hbar*(l1*h + e1*e2/l1)`.
//!
//! Identifiers are basis labels, `hbar`, `i` and `l1..l_l`; products of
//! generators are taken in the enveloping algebra, in the order written.
//! Division is allowed only by λ-functions.

use quantize::{Pbw, UTensor};
use symexpr::Scalar;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(u8),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, CliError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n = s[st..i].parse().map_err(|_| err(st, "integer too large"))?;
            out.push((st, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if b"+-*/^()".contains(&c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, "unexpected character"));
        }
    }
    Ok(out)
}

fn err(pos: usize, msg: &str) -> CliError {
    CliError::Expr { pos, msg: msg.to_string() }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    pbw: &'a Pbw,
    order: u32,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }
    fn eat(&mut self, op: u8) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }
    fn constant(&self, c: Scalar) -> UTensor {
        UTensor::one(1, self.pbw.dim(), self.order).scale(&c)
    }

    fn expr(&mut self) -> Result<UTensor, CliError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<UTensor, CliError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?, self.pbw);
            } else if self.peek() == Some(&Tok::Op(b'/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.unary()?;
                let s = lambda_only(&d, self.pbw).ok_or_else(|| err(pos, "division by a non-λ-function"))?;
                let inv = Scalar::one().checked_div(&s).ok_or_else(|| err(pos, "division by zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<UTensor, CliError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let pos = self.pos();
            let Some(Tok::Int(e)) = self.peek().cloned() else { return Err(err(pos, "expected exponent")) };
            self.at += 1;
            let mut acc = self.constant(Scalar::one());
            for _ in 0..e {
                acc = acc.mul(&base, self.pbw);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<UTensor, CliError> {
        let pos = self.pos();
        let Some(t) = self.peek().cloned() else { return Err(err(pos, "unexpected end of input")) };
        self.at += 1;
        match t {
            Tok::Int(n) => Ok(self.constant(Scalar::from_i64(n))),
            Tok::Op(b'(') => {
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(self.pos(), "expected ')'"));
                }
                Ok(e)
            }
            Tok::Op(_) => Err(err(pos, "unexpected operator")),
            Tok::Ident(name) => self.ident(&name, pos),
        }
    }

    fn ident(&self, name: &str, pos: usize) -> Result<UTensor, CliError> {
        let alg = self.pbw.algebra();
        if let Some(a) = alg.labels().iter().position(|s| s == name) {
            let mut t = UTensor::zero(1, alg.dim(), self.order);
            t.add_term(0, vec![self.pbw.generator(a)], Scalar::one());
            return Ok(t);
        }
        if name == "hbar" {
            return Ok(self.constant(Scalar::one()).shift_hbar(1).truncate(self.order));
        }
        if name == "i" {
            return Ok(self.constant(Scalar::i()));
        }
        if let Some(k) = name.strip_prefix('l').and_then(|d| d.parse::<usize>().ok()) {
            if k >= 1 && k <= alg.cartan_dim() {
                return Ok(self.constant(Scalar::var(k - 1)));
            }
        }
        Err(err(pos, &format!("unknown identifier {name}")))
    }
}

/// The λ-function a one-leg tensor equals, if it has no generators and no ℏ.
fn lambda_only(t: &UTensor, pbw: &Pbw) -> Option<Scalar> {
    let unit = pbw.unit();
    let mut out = Scalar::zero();
    for ((k, ms), c) in t.terms() {
        if *k != 0 || ms[0] != unit {
            return None;
        }
        out = c.clone();
    }
    Some(out)
}

/// Parses a one-leg element of `U𝔤[[ℏ]]`, truncated at `ℏ^order`.
pub fn parse_element(text: &str, pbw: &Pbw, order: u32) -> Result<UTensor, CliError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), pbw, order };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(err(p.pos(), "trailing input"));
    }
    Ok(e)
}
