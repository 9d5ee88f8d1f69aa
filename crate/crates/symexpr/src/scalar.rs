//! Canonical rational functions of λ¹..λˡ over ℚ(i).

use crate::poly::{Mono, Poly, MAX_VARS};
use crate::rational::{GaussRat, Q};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A reduced fraction `num/den` with `den` monic under graded-lex order.
///
/// Two scalars are equal iff their canonical forms are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }
    pub fn one() -> Scalar {
        Scalar { num: Poly::one(), den: Poly::one() }
    }
    pub fn i() -> Scalar {
        Scalar::constant(GaussRat::i())
    }
    pub fn from_i64(n: i64) -> Scalar {
        Scalar::constant(GaussRat::from_i64(n))
    }
    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::constant(GaussRat::ratio(n, d))
    }
    pub fn constant(c: GaussRat) -> Scalar {
        Scalar { num: Poly::constant(c), den: Poly::one() }
    }
    pub fn from_q(q: Q) -> Scalar {
        Scalar::constant(GaussRat::real(q))
    }
    /// The coordinate λ^{v+1} (zero-based `v`).
    pub fn var(v: usize) -> Scalar {
        assert!(v < MAX_VARS);
        Scalar { num: Poly::var(v), den: Poly::one() }
    }
    pub fn from_poly(p: Poly) -> Scalar {
        Scalar { num: p, den: Poly::one() }
    }

    /// Builds `n/d` and canonicalizes. Panics if `d` is zero.
    pub fn from_fraction(n: Poly, d: Poly) -> Scalar {
        assert!(!d.is_zero(), "zero denominator");
        if n.is_zero() {
            return Scalar::zero();
        }
        let g = n.gcd(&d);
        let (n, d) = if g.is_one() { (n, d) } else { (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap()) };
        Scalar::normalized(n, d)
    }

    fn normalized(n: Poly, d: Poly) -> Scalar {
        let lc = d.lead().1.clone();
        if lc.is_one() {
            Scalar { num: n, den: d }
        } else {
            let inv = lc.inv();
            Scalar { num: n.scale(&inv), den: d.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }
    pub fn denom(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
    pub fn constant_value(&self) -> Option<GaussRat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }
    /// True when no coefficient has an imaginary part.
    pub fn is_real(&self) -> bool {
        self.num.terms.iter().all(|t| t.1.is_real()) && self.den.terms.iter().all(|t| t.1.is_real())
    }
    /// Bitmask of the variables that occur.
    pub fn vars_mask(&self) -> u8 {
        self.num.vars_mask() | self.den.vars_mask()
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.add(&o.num), den: Poly::one() };
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            return Scalar::from_fraction(n, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            if n.is_zero() {
                return Scalar::zero();
            }
            return Scalar::normalized(n, self.den.mul(&o.den));
        }
        let q1 = self.den.div_exact(&g).unwrap();
        let q2 = o.den.div_exact(&g).unwrap();
        let n = self.num.mul(&q2).add(&o.num.mul(&q1));
        if n.is_zero() {
            return Scalar::zero();
        }
        // Any common factor of n with q1*q2*g divides g.
        let h = n.gcd(&g);
        let (n, g) = if h.is_one() { (n, g) } else { (n.div_exact(&h).unwrap(), g.div_exact(&h).unwrap()) };
        Scalar::normalized(n, q1.mul(&q2).mul(&g))
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: Poly::one() };
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1).unwrap() };
        let d2 = if g1.is_one() { o.den.clone() } else { o.den.div_exact(&g1).unwrap() };
        let n2 = if g2.is_one() { o.num.clone() } else { o.num.div_exact(&g2).unwrap() };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2).unwrap() };
        Scalar::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn scale_q(&self, q: &Q) -> Scalar {
        self.scale(&GaussRat::real(q.clone()))
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero scalar");
        Scalar::normalized(self.den.clone(), self.num.clone())
    }

    /// `None` on division by zero.
    pub fn checked_div(&self, o: &Scalar) -> Option<Scalar> {
        if o.is_zero() {
            None
        } else {
            Some(self.mul(&o.inv()))
        }
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self.checked_div(o).expect("division by zero scalar")
    }

    pub fn pow(&self, e: u32) -> Scalar {
        Scalar { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Partial derivative with respect to the zero-based variable `v`.
    pub fn diff(&self, v: usize) -> Scalar {
        if self.den.is_one() {
            return Scalar { num: self.num.diff(v), den: Poly::one() };
        }
        let dn = self.num.diff(v);
        let dd = self.den.diff(v);
        if dd.is_zero() {
            if dn.is_zero() {
                return Scalar::zero();
            }
            return Scalar::from_fraction(dn, self.den.clone());
        }
        let n = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Scalar::from_fraction(n, self.den.mul(&self.den))
    }

    /// Substitutes λ^{v+1} = `val`; `None` if the denominator vanishes.
    pub fn subst(&self, v: usize, val: &GaussRat) -> Option<Scalar> {
        let d = self.den.subst(v, val);
        if d.is_zero() {
            return None;
        }
        Some(Scalar::from_fraction(self.num.subst(v, val), d))
    }

    /// Substitutes λ^{v+1} = `val` (a scalar); `None` if the result has a zero denominator.
    pub fn subst_scalar(&self, v: usize, val: &Scalar) -> Option<Scalar> {
        // num(val)/den(val) into num and den, clearing the common power of den(val).
        let (vn, vd) = (&val.num, &val.den);
        let dn = self.num.degree_in(v).max(self.den.degree_in(v));
        let hom = |p: &Poly| {
            let mut acc = Poly::zero();
            for (m, c) in &p.terms {
                let e = m.exp(v);
                let t = vn.pow(e).mul(&vd.pow(dn - e)).mul_term(m.without(v), c);
                acc = acc.add(&t);
            }
            acc
        };
        let d = hom(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(Scalar::from_fraction(hom(&self.num), d))
    }

    /// Evaluates with all variables substituted; `None` at a pole.
    pub fn eval(&self, point: &[GaussRat]) -> Option<GaussRat> {
        let mut s = self.clone();
        for (v, x) in point.iter().enumerate() {
            s = s.subst(v, x)?;
        }
        s.constant_value()
    }

    /// Highest variable index used, plus one.
    pub fn num_vars_used(&self) -> usize {
        let m = self.vars_mask();
        if m == 0 {
            0
        } else {
            8 - m.leading_zeros() as usize
        }
    }
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (k, (m, c)) in p.terms.iter().enumerate() {
        let mut vars = Vec::new();
        for v in 0..MAX_VARS {
            let e = m.exp(v);
            if e == 1 {
                vars.push(format!("l{}", v + 1));
            } else if e > 1 {
                vars.push(format!("l{}^{}", v + 1, e));
            }
        }
        let mono = vars.join("*");
        let neg = if c.re.is_zero() {
            c.im.is_negative()
        } else {
            c.im.is_zero() && c.re.is_negative()
        };
        let mag = if neg { c.neg() } else { c.clone() };
        if k > 0 {
            write!(f, "{}", if neg { "-" } else { "+" })?;
        } else if neg {
            write!(f, "-")?;
        }
        if mono.is_empty() {
            write!(f, "{}", mag)?;
        } else if mag.is_one() {
            write!(f, "{}", mono)?;
        } else {
            write!(f, "{}*{}", mag, mono)?;
        }
    }
    Ok(())
}

/// Canonical printer in the parser's grammar.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return fmt_poly(&self.num, f);
        }
        let simple_num = self.num.terms.len() == 1;
        if simple_num {
            fmt_poly(&self.num, f)?;
        } else {
            write!(f, "(")?;
            fmt_poly(&self.num, f)?;
            write!(f, ")")?;
        }
        write!(f, "/(")?;
        fmt_poly(&self.den, f)?;
        write!(f, ")")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::add(self, o)
    }
}
impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::sub(self, o)
    }
}
impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_i64(n)
    }
}

/// Convenience: the monomial λ^{v+1}^e.
pub fn lambda_pow(v: usize, e: u32) -> Scalar {
    Scalar::from_poly(Poly::monomial(Mono::var_pow(v, e), GaussRat::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancels_to_one() {
        let l = Scalar::var(0);
        let p = l.mul(&l).add(&Scalar::one());
        assert!(p.div(&p).is_one());
    }

    #[test]
    fn partial_fractions_combine() {
        let l = Scalar::var(0);
        let one = Scalar::one();
        let s = one.div(&one.add(&l)).add(&one.div(&one.sub(&l)));
        // 2/(1-l^2), canonical denominator monic: -2/(l^2-1)
        let expect = Scalar::from_i64(2).div(&one.sub(&l.mul(&l)));
        assert_eq!(s, expect);
        assert_eq!(s.denom(), &l.mul(&l).sub(&one).numer().clone());
    }

    #[test]
    fn quotient_rule() {
        let l = Scalar::var(0);
        let one = Scalar::one();
        let s = l.mul(&l).div(&one.add(&l));
        let expect = l.mul(&l).add(&Scalar::from_i64(2).mul(&l)).div(&one.add(&l).pow(2));
        assert_eq!(s.diff(0), expect);
    }
}
