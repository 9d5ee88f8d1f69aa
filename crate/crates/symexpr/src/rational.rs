//! Rational numbers with an `i64` fast path, and Gaussian rationals built on them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// An exact rational number. Small values stay in machine words.
#[derive(Clone)]
pub enum Q {
    /// Reduced fraction `n/d` with `d > 0`.
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub fn zero() -> Q {
        Q::Small(0, 1)
    }
    pub fn one() -> Q {
        Q::Small(1, 1)
    }
    pub fn from_i64(n: i64) -> Q {
        Q::Small(n, 1)
    }
    pub fn new(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Q {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if n == 0 {
            return Q::Small(0, 1);
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) if a != i64::MIN => Q::Small(a, b),
            _ => Q::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn from_big(r: BigRational) -> Q {
        if r.denom().bits() < 63 && r.numer().bits() < 63 {
            Q::Small(r.numer().to_i64().unwrap(), r.denom().to_i64().unwrap())
        } else {
            Q::Big(r)
        }
    }

    pub fn from_bigint(n: BigInt) -> Q {
        Q::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Q::Small(n, _) => *n == 0,
            Q::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Q::Small(n, d) => *n == 1 && *d == 1,
            Q::Big(r) => r.is_one(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(n, _) => *n < 0,
            Q::Big(r) => r.is_negative(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(n, _) => BigInt::from(*n),
            Q::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, d) => BigInt::from(*d),
            Q::Big(r) => r.denom().clone(),
        }
    }

    pub fn add(&self, o: &Q) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (self, o) {
            if *b == *d {
                return Q::from_i128(*a as i128 + *c as i128, *b as i128);
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(x), Some(y)) = (a.checked_mul(d), c.checked_mul(b)) {
                if let (Some(s), Some(den)) = (x.checked_add(y), b.checked_mul(d)) {
                    return Q::from_i128(s, den);
                }
            }
        }
        Q::from_big(self.to_big() + o.to_big())
    }

    pub fn neg(&self) -> Q {
        match self {
            Q::Small(n, d) => Q::Small(-n, *d),
            Q::Big(r) => Q::Big(-r),
        }
    }

    pub fn sub(&self, o: &Q) -> Q {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Q) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (self, o) {
            if *a == 0 || *c == 0 {
                return Q::zero();
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(n), Some(den)) = (a.checked_mul(c), b.checked_mul(d)) {
                return Q::from_i128(n, den);
            }
        }
        Q::from_big(self.to_big() * o.to_big())
    }

    pub fn inv(&self) -> Q {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Q::Small(n, d) => Q::from_i128(*d as i128, *n as i128),
            Q::Big(r) => Q::from_big(r.recip()),
        }
    }

    pub fn div(&self, o: &Q) -> Q {
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: u32) -> Q {
        let mut acc = Q::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl PartialEq for Q {
    fn eq(&self, o: &Q) -> bool {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => a == c && b == d,
            _ => self.to_big() == o.to_big(),
        }
    }
}
impl Eq for Q {}

impl PartialOrd for Q {
    fn partial_cmp(&self, o: &Q) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Q {
    fn cmp(&self, o: &Q) -> Ordering {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{}", n),
            Q::Small(n, d) => write!(f, "{}/{}", n, d),
            Q::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Q::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq)]
pub struct GaussRat {
    pub re: Q,
    pub im: Q,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat { re: Q::zero(), im: Q::zero() }
    }
    pub fn one() -> Self {
        GaussRat { re: Q::one(), im: Q::zero() }
    }
    pub fn i() -> Self {
        GaussRat { re: Q::zero(), im: Q::one() }
    }
    pub fn real(q: Q) -> Self {
        GaussRat { re: q, im: Q::zero() }
    }
    pub fn from_i64(n: i64) -> Self {
        GaussRat::real(Q::from_i64(n))
    }
    pub fn ratio(n: i64, d: i64) -> Self {
        GaussRat::real(Q::new(n, d))
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    pub fn add(&self, o: &Self) -> Self {
        GaussRat { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    pub fn sub(&self, o: &Self) -> Self {
        GaussRat { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    pub fn neg(&self) -> Self {
        GaussRat { re: self.re.neg(), im: self.im.neg() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::real(self.re.mul(&o.re));
        }
        GaussRat {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: self.im.neg() }
    }
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.im.is_zero() {
            return GaussRat::real(self.re.inv());
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let ninv = n.inv();
        GaussRat { re: self.re.mul(&ninv), im: self.im.neg().mul(&ninv) }
    }
    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Prints in the expression grammar: `3/2`, `i`, `(1/2+3*i)`.
impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if self.im == Q::one().neg() {
            "-i".to_string()
        } else {
            format!("{}*i", self.im)
        };
        if self.re.is_zero() {
            write!(f, "{}", im)
        } else if im.starts_with('-') {
            write!(f, "({}{})", self.re, im)
        } else {
            write!(f, "({}+{})", self.re, im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_overflow_promotes() {
        let a = Q::from_i64(i64::MAX);
        let b = a.add(&a);
        assert_eq!(b.to_big(), BigRational::from_integer(BigInt::from(i64::MAX) * 2));
        assert_eq!(b.sub(&a), a);
    }

    #[test]
    fn gauss_inverse() {
        let z = GaussRat { re: Q::new(1, 2), im: Q::new(-3, 4) };
        assert!(z.mul(&z.inv()).is_one());
        assert_eq!(GaussRat::i().mul(&GaussRat::i()), GaussRat::from_i64(-1));
    }
}
