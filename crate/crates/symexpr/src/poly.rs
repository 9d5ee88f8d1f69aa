//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Monomials are packed into a `u64`, eight bits of exponent per variable,
//! variable 0 in the most significant byte. Terms are kept sorted in
//! decreasing graded-lexicographic order, so the first term is the leading one.

use crate::rational::GaussRat;
use std::cmp::Ordering;

pub const MAX_VARS: usize = 8;

/// Packed exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn var(i: usize) -> Mono {
        Mono::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Mono {
        assert!(i < MAX_VARS, "variable index {} out of range", i);
        assert!(e < 256, "exponent {} too large", e);
        Mono((e as u64) << (8 * (7 - i)))
    }

    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> (8 * (7 - i))) & 0xff) as u32
    }

    pub fn degree(self) -> u32 {
        (0..MAX_VARS).map(|i| self.exp(i)).sum()
    }

    pub fn mul(self, o: Mono) -> Mono {
        for i in 0..MAX_VARS {
            assert!(self.exp(i) + o.exp(i) < 256, "exponent overflow");
        }
        Mono(self.0 + o.0)
    }

    pub fn divides(self, o: Mono) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) <= o.exp(i))
    }

    /// `o / self`, assuming divisibility.
    pub fn div(self, o: Mono) -> Mono {
        Mono(o.0 - self.0)
    }

    pub fn gcd(self, o: Mono) -> Mono {
        let mut m = 0u64;
        for i in 0..MAX_VARS {
            m |= (self.exp(i).min(o.exp(i)) as u64) << (8 * (7 - i));
        }
        Mono(m)
    }

    pub fn without(self, i: usize) -> Mono {
        Mono(self.0 & !(0xffu64 << (8 * (7 - i))))
    }

    pub fn vars_mask(self) -> u8 {
        let mut m = 0u8;
        for i in 0..MAX_VARS {
            if self.exp(i) > 0 {
                m |= 1 << i;
            }
        }
        m
    }
}

/// Graded-lex comparison: higher total degree first, ties broken lexicographically.
pub fn grlex(a: Mono, b: Mono) -> Ordering {
    a.degree().cmp(&b.degree()).then(a.0.cmp(&b.0))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    /// Sorted by decreasing graded-lex order; no zero coefficients.
    pub terms: Vec<(Mono, GaussRat)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }
    pub fn one() -> Poly {
        Poly::constant(GaussRat::one())
    }
    pub fn constant(c: GaussRat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::ONE, c)] }
        }
    }
    pub fn var(i: usize) -> Poly {
        Poly { terms: vec![(Mono::var(i), GaussRat::one())] }
    }
    pub fn monomial(m: Mono, c: GaussRat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(mut t: Vec<(Mono, GaussRat)>) -> Poly {
        t.sort_by(|a, b| grlex(b.0, a.0));
        let mut out: Vec<(Mono, GaussRat)> = Vec::with_capacity(t.len());
        for (m, c) in t {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = last.1.add(&c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Mono::ONE && self.terms[0].1.is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == Mono::ONE)
    }
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }
    pub fn constant_value(&self) -> Option<GaussRat> {
        if self.terms.is_empty() {
            Some(GaussRat::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }
    pub fn lead(&self) -> &(Mono, GaussRat) {
        &self.terms[0]
    }
    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }
    pub fn vars_mask(&self) -> u8 {
        self.terms.iter().fold(0, |m, t| m | t.0.vars_mask())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match grlex(a[i].0, b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.add(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (*m, d.mul(c))).collect() }
    }

    pub fn mul_term(&self, m: Mono, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // Multiplication by a monomial preserves graded-lex order.
        Poly { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d.mul(c))).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                t.push((m1.mul(*m2), c1.mul(c2)));
            }
        }
        Poly::from_terms(t)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            if !self.terms.iter().all(|(m, _)| dm.divides(*m)) {
                return None;
            }
            let inv = dc.inv();
            return Some(Poly { terms: self.terms.iter().map(|(m, c)| (dm.div(*m), c.mul(&inv))).collect() });
        }
        let (lm, lc) = d.lead().clone();
        let lcinv = lc.inv();
        let mut r = self.clone();
        let mut q = Vec::new();
        while !r.is_zero() {
            let (rm, rc) = r.lead().clone();
            if !lm.divides(rm) {
                return None;
            }
            let tm = lm.div(rm);
            let tc = rc.mul(&lcinv);
            r = r.sub(&d.mul_term(tm, &tc));
            q.push((tm, tc));
        }
        Some(Poly::from_terms(q))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.lead().1.clone();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.inv())
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// Coefficient of `x_v^k`, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, v: usize, k: u32) -> Poly {
        Poly::from_terms(
            self.terms.iter().filter(|(m, _)| m.exp(v) == k).map(|(m, c)| (m.without(v), c.clone())).collect(),
        )
    }

    pub fn diff(&self, v: usize) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(v) > 0)
                .map(|(m, c)| {
                    let e = m.exp(v);
                    (Mono(m.0 - Mono::var(v).0), c.mul(&GaussRat::from_i64(e as i64)))
                })
                .collect(),
        )
    }

    /// Substitutes `x_v = val`.
    pub fn subst(&self, v: usize, val: &GaussRat) -> Poly {
        let mut t = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut cc = c.clone();
            for _ in 0..e {
                cc = cc.mul(val);
            }
            t.push((m.without(v), cc));
        }
        Poly::from_terms(t)
    }

    /// Substitutes `x_v = p`.
    pub fn subst_poly(&self, v: usize, p: &Poly) -> Poly {
        let mut acc = Poly::zero();
        let maxd = self.degree_in(v);
        let mut powers = vec![Poly::one()];
        for k in 1..=maxd {
            powers.push(powers[(k - 1) as usize].mul(p));
        }
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            acc = acc.add(&powers[e].mul_term(m.without(v), c));
        }
        acc
    }

    /// Greatest common divisor, normalized monic. `gcd(0,0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.is_constant() || o.is_constant() {
            return Poly::one();
        }
        if self.is_monomial() || o.is_monomial() {
            let (m, p) = if self.is_monomial() { (self, o) } else { (o, self) };
            let g = p.terms.iter().fold(m.terms[0].0, |g, (n, _)| g.gcd(*n));
            return Poly::monomial(g, GaussRat::one());
        }
        if self == o {
            return self.monic();
        }
        let ma = self.vars_mask();
        let mb = o.vars_mask();
        // A variable present in only one argument cannot occur in the gcd.
        for v in 0..MAX_VARS {
            let bit = 1u8 << v;
            if ma & bit != 0 && mb & bit == 0 {
                return self.content_in(v).gcd(o);
            }
            if mb & bit != 0 && ma & bit == 0 {
                return o.content_in(v).gcd(self);
            }
        }
        let common = ma & mb;
        let v = common.trailing_zeros() as usize;
        if common.count_ones() == 1 {
            return univariate_gcd(self, o);
        }
        let ca = self.content_in(v);
        let cb = o.content_in(v);
        let c = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).unwrap().monic();
        let mut b = o.div_exact(&cb).unwrap().monic();
        if a.degree_in(v) < b.degree_in(v) {
            std::mem::swap(&mut a, &mut b);
        }
        if coprime_by_specialization(&a, &b, v) {
            return c.monic();
        }
        if common.count_ones() == 2 {
            let w = (common & !(1u8 << v)).trailing_zeros() as usize;
            if let Some(g) = bivariate_gcd_interp(&a, &b, v, w) {
                return c.mul(&g).monic();
            }
        }
        loop {
            if b.degree_in(v) == 0 {
                return c.monic();
            }
            let r = a.prem(&b, v);
            if r.is_zero() {
                return c.mul(&b).monic();
            }
            a = b;
            b = r.primitive_in(v).monic();
        }
    }

    /// gcd of the coefficients with respect to `x_v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let d = self.degree_in(v);
        let mut g = Poly::zero();
        for k in (0..=d).rev() {
            let c = self.coeff_in(v, k);
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).unwrap()
    }

    /// Pseudo-remainder with respect to `x_v`.
    pub fn prem(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        let lcb = b.coeff_in(v, db);
        let mut a = self.clone();
        while !a.is_zero() && a.degree_in(v) >= db {
            let da = a.degree_in(v);
            let lca = a.coeff_in(v, da);
            let shift = Mono::var_pow(v, da - db);
            a = a.mul(&lcb).sub(&b.mul(&lca).mul_term(shift, &GaussRat::one()));
        }
        a
    }

    /// Remainder of univariate division over the coefficient field.
    fn rem_univariate(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        let lcinv = b.coeff_in(v, db).constant_value().unwrap().inv();
        let mut a = self.clone();
        while !a.is_zero() && a.degree_in(v) >= db {
            let da = a.degree_in(v);
            let lca = a.coeff_in(v, da).constant_value().unwrap();
            a = a.sub(&b.mul_term(Mono::var_pow(v, da - db), &lca.mul(&lcinv)));
        }
        a
    }
}

/// Sufficient test for `gcd(a, b)` having degree 0 in `x_v`: specialize every other
/// variable at a point keeping both leading coefficients nonzero and check the
/// univariate images are coprime.
fn coprime_by_specialization(a: &Poly, b: &Poly, v: usize) -> bool {
    let others = (a.vars_mask() | b.vars_mask()) & !(1u8 << v);
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    for attempt in 0..3i64 {
        let mut sa = a.clone();
        let mut sb = b.clone();
        for w in 0..MAX_VARS {
            if others & (1u8 << w) != 0 {
                let val = GaussRat::from_i64(2 + 3 * w as i64 + 7 * attempt);
                sa = sa.subst(w, &val);
                sb = sb.subst(w, &val);
            }
        }
        if sa.degree_in(v) != da || sb.degree_in(v) != db {
            continue;
        }
        return univariate_gcd(&sa, &sb).is_constant();
    }
    false
}

/// gcd of bivariate `a`, `b` (primitive in `x_v`) by evaluating `x_w` at integer points,
/// taking univariate gcds, and interpolating. Leading coefficients in `x_v` are fixed
/// by the gcd of the inputs' leading coefficients. Candidates are verified by division.
fn bivariate_gcd_interp(a: &Poly, b: &Poly, v: usize, w: usize) -> Option<Poly> {
    let lca = a.coeff_in(v, a.degree_in(v));
    let lcb = b.coeff_in(v, b.degree_in(v));
    let gamma = lca.gcd(&lcb);
    let mut needed = (gamma.degree_in(w) + a.degree_in(w).min(b.degree_in(w)) + 1) as usize;
    let mut pts: Vec<(GaussRat, Poly)> = Vec::new();
    let mut best = u32::MAX;
    let mut c = 0i64;
    while c < 200 {
        c += 1;
        let val = GaussRat::from_i64(c);
        let gc = gamma.subst(w, &val).constant_value().unwrap_or_else(GaussRat::zero);
        if gc.is_zero() {
            continue;
        }
        let sa = a.subst(w, &val);
        let sb = b.subst(w, &val);
        if sa.degree_in(v) != a.degree_in(v) || sb.degree_in(v) != b.degree_in(v) {
            continue;
        }
        let g = univariate_gcd(&sa, &sb);
        let d = g.degree_in(v);
        if d == 0 {
            return Some(Poly::one());
        }
        if d > best {
            continue;
        }
        if d < best {
            best = d;
            pts.clear();
        }
        pts.push((val, g.scale(&gc)));
        if pts.len() < needed {
            continue;
        }
        let mut h = Poly::zero();
        for k in 0..=best {
            let ys: Vec<(GaussRat, GaussRat)> = pts
                .iter()
                .map(|(x, g)| (x.clone(), g.coeff_in(v, k).constant_value().unwrap_or_else(GaussRat::zero)))
                .collect();
            h = h.add(&interpolate(&ys, w).mul_term(Mono::var_pow(v, k), &GaussRat::one()));
        }
        let h = h.primitive_in(v);
        if a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
            return Some(h.monic());
        }
        needed += 1;
    }
    None
}

/// Lagrange interpolation in `x_w` through `(point, value)` pairs.
fn interpolate(pts: &[(GaussRat, GaussRat)], w: usize) -> Poly {
    let mut out = Poly::zero();
    for (i, (xi, yi)) in pts.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = Poly::constant(yi.clone());
        let mut den = GaussRat::one();
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::var(w).sub(&Poly::constant(xj.clone())));
                den = den.mul(&xi.sub(xj));
            }
        }
        out = out.add(&basis.scale(&den.inv()));
    }
    out
}

fn univariate_gcd(a: &Poly, b: &Poly) -> Poly {
    let v = (a.vars_mask() | b.vars_mask()).trailing_zeros() as usize;
    let (mut a, mut b) = (a.monic(), b.monic());
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.rem_univariate(&b, v).monic();
        a = b;
        b = r;
    }
    a.monic()
}
