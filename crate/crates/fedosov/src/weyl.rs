//! Sparse truncated sections of W⊗Λ in the frame.
//!
//! A term is `ℏᵏ c(x) y^α θ^J`: `y^A` is the fiber coordinate dual to frame
//! vector `X_A`, `θ^J` a coframe monomial with strictly increasing indices.
//! Multi-indices are packed 8 bits per fiber variable, so frames are limited
//! to [`MAX_FRAME`] vectors.

use std::collections::BTreeMap;
use std::fmt;

use symexpr::Scalar;

pub const MAX_FRAME: usize = 8;

/// Coefficient ring for Weyl sections: functions on M (or operators
/// producing them) that can be multiplied by λ-functions and differentiated
/// along frame vectors.
pub trait Linear: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplication by a λ-function.
    fn scale(&self, s: &Scalar) -> Self;
}

/// Linear coefficients that can also be differentiated along the frame.
pub trait Coeff: Linear {
    type Ctx;
    fn from_scalar(ctx: &Self::Ctx, s: &Scalar) -> Self;
    /// `X_A(self)` where `X_A` is frame vector `a` of `geom`.
    fn frame_deriv(&self, ctx: &Self::Ctx, geom: &geom::FrameGeometry, a: usize) -> Self;
}

/// Coefficient rings closed under pointwise multiplication.
pub trait Ring: Coeff {
    fn mul(&self, o: &Self) -> Self;
}

impl Linear for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn scale(&self, s: &Scalar) -> Self {
        Scalar::mul(self, s)
    }
}

impl Coeff for Scalar {
    type Ctx = ();
    fn from_scalar(_: &(), s: &Scalar) -> Self {
        s.clone()
    }
    fn frame_deriv(&self, _: &(), geom: &geom::FrameGeometry, a: usize) -> Self {
        geom.frame_deriv(self, a)
    }
}

impl Ring for Scalar {
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
}

/// Packed multi-index helpers.
pub mod multi {
    use super::MAX_FRAME;

    pub fn get(alpha: u64, i: usize) -> u32 {
        ((alpha >> (8 * i)) & 0xff) as u32
    }
    pub fn inc(alpha: u64, i: usize) -> u64 {
        assert!(get(alpha, i) < 255, "fiber exponent overflow");
        alpha + (1u64 << (8 * i))
    }
    pub fn dec(alpha: u64, i: usize) -> u64 {
        debug_assert!(get(alpha, i) > 0);
        alpha - (1u64 << (8 * i))
    }
    pub fn degree(alpha: u64) -> u32 {
        (0..MAX_FRAME).map(|i| get(alpha, i)).sum()
    }
    pub fn add(a: u64, b: u64) -> u64 {
        let mut out = a;
        for i in 0..MAX_FRAME {
            for _ in 0..get(b, i) {
                out = inc(out, i);
            }
        }
        out
    }
    pub fn from_exponents(e: &[u32]) -> u64 {
        assert!(e.len() <= MAX_FRAME);
        e.iter().enumerate().fold(0u64, |acc, (i, &x)| {
            assert!(x < 256);
            acc | ((x as u64) << (8 * i))
        })
    }
    pub fn exponents(alpha: u64, n: usize) -> Vec<u32> {
        (0..n).map(|i| get(alpha, i)).collect()
    }
    pub fn unit(i: usize) -> u64 {
        1u64 << (8 * i)
    }
}

/// Sorted form key of a coframe index list with its sign, or `None` if an
/// index repeats.
pub fn form_key(idx: &[usize]) -> Option<(u16, bool)> {
    let mut v = idx.to_vec();
    let mut neg = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                neg = !neg;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v.iter().fold(0u16, |acc, &i| acc | (1 << i)), neg))
}

pub fn form_indices(forms: u16) -> Vec<usize> {
    (0..16).filter(|&i| forms & (1 << i) != 0).collect()
}

/// Sign of `θ^{J1}∧θ^{J2}` relative to the sorted key, or `None` if they overlap.
pub fn wedge_sign(j1: u16, j2: u16) -> Option<bool> {
    if j1 & j2 != 0 {
        return None;
    }
    let mut neg = false;
    for a in form_indices(j2) {
        // number of indices in j1 above a
        if (j1 >> (a + 1)).count_ones() % 2 == 1 {
            neg = !neg;
        }
    }
    Some(neg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub k: u32,
    pub alpha: u64,
    pub forms: u16,
}

impl Key {
    pub fn new(k: u32, alpha: u64, forms: u16) -> Key {
        Key { k, alpha, forms }
    }
    /// `2k + |α|`.
    pub fn total_degree(&self) -> u32 {
        2 * self.k + multi::degree(self.alpha)
    }
    pub fn form_degree(&self) -> u32 {
        self.forms.count_ones()
    }
}

/// Truncation caps: `k ≤ k_max` and `2k + |α| ≤ n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub k_max: u32,
    pub n_max: u32,
}

impl Caps {
    /// Caps for star products mod ℏ^{K+1}.
    pub fn for_order(k: u32) -> Caps {
        Caps { k_max: k + 1, n_max: 2 * k + 3 }
    }
    pub fn admits(&self, k: u32, ydeg: u32) -> bool {
        k <= self.k_max && 2 * k + ydeg <= self.n_max
    }
    pub fn admits_key(&self, key: &Key) -> bool {
        self.admits(key.k, multi::degree(key.alpha))
    }
    /// Highest ℏ-order of a star product these caps determine.
    pub fn star_order(&self) -> u32 {
        self.k_max.saturating_sub(1).min(self.n_max / 2)
    }
}

#[derive(Clone, PartialEq)]
pub struct WeylElement<C: Linear> {
    terms: BTreeMap<Key, C>,
}

impl<C: Linear> Default for WeylElement<C> {
    fn default() -> Self {
        WeylElement { terms: BTreeMap::new() }
    }
}

impl<C: Linear> WeylElement<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A y-free 0-form.
    pub fn function(c: C) -> Self {
        let mut out = Self::zero();
        out.add_term(Key::new(0, 0, 0), c);
        out
    }

    /// `c ℏᵏ y^α θ^{forms[0]}∧..` with forms in any order.
    pub fn monomial(k: u32, alpha: &[u32], forms: &[usize], c: C) -> Self {
        let mut out = Self::zero();
        if let Some((f, neg)) = form_key(forms) {
            out.add_term(Key::new(k, multi::from_exponents(alpha), f), if neg { c.neg() } else { c });
        }
        out
    }

    pub fn add_term(&mut self, key: Key, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(e) => {
                let s = e.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &C)> {
        self.terms.iter()
    }
    pub fn get(&self, key: &Key) -> Option<&C> {
        self.terms.get(key)
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|c| c.scale(s))
    }
    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, f(c));
        }
        out
    }
    pub fn filter(&self, keep: impl Fn(&Key) -> bool) -> Self {
        WeylElement { terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (*k, c.clone())).collect() }
    }
    pub fn truncate(&self, caps: &Caps) -> Self {
        self.filter(|k| caps.admits_key(k))
    }
    /// Keeps terms of total degree ≤ `d`.
    pub fn up_to_degree(&self, d: u32) -> Self {
        self.filter(|k| k.total_degree() <= d)
    }
    pub fn homogeneous(&self, d: u32) -> Self {
        self.filter(|k| k.total_degree() == d)
    }
    pub fn form_part(&self, q: u32) -> Self {
        self.filter(|k| k.form_degree() == q)
    }
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Key::total_degree).min()
    }
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Key::total_degree).max()
    }

    /// Multiplies by `ℏ^shift` (negative shifts require divisibility).
    pub fn shift_hbar(&self, shift: i32) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let nk = k.k as i32 + shift;
            assert!(nk >= 0, "ℏ-power would become negative");
            out.add_term(Key::new(nk as u32, k.alpha, k.forms), c.clone());
        }
        out
    }

    /// `(i/ℏ)·self`; every term must carry at least one ℏ.
    pub fn i_over_hbar(&self) -> Self {
        self.shift_hbar(-1).scale(&Scalar::i())
    }

    /// `σ`: the y-free 0-form part as a series in ℏ (index = ℏ-power).
    pub fn sigma(&self, max_k: u32) -> Vec<C> {
        let mut out = vec![C::zero(); max_k as usize + 1];
        for (k, c) in &self.terms {
            if k.alpha == 0 && k.forms == 0 && k.k <= max_k {
                out[k.k as usize] = out[k.k as usize].add(c);
            }
        }
        out
    }

    /// Whether any term involves the fiber variable or covector `a`.
    pub fn mentions(&self, a: usize) -> bool {
        self.terms.keys().any(|k| multi::get(k.alpha, a) > 0 || k.forms & (1 << a) != 0)
    }
}

impl<C: Linear + fmt::Display> fmt::Display for WeylElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if k.k > 0 {
                write!(f, "*hbar^{}", k.k)?;
            }
            for i in 0..MAX_FRAME {
                let e = multi::get(k.alpha, i);
                if e > 0 {
                    write!(f, "*y{}^{}", i, e)?;
                }
            }
            for i in form_indices(k.forms) {
                write!(f, "*t{}", i)?;
            }
        }
        Ok(())
    }
}

impl<C: Linear + fmt::Display> fmt::Debug for WeylElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
