//! Sections of ∧•A for the algebroid A = T𝔥* × 𝔤 over 𝔥*, in the frame
//! {∂₁..∂_l, e₁..e_n} (frame index `i` for ∂ᵢ, `l + a` for e_a).
//!
//! The bracket here is computed from generators alone: functions, ∂ᵢ and e_a, with
//! [∂ᵢ, g] = ∂g/∂λⁱ, [e_a, g] = 0, [∂ᵢ, e_a] = 0, [e_a, e_b] = c_ab^c e_c, extended by
//! the graded Leibniz rule and graded antisymmetry. It shares no code with the
//! residual formulas in the crate root.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use liealg::{sort_with_sign, LieAlgebra, MultiVector};
use symexpr::Scalar;

use crate::{cdybe_residual, DynamicalR};

#[derive(Clone, PartialEq, Eq)]
pub struct AlgebroidVector {
    alg: Arc<LieAlgebra>,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl AlgebroidVector {
    pub fn zero(alg: &Arc<LieAlgebra>) -> Self {
        AlgebroidVector { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn frame_size(&self) -> usize {
        self.alg.cartan_dim() + self.alg.dim()
    }

    pub fn add_term(&mut self, idx: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let Some((key, neg)) = sort_with_sign(idx) else { return };
        let c = if neg { c.neg() } else { c };
        let v = self.terms.entry(key.clone()).or_default();
        *v = v.add(&c);
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn monomial(alg: &Arc<LieAlgebra>, idx: &[usize], c: Scalar) -> Self {
        let mut v = AlgebroidVector::zero(alg);
        v.add_term(idx.to_vec(), c);
        v
    }

    /// Embeds an element of ∧•𝔤 (e_a ↦ frame index l + a).
    pub fn from_multivector(u: &MultiVector) -> Self {
        let l = u.algebra().cartan_dim();
        let mut v = AlgebroidVector::zero(u.algebra());
        for (k, c) in u.terms() {
            v.add_term(k.iter().map(|a| a + l).collect(), c.clone());
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &[usize]) -> Scalar {
        match sort_with_sign(idx.to_vec()) {
            Some((k, neg)) => {
                let c = self.terms.get(&k).cloned().unwrap_or_default();
                if neg {
                    c.neg()
                } else {
                    c
                }
            }
            None => Scalar::zero(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_i64(-1))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = AlgebroidVector::zero(&self.alg);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.mul(s));
        }
        out
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = AlgebroidVector::zero(&self.alg);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                out.add_term(idx, x.mul(y));
            }
        }
        out
    }

    fn label(&self, i: usize) -> String {
        let l = self.alg.cartan_dim();
        if i < l {
            format!("d/dl{}", i + 1)
        } else {
            self.alg.labels()[i - l].clone()
        }
    }
}

impl fmt::Display for AlgebroidVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let names: Vec<String> = k.iter().map(|&i| self.label(i)).collect();
            write!(f, "({})*{}", c, names.join("^"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebroidVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Clone)]
enum Factor {
    Fn(Scalar),
    Gen(usize),
}

fn degree(w: &[Factor]) -> usize {
    w.iter().filter(|f| matches!(f, Factor::Gen(_))).count()
}

fn odd(k: usize) -> bool {
    k % 2 == 1
}

struct Engine<'a> {
    alg: &'a Arc<LieAlgebra>,
}

impl Engine<'_> {
    fn l(&self) -> usize {
        self.alg.cartan_dim()
    }

    /// Multiplies a word out into canonical form.
    fn word(&self, w: &[Factor]) -> AlgebroidVector {
        let mut c = Scalar::one();
        let mut idx = Vec::new();
        for f in w {
            match f {
                Factor::Fn(s) => c = c.mul(s),
                Factor::Gen(i) => idx.push(*i),
            }
        }
        AlgebroidVector::monomial(self.alg, &idx, c)
    }

    fn base(&self, a: &Factor, b: &Factor) -> AlgebroidVector {
        let l = self.l();
        match (a, b) {
            (Factor::Fn(_), Factor::Fn(_)) => AlgebroidVector::zero(self.alg),
            (Factor::Gen(x), Factor::Fn(g)) => {
                if *x < l {
                    AlgebroidVector::monomial(self.alg, &[], g.diff(*x))
                } else {
                    AlgebroidVector::zero(self.alg)
                }
            }
            (Factor::Fn(_), Factor::Gen(_)) => self.base(b, a).neg(),
            (Factor::Gen(x), Factor::Gen(y)) => {
                let mut out = AlgebroidVector::zero(self.alg);
                if *x >= l && *y >= l {
                    for (c, k) in self.alg.bracket_basis(x - l, y - l) {
                        out.add_term(vec![c + l], k.clone());
                    }
                }
                out
            }
        }
    }

    fn bracket(&self, a: &[Factor], b: &[Factor]) -> AlgebroidVector {
        if a.is_empty() || b.is_empty() {
            return AlgebroidVector::zero(self.alg);
        }
        let da = degree(a);
        if b.len() > 1 {
            // [a, b₀∧c] = [a,b₀]∧c + (−1)^{(|a|−1)|b₀|} b₀∧[a,c]
            let (b0, c) = (&b[..1], &b[1..]);
            let first = self.bracket(a, b0).wedge(&self.word(c));
            let second = self.word(b0).wedge(&self.bracket(a, c));
            return if odd((da + 1) * degree(b0)) { first.sub(&second) } else { first.add(&second) };
        }
        if a.len() == 1 {
            return self.base(&a[0], &b[0]);
        }
        // [a, b] = −(−1)^{(|a|−1)(|b|−1)} [b, a]
        let db = degree(b);
        let swapped = self.bracket(b, a);
        if odd((da + 1) * (db + 1)) {
            swapped
        } else {
            swapped.neg()
        }
    }
}

fn words(u: &AlgebroidVector) -> Vec<Vec<Factor>> {
    u.terms
        .iter()
        .map(|(k, c)| std::iter::once(Factor::Fn(c.clone())).chain(k.iter().map(|&i| Factor::Gen(i))).collect())
        .collect()
}

/// Schouten bracket of the algebroid.
pub fn algebroid_bracket(u: &AlgebroidVector, v: &AlgebroidVector) -> AlgebroidVector {
    let engine = Engine { alg: &u.alg };
    let mut out = AlgebroidVector::zero(&u.alg);
    for a in words(u) {
        for b in words(v) {
            out = out.add(&engine.bracket(&a, &b));
        }
    }
    out
}

/// Λ = Σᵢ hᵢ∧∂ᵢ + r as an algebroid bivector.
pub fn lambda_bivector(rm: &DynamicalR) -> AlgebroidVector {
    let l = rm.l();
    let mut lam = AlgebroidVector::from_multivector(&rm.r);
    for i in 0..l {
        lam.add_term(vec![l + i, i], Scalar::one());
    }
    lam
}

/// [Λ, Λ].
pub fn lambda_self_bracket(rm: &DynamicalR) -> AlgebroidVector {
    let lam = lambda_bivector(rm);
    algebroid_bracket(&lam, &lam)
}

/// `2·(Σ hᵢ∧∂ᵢr + ½[r,r]) + 2·Σᵢ [r, hᵢ]∧∂ᵢ`, built from the 𝔤-level residuals.
pub fn predicted_self_bracket(rm: &DynamicalR) -> AlgebroidVector {
    let two = Scalar::from_i64(2);
    let mut out = AlgebroidVector::from_multivector(&cdybe_residual(rm)).scale(&two);
    for i in 0..rm.l() {
        let w = rm.r.schouten(&MultiVector::basis(&rm.alg, i));
        let d = AlgebroidVector::monomial(&rm.alg, &[i], Scalar::one());
        out = out.add(&AlgebroidVector::from_multivector(&w).wedge(&d).scale(&two));
    }
    out
}
