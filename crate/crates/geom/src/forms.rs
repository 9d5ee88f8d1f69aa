//! Differential forms in the coframe {dλ¹..dλˡ, ξ¹..ξⁿ}.
//!
//! `θ^J` for a sorted index set `J` is normalized so that
//! `θ^J(X_{j1}, .., X_{jk}) = 1`; a 2-form with components `w_{AB}` is
//! `Σ_{A<B} w_{AB} θ^A∧θ^B`.

use std::collections::BTreeMap;
use std::fmt;

use liealg::multivector::sort_with_sign;
use symexpr::{Scalar, ScalarMatrix};

use crate::FrameGeometry;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameForm {
    size: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl FrameForm {
    pub fn zero(size: usize) -> Self {
        FrameForm { size, terms: BTreeMap::new() }
    }

    pub fn function(size: usize, f: Scalar) -> Self {
        let mut out = FrameForm::zero(size);
        out.add_term(vec![], f);
        out
    }

    /// `c · θ^{idx[0]}∧θ^{idx[1]}∧..` in any index order.
    pub fn monomial(size: usize, idx: &[usize], c: Scalar) -> Self {
        let mut out = FrameForm::zero(size);
        out.add_term(idx.to_vec(), c);
        out
    }

    pub fn coframe(size: usize, a: usize) -> Self {
        FrameForm::monomial(size, &[a], Scalar::one())
    }

    /// The 2-form with antisymmetric component matrix `w`.
    pub fn from_two_form_matrix(w: &ScalarMatrix) -> Self {
        let n = w.rows();
        let mut out = FrameForm::zero(n);
        for a in 0..n {
            for b in (a + 1)..n {
                out.add_term(vec![a, b], w.get(a, b).clone());
            }
        }
        out
    }

    /// Component matrix of the degree-2 part.
    pub fn two_form_matrix(&self) -> ScalarMatrix {
        let mut w = ScalarMatrix::zeros(self.size, self.size);
        for (k, c) in &self.terms {
            if k.len() == 2 {
                w.set(k[0], k[1], c.clone());
                w.set(k[1], k[0], c.neg());
            }
        }
        w
    }

    pub fn add_term(&mut self, idx: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        assert!(idx.iter().all(|&i| i < self.size), "coframe index out of range");
        let Some((key, neg)) = sort_with_sign(idx) else { return };
        let c = if neg { c.neg() } else { c };
        let e = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, idx: &[usize]) -> Scalar {
        match sort_with_sign(idx.to_vec()) {
            None => Scalar::zero(),
            Some((k, neg)) => {
                let c = self.terms.get(&k).cloned().unwrap_or_else(Scalar::zero);
                if neg {
                    c.neg()
                } else {
                    c
                }
            }
        }
    }

    pub fn add(&self, o: &FrameForm) -> FrameForm {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
    pub fn neg(&self) -> FrameForm {
        self.scale(&Scalar::from_i64(-1))
    }
    pub fn sub(&self, o: &FrameForm) -> FrameForm {
        self.add(&o.neg())
    }
    pub fn scale(&self, s: &Scalar) -> FrameForm {
        let mut out = FrameForm::zero(self.size);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.mul(s));
        }
        out
    }

    pub fn wedge(&self, o: &FrameForm) -> FrameForm {
        let mut out = FrameForm::zero(self.size);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let mut idx = k1.clone();
                idx.extend_from_slice(k2);
                out.add_term(idx, c1.mul(c2));
            }
        }
        out
    }

    /// Contraction with the frame vector `X_a` in the first slot.
    pub fn interior(&self, a: usize) -> FrameForm {
        let mut out = FrameForm::zero(self.size);
        for (k, c) in &self.terms {
            if let Some(p) = k.iter().position(|&i| i == a) {
                let mut rest = k.clone();
                rest.remove(p);
                let c = if p % 2 == 1 { c.neg() } else { c.clone() };
                out.add_term(rest, c);
            }
        }
        out
    }

    /// Frame exterior derivative: `df = Σ X_A(f) θ^A` and the Maurer–Cartan
    /// relations `dθ^C = −Σ_{A<B} C_{AB}^C θ^A∧θ^B`.
    pub fn d(&self, geom: &FrameGeometry) -> FrameForm {
        assert_eq!(self.size, geom.size(), "form and geometry disagree on frame size");
        let mut out = FrameForm::zero(self.size);
        for (k, c) in &self.terms {
            for a in 0..geom.l() {
                let dc = c.diff(a);
                if !dc.is_zero() {
                    let mut idx = vec![a];
                    idx.extend_from_slice(k);
                    out.add_term(idx, dc);
                }
            }
            for (p, &j) in k.iter().enumerate() {
                let sign = if p % 2 == 0 { c.clone() } else { c.neg() };
                for (a, b, s) in geom.maurer_cartan(j) {
                    let mut idx = k[..p].to_vec();
                    idx.push(a);
                    idx.push(b);
                    idx.extend_from_slice(&k[p + 1..]);
                    out.add_term(idx, sign.mul(&s).neg());
                }
            }
        }
        out
    }

    /// Value on frame vectors `(X_{args[0]}, ..)`.
    pub fn eval(&self, args: &[usize]) -> Scalar {
        let mut iota = self.clone();
        for &a in args {
            iota = iota.interior(a);
        }
        iota.coeff(&[])
    }
}

impl fmt::Display for FrameForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if k.is_empty() {
                    format!("({})", c)
                } else {
                    let names: Vec<String> = k.iter().map(|i| format!("t{}", i)).collect();
                    format!("({})*{}", c, names.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
