use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use symexpr::Scalar;

use crate::{LieAlgebra, LieError};

/// A sparse element of ∧•𝔤. Keys are strictly increasing basis index tuples; mixed
/// degrees are allowed, though most operations are used on homogeneous elements.
#[derive(Clone)]
pub struct MultiVector {
    alg: Arc<LieAlgebra>,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

/// Sorts `idx` and returns the permutation sign, or `None` when an index repeats.
pub fn sort_with_sign(mut idx: Vec<usize>) -> Option<(Vec<usize>, bool)> {
    let mut neg = false;
    // Insertion sort; tuples are short.
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some((idx, neg))
}

impl MultiVector {
    pub fn zero(alg: &Arc<LieAlgebra>) -> Self {
        MultiVector { alg: alg.clone(), terms: BTreeMap::new() }
    }

    /// Degree-0 element.
    pub fn scalar(alg: &Arc<LieAlgebra>, s: Scalar) -> Self {
        MultiVector::monomial(alg, &[], s)
    }

    pub fn basis(alg: &Arc<LieAlgebra>, a: usize) -> Self {
        MultiVector::monomial(alg, &[a], Scalar::one())
    }

    /// `coeff · e_{i₁}∧…∧e_{i_k}` for indices in any order.
    pub fn monomial(alg: &Arc<LieAlgebra>, idx: &[usize], coeff: Scalar) -> Self {
        let mut m = MultiVector::zero(alg);
        m.add_term(idx.to_vec(), coeff);
        m
    }

    pub fn from_vector(alg: &Arc<LieAlgebra>, v: &[Scalar]) -> Self {
        let mut m = MultiVector::zero(alg);
        for (a, c) in v.iter().enumerate() {
            m.add_term(vec![a], c.clone());
        }
        m
    }

    /// Adds `coeff · e_idx`, sorting `idx` with sign.
    pub fn add_term(&mut self, idx: Vec<usize>, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        assert!(idx.iter().all(|&i| i < self.alg.dim()), "basis index out of range");
        let Some((key, neg)) = sort_with_sign(idx) else { return };
        let c = if neg { coeff.neg() } else { coeff };
        self.add_sorted(key, c);
    }

    fn add_sorted(&mut self, key: Vec<usize>, c: Scalar) {
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(key, c);
                }
            }
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
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

    /// Common degree of all terms; `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.len());
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn homogeneous_part(&self, k: usize) -> MultiVector {
        MultiVector {
            alg: self.alg.clone(),
            terms: self.terms.iter().filter(|(key, _)| key.len() == k).map(|(a, b)| (a.clone(), b.clone())).collect(),
        }
    }

    fn same_algebra(&self, o: &MultiVector) -> Result<(), LieError> {
        if Arc::ptr_eq(&self.alg, &o.alg) || *self.alg == *o.alg {
            Ok(())
        } else {
            Err(LieError::AlgebraMismatch)
        }
    }

    pub fn try_add(&self, o: &MultiVector) -> Result<MultiVector, LieError> {
        self.same_algebra(o)?;
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_sorted(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// Panics on an algebra mismatch; use [`MultiVector::try_add`] to handle it.
    pub fn add(&self, o: &MultiVector) -> MultiVector {
        self.try_add(o).expect("algebra mismatch")
    }

    pub fn neg(&self) -> MultiVector {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, o: &MultiVector) -> MultiVector {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> MultiVector {
        if s.is_zero() {
            return MultiVector::zero(&self.alg);
        }
        self.map_coeffs(|c| c.mul(s))
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> MultiVector {
        MultiVector {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter_map(|(k, v)| {
                    let c = f(v);
                    (!c.is_zero()).then(|| (k.clone(), c))
                })
                .collect(),
        }
    }

    pub fn wedge(&self, o: &MultiVector) -> MultiVector {
        wedge(self, o).expect("algebra mismatch")
    }

    pub fn schouten(&self, o: &MultiVector) -> MultiVector {
        schouten_bracket(self, o).expect("algebra mismatch")
    }

    /// Re-homes the element onto another, equal, algebra handle.
    pub fn with_algebra(&self, alg: &Arc<LieAlgebra>) -> MultiVector {
        MultiVector { alg: alg.clone(), terms: self.terms.clone() }
    }
}

impl PartialEq for MultiVector {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && (Arc::ptr_eq(&self.alg, &o.alg) || *self.alg == *o.alg)
    }
}
impl Eq for MultiVector {}

pub fn wedge(u: &MultiVector, v: &MultiVector) -> Result<MultiVector, LieError> {
    u.same_algebra(v)?;
    let mut out = MultiVector::zero(&u.alg);
    for (a, x) in &u.terms {
        for (b, y) in &v.terms {
            let mut idx = a.clone();
            idx.extend_from_slice(b);
            out.add_term(idx, x.mul(y));
        }
    }
    Ok(out)
}

/// The Schouten bracket on ∧•𝔤, on monomials
/// `[x₁∧…∧x_p, y₁∧…∧y_q] = Σ (−1)^{i+j} [x_i, y_j]∧x₁..x̂_i..x_p∧y₁..ŷ_j..y_q`.
/// Coefficients are multiplied as constants: no λ-derivatives are taken here.
pub fn schouten_bracket(u: &MultiVector, v: &MultiVector) -> Result<MultiVector, LieError> {
    u.same_algebra(v)?;
    let g = &u.alg;
    let mut out = MultiVector::zero(g);
    for (a, x) in &u.terms {
        for (b, y) in &v.terms {
            let xy = x.mul(y);
            for (i, &ai) in a.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate() {
                    let br = g.bracket_basis(ai, bj);
                    if br.is_empty() {
                        continue;
                    }
                    let sign_neg = (i + j) % 2 == 1;
                    let rest: Vec<usize> = a
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i)
                        .map(|(_, &e)| e)
                        .chain(b.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &e)| e))
                        .collect();
                    for (c, k) in br {
                        let mut idx = Vec::with_capacity(rest.len() + 1);
                        idx.push(*c);
                        idx.extend_from_slice(&rest);
                        let coeff = if sign_neg { xy.mul(k).neg() } else { xy.mul(k) };
                        out.add_term(idx, coeff);
                    }
                }
            }
        }
    }
    Ok(out)
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let labels = self.alg.labels();
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let basis: Vec<&str> = k.iter().map(|&i| labels[i].as_str()).collect();
            if basis.is_empty() {
                write!(f, "({})", c)?;
            } else if c.is_one() {
                write!(f, "{}", basis.join("^"))?;
            } else {
                write!(f, "({})*{}", c, basis.join("^"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
