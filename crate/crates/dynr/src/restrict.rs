//! Restriction of a splittable r-matrix to 𝔤₁ = 𝔥 + r(λ₀)^# 𝔥^⊥.

use std::sync::Arc;

use liealg::{LieAlgebra, MultiVector};
use symexpr::{GaussRat, Scalar, ScalarMatrix};

use crate::{rank_flags, DynamicalR, DynrError};

#[derive(Clone, Debug)]
pub struct Restriction {
    /// r re-expressed on 𝔤₁.
    pub restricted: DynamicalR,
    /// Column `k` is the k-th basis vector of 𝔤₁ in coordinates of 𝔤.
    pub embedding: Vec<Vec<Scalar>>,
}

fn eval_at(s: &Scalar, point: &[GaussRat]) -> Result<GaussRat, DynrError> {
    let mut v = s.clone();
    for (i, p) in point.iter().enumerate() {
        v = v
            .subst(i, p)
            .ok_or_else(|| DynrError::SingularPoint(format!("pole of {} at the base point", s)))?;
    }
    Ok(v.constant_value().expect("all λ substituted"))
}

pub fn restrict_to_g1(rm: &DynamicalR, lambda0: &[GaussRat]) -> Result<Restriction, DynrError> {
    let (l, n) = (rm.l(), rm.n());
    if lambda0.len() != l {
        return Err(DynrError::PointDimension { got: lambda0.len(), expected: l });
    }
    let flags = rank_flags(rm)?;
    if !flags.splittable {
        return Err(DynrError::NotSplittable);
    }
    let full = rm.matrix();
    // r^#(e^j*) = Σ_b R^{jb} e_b; keep the complement components at λ₀.
    let mut rows = Vec::new();
    for j in l..n {
        let mut row = Vec::new();
        for b in l..n {
            row.push(Scalar::constant(eval_at(full.get(j, b), lambda0)?));
        }
        rows.push(row);
    }
    let (red, pivots) = if n > l { ScalarMatrix::from_rows(rows).rref() } else { (ScalarMatrix::zeros(0, 0), vec![]) };
    if pivots.len() != flags.rank {
        return Err(DynrError::SingularPoint(format!(
            "rank drops from {} to {} at the base point",
            flags.rank,
            pivots.len()
        )));
    }
    // Basis: h's, then the reduced rows (pivot entries are 1, other pivots 0).
    let mut embedding: Vec<Vec<Scalar>> = Vec::new();
    let mut pivot_of: Vec<usize> = (0..l).collect();
    for i in 0..l {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        embedding.push(v);
    }
    for (r, &p) in pivots.iter().enumerate() {
        let mut v = vec![Scalar::zero(); n];
        for b in 0..(n - l) {
            v[l + b] = red.get(r, b).clone();
        }
        embedding.push(v);
        pivot_of.push(l + p);
    }
    let d = embedding.len();
    // Coordinates of x ∈ 𝔤₁ are read off at the pivot positions; verify membership.
    let coords = |x: &[Scalar]| -> Option<Vec<Scalar>> {
        let c: Vec<Scalar> = pivot_of.iter().map(|&p| x[p].clone()).collect();
        let mut back = vec![Scalar::zero(); n];
        for (k, ck) in c.iter().enumerate() {
            for a in 0..n {
                back[a] = back[a].add(&ck.mul(&embedding[k][a]));
            }
        }
        (back.as_slice() == x).then_some(c)
    };
    let g = &rm.alg;
    let mut brackets = Vec::new();
    for a in 0..d {
        for b in (a + 1)..d {
            let x = g.bracket(&embedding[a], &embedding[b]);
            let c = coords(&x).ok_or_else(|| DynrError::NotClosed(format!("bracket of basis vectors {} and {}", a, b)))?;
            for (k, ck) in c.into_iter().enumerate() {
                if !ck.is_zero() {
                    brackets.push((a, b, k, ck));
                }
            }
        }
    }
    let labels: Vec<String> = (0..d)
        .map(|k| {
            let v = &embedding[k];
            let nz: Vec<usize> = (0..n).filter(|&a| !v[a].is_zero()).collect();
            if nz.len() == 1 && v[nz[0]].is_one() {
                g.labels()[nz[0]].clone()
            } else {
                format!("m{}", k + 1 - l)
            }
        })
        .collect();
    let sub = Arc::new(LieAlgebra::from_brackets(labels, l, &brackets)?);
    let mut r1 = MultiVector::zero(&sub);
    for a in 0..d {
        for b in (a + 1)..d {
            r1.add_term(vec![a, b], full.get(pivot_of[a], pivot_of[b]).clone());
        }
    }
    // r must equal the pushforward of r1.
    let mut back = MultiVector::zero(g);
    for (k, c) in r1.terms() {
        let x = MultiVector::from_vector(g, &embedding[k[0]]);
        let y = MultiVector::from_vector(g, &embedding[k[1]]);
        back = back.add(&x.wedge(&y).scale(c));
    }
    if back != rm.r {
        return Err(DynrError::NotClosed("r(λ) is not valued in the wedge square of the subalgebra".into()));
    }
    let restricted = DynamicalR::new(r1)?;
    let rf = rank_flags(&restricted)?;
    if !rf.nondegenerate {
        return Err(DynrError::Internal("restriction is degenerate".into()));
    }
    Ok(Restriction { restricted, embedding })
}
