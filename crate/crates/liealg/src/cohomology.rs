//! Relative Chevalley–Eilenberg complex C^k(𝔤, 𝔥): 𝔥-invariant alternating forms on 𝔤/𝔥.
//!
//! Forms are written in the basis ξ^J of Λ^k(𝔤/𝔥)*, J a strictly increasing tuple of
//! complement indices, normalized by ξ^J(e_{j₁}, …, e_{j_k}) = 1.

use symexpr::{Scalar, ScalarMatrix};

use crate::multivector::sort_with_sign;
use crate::{LieAlgebra, LieError};

pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn complement(g: &LieAlgebra) -> Vec<usize> {
    (g.cartan_dim()..g.dim()).collect()
}

fn index_of(basis: &[Vec<usize>], key: &[usize]) -> usize {
    basis.binary_search_by(|b| b.as_slice().cmp(key)).expect("basis key")
}

/// Matrix of the 𝔥-action `h_i · ξ` on Λ^k(𝔤/𝔥)*, rows and columns indexed by `basis`.
fn h_action(g: &LieAlgebra, h: usize, basis: &[Vec<usize>]) -> ScalarMatrix {
    let l = g.cartan_dim();
    let mut m = ScalarMatrix::zeros(basis.len(), basis.len());
    // (h·ξ)(x₁..x_k) = −Σ_i ξ(x₁..[h,x_i]..x_k), brackets taken mod 𝔥.
    for (row, j) in basis.iter().enumerate() {
        for pos in 0..j.len() {
            for (c, coeff) in g.bracket_basis(h, j[pos]) {
                if *c < l {
                    continue;
                }
                let mut t = j.clone();
                t[pos] = *c;
                if let Some((key, neg)) = sort_with_sign(t) {
                    let col = index_of(basis, &key);
                    let v = if neg { coeff.clone() } else { coeff.neg() };
                    let old = m.get(row, col).clone();
                    m.set(row, col, old.add(&v));
                }
            }
        }
    }
    m
}

/// Basis (as coordinate columns over Λ^k(𝔤/𝔥)*) of the 𝔥-invariant k-forms.
pub fn relative_cochain_basis(g: &LieAlgebra, k: usize) -> Result<Vec<Vec<Scalar>>, LieError> {
    let m = g.dim() - g.cartan_dim();
    if k > m {
        return Err(LieError::DegreeOutOfRange { degree: k, max: m });
    }
    let basis = subsets(&complement(g), k);
    if g.cartan_dim() == 0 {
        return Ok((0..basis.len()).map(|i| unit(basis.len(), i)).collect());
    }
    let mut stacked = Vec::new();
    for h in 0..g.cartan_dim() {
        let a = h_action(g, h, &basis);
        for r in 0..a.rows() {
            stacked.push(a.row(r));
        }
    }
    Ok(ScalarMatrix::from_rows(stacked).nullspace())
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Matrix of d: Λ^k(𝔤/𝔥)* → Λ^{k+1}(𝔤/𝔥)* in the ξ^J bases.
pub fn relative_differential(g: &LieAlgebra, k: usize) -> ScalarMatrix {
    let l = g.cartan_dim();
    let comp = complement(g);
    let src = subsets(&comp, k);
    let dst = subsets(&comp, k + 1);
    let mut d = ScalarMatrix::zeros(dst.len(), src.len());
    // (dξ)(x₀..x_k) = Σ_{i<j} (−1)^{i+j} ξ([x_i,x_j] mod 𝔥, x₀..x̂_i..x̂_j..x_k).
    for (row, x) in dst.iter().enumerate() {
        for i in 0..x.len() {
            for j in (i + 1)..x.len() {
                for (c, coeff) in g.bracket_basis(x[i], x[j]) {
                    if *c < l {
                        continue;
                    }
                    let mut t = vec![*c];
                    t.extend(x.iter().enumerate().filter(|(p, _)| *p != i && *p != j).map(|(_, &e)| e));
                    if let Some((key, neg)) = sort_with_sign(t) {
                        let col = index_of(&src, &key);
                        let neg = neg ^ ((i + j) % 2 == 1);
                        let v = if neg { coeff.neg() } else { coeff.clone() };
                        let old = d.get(row, col).clone();
                        d.set(row, col, old.add(&v));
                    }
                }
            }
        }
    }
    d
}

fn columns(vs: &[Vec<Scalar>], rows: usize) -> ScalarMatrix {
    let mut m = ScalarMatrix::zeros(rows, vs.len());
    for (j, v) in vs.iter().enumerate() {
        for (i, s) in v.iter().enumerate() {
            m.set(i, j, s.clone());
        }
    }
    m
}

fn restricted_rank(g: &LieAlgebra, k: usize) -> Result<usize, LieError> {
    let m = g.dim() - g.cartan_dim();
    if k >= m {
        return Ok(0);
    }
    let basis = relative_cochain_basis(g, k)?;
    if basis.is_empty() {
        return Ok(0);
    }
    let d = relative_differential(g, k);
    Ok(d.mul(&columns(&basis, d.cols())).rank())
}

/// `(dim C^k, dim H^k)` of the relative complex.
pub fn relative_cohomology_dim(g: &LieAlgebra, k: usize) -> Result<(usize, usize), LieError> {
    let c = relative_cochain_basis(g, k)?.len();
    let out_rank = restricted_rank(g, k)?;
    let in_rank = if k == 0 { 0 } else { restricted_rank(g, k - 1)? };
    Ok((c, c - out_rank - in_rank))
}
