use std::fmt;
use symexpr::Scalar;

use crate::LieError;

/// A finite-dimensional Lie algebra with 𝔥 spanned by the first `cartan_dim` basis vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    cartan_dim: usize,
    /// `table[a][b]` lists `(c, coeff)` with `[e_a, e_b] = Σ coeff e_c`.
    table: Vec<Vec<Vec<(usize, Scalar)>>>,
}

/// Problems found by [`LieAlgebra::validate`]; empty means a valid algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// `(a, b)` with `c_ab ≠ −c_ba`.
    pub antisymmetry: Vec<(usize, usize)>,
    /// `(a, b, c)` with a nonzero Jacobiator.
    pub jacobi: Vec<(usize, usize, usize)>,
    /// `(a, b)` inside 𝔥 with `[h_a, h_b] ≠ 0`.
    pub abelian_h: Vec<(usize, usize)>,
    /// `(a, b)` whose bracket has a λ-dependent constant.
    pub lambda_dependent: Vec<(usize, usize)>,
}

impl Diagnostics {
    pub fn is_empty(&self) -> bool {
        self.antisymmetry.is_empty()
            && self.jacobi.is_empty()
            && self.abelian_h.is_empty()
            && self.lambda_dependent.is_empty()
    }
}

impl LieAlgebra {
    /// Builds the algebra exactly as specified by the triples `(i, j, k, c)` meaning
    /// `c_ij^k = c`. Nothing is symmetrized; use [`LieAlgebra::from_brackets`] for that.
    pub fn from_raw(
        labels: Vec<String>,
        cartan_dim: usize,
        triples: &[(usize, usize, usize, Scalar)],
    ) -> Result<LieAlgebra, LieError> {
        let n = labels.len();
        if cartan_dim > n {
            return Err(LieError::CartanTooLarge { cartan_dim, dim: n });
        }
        let mut table = vec![vec![Vec::<(usize, Scalar)>::new(); n]; n];
        for (i, j, k, c) in triples {
            if *i >= n || *j >= n || *k >= n {
                return Err(LieError::IndexOutOfRange { index: *i.max(j).max(k), dim: n });
            }
            let entry = &mut table[*i][*j];
            match entry.iter_mut().find(|(kk, _)| kk == k) {
                Some((_, v)) => *v = v.add(c),
                None => entry.push((*k, c.clone())),
            }
        }
        for row in table.iter_mut() {
            for e in row.iter_mut() {
                e.retain(|(_, c)| !c.is_zero());
                e.sort_by_key(|(k, _)| *k);
            }
        }
        Ok(LieAlgebra { labels, cartan_dim, table })
    }

    /// Builds from brackets `[e_i, e_j] = Σ c e_k` given for `i < j` (or either order);
    /// the opposite order is filled in antisymmetrically.
    pub fn from_brackets(
        labels: Vec<String>,
        cartan_dim: usize,
        brackets: &[(usize, usize, usize, Scalar)],
    ) -> Result<LieAlgebra, LieError> {
        let mut all = Vec::with_capacity(2 * brackets.len());
        for (i, j, k, c) in brackets {
            if i == j {
                return Err(LieError::SelfBracket { index: *i });
            }
            all.push((*i, *j, *k, c.clone()));
            all.push((*j, *i, *k, c.neg()));
        }
        LieAlgebra::from_raw(labels, cartan_dim, &all)
    }

    pub fn abelian(labels: Vec<String>, cartan_dim: usize) -> LieAlgebra {
        LieAlgebra::from_raw(labels, cartan_dim, &[]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn cartan_dim(&self) -> usize {
        self.cartan_dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn is_cartan(&self, a: usize) -> bool {
        a < self.cartan_dim
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.table[a][b]
    }

    /// All nonzero structure constants `(a, b, c, c_ab^c)`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                for (c, v) in &self.table[a][b] {
                    out.push((a, b, *c, v.clone()));
                }
            }
        }
        out
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> Scalar {
        self.table[a][b].iter().find(|(k, _)| *k == c).map(|(_, v)| v.clone()).unwrap_or_default()
    }

    /// Bracket of coordinate vectors.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for a in 0..n {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if v[b].is_zero() {
                    continue;
                }
                let uv = u[a].mul(&v[b]);
                for (c, k) in &self.table[a][b] {
                    out[*c] = out[*c].add(&uv.mul(k));
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`: entry `[b][a]` is the `e_b`-component of `[x, e_a]`.
    pub fn ad_matrix(&self, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for a in 0..n {
            let mut ea = vec![Scalar::zero(); n];
            ea[a] = Scalar::one();
            let col = self.bracket(x, &ea);
            for b in 0..n {
                m[b][a] = col[b].clone();
            }
        }
        m
    }

    pub fn validate(&self) -> Diagnostics {
        let n = self.dim();
        let mut d = Diagnostics::default();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.structure_constant(a, b, c) != self.structure_constant(b, a, c).neg() {
                        if !d.antisymmetry.contains(&(a.min(b), a.max(b))) {
                            d.antisymmetry.push((a.min(b), a.max(b)));
                        }
                    }
                }
                if self.table[a][b].iter().any(|(_, v)| !v.is_constant()) {
                    d.lambda_dependent.push((a, b));
                }
                if a < b && a < self.cartan_dim && b < self.cartan_dim && !self.table[a][b].is_empty() {
                    d.abelian_h.push((a, b));
                }
            }
        }
        let unit = |i: usize| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        };
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let (x, y, z) = (unit(a), unit(b), unit(c));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z));
                    let t2 = self.bracket(&y, &self.bracket(&z, &x));
                    let t3 = self.bracket(&z, &self.bracket(&x, &y));
                    if (0..n).any(|i| !t1[i].add(&t2[i]).add(&t3[i]).is_zero()) {
                        d.jacobi.push((a, b, c));
                    }
                }
            }
        }
        d
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({:?}, l={}", self.labels, self.cartan_dim)?;
        for (a, b, c, v) in self.structure_constants() {
            if a < b {
                write!(f, ", [{},{}]^{}={}", self.labels[a], self.labels[b], self.labels[c], v)?;
            }
        }
        write!(f, ")")
    }
}

/// Reports Jacobi, antisymmetry, and abelian-𝔥 violations.
pub fn validate_lie_algebra(g: &LieAlgebra) -> Diagnostics {
    g.validate()
}
