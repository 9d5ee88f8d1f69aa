//! Linear connections in the frame: the bi-invariant base connection of a
//! reductive decomposition and its symplectization.

use liealg::LieAlgebra;
use symexpr::{GaussRat, Scalar, ScalarMatrix};

use crate::{FrameGeometry, GeomError};
use dynr::{rank_flags, DynamicalR};

/// Christoffels `Γ_{AB}^C` with `∇_{X_A} X_B = Σ_C Γ_{AB}^C X_C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameConnection {
    size: usize,
    gamma: Vec<Scalar>,
}

impl FrameConnection {
    pub fn zero(size: usize) -> Self {
        FrameConnection { size, gamma: vec![Scalar::zero(); size * size * size] }
    }
    pub fn size(&self) -> usize {
        self.size
    }
    fn at(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.size + b) * self.size + c
    }
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.gamma[self.at(a, b, c)]
    }
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: Scalar) {
        let k = self.at(a, b, c);
        self.gamma[k] = v;
    }
    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(Scalar::is_zero)
    }
    /// Nonzero `(A, B, C, Γ_{AB}^C)`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.size;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let g = self.get(a, b, c);
                    if !g.is_zero() {
                        out.push((a, b, c, g.clone()));
                    }
                }
            }
        }
        out
    }

    /// `∇_{X_A} X_B` as a frame vector.
    pub fn nabla(&self, a: usize, b: usize) -> Vec<Scalar> {
        (0..self.size).map(|c| self.get(a, b, c).clone()).collect()
    }

    /// `Γ_{AB}^C − Γ_{BA}^C − C_{AB}^C` for all index triples.
    pub fn torsion_violations(&self, geom: &FrameGeometry) -> Vec<(usize, usize, usize)> {
        let n = self.size;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t = self.get(a, b, c).sub(self.get(b, a, c)).sub(&geom.structure_constant(a, b, c));
                    if !t.is_zero() {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// `(∇_A ω)_{BC} = X_A ω_{BC} − Γ_{AB}^E ω_{EC} − Γ_{AC}^E ω_{BE}`.
    pub fn nabla_omega(&self, geom: &FrameGeometry, a: usize, b: usize, c: usize) -> Scalar {
        let w = &geom.symplectic;
        let mut out = geom.frame_deriv(w.get(b, c), a);
        for e in 0..self.size {
            out = out.sub(&self.get(a, b, e).mul(w.get(e, c)));
            out = out.sub(&self.get(a, c, e).mul(w.get(b, e)));
        }
        out
    }

    pub fn add(&self, o: &FrameConnection) -> FrameConnection {
        assert_eq!(self.size, o.size);
        FrameConnection { size: self.size, gamma: self.gamma.iter().zip(&o.gamma).map(|(x, y)| x.add(y)).collect() }
    }
}

/// A complement 𝔪 of 𝔥 in 𝔤 together with the adapted basis {h₁..hₗ, m₁..}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complement {
    /// Basis of 𝔪 in coordinates of 𝔤.
    pub basis: Vec<Vec<Scalar>>,
    /// Column `k` is the k-th adapted basis vector (h's first).
    pub adapted: ScalarMatrix,
    /// Inverse of `adapted`: row `k` gives the k-th adapted coordinate.
    pub coords: ScalarMatrix,
}

impl Complement {
    /// Validates that 𝔥 ⊕ span(basis) = 𝔤.
    pub fn new(g: &LieAlgebra, basis: Vec<Vec<Scalar>>) -> Result<Complement, GeomError> {
        let (l, n) = (g.cartan_dim(), g.dim());
        if basis.len() != n - l || basis.iter().any(|v| v.len() != n) {
            return Err(GeomError::BadComplement(format!("need {} vectors of length {}", n - l, n)));
        }
        let mut adapted = ScalarMatrix::zeros(n, n);
        for i in 0..l {
            adapted.set(i, i, Scalar::one());
        }
        for (k, v) in basis.iter().enumerate() {
            for a in 0..n {
                adapted.set(a, l + k, v[a].clone());
            }
        }
        let coords = adapted.inverse().ok_or_else(|| GeomError::BadComplement("𝔥 + 𝔪 ≠ 𝔤".into()))?;
        Ok(Complement { basis, adapted, coords })
    }

    /// The standard complement span{e_{l+1}..e_n}.
    pub fn standard(g: &LieAlgebra) -> Complement {
        let (l, n) = (g.cartan_dim(), g.dim());
        let basis = (l..n)
            .map(|a| (0..n).map(|b| if a == b { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        Complement::new(g, basis).expect("standard complement")
    }

    /// Splits `x` into its 𝔥- and 𝔪-components.
    pub fn split(&self, x: &[Scalar], l: usize) -> (Vec<Scalar>, Vec<Scalar>) {
        let n = x.len();
        let c: Vec<Scalar> = (0..n)
            .map(|k| (0..n).fold(Scalar::zero(), |acc, a| acc.add(&self.coords.get(k, a).mul(&x[a]))))
            .collect();
        let mut xh = vec![Scalar::zero(); n];
        let mut xm = vec![Scalar::zero(); n];
        for (k, ck) in c.iter().enumerate() {
            let target = if k < l { &mut xh } else { &mut xm };
            for a in 0..n {
                target[a] = target[a].add(&ck.mul(self.adapted.get(a, k)));
            }
        }
        (xh, xm)
    }

    pub fn contains(&self, x: &[Scalar], l: usize) -> bool {
        self.split(x, l).0.iter().all(Scalar::is_zero)
    }

    /// Rejects complements with `[𝔥, 𝔪] ⊄ 𝔪`.
    pub fn check_reductive(&self, g: &LieAlgebra) -> Result<(), GeomError> {
        let (l, n) = (g.cartan_dim(), g.dim());
        for i in 0..l {
            let mut h = vec![Scalar::zero(); n];
            h[i] = Scalar::one();
            for (k, m) in self.basis.iter().enumerate() {
                if !self.contains(&g.bracket(&h, m), l) {
                    return Err(GeomError::NonReductive(format!("[h{}, m{}] ∉ 𝔪", i + 1, k + 1)));
                }
            }
        }
        Ok(())
    }
}

/// 𝔪 = r(λ₀)^# 𝔥^⊥, reduced to row-echelon form.
pub fn reductive_complement(rm: &DynamicalR, lambda0: &[GaussRat]) -> Result<Complement, GeomError> {
    let (l, n) = (rm.l(), rm.n());
    if lambda0.len() != l {
        return Err(dynr::DynrError::PointDimension { got: lambda0.len(), expected: l }.into());
    }
    if !rank_flags(rm)?.nondegenerate {
        return Err(GeomError::Degenerate);
    }
    let full = rm.matrix();
    let mut rows = Vec::new();
    for j in l..n {
        let mut row = Vec::new();
        for b in 0..n {
            let v = full
                .get(j, b)
                .eval(lambda0)
                .ok_or_else(|| GeomError::SingularPoint(format!("pole of {} at the base point", full.get(j, b))))?;
            row.push(Scalar::constant(v));
        }
        rows.push(row);
    }
    let m = rows.len();
    let (red, pivots) = ScalarMatrix::from_rows(rows).rref();
    if pivots.len() != m {
        return Err(GeomError::SingularPoint(format!("rank of r(λ₀)^# on 𝔥^⊥ drops to {}", pivots.len())));
    }
    let basis: Vec<Vec<Scalar>> = (0..m).map(|k| red.row(k)).collect();
    let c = Complement::new(&rm.alg, basis)
        .map_err(|_| GeomError::SingularPoint("r(λ₀)^#𝔥^⊥ meets 𝔥".into()))?;
    c.check_reductive(&rm.alg)?;
    Ok(c)
}

/// Bi-invariant torsion-free connection of a reductive decomposition:
/// `∇⁰_{ē_x} ē_y = ([x_𝔥, y] + ½[x_𝔪, y_𝔪])‾`, all other components zero.
pub fn base_connection(g: &LieAlgebra, m: &Complement) -> Result<FrameConnection, GeomError> {
    m.check_reductive(g)?;
    let (l, n) = (g.cartan_dim(), g.dim());
    let half = Scalar::ratio(1, 2);
    let unit = |a: usize| -> Vec<Scalar> { (0..n).map(|b| if a == b { Scalar::one() } else { Scalar::zero() }).collect() };
    let parts: Vec<(Vec<Scalar>, Vec<Scalar>)> = (0..n).map(|a| m.split(&unit(a), l)).collect();
    let mut conn = FrameConnection::zero(l + n);
    for a in 0..n {
        for b in 0..n {
            let x = g.bracket(&parts[a].0, &unit(b));
            let y = g.bracket(&parts[a].1, &parts[b].1);
            for c in 0..n {
                conn.set(l + a, l + b, l + c, x[c].add(&half.mul(&y[c])));
            }
        }
    }
    let torsion = torsion_of(&conn, g);
    if let Some((a, b, c)) = torsion {
        return Err(GeomError::CheckFailed(format!("base connection has torsion at ({},{},{})", a, b, c)));
    }
    Ok(conn)
}

fn torsion_of(conn: &FrameConnection, g: &LieAlgebra) -> Option<(usize, usize, usize)> {
    let (l, n) = (g.cartan_dim(), g.dim());
    let nn = l + n;
    for a in 0..nn {
        for b in 0..nn {
            for c in 0..nn {
                let s = if a >= l && b >= l && c >= l { g.structure_constant(a - l, b - l, c - l) } else { Scalar::zero() };
                if !conn.get(a, b, c).sub(conn.get(b, a, c)).sub(&s).is_zero() {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// `∇ = ∇⁰ + S` with `ω(S(X,Y),Z) = ⅓[(∇⁰_Xω)(Y,Z) + (∇⁰_Yω)(X,Z)]`.
/// The result is checked to be symplectic, torsion-free, and to parallelize
/// every `ē_h`.
pub fn symplectize(base: &FrameConnection, geom: &FrameGeometry) -> Result<FrameConnection, GeomError> {
    let nn = geom.size();
    assert_eq!(base.size(), nn, "connection and geometry disagree on frame size");
    if let Some(&(a, b, c)) = base.torsion_violations(geom).first() {
        return Err(GeomError::CheckFailed(format!("base connection has torsion at ({},{},{})", a, b, c)));
    }
    let mut t = vec![Scalar::zero(); nn * nn * nn];
    for a in 0..nn {
        for b in 0..nn {
            for c in 0..nn {
                t[(a * nn + b) * nn + c] = base.nabla_omega(geom, a, b, c);
            }
        }
    }
    let third = Scalar::ratio(1, 3);
    let p = &geom.poisson;
    let mut s = FrameConnection::zero(nn);
    for a in 0..nn {
        for b in 0..nn {
            let u: Vec<Scalar> =
                (0..nn).map(|c| third.mul(&t[(a * nn + b) * nn + c].add(&t[(b * nn + a) * nn + c]))).collect();
            for e in 0..nn {
                let v = (0..nn).fold(Scalar::zero(), |acc, c| acc.add(&u[c].mul(p.get(c, e))));
                s.set(a, b, e, v);
            }
        }
    }
    let conn = base.add(&s);
    for a in 0..nn {
        for b in 0..nn {
            for c in 0..nn {
                let v = conn.nabla_omega(geom, a, b, c);
                if !v.is_zero() {
                    return Err(GeomError::CheckFailed(format!("(∇_{} ω)_{{{}{}}} = {}", a, b, c, v)));
                }
            }
        }
    }
    if let Some(&(a, b, c)) = conn.torsion_violations(geom).first() {
        return Err(GeomError::CheckFailed(format!("symplectic connection has torsion at ({},{},{})", a, b, c)));
    }
    for i in 0..geom.l() {
        let h = geom.h_index(i);
        for a in 0..nn {
            if conn.nabla(a, h).iter().any(|v| !v.is_zero()) {
                return Err(GeomError::CheckFailed(format!("∇_{} ē_h{} ≠ 0", a, i + 1)));
            }
        }
    }
    Ok(conn)
}

/// Shape of the symplectic connection when r ∈ ∧²𝔪 and the basis of 𝔤 is
/// adapted (𝔪 = span{e_{l+1}..e_n}). Returns a description of each
/// violated entry.
pub fn table_shape_violations(conn: &FrameConnection, geom: &FrameGeometry) -> Vec<String> {
    let (l, nn) = (geom.l(), geom.size());
    let g = &geom.rm.alg;
    let is_m = |c: usize| c >= 2 * l;
    let mut out = Vec::new();
    let mut expect = |a: usize, b: usize, what: &str, ok: &dyn Fn(usize, &Scalar) -> bool| {
        for c in 0..nn {
            let v = conn.get(a, b, c);
            if !ok(c, v) {
                out.push(format!("∇_{} X{} ({}) has component {} along X{}", a, b, what, v, c));
            }
        }
    };
    for a in 0..nn {
        for b in 0..nn {
            let (ad, ah, bd, bh) = (a < l, geom.is_h_index(a), b < l, geom.is_h_index(b));
            if bh || ((ad || ah) && bd) {
                expect(a, b, "zero", &|_, v| v.is_zero());
            } else if ad || bd {
                expect(a, b, "𝔪-valued", &|c, v| v.is_zero() || is_m(c));
            } else if ah {
                // [h, e]‾ exactly
                let br = g.bracket_basis(a - l, b - l);
                expect(a, b, "[h,e]", &|c, v| {
                    let want = br.iter().find(|(k, _)| *k + l == c).map(|(_, s)| s.clone()).unwrap_or_else(Scalar::zero);
                    *v == want
                });
            } else {
                // ½[e, e'] up to 𝔪-components
                let br = g.bracket_basis(a - l, b - l);
                expect(a, b, "½[e,e'] mod 𝔪", &|c, v| {
                    if is_m(c) {
                        return true;
                    }
                    let want = br
                        .iter()
                        .find(|(k, _)| *k + l == c)
                        .map(|(_, s)| s.mul(&Scalar::ratio(1, 2)))
                        .unwrap_or_else(Scalar::zero);
                    *v == want
                });
            }
        }
    }
    out
}
