//! The star product as a bidifferential operator, and the twist `F(λ)` read off it.

use fedosov::{Fedosov, Linear};
use symexpr::{Scalar, ScalarMatrix};

use crate::diffop::{theta_exp, tensor_operator, DiffOp, LegOp, MultiOp, OpSeries};
use crate::jet::{GJet, JetCtx};
use crate::pbw::{Mono, Pbw, UTensor};
use crate::QuantizeError;

/// The operator `B` with `f ⋆ g = Σ ℏᵏ B_k↑(f, g)`, obtained from the
/// parallel lift of the identity operator: `B = σ(1̃ ∘ 1̃)` with the
/// coefficient operators tensored.
pub fn universal_star(fed: &Fedosov, pbw: &Pbw, order: u32) -> Result<OpSeries, QuantizeError> {
    let one = DiffOp::identity(pbw.cartan_dim(), pbw.dim());
    let lift = fed.parallel_lift(&one, pbw)?;
    Ok(fed.star_of_lifts(&lift, &lift, order, |a, b| a.tensor(b))?)
}

/// The λ-derivative-free part of `B`, as an element of `U𝔤⊗U𝔤[[ℏ]]`.
pub fn invariant_part(b: &OpSeries, pbw: &Pbw) -> UTensor {
    let order = b.len() as u32 - 1;
    let mut f = UTensor::zero(2, pbw.dim(), order);
    for (k, p) in b.iter().enumerate() {
        f = f.add(&p.invariant_part(2, pbw.dim(), k as u32, order));
    }
    f
}

/// `B·Θ⁻¹ − F` as operators; zero exactly when `B = F(λ)Θ`.
pub fn theta_factor_residual(b: &OpSeries, f: &UTensor, pbw: &Pbw) -> OpSeries {
    let order = f.order();
    let binv = LegOp::from_series(b, order).mul(&theta_exp(pbw, order, -1), pbw).normalize();
    let fop = tensor_operator(f, pbw.cartan_dim());
    binv.iter().zip(&fop).map(|(x, y)| x.add(&y.neg())).collect()
}

/// `B·Θ⁻¹`, which must carry no λ-derivatives.
pub fn strip_theta(b: &OpSeries, pbw: &Pbw) -> OpSeries {
    let order = b.len() as u32 - 1;
    LegOp::from_series(b, order).mul(&theta_exp(pbw, order, -1), pbw).normalize()
}

/// Exponent vectors of total degree ≤ d in n variables, graded then lexicographic.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut cur = vec![0u32; n];
        fill(&mut out, &mut cur, 0, deg);
    }
    out
}

fn fill(out: &mut Vec<Mono>, cur: &mut Mono, i: usize, left: u32) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(out, cur, i + 1, left - e);
    }
    cur[i] = 0;
}

/// Recovers `F` from a black-box star product on λ-free jets by pairing PBW
/// monomials of degree ≤ d with coordinate monomials at the identity:
/// with `P_{αu} = (u↑x^α)(e)` and `S_{αβ} = (x^α ⋆ x^β)(e)`, the
/// coefficients are `C = P⁻¹ S P⁻ᵀ`.
pub fn pairing_extract(
    jets: &JetCtx,
    pbw: &Pbw,
    d: u32,
    order: u32,
    star: impl Fn(&GJet, &GJet) -> Result<Vec<GJet>, QuantizeError>,
) -> Result<UTensor, QuantizeError> {
    if jets.d_jet() < d {
        return Err(QuantizeError::JetDegree { need: d, have: jets.d_jet() });
    }
    let n = pbw.dim();
    let basis = monomials_up_to(n, d);
    let size = basis.len();
    let xs: Vec<GJet> = basis.iter().map(|a| jets.monomial(a)).collect();
    let mut p = ScalarMatrix::zeros(size, size);
    for (i, x) in xs.iter().enumerate() {
        for (j, u) in basis.iter().enumerate() {
            p.set(i, j, jets.apply_pbw(u, x).at_identity());
        }
    }
    let pinv = p.inverse().ok_or(QuantizeError::SingularPairing { degree: d })?;
    let pinv_t = pinv.transpose();
    let mut s: Vec<ScalarMatrix> = vec![ScalarMatrix::zeros(size, size); order as usize + 1];
    for (i, xa) in xs.iter().enumerate() {
        for (j, xb) in xs.iter().enumerate() {
            let prod = star(xa, xb)?;
            for (k, g) in prod.iter().enumerate().take(order as usize + 1) {
                if g.prec() < 0 {
                    return Err(QuantizeError::JetDegree { need: d + 1, have: jets.d_jet() });
                }
                s[k].set(i, j, g.at_identity());
            }
        }
    }
    let mut f = UTensor::zero(2, n, order);
    for (k, sk) in s.iter().enumerate() {
        let c = pinv.mul(sk).mul(&pinv_t);
        for (a, u) in basis.iter().enumerate() {
            for (b, v) in basis.iter().enumerate() {
                let x = c.get(a, b);
                if !x.is_zero() {
                    f.add_term(k as u32, vec![u.clone(), v.clone()], x.clone());
                }
            }
        }
    }
    Ok(f)
}

/// `f ⋆ g` through jets: lifts with jet coefficients, fiber product, symbol.
pub fn fedosov_jet_star(fed: &Fedosov, jets: &JetCtx, f: &GJet, g: &GJet, order: u32) -> Result<Vec<GJet>, QuantizeError> {
    let a = fed.parallel_lift(f, jets)?;
    let b = fed.parallel_lift(g, jets)?;
    Ok(fed.star_of_lifts(&a, &b, order, |x, y| x.mul_jet(y))?)
}

/// `B↑(f, g)` on single jets.
pub fn op_star(jets: &JetCtx, b: &[MultiOp], f: &GJet, g: &GJet) -> Vec<GJet> {
    b.iter().map(|p| p.apply(jets, &[f, g])).collect()
}

/// The pure-power expectation `exp((ℏ/2) Σ_{a<b} r^{ab}(e_a⊗e_b − e_b⊗e_a))` for
/// constant `r` on an abelian algebra.
pub fn exp_half_r(r: &UTensor, pbw: &Pbw) -> UTensor {
    let order = r.order();
    let x = r.shift_hbar(1).scale(&Scalar::ratio(1, 2));
    let mut out = UTensor::one(2, pbw.dim(), order);
    let mut pow = out.clone();
    for j in 1..=order {
        pow = pow.mul(&x, pbw).scale(&Scalar::ratio(1, j as i64));
        out = out.add(&pow);
    }
    out
}
