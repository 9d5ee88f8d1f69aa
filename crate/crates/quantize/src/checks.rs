//! Residuals of the quantization axioms, the QDYBE, equivalence transforms,
//! and operator identities around `Θ`.

use dynr::DynamicalR;
use fedosov::Linear;
use symexpr::Scalar;

use crate::diffop::{apply_series, series_sub, tensor_operator, theta_exp, LegOp, MultiOp, OpSeries};
use crate::jet::{GJet, JetCtx};
use crate::pbw::{Pbw, UTensor};
use crate::QuantizeError;

fn half() -> Scalar {
    Scalar::ratio(1, 2)
}
fn minus_half() -> Scalar {
    Scalar::ratio(-1, 2)
}

/// The four axioms of a quantization of `r`, as residual tensors.
#[derive(Clone, Debug)]
pub struct QuantizationResiduals {
    /// `[h_i⊗1 + 1⊗h_i, F]` per Cartan generator.
    pub weight: Vec<UTensor>,
    /// `(ε⊗id)F − 1`.
    pub normal_left: UTensor,
    /// `(id⊗ε)F − 1`.
    pub normal_right: UTensor,
    /// `F₁ − F₁²¹ − r`.
    pub quantization: UTensor,
    /// `(Δ⊗id)F · F¹²(λ − ½ℏh⁽³⁾) − (id⊗Δ)F · F²³(λ + ½ℏh⁽¹⁾)`.
    pub cocycle: UTensor,
}

impl QuantizationResiduals {
    pub fn named(&self) -> Vec<(String, &UTensor)> {
        let mut out: Vec<(String, &UTensor)> =
            self.weight.iter().enumerate().map(|(i, w)| (format!("weight h{}", i + 1), w)).collect();
        out.push(("normal left".into(), &self.normal_left));
        out.push(("normal right".into(), &self.normal_right));
        out.push(("F1 - F1^21 = r".into(), &self.quantization));
        out.push(("shifted cocycle".into(), &self.cocycle));
        out
    }

    pub fn all_zero(&self) -> bool {
        self.named().iter().all(|(_, t)| t.is_zero())
    }
}

/// `(Δ⊗id)F · F¹²(λ − ½ℏh⁽³⁾)`.
pub fn cocycle_left(f: &UTensor, pbw: &Pbw) -> UTensor {
    f.coproduct(0).mul(&f.embed(3, &[0, 1]).shift(2, &minus_half(), pbw), pbw)
}

/// `(id⊗Δ)F · F²³(λ + ½ℏh⁽¹⁾)`.
pub fn cocycle_right(f: &UTensor, pbw: &Pbw) -> UTensor {
    f.coproduct(1).mul(&f.embed(3, &[1, 2]).shift(0, &half(), pbw), pbw)
}

pub fn cocycle_residual(f: &UTensor, pbw: &Pbw) -> UTensor {
    cocycle_left(f, pbw).sub(&cocycle_right(f, pbw))
}

pub fn quantization_check(f: &UTensor, rm: &DynamicalR, pbw: &Pbw) -> QuantizationResiduals {
    let (n, order) = (pbw.dim(), f.order());
    let one1 = UTensor::one(1, n, order);
    let f1 = f.hbar_coeff(1);
    let r = UTensor::from_bivector(&rm.r, 0, order);
    QuantizationResiduals {
        weight: f.weight_residual(pbw),
        normal_left: f.counit(0).sub(&one1),
        normal_right: f.counit(1).sub(&one1),
        quantization: f1.sub(&f1.permute(&[1, 0])).sub(&r),
        cocycle: cocycle_residual(f, pbw),
    }
}

/// `R = (F²¹)⁻¹ F¹²`.
pub fn r_matrix(f: &UTensor, pbw: &Pbw) -> Result<UTensor, QuantizeError> {
    let inv = f.permute(&[1, 0]).inverse(pbw).ok_or(QuantizeError::NotUnital)?;
    Ok(inv.mul(f, pbw))
}

/// `R¹²(λ+½ℏh⁽³⁾)R¹³(λ−½ℏh⁽²⁾)R²³(λ+½ℏh⁽¹⁾) − R²³(λ−½ℏh⁽¹⁾)R¹³(λ+½ℏh⁽²⁾)R¹²(λ−½ℏh⁽³⁾)`.
///
/// With `R = 1 + ℏr + O(ℏ²)` the `ℏ²` part of this residual is
/// `[r¹²,r¹³] + [r¹²,r²³] + [r¹³,r²³] + Alt(dr)`, the classical dynamical
/// Yang–Baxter expression; the shifts are oriented to match it.
pub fn qdybe_residual(f: &UTensor, pbw: &Pbw) -> Result<UTensor, QuantizeError> {
    qdybe_residual_oriented(f, pbw, 1)
}

/// The same expression with every shift reversed (`orientation = −1`), whose
/// `ℏ²` part is `CYB(r) − Alt(dr)` instead.
pub fn qdybe_residual_oriented(f: &UTensor, pbw: &Pbw, orientation: i64) -> Result<UTensor, QuantizeError> {
    let r = r_matrix(f, pbw)?;
    let (r12, r13, r23) = (r.embed(3, &[0, 1]), r.embed(3, &[0, 2]), r.embed(3, &[1, 2]));
    let p = Scalar::ratio(orientation, 2);
    let m = p.neg();
    let lhs = r12.shift(2, &p, pbw).mul(&r13.shift(1, &m, pbw), pbw).mul(&r23.shift(0, &p, pbw), pbw);
    let rhs = r23.shift(0, &m, pbw).mul(&r13.shift(1, &p, pbw), pbw).mul(&r12.shift(2, &m, pbw), pbw);
    Ok(lhs.sub(&rhs))
}

/// `[r¹²,r¹³] + [r¹²,r²³] + [r¹³,r²³] + Σᵢ (hᵢ⁽¹⁾∂ᵢr²³ − hᵢ⁽²⁾∂ᵢr¹³ + hᵢ⁽³⁾∂ᵢr¹²)`
/// for a two-leg tensor `r` at `ℏ⁰`.
pub fn classical_dybe(r: &UTensor, pbw: &Pbw) -> UTensor {
    let (r12, r13, r23) = (r.embed(3, &[0, 1]), r.embed(3, &[0, 2]), r.embed(3, &[1, 2]));
    let comm = |a: &UTensor, b: &UTensor| a.mul(b, pbw).sub(&b.mul(a, pbw));
    let mut out = comm(&r12, &r13).add(&comm(&r12, &r23)).add(&comm(&r13, &r23));
    let hs = UTensor::weight_operators(1, pbw, r.order());
    for (i, h) in hs.iter().enumerate() {
        let d = r.lambda_derivative(i);
        out = out
            .add(&h.embed(3, &[0]).mul(&d.embed(3, &[1, 2]), pbw))
            .sub(&h.embed(3, &[1]).mul(&d.embed(3, &[0, 2]), pbw))
            .add(&h.embed(3, &[2]).mul(&d.embed(3, &[0, 1]), pbw));
    }
    out
}

/// Rejects `T` unless `T ≡ 1 mod ℏ`, `ε(T) = 1` and `T` has zero weight.
pub fn check_gauge_element(t: &UTensor, pbw: &Pbw) -> Result<(), QuantizeError> {
    let one = UTensor::one(1, pbw.dim(), t.order());
    if t.hbar_coeff(0) != one.hbar_coeff(0) {
        return Err(QuantizeError::GaugeElement("T is not 1 mod ℏ".into()));
    }
    if t.counit(0) != UTensor::one(0, pbw.dim(), t.order()) {
        return Err(QuantizeError::GaugeElement("ε(T) ≠ 1".into()));
    }
    if t.weight_residual(pbw).iter().any(|w| !w.is_zero()) {
        return Err(QuantizeError::GaugeElement("T does not have zero weight".into()));
    }
    Ok(())
}

/// `T₁(λ − ½ℏh⁽²⁾) T₂(λ + ½ℏh⁽¹⁾)`.
pub fn shifted_pair(t: &UTensor, pbw: &Pbw) -> UTensor {
    let t1 = t.embed(2, &[0]).shift(1, &minus_half(), pbw);
    let t2 = t.embed(2, &[1]).shift(0, &half(), pbw);
    t1.mul(&t2, pbw)
}

/// `E = (ΔT)⁻¹ · F · T₁(λ − ½ℏh⁽²⁾) · T₂(λ + ½ℏh⁽¹⁾)`.
pub fn equivalence_transform(f: &UTensor, t: &UTensor, pbw: &Pbw) -> Result<UTensor, QuantizeError> {
    check_gauge_element(t, pbw)?;
    let t = t.truncate(f.order());
    let dt_inv = t.coproduct(0).inverse(pbw).ok_or(QuantizeError::NotUnital)?;
    Ok(dt_inv.mul(f, pbw).mul(&shifted_pair(&t, pbw), pbw))
}

/// `Θ X Θ⁻¹ − Y` as operators, for the conjugation identities below.
fn conjugation_residual(x: &LegOp, y: &UTensor, pbw: &Pbw) -> OpSeries {
    let order = y.order();
    let lhs = theta_exp(pbw, order, 1).mul(x, pbw).mul(&theta_exp(pbw, order, -1), pbw).normalize();
    let rhs = tensor_operator(y, pbw.cartan_dim());
    lhs.iter().zip(&rhs).map(|(a, b)| a.add(&b.neg())).collect()
}

/// Residuals of `Θ(T⊗1)Θ⁻¹ = T₁(λ−½ℏh⁽²⁾)`, `Θ(1⊗T)Θ⁻¹ = T₂(λ+½ℏh⁽¹⁾)` and
/// `Θ(T⊗T)Θ⁻¹ = T₁(λ−½ℏh⁽²⁾)T₂(λ+½ℏh⁽¹⁾)`.
pub fn conjugation_identities(t: &UTensor, pbw: &Pbw) -> [(String, OpSeries); 3] {
    let l = pbw.cartan_dim();
    let t1 = LegOp::from_tensor(&t.embed(2, &[0]), l, 0);
    let t2 = LegOp::from_tensor(&t.embed(2, &[1]), l, 1);
    let tt = t1.mul(&t2, pbw);
    let y1 = t.embed(2, &[0]).shift(1, &minus_half(), pbw);
    let y2 = t.embed(2, &[1]).shift(0, &half(), pbw);
    [
        ("Θ(T⊗1)Θ⁻¹ = T1(λ-ℏh2/2)".into(), conjugation_residual(&t1, &y1, pbw)),
        ("Θ(1⊗T)Θ⁻¹ = T2(λ+ℏh1/2)".into(), conjugation_residual(&t2, &y2, pbw)),
        ("Θ(T⊗T)Θ⁻¹ = T1 T2 shifted".into(), conjugation_residual(&tt, &shifted_pair(t, pbw), pbw)),
    ]
}

pub fn ops_zero(s: &[MultiOp]) -> bool {
    s.iter().all(|p| p.is_zero())
}

/// A jet as an ℏ-series with a single ℏ⁰ term.
pub fn series(f: &GJet) -> Vec<GJet> {
    vec![f.clone()]
}

/// `(f⋆g)⋆h − f⋆(g⋆h)` for the star product with operator `b`.
pub fn associativity_defect(jets: &JetCtx, b: &[MultiOp], f: &[GJet], g: &[GJet], h: &[GJet], order: u32) -> Vec<GJet> {
    let fg = apply_series(jets, b, &[f, g], order);
    let gh = apply_series(jets, b, &[g, h], order);
    series_sub(&apply_series(jets, b, &[&fg, h], order), &apply_series(jets, b, &[f, &gh], order))
}

/// `Θ(Θ(f,g),h) − Θ(f,Θ(g,h))` on jets.
pub fn theta_cocycle_defect(jets: &JetCtx, pbw: &Pbw, f: &GJet, g: &GJet, h: &GJet, order: u32) -> Vec<GJet> {
    let th = theta_exp(pbw, order, 1).normalize();
    associativity_defect(jets, &th, &series(f), &series(g), &series(h), order)
}

/// Pieces relating the cocycle condition to associativity on λ-free jets:
/// `(f⋆g)⋆h − P_L↑(f,g,h)`, `f⋆(g⋆h) − P_R↑(f,g,h)`, and the associativity
/// defect minus the cocycle residual, with `P_L`, `P_R` the two sides of
/// the shifted cocycle condition.
pub struct CocycleAssociativity {
    pub left: Vec<GJet>,
    pub right: Vec<GJet>,
    pub defect_minus_residual: Vec<GJet>,
    pub defect: Vec<GJet>,
}

pub fn cocycle_vs_associativity(
    jets: &JetCtx,
    pbw: &Pbw,
    f_twist: &UTensor,
    b: &[MultiOp],
    fs: [&GJet; 3],
) -> CocycleAssociativity {
    let order = f_twist.order();
    let l = pbw.cartan_dim();
    let (f, g, h) = (series(fs[0]), series(fs[1]), series(fs[2]));
    let fg = apply_series(jets, b, &[&f, &g], order);
    let gh = apply_series(jets, b, &[&g, &h], order);
    let left_star = apply_series(jets, b, &[&fg, &h], order);
    let right_star = apply_series(jets, b, &[&f, &gh], order);
    let pl = tensor_operator(&cocycle_left(f_twist, pbw), l);
    let pr = tensor_operator(&cocycle_right(f_twist, pbw), l);
    let pres = tensor_operator(&cocycle_residual(f_twist, pbw), l);
    let left = series_sub(&left_star, &apply_series(jets, &pl, &[&f, &g, &h], order));
    let right = series_sub(&right_star, &apply_series(jets, &pr, &[&f, &g, &h], order));
    let defect = series_sub(&left_star, &right_star);
    let res = apply_series(jets, &pres, &[&f, &g, &h], order);
    CocycleAssociativity { left, right, defect_minus_residual: series_sub(&defect, &res), defect }
}

/// `Σ_k (s ℏ/2)^k/k! ∂^k f · ē_h^k g` for λ-only `f`; the two mixed
/// product laws for `f(λ)` use `s = −1` (left) and `s = +1` (right).
pub fn momentum_expansion(jets: &JetCtx, f: &GJet, g: &GJet, sign: i64, order: u32) -> Vec<GJet> {
    let l = jets.algebra().cartan_dim();
    let mut out = vec![GJet::zero(); order as usize + 1];
    // terms: (∂^α f, ē_h^α g, multinomial weight) grown one index at a time
    let mut cur: Vec<(GJet, GJet)> = vec![(f.clone(), g.clone())];
    out[0] = f.mul_jet(g);
    let mut fact = 1i64;
    for k in 1..=order {
        fact *= k as i64;
        let mut next = Vec::new();
        for (df, hg) in &cur {
            for i in 0..l {
                next.push((df.diff_lambda(i), jets.apply_field(i, hg)));
            }
        }
        let c = Scalar::ratio(sign.pow(k), fact * 2i64.pow(k));
        let mut s = GJet::zero();
        for (df, hg) in &next {
            s = s.add(&df.mul_jet(hg));
        }
        out[k as usize] = s.scale(&c);
        cur = next;
    }
    out
}

/// `Σ_k (s ℏ/2)^k/k! F↑(∂^k f, ē_h^k g)` (or with the slots swapped), the
/// mixed product laws for a λ-free jet `g`.
pub fn twisted_expansion(
    jets: &JetCtx,
    f_twist: &UTensor,
    f: &GJet,
    g: &GJet,
    g_first: bool,
    order: u32,
) -> Vec<GJet> {
    let l = jets.algebra().cartan_dim();
    let fop = tensor_operator(f_twist, l);
    let sign: i64 = if g_first { 1 } else { -1 };
    let mut out = vec![GJet::zero(); order as usize + 1];
    let mut cur: Vec<(GJet, GJet)> = vec![(f.clone(), g.clone())];
    let mut fact = 1i64;
    for k in 0..=order {
        if k > 0 {
            fact *= k as i64;
            let mut next = Vec::new();
            for (df, hg) in &cur {
                for i in 0..l {
                    next.push((df.diff_lambda(i), jets.apply_field(i, hg)));
                }
            }
            cur = next;
        }
        let c = Scalar::ratio(sign.pow(k), fact * 2i64.pow(k));
        for (df, hg) in &cur {
            let (a, b) = if g_first { (hg, df) } else { (df, hg) };
            let part = apply_series(jets, &fop, &[&series(a), &series(b)], order - k);
            for (j, p) in part.iter().enumerate() {
                out[j + k as usize] = out[j + k as usize].add(&p.scale(&c));
            }
        }
    }
    out
}
