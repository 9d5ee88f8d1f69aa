//! Differential operators on `𝔥* × G` of the form `s(λ) ∂_λ^m u↑` with
//! `u ∈ U𝔤`, and multi-differential operators built from them.

use std::collections::BTreeMap;
use std::fmt;

use fedosov::{Coeff, Linear};
use symexpr::Scalar;

use crate::jet::{GJet, JetCtx};
use crate::pbw::{accumulate_into, binomial, mono_degree, Mono, Pbw, UTensor};

/// `Σ s(λ) ∂_λ^m u↑`, keyed by `(m, u)`.
#[derive(Clone, PartialEq, Default)]
pub struct DiffOp {
    terms: BTreeMap<(Mono, Mono), Scalar>,
}

impl DiffOp {
    pub fn identity(l: usize, n: usize) -> DiffOp {
        DiffOp::term(vec![0; l], vec![0; n], Scalar::one())
    }

    pub fn term(m: Mono, u: Mono, c: Scalar) -> DiffOp {
        let mut d = DiffOp::default();
        d.add_term(m, u, c);
        d
    }

    pub fn add_term(&mut self, m: Mono, u: Mono, c: Scalar) {
        accumulate_into(&mut self.terms, (m, u), c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Mono, Mono), &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Composition: `(s∂^m u)(t∂^n v) = s Σ_j C(m,j) (∂^j t) ∂^{m−j+n} (uv)`.
    pub fn compose(&self, o: &DiffOp, pbw: &Pbw) -> DiffOp {
        let mut out = DiffOp::default();
        for ((m, u), s) in &self.terms {
            for ((n, v), t) in &o.terms {
                let uv = pbw.mono_mul(u, v);
                for j in sub_multi_indices(m) {
                    let mut c = s.clone();
                    let mut dt = t.clone();
                    for (i, &e) in j.iter().enumerate() {
                        c = c.mul(&Scalar::from_i64(binomial(m[i], e)));
                        for _ in 0..e {
                            dt = dt.diff(i);
                        }
                    }
                    let c = c.mul(&dt);
                    if c.is_zero() {
                        continue;
                    }
                    let mm: Mono = (0..m.len()).map(|i| m[i] - j[i] + n[i]).collect();
                    for (w, s2) in &uv {
                        out.add_term(mm.clone(), w.clone(), c.mul(s2));
                    }
                }
            }
        }
        out
    }

    /// `self ⊗ o` as a bidifferential operator.
    pub fn tensor(&self, o: &DiffOp) -> MultiOp {
        let mut out = MultiOp::default();
        for ((m, u), s) in &self.terms {
            for ((n, v), t) in &o.terms {
                out.add_term(vec![(m.clone(), u.clone()), (n.clone(), v.clone())], s.mul(t));
            }
        }
        out
    }

    pub fn apply(&self, jets: &JetCtx, f: &GJet) -> GJet {
        let mut out = GJet::zero();
        for ((m, u), s) in &self.terms {
            out = out.add(&jets.apply_op(m, u, f).scale(s));
        }
        out
    }
}

/// All `j ≤ m` componentwise.
fn sub_multi_indices(m: &[u32]) -> Vec<Mono> {
    let mut out = vec![Vec::new()];
    for &e in m {
        out = out.into_iter().flat_map(|v: Mono| (0..=e).map(move |j| [v.clone(), vec![j]].concat())).collect();
    }
    out
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|((m, u), s)| format!("({s})∂{m:?}{u:?}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl Linear for DiffOp {
    fn zero() -> Self {
        DiffOp::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((m, u), c) in &o.terms {
            out.add_term(m.clone(), u.clone(), c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        self.scale(&Scalar::from_i64(-1))
    }
    fn scale(&self, s: &Scalar) -> Self {
        let mut out = DiffOp::default();
        for ((m, u), c) in &self.terms {
            out.add_term(m.clone(), u.clone(), c.mul(s));
        }
        out
    }
}

/// Coefficients of the universal lift: `X_a` acts by left composition,
/// `∂/∂λ^a` for `a < l` and `ē_{a−l}` otherwise.
impl Coeff for DiffOp {
    type Ctx = Pbw;
    fn from_scalar(ctx: &Pbw, s: &Scalar) -> Self {
        DiffOp::term(vec![0; ctx.cartan_dim()], ctx.unit(), s.clone())
    }
    fn frame_deriv(&self, ctx: &Pbw, _geom: &geom::FrameGeometry, a: usize) -> Self {
        let l = ctx.cartan_dim();
        let mut out = DiffOp::default();
        for ((m, u), s) in &self.terms {
            if a < l {
                out.add_term(m.clone(), u.clone(), s.diff(a));
                let mut m2 = m.clone();
                m2[a] += 1;
                out.add_term(m2, u.clone(), s.clone());
            } else {
                for (u2, c) in ctx.gen_mul(a - l, u).iter() {
                    out.add_term(m.clone(), u2.clone(), s.mul(c));
                }
            }
        }
        out
    }
}

/// A normalized multi-differential operator
/// `(f₁..f_N) ↦ Σ s(λ) Π_j ∂_λ^{m_j} u_j↑ f_j`, keyed by the per-leg `(m_j, u_j)`.
#[derive(Clone, PartialEq, Default)]
pub struct MultiOp {
    terms: BTreeMap<Vec<(Mono, Mono)>, Scalar>,
}

impl MultiOp {
    pub fn add_term(&mut self, legs: Vec<(Mono, Mono)>, c: Scalar) {
        accumulate_into(&mut self.terms, legs, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<(Mono, Mono)>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no leg differentiates in λ.
    pub fn is_left_invariant(&self) -> bool {
        self.terms.keys().all(|legs| legs.iter().all(|(m, _)| mono_degree(m) == 0))
    }

    /// The terms without λ-derivatives, as an `ℏ^k` tensor component.
    pub fn invariant_part(&self, legs: usize, dim: usize, k: u32, order: u32) -> UTensor {
        let mut t = UTensor::zero(legs, dim, order);
        for (ls, c) in &self.terms {
            if ls.iter().all(|(m, _)| mono_degree(m) == 0) {
                t.add_term(k, ls.iter().map(|(_, u)| u.clone()).collect(), c.clone());
            }
        }
        t
    }

    /// Largest PBW degree appearing in any leg.
    pub fn max_leg_degree(&self) -> u32 {
        self.terms.keys().flat_map(|ls| ls.iter().map(|(_, u)| mono_degree(u))).max().unwrap_or(0)
    }

    pub fn apply(&self, jets: &JetCtx, fs: &[&GJet]) -> GJet {
        let mut cache: Vec<BTreeMap<(Mono, Mono), GJet>> = vec![BTreeMap::new(); fs.len()];
        let mut out = GJet::zero();
        for (ls, s) in &self.terms {
            let mut prod: Option<GJet> = None;
            for (j, (m, u)) in ls.iter().enumerate() {
                let g = cache[j].entry((m.clone(), u.clone())).or_insert_with(|| jets.apply_op(m, u, fs[j])).clone();
                prod = Some(match prod {
                    None => g,
                    Some(p) => p.mul_jet(&g),
                });
            }
            if let Some(p) = prod {
                out = out.add(&p.scale(s));
            }
        }
        out
    }
}

impl fmt::Debug for MultiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(ls, s)| format!("({s}){ls:?}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

impl fmt::Display for MultiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl Linear for MultiOp {
    fn zero() -> Self {
        MultiOp::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (ls, c) in &o.terms {
            out.add_term(ls.clone(), c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        self.scale(&Scalar::from_i64(-1))
    }
    fn scale(&self, s: &Scalar) -> Self {
        let mut out = MultiOp::default();
        for (ls, c) in &self.terms {
            out.add_term(ls.clone(), c.mul(s));
        }
        out
    }
}

/// An ℏ-series of multi-differential operators, indexed by ℏ-power.
pub type OpSeries = Vec<MultiOp>;

/// `Σ_{a+b+..} ℏ^{a+b+..} P_a(f_b, ..)` truncated after `ℏ^order`, for jet series.
pub fn apply_series(jets: &JetCtx, op: &[MultiOp], args: &[&[GJet]], order: u32) -> Vec<GJet> {
    let mut out = vec![GJet::zero(); order as usize + 1];
    let mut stack: Vec<(usize, Vec<&GJet>)> = vec![(0, Vec::new())];
    for arg in args {
        let mut next = Vec::new();
        for (k, fs) in &stack {
            for (b, f) in arg.iter().enumerate() {
                if k + b <= order as usize && !f.is_zero() {
                    let mut fs = fs.clone();
                    fs.push(f);
                    next.push((k + b, fs));
                }
            }
        }
        stack = next;
    }
    for (k, fs) in &stack {
        for (a, p) in op.iter().enumerate() {
            if k + a <= order as usize && !p.is_zero() {
                out[k + a] = out[k + a].add(&p.apply(jets, fs));
            }
        }
    }
    out
}

pub fn series_is_zero(s: &[GJet]) -> bool {
    s.iter().all(|g| g.is_zero())
}

pub fn series_sub(a: &[GJet], b: &[GJet]) -> Vec<GJet> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(GJet::zero);
            let y = b.get(k).cloned().unwrap_or_else(GJet::zero);
            x.sub(&y)
        })
        .collect()
}

/// A sum of pure tensors `ℏ^k D₁⊗..⊗D_N` in `𝒜^{⊗N}`, multiplied legwise.
/// Each leg carries its own λ-coefficients, so products respect where
/// `∂/∂λ` acts.
#[derive(Clone, Debug)]
pub struct LegOp {
    order: u32,
    terms: Vec<(u32, Vec<DiffOp>)>,
}

impl LegOp {
    pub fn new(order: u32) -> LegOp {
        LegOp { order, terms: Vec::new() }
    }

    pub fn identity(legs: usize, l: usize, n: usize, order: u32) -> LegOp {
        LegOp { order, terms: vec![(0, vec![DiffOp::identity(l, n); legs])] }
    }

    pub fn push(&mut self, k: u32, legs: Vec<DiffOp>) {
        if k <= self.order && legs.iter().all(|d| !d.is_zero()) {
            self.terms.push((k, legs));
        }
    }

    /// Embeds a tensor of `U𝔤` elements with its λ-coefficients on leg `coeff_leg`.
    pub fn from_tensor(t: &UTensor, l: usize, coeff_leg: usize) -> LegOp {
        let mut out = LegOp::new(t.order());
        for ((k, ms), c) in t.terms() {
            let legs = ms
                .iter()
                .enumerate()
                .map(|(j, u)| DiffOp::term(vec![0; l], u.clone(), if j == coeff_leg { c.clone() } else { Scalar::one() }))
                .collect();
            out.push(*k, legs);
        }
        out
    }

    /// Embeds a normalized operator series as the leftmost factor of a product.
    pub fn from_series(op: &[MultiOp], order: u32) -> LegOp {
        let mut out = LegOp::new(order);
        for (k, p) in op.iter().enumerate() {
            for (ls, c) in p.terms() {
                let legs = ls
                    .iter()
                    .enumerate()
                    .map(|(j, (m, u))| DiffOp::term(m.clone(), u.clone(), if j == 0 { c.clone() } else { Scalar::one() }))
                    .collect();
                out.push(k as u32, legs);
            }
        }
        out
    }

    pub fn add(&self, o: &LegOp) -> LegOp {
        let mut out = LegOp::new(self.order.min(o.order));
        for (k, legs) in self.terms.iter().chain(&o.terms) {
            out.push(*k, legs.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> LegOp {
        let mut out = self.clone();
        for (_, legs) in &mut out.terms {
            legs[0] = legs[0].scale(s);
        }
        out
    }

    pub fn mul(&self, o: &LegOp, pbw: &Pbw) -> LegOp {
        let order = self.order.min(o.order);
        let mut out = LegOp::new(order);
        for (ka, la) in &self.terms {
            for (kb, lb) in &o.terms {
                if ka + kb > order {
                    continue;
                }
                let legs: Vec<DiffOp> = la.iter().zip(lb).map(|(a, b)| a.compose(b, pbw)).collect();
                out.push(ka + kb, legs);
            }
        }
        out
    }

    /// The multi-differential operator `m∘(Σ ℏ^k D₁⊗..⊗D_N)`, per ℏ-power.
    pub fn normalize(&self) -> OpSeries {
        let mut out = vec![MultiOp::default(); self.order as usize + 1];
        for (k, legs) in &self.terms {
            let mut partial: Vec<(Vec<(Mono, Mono)>, Scalar)> = vec![(Vec::new(), Scalar::one())];
            for d in legs {
                let mut next = Vec::new();
                for (ls, c) in &partial {
                    for ((m, u), s) in d.terms() {
                        let mut ls = ls.clone();
                        ls.push((m.clone(), u.clone()));
                        next.push((ls, c.mul(s)));
                    }
                }
                partial = next;
            }
            for (ls, c) in partial {
                out[*k as usize].add_term(ls, c);
            }
        }
        out
    }

    /// Re-expands after normalizing; exact when all coefficients are constant.
    fn collapse(&self) -> LegOp {
        LegOp::from_series(&self.normalize(), self.order)
    }
}

/// `θ = ½ Σᵢ (hᵢ⊗∂ᵢ − ∂ᵢ⊗hᵢ)` as a two-leg element.
pub fn theta(pbw: &Pbw, order: u32) -> LegOp {
    let (l, n) = (pbw.cartan_dim(), pbw.dim());
    let mut t = LegOp::new(order);
    for i in 0..l {
        let mut d = vec![0; l];
        d[i] = 1;
        let h = DiffOp::term(vec![0; l], pbw.generator(i), Scalar::ratio(1, 2));
        let dl = DiffOp::term(d.clone(), vec![0; n], Scalar::one());
        t.push(1, vec![h.clone(), dl.clone()]);
        t.push(1, vec![dl.scale(&Scalar::from_i64(-1)), h]);
    }
    t
}

/// `exp(±ℏθ)` truncated after `ℏ^order`.
pub fn theta_exp(pbw: &Pbw, order: u32, sign: i64) -> LegOp {
    let (l, n) = (pbw.cartan_dim(), pbw.dim());
    let th = theta(pbw, order).scale(&Scalar::from_i64(sign));
    let mut out = LegOp::identity(2, l, n, order);
    let mut pow = LegOp::identity(2, l, n, order);
    for j in 1..=order {
        pow = pow.mul(&th, pbw).collapse().scale(&Scalar::ratio(1, j as i64));
        out = out.add(&pow);
    }
    out.collapse()
}

/// Operator series of a two-leg tensor `F` composed with `Θ`: `F(λ)Θ`.
pub fn twist_operator(f: &UTensor, pbw: &Pbw) -> OpSeries {
    let th = theta_exp(pbw, f.order(), 1);
    LegOp::from_tensor(f, pbw.cartan_dim(), 0).mul(&th, pbw).normalize()
}

/// The ∂-free operator of a tensor, per ℏ-power.
pub fn tensor_operator(t: &UTensor, l: usize) -> OpSeries {
    LegOp::from_tensor(t, l, 0).normalize()
}
