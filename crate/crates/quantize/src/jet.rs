//! Truncated jets of functions on `𝔥* × G` at `(λ, e)`, in exponential
//! coordinates on `G`, and the left-invariant frame acting on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use fedosov::{Coeff, Linear, Ring};
use liealg::LieAlgebra;
use symexpr::{parse_expr, Expr, ParseError, Scalar, VarKind};

use crate::pbw::{accumulate_into, mono_degree, Mono};

/// A power series in `x¹..xⁿ` with λ-dependent coefficients, known exactly
/// through total degree `prec`.
#[derive(Clone)]
pub struct GJet {
    prec: i32,
    terms: BTreeMap<Mono, Scalar>,
}

/// Precision of exact zero.
const EXACT: i32 = i32::MAX;

impl GJet {
    pub fn from_terms(prec: i32, terms: impl IntoIterator<Item = (Mono, Scalar)>) -> GJet {
        let mut j = GJet { prec, terms: BTreeMap::new() };
        for (m, c) in terms {
            j.add_term(m, c);
        }
        j
    }

    pub fn constant(n: usize, prec: i32, c: Scalar) -> GJet {
        GJet::from_terms(prec, [(vec![0; n], c)])
    }

    /// The coordinate function `x^{i+1}` (zero-based `i`).
    pub fn coordinate(n: usize, prec: i32, i: usize) -> GJet {
        let mut m = vec![0; n];
        m[i] = 1;
        GJet::from_terms(prec, [(m, Scalar::one())])
    }

    pub fn prec(&self) -> i32 {
        self.prec
    }

    pub fn with_prec(&self, prec: i32) -> GJet {
        GJet::from_terms(prec.min(self.prec), self.terms.clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if (mono_degree(&m) as i64) <= self.prec as i64 {
            accumulate_into(&mut self.terms, m, c);
        }
    }

    /// Value at the identity of `G`, a function of λ.
    pub fn at_identity(&self) -> Scalar {
        self.terms.iter().find(|(m, _)| mono_degree(m) == 0).map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }

    /// True when no coefficient depends on λ.
    pub fn is_lambda_free(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    /// True when the jet is a function of λ alone.
    pub fn is_lambda_only(&self) -> bool {
        self.terms.keys().all(|m| mono_degree(m) == 0)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> GJet {
        GJet::from_terms(self.prec, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn sub(&self, o: &GJet) -> GJet {
        Linear::add(self, &o.neg())
    }

    pub fn mul_jet(&self, o: &GJet) -> GJet {
        let prec = self.prec.min(o.prec);
        let mut out = GJet { prec, terms: BTreeMap::new() };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m: Mono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca.mul(cb));
            }
        }
        out
    }

    pub fn diff_x(&self, b: usize) -> GJet {
        let mut out = GJet { prec: self.prec.saturating_sub(1), terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m[b] > 0 {
                let mut m2 = m.clone();
                m2[b] -= 1;
                out.add_term(m2, c.mul(&Scalar::from_i64(m[b] as i64)));
            }
        }
        out
    }

    pub fn diff_lambda(&self, i: usize) -> GJet {
        self.map_coeffs(|c| c.diff(i))
    }

    /// `1/self` when the value at `x = 0` is invertible.
    pub fn inverse(&self, n: usize) -> Option<GJet> {
        let c0 = self.at_identity();
        if c0.is_zero() {
            return None;
        }
        let inv0 = c0.inv();
        if self.is_lambda_only() {
            return Some(GJet::constant(n, self.prec, inv0));
        }
        if self.prec == EXACT {
            return None;
        }
        // 1/(c₀(1 + y)) = c₀⁻¹ Σ (−y)ᵏ
        let one = GJet::constant(n, self.prec, Scalar::one());
        let y = self.scale(&inv0).sub(&one);
        let mut out = one.clone();
        let mut pow = one;
        for _ in 0..self.prec.max(0) {
            pow = pow.mul_jet(&y.neg());
            out = Linear::add(&out, &pow);
        }
        Some(out.scale(&inv0))
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| mono_degree(m)).max().unwrap_or(0)
    }
}

impl PartialEq for GJet {
    /// Equality through the smaller of the two precisions.
    fn eq(&self, o: &GJet) -> bool {
        let p = self.prec.min(o.prec);
        self.sub(o).with_prec(p).terms.is_empty()
    }
}

impl fmt::Debug for GJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(x^{})", self.prec.saturating_add(1))
    }
}

impl fmt::Display for GJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Linear for GJet {
    fn zero() -> Self {
        GJet { prec: EXACT, terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let mut out = self.with_prec(prec);
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }
    fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs(|c| c.mul(s))
    }
}

/// Left-invariant frame `ē_a = Σ_b M^b_a(x) ∂/∂x^b` on jets of degree ≤ `d_jet`.
pub struct JetCtx {
    alg: Arc<LieAlgebra>,
    d_jet: u32,
    /// `fields[a][b] = M^b_a`.
    fields: Vec<Vec<GJet>>,
}

impl fmt::Debug for JetCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JetCtx").field("labels", &self.alg.labels()).field("d_jet", &self.d_jet).finish()
    }
}

/// Taylor coefficients of `z/(1 − e^{−z})` through `z^d`.
fn dexp_inverse_series(d: u32) -> Vec<Scalar> {
    // (1 − e^{−z})/z = Σ (−1)ⁿ zⁿ/(n+1)!
    let mut a = vec![Scalar::one()];
    let mut fact = 1i64;
    for k in 1..=d as i64 {
        fact *= k + 1;
        a.push(Scalar::ratio(if k % 2 == 0 { 1 } else { -1 }, fact));
    }
    let mut b = vec![Scalar::one()];
    for k in 1..=d as usize {
        let mut s = Scalar::zero();
        for j in 1..=k {
            s = s.add(&a[j].mul(&b[k - j]));
        }
        b.push(s.neg());
    }
    b
}

/// The matrices `M(x) = ψ(ad_x)`, `ψ(z) = z/(1 − e^{−z})`, giving the
/// left-invariant fields in exponential coordinates: `fields[a][b]` is the
/// coefficient of `∂/∂x^b` in `ē_a`.
pub fn left_invariant_fields(alg: &LieAlgebra, d_jet: u32) -> Vec<Vec<GJet>> {
    let n = alg.dim();
    let prec = d_jet as i32;
    // (ad_x)^c_b = Σ_a x^a c_{ab}^c
    let mut ad = vec![vec![GJet::zero().with_prec(prec); n]; n];
    for (a, b, c, s) in alg.structure_constants() {
        let t = GJet::coordinate(n, prec, a).scale(&s);
        ad[c][b] = Linear::add(&ad[c][b], &t);
    }
    let psi = dexp_inverse_series(d_jet);
    let identity: Vec<Vec<GJet>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { GJet::constant(n, prec, Scalar::one()) } else { GJet::zero().with_prec(prec) })
                .collect()
        })
        .collect();
    let mut total = identity.clone();
    let mut pow = identity;
    for coeff in psi.iter().skip(1) {
        let mut next = vec![vec![GJet::zero().with_prec(prec); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = GJet::zero().with_prec(prec);
                for k in 0..n {
                    if !ad[i][k].is_zero() && !pow[k][j].is_zero() {
                        s = Linear::add(&s, &ad[i][k].mul_jet(&pow[k][j]));
                    }
                }
                next[i][j] = s;
            }
        }
        pow = next;
        if pow.iter().all(|r| r.iter().all(|e| e.is_zero())) {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                total[i][j] = Linear::add(&total[i][j], &pow[i][j].scale(coeff));
            }
        }
    }
    // total[c][b] is the c-component of ψ(ad_x) e_b.
    (0..n).map(|a| (0..n).map(|b| total[b][a].clone()).collect()).collect()
}

impl JetCtx {
    pub fn new(alg: Arc<LieAlgebra>, d_jet: u32) -> JetCtx {
        let fields = left_invariant_fields(&alg, d_jet);
        JetCtx { alg, d_jet, fields }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
    pub fn d_jet(&self) -> u32 {
        self.d_jet
    }
    pub fn fields(&self) -> &[Vec<GJet>] {
        &self.fields
    }

    pub fn constant(&self, c: Scalar) -> GJet {
        GJet::constant(self.dim(), self.d_jet as i32, c)
    }

    pub fn coordinate(&self, i: usize) -> GJet {
        GJet::coordinate(self.dim(), self.d_jet as i32, i)
    }

    /// The jet of `Π (x^i)^{m_i}`.
    pub fn monomial(&self, m: &[u32]) -> GJet {
        GJet::from_terms(self.d_jet as i32, [(m.to_vec(), Scalar::one())])
    }

    /// `ē_a f`.
    pub fn apply_field(&self, a: usize, f: &GJet) -> GJet {
        let mut out = GJet::zero().with_prec(f.prec().saturating_sub(1));
        for (b, m) in self.fields[a].iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            out = Linear::add(&out, &m.mul_jet(&f.diff_x(b)));
        }
        out
    }

    /// `u↑f` for a PBW monomial `u = e₀^{u₀}e₁^{u₁}⋯`: the rightmost letter acts first.
    pub fn apply_pbw(&self, u: &[u32], f: &GJet) -> GJet {
        let mut g = f.clone();
        for a in (0..self.dim()).rev() {
            for _ in 0..u[a] {
                g = self.apply_field(a, &g);
            }
        }
        g
    }

    /// `∂_λ^m u↑ f`.
    pub fn apply_op(&self, m: &[u32], u: &[u32], f: &GJet) -> GJet {
        let mut g = self.apply_pbw(u, f);
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                g = g.diff_lambda(i);
            }
        }
        g
    }

    /// `[ē_a, ē_b] − Σ_c c_{ab}^c ē_c` applied to `f`.
    pub fn bracket_defect(&self, a: usize, b: usize, f: &GJet) -> GJet {
        let ab = self.apply_field(a, &self.apply_field(b, f));
        let ba = self.apply_field(b, &self.apply_field(a, f));
        let mut d = ab.sub(&ba);
        for (c, s) in self.alg.bracket_basis(a, b) {
            d = d.sub(&self.apply_field(*c, f).scale(s));
        }
        d
    }

    /// Parses a jet expression in `l1..l<num_lambda>` and `x1..x<n>`; `xk` is
    /// the exponential coordinate dual to the k-th basis element.
    pub fn parse(&self, text: &str, num_lambda: usize) -> Result<GJet, ParseError> {
        let e = parse_expr(text)?;
        symexpr::parse::check_vars(&e, num_lambda, self.dim())?;
        self.eval(&e)
    }

    pub fn eval(&self, e: &Expr) -> Result<GJet, ParseError> {
        let n = self.dim();
        let p = self.d_jet as i32;
        Ok(match e {
            Expr::Int(_) | Expr::I => self.constant(e.eval::<Scalar>()?),
            Expr::Var { kind: VarKind::Lambda, .. } => self.constant(e.eval::<Scalar>()?),
            Expr::Var { kind: VarKind::Group, index, pos } => {
                if *index == 0 || *index > n {
                    return Err(ParseError::VariableOutOfRange { pos: *pos, name: format!("x{index}") });
                }
                GJet::coordinate(n, p, index - 1)
            }
            Expr::Neg(a) => self.eval(a)?.neg(),
            Expr::Add(a, b) => Linear::add(&self.eval(a)?, &self.eval(b)?),
            Expr::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?),
            Expr::Mul(a, b) => self.eval(a)?.mul_jet(&self.eval(b)?),
            Expr::Div(a, b, pos) => {
                let inv = self.eval(b)?.with_prec(p).inverse(n).ok_or(ParseError::DivisionByZero { pos: *pos })?;
                self.eval(a)?.mul_jet(&inv)
            }
            Expr::Pow(a, k) => {
                let base = self.eval(a)?;
                let mut acc = self.constant(Scalar::one());
                for _ in 0..*k {
                    acc = acc.mul_jet(&base);
                }
                acc
            }
        })
    }
}

impl Coeff for GJet {
    type Ctx = JetCtx;
    fn from_scalar(ctx: &JetCtx, s: &Scalar) -> Self {
        ctx.constant(s.clone())
    }
    fn frame_deriv(&self, ctx: &JetCtx, _geom: &geom::FrameGeometry, a: usize) -> Self {
        let l = ctx.alg.cartan_dim();
        if a < l {
            self.diff_lambda(a)
        } else {
            ctx.apply_field(a - l, self)
        }
    }
}

impl Ring for GJet {
    fn mul(&self, o: &Self) -> Self {
        self.mul_jet(o)
    }
}
