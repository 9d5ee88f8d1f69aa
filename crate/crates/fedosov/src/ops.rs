//! Fiberwise Moyal product and the operators δ, δ⁻¹, ∂ on W⊗Λ.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use geom::{FrameConnection, FrameGeometry};
use symexpr::Scalar;

use crate::weyl::{form_key, form_indices, multi, wedge_sign, Caps, Coeff, Key, Linear, Ring, WeylElement, MAX_FRAME};
use crate::FedosovError;

type Contraction = Arc<Vec<(u32, u64, Scalar)>>;

/// Geometry, caps, and a cache of monomial Moyal products.
pub struct WeylCtx {
    pub geom: FrameGeometry,
    pub caps: Caps,
    cache: Mutex<HashMap<(u64, u64), Contraction>>,
}

impl Clone for WeylCtx {
    fn clone(&self) -> Self {
        WeylCtx::new(self.geom.clone(), self.caps)
    }
}

impl std::fmt::Debug for WeylCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeylCtx").field("caps", &self.caps).field("frame", &self.geom.size()).finish()
    }
}

impl WeylCtx {
    pub fn new(geom: FrameGeometry, caps: Caps) -> WeylCtx {
        assert!(geom.size() <= MAX_FRAME, "frame too large for packed multi-indices");
        WeylCtx { geom, caps, cache: Mutex::new(HashMap::new()) }
    }

    pub fn size(&self) -> usize {
        self.geom.size()
    }

    /// `y^α ∘ y^β = Σ_m (ℏ/2)^m/m! π^{i₁j₁}..π^{i_mj_m} ∂^m y^α ∂^m y^β`
    /// as `(m, γ, coefficient)` triples.
    fn contract(&self, alpha: u64, beta: u64) -> Contraction {
        if let Some(c) = self.cache.lock().unwrap().get(&(alpha, beta)) {
            return c.clone();
        }
        let n = self.size();
        let p = &self.geom.poisson;
        let mut out: Vec<(u32, u64, Scalar)> = Vec::new();
        let mut level: HashMap<(u64, u64), Scalar> = HashMap::new();
        level.insert((alpha, beta), Scalar::one());
        let mut m = 0u32;
        let mut weight = Scalar::one();
        while !level.is_empty() {
            let mut merged: HashMap<u64, Scalar> = HashMap::new();
            for ((a, b), c) in &level {
                let e = merged.entry(multi::add(*a, *b)).or_insert_with(Scalar::zero);
                *e = e.add(c);
            }
            let mut keys: Vec<_> = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            keys.sort_by_key(|(g, _)| *g);
            for (g, c) in keys {
                out.push((m, g, c.mul(&weight)));
            }
            let mut next: HashMap<(u64, u64), Scalar> = HashMap::new();
            for ((a, b), c) in &level {
                for i in 0..n {
                    let ai = multi::get(*a, i);
                    if ai == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let bj = multi::get(*b, j);
                        if bj == 0 || p.get(i, j).is_zero() {
                            continue;
                        }
                        let v = c.mul(p.get(i, j)).mul(&Scalar::from_i64((ai * bj) as i64));
                        let e = next.entry((multi::dec(*a, i), multi::dec(*b, j))).or_insert_with(Scalar::zero);
                        *e = e.add(&v);
                    }
                }
            }
            next.retain(|_, c| !c.is_zero());
            level = next;
            m += 1;
            weight = weight.mul(&Scalar::ratio(1, 2 * m as i64));
        }
        let out = Arc::new(out);
        self.cache.lock().unwrap().insert((alpha, beta), out.clone());
        out
    }

    fn check_caps<C: Linear>(&self, a: &WeylElement<C>) -> Result<(), FedosovError> {
        match a.terms().find(|(k, _)| !self.caps.admits_key(k)) {
            Some((k, _)) => Err(FedosovError::CapExceeded { k: k.k, degree: k.total_degree(), caps: self.caps }),
            None => Ok(()),
        }
    }

    /// `a∘b` with coefficients combined by `mul`; `odd_only` keeps twice
    /// the odd-order part, which is the graded commutator for commuting
    /// coefficients.
    fn product<C1: Linear, C2: Linear, C3: Linear>(
        &self,
        a: &WeylElement<C1>,
        b: &WeylElement<C2>,
        mul: impl Fn(&C1, &C2) -> C3,
        odd_only: bool,
    ) -> WeylElement<C3> {
        // commutators are divided by ℏ afterwards, so keep one extra ℏ
        let caps = if odd_only { Caps { k_max: self.caps.k_max + 1, n_max: self.caps.n_max + 2 } } else { self.caps };
        let mut out = WeylElement::zero();
        let two = Scalar::from_i64(2);
        for (ka, ca) in a.terms() {
            let da = multi::degree(ka.alpha);
            for (kb, cb) in b.terms() {
                let k0 = ka.k + kb.k;
                if !caps.admits(k0, da + multi::degree(kb.alpha)) {
                    continue;
                }
                let Some(neg) = wedge_sign(ka.forms, kb.forms) else { continue };
                let forms = ka.forms | kb.forms;
                let c = mul(ca, cb);
                if c.is_zero() {
                    continue;
                }
                let c = if neg { c.neg() } else { c };
                for (m, g, s) in self.contract(ka.alpha, kb.alpha).iter() {
                    if k0 + m > caps.k_max || (odd_only && m % 2 == 0) {
                        continue;
                    }
                    let s = if odd_only { s.mul(&two) } else { s.clone() };
                    out.add_term(Key::new(k0 + m, *g, forms), c.scale(&s));
                }
            }
        }
        out
    }

    pub fn moyal<C: Ring>(&self, a: &WeylElement<C>, b: &WeylElement<C>) -> Result<WeylElement<C>, FedosovError> {
        self.check_caps(a)?;
        self.check_caps(b)?;
        Ok(self.moyal_unchecked(a, b))
    }

    pub fn moyal_unchecked<C: Ring>(&self, a: &WeylElement<C>, b: &WeylElement<C>) -> WeylElement<C> {
        self.product(a, b, |x, y| x.mul(y), false)
    }

    /// `a∘b` for coefficient types combined by a bilinear `mul`.
    pub fn moyal_with<C1: Linear, C2: Linear, C3: Linear>(
        &self,
        a: &WeylElement<C1>,
        b: &WeylElement<C2>,
        mul: impl Fn(&C1, &C2) -> C3,
    ) -> WeylElement<C3> {
        self.product(a, b, mul, false)
    }

    /// Graded commutator `[a, b] = a∘b − (−1)^{|a||b|} b∘a`, kept to one
    /// ℏ-power (and two degrees) beyond the caps.
    pub fn commutator<C: Ring>(&self, a: &WeylElement<C>, b: &WeylElement<C>) -> WeylElement<C> {
        self.product(a, b, |x, y| x.mul(y), true)
    }

    /// `[s, a]` for a λ-function-valued `s`.
    pub fn commutator_scalar<C: Linear>(&self, s: &WeylElement<Scalar>, a: &WeylElement<C>) -> WeylElement<C> {
        self.product(s, a, |x, y| y.scale(x), true)
    }

    /// `δa = Σ_A θ^A ∧ ∂a/∂y^A`.
    pub fn delta<C: Linear>(&self, a: &WeylElement<C>) -> WeylElement<C> {
        let mut out = WeylElement::zero();
        for (k, c) in a.terms() {
            for i in 0..self.size() {
                let e = multi::get(k.alpha, i);
                if e == 0 {
                    continue;
                }
                let Some(neg) = wedge_sign(1 << i, k.forms) else { continue };
                let c = c.scale(&Scalar::from_i64(if neg { -(e as i64) } else { e as i64 }));
                out.add_term(Key::new(k.k, multi::dec(k.alpha, i), k.forms | (1 << i)), c);
            }
        }
        out
    }

    /// `δ⁻¹a = (1/(p+q)) Σ_A y^A ι_{X_A} a` on each `(p, q)`-homogeneous part.
    pub fn delta_inv<C: Linear>(&self, a: &WeylElement<C>) -> WeylElement<C> {
        let mut out = WeylElement::zero();
        for (k, c) in a.terms() {
            let pq = multi::degree(k.alpha) + k.form_degree();
            if pq == 0 {
                continue;
            }
            for (pos, i) in form_indices(k.forms).into_iter().enumerate() {
                let s = Scalar::ratio(if pos % 2 == 0 { 1 } else { -1 }, pq as i64);
                out.add_term(Key::new(k.k, multi::inc(k.alpha, i), k.forms & !(1 << i)), c.scale(&s));
            }
        }
        out
    }

    /// `∇_{X_A} a`: coefficients differentiated along `X_A`, fiber variables
    /// and covectors transported by `∇_A y^B = −Γ_{AC}^B y^C`.
    pub fn nabla_along<C: Coeff>(
        &self,
        conn: &FrameConnection,
        a: &WeylElement<C>,
        dir: usize,
        cctx: &C::Ctx,
    ) -> WeylElement<C> {
        let n = self.size();
        let mut out = WeylElement::zero();
        for (k, c) in a.terms() {
            out.add_term(*k, c.frame_deriv(cctx, &self.geom, dir));
            for b in 0..n {
                let e = multi::get(k.alpha, b);
                if e == 0 {
                    continue;
                }
                for cc in 0..n {
                    let g = conn.get(dir, cc, b);
                    if g.is_zero() {
                        continue;
                    }
                    let alpha = multi::inc(multi::dec(k.alpha, b), cc);
                    out.add_term(Key::new(k.k, alpha, k.forms), c.scale(&g.mul(&Scalar::from_i64(-(e as i64)))));
                }
            }
            let idx = form_indices(k.forms);
            for p in 0..idx.len() {
                for cc in 0..n {
                    let g = conn.get(dir, cc, idx[p]);
                    if g.is_zero() {
                        continue;
                    }
                    let mut list = idx.clone();
                    list[p] = cc;
                    if let Some((f, neg)) = form_key(&list) {
                        let s = if neg { g.clone() } else { g.neg() };
                        out.add_term(Key::new(k.k, k.alpha, f), c.scale(&s));
                    }
                }
            }
        }
        out
    }

    /// `∂a = Σ_A θ^A ∧ ∇_{X_A} a`.
    pub fn covariant_d<C: Coeff>(&self, conn: &FrameConnection, a: &WeylElement<C>, cctx: &C::Ctx) -> WeylElement<C> {
        let mut out = WeylElement::zero();
        for dir in 0..self.size() {
            for (k, c) in self.nabla_along(conn, a, dir, cctx).terms() {
                if let Some(neg) = wedge_sign(1 << dir, k.forms) {
                    out.add_term(Key::new(k.k, k.alpha, k.forms | (1 << dir)), if neg { c.neg() } else { c.clone() });
                }
            }
        }
        out
    }

    /// `a_{00}`: the y-free 0-form part (all ℏ-powers, which δ and δ⁻¹ both kill).
    pub fn constant_part<C: Linear>(&self, a: &WeylElement<C>) -> WeylElement<C> {
        a.filter(|k| k.alpha == 0 && k.forms == 0)
    }
}
