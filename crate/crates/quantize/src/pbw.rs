//! PBW basis of U𝔤 and truncated ℏ-series in its tensor powers.
//!
//! A PBW monomial is an exponent vector over the basis of 𝔤 in its stored
//! order (h's first), read as `e₀^{a₀} e₁^{a₁} ⋯`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use liealg::{LieAlgebra, MultiVector};
use symexpr::Scalar;

pub type Mono = Vec<u32>;
type Terms = Arc<Vec<(Mono, Scalar)>>;

/// Straightening of PBW products, memoized per (generator, monomial).
pub struct Pbw {
    alg: Arc<LieAlgebra>,
    cache: Mutex<HashMap<(usize, Mono), Terms>>,
}

impl fmt::Debug for Pbw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pbw({:?})", self.alg.labels())
    }
}

pub fn binomial(n: u32, k: u32) -> i64 {
    let mut c: i64 = 1;
    for i in 0..k as i64 {
        c = c * (n as i64 - i) / (i + 1);
    }
    c
}

pub fn mono_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl Pbw {
    pub fn new(alg: Arc<LieAlgebra>) -> Pbw {
        Pbw { alg, cache: Mutex::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
    pub fn cartan_dim(&self) -> usize {
        self.alg.cartan_dim()
    }

    pub fn unit(&self) -> Mono {
        vec![0; self.dim()]
    }

    pub fn generator(&self, a: usize) -> Mono {
        let mut m = self.unit();
        m[a] = 1;
        m
    }

    /// `e_a · v` in normal order.
    pub fn gen_mul(&self, a: usize, v: &Mono) -> Terms {
        if let Some(t) = self.cache.lock().unwrap().get(&(a, v.clone())) {
            return t.clone();
        }
        let out = match v.iter().position(|&e| e > 0) {
            Some(b) if b < a => {
                // e_a e_b w = e_b (e_a w) + [e_a, e_b] w
                let mut w = v.clone();
                w[b] -= 1;
                let mut acc: BTreeMap<Mono, Scalar> = BTreeMap::new();
                for (m, c) in self.gen_mul(a, &w).iter() {
                    for (m2, c2) in self.gen_mul(b, m).iter() {
                        accumulate(&mut acc, m2.clone(), c.mul(c2));
                    }
                }
                for (cidx, s) in self.alg.bracket_basis(a, b) {
                    for (m2, c2) in self.gen_mul(*cidx, &w).iter() {
                        accumulate(&mut acc, m2.clone(), s.mul(c2));
                    }
                }
                acc.into_iter().collect()
            }
            _ => {
                let mut m = v.clone();
                m[a] += 1;
                vec![(m, Scalar::one())]
            }
        };
        let out = Arc::new(out);
        self.cache.lock().unwrap().insert((a, v.clone()), out.clone());
        out
    }

    /// `u · v` for PBW monomials, straightened.
    pub fn mono_mul(&self, u: &Mono, v: &Mono) -> Vec<(Mono, Scalar)> {
        let mut acc: BTreeMap<Mono, Scalar> = BTreeMap::new();
        acc.insert(v.clone(), Scalar::one());
        for a in (0..self.dim()).rev() {
            for _ in 0..u[a] {
                let mut next = BTreeMap::new();
                for (m, c) in &acc {
                    for (m2, c2) in self.gen_mul(a, m).iter() {
                        accumulate(&mut next, m2.clone(), c.mul(c2));
                    }
                }
                acc = next;
            }
        }
        acc.into_iter().collect()
    }
}

/// `Δ(Π eᵢ^{aᵢ}) = Σ_j Π C(aᵢ, jᵢ) e^j ⊗ e^{a−j}`; both factors are already normal.
pub fn mono_coproduct(m: &Mono) -> Vec<(Mono, Mono, i64)> {
    let mut out = vec![(Vec::new(), Vec::new(), 1i64)];
    for &a in m {
        let mut next = Vec::new();
        for (l, r, c) in &out {
            for j in 0..=a {
                let (mut l, mut r) = (l.clone(), r.clone());
                l.push(j);
                r.push(a - j);
                next.push((l, r, c * binomial(a, j)));
            }
        }
        out = next;
    }
    out
}

fn accumulate<K: Ord>(acc: &mut BTreeMap<K, Scalar>, k: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub(crate) fn accumulate_into<K: Ord>(acc: &mut BTreeMap<K, Scalar>, k: K, c: Scalar) {
    accumulate(acc, k, c)
}

/// An element of `(U𝔤)^{⊗N}[[ℏ]]` with λ-dependent coefficients, truncated
/// after `ℏ^order`.
#[derive(Clone, PartialEq)]
pub struct UTensor {
    legs: usize,
    dim: usize,
    order: u32,
    terms: BTreeMap<(u32, Vec<Mono>), Scalar>,
}

impl UTensor {
    pub fn zero(legs: usize, dim: usize, order: u32) -> UTensor {
        UTensor { legs, dim, order, terms: BTreeMap::new() }
    }

    pub fn one(legs: usize, dim: usize, order: u32) -> UTensor {
        let mut t = UTensor::zero(legs, dim, order);
        t.add_term(0, vec![vec![0; dim]; legs], Scalar::one());
        t
    }

    pub fn legs(&self) -> usize {
        self.legs
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn add_term(&mut self, k: u32, monos: Vec<Mono>, c: Scalar) {
        assert_eq!(monos.len(), self.legs);
        if k <= self.order {
            accumulate(&mut self.terms, (k, monos), c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, Vec<Mono>), &Scalar)> {
        self.terms.iter()
    }

    pub fn get(&self, k: u32, monos: &[Mono]) -> Scalar {
        self.terms.get(&(k, monos.to_vec())).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn like(&self, order: u32) -> UTensor {
        UTensor::zero(self.legs, self.dim, order)
    }

    pub fn add(&self, o: &UTensor) -> UTensor {
        assert_eq!(self.legs, o.legs);
        let mut out = self.truncate(self.order.min(o.order));
        for ((k, m), c) in &o.terms {
            out.add_term(*k, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> UTensor {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, o: &UTensor) -> UTensor {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> UTensor {
        self.map_coeffs(|c| c.mul(s))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> UTensor {
        let mut out = self.like(self.order);
        for ((k, m), c) in &self.terms {
            out.add_term(*k, m.clone(), f(c));
        }
        out
    }

    pub fn truncate(&self, order: u32) -> UTensor {
        let mut out = self.like(order);
        for ((k, m), c) in &self.terms {
            out.add_term(*k, m.clone(), c.clone());
        }
        out
    }

    /// Multiplies by `ℏ^s`.
    pub fn shift_hbar(&self, s: u32) -> UTensor {
        let mut out = self.like(self.order);
        for ((k, m), c) in &self.terms {
            out.add_term(k + s, m.clone(), c.clone());
        }
        out
    }

    /// The coefficient of `ℏ^k`, as an ℏ⁰ tensor.
    pub fn hbar_coeff(&self, k: u32) -> UTensor {
        let mut out = self.like(self.order);
        for ((kk, m), c) in &self.terms {
            if *kk == k {
                out.add_term(0, m.clone(), c.clone());
            }
        }
        out
    }

    /// Legwise product.
    pub fn mul(&self, o: &UTensor, pbw: &Pbw) -> UTensor {
        assert_eq!(self.legs, o.legs);
        let order = self.order.min(o.order);
        let mut out = self.like(order);
        for ((ka, ma), ca) in &self.terms {
            for ((kb, mb), cb) in &o.terms {
                if ka + kb > order {
                    continue;
                }
                let c0 = ca.mul(cb);
                let mut partial: Vec<(Vec<Mono>, Scalar)> = vec![(Vec::new(), c0)];
                for leg in 0..self.legs {
                    let prod = pbw.mono_mul(&ma[leg], &mb[leg]);
                    let mut next = Vec::new();
                    for (ms, c) in &partial {
                        for (m, s) in &prod {
                            let mut ms = ms.clone();
                            ms.push(m.clone());
                            next.push((ms, c.mul(s)));
                        }
                    }
                    partial = next;
                }
                for (ms, c) in partial {
                    out.add_term(ka + kb, ms, c);
                }
            }
        }
        out
    }

    /// `T⁻¹` for `T = 1 + O(ℏ)` by the geometric series; `None` otherwise.
    pub fn inverse(&self, pbw: &Pbw) -> Option<UTensor> {
        let one = UTensor::one(self.legs, self.dim, self.order);
        if self.hbar_coeff(0) != one.hbar_coeff(0) {
            return None;
        }
        let x = one.sub(self);
        let mut out = one.clone();
        let mut pow = one;
        for _ in 0..self.order {
            pow = pow.mul(&x, pbw);
            out = out.add(&pow);
        }
        Some(out)
    }

    /// Applies `Δ` to one leg, which becomes two adjacent legs.
    pub fn coproduct(&self, leg: usize) -> UTensor {
        let mut out = UTensor::zero(self.legs + 1, self.dim, self.order);
        for ((k, ms), c) in &self.terms {
            for (a, b, n) in mono_coproduct(&ms[leg]) {
                let mut v = ms[..leg].to_vec();
                v.push(a);
                v.push(b);
                v.extend_from_slice(&ms[leg + 1..]);
                out.add_term(*k, v, c.mul(&Scalar::from_i64(n)));
            }
        }
        out
    }

    /// Applies `ε` to one leg, removing it.
    pub fn counit(&self, leg: usize) -> UTensor {
        let mut out = UTensor::zero(self.legs - 1, self.dim, self.order);
        for ((k, ms), c) in &self.terms {
            if mono_degree(&ms[leg]) == 0 {
                let mut v = ms.clone();
                v.remove(leg);
                out.add_term(*k, v, c.clone());
            }
        }
        out
    }

    /// New leg `i` carries old leg `perm[i]`; `[1, 0]` gives `T²¹`.
    pub fn permute(&self, perm: &[usize]) -> UTensor {
        assert_eq!(perm.len(), self.legs);
        let mut out = self.like(self.order);
        for ((k, ms), c) in &self.terms {
            out.add_term(*k, perm.iter().map(|&p| ms[p].clone()).collect(), c.clone());
        }
        out
    }

    /// Places old leg `j` at position `positions[j]` of a `legs`-fold tensor,
    /// with `1` elsewhere: `F¹³ = F.embed(3, &[0, 2])`.
    pub fn embed(&self, legs: usize, positions: &[usize]) -> UTensor {
        assert_eq!(positions.len(), self.legs);
        let mut out = UTensor::zero(legs, self.dim, self.order);
        for ((k, ms), c) in &self.terms {
            let mut v = vec![vec![0; self.dim]; legs];
            for (j, &p) in positions.iter().enumerate() {
                v[p] = ms[j].clone();
            }
            out.add_term(*k, v, c.clone());
        }
        out
    }

    pub fn lambda_derivative(&self, i: usize) -> UTensor {
        self.map_coeffs(|c| c.diff(i))
    }

    /// `T(λ + cℏh^{(leg)}) = Σ_α (cℏ)^{|α|}/α! ∂^α T · h^α` with `h^α`
    /// multiplied into `leg` from the left.
    pub fn shift(&self, leg: usize, c: &Scalar, pbw: &Pbw) -> UTensor {
        let l = pbw.cartan_dim();
        let mut out = self.clone();
        let mut cur = self.clone();
        for n in 1..=self.order {
            let mut next = self.like(self.order);
            for i in 0..l {
                let d = cur.lambda_derivative(i);
                for ((k, ms), s) in &d.terms {
                    for (m, s2) in pbw.gen_mul(i, &ms[leg]).iter() {
                        let mut v = ms.clone();
                        v[leg] = m.clone();
                        next.add_term(k + 1, v, s.mul(s2));
                    }
                }
            }
            cur = next.scale(&c.mul(&Scalar::ratio(1, n as i64)));
            out = out.add(&cur);
        }
        out
    }

    /// `Σ_leg h_i^{(leg)}` for each Cartan generator.
    pub fn weight_operators(legs: usize, pbw: &Pbw, order: u32) -> Vec<UTensor> {
        (0..pbw.cartan_dim())
            .map(|i| {
                let mut t = UTensor::zero(legs, pbw.dim(), order);
                for leg in 0..legs {
                    let mut v = vec![pbw.unit(); legs];
                    v[leg] = pbw.generator(i);
                    t.add_term(0, v, Scalar::one());
                }
                t
            })
            .collect()
    }

    /// `[Σ_leg h_i^{(leg)}, T]` for each Cartan generator.
    pub fn weight_residual(&self, pbw: &Pbw) -> Vec<UTensor> {
        UTensor::weight_operators(self.legs, pbw, self.order)
            .iter()
            .map(|h| h.mul(self, pbw).sub(&self.mul(h, pbw)))
            .collect()
    }

    /// `r^{ab}(e_a⊗e_b − e_b⊗e_a)` summed over `a < b`, at `ℏ^k`.
    pub fn from_bivector(r: &MultiVector, k: u32, order: u32) -> UTensor {
        let n = r.algebra().dim();
        let mut t = UTensor::zero(2, n, order);
        for (idx, c) in r.terms() {
            let (a, b) = (idx[0], idx[1]);
            let mut ea = vec![0; n];
            ea[a] = 1;
            let mut eb = vec![0; n];
            eb[b] = 1;
            t.add_term(k, vec![ea.clone(), eb.clone()], c.clone());
            t.add_term(k, vec![eb, ea], c.neg());
        }
        t
    }

    /// An element of `U𝔤` (one leg) from `(ℏ-power, monomial, coefficient)` triples.
    pub fn element(dim: usize, order: u32, terms: &[(u32, Mono, Scalar)]) -> UTensor {
        let mut t = UTensor::zero(1, dim, order);
        for (k, m, c) in terms {
            t.add_term(*k, vec![m.clone()], c.clone());
        }
        t
    }

    /// Renders terms with the given basis labels.
    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for ((k, ms), c) in &self.terms {
            let legs: Vec<String> = ms.iter().map(|m| render_mono(m, labels)).collect();
            let h = match k {
                0 => String::new(),
                1 => "ℏ ".to_string(),
                _ => format!("ℏ^{k} "),
            };
            parts.push(format!("{h}({c}) {}", legs.join("⊗")));
        }
        parts.join(" + ")
    }
}

pub fn render_mono(m: &[u32], labels: &[String]) -> String {
    let s: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { labels[i].clone() } else { format!("{}^{e}", labels[i]) })
        .collect();
    if s.is_empty() {
        "1".to_string()
    } else {
        s.join("")
    }
}

impl fmt::Debug for UTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.dim).map(|i| format!("u{i}")).collect();
        write!(f, "{}", self.render(&labels))
    }
}
