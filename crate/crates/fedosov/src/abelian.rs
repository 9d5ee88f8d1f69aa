//! The Abelian connection, parallel lifts and the star product.

use geom::{curvature, CurvatureTensor, FrameConnection, FrameForm, FrameGeometry, GeometryReport};
use symexpr::Scalar;

use crate::ops::WeylCtx;
use crate::weyl::{form_key, multi, Caps, Coeff, Key, Linear, WeylElement};
use crate::FedosovError;

/// `R_W = −i·¼ R_{EF,AB} y^E y^F θ^A∧θ^B`, the element whose inner
/// derivation `(i/ℏ)[R_W,·]` is `∂²`.
pub fn weyl_curvature(curv: &CurvatureTensor) -> WeylElement<Scalar> {
    let n = curv.size();
    let mut out = WeylElement::zero();
    let minus_i_half = Scalar::i().neg().mul(&Scalar::ratio(1, 2));
    for e in 0..n {
        for f in e..n {
            let mult = Scalar::from_i64(if e == f { 1 } else { 2 });
            for a in 0..n {
                for b in (a + 1)..n {
                    let r = curv.lowered(e, f, a, b);
                    if r.is_zero() {
                        continue;
                    }
                    let alpha = multi::add(multi::unit(e), multi::unit(f));
                    let (forms, _) = form_key(&[a, b]).unwrap();
                    out.add_term(Key::new(0, alpha, forms), r.mul(&mult).mul(&minus_i_half));
                }
            }
        }
    }
    out
}

fn two_form_element(w: &FrameForm, k: u32) -> WeylElement<Scalar> {
    let mut out = WeylElement::zero();
    for (idx, c) in w.terms() {
        let (forms, neg) = form_key(idx).unwrap();
        out.add_term(Key::new(k, 0, forms), if neg { c.neg() } else { c.clone() });
    }
    out
}

/// A solved Abelian connection `D = −δ + ∂ + (i/ℏ)[γ,·]`.
#[derive(Clone, Debug)]
pub struct Fedosov {
    pub ctx: WeylCtx,
    pub connection: FrameConnection,
    /// `ω₁, ω₂, ..`: the ℏ-corrections of the Weyl curvature.
    pub omegas: Vec<FrameForm>,
    pub curvature: WeylElement<Scalar>,
    /// `R_W − i Σ ℏⁱωᵢ`.
    pub seed: WeylElement<Scalar>,
    pub gamma: WeylElement<Scalar>,
}

impl Fedosov {
    pub fn new(
        geom: FrameGeometry,
        connection: FrameConnection,
        omegas: Vec<FrameForm>,
        caps: Caps,
    ) -> Result<Fedosov, FedosovError> {
        for (i, w) in omegas.iter().enumerate() {
            if w.size() != geom.size() || w.terms().any(|(k, _)| k.len() != 2) {
                return Err(FedosovError::NotTwoForm(i + 1));
            }
            if !w.d(&geom).is_zero() {
                return Err(FedosovError::NotClosed(i + 1));
            }
            if (0..geom.l()).any(|h| !w.interior(geom.h_index(h)).is_zero()) {
                return Err(FedosovError::NotHorizontal(i + 1));
            }
        }
        let curv = curvature(&connection, &geom);
        let rw = weyl_curvature(&curv);
        let mut seed = rw.clone();
        let minus_i = Scalar::i().neg();
        for (i, w) in omegas.iter().enumerate() {
            seed = seed.add(&two_form_element(w, i as u32 + 1).scale(&minus_i));
        }
        let ctx = WeylCtx::new(geom, caps);
        let seed = seed.truncate(&caps);
        let mut fed = Fedosov { ctx, connection, omegas, curvature: rw, seed, gamma: WeylElement::zero() };
        fed.solve_gamma()?;
        Ok(fed)
    }

    /// From a completed geometry pipeline.
    pub fn from_report(report: &GeometryReport, omegas: Vec<FrameForm>, caps: Caps) -> Result<Fedosov, FedosovError> {
        Fedosov::new(report.geometry.clone(), report.connection.clone(), omegas, caps)
    }

    pub fn caps(&self) -> Caps {
        self.ctx.caps
    }
    pub fn geometry(&self) -> &FrameGeometry {
        &self.ctx.geom
    }

    fn gamma_step(&self, g: &WeylElement<Scalar>, g0: &WeylElement<Scalar>) -> WeylElement<Scalar> {
        let ctx = &self.ctx;
        let dg = ctx.covariant_d(&self.connection, g, &());
        let sq = self.gamma_square(g);
        g0.add(&ctx.delta_inv(&dg.add(&sq.i_over_hbar()))).truncate(&ctx.caps)
    }

    /// `γ∘γ = ½[γ, γ]` for a 1-form.
    fn gamma_square(&self, g: &WeylElement<Scalar>) -> WeylElement<Scalar> {
        self.ctx.commutator(g, g).scale(&Scalar::ratio(1, 2))
    }

    /// `γ₀ = δ⁻¹Ω̃`, `γ_{n+1} = γ₀ + δ⁻¹(∂γₙ + (i/ℏ)γₙ²)`, run `n_max` times,
    /// then the post-conditions.
    fn solve_gamma(&mut self) -> Result<(), FedosovError> {
        let ctx = &self.ctx;
        let g0 = ctx.delta_inv(&self.seed).truncate(&ctx.caps);
        let mut g = g0.clone();
        for _ in 0..ctx.caps.n_max {
            g = self.gamma_step(&g, &g0);
        }
        if self.gamma_step(&g, &g0) != g {
            return Err(FedosovError::NotStabilized("γ changed on the extra iteration".into()));
        }
        self.gamma = g;
        let ctx = &self.ctx;
        let g = &self.gamma;
        if !ctx.delta_inv(g).is_zero() {
            return Err(FedosovError::CheckFailed("δ⁻¹γ ≠ 0".into()));
        }
        if g.min_degree().is_some_and(|d| d < 3) {
            return Err(FedosovError::CheckFailed("γ has a component of degree < 3".into()));
        }
        let res = self.curvature_equation_residual();
        if !res.is_zero() {
            return Err(FedosovError::CheckFailed(format!("curvature equation residual {}", res)));
        }
        let geom = &self.ctx.geom;
        for i in 0..geom.l() {
            let h = geom.h_index(i);
            if g.mentions(h) {
                return Err(FedosovError::CheckFailed(format!("γ involves the ē_h{}-dual variables", i + 1)));
            }
            if !self.ctx.nabla_along(&self.connection, g, h, &()).is_zero() {
                return Err(FedosovError::CheckFailed(format!("∇_(ē_h{}) γ ≠ 0", i + 1)));
            }
        }
        Ok(())
    }

    /// `δγ − ∂γ − (i/ℏ)γ² − Ω̃` on components the caps determine exactly.
    pub fn curvature_equation_residual(&self) -> WeylElement<Scalar> {
        let ctx = &self.ctx;
        let g = &self.gamma;
        let lhs = ctx
            .delta(g)
            .sub(&ctx.covariant_d(&self.connection, g, &()))
            .sub(&self.gamma_square(g).i_over_hbar());
        lhs.sub(&self.seed).up_to_degree(ctx.caps.n_max - 1)
    }

    /// `Da = −δa + ∂a + (i/ℏ)[γ, a]`.
    pub fn abelian_d<C: Coeff>(&self, a: &WeylElement<C>, cctx: &C::Ctx) -> WeylElement<C> {
        let ctx = &self.ctx;
        ctx.covariant_d(&self.connection, a, cctx)
            .sub(&ctx.delta(a))
            .add(&ctx.commutator_scalar(&self.gamma, a).i_over_hbar())
            .truncate(&ctx.caps)
    }

    /// The unique `ã` with `Dã = 0` and `σ(ã) = a₀`, by
    /// `a_{n+1} = a₀ + δ⁻¹(∂aₙ + (i/ℏ)[γ, aₙ])`.
    pub fn parallel_lift<C: Coeff>(&self, a0: &C, cctx: &C::Ctx) -> Result<WeylElement<C>, FedosovError> {
        let ctx = &self.ctx;
        let base = WeylElement::function(a0.clone());
        let step = |a: &WeylElement<C>| {
            let inner = ctx.covariant_d(&self.connection, a, cctx).add(&ctx.commutator_scalar(&self.gamma, a).i_over_hbar());
            base.add(&ctx.delta_inv(&inner)).truncate(&ctx.caps)
        };
        let mut a = base.clone();
        for _ in 0..ctx.caps.n_max {
            a = step(&a);
        }
        if step(&a) != a {
            return Err(FedosovError::NotStabilized("lift changed on the extra iteration".into()));
        }
        let da = self.abelian_d(&a, cctx).up_to_degree(ctx.caps.n_max - 1);
        if !da.is_zero() {
            return Err(FedosovError::CheckFailed(format!("D(lift) has {} nonzero terms", da.len())));
        }
        Ok(a)
    }

    fn require_order(&self, order: u32) -> Result<(), FedosovError> {
        let caps = self.caps();
        if order > caps.star_order() {
            let need = Caps::for_order(order);
            return Err(FedosovError::CapTooSmall { order, caps, need_k: need.k_max, need_n: need.n_max });
        }
        Ok(())
    }

    /// `σ(ã∘b̃)` up to ℏ^order for lifts with coefficients combined by `mul`.
    pub fn star_of_lifts<C1: Linear, C2: Linear, C3: Linear>(
        &self,
        a: &WeylElement<C1>,
        b: &WeylElement<C2>,
        order: u32,
        mul: impl Fn(&C1, &C2) -> C3,
    ) -> Result<Vec<C3>, FedosovError> {
        self.require_order(order)?;
        let ctx = &self.ctx;
        // only the full contractions reach σ; cut inputs to degree 2·order.
        let a = a.up_to_degree(2 * order);
        let b = b.up_to_degree(2 * order);
        Ok(ctx.moyal_with(&a, &b, mul).sigma(order))
    }

    /// `f ⋆ g` for λ-functions, as coefficients of ℏ⁰..ℏ^order.
    pub fn star(&self, f: &Scalar, g: &Scalar, order: u32) -> Result<Vec<Scalar>, FedosovError> {
        self.require_order(order)?;
        let a = self.parallel_lift(f, &())?;
        let b = self.parallel_lift(g, &())?;
        self.star_of_lifts(&a, &b, order, |x, y| x.mul(y))
    }
}
