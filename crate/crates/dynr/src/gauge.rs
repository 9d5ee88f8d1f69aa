//! Gauge transformations by g = exp f, f: 𝔥* → 𝔤^𝔥 with ad_f nilpotent.

use liealg::MultiVector;
use symexpr::Scalar;

use crate::{cdybe_residual, is_r_matrix, lambda_derivative, DynamicalR, DynrError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeElement {
    /// Coordinates of f(λ) in the basis of 𝔤.
    pub log: Vec<Scalar>,
    /// `N` with `(ad_f)^N = 0` on 𝔤.
    pub nilpotency: usize,
}

fn factorial(k: usize) -> Scalar {
    Scalar::from_i64((1..=k as i64).product())
}

impl GaugeElement {
    pub fn new(log: Vec<Scalar>, nilpotency: usize) -> Self {
        GaugeElement { log, nilpotency }
    }

    fn check(&self, rm: &DynamicalR) -> Result<MultiVector, DynrError> {
        let g = &rm.alg;
        assert_eq!(self.log.len(), g.dim(), "gauge logarithm has wrong length");
        let f = MultiVector::from_vector(g, &self.log);
        for i in 0..g.cartan_dim() {
            if !MultiVector::basis(g, i).schouten(&f).is_zero() {
                return Err(DynrError::NotCentralizing(i + 1));
            }
        }
        // ad_f^N applied to every basis vector must vanish.
        for a in 0..g.dim() {
            let mut x = MultiVector::basis(g, a);
            for _ in 0..self.nilpotency {
                x = f.schouten(&x);
            }
            if !x.is_zero() {
                return Err(DynrError::NotNilpotent(self.nilpotency));
            }
        }
        Ok(f)
    }
}

/// exp(ad_f) u as an exact finite sum (ad_f acts as a derivation of ∧•𝔤).
fn exp_ad(f: &MultiVector, u: &MultiVector) -> MultiVector {
    let mut out = u.clone();
    let mut term = u.clone();
    let mut k = 1;
    loop {
        term = f.schouten(&term).scale(&Scalar::one().div(&Scalar::from_i64(k)));
        if term.is_zero() {
            return out;
        }
        out = out.add(&term);
        k += 1;
    }
}

/// `Ad_g u` for `g = exp f`.
pub fn adjoint_action(rm: &DynamicalR, g: &GaugeElement, u: &MultiVector) -> Result<MultiVector, DynrError> {
    let f = g.check(rm)?;
    Ok(exp_ad(&f, u))
}

/// `(∂g/∂λⁱ) g⁻¹ = Σ_k (ad_f)^k (∂f/∂λⁱ) / (k+1)!`.
fn right_log_derivative(f: &MultiVector, i: usize) -> MultiVector {
    let mut term = lambda_derivative(f, i);
    let mut out = MultiVector::zero(f.algebra());
    let mut k = 0;
    while !term.is_zero() {
        out = out.add(&term.scale(&Scalar::one().div(&factorial(k + 1))));
        term = f.schouten(&term);
        k += 1;
    }
    out
}

/// `r_g = Ad_g r − Σᵢ hᵢ∧(∂g/∂λⁱ)g⁻¹`. When `r` solves the CDYBE, so must `r_g`;
/// that is re-verified on the result.
pub fn gauge_transform(rm: &DynamicalR, g: &GaugeElement) -> Result<DynamicalR, DynrError> {
    let f = g.check(rm)?;
    let alg = &rm.alg;
    let mut rg = exp_ad(&f, &rm.r);
    for i in 0..rm.l() {
        rg = rg.sub(&MultiVector::basis(alg, i).wedge(&right_log_derivative(&f, i)));
    }
    let out = DynamicalR::new(rg)?;
    if is_r_matrix(rm) && !is_r_matrix(&out) {
        return Err(DynrError::Internal(format!("gauge image fails CDYBE: {}", cdybe_residual(&out))));
    }
    Ok(out)
}
