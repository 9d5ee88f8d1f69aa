//! Triangular dynamical r-matrices r: 𝔥* → ∧²𝔤 with rational coefficients in λ.
//!
//! λ¹..λˡ are the scalar variables `0..l`, where `l` is the Cartan dimension of the
//! algebra. Higher scalar variables are free for callers (formal parameters).

pub mod algebroid;
pub mod fixtures;
pub mod gauge;
pub mod restrict;

use std::sync::Arc;

use liealg::{LieAlgebra, LieError, MultiVector};
use symexpr::{Scalar, ScalarMatrix};
use thiserror::Error;

pub use algebroid::{algebroid_bracket, lambda_bivector, lambda_self_bracket, predicted_self_bracket, AlgebroidVector};
pub use gauge::{adjoint_action, gauge_transform, GaugeElement};
pub use restrict::{restrict_to_g1, Restriction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynrError {
    #[error("r must be a bivector (degree 2), got {0:?}")]
    NotDegreeTwo(Option<usize>),
    #[error("not a triangular dynamical r-matrix: {0}")]
    NotAnRMatrix(String),
    #[error("r is not splittable")]
    NotSplittable,
    #[error("base point is singular: {0}")]
    SingularPoint(String),
    #[error("base point has {got} coordinates, expected {expected}")]
    PointDimension { got: usize, expected: usize },
    #[error("restriction does not close: {0}")]
    NotClosed(String),
    #[error("ad_f is not nilpotent of order {0}")]
    NotNilpotent(usize),
    #[error("gauge logarithm does not commute with h{0}")]
    NotCentralizing(usize),
    #[error("cochain is not of zero weight (fails for h{0})")]
    WeightViolation(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// r(λ) ∈ ∧²𝔤 over a fixed algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicalR {
    pub alg: Arc<LieAlgebra>,
    pub r: MultiVector,
}

impl DynamicalR {
    pub fn new(r: MultiVector) -> Result<DynamicalR, DynrError> {
        if !r.is_zero() && r.degree() != Some(2) {
            return Err(DynrError::NotDegreeTwo(r.degree()));
        }
        Ok(DynamicalR { alg: r.algebra().clone(), r })
    }

    pub fn zero(alg: &Arc<LieAlgebra>) -> DynamicalR {
        DynamicalR { alg: alg.clone(), r: MultiVector::zero(alg) }
    }

    pub fn l(&self) -> usize {
        self.alg.cartan_dim()
    }
    pub fn n(&self) -> usize {
        self.alg.dim()
    }

    /// Antisymmetric matrix `R^{ab} = r(e^a*, e^b*)`, i.e. the coefficient of `e_a∧e_b`.
    pub fn matrix(&self) -> ScalarMatrix {
        bivector_matrix(&self.r)
    }

    /// The c-block: R restricted to complement indices.
    pub fn c_matrix(&self) -> ScalarMatrix {
        let (l, n) = (self.l(), self.n());
        let full = self.matrix();
        let mut c = ScalarMatrix::zeros(n - l, n - l);
        for i in l..n {
            for j in l..n {
                c.set(i - l, j - l, full.get(i, j).clone());
            }
        }
        c
    }

    /// The b-rows: for each `h_i`, the coefficients of `h_i∧e_j` over complement `j`.
    pub fn b_rows(&self) -> Vec<Vec<Scalar>> {
        let (l, n) = (self.l(), self.n());
        let full = self.matrix();
        (0..l).map(|i| (l..n).map(|j| full.get(i, j).clone()).collect()).collect()
    }
}

pub fn bivector_matrix(r: &MultiVector) -> ScalarMatrix {
    let n = r.algebra().dim();
    let mut m = ScalarMatrix::zeros(n, n);
    for (k, c) in r.terms() {
        if k.len() == 2 {
            m.set(k[0], k[1], c.clone());
            m.set(k[1], k[0], c.neg());
        }
    }
    m
}

/// ∂u/∂λⁱ coefficientwise (`i` zero-based).
pub fn lambda_derivative(u: &MultiVector, i: usize) -> MultiVector {
    u.map_coeffs(|c| c.diff(i))
}

/// `Σᵢ hᵢ∧∂r/∂λⁱ + ½[r,r]`.
pub fn cdybe_residual(rm: &DynamicalR) -> MultiVector {
    let g = &rm.alg;
    let mut out = rm.r.schouten(&rm.r).scale(&Scalar::ratio(1, 2));
    for i in 0..rm.l() {
        out = out.add(&MultiVector::basis(g, i).wedge(&lambda_derivative(&rm.r, i)));
    }
    out
}

/// `[hᵢ, r]` for each `i`.
pub fn zero_weight_residual(rm: &DynamicalR) -> Vec<MultiVector> {
    (0..rm.l()).map(|i| MultiVector::basis(&rm.alg, i).schouten(&rm.r)).collect()
}

pub fn is_r_matrix(rm: &DynamicalR) -> bool {
    cdybe_residual(rm).is_zero() && zero_weight_residual(rm).iter().all(|w| w.is_zero())
}

fn require_r_matrix(rm: &DynamicalR) -> Result<(), DynrError> {
    let c = cdybe_residual(rm);
    if !c.is_zero() {
        return Err(DynrError::NotAnRMatrix(format!("CDYBE residual {}", c)));
    }
    for (i, w) in zero_weight_residual(rm).iter().enumerate() {
        if !w.is_zero() {
            return Err(DynrError::NotAnRMatrix(format!("[h{}, r] = {}", i + 1, w)));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankFlags {
    pub rank: usize,
    pub nondegenerate: bool,
    pub splittable: bool,
}

/// Rank of the c-block over the function field, non-degeneracy, and splittability
/// (every b-row lies in the row span of the c-block).
pub fn rank_flags(rm: &DynamicalR) -> Result<RankFlags, DynrError> {
    require_r_matrix(rm)?;
    Ok(rank_flags_unchecked(rm))
}

pub(crate) fn rank_flags_unchecked(rm: &DynamicalR) -> RankFlags {
    let c = rm.c_matrix();
    let rank = c.rank();
    let m = rm.n() - rm.l();
    let splittable = rm.b_rows().iter().all(|b| {
        if b.iter().all(|s| s.is_zero()) {
            return true;
        }
        let mut rows: Vec<Vec<Scalar>> = (0..m).map(|i| c.row(i)).collect();
        rows.push(b.clone());
        ScalarMatrix::from_rows(rows).rank() == rank
    });
    RankFlags { rank, nondegenerate: rank == m, splittable }
}

/// `δ_r τ = Σᵢ hᵢ∧∂τ/∂λⁱ + [r, τ]`.
pub fn delta_r(rm: &DynamicalR, tau: &MultiVector, check_weight: bool) -> Result<MultiVector, DynrError> {
    let g = &rm.alg;
    if check_weight {
        for i in 0..rm.l() {
            if !MultiVector::basis(g, i).schouten(tau).is_zero() {
                return Err(DynrError::WeightViolation(i + 1));
            }
        }
    }
    let mut out = rm.r.schouten(tau);
    for i in 0..rm.l() {
        out = out.add(&MultiVector::basis(g, i).wedge(&lambda_derivative(tau, i)));
    }
    Ok(out)
}
