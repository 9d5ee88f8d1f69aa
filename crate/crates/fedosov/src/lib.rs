//! Truncated Weyl-bundle calculus over the invariant frame geometry and the
//! Fedosov construction of the compatible star product.
//!
//! Conventions: the fiber product is `a∘b = Σ (ℏ/2)ᵏ/k! π^{i₁j₁}..∂ᵏa ∂ᵏb`
//! with the frame Poisson matrix, and the Abelian connection is
//! `D = −δ + ∂ + (i/ℏ)[γ,·]`. With no `i` in the fiber product, the
//! curvature of `∂` is `∂²a = (i/ℏ)[R_W, a]` for
//! `R_W = −i·¼ R_{EF,AB} y^E y^F θ^A∧θ^B`, and the γ-equation is
//! `δγ − ∂γ − (i/ℏ)γ² = R_W − i Σ ℏⁱωᵢ`.

pub mod abelian;
pub mod ops;
pub mod weyl;

use thiserror::Error;

pub use abelian::{weyl_curvature, Fedosov};
pub use ops::WeylCtx;
pub use weyl::{Caps, Coeff, Key, Linear, Ring, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FedosovError {
    #[error("term with ℏ^{k} and total degree {degree} exceeds caps {caps:?}")]
    CapExceeded { k: u32, degree: u32, caps: Caps },
    #[error("caps {caps:?} cannot determine ℏ^{order}; need k_max ≥ {need_k}, n_max ≥ {need_n}")]
    CapTooSmall { order: u32, caps: Caps, need_k: u32, need_n: u32 },
    #[error("Weyl curvature term ω{0} is not closed")]
    NotClosed(usize),
    #[error("Weyl curvature term ω{0} does not vanish on ē_h")]
    NotHorizontal(usize),
    #[error("Weyl curvature term ω{0} is not a 2-form on this frame")]
    NotTwoForm(usize),
    #[error("iteration did not stabilize within caps: {0}")]
    NotStabilized(String),
    #[error("post-condition failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Geom(#[from] geom::GeomError),
}
