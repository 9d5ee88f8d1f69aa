//! Enveloping-algebra tensors, jets on the group, and extraction and checks
//! of the twist `F(λ)` behind a compatible star product on `𝔥* × G`.
//!
//! Conventions: `u↑` is the left-invariant differential operator of
//! `u ∈ U𝔤` on `G` (`e_a ↦ ē_a`), the star product is written
//! `f ⋆ g = Σ ℏᵏ B_k↑(f, g)`, and `Θ = exp(ℏθ)` with
//! `θ = ½ Σ (hᵢ⊗∂ᵢ − ∂ᵢ⊗hᵢ)`.

pub mod checks;
pub mod diffop;
pub mod extract;
pub mod jet;
pub mod pbw;

use thiserror::Error;

pub use diffop::{DiffOp, LegOp, MultiOp, OpSeries};
pub use jet::{left_invariant_fields, GJet, JetCtx};
pub use pbw::{Mono, Pbw, UTensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantizeError {
    #[error(transparent)]
    Fedosov(#[from] fedosov::FedosovError),
    #[error("pairing system singular at PBW degree {degree}; raise the jet degree")]
    SingularPairing { degree: u32 },
    #[error("jet degree {have} too small; need at least {need}")]
    JetDegree { need: u32, have: u32 },
    #[error("leading term is not 1; cannot invert")]
    NotUnital,
    #[error("invalid gauge element: {0}")]
    GaugeElement(String),
    #[error("operator has λ-derivative legs after removing Θ")]
    NotLeftInvariant,
}
