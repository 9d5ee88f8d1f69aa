//! Lie algebras 𝔤 ⊇ 𝔥 (abelian, spanned by the first basis vectors), the exterior
//! algebra ∧•𝔤 with [`Scalar`](symexpr::Scalar) coefficients, the Schouten bracket,
//! and relative Chevalley–Eilenberg cohomology dimensions.

pub mod algebra;
pub mod algebras;
pub mod cohomology;
pub mod multivector;

pub use algebra::{validate_lie_algebra, Diagnostics, LieAlgebra};
pub use cohomology::{relative_cochain_basis, relative_cohomology_dim, relative_differential};
pub use multivector::{schouten_bracket, sort_with_sign, wedge, MultiVector};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("cartan dimension {cartan_dim} exceeds algebra dimension {dim}")]
    CartanTooLarge { cartan_dim: usize, dim: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [e{index}, e{index}] given explicitly")]
    SelfBracket { index: usize },
    #[error("operands belong to different Lie algebras")]
    AlgebraMismatch,
    #[error("degree {degree} outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
}
