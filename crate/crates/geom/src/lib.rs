//! Invariant geometry of M = 𝔥* × G in the left-invariant frame
//! `{∂/∂λ¹..∂/∂λˡ, ē₁..ēₙ}`.
//!
//! Frame index `A < l` is `∂/∂λ^{A+1}`; `A = l + a` is the left-invariant
//! field `ē_a`. All components are rational in λ only.
//!
//! Sign pin: `π = Σᵢ ē_{hᵢ}∧∂ᵢ + r↑` with `x∧y = x⊗y − y⊗x`, so
//! `π(dλⁱ, ξ^{hⱼ}) = −δᵢⱼ`. The symplectic form is the matrix inverse
//! (`ω_{AB}π^{BC} = δ_A^C`), which gives `ω(ē_{hᵢ}, ·) = −dλⁱ`.

pub mod connection;
pub mod curvature;
pub mod forms;
pub mod suite;

use dynr::{rank_flags, DynamicalR, DynrError};
use symexpr::{Scalar, ScalarMatrix};
use thiserror::Error;

pub use connection::{base_connection, reductive_complement, symplectize, Complement, FrameConnection};
pub use curvature::{curvature, CurvatureTensor};
pub use forms::FrameForm;
pub use suite::{geometry_suite, GeometryReport};

/// `ω(ē_{hᵢ}, X) = HAMILTONIAN_SIGN · dλⁱ(X)` under the pinned convention.
pub const HAMILTONIAN_SIGN: i64 = -1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("π is degenerate (restrict to the subalgebra 𝔤₁ first)")]
    Degenerate,
    #[error("ω is not closed: dω = {0}")]
    NotClosed(String),
    #[error("base point is singular: {0}")]
    SingularPoint(String),
    #[error("complement is not reductive: {0}")]
    NonReductive(String),
    #[error("complement does not span a supplement of 𝔥: {0}")]
    BadComplement(String),
    #[error("geometric check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Dynr(#[from] DynrError),
}

#[derive(Clone, Debug)]
pub struct FrameGeometry {
    pub rm: DynamicalR,
    /// `π^{AB}`.
    pub poisson: ScalarMatrix,
    /// `ω_{AB}`, inverse of `π`.
    pub symplectic: ScalarMatrix,
    /// `structure[A][B]` lists `(C, C_{AB}^C)` with `[X_A, X_B] = Σ C_{AB}^C X_C`.
    structure: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl FrameGeometry {
    pub fn l(&self) -> usize {
        self.rm.l()
    }
    pub fn n(&self) -> usize {
        self.rm.n()
    }
    /// `N = l + n`.
    pub fn size(&self) -> usize {
        self.l() + self.n()
    }
    /// Frame index of `ē_{hᵢ}`.
    pub fn h_index(&self, i: usize) -> usize {
        self.l() + i
    }
    pub fn is_h_index(&self, a: usize) -> bool {
        a >= self.l() && a < 2 * self.l()
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.structure[a][b]
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> Scalar {
        self.structure[a][b].iter().find(|(k, _)| *k == c).map(|(_, s)| s.clone()).unwrap_or_else(Scalar::zero)
    }

    /// Nonzero `(A, B, C_{AB}^c)` with `A < B`.
    pub fn maurer_cartan(&self, c: usize) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        let nn = self.size();
        for a in 0..nn {
            for b in (a + 1)..nn {
                let s = self.structure_constant(a, b, c);
                if !s.is_zero() {
                    out.push((a, b, s));
                }
            }
        }
        out
    }

    /// `X_A(f)`: λ-derivative for `A < l`, zero along left-invariant fields.
    pub fn frame_deriv(&self, f: &Scalar, a: usize) -> Scalar {
        if a < self.l() {
            f.diff(a)
        } else {
            Scalar::zero()
        }
    }

    pub fn omega_form(&self) -> FrameForm {
        FrameForm::from_two_form_matrix(&self.symplectic)
    }
}

/// Frame Poisson matrix of `π = Σᵢ ē_{hᵢ}∧∂ᵢ + r↑`.
pub fn poisson_matrix(rm: &DynamicalR) -> ScalarMatrix {
    let (l, n) = (rm.l(), rm.n());
    let mut p = ScalarMatrix::zeros(l + n, l + n);
    for i in 0..l {
        p.set(l + i, i, Scalar::one());
        p.set(i, l + i, Scalar::from_i64(-1));
    }
    let r = rm.matrix();
    for a in 0..n {
        for b in 0..n {
            p.set(l + a, l + b, r.get(a, b).clone());
        }
    }
    p
}

fn frame_structure(rm: &DynamicalR) -> Vec<Vec<Vec<(usize, Scalar)>>> {
    let (l, n) = (rm.l(), rm.n());
    let mut s = vec![vec![Vec::new(); l + n]; l + n];
    for a in 0..n {
        for b in 0..n {
            s[l + a][l + b] = rm.alg.bracket_basis(a, b).iter().map(|(c, v)| (l + c, v.clone())).collect();
        }
    }
    s
}

pub fn build_frame_geometry(rm: &DynamicalR) -> Result<FrameGeometry, GeomError> {
    let flags = rank_flags(rm)?;
    if !flags.nondegenerate {
        return Err(GeomError::Degenerate);
    }
    let poisson = poisson_matrix(rm);
    let symplectic = poisson.inverse().ok_or(GeomError::Degenerate)?;
    let geom = FrameGeometry { rm: rm.clone(), poisson, symplectic, structure: frame_structure(rm) };
    let d_omega = geom.omega_form().d(&geom);
    if !d_omega.is_zero() {
        return Err(GeomError::NotClosed(d_omega.to_string()));
    }
    let nn = geom.size();
    for i in 0..geom.l() {
        for x in 0..nn {
            let expect = if x == i { Scalar::from_i64(HAMILTONIAN_SIGN) } else { Scalar::zero() };
            if geom.symplectic.get(geom.h_index(i), x) != &expect {
                return Err(GeomError::CheckFailed(format!("ω(ē_h{}, X{}) ≠ ±dλ", i + 1, x)));
            }
        }
    }
    Ok(geom)
}
