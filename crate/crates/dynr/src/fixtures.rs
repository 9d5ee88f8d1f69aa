//! Reference r-matrices.

use liealg::algebras::{abelian3, affine_line, heisenberg};
use liealg::MultiVector;
use symexpr::{parse_scalar, Scalar};

use crate::DynamicalR;

/// Abelian {h, e1, e2} with constant r = e1∧e2.
pub fn fix_a() -> DynamicalR {
    let g = abelian3();
    DynamicalR::new(MultiVector::monomial(&g, &[1, 2], Scalar::one())).unwrap()
}

/// Heisenberg with r = f(λ) e1∧e2.
pub fn heisenberg_r(f: Scalar) -> DynamicalR {
    let g = heisenberg();
    DynamicalR::new(MultiVector::monomial(&g, &[1, 2], f)).unwrap()
}

/// Heisenberg with r = (1/λ) e1∧e2.
pub fn fix_b() -> DynamicalR {
    heisenberg_r(parse_scalar("1/l1", 1).unwrap())
}

/// {h, e} with [h, e] = a h and r = f(λ) h∧e.
pub fn fix_c(a: Scalar, f: Scalar) -> DynamicalR {
    let g = affine_line(a);
    DynamicalR::new(MultiVector::monomial(&g, &[0, 1], f)).unwrap()
}
