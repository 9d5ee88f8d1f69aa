//! Small algebras used throughout the tests and examples.

use std::sync::Arc;
use symexpr::Scalar;

use crate::LieAlgebra;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// `{h, e1, e2}` with `[e1, e2] = h`, 𝔥 = span{h}.
pub fn heisenberg() -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::from_brackets(labels(&["h", "e1", "e2"]), 1, &[(1, 2, 0, Scalar::one())]).unwrap())
}

/// Heisenberg plus an extra central `k` in the complement.
pub fn heisenberg_with_center() -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::from_brackets(labels(&["h", "e1", "e2", "k"]), 1, &[(1, 2, 0, Scalar::one())]).unwrap())
}

/// Abelian `{h, e1, e2}`, 𝔥 = span{h}.
pub fn abelian3() -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::abelian(labels(&["h", "e1", "e2"]), 1))
}

/// `{h, e}` with `[h, e] = a·h`, 𝔥 = span{h}.
pub fn affine_line(a: Scalar) -> Arc<LieAlgebra> {
    let br = if a.is_zero() { vec![] } else { vec![(0, 1, 0, a)] };
    Arc::new(LieAlgebra::from_brackets(labels(&["h", "e"]), 1, &br).unwrap())
}

/// `{h, e1, e2}` with `[h, e1] = e2`, `[h, e2] = −e1`.
pub fn rotation_semidirect() -> Arc<LieAlgebra> {
    Arc::new(
        LieAlgebra::from_brackets(
            labels(&["h", "e1", "e2"]),
            1,
            &[(0, 1, 2, Scalar::one()), (0, 2, 1, Scalar::from_i64(-1))],
        )
        .unwrap(),
    )
}
