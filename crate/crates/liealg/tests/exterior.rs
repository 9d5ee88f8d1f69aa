use std::sync::Arc;

use liealg::algebras::{abelian3, affine_line, heisenberg, heisenberg_with_center, rotation_semidirect};
use liealg::{relative_cochain_basis, relative_cohomology_dim, relative_differential, LieAlgebra, LieError, MultiVector};
use proptest::prelude::*;
use symexpr::{parse_scalar, Scalar};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn mono(g: &Arc<LieAlgebra>, idx: &[usize]) -> MultiVector {
    MultiVector::monomial(g, idx, Scalar::one())
}

#[test]
fn validate_examples() {
    assert!(heisenberg().validate().is_empty());
    assert!(abelian3().validate().is_empty());
    assert!(rotation_semidirect().validate().is_empty());
    // 𝔥 claimed to be span{h, e} while [h, e] = a h.
    let a = Scalar::from_i64(3);
    let g = LieAlgebra::from_brackets(labels(&["h", "e"]), 2, &[(0, 1, 0, a)]).unwrap();
    let d = g.validate();
    assert_eq!(d.abelian_h, vec![(0, 1)]);
    assert!(d.jacobi.is_empty());
    let g0 = LieAlgebra::from_brackets(labels(&["h", "e"]), 2, &[]).unwrap();
    assert!(g0.validate().is_empty());
}

#[test]
fn validate_reports_broken_algebras() {
    // [h,h] = e is not antisymmetric.
    let g = LieAlgebra::from_raw(labels(&["h", "e"]), 1, &[(0, 0, 1, Scalar::one())]).unwrap();
    assert_eq!(g.validate().antisymmetry, vec![(0, 0)]);
    // [a,b]=b, [b,c]=a, [a,c]=0 violates Jacobi.
    let g = LieAlgebra::from_brackets(
        labels(&["a", "b", "c"]),
        0,
        &[(0, 1, 1, Scalar::one()), (1, 2, 0, Scalar::one())],
    )
    .unwrap();
    assert_eq!(g.validate().jacobi, vec![(0, 1, 2)]);
    let lam = parse_scalar("l1", 1).unwrap();
    let g = LieAlgebra::from_brackets(labels(&["h", "e"]), 1, &[(0, 1, 1, lam)]).unwrap();
    assert!(!g.validate().lambda_dependent.is_empty());
}

#[test]
fn schouten_examples() {
    let a = Scalar::from_i64(5);
    let g = affine_line(a.clone());
    let (h, e) = (mono(&g, &[0]), mono(&g, &[1]));
    assert_eq!(h.schouten(&e), h.scale(&a));
    let he = mono(&g, &[0, 1]);
    assert!(he.schouten(&he).is_zero());

    let g = heisenberg();
    let r = mono(&g, &[1, 2]);
    assert_eq!(r.schouten(&r), mono(&g, &[0, 1, 2]).scale(&Scalar::from_i64(2)));
}

#[test]
fn schouten_rejects_mixed_algebras() {
    let u = mono(&heisenberg(), &[1]);
    let v = mono(&abelian3(), &[1]);
    assert_eq!(liealg::schouten_bracket(&u, &v), Err(LieError::AlgebraMismatch));
    assert_eq!(liealg::wedge(&u, &v), Err(LieError::AlgebraMismatch));
}

#[test]
fn wedge_examples() {
    let g = heisenberg();
    let h = mono(&g, &[0]);
    assert!(h.wedge(&h).is_zero());
    assert_eq!(h.wedge(&mono(&g, &[1])).wedge(&mono(&g, &[2])), mono(&g, &[0, 1, 2]));
    let f = parse_scalar("1/(1+l1)", 1).unwrap();
    let e = mono(&g, &[1]);
    assert_eq!(h.scale(&f).wedge(&e), h.wedge(&e).scale(&f));
    assert_eq!(e.wedge(&h), mono(&g, &[0, 1]).neg());
}

#[test]
fn cohomology_examples() {
    assert_eq!(relative_cohomology_dim(&heisenberg(), 2).unwrap(), (1, 1));
    assert_eq!(relative_cohomology_dim(&abelian3(), 2).unwrap().1, 1);
    for g in [heisenberg(), abelian3(), rotation_semidirect(), heisenberg_with_center()] {
        assert_eq!(relative_cohomology_dim(&g, 0).unwrap().1, 1);
    }
    assert_eq!(
        relative_cohomology_dim(&heisenberg(), 3),
        Err(LieError::DegreeOutOfRange { degree: 3, max: 2 })
    );
}

#[test]
fn cohomology_of_rotation_action() {
    // Invariant forms on span{e1,e2} under rotation: only ξ¹∧ξ² in degree 2, none in degree 1.
    let g = rotation_semidirect();
    assert_eq!(relative_cohomology_dim(&g, 1).unwrap(), (0, 0));
    assert_eq!(relative_cohomology_dim(&g, 2).unwrap(), (1, 1));
    // Heisenberg with extra center k: H¹ = span{ξ¹, ξ², ξᵏ}; d maps nothing out, H² has
    // ξ¹ξ², ξ¹ξᵏ, ξ²ξᵏ.
    let g = heisenberg_with_center();
    assert_eq!(relative_cohomology_dim(&g, 1).unwrap(), (3, 3));
    assert_eq!(relative_cohomology_dim(&g, 2).unwrap(), (3, 3));
}

#[test]
fn differential_squares_to_zero() {
    let so3 = Arc::new(
        LieAlgebra::from_brackets(
            labels(&["a", "b", "c"]),
            1,
            &[(0, 1, 2, Scalar::one()), (1, 2, 0, Scalar::one()), (2, 0, 1, Scalar::one())],
        )
        .unwrap(),
    );
    let nil4 = Arc::new(
        LieAlgebra::from_brackets(
            labels(&["h", "x", "y", "z", "w"]),
            1,
            &[(1, 2, 3, Scalar::one()), (1, 3, 4, Scalar::one()), (1, 4, 0, Scalar::from_i64(2))],
        )
        .unwrap(),
    );
    for g in [heisenberg(), abelian3(), rotation_semidirect(), heisenberg_with_center(), affine_line(Scalar::from_i64(2)), so3, nil4] {
        let m = g.dim() - g.cartan_dim();
        for k in 0..m.saturating_sub(1) {
            let basis = relative_cochain_basis(&g, k).unwrap();
            let d1 = relative_differential(&g, k);
            let d2 = relative_differential(&g, k + 1);
            for v in basis {
                let col = symexpr::ScalarMatrix::from_rows(v.into_iter().map(|s| vec![s]).collect());
                assert!(d2.mul(&d1.mul(&col)).is_zero(), "{:?} degree {}", g, k);
            }
        }
    }
}

// Randomized checks below.

fn algebra_pool() -> Vec<Arc<LieAlgebra>> {
    vec![heisenberg(), rotation_semidirect(), heisenberg_with_center(), affine_line(Scalar::from_i64(-2))]
}

fn coeff_pool() -> Vec<Scalar> {
    ["1", "-2", "3/2", "l1", "1/l1", "i", "l1^2-1"].iter().map(|s| parse_scalar(s, 1).unwrap()).collect()
}

/// Degree-`deg` element from (index seed, coefficient choice) pairs.
fn multivector(g: &Arc<LieAlgebra>, deg: usize, seeds: &[(u32, usize)]) -> MultiVector {
    let n = g.dim();
    let pool = coeff_pool();
    let mut out = MultiVector::zero(g);
    for (seed, c) in seeds {
        // Distinct indices drawn from the seed, so the monomial is never trivially zero.
        let mut avail: Vec<usize> = (0..n).collect();
        let mut idx = Vec::new();
        let mut s = *seed as usize;
        for _ in 0..deg.min(n) {
            idx.push(avail.remove(s % avail.len()));
            s /= n;
        }
        out = out.add(&MultiVector::monomial(g, &idx, pool[c % pool.len()].clone()));
    }
    out
}

fn seeds() -> impl Strategy<Value = Vec<(u32, usize)>> {
    prop::collection::vec((any::<u32>(), 0usize..7), 1..4)
}

fn sgn(k: usize) -> Scalar {
    if k % 2 == 0 {
        Scalar::one()
    } else {
        Scalar::from_i64(-1)
    }
}

/// Direct action of ad_x on each wedge factor, built from the adjoint matrix.
fn ad_direct(g: &Arc<LieAlgebra>, x: &[Scalar], u: &MultiVector) -> MultiVector {
    let ad = g.ad_matrix(x);
    let mut out = MultiVector::zero(g);
    for (key, c) in u.terms() {
        for pos in 0..key.len() {
            for b in 0..g.dim() {
                let a = &ad[b][key[pos]];
                if a.is_zero() {
                    continue;
                }
                let mut idx = key.clone();
                idx[pos] = b;
                out.add_term(idx, c.mul(a));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graded_jacobi(ai in 0usize..4, da in 1usize..4, db in 1usize..4, dc in 1usize..4,
                     sa in seeds(), sb in seeds(), sc in seeds()) {
        let g = &algebra_pool()[ai];
        let a = multivector(g, da, &sa);
        let b = multivector(g, db, &sb);
        let c = multivector(g, dc, &sc);
        let (pa, pb, pc) = (da as i64 - 1, db as i64 - 1, dc as i64 - 1);
        let t1 = a.schouten(&b).schouten(&c).scale(&sgn((pa * pc) as usize));
        let t2 = b.schouten(&c).schouten(&a).scale(&sgn((pb * pa) as usize));
        let t3 = c.schouten(&a).schouten(&b).scale(&sgn((pc * pb) as usize));
        prop_assert!(t1.add(&t2).add(&t3).is_zero());
    }

    #[test]
    fn graded_antisymmetry_and_leibniz(ai in 0usize..4, da in 1usize..4, db in 1usize..3, dc in 1usize..3,
                                        sa in seeds(), sb in seeds(), sc in seeds()) {
        let g = &algebra_pool()[ai];
        let a = multivector(g, da, &sa);
        let b = multivector(g, db, &sb);
        let c = multivector(g, dc, &sc);
        let ab = a.schouten(&b);
        let ba = b.schouten(&a).scale(&sgn((da - 1) * (db - 1)));
        prop_assert_eq!(ab, ba.neg());
        let lhs = a.schouten(&b.wedge(&c));
        let rhs = a.schouten(&b).wedge(&c).add(&b.wedge(&a.schouten(&c)).scale(&sgn((da - 1) * db)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_one_bracket_is_adjoint_derivation(ai in 0usize..4, du in 1usize..4, sx in seeds(), su in seeds()) {
        let g = &algebra_pool()[ai];
        let x = multivector(g, 1, &sx);
        let u = multivector(g, du, &su);
        let xv: Vec<Scalar> = (0..g.dim()).map(|a| x.coeff(&[a])).collect();
        prop_assert_eq!(x.schouten(&u), ad_direct(g, &xv, &u));
    }

    #[test]
    fn odd_elements_square_to_zero(ai in 0usize..4, d in prop::sample::select(vec![1usize, 3]), s in seeds()) {
        let g = &algebra_pool()[ai];
        let u = multivector(g, d, &s);
        prop_assert!(u.wedge(&u).is_zero());
    }

    #[test]
    fn wedge_graded_commutes(ai in 0usize..4, da in 0usize..3, db in 0usize..3, sa in seeds(), sb in seeds()) {
        let g = &algebra_pool()[ai];
        let a = multivector(g, da, &sa);
        let b = multivector(g, db, &sb);
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&sgn(da * db)));
    }
}
