use std::sync::Arc;

use fedosov::Linear;
use liealg::algebras::{abelian3, heisenberg, rotation_semidirect};
use liealg::LieAlgebra;
use proptest::prelude::*;
use quantize::checks::{series, theta_cocycle_defect};
use quantize::diffop::{apply_series, theta_exp};
use quantize::pbw::mono_coproduct;
use quantize::{GJet, JetCtx, Mono, Pbw, UTensor};
use symexpr::Scalar;

fn heis() -> Pbw {
    Pbw::new(heisenberg())
}

fn mono(v: &[u32]) -> Mono {
    v.to_vec()
}

fn elem(pbw: &Pbw, terms: &[(&[u32], i64)]) -> UTensor {
    let t: Vec<(u32, Mono, Scalar)> = terms.iter().map(|(m, c)| (0, m.to_vec(), Scalar::from_i64(*c))).collect();
    UTensor::element(pbw.dim(), 3, &t)
}

#[test]
fn straightening_one_step() {
    // basis order h, e1, e2; e2·e1 = e1e2 − h
    let pbw = heis();
    let p = pbw.mono_mul(&mono(&[0, 0, 1]), &mono(&[0, 1, 0]));
    let expect = vec![(mono(&[0, 1, 1]), Scalar::one()), (mono(&[1, 0, 0]), Scalar::from_i64(-1))];
    let mut got = p.clone();
    got.sort_by(|a, b| a.0.cmp(&b.0));
    let mut want = expect;
    want.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(got, want);
    // already normal
    assert_eq!(pbw.mono_mul(&mono(&[0, 1, 0]), &mono(&[0, 0, 1])), vec![(mono(&[0, 1, 1]), Scalar::one())]);
}

#[test]
fn heisenberg_powers_against_closed_form() {
    // e2·e1ⁿ = e1ⁿe2 − n h e1ⁿ⁻¹ since h is central
    let pbw = heis();
    for n in 1..6u32 {
        let mut got = pbw.mono_mul(&mono(&[0, 0, 1]), &mono(&[0, n, 0]));
        got.sort_by(|a, b| a.0.cmp(&b.0));
        let mut want = vec![(mono(&[0, n, 1]), Scalar::one()), (mono(&[1, n - 1, 0]), Scalar::from_i64(-(n as i64)))];
        want.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(got, want, "n = {n}");
    }
}

#[test]
fn coproduct_and_counit_examples() {
    let pbw = heis();
    let e1 = elem(&pbw, &[(&[0, 1, 0], 1)]);
    let d = e1.coproduct(0);
    let mut want = UTensor::zero(2, 3, 3);
    want.add_term(0, vec![mono(&[0, 1, 0]), mono(&[0, 0, 0])], Scalar::one());
    want.add_term(0, vec![mono(&[0, 0, 0]), mono(&[0, 1, 0])], Scalar::one());
    assert_eq!(d, want);
    let x = elem(&pbw, &[(&[0, 0, 0], 1), (&[0, 1, 1], 3)]);
    assert_eq!(x.counit(0), UTensor::one(0, 3, 3));
    assert_eq!(mono_coproduct(&mono(&[0, 2, 0])).len(), 3);
}

fn algebras() -> Vec<Arc<LieAlgebra>> {
    vec![heisenberg(), rotation_semidirect(), abelian3()]
}

fn arb_element(n: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..3, n), -3i64..4), 1..4)
}

fn to_elem(pbw: &Pbw, t: &[(Vec<u32>, i64)]) -> UTensor {
    let terms: Vec<(u32, Mono, Scalar)> = t.iter().map(|(m, c)| (0, m.clone(), Scalar::from_i64(*c))).collect();
    UTensor::element(pbw.dim(), 0, &terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pbw_product_is_associative(which in 0usize..3, a in arb_element(3), b in arb_element(3), c in arb_element(3)) {
        let pbw = Pbw::new(algebras()[which].clone());
        let (a, b, c) = (to_elem(&pbw, &a), to_elem(&pbw, &b), to_elem(&pbw, &c));
        prop_assert_eq!(a.mul(&b, &pbw).mul(&c, &pbw), a.mul(&b.mul(&c, &pbw), &pbw));
    }

    #[test]
    fn commutators_of_generators_are_brackets(which in 0usize..3, x in arb_element(3)) {
        let alg = algebras()[which].clone();
        let pbw = Pbw::new(alg.clone());
        let x = to_elem(&pbw, &x);
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let ea = to_elem(&pbw, &[(pbw.generator(a), 1)]);
                let eb = to_elem(&pbw, &[(pbw.generator(b), 1)]);
                let mut br = UTensor::zero(1, alg.dim(), 0);
                for (c, s) in alg.bracket_basis(a, b) {
                    br.add_term(0, vec![pbw.generator(*c)], s.clone());
                }
                // [e_a, e_b]·x = (e_a e_b − e_b e_a)·x
                let lhs = ea.mul(&eb, &pbw).sub(&eb.mul(&ea, &pbw)).mul(&x, &pbw);
                prop_assert_eq!(lhs, br.mul(&x, &pbw));
            }
        }
    }

    #[test]
    fn coproduct_is_multiplicative_and_counital(which in 0usize..3, a in arb_element(3), b in arb_element(3)) {
        let pbw = Pbw::new(algebras()[which].clone());
        let (a, b) = (to_elem(&pbw, &a), to_elem(&pbw, &b));
        prop_assert_eq!(a.mul(&b, &pbw).coproduct(0), a.coproduct(0).mul(&b.coproduct(0), &pbw));
        let da = a.coproduct(0);
        prop_assert_eq!(da.counit(0), a.clone());
        prop_assert_eq!(da.counit(1), a.clone());
        // coassociativity
        prop_assert_eq!(da.coproduct(0), da.coproduct(1));
    }

    #[test]
    fn geometric_inverse(which in 0usize..3, a in arb_element(3)) {
        let pbw = Pbw::new(algebras()[which].clone());
        let n = pbw.dim();
        let x: Vec<(u32, Mono, Scalar)> = a.iter().map(|(m, c)| (1, m.clone(), Scalar::from_i64(*c))).collect();
        let t = UTensor::one(1, n, 3).add(&UTensor::element(n, 3, &x));
        let inv = t.inverse(&pbw).unwrap();
        prop_assert_eq!(t.mul(&inv, &pbw), UTensor::one(1, n, 3));
        prop_assert_eq!(inv.mul(&t, &pbw), UTensor::one(1, n, 3));
    }
}

#[test]
fn inverse_needs_unit_leading_term() {
    let pbw = heis();
    let t = elem(&pbw, &[(&[0, 1, 0], 1)]);
    assert!(t.inverse(&pbw).is_none());
}

#[test]
fn abelian_fields_are_coordinate_derivatives() {
    let jets = JetCtx::new(abelian3(), 5);
    for (a, row) in jets.fields().iter().enumerate() {
        for (b, m) in row.iter().enumerate() {
            let want = if a == b { jets.constant(Scalar::one()) } else { GJet::zero() };
            assert_eq!(m, &want);
            assert!(m.is_lambda_only());
        }
    }
}

#[test]
fn heisenberg_fields_terminate_at_degree_one() {
    // coordinates x1 (h), x2 (e1), x3 (e2): ē_{e1} = ∂₂ − ½x3∂₁, ē_{e2} = ∂₃ + ½x2∂₁
    let jets = JetCtx::new(heisenberg(), 6);
    let f = jets.fields();
    let one = jets.constant(Scalar::one());
    assert_eq!(f[0][0], one);
    assert!(f[0][1].is_zero() && f[0][2].is_zero());
    assert_eq!(f[1][1], one);
    assert_eq!(f[1][0], jets.coordinate(2).scale(&Scalar::ratio(-1, 2)));
    assert_eq!(f[2][2], one);
    assert_eq!(f[2][0], jets.coordinate(1).scale(&Scalar::ratio(1, 2)));
    for row in f {
        for m in row {
            assert!(m.max_degree() <= 1);
        }
    }
}

#[test]
fn dexp_series_for_rotation_algebra() {
    // [h, e1] = e2, [h, e2] = −e1: ē_{e1} on the h-axis is ψ(ad_x)e1 with
    // ψ(z) = 1 + z/2 + z²/12 − z⁴/720 + …
    let alg = rotation_semidirect();
    let jets = JetCtx::new(alg.clone(), 6);
    let f = jets.fields();
    let c = |a: usize, b: usize, m: &[u32]| f[a][b].coeff(m);
    // x = x1 h: ad_x e1 = x1 e2, ad_x² e1 = −x1² e1
    assert_eq!(c(1, 1, &[0, 0, 0]), Scalar::one());
    assert_eq!(c(1, 2, &[1, 0, 0]), Scalar::ratio(1, 2));
    assert_eq!(c(1, 1, &[2, 0, 0]), Scalar::ratio(-1, 12));
    assert_eq!(c(1, 1, &[4, 0, 0]), Scalar::ratio(-1, 720));
    assert!(c(1, 2, &[3, 0, 0]).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fields_realize_the_bracket(which in 0usize..3, terms in prop::collection::vec((prop::collection::vec(0u32..3, 3), -4i64..5), 1..6)) {
        let alg = algebras()[which].clone();
        let d = 6;
        let jets = JetCtx::new(alg.clone(), d);
        let f = GJet::from_terms(i32::MAX, terms.iter().map(|(m, c)| (m.clone(), Scalar::from_i64(*c))));
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let def = jets.bracket_defect(a, b, &f);
                prop_assert!(def.prec() >= d as i32 - 1);
                prop_assert!(def.is_zero(), "[ē{}, ē{}] defect {:?}", a, b, def);
            }
        }
    }
}

fn theta_series(pbw: &Pbw, k: u32) -> Vec<quantize::MultiOp> {
    theta_exp(pbw, k, 1).normalize()
}

#[test]
fn theta_on_lambda_functions_is_pointwise() {
    let pbw = heis();
    let jets = JetCtx::new(heisenberg(), 6);
    let f = jets.parse("l1^3 + 2*l1", 1).unwrap();
    let g = jets.parse("1/(1+l1)", 1).unwrap();
    let th = theta_series(&pbw, 3);
    let got = apply_series(&jets, &th, &[&series(&f), &series(&g)], 3);
    assert_eq!(got[0], f.mul_jet(&g));
    assert!(got[1..].iter().all(|x| x.is_zero()));
}

#[test]
fn theta_mixed_product_law() {
    // Θ(f(λ), g(x)) = Σ (−ℏ/2)ᵏ/k! ∂ᵏf · ē_hᵏ g, and the mirrored law.
    let pbw = heis();
    let jets = JetCtx::new(heisenberg(), 6);
    let f = jets.parse("l1^3", 1).unwrap();
    let g = jets.parse("x1^3 + x1*x2 + x3^2*x1^2", 1).unwrap();
    let th = theta_series(&pbw, 3);
    let got = apply_series(&jets, &th, &[&series(&f), &series(&g)], 3);
    let mut hg = g.clone();
    let mut df = f.clone();
    let mut c = Scalar::one();
    for k in 0..=3usize {
        assert_eq!(got[k], df.mul_jet(&hg).scale(&c), "order {k}");
        df = df.diff_lambda(0);
        hg = jets.apply_field(0, &hg);
        c = c.mul(&Scalar::ratio(-1, 2 * (k as i64 + 1)));
    }
    let rev = apply_series(&jets, &th, &[&series(&g), &series(&f)], 3);
    // ħ¹ term of g⋆f: +½ ē_h g ∂f
    assert_eq!(rev[1], jets.apply_field(0, &g).mul_jet(&f.diff_lambda(0)).scale(&Scalar::ratio(1, 2)));
}

fn arb_jet_text() -> impl Strategy<Value = String> {
    let term = (-3i64..4, -2i64..3, 0u32..3, 0u32..3, 0u32..2)
        .prop_map(|(a, b, p, q, r)| format!("({a}+{b}*l1)*x1^{p}*x2^{q}*x3^{r}"));
    prop::collection::vec(term, 1..4).prop_map(|v| v.join("+"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn theta_is_a_cocycle_on_jets(f in arb_jet_text(), g in arb_jet_text(), h in arb_jet_text()) {
        let pbw = heis();
        let jets = JetCtx::new(heisenberg(), 6);
        let (f, g, h) = (jets.parse(&f, 1).unwrap(), jets.parse(&g, 1).unwrap(), jets.parse(&h, 1).unwrap());
        let d = theta_cocycle_defect(&jets, &pbw, &f, &g, &h, 3);
        for x in &d {
            prop_assert!(x.prec() >= 0);
            prop_assert!(x.is_zero());
        }
    }
}

#[test]
fn jet_parser_rejects_bad_input() {
    let jets = JetCtx::new(heisenberg(), 4);
    assert!(jets.parse("x4", 1).is_err());
    assert!(jets.parse("1/x1", 1).is_err());
    assert!(jets.parse("l2", 1).is_err());
    let inv = jets.parse("1/(1+x1)", 1).unwrap();
    assert_eq!(inv.mul_jet(&jets.parse("1+x1", 1).unwrap()), jets.constant(Scalar::one()));
}
