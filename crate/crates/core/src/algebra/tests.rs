use proptest::prelude::{prop, prop_assert, prop_assert_eq, proptest, ProptestConfig};
use proptest::strategy::Strategy as PStrategy;

use super::*;
use crate::rmatrix::instances::{broken_nonunitary, example1, example2, identity};
use crate::symfield::{Monomial, RatExpr, Var};

fn z(k: usize) -> ArgShift {
    ArgShift::plain(Var::z(k))
}

fn w() -> ArgShift {
    ArgShift::plain(Var::W)
}

fn phi(i: usize, a: ArgShift) -> GenOcc {
    GenOcc::vector(GenKind::Phi, i, a)
}

fn mat(k: GenKind, i: usize, j: usize, a: ArgShift) -> GenOcc {
    GenOcc::matrix(k, i, j, a)
}

fn system(rm: crate::rmatrix::RMatrix, f: Flavor) -> RewriteSystem {
    RewriteSystem::new(rm, f, Toggles::default()).unwrap()
}

/// Independent oracle: `R1(a/b)` by direct evaluation of the scalar entry.
fn r1_at(a: Var, b: Var) -> RatExpr {
    // (x - q^2)/(x q^2 - 1) at x = a/b, cleared: (a - q^2 b)/(a q^2 - b)
    let (a, b, q2) = (RatExpr::var(a), RatExpr::var(b), RatExpr::q_pow(2));
    a.sub(&q2.mul(&b)).div(&a.mul(&q2).sub(&b)).unwrap()
}

#[test]
fn phi_phi_scalar_normal_order() {
    let rs = system(example1(), Flavor::P);
    let e = Element::word(RatExpr::one(), vec![phi(0, z(2)), phi(0, z(1))]);
    let nf = normal_order(&e, &rs).unwrap();
    let expect = Element::word(r1_at(Var::z(1), Var::z(2)), vec![phi(0, z(1)), phi(0, z(2))]);
    assert_eq!(nf, expect);
}

#[test]
fn diagonal_l_l_commutes_with_unit_coefficient() {
    let rs = system(example2(2), Flavor::EP);
    let e = Element::word(RatExpr::one(), vec![mat(GenKind::L, 0, 0, z(2)), mat(GenKind::L, 0, 0, z(1))]);
    let nf = normal_order(&e, &rs).unwrap();
    let expect = Element::word(RatExpr::one(), vec![mat(GenKind::L, 0, 0, z(1)), mat(GenKind::L, 0, 0, z(2))]);
    assert_eq!(nf, expect);
    let ordered = Element::word(RatExpr::one(), vec![mat(GenKind::L, 0, 0, z(1)), mat(GenKind::L, 0, 0, z(2))]);
    assert_eq!(normal_order(&ordered, &rs).unwrap(), ordered);
}

#[test]
fn diagonal_l_l_offdiagonal_component() {
    // For diagonal R the (1,2),(1,2) component of R L1 L2 = L2 L1 R reads
    // r l11(x1) l22(x2) = l22(x2) l11(x1) r with the same entry r on both
    // sides, so the two generators commute.
    let rm = example2(2);
    let rs = system(rm.clone(), Flavor::EP);
    let e = Element::word(RatExpr::one(), vec![mat(GenKind::L, 1, 1, z(2)), mat(GenKind::L, 0, 0, z(1))]);
    let nf = normal_order(&e, &rs).unwrap();
    let expect = Element::word(RatExpr::one(), vec![mat(GenKind::L, 0, 0, z(1)), mat(GenKind::L, 1, 1, z(2))]);
    assert_eq!(nf, expect);
}

#[test]
fn phi_phistar_scalar_produces_delta_terms() {
    let rs = system(example1(), Flavor::DEP);
    let e = Element::word(RatExpr::one(), vec![phi(0, z(1)), GenOcc::vector(GenKind::PhiStar, 0, w())]);
    let nf = normal_order(&e, &rs).unwrap();
    let c = LinForm::charge_halves(1, 2);
    let half = LinForm::charge_halves(1, 1);
    let k = kappa();
    let mut expect = Element::word(RatExpr::one(), vec![GenOcc::vector(GenKind::PhiStar, 0, w()), phi(0, z(1))]);
    expect.add_term(
        k.clone(),
        Monom { deltas: vec![DeltaFactor::new(Var::z(1), Var::W, c.neg())], legs: vec![vec![mat(GenKind::Lstar, 0, 0, w().shifted(&half))]], flagged: false },
    );
    expect.add_term(
        k.neg(),
        Monom { deltas: vec![DeltaFactor::new(Var::z(1), Var::W, c)], legs: vec![vec![mat(GenKind::L, 0, 0, z(1).shifted(&half))]], flagged: false },
    );
    assert_eq!(nf, expect);
    // kappa = 1/(q - 1/q)
    let q = RatExpr::q_pow(1);
    assert_eq!(k, RatExpr::one().div(&q.sub(&q.inv().unwrap())).unwrap());
}

#[test]
fn multiply_examples() {
    let f = RatExpr::var(Var::z(1));
    let g = RatExpr::var(Var::W);
    let a = Element::word(f.clone(), vec![phi(0, z(1))]);
    assert_eq!(a.multiply(&Element::one(1)).unwrap(), a);
    let b = Element::word(g.clone(), vec![mat(GenKind::L, 0, 0, w())]);
    assert_eq!(a.multiply(&b).unwrap(), Element::word(f.mul(&g), vec![phi(0, z(1)), mat(GenKind::L, 0, 0, w())]));
    let two = Element::gen(phi(0, z(1))).tensor(&Element::one(1));
    let other = Element::gen(mat(GenKind::L, 0, 0, w())).tensor(&Element::gen(phi(0, w())));
    let prod = two.multiply(&other).unwrap();
    let expect = Element::from_monom(
        RatExpr::one(),
        Monom { deltas: vec![], legs: vec![vec![phi(0, z(1)), mat(GenKind::L, 0, 0, w())], vec![phi(0, w())]], flagged: false },
    );
    assert_eq!(prod, expect);
    assert!(matches!(a.multiply(&two), Err(crate::Error::Shape(_))));
}

fn delta_elem(c: RatExpr, d: DeltaFactor, word: Vec<GenOcc>) -> Element {
    Element::from_monom(c, Monom { deltas: vec![d], legs: vec![word], flagged: false })
}

#[test]
fn delta_normalize_examples() {
    let d0 = DeltaFactor::new(Var::z(1), Var::W, LinForm::ZERO);
    let ratio = RatExpr::var(Var::z(1)).div(&RatExpr::var(Var::W)).unwrap();
    let e = delta_elem(ratio, d0, vec![]);
    assert_eq!(delta_normalize(&e), delta_elem(RatExpr::one(), d0, vec![]));

    let c = LinForm::charge_halves(1, 2);
    let half = LinForm::charge_halves(1, 1);
    let d = DeltaFactor::new(Var::z(1), Var::W, c.neg());
    let stays = delta_elem(RatExpr::one(), d, vec![mat(GenKind::Lstar, 0, 0, w().shifted(&half))]);
    assert_eq!(delta_normalize(&stays), stays);
    let moved = delta_elem(RatExpr::one(), d, vec![mat(GenKind::Lstar, 0, 0, z(1).shifted(&half.neg()))]);
    assert_eq!(delta_normalize(&moved), stays);

    // f(z, w) delta - f(w q^c, w) delta = 0
    let f = RatExpr::var(Var::z(1)).mul(&RatExpr::var(Var::W)).add(&RatExpr::one());
    let f_sub = f.substitute_monomials(&[(Var::z(1), Monomial::var(Var::W).mul(&c.monomial()))]).unwrap();
    let diff = delta_elem(f, d, vec![]).sub(&delta_elem(f_sub, d, vec![])).unwrap();
    assert!(delta_normalize(&diff).is_zero());
}

#[test]
fn contradictory_deltas_are_flagged() {
    let d1 = DeltaFactor::new(Var::z(1), Var::z(2), LinForm::ZERO);
    let d2 = DeltaFactor::new(Var::z(1), Var::z(2), LinForm::constant_halves(2));
    let e = Element::from_monom(RatExpr::one(), Monom { deltas: vec![d1, d2], legs: vec![vec![]], flagged: false });
    let out = delta_normalize(&e);
    assert!(out.has_flagged());
    let dup = Element::from_monom(RatExpr::one(), Monom { deltas: vec![d1, d1], legs: vec![vec![]], flagged: false });
    let merged = delta_normalize(&dup);
    assert_eq!(merged, Element::from_monom(RatExpr::one(), Monom { deltas: vec![d1], legs: vec![vec![]], flagged: false }));
}

#[test]
fn chained_deltas_substitute_transitively() {
    // delta(z1/z2) delta(z2/w q) * z1: z1 -> z2 -> w q^{-1}
    let d1 = DeltaFactor::new(Var::z(1), Var::z(2), LinForm::ZERO);
    let d2 = DeltaFactor::new(Var::z(2), Var::W, LinForm::constant_halves(2));
    let e = Element::from_monom(RatExpr::var(Var::z(1)), Monom { deltas: vec![d1, d2], legs: vec![vec![]], flagged: false });
    let out = delta_normalize(&e);
    let (m, c) = out.terms().next().unwrap();
    assert_eq!(*c, RatExpr::var(Var::W).mul(&RatExpr::q_pow(-1)));
    assert!(!m.flagged);
    assert_eq!(m.deltas.len(), 2);
    assert!(m.deltas.iter().all(|d| d.b == Var::W));
}

#[test]
fn inverse_contraction() {
    for (k, kinv) in [(GenKind::L, GenKind::Linv), (GenKind::Lstar, GenKind::Lstarinv)] {
        let rs = system(example2(2), Flavor::DEP);
        for i in 0..2 {
            for j in 0..2 {
                let mut e = Element::zero(1);
                for kk in 0..2 {
                    e.add_term(RatExpr::one(), Monom::word(vec![mat(kinv, i, kk, z(1)), mat(k, kk, j, z(1))]));
                }
                let nf = normal_order(&e, &rs).unwrap();
                let expect = if i == j { Element::one(1) } else { Element::zero(1) };
                assert_eq!(nf, expect, "{k:?} {i}{j}");
            }
        }
    }
}

#[test]
fn braid_consistency_instances() {
    assert!(braid_consistency(&system(example2(2), Flavor::P)).unwrap().agree);
    assert!(braid_consistency(&system(example1(), Flavor::P)).unwrap().agree);
    assert!(braid_consistency(&system(identity(2), Flavor::P)).unwrap().agree);
    let broken = braid_consistency(&system(broken_nonunitary(), Flavor::P)).unwrap();
    assert!(!broken.agree);
    assert!(broken.residual_terms > 0);
}

#[test]
fn relations_are_sound_under_own_rules() {
    for rm in [example1(), example2(2)] {
        let rs = system(rm.clone(), Flavor::DEP);
        for id in RelationId::ALL {
            for comp in relation_components(id, &rm, rs.toggles()).unwrap() {
                let r = reduce(&comp, &rs).unwrap();
                assert!(r.is_zero(), "{id}: {r}");
            }
        }
    }
}

fn arb_gen(flavor: Flavor, n: usize) -> impl PStrategy<Value = GenOcc> {
    let kinds = flavor.kinds();
    (0..kinds.len(), 0..n, 0..n, 1usize..=3).prop_map(move |(k, i, j, v)| {
        let kind = kinds[k];
        if kind.is_matrix() {
            mat(kind, i, j, z(v))
        } else {
            GenOcc::vector(kind, i, z(v))
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fuzz_termination_and_idempotence(word in prop::collection::vec(arb_gen(Flavor::DEP, 2), 1..4)) {
        let rs = system(example2(2), Flavor::DEP);
        let e = Element::word(RatExpr::one(), word);
        let nf = normal_order_traced(&e, &rs, order::Strategy::Leftmost, &mut |before, after| {
            assert!(measure(after) < measure(before), "{before} -> {after}");
        }).unwrap();
        prop_assert_eq!(normal_order(&nf, &rs).unwrap(), nf.clone());
        for (m, _) in nf.terms() {
            for w in &m.legs {
                prop_assert!(w.windows(2).all(|p| !out_of_order(&p[0], &p[1])));
            }
        }
    }
}

#[test]
fn printed_elements_parse_back() {
    let rs = RewriteSystem::new(example2(2), Flavor::DEP, Toggles::default()).unwrap();
    let e = parse_element("Phi1(z1)*PhiStar2(z2*q^(c1/2)) - 2*q^-1*L12(z3) + u1*delta(z1/z2*q^(-c1))*Lstar21(z2)").unwrap();
    assert_eq!(e.len(), 3);
    let r = reduce(&e, &rs).unwrap();
    assert_eq!(parse_element(&r.to_string()).unwrap(), r);
    let t = parse_element("(q) * Phi1(z1) @ 1 + 1 @ L11(z2*q^(c2-c1/2)) - 3").unwrap();
    assert_eq!(t.nlegs(), 2);
    assert_eq!(parse_element(&t.to_string()).unwrap(), t);
    for bad in ["Phi(z1)", "Phi1(2*z1)", "Phi1(z1*z2)", "Foo1(z1)", "delta(z1*z2)", "Phi1(z1)^(1/2)"] {
        assert!(parse_element(bad).is_err(), "{bad}");
    }
}
