use num_rational::Ratio;
use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::parse::parse_rat;

fn r(t: &str) -> RatExpr {
    parse_rat(t).unwrap()
}

fn p(t: &str) -> LaurentPoly {
    let e = r(t);
    assert!(e.den().is_one());
    e.num().clone()
}

#[test]
fn inverse_pair_multiplies_to_one() {
    assert!(r("(x-q^2)/(x*q^2-1)").mul(&r("(x*q^2-1)/(x-q^2)")).is_one());
}

#[test]
fn q_identity_cancels() {
    assert!(r("q^2 + q^-2 - (q^4+1)/q^2").is_zero());
}

#[test]
fn unitarity_of_scalar_r_by_expansion() {
    // numerators (x - q^2)(1 - q^2 x) against denominators (x q^2 - 1)(q^2 - x),
    // multiplied out term by term without going through RatExpr.
    let nums = p("x - q^2").mul(&p("1 - q^2*x"));
    let dens = p("x*q^2 - 1").mul(&p("q^2 - x"));
    assert_eq!(nums, dens);
    let r1 = r("(x-q^2)/(x*q^2-1)");
    let r1_inv_arg = r1.substitute_monomials(&[(Var::X, Monomial::var_pow(Var::X, -1))]).unwrap();
    assert!(r1.mul(&r1_inv_arg).is_one());
}

#[test]
fn substitute_shift_by_q() {
    let f = r("(x-q^2)/(x*q^2-1)");
    let b = Binding { monomial: Monomial::var(Var::X), q_power: Ratio::from_integer(1) };
    let got = f.substitute(&[(Var::X, b)]).unwrap();
    assert_eq!(got, r("(x*q-q^2)/(x*q^3-1)"));
    // same value at a sample point, computed from the original by hand
    let pt = [(Var::X, Ratio::new(3i128, 7)), (Var::S, Ratio::new(2i128, 1))];
    let q = Ratio::new(4i128, 1);
    let x = Ratio::new(3i128, 7) * q;
    let expect = (x - q * q) / (x * q * q - Ratio::from_integer(1));
    assert_eq!(got.eval_i128(&pt), Some(expect));
}

#[test]
fn substitute_identity_binding() {
    let f = r("(x-q^2)/(x*q^2-1) + z1");
    let got = f.substitute(&[(Var::X, Binding::monomial(Monomial::var(Var::X)))]).unwrap();
    assert_eq!(got, f);
}

#[test]
fn substitute_delta_support() {
    // z -> w q^{-c}: with u1 = q^{c/2} the image monomial is w u1^-2
    let img = Monomial::var(Var::W).mul(&Monomial::var_pow(Var::u(1), -2));
    let got = r("z1/w").substitute(&[(Var::z(1), Binding::monomial(img))]).unwrap();
    assert_eq!(got, RatExpr::monomial(Monomial::var_pow(Var::u(1), -2)));
}

#[test]
fn substitute_rejects_fractional_q_power() {
    let b = Binding { monomial: Monomial::var(Var::X), q_power: Ratio::new(1, 4) };
    assert!(matches!(r("x + 1").substitute(&[(Var::X, b.clone())]), Err(Error::Exponent(_))));
    // x^2 -> x^2 q^(1/2) = x^2 s is fine
    assert_eq!(r("x^2").substitute(&[(Var::X, b)]).unwrap(), r("x^2*s"));
}

#[test]
fn clear_single_denominator() {
    let f = clear_denominators(&[r("(x-q^2)/(x*q^2-1)")], Var::X).unwrap();
    assert_eq!(f, p("x*q^2 - 1"));
    assert_eq!(clear_denominators(&[RatExpr::one()], Var::X).unwrap(), LaurentPoly::one());
}

#[test]
fn clear_coprime_denominators() {
    let entries = [r("(x-q^2)/(x*q^2-1)"), r("(x-q^-1)/(x*q^-1-1)")];
    let f = clear_denominators(&entries, Var::X).unwrap();
    // (x q^2 - 1)(x q^-1 - 1) = q^-1 (x q^2 - 1)(x - q); compare up to the unit q^-1
    let expect = p("x*q^2 - 1").mul(&p("x - q"));
    assert_eq!(f, expect);
    // the two factors are coprime in x over Q(s)
    assert!(content_in(&gcd(&p("x*q^2 - 1"), &p("x - q")), Var::X).is_one());
    for e in &entries {
        let cleared = e.mul(&RatExpr::from_poly(f.clone()));
        assert!(!cleared.den().contains_var(Var::X));
    }
}

#[test]
fn clear_rejects_foreign_variables() {
    assert!(matches!(clear_denominators(&[r("1/(x - z1)")], Var::X), Err(Error::Domain(_))));
    assert!(clear_denominators(&[], Var::X).is_err());
}

#[test]
fn division_by_zero_is_domain_error() {
    assert!(matches!(r("x").div(&RatExpr::zero()), Err(Error::Domain(_))));
    assert!(RatExpr::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
}

fn small_poly() -> impl Strategy<Value = LaurentPoly> {
    let vars = [Var::S, Var::X, Var::z(1), Var::u(1)];
    prop::collection::vec((-3i64..=3, prop::array::uniform4(-1i32..=2)), 1..4).prop_map(move |ts| {
        LaurentPoly::from_terms(ts.into_iter().map(|(c, es)| {
            let mut m = Monomial::one();
            for (v, e) in vars.iter().zip(es) {
                m.set_exp(*v, e);
            }
            (m, c.into())
        }))
    })
}

fn small_rat() -> impl Strategy<Value = RatExpr> {
    (small_poly(), small_poly())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RatExpr::new(n, d).unwrap())
}

fn sample_point() -> Vec<(Var, Ratio<i128>)> {
    vec![
        (Var::S, Ratio::new(5, 3)),
        (Var::X, Ratio::new(-7, 2)),
        (Var::z(1), Ratio::new(11, 5)),
        (Var::u(1), Ratio::new(13, 4)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn product_is_canonical(a in small_rat(), b in small_rat()) {
        let full = RatExpr::new(a.num().mul(b.num()), a.den().mul(b.den())).unwrap();
        prop_assert_eq!(a.mul(&b), full);
    }

    #[test]
    fn normalization_idempotent(a in small_rat()) {
        let again = RatExpr::new(a.num().clone(), a.den().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        prop_assert!(a.den().is_ordinary());
    }

    #[test]
    fn canonical_equality_matches_cross_multiplication(n1 in small_poly(), d1 in small_poly(), k in small_poly()) {
        prop_assume!(!d1.is_zero() && !k.is_zero());
        let a = RatExpr::new(n1.clone(), d1.clone()).unwrap();
        let b = RatExpr::new(n1.mul(&k), d1.mul(&k)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.num().mul(b.den()), b.num().mul(a.den()));
    }

    #[test]
    fn arithmetic_agrees_with_evaluation(a in small_rat(), b in small_rat()) {
        let pt = sample_point();
        if let (Some(va), Some(vb)) = (a.eval_i128(&pt), b.eval_i128(&pt)) {
            prop_assert_eq!(a.add(&b).eval_i128(&pt), Some(va + vb));
            prop_assert_eq!(a.mul(&b).eval_i128(&pt), Some(va * vb));
        }
    }

    #[test]
    fn cleared_entries_have_var_free_denominators(n in small_poly(), d1 in 1i64..4, d2 in -3i64..3) {
        let den = p("x*s^2").scale(&d1.into()).add(&LaurentPoly::constant(d2)).mul(&p("x - s"));
        let e = RatExpr::new(n, den).unwrap();
        let f = clear_denominators(&[e.clone(), r("1/(x+1)")], Var::X).unwrap();
        prop_assert!(!e.mul(&RatExpr::from_poly(f)).den().contains_var(Var::X));
    }
}
