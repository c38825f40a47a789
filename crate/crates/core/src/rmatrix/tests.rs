use super::instances::{broken_nonunitary, example1, example2, identity, ratio_function};
use super::*;
use crate::parse::parse_rat;

fn r(t: &str) -> RatExpr {
    parse_rat(t).unwrap()
}

/// Trigonometric six-vertex matrix, a non-diagonal solution used as a
/// discriminating fixture for the two argument conventions.
fn six_vertex() -> RMatrix {
    let a = r("x*q - q^-1");
    let b = r("x - 1");
    let c = r("q - q^-1");
    let cx = r("x*(q - q^-1)");
    RMatrix::from_fn(2, Var::X, |i, j, k, l| match (i, j, k, l) {
        (0, 0, 0, 0) | (1, 1, 1, 1) => a.clone(),
        (0, 1, 0, 1) | (1, 0, 1, 0) => b.clone(),
        (0, 1, 1, 0) => c.clone(),
        (1, 0, 0, 1) => cx.clone(),
        _ => RatExpr::zero(),
    })
    .unwrap()
}

#[test]
fn entries_must_depend_on_spectral_variable_only() {
    assert!(matches!(RMatrix::new(1, Var::X, vec![r("x + z1")]), Err(Error::Domain(_))));
    assert!(matches!(RMatrix::new(2, Var::X, vec![r("1")]), Err(Error::Shape(_))));
}

#[test]
fn ybe_identity_is_zero() {
    for conv in [YbeConvention::Product, YbeConvention::Quotient] {
        assert!(identity(2).ybe_residual(conv).unwrap().is_zero());
    }
}

#[test]
fn ybe_diagonal_matches_entrywise_products() {
    // For diagonal R every factor is diagonal, so both sides are the diagonal
    // matrix with entries r_ab(z) r_ac(zw) r_bc(w).
    let rm = example2(2);
    assert!(rm.ybe_residual(YbeConvention::Product).unwrap().is_zero());
    assert!(rm.ybe_residual(YbeConvention::Quotient).unwrap().is_zero());
    let rz = |a: usize, b: usize, arg: &str| {
        rm.get(a, b, a, b).substitute_monomials(&[(Var::X, monomial_of(arg))]).unwrap()
    };
    let lhs = rm.embed3(&rm.matrix_at(&monomial_of("z1")).unwrap(), 0, 1);
    // (a,b,c) = (0,1,0): diagonal index 0*4 + 1*2 + 0 = 2
    let expect = rz(0, 1, "z1");
    assert_eq!(lhs.get(2, 2), &expect);
    let full = lhs
        .mul(&rm.embed3(&rm.matrix_at(&monomial_of("z1*w")).unwrap(), 0, 2))
        .mul(&rm.embed3(&rm.matrix_at(&monomial_of("w")).unwrap(), 1, 2));
    assert_eq!(full.get(2, 2), &rz(0, 1, "z1").mul(&rz(0, 0, "z1*w")).mul(&rz(1, 0, "w")));
}

fn monomial_of(t: &str) -> Monomial {
    let e = r(t);
    assert!(e.den().is_one() && e.num().is_term());
    *e.num().leading().unwrap().0
}

#[test]
fn perturbed_diagonal_passes_ybe_but_fails_unitarity() {
    let base = example2(2);
    let perturbed = RMatrix::from_fn(2, Var::X, |i, j, k, l| {
        if (i, j, k, l) == (0, 0, 0, 0) {
            r("(x - q^3)/(x*q^2 - 1)")
        } else {
            base.get(i, j, k, l).clone()
        }
    })
    .unwrap();
    assert!(perturbed.ybe_residual(YbeConvention::Product).unwrap().is_zero());
    assert!(!perturbed.unitarity_residual().unwrap().is_zero());
}

#[test]
fn six_vertex_discriminates_argument_conventions() {
    let rm = six_vertex();
    assert!(rm.ybe_residual(YbeConvention::Product).unwrap().is_zero());
    assert!(!rm.ybe_residual(YbeConvention::Quotient).unwrap().is_zero());
}

#[test]
fn unitarity_of_scalar_examples() {
    assert!(example1().unitarity_residual().unwrap().is_zero());
    assert!(identity(2).unitarity_residual().unwrap().is_zero());
    assert!(example2(3).unitarity_residual().unwrap().is_zero());
    // (x + 1)(1/x + 1) - 1 = x + 1 + 1/x
    let res = broken_nonunitary().unitarity_residual().unwrap();
    assert_eq!(res.get(0, 0), &r("x + 1 + x^-1"));
}

#[test]
fn unitarity_rejects_singular_matrix() {
    let z = RMatrix::from_fn(1, Var::X, |_, _, _, _| RatExpr::zero()).unwrap();
    assert!(matches!(z.unitarity_residual(), Err(Error::Singular(_))));
}

#[test]
fn unitarity_left_and_right_inverse_agree() {
    for rm in [example1(), example2(2), example2(3), identity(2)] {
        assert!(rm.unitarity_residual().unwrap().is_zero());
        let x = Monomial::var(Var::X);
        let flipped = rm
            .matrix_at(&x.inv())
            .unwrap()
            .mul(&rm.flip().matrix_at(&x).unwrap())
            .sub(&Mat::identity(rm.n() * rm.n()));
        assert!(flipped.is_zero());
    }
}

#[test]
fn clear_poles_examples() {
    let c = example1().clear_poles().unwrap();
    assert_eq!(c.f, r("x*q^2 - 1").num().clone());
    assert_eq!(c.rprime[0], r("x - q^2"));
    let c = identity(2).clear_poles().unwrap();
    assert!(c.f.is_one());
    assert_eq!(c.rprime, identity(2).entries());
    let c = example2(2).clear_poles().unwrap();
    // lcm oracle: the two denominators are coprime, so f is their product up
    // to the unit q^-1
    let expect = r("x*q^2 - 1").mul(&r("x - q"));
    assert_eq!(RatExpr::from_poly(c.f.clone()), expect);
    for e in &c.rprime {
        assert!(!e.den().contains_var(Var::X));
    }
}

#[test]
fn flip_of_symmetric_diagonal_is_itself() {
    assert_eq!(example2(3).flip(), example2(3));
    let sv = six_vertex();
    assert_eq!(sv.flip().get(0, 1, 1, 0), sv.get(1, 0, 0, 1));
}

#[test]
fn display_lists_nonzero_entries() {
    let text = example1().to_string();
    assert!(text.contains("R[1,1;1,1] = "));
    assert_eq!(ratio_function(2), example1().get(0, 0, 0, 0).clone());
}
