//! Multivariate gcd over the integers.
//!
//! All routines here take ordinary polynomials (no negative exponents). The
//! gcd is computed recursively: content extraction in the highest variable
//! present, then a primitive pseudo-remainder sequence on the primitive parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::monomial::Monomial;
use super::poly::LaurentPoly;
use super::var::Var;

/// Makes the leading coefficient positive.
pub fn normalize_sign(p: &LaurentPoly) -> LaurentPoly {
    if p.leading_coeff().is_negative() {
        p.neg()
    } else {
        p.clone()
    }
}

/// Exact multivariate division of ordinary polynomials, `None` if `b` does
/// not divide `a`.
pub fn exact_div(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    assert!(!b.is_zero(), "division by zero polynomial");
    if let Some(c) = b.as_constant() {
        if a.terms().all(|(_, x)| (x % &c).is_zero()) {
            return Some(a.div_exact_int(&c));
        }
        return None;
    }
    let (lm_b, lc_b) = b.leading().map(|(m, c)| (*m, c.clone())).unwrap();
    let mut rem = a.clone();
    let mut quot = LaurentPoly::zero();
    while let Some((lm_r, lc_r)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
        if !lm_r.divisible_by(&lm_b) || !(&lc_r % &lc_b).is_zero() {
            return None;
        }
        let t = LaurentPoly::term(&lc_r / &lc_b, lm_r.div(&lm_b));
        rem = rem.sub(&t.mul(b));
        quot = quot.add(&t);
    }
    Some(quot)
}

/// Greatest common divisor with positive leading coefficient.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    debug_assert!(a.is_ordinary() && b.is_ordinary());
    if a.is_zero() {
        return normalize_sign(b);
    }
    if b.is_zero() {
        return normalize_sign(a);
    }
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let m = ma.meet(&mb);
    let a1 = a.mul_monomial(&ma.inv());
    let b1 = b.mul_monomial(&mb.inv());
    let g = heuristic_gcd(&a1, &b1).unwrap_or_else(|| gcd_no_monomial(&a1, &b1));
    normalize_sign(&g).mul_monomial(&m)
}

pub fn lcm(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let g = gcd(a, b);
    normalize_sign(&exact_div(&a.mul(b), &g).expect("gcd divides product"))
}

fn int_gcd_poly(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::constant(a.integer_content().gcd(&b.integer_content()))
}

fn gcd_no_monomial(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return int_gcd_poly(a, b);
    }
    if a == b || *a == b.neg() {
        return normalize_sign(a);
    }
    // a single term without monomial content is an integer
    if a.is_term() || b.is_term() {
        return int_gcd_poly(a, b);
    }
    let va = a.vars();
    let vb = b.vars();
    let v = *va.iter().chain(vb.iter()).max().unwrap();
    let in_a = va.contains(&v);
    let in_b = vb.contains(&v);
    match (in_a, in_b) {
        (true, false) => gcd(&content_in(a, v), b),
        (false, true) => gcd(a, &content_in(b, v)),
        _ => {
            let ca = content_in(a, v);
            let cb = content_in(b, v);
            let pa = exact_div(a, &ca).expect("content divides");
            let pb = exact_div(b, &cb).expect("content divides");
            let gc = gcd(&ca, &cb);
            let gp = primitive_prs(&pa, &pb, v);
            normalize_sign(&gc.mul(&gp))
        }
    }
}

const HEU_TRIES: usize = 6;

/// Heuristic gcd by evaluation at a large integer and symmetric-residue
/// interpolation. Every candidate is verified by exact division, so a
/// returned value is the gcd; `None` means the caller must fall back.
fn heuristic_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    if a.is_zero() || b.is_zero() {
        return Some(normalize_sign(if a.is_zero() { b } else { a }));
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Some(int_gcd_poly(a, b));
    }
    let content = a.integer_content().gcd(&b.integer_content());
    let a = a.div_exact_int(&content);
    let b = b.div_exact_int(&content);
    let v = *a.vars().iter().chain(b.vars().iter()).max().unwrap();
    let norm = |p: &LaurentPoly| p.terms().map(|(_, c)| c.abs()).max().unwrap();
    let (na, nb) = (norm(&a), norm(&b));
    let bound: BigInt = 2 * (&na).min(&nb) + 29u32;
    let lead = (&na / a.leading_coeff().abs()).min(&nb / b.leading_coeff().abs());
    let mut xi = bound.clone().min(99u32 * bound.sqrt()).max(2 * lead + 4u32);
    for _ in 0..HEU_TRIES {
        let ea = eval_at(&a, v, &xi);
        let eb = eval_at(&b, v, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(h) = heuristic_gcd(&ea, &eb) {
                let h = interpolate(h, v, &xi);
                if !h.is_zero() {
                    let h = normalize_sign(&h.div_exact_int(&h.integer_content()));
                    if exact_div(&a, &h).is_some() && exact_div(&b, &h).is_some() {
                        return Some(h.scale(&content));
                    }
                }
            }
        }
        xi = &xi * 73794u32 * xi.sqrt().sqrt() / 27011u32;
    }
    None
}

fn eval_at(p: &LaurentPoly, v: Var, xi: &BigInt) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(m, c)| {
        let mut m2 = *m;
        m2.set_exp(v, 0);
        (m2, c * xi.pow(m.exp(v) as u32))
    }))
}

fn interpolate(mut h: LaurentPoly, v: Var, xi: &BigInt) -> LaurentPoly {
    let half: BigInt = xi / 2u32;
    let mut out = LaurentPoly::zero();
    let mut k = 0;
    while !h.is_zero() {
        let g = LaurentPoly::from_terms(h.terms().map(|(m, c)| {
            let mut r = c.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            (*m, r)
        }));
        out = out.add(&g.mul_monomial(&Monomial::var_pow(v, k)));
        h = h.sub(&g).div_exact_int(xi);
        k += 1;
    }
    out
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &LaurentPoly, v: Var) -> LaurentPoly {
    let coeffs = p.collect_in(v);
    let mut g = LaurentPoly::zero();
    for c in coeffs.values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part of `p` with respect to `v`.
pub fn primitive_part_in(p: &LaurentPoly, v: Var) -> LaurentPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    normalize_sign(&exact_div(p, &c).expect("content divides"))
}

fn dense(p: &LaurentPoly, v: Var) -> Vec<LaurentPoly> {
    let coeffs = p.collect_in(v);
    let deg = coeffs.keys().next_back().copied().unwrap_or(0).max(0) as usize;
    let mut out = vec![LaurentPoly::zero(); deg + 1];
    for (k, c) in coeffs {
        out[k as usize] = c;
    }
    out
}

fn from_dense(d: &[LaurentPoly], v: Var) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (k, c) in d.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&c.mul_monomial(&Monomial::var_pow(v, k as i32)));
        }
    }
    out
}

fn trim(d: &mut Vec<LaurentPoly>) {
    while d.len() > 1 && d.last().map(|c| c.is_zero()).unwrap_or(false) {
        d.pop();
    }
}

fn pseudo_rem(a: &[LaurentPoly], b: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let mut r: Vec<LaurentPoly> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lcb = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(&lcb);
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bc.mul(&lcr));
        }
        trim(&mut r);
        if r.len() - 1 == dr && !r[dr].is_zero() {
            unreachable!("leading term must cancel");
        }
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    r
}

fn primitive_prs(a: &LaurentPoly, b: &LaurentPoly, v: Var) -> LaurentPoly {
    let mut da = dense(a, v);
    let mut db = dense(b, v);
    if da.len() < db.len() {
        std::mem::swap(&mut da, &mut db);
    }
    loop {
        let r = pseudo_rem(&da, &db);
        if r.iter().all(|c| c.is_zero()) {
            return normalize_sign(&from_dense(&db, v));
        }
        if r.len() == 1 {
            return LaurentPoly::one();
        }
        let rp = primitive_part_in(&from_dense(&r, v), v);
        da = db;
        db = dense(&rp, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> LaurentPoly {
        LaurentPoly::var(Var::from_name(name).unwrap())
    }
    fn c(k: i64) -> LaurentPoly {
        LaurentPoly::constant(k)
    }

    #[test]
    fn gcd_of_products() {
        let x = v("x");
        let s = v("s");
        let z = v("z1");
        let f = x.mul(&s).sub(&c(1)); // xs - 1
        let g = x.add(&z.mul(&s)); // x + z s
        let h = s.pow(2).add(&c(3));
        let a = f.mul(&g).mul(&c(6));
        let b = f.mul(&h).mul(&c(4));
        assert_eq!(gcd(&a, &b), f.mul(&c(2)));
        assert_eq!(gcd(&g, &h), c(1));
    }

    #[test]
    fn gcd_handles_monomial_content() {
        let x = v("x");
        let s = v("s");
        let a = x.pow(2).mul(&s).mul(&x.sub(&s));
        let b = x.mul(&s.pow(3)).mul(&x.sub(&s)).mul(&x.add(&s));
        assert_eq!(gcd(&a, &b), x.mul(&s).mul(&x.sub(&s)));
    }

    #[test]
    fn exact_division() {
        let x = v("x");
        let s = v("s");
        let f = x.sub(&s).mul(&x.add(&c(2)));
        assert_eq!(exact_div(&f, &x.sub(&s)), Some(x.add(&c(2))));
        assert_eq!(exact_div(&f, &x.sub(&c(2))), None);
    }

    #[test]
    fn lcm_of_coprime() {
        let x = v("x");
        let s = v("s");
        let a = x.mul(&s.pow(4)).sub(&c(1));
        let b = x.sub(&s.pow(2));
        assert_eq!(lcm(&a, &b), normalize_sign(&a.mul(&b)));
    }

    fn poly_strategy() -> impl proptest::strategy::Strategy<Value = LaurentPoly> {
        use proptest::prelude::*;
        let vars = [Var::S, Var::X, Var::z(1)];
        prop::collection::vec((-4i64..=4, prop::array::uniform3(0i32..=2)), 1..4).prop_map(move |ts| {
            LaurentPoly::from_terms(ts.into_iter().map(|(c, es)| {
                let mut m = Monomial::one();
                for (v, e) in vars.iter().zip(es) {
                    m.set_exp(*v, e);
                }
                (m, c.into())
            }))
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::test_runner::Config::with_cases(64))]

        #[test]
        fn common_factor_divides_gcd(a in poly_strategy(), b in poly_strategy(), f in poly_strategy()) {
            proptest::prop_assume!(!a.is_zero() && !b.is_zero() && !f.is_zero());
            let (af, bf) = (a.mul(&f), b.mul(&f));
            let g = gcd(&af, &bf);
            proptest::prop_assert!(exact_div(&af, &g).is_some());
            proptest::prop_assert!(exact_div(&bf, &g).is_some());
            proptest::prop_assert!(exact_div(&g, &f).is_some());
            // the fallback sequence agrees with the fast path
            let ma = af.min_exponents();
            let mb = bf.min_exponents();
            let slow = gcd_no_monomial(&af.mul_monomial(&ma.inv()), &bf.mul_monomial(&mb.inv()));
            proptest::prop_assert_eq!(normalize_sign(&slow).mul_monomial(&ma.meet(&mb)), g);
        }
    }
}
