use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::gcd::{content_in, exact_div, gcd, lcm, normalize_sign};
use super::monomial::Monomial;
use super::poly::LaurentPoly;
use super::var::Var;
use crate::error::{Error, Result};

/// An exact element of the coefficient field, kept in canonical form.
///
/// The denominator is an ordinary polynomial not divisible by any variable,
/// coprime to the numerator (integer content included), with a positive
/// leading coefficient. Equal values therefore have equal representations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RatExpr {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Image of a variable under [`RatExpr::substitute`]: a monomial times a
/// rational power of `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub monomial: Monomial,
    pub q_power: Ratio<i64>,
}

impl Binding {
    pub fn monomial(m: Monomial) -> Self {
        Binding { monomial: m, q_power: Ratio::from_integer(0) }
    }
}

/// Divides `p` and the ordinary polynomial `q` by their gcd, up to monomial
/// factors.
fn cancel(p: &LaurentPoly, q: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if q.is_one() {
        return (p.clone(), q.clone());
    }
    if q.as_constant().is_some() || p.is_term() || q.is_term() {
        let g = p.integer_content().gcd(&q.integer_content());
        return (p.div_exact_int(&g), q.div_exact_int(&g));
    }
    let mp = p.min_exponents();
    let p1 = p.mul_monomial(&mp.inv());
    let g = gcd(&p1, q);
    if g.is_one() {
        return (p.clone(), q.clone());
    }
    (
        exact_div(&p1, &g).expect("gcd divides").mul_monomial(&mp),
        exact_div(q, &g).expect("gcd divides"),
    )
}

impl RatExpr {
    pub fn zero() -> Self {
        RatExpr { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(k: impl Into<BigInt>) -> Self {
        RatExpr { num: LaurentPoly::constant(k), den: LaurentPoly::one() }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        RatExpr { num: LaurentPoly::monomial(m), den: LaurentPoly::one() }
    }

    /// `q^k` for integer `k`.
    pub fn q_pow(k: i32) -> Self {
        Self::monomial(Monomial::var_pow(Var::S, 2 * k))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatExpr { num: p, den: LaurentPoly::one() }
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self::normalize(num, den))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Integer value, if the expression is a constant integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.as_constant().is_some() && self.den.as_constant().is_some()
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mn = num.min_exponents();
        let md = den.min_exponents();
        let n1 = num.mul_monomial(&mn.inv());
        let d1 = den.mul_monomial(&md.inv());
        let shift = mn.div(&md);
        let (mut n2, mut d2) = if let Some(dc) = d1.as_constant() {
            let g = n1.integer_content().gcd(&dc);
            (n1.div_exact_int(&g), LaurentPoly::constant(dc / g))
        } else if n1.as_constant().is_some() || n1.is_term() {
            let g = n1.integer_content().gcd(&d1.integer_content());
            (n1.div_exact_int(&g), d1.div_exact_int(&g))
        } else if n1 == d1 {
            (LaurentPoly::one(), LaurentPoly::one())
        } else {
            let g = gcd(&n1, &d1);
            if g.is_one() {
                (n1, d1)
            } else {
                (
                    exact_div(&n1, &g).expect("gcd divides numerator"),
                    exact_div(&d1, &g).expect("gcd divides denominator"),
                )
            }
        };
        if d2.leading_coeff().is_negative() {
            n2 = n2.neg();
            d2 = d2.neg();
        }
        RatExpr { num: n2.mul_monomial(&shift), den: d2 }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalize(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        RatExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() && (self.num.is_term() || other.num.is_term()) {
            return RatExpr { num: self.num.mul(&other.num), den: LaurentPoly::one() };
        }
        // both operands are reduced, so cross-cancelling suffices
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        let (mut num, mut den) = (a.mul(&c), b.mul(&d));
        let md = den.min_exponents();
        num = num.mul_monomial(&md.inv());
        den = den.mul_monomial(&md.inv());
        if den.leading_coeff().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatExpr { num, den }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.mul(&Self::int(k))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        RatExpr { num: self.num.mul_monomial(m), den: self.den.clone() }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Simultaneous substitution of variables by monomials times rational
    /// powers of `q`.
    pub fn substitute(&self, bindings: &[(Var, Binding)]) -> Result<Self> {
        let num = subst_poly(&self.num, bindings)?;
        let den = subst_poly(&self.den, bindings)?;
        Self::new(num, den)
    }

    /// Monomial-only substitution, which cannot fail except on a vanishing
    /// denominator.
    pub fn substitute_monomials(&self, bindings: &[(Var, Monomial)]) -> Result<Self> {
        let f = |m: &Monomial| map_monomial(m, bindings);
        let num = self.num.map_monomials(f);
        let den = self.den.map_monomials(f);
        if den.is_zero() {
            return Err(Error::Singular("denominator vanishes under substitution".into()));
        }
        Ok(Self::normalize(num, den))
    }

    /// Evaluation at a rational point; test and sanity-check helper.
    pub fn eval_i128(&self, point: &[(Var, Ratio<i128>)]) -> Option<Ratio<i128>> {
        let d = self.den.eval_i128(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_i128(point) / d)
    }
}

pub(crate) fn map_monomial(m: &Monomial, bindings: &[(Var, Monomial)]) -> Monomial {
    let mut out = *m;
    for (v, img) in bindings {
        let e = m.exp(*v);
        if e != 0 {
            out.set_exp(*v, out.exp(*v) - e);
            out = out.mul(&img.pow(e));
        }
    }
    out
}

fn subst_poly(p: &LaurentPoly, bindings: &[(Var, Binding)]) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero();
    for (m, c) in p.terms() {
        let mut img = *m;
        let mut q_half = Ratio::from_integer(0i64);
        for (v, b) in bindings {
            let e = m.exp(*v);
            if e == 0 {
                continue;
            }
            img.set_exp(*v, img.exp(*v) - e);
            img = img.mul(&b.monomial.pow(e));
            q_half += b.q_power * Ratio::from_integer(2 * e as i64);
        }
        if !q_half.is_integer() {
            return Err(Error::Exponent(format!(
                "substitution leaves s^({q_half}) in a term of {p}"
            )));
        }
        let extra = Monomial::var_pow(Var::S, q_half.to_integer() as i32);
        out.add_term(img.mul(&extra), c.clone());
    }
    Ok(out)
}

/// Least common multiple of the `var`-dependent parts of the reduced
/// denominators of `entries`, normalized to a positive leading coefficient.
/// Denominators may involve only `var` and `s`.
pub fn clear_denominators(entries: &[RatExpr], var: Var) -> Result<LaurentPoly> {
    if entries.is_empty() {
        return Err(Error::Domain("no entries to clear".into()));
    }
    let mut acc = LaurentPoly::one();
    for e in entries {
        for v in e.den.vars() {
            if v != var && v != Var::S {
                return Err(Error::Domain(format!(
                    "denominator {} involves {v}, expected only {var} and s",
                    e.den
                )));
            }
        }
        if !e.den.contains_var(var) {
            continue;
        }
        let c = content_in(&e.den, var);
        let pp = exact_div(&e.den, &c).expect("content divides");
        acc = lcm(&acc, &pp);
    }
    Ok(normalize_sign(&acc))
}

impl From<i64> for RatExpr {
    fn from(k: i64) -> Self {
        RatExpr::int(k)
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num_s = self.num.to_string();
        let wrap_num = self.num.len() > 1;
        if self.den.is_one() {
            return f.write_str(&num_s);
        }
        let den_s = self.den.to_string();
        let num_s = if wrap_num { format!("({num_s})") } else { num_s };
        let den_s = if den_s.contains(['*', ' ']) { format!("({den_s})") } else { den_s };
        write!(f, "{num_s}/{den_s}")
    }
}
