//! Reading elements from text, in the same syntax they are printed in:
//! `(q^2) * Phi1(z1)*Phi2(z2*q^(c1/2)) @ L12(z3) + delta(z1/z2*q^(-c1))*L11(z2)`.

use super::element::{Element, Monom};
use super::gen::{ArgShift, DeltaFactor, GenKind, GenOcc, LinForm};
use crate::error::{Error, Result};
use crate::parse::{parse, Expr};
use crate::symfield::{Monomial, RatExpr, Var};

fn is_field(e: &Expr) -> bool {
    match e {
        Expr::Int(_) | Expr::Ident(_) => true,
        Expr::Call(..) | Expr::Index(..) | Expr::Tensor(..) => false,
        Expr::Neg(a) => is_field(a),
        Expr::Pow(a, _) => is_field(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => is_field(a) && is_field(b),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, col: 0, msg: msg.into() }
}

/// A monomial `v^e * q^(...)`: the charge part as a linear form.
fn charge_form(m: &Monomial) -> Result<LinForm> {
    let mut f = LinForm::ZERO;
    f.0[0] = m.exp(Var::S);
    for t in 1..=3 {
        f.0[t] = m.exp(Var::u(t));
    }
    for v in m.vars() {
        if v != Var::S && v.leg().is_none() && v.spectral().is_none() && v != Var::W {
            return Err(bad(format!("variable {v} cannot appear in an argument")));
        }
    }
    Ok(f)
}

fn spectral_part(m: &Monomial) -> Vec<(Var, i32)> {
    m.vars().filter(|v| v.spectral().is_some() || *v == Var::W).map(|v| (v, m.exp(v))).collect()
}

fn monomial_arg(arg: &Expr) -> Result<Monomial> {
    let r = arg.to_rat()?;
    if !r.den().is_one() || !r.num().is_term() {
        return Err(bad(format!("argument {r} is not a monomial")));
    }
    let (m, c) = r.num().leading().expect("nonzero term");
    if *c != 1.into() {
        return Err(bad(format!("argument {r} has a numeric factor")));
    }
    Ok(*m)
}

/// Splits `Phi1`, `L12`, `Lstarinv21` into kind and zero-based indices.
fn generator(name: &str) -> Option<(GenKind, usize, usize)> {
    let split = name.find(|c: char| c.is_ascii_digit())?;
    let kind = GenKind::from_name(&name[..split])?;
    let digits: Vec<usize> = name[split..].chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?;
    match (kind.is_matrix(), digits.as_slice()) {
        (false, [i]) if *i >= 1 => Some((kind, i - 1, 0)),
        (true, [i, j]) if *i >= 1 && *j >= 1 => Some((kind, i - 1, j - 1)),
        _ => None,
    }
}

fn as_scalar(e: &Element) -> Option<RatExpr> {
    if e.is_zero() {
        return Some(RatExpr::zero());
    }
    let mut it = e.terms();
    let (m, c) = it.next()?;
    (it.next().is_none() && m.deltas.is_empty() && m.is_empty() && !m.flagged).then(|| c.clone())
}

fn times(a: &Element, b: &Element) -> Result<Element> {
    if let Some(c) = as_scalar(a) {
        return Ok(b.scale(&c));
    }
    if let Some(c) = as_scalar(b) {
        return Ok(a.scale(&c));
    }
    a.multiply(b)
}

fn plus(a: &Element, b: &Element) -> Result<Element> {
    // a scalar summand lives in as many legs as the other summand
    let lift = |x: &Element, n: usize| as_scalar(x).filter(|_| x.nlegs() != n).map(|c| Element::scalar(n, c));
    match (lift(a, b.nlegs()), lift(b, a.nlegs())) {
        (Some(a2), _) if a.nlegs() == 1 => a2.add(b),
        (_, Some(b2)) if b.nlegs() == 1 => a.add(&b2),
        _ => a.add(b),
    }
}

fn eval(e: &Expr) -> Result<Element> {
    if is_field(e) {
        return Ok(Element::scalar(1, e.to_rat()?));
    }
    Ok(match e {
        Expr::Neg(a) => eval(a)?.neg(),
        Expr::Add(a, b) => plus(&eval(a)?, &eval(b)?)?,
        Expr::Sub(a, b) => plus(&eval(a)?, &eval(b)?.neg())?,
        Expr::Mul(a, b) => times(&eval(a)?, &eval(b)?)?,
        Expr::Div(a, b) if is_field(b) => eval(a)?.scale(&b.to_rat()?.inv()?),
        Expr::Pow(a, k) => {
            let k = k.to_ratio()?;
            if !k.is_integer() || k.to_integer() < 1 {
                return Err(bad("only positive integer powers of algebra elements are allowed"));
            }
            let base = eval(a)?;
            let mut out = base.clone();
            for _ in 1..k.to_integer() {
                out = times(&out, &base)?;
            }
            out
        }
        Expr::Tensor(a, b) => eval(a)?.tensor(&eval(b)?),
        Expr::Call(name, arg) if name == "delta" => {
            let m = monomial_arg(arg)?;
            let (a, b) = match spectral_part(&m).as_slice() {
                [(a, 1), (b, -1)] => (*a, *b),
                [(b, -1), (a, 1)] => (*a, *b),
                _ => return Err(bad(format!("delta argument must be z_a/z_b times a power of q, got {m}"))),
            };
            let d = DeltaFactor::new(a, b, charge_form(&m)?);
            Element::from_monom(RatExpr::one(), Monom { deltas: vec![d], legs: vec![vec![]], flagged: false })
        }
        Expr::Call(name, arg) => {
            let (kind, i, j) = generator(name).ok_or_else(|| bad(format!("unknown generator '{name}'")))?;
            let m = monomial_arg(arg)?;
            let var = match spectral_part(&m).as_slice() {
                [(v, 1)] => *v,
                _ => return Err(bad(format!("generator argument must be one spectral variable times a power of q, got {m}"))),
            };
            let arg = ArgShift::plain(var).shifted(&charge_form(&m)?);
            Element::gen(GenOcc::matrix(kind, i, j, arg))
        }
        _ => return Err(bad("unsupported element expression")),
    })
}

/// Parses an element; without `@` it lives in one tensor leg.
pub fn parse_element(text: &str) -> Result<Element> {
    eval(&parse(text)?)
}
