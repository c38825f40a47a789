//! Expression grammar shared by spec files, element input and reference
//! relation files.
//!
//! ```text
//! expr    := tensor (('+' | '-') tensor)*
//! tensor  := term ('@' term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := INT | IDENT | IDENT '(' expr ')' | IDENT '[' expr ']' | '(' expr ')'
//! ```
//!
//! Identifiers `q`, `s`, `x`, `w`, `z1`..`z9` and `u1`..`u3` denote field
//! variables, with `s = q^(1/2)` and `u_t = q^(c_t/2)`; exponents of `q`
//! may be linear in the central charges `c1`..`c3`. Calls and brackets are
//! used for algebra generators and mode symbols, `@` separates tensor legs.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::symfield::{Monomial, RatExpr, Var};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident(String),
    Call(String, Box<Expr>),
    Index(String, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, line0: usize, col0: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (l, cc) = (line, col);
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Int(s.parse().unwrap()), line: l, col: cc });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Ident(s), line: l, col: cc });
        } else if "+-*/^()[]@".contains(c) {
            out.push(Spanned { tok: Tok::Sym(c), line: l, col: cc });
            i += 1;
            col += 1;
        } else {
            return Err(Error::Parse { line: l, col: cc, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.end);
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.tensor()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.tensor()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.tensor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn tensor(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while self.eat('@') {
            lhs = Expr::Tensor(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat('^') {
            let e = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Call(name, Box::new(arg)))
                } else if self.eat('[') {
                    let arg = self.expr()?;
                    self.expect(']')?;
                    Ok(Expr::Index(name, Box::new(arg)))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.err("expected a number, identifier or '('"),
        }
    }
}

/// Parses `text`; positions in errors are reported relative to
/// (`line`, `col`) of the first character.
pub fn parse_at(text: &str, line: usize, col: usize) -> Result<Expr> {
    let toks = lex(text, line, col)?;
    let end = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((line, col));
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

pub fn parse(text: &str) -> Result<Expr> {
    parse_at(text, 1, 1)
}

fn sem(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, col: 0, msg: msg.into() }
}

impl Expr {
    /// Evaluates to an exact rational constant; identifiers are rejected
    /// unless listed in `symbols` (then treated via the callback).
    pub fn to_ratio(&self) -> Result<Ratio<i64>> {
        Ok(match self {
            Expr::Int(n) => Ratio::from_integer(n.to_i64().ok_or_else(|| sem("integer too large"))?),
            Expr::Neg(a) => -a.to_ratio()?,
            Expr::Add(a, b) => a.to_ratio()? + b.to_ratio()?,
            Expr::Sub(a, b) => a.to_ratio()? - b.to_ratio()?,
            Expr::Mul(a, b) => a.to_ratio()? * b.to_ratio()?,
            Expr::Div(a, b) => {
                let d = b.to_ratio()?;
                if d.is_zero() {
                    return Err(sem("division by zero in exponent"));
                }
                a.to_ratio()? / d
            }
            _ => return Err(sem("expected a rational constant")),
        })
    }

    /// Evaluates in the coefficient field.
    pub fn to_rat(&self) -> Result<RatExpr> {
        Ok(match self {
            Expr::Int(n) => RatExpr::int(n.clone()),
            Expr::Ident(name) => ident_rat(name)?,
            Expr::Neg(a) => a.to_rat()?.neg(),
            Expr::Add(a, b) => a.to_rat()?.add(&b.to_rat()?),
            Expr::Sub(a, b) => a.to_rat()?.sub(&b.to_rat()?),
            Expr::Mul(a, b) => a.to_rat()?.mul(&b.to_rat()?),
            Expr::Div(a, b) => a.to_rat()?.div(&b.to_rat()?)?,
            Expr::Pow(a, e) => {
                if matches!(a.as_ref(), Expr::Ident(n) if n == "q") {
                    return Ok(RatExpr::monomial(q_power(e)?));
                }
                let k = e.to_ratio()?;
                if !k.is_integer() {
                    return Err(Error::Exponent(format!("non-integer exponent {k}")));
                }
                a.to_rat()?.pow(k.to_integer() as i32)?
            }
            Expr::Call(name, _) | Expr::Index(name, _) => {
                return Err(sem(format!("'{name}' is not a field element")))
            }
            Expr::Tensor(..) => return Err(sem("a tensor product is not a field element")),
        })
    }
}

/// Exponent `a_0 + sum_t a_t c_t` as rational coefficients.
fn exponent_form(e: &Expr) -> Result<[Ratio<i64>; 4]> {
    let zero = [Ratio::from_integer(0); 4];
    let scale = |f: [Ratio<i64>; 4], k: Ratio<i64>| f.map(|x| x * k);
    let is_const = |f: &[Ratio<i64>; 4]| f[1..].iter().all(|x| x.is_zero());
    Ok(match e {
        Expr::Ident(n) => match n.as_str() {
            "c1" | "c2" | "c3" => {
                let mut f = zero;
                f[n[1..].parse::<usize>().expect("digit")] = Ratio::from_integer(1);
                f
            }
            _ => return Err(sem(format!("unknown exponent symbol '{n}'"))),
        },
        Expr::Neg(a) => scale(exponent_form(a)?, Ratio::from_integer(-1)),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (x, y) = (exponent_form(a)?, exponent_form(b)?);
            let sign = Ratio::from_integer(if matches!(e, Expr::Sub(..)) { -1 } else { 1 });
            std::array::from_fn(|i| x[i] + sign * y[i])
        }
        Expr::Mul(a, b) => {
            let (x, y) = (exponent_form(a)?, exponent_form(b)?);
            if is_const(&x) {
                scale(y, x[0])
            } else if is_const(&y) {
                scale(x, y[0])
            } else {
                return Err(sem("exponent is not linear in the central charges"));
            }
        }
        Expr::Div(a, b) => {
            let y = exponent_form(b)?;
            if !is_const(&y) || y[0].is_zero() {
                return Err(sem("exponent divides by a non-constant or zero"));
            }
            scale(exponent_form(a)?, y[0].recip())
        }
        other => {
            let mut f = zero;
            f[0] = other.to_ratio()?;
            f
        }
    })
}

/// `q^e` with `e` linear in the central charges, as `s^{2a_0} prod u_t^{2a_t}`.
fn q_power(e: &Expr) -> Result<Monomial> {
    let f = exponent_form(e)?;
    let mut m = Monomial::one();
    for (slot, a) in f.iter().enumerate() {
        let d = a * Ratio::from_integer(2);
        if !d.is_integer() {
            return Err(Error::Exponent(format!("q^({a}) is not a power of s")));
        }
        let v = if slot == 0 { Var::S } else { Var::u(slot) };
        m.set_exp(v, d.to_integer() as i32);
    }
    Ok(m)
}

fn ident_rat(name: &str) -> Result<RatExpr> {
    if name == "q" {
        return Ok(RatExpr::q_pow(1));
    }
    Var::from_name(name)
        .map(RatExpr::var)
        .ok_or_else(|| sem(format!("unknown identifier '{name}'")))
}

/// Parses a field element.
pub fn parse_rat(text: &str) -> Result<RatExpr> {
    parse(text)?.to_rat()
}
