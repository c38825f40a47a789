//! Finite sums of tensor words with coefficient-field coefficients.

use std::collections::BTreeMap;
use std::fmt;

use super::gen::{DeltaFactor, GenOcc};
use crate::error::{Error, Result};
use crate::symfield::RatExpr;

/// The non-coefficient part of a term: delta factors and one word per leg.
/// `flagged` marks terms whose delta factors could not be resolved.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monom {
    pub deltas: Vec<DeltaFactor>,
    pub legs: Vec<Vec<GenOcc>>,
    pub flagged: bool,
}

impl Monom {
    pub fn unit(nlegs: usize) -> Self {
        Monom { deltas: Vec::new(), legs: vec![Vec::new(); nlegs], flagged: false }
    }

    pub fn word(word: Vec<GenOcc>) -> Self {
        Monom { deltas: Vec::new(), legs: vec![word], flagged: false }
    }

    pub fn len(&self) -> usize {
        self.legs.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Legwise concatenation.
    pub fn mul(&self, other: &Monom) -> Monom {
        let legs = self.legs.iter().zip(&other.legs).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
        let mut deltas: Vec<DeltaFactor> = self.deltas.iter().chain(&other.deltas).copied().collect();
        deltas.sort();
        Monom { deltas, legs, flagged: self.flagged || other.flagged }
    }
}

/// One summand: coefficient times monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: RatExpr,
    pub monom: Monom,
}

/// A canonical sum of terms with a uniform number of tensor legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    nlegs: usize,
    terms: BTreeMap<Monom, RatExpr>,
}

impl Element {
    pub fn zero(nlegs: usize) -> Self {
        Element { nlegs, terms: BTreeMap::new() }
    }

    pub fn one(nlegs: usize) -> Self {
        Self::scalar(nlegs, RatExpr::one())
    }

    pub fn scalar(nlegs: usize, c: RatExpr) -> Self {
        Self::from_monom(c, Monom::unit(nlegs))
    }

    pub fn from_monom(c: RatExpr, m: Monom) -> Self {
        let mut e = Self::zero(m.legs.len());
        e.add_term(c, m);
        e
    }

    /// A single generator in a one-leg element.
    pub fn gen(g: GenOcc) -> Self {
        Self::from_monom(RatExpr::one(), Monom::word(vec![g]))
    }

    /// A single word in a one-leg element.
    pub fn word(c: RatExpr, w: Vec<GenOcc>) -> Self {
        Self::from_monom(c, Monom::word(w))
    }

    pub fn nlegs(&self) -> usize {
        self.nlegs
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monom, &RatExpr)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monom, RatExpr)> {
        self.terms.into_iter()
    }

    /// Adds `c * m`, merging with an equal monomial and dropping zeros.
    pub fn add_term(&mut self, c: RatExpr, mut m: Monom) {
        assert_eq!(m.legs.len(), self.nlegs, "leg count mismatch");
        if c.is_zero() {
            return;
        }
        m.deltas.sort();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_legs(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        self.scale(&RatExpr::int(-1))
    }

    pub fn scale(&self, c: &RatExpr) -> Element {
        let mut out = Element::zero(self.nlegs);
        for (m, d) in &self.terms {
            out.add_term(d.mul(c), m.clone());
        }
        out
    }

    /// Legwise concatenation with coefficients multiplied; not normal-ordered.
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        self.check_legs(other)?;
        let mut out = Element::zero(self.nlegs);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ca.mul(cb), ma.mul(mb));
            }
        }
        Ok(out)
    }

    /// `a (x) b`: the legs of `b` appended after those of `a`.
    pub fn tensor(&self, other: &Element) -> Element {
        let mut out = Element::zero(self.nlegs + other.nlegs);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut deltas: Vec<DeltaFactor> = ma.deltas.iter().chain(&mb.deltas).copied().collect();
                deltas.sort();
                let legs = ma.legs.iter().chain(&mb.legs).cloned().collect();
                out.add_term(ca.mul(cb), Monom { deltas, legs, flagged: ma.flagged || mb.flagged });
            }
        }
        out
    }

    /// Rebuilds every term through `f`, which may split a term into several.
    pub fn try_flat_map(&self, nlegs: usize, mut f: impl FnMut(&Monom, &RatExpr) -> Result<Element>) -> Result<Element> {
        let mut out = Element::zero(nlegs);
        for (m, c) in &self.terms {
            let img = f(m, c)?;
            if img.nlegs != nlegs {
                return Err(Error::Shape(format!("expected {nlegs} legs, got {}", img.nlegs)));
            }
            for (m2, c2) in img.terms {
                out.add_term(c2, m2);
            }
        }
        Ok(out)
    }

    pub fn has_flagged(&self) -> bool {
        self.terms.keys().any(|m| m.flagged)
    }

    fn check_legs(&self, other: &Element) -> Result<()> {
        if self.nlegs != other.nlegs {
            return Err(Error::Shape(format!("{} legs vs {} legs", self.nlegs, other.nlegs)));
        }
        Ok(())
    }
}

impl fmt::Display for Monom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.deltas {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "{d}")?;
            first = false;
        }
        if !self.is_empty() || self.legs.len() > 1 {
            if !first {
                write!(f, "*")?;
            }
            let legs: Vec<String> = self
                .legs
                .iter()
                .map(|w| if w.is_empty() { "1".into() } else { w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("*") })
                .collect();
            write!(f, "{}", legs.join(" @ "))?;
        } else if first {
            write!(f, "1")?;
        }
        if self.flagged {
            write!(f, " [unresolved]")?;
        }
        Ok(())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) * {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
