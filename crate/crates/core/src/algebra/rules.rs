//! The rewrite system: one rule per adjacent out-of-order kind pair, derived
//! lazily from the exchange relations and cached.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::derive::{solve, Ph, RuleTemplate, TGen, RATIO};
use super::gen::{DeltaFactor, GenKind, GenOcc, LinForm};
use super::relations::{base_relation, delta_terms, RelationId};
use crate::error::{Error, Result};
use crate::rmatrix::{RMatrix, YbeConvention};
use crate::symfield::{LaurentPoly, Monomial, RatExpr, Var};

/// Which algebra the rewrite system presents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    /// `Phi` only.
    P,
    /// `Phi`, `L` and `L^{-1}`.
    EP,
    /// All generator families.
    DEP,
}

impl Flavor {
    pub fn allows(self, k: GenKind) -> bool {
        match self {
            Flavor::P => k == GenKind::Phi,
            Flavor::EP => matches!(k, GenKind::Phi | GenKind::L | GenKind::Linv),
            Flavor::DEP => true,
        }
    }

    pub fn kinds(self) -> Vec<GenKind> {
        GenKind::ALL.into_iter().filter(|&k| self.allows(k)).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::P => "P",
            Flavor::EP => "EP",
            Flavor::DEP => "DEP",
        }
    }
}

/// Which matrix kinds accompany the two delta terms of `[Phi, PhiStar]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaAssignment {
    /// `L*` with `delta(z/w q^{-c})`, `L` with `delta(z/w q^{c})`: the
    /// assignment compatible with the coproduct.
    Corrected,
    /// `L` with `delta(z/w q^{-c})`, `L*` with `delta(z/w q^{c})`.
    Swapped,
    /// `L*` in both terms, as displayed.
    Literal,
}

/// A corrected reading versus the displayed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reading {
    Corrected,
    Literal,
}

/// Convention toggles for readings the source leaves ambiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Toggles {
    pub phi_phistar: DeltaAssignment,
    /// `L* L` (corrected) or `L* L*` (literal) on the right of the `L L*`
    /// relation.
    pub l_lstar: Reading,
    /// `L*_{ji}` (corrected) or `L*_{ij}` (literal) in the `PhiStar`
    /// coproduct and antipode.
    pub phistar_index: Reading,
    pub ybe: YbeConvention,
}

impl Default for Toggles {
    fn default() -> Self {
        Toggles {
            phi_phistar: DeltaAssignment::Corrected,
            l_lstar: Reading::Corrected,
            phistar_index: Reading::Corrected,
            ybe: YbeConvention::Product,
        }
    }
}

impl Toggles {
    pub const NAMES: [&'static str; 4] = ["phiphistar", "llstar", "phistar-index", "ybe"];

    /// Sets one toggle from `NAME=value`, where value is `corrected` or
    /// `literal` (and additionally `swapped` for `phiphistar`).
    pub fn set(&mut self, name: &str, value: &str) -> Result<()> {
        let bad = || Error::Domain(format!("invalid value {value:?} for toggle {name}"));
        let reading = || match value {
            "corrected" => Ok(Reading::Corrected),
            "literal" => Ok(Reading::Literal),
            _ => Err(bad()),
        };
        match name {
            "phiphistar" => {
                self.phi_phistar = match value {
                    "corrected" => DeltaAssignment::Corrected,
                    "swapped" => DeltaAssignment::Swapped,
                    "literal" => DeltaAssignment::Literal,
                    _ => return Err(bad()),
                }
            }
            "llstar" => self.l_lstar = reading()?,
            "phistar-index" => self.phistar_index = reading()?,
            "ybe" => {
                self.ybe = match reading()? {
                    Reading::Corrected => YbeConvention::Product,
                    Reading::Literal => YbeConvention::Quotient,
                }
            }
            _ => return Err(Error::Domain(format!("unknown toggle {name:?}; known: {}", Self::NAMES.join(", ")))),
        }
        Ok(())
    }

    /// `(name, value)` pairs for reports.
    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        let r = |x: Reading| match x {
            Reading::Corrected => "corrected",
            Reading::Literal => "literal",
        };
        vec![
            (
                "phiphistar",
                match self.phi_phistar {
                    DeltaAssignment::Corrected => "corrected",
                    DeltaAssignment::Swapped => "swapped",
                    DeltaAssignment::Literal => "literal",
                },
            ),
            ("llstar", r(self.l_lstar)),
            ("phistar-index", r(self.phistar_index)),
            (
                "ybe",
                match self.ybe {
                    YbeConvention::Product => "corrected",
                    YbeConvention::Quotient => "literal",
                },
            ),
        ]
    }
}

impl fmt::Display for Toggles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.describe().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// `1/(q - q^{-1}) = s^2/(s^4 - 1)`.
pub fn kappa() -> RatExpr {
    let s = Var::S;
    RatExpr::new(
        LaurentPoly::monomial(Monomial::var_pow(s, 2)),
        LaurentPoly::monomial(Monomial::var_pow(s, 4)).sub(&LaurentPoly::one()),
    )
    .expect("nonzero denominator")
}

/// Whether the adjacent pair `a b` must be rewritten.
pub fn out_of_order(a: &GenOcc, b: &GenOcc) -> bool {
    a.order_key() > b.order_key()
}

/// One summand produced by a rewrite: `coeff * delta * word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleOutput {
    pub coeff: RatExpr,
    pub delta: Option<DeltaFactor>,
    pub word: Vec<GenOcc>,
}

/// An immutable rule set for one R-matrix, flavor and toggle set. Rule
/// templates are derived on first use; the cache is internally locked so a
/// system can be shared across threads.
pub struct RewriteSystem {
    rm: RMatrix,
    flavor: Flavor,
    toggles: Toggles,
    cache: Mutex<HashMap<(GenKind, GenKind), Arc<RuleTemplate>>>,
}

impl fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteSystem").field("flavor", &self.flavor).field("toggles", &self.toggles).finish()
    }
}

impl RewriteSystem {
    /// Requires an invertible R-matrix.
    pub fn new(rm: RMatrix, flavor: Flavor, toggles: Toggles) -> Result<Self> {
        if rm.determinant().is_zero() {
            return Err(Error::Singular("R-matrix is not invertible".into()));
        }
        Ok(RewriteSystem { rm, flavor, toggles, cache: Mutex::new(HashMap::new()) })
    }

    pub fn rmatrix(&self) -> &RMatrix {
        &self.rm
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn toggles(&self) -> &Toggles {
        &self.toggles
    }

    pub fn n(&self) -> usize {
        self.rm.n()
    }

    pub fn check_kind(&self, k: GenKind) -> Result<()> {
        if self.flavor.allows(k) {
            Ok(())
        } else {
            Err(Error::Kind(format!("{} is not a generator of flavor {}", k.name(), self.flavor.name())))
        }
    }

    pub fn check_gen(&self, g: &GenOcc) -> Result<()> {
        self.check_kind(g.kind)?;
        let n = self.n();
        let j_ok = if g.kind.is_matrix() { (g.j as usize) < n } else { g.j == 0 };
        if (g.i as usize) < n && j_ok {
            Ok(())
        } else {
            Err(Error::Index(format!("{g} has an index outside 1..{n}")))
        }
    }

    /// Derives (or fetches) the rule for the kind pair `(k1, k2)`.
    pub fn template(&self, k1: GenKind, k2: GenKind) -> Result<Arc<RuleTemplate>> {
        if let Some(t) = self.cache.lock().expect("cache lock").get(&(k1, k2)) {
            return Ok(t.clone());
        }
        let t = Arc::new(self.derive_template(k1, k2)?);
        self.cache.lock().expect("cache lock").insert((k1, k2), t.clone());
        Ok(t)
    }

    fn derive_template(&self, k1: GenKind, k2: GenKind) -> Result<RuleTemplate> {
        self.check_kind(k1)?;
        self.check_kind(k2)?;
        let id = RelationId::for_kinds(k1, k2);
        let mut rel = base_relation(id, &self.rm, &self.toggles)?;
        let ph_of = |k: GenKind, rel: &super::derive::Relation| {
            rel.lhs
                .iter()
                .find_map(|f| match f {
                    super::derive::Factor::Gen { kind, ph, .. } if kind.base() == k.base() => Some(*ph),
                    _ => None,
                })
                .expect("relation contains both families")
        };
        let (ph1, ph2) = if k1.base() == k2.base() { (Ph::X2, Ph::X1) } else { (ph_of(k1, &rel), ph_of(k2, &rel)) };
        let dim = self.n() * self.n();
        for (k, ph) in [(k1, ph1), (k2, ph2)] {
            if k.is_inverse() {
                rel = rel.invert(ph, dim)?;
            }
        }
        let eqs = rel.equations(self.n())?;
        let unknown = |w: &Vec<TGen>| w.len() == 2 && w[0].kind == k1 && w[0].ph == ph1 && w[1].kind == k2 && w[1].ph == ph2;
        let t = solve(eqs, ph1, ph2, unknown)?;
        let n = self.n();
        let expected = |k: GenKind| if k.is_matrix() { n * n } else { n };
        if t.table.len() != expected(k1) * expected(k2) {
            return Err(Error::UnsupportedRule(format!(
                "relation {id} does not determine every {}*{} word",
                k1.name(),
                k2.name()
            )));
        }
        Ok(t)
    }

    /// Rewrites the out-of-order adjacent pair `a b` in leg `leg`.
    pub fn rewrite_pair(&self, a: &GenOcc, b: &GenOcc, leg: usize) -> Result<Vec<RuleOutput>> {
        if a.kind == GenKind::Phi && b.kind == GenKind::PhiStar {
            let mut out = vec![RuleOutput { coeff: RatExpr::one(), delta: None, word: vec![*b, *a] }];
            for (c, d, g) in delta_terms(a, b, leg, &self.toggles) {
                out.push(RuleOutput { coeff: c, delta: Some(d), word: vec![g] });
            }
            return Ok(out);
        }
        let t = self.template(a.kind, b.kind)?;
        let arg_of = |ph: Ph| if ph == t.first { a.arg } else { b.arg };
        let ratio = arg_of(Ph::X1).ratio(&arg_of(Ph::X2));
        let bindings = [(RATIO, ratio), (Var::u(1), Monomial::var(Var::u(leg)))];
        let remap = |f: LinForm| {
            if leg == 1 {
                f
            } else {
                let mut g = f;
                g.0[1] = 0;
                g.0[leg] += f.0[1];
                g
            }
        };
        let rhs = t
            .table
            .get(&(a.i, a.j, b.i, b.j))
            .ok_or_else(|| Error::Index(format!("no rule for {a}*{b}")))?;
        let mut out = Vec::with_capacity(rhs.len());
        for (w, c) in rhs {
            let coeff = c.substitute_monomials(&bindings)?;
            let word = w
                .iter()
                .map(|g| GenOcc { kind: g.kind, i: g.i, j: g.j, arg: arg_of(g.ph).shifted(&remap(g.shift)) })
                .collect();
            out.push(RuleOutput { coeff, delta: None, word });
        }
        Ok(out)
    }
}
