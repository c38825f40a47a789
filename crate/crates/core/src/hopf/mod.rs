//! Coproduct, counit and antipode, with the central-charge bookkeeping
//! needed to move between one, two and three tensor legs.
//!
//! Every argument shift and every coefficient may reference the charges
//! `c_t` of the legs (as `u_t = q^{c_t/2}` in coefficients). Splitting leg
//! `t` substitutes `c_t -> c_t + c_{t+1}` everywhere and renumbers higher
//! legs; the generator tables then refer to the two new legs. The antipode
//! on leg `t` first replaces `c_t` by `-c_t` everywhere (`S(q^c) = q^{-c}`),
//! then reverses the word and applies its table, whose own charge
//! references are left as they are. Merging identifies the two charges;
//! the counit sets the charge to zero.

use crate::algebra::{
    reduce, relation_components, ArgShift, DeltaFactor, Element, GenKind, GenOcc, LinForm, Monom,
    Reading, RelationId, RewriteSystem, Toggles, MAX_LEGS,
};
use crate::error::{Error, Result};
use crate::report::CheckResult;
use crate::symfield::{Monomial, RatExpr, Var};

/// A linear substitution of the leg charges: `c_t -> sum_u m[t][u] c_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChargeMap([[i32; MAX_LEGS + 1]; MAX_LEGS + 1]);

impl ChargeMap {
    pub fn identity() -> Self {
        let mut m = [[0; MAX_LEGS + 1]; MAX_LEGS + 1];
        for (t, row) in m.iter_mut().enumerate().skip(1) {
            row[t] = 1;
        }
        ChargeMap(m)
    }

    /// Splitting leg `t`: `c_t -> c_t + c_{t+1}`, higher legs shift up.
    pub fn split(t: usize) -> Self {
        let mut m = Self::identity();
        for u in (t + 1..MAX_LEGS).rev() {
            m.0[u] = [0; MAX_LEGS + 1];
            m.0[u][u + 1] = 1;
        }
        m.0[MAX_LEGS] = [0; MAX_LEGS + 1];
        if t < MAX_LEGS {
            m.0[t][t + 1] = 1;
        }
        m
    }

    /// Merging legs `t` and `t+1`: both charges become `c_t`, higher legs
    /// shift down.
    pub fn merge(t: usize) -> Self {
        let mut m = Self::identity();
        m.0[t + 1] = [0; MAX_LEGS + 1];
        m.0[t + 1][t] = 1;
        for u in t + 2..=MAX_LEGS {
            m.0[u] = [0; MAX_LEGS + 1];
            m.0[u][u - 1] = 1;
        }
        m
    }

    /// Removing leg `t`: `c_t -> 0`, higher legs shift down.
    pub fn remove(t: usize) -> Self {
        let mut m = Self::identity();
        m.0[t] = [0; MAX_LEGS + 1];
        for u in t + 1..=MAX_LEGS {
            m.0[u] = [0; MAX_LEGS + 1];
            m.0[u][u - 1] = 1;
        }
        m
    }

    /// `c_t -> -c_t`.
    pub fn negate(t: usize) -> Self {
        let mut m = Self::identity();
        m.0[t][t] = -1;
        m
    }

    pub fn form(&self, f: &LinForm) -> LinForm {
        f.map_charges(&self.0)
    }

    fn arg(&self, a: &ArgShift) -> ArgShift {
        ArgShift { var: a.var, shift: self.form(&a.shift) }
    }

    fn coeff(&self, c: &RatExpr) -> Result<RatExpr> {
        let bindings: Vec<(Var, Monomial)> = (1..=MAX_LEGS)
            .filter(|&t| self.0[t] != ChargeMap::identity().0[t])
            .map(|t| {
                let img = (1..=MAX_LEGS).fold(Monomial::one(), |m, u| m.mul(&Monomial::var_pow(Var::u(u), self.0[t][u])));
                (Var::u(t), img)
            })
            .collect();
        if bindings.is_empty() {
            Ok(c.clone())
        } else {
            c.substitute_monomials(&bindings)
        }
    }

    /// Applies the map to coefficient, deltas and every argument of a term.
    pub fn term(&self, m: &Monom, c: &RatExpr) -> Result<(RatExpr, Monom)> {
        let legs = m.legs.iter().map(|w| w.iter().map(|g| GenOcc { arg: self.arg(&g.arg), ..*g }).collect()).collect();
        let deltas = m.deltas.iter().map(|d| DeltaFactor::new(d.a, d.b, self.form(&d.shift))).collect();
        Ok((self.coeff(c)?, Monom { deltas, legs, flagged: m.flagged }))
    }
}

/// Maps local table charge slots 1, 2 to global legs.
fn local(f: LinForm, legs: &[usize]) -> LinForm {
    let mut out = LinForm::constant_halves(f.0[0]);
    for (s, &t) in legs.iter().enumerate() {
        out.0[t] += f.0[s + 1];
    }
    out
}

/// Moves table words from local to global charges and adds the argument
/// shift the generator carried.
fn relabel(w: Vec<GenOcc>, legs: &[usize], base: &LinForm) -> Vec<GenOcc> {
    w.into_iter().map(|x| GenOcc { arg: ArgShift { var: x.arg.var, shift: local(x.arg.shift, legs).add(base) }, ..x }).collect()
}

fn unshifted(g: &GenOcc) -> GenOcc {
    GenOcc { arg: ArgShift::plain(g.arg.var), ..*g }
}

fn half(slot: usize, k: i32) -> LinForm {
    LinForm::charge_halves(slot, k)
}

/// A two-leg table summand: coefficient, left word, right word.
type Split = (RatExpr, Vec<GenOcc>, Vec<GenOcc>);

/// The generator tables of the structure maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HopfTables {
    pub toggles: Toggles,
    pub n: usize,
}

impl HopfTables {
    pub fn new(rs: &RewriteSystem) -> Self {
        HopfTables { toggles: *rs.toggles(), n: rs.n() }
    }

    fn star_index(&self, i: usize, j: usize) -> (usize, usize) {
        match self.toggles.phistar_index {
            Reading::Corrected => (j, i),
            Reading::Literal => (i, j),
        }
    }

    /// `Delta(g)` with local charges `c1`, `c2`.
    pub fn coproduct_gen(&self, g: &GenOcc) -> Vec<Split> {
        use GenKind::*;
        let (a, i, j, n) = (g.arg, g.i as usize, g.j as usize, self.n);
        let at = |f: LinForm| a.shifted(&f);
        let one = RatExpr::one;
        match g.kind {
            Phi => {
                let mut out = vec![(one(), vec![*g], vec![])];
                for k in 0..n {
                    out.push((one(), vec![GenOcc::matrix(L, i, k, at(half(1, 1)))], vec![GenOcc::vector(Phi, k, at(half(1, 2)))]));
                }
                out
            }
            PhiStar => {
                let mut out = vec![(one(), vec![], vec![*g])];
                for k in 0..n {
                    let (r, c) = self.star_index(i, k);
                    out.push((one(), vec![GenOcc::vector(PhiStar, k, at(half(2, 2)))], vec![GenOcc::matrix(Lstar, r, c, at(half(2, 1)))]));
                }
                out
            }
            L => (0..n).map(|k| (one(), vec![GenOcc::matrix(L, i, k, at(half(2, -1)))], vec![GenOcc::matrix(L, k, j, at(half(1, 1)))])).collect(),
            Lstar => (0..n)
                .map(|k| (one(), vec![GenOcc::matrix(Lstar, i, k, at(half(2, 1)))], vec![GenOcc::matrix(Lstar, k, j, at(half(1, -1)))]))
                .collect(),
            Linv => (0..n)
                .map(|k| (one(), vec![GenOcc::matrix(Linv, k, j, at(half(2, -1)))], vec![GenOcc::matrix(Linv, i, k, at(half(1, 1)))]))
                .collect(),
            Lstarinv => (0..n)
                .map(|k| (one(), vec![GenOcc::matrix(Lstarinv, k, j, at(half(2, 1)))], vec![GenOcc::matrix(Lstarinv, i, k, at(half(1, -1)))]))
                .collect(),
        }
    }

    /// `epsilon(g)`.
    pub fn counit_gen(&self, g: &GenOcc) -> RatExpr {
        if g.kind.is_matrix() && g.i == g.j {
            RatExpr::one()
        } else {
            RatExpr::zero()
        }
    }

    /// `S(g)` as `(coefficient, word)` summands with local charge `c1`.
    pub fn antipode_gen(&self, g: &GenOcc) -> Result<Vec<(RatExpr, Vec<GenOcc>)>> {
        use GenKind::*;
        let (a, i, j, n) = (g.arg, g.i as usize, g.j as usize, self.n);
        let at = |k: i32| a.shifted(&half(1, k));
        let m1 = || RatExpr::int(-1);
        Ok(match g.kind {
            Phi => (0..n).map(|k| (m1(), vec![GenOcc::matrix(Linv, i, k, at(-1)), GenOcc::vector(Phi, k, at(-2))])).collect(),
            PhiStar => (0..n)
                .map(|k| {
                    let (r, c) = self.star_index(i, k);
                    (m1(), vec![GenOcc::vector(PhiStar, k, at(-2)), GenOcc::matrix(Lstarinv, r, c, at(-1))])
                })
                .collect(),
            L => vec![(RatExpr::one(), vec![GenOcc::matrix(Linv, i, j, a)])],
            Lstar => vec![(RatExpr::one(), vec![GenOcc::matrix(Lstarinv, i, j, a)])],
            Linv | Lstarinv => {
                return Err(Error::UnsupportedRule(format!("no antipode table for {}", g.kind.name())));
            }
        })
    }

    /// Applies `Delta` to leg `leg` (1-based).
    pub fn coproduct(&self, e: &Element, leg: usize) -> Result<Element> {
        let k = e.nlegs();
        if leg == 0 || leg > k {
            return Err(Error::Shape(format!("leg {leg} out of range 1..{k}")));
        }
        if k + 1 > MAX_LEGS {
            return Err(Error::Shape(format!("coproduct would need {} legs, at most {MAX_LEGS} supported", k + 1)));
        }
        let map = ChargeMap::split(leg);
        e.try_flat_map(k + 1, |m, c| {
            let (c, m) = map.term(m, c)?;
            let t = leg - 1;
            let mut acc: Vec<Split> = vec![(c, vec![], vec![])];
            for g in &m.legs[t] {
                let legs = [leg, leg + 1];
                let img: Vec<Split> = self
                    .coproduct_gen(&unshifted(g))
                    .into_iter()
                    .map(|(c, l, r)| (c, relabel(l, &legs, &g.arg.shift), relabel(r, &legs, &g.arg.shift)))
                    .collect();
                let mut next = Vec::with_capacity(acc.len() * img.len());
                for (ca, la, ra) in &acc {
                    for (cb, lb, rb) in &img {
                        let l = la.iter().chain(lb).copied().collect();
                        let r = ra.iter().chain(rb).copied().collect();
                        next.push((ca.mul(cb), l, r));
                    }
                }
                acc = next;
            }
            let mut out = Element::zero(k + 1);
            for (c, l, r) in acc {
                let mut legs = m.legs[..t].to_vec();
                legs.push(l);
                legs.push(r);
                legs.extend_from_slice(&m.legs[t + 1..]);
                out.add_term(c, Monom { deltas: m.deltas.clone(), legs, flagged: m.flagged });
            }
            Ok(out)
        })
    }

    /// Applies `epsilon` to leg `leg` and removes it.
    pub fn counit_apply(&self, e: &Element, leg: usize) -> Result<Element> {
        let k = e.nlegs();
        if leg == 0 || leg > k {
            return Err(Error::Shape(format!("leg {leg} out of range 1..{k}")));
        }
        let map = ChargeMap::remove(leg);
        e.try_flat_map(k - 1, |m, c| {
            let v = m.legs[leg - 1].iter().fold(RatExpr::one(), |acc, g| acc.mul(&self.counit_gen(g)));
            if v.is_zero() {
                return Ok(Element::zero(k - 1));
            }
            let mut m = m.clone();
            m.legs.remove(leg - 1);
            let (c, m) = map.term(&m, &c.mul(&v))?;
            Ok(Element::from_monom(c, m))
        })
    }

    /// Applies the antipode to leg `leg`.
    pub fn antipode_apply(&self, e: &Element, leg: usize) -> Result<Element> {
        let k = e.nlegs();
        if leg == 0 || leg > k {
            return Err(Error::Shape(format!("leg {leg} out of range 1..{k}")));
        }
        let map = ChargeMap::negate(leg);
        e.try_flat_map(k, |m, c| {
            let (c, m) = map.term(m, c)?;
            let t = leg - 1;
            let mut acc: Vec<(RatExpr, Vec<GenOcc>)> = vec![(c, vec![])];
            for g in m.legs[t].iter().rev() {
                let img: Vec<(RatExpr, Vec<GenOcc>)> =
                    self.antipode_gen(&unshifted(g))?.into_iter().map(|(c, w)| (c, relabel(w, &[leg], &g.arg.shift))).collect();
                let mut next = Vec::with_capacity(acc.len() * img.len());
                for (ca, wa) in &acc {
                    for (cb, wb) in &img {
                        let w = wa.iter().chain(wb).copied().collect();
                        next.push((ca.mul(cb), w));
                    }
                }
                acc = next;
            }
            let mut out = Element::zero(k);
            for (c, w) in acc {
                let mut legs = m.legs.clone();
                legs[t] = w;
                out.add_term(c, Monom { deltas: m.deltas.clone(), legs, flagged: m.flagged });
            }
            Ok(out)
        })
    }
}

/// Concatenates legs `leg` and `leg + 1`, identifying their charges.
pub fn merge_legs(e: &Element, leg: usize) -> Result<Element> {
    let k = e.nlegs();
    if leg == 0 || leg >= k {
        return Err(Error::Shape(format!("cannot merge leg {leg} of {k}")));
    }
    let map = ChargeMap::merge(leg);
    e.try_flat_map(k - 1, |m, c| {
        let mut m = m.clone();
        let right = m.legs.remove(leg);
        m.legs[leg - 1].extend(right);
        let (c, m) = map.term(&m, c)?;
        Ok(Element::from_monom(c, m))
    })
}

/// Axioms checked on each generator kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    CounitLeft,
    CounitRight,
    Coassociativity,
    AntipodeLeft,
    AntipodeRight,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::CounitLeft, Axiom::CounitRight, Axiom::Coassociativity, Axiom::AntipodeLeft, Axiom::AntipodeRight];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::CounitLeft => "counit (eps x id) Delta = id",
            Axiom::CounitRight => "counit (id x eps) Delta = id",
            Axiom::Coassociativity => "coassociativity",
            Axiom::AntipodeLeft => "antipode m(S x id) Delta = eta eps",
            Axiom::AntipodeRight => "antipode m(id x S) Delta = eta eps",
        }
    }
}

/// A generic generator of the kind: first indices, argument `z1`. For the
/// matrix kinds the `(1,2)` entry is used when `n > 1` as well as `(1,1)`.
pub fn sample_gens(kind: GenKind, n: usize) -> Vec<GenOcc> {
    let a = ArgShift::plain(Var::z(1));
    if kind.is_matrix() {
        let mut v = vec![GenOcc::matrix(kind, 0, 0, a)];
        if n > 1 {
            v.push(GenOcc::matrix(kind, 0, 1, a));
        }
        v
    } else {
        (0..n.min(2)).map(|i| GenOcc::vector(kind, i, a)).collect()
    }
}

/// The residual of one axiom on one generator, before reduction.
pub fn axiom_residual(ax: Axiom, g: &GenOcc, tables: &HopfTables) -> Result<Element> {
    let e = Element::gen(*g);
    let d = tables.coproduct(&e, 1)?;
    let eps = Element::scalar(1, tables.counit_gen(g));
    match ax {
        Axiom::CounitLeft => tables.counit_apply(&d, 1)?.sub(&e),
        Axiom::CounitRight => tables.counit_apply(&d, 2)?.sub(&e),
        Axiom::Coassociativity => tables.coproduct(&d, 1)?.sub(&tables.coproduct(&d, 2)?),
        Axiom::AntipodeLeft => merge_legs(&tables.antipode_apply(&d, 1)?, 1)?.sub(&eps),
        Axiom::AntipodeRight => merge_legs(&tables.antipode_apply(&d, 2)?, 1)?.sub(&eps),
    }
}

/// Whether the antipode axioms apply to a kind (no table on inverse kinds).
pub fn axiom_applies(ax: Axiom, kind: GenKind) -> bool {
    !(kind.is_inverse() && matches!(ax, Axiom::AntipodeLeft | Axiom::AntipodeRight))
}

/// Every axiom on every generator kind of the flavor, plus `S(q^c) q^c = 1`.
pub fn check_axioms(rs: &RewriteSystem, tables: &HopfTables) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for kind in rs.flavor().kinds() {
        for ax in Axiom::ALL {
            if !axiom_applies(ax, kind) {
                continue;
            }
            let name = format!("{} on {}", ax.name(), kind.name());
            let mut res = Ok(Element::zero(1));
            for g in sample_gens(kind, rs.n()) {
                res = axiom_residual(ax, &g, tables).and_then(|r| reduce(&r, rs));
                if !matches!(&res, Ok(r) if r.is_zero()) {
                    break;
                }
            }
            out.push(match res {
                Ok(r) => CheckResult::from_residual(name, &r),
                Err(e) => CheckResult::from_error(name, &e),
            });
        }
    }
    out.push(check_central_antipode());
    out
}

/// `S(q^c) q^c = q^{-c} q^c = 1 = epsilon(q^c)`.
fn check_central_antipode() -> CheckResult {
    let qc = RatExpr::monomial(Monomial::var_pow(Var::u(1), 2));
    let r = ChargeMap::negate(1).coeff(&qc).map(|s| s.mul(&qc).sub(&RatExpr::one()));
    match r {
        Ok(r) => CheckResult::new("antipode on q^c", r.is_zero()),
        Err(e) => CheckResult::from_error("antipode on q^c", &e),
    }
}

/// `Delta(lhs - rhs)` for every component of a relation, reduced in the
/// two-leg algebra.
pub fn hom_residual(id: RelationId, rs: &RewriteSystem, tables: &HopfTables) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for comp in relation_components(id, rs.rmatrix(), rs.toggles())? {
        let r = reduce(&tables.coproduct(&comp, 1)?, rs)?;
        if !r.is_zero() {
            out.push(r);
        }
    }
    Ok(out)
}

pub fn check_hom_on_relation(id: RelationId, rs: &RewriteSystem, tables: &HopfTables) -> CheckResult {
    let name = format!("coproduct preserves {id}");
    if id.flavor() > rs.flavor() {
        return CheckResult::from_error(name, &Error::Kind(format!("{id} is not a relation of {}", rs.flavor().name())));
    }
    match hom_residual(id, rs, tables) {
        Ok(rs_) if rs_.is_empty() => CheckResult::from_residual(name, &Element::zero(2)),
        Ok(rs_) => {
            let terms: usize = rs_.iter().map(Element::len).sum();
            let mut c = CheckResult::from_residual(name, &rs_[0]);
            c.residual_terms = Some(terms);
            c.with_note(format!("{} of the components have nonzero residual", rs_.len()))
        }
        Err(e) => CheckResult::from_error(name, &e),
    }
}
