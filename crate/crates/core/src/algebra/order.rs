//! Normal ordering, inverse contraction and delta normalization.

use std::collections::{BTreeMap, HashMap};

use super::element::{Element, Monom};
use super::gen::{ArgShift, DeltaFactor, GenKind, GenOcc, LinForm};
use super::relations::{relation_components, rel_vars, RelationId};
use super::rules::{out_of_order, RewriteSystem};
use crate::error::{Error, Result};
use crate::symfield::{Monomial, RatExpr, Var};

/// Upper bound on rewrite rounds before giving up.
pub const MAX_ROUNDS: usize = 100_000;
/// Upper bound on the number of live terms.
pub const MAX_TERMS: usize = 500_000;

/// Which out-of-order pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Leftmost pair in the leftmost unfinished leg (the canonical scheduler).
    Leftmost,
    /// Rightmost pair in the rightmost unfinished leg.
    Rightmost,
}

/// The termination measure: total length, kind-order inversions and
/// variable-order inversions, compared lexicographically.
pub fn measure(m: &Monom) -> (usize, usize, usize) {
    let mut kinds = 0;
    let mut vars = 0;
    for w in &m.legs {
        for (p, a) in w.iter().enumerate() {
            for b in &w[p + 1..] {
                let (ka, kb) = (a.kind.group(), b.kind.group());
                if ka > kb {
                    kinds += 1;
                } else if ka == kb && a.arg.var > b.arg.var {
                    vars += 1;
                }
            }
        }
    }
    (m.len(), kinds, vars)
}

fn find_pair(m: &Monom, strategy: Strategy) -> Option<(usize, usize)> {
    let scan = |t: usize| {
        let w = &m.legs[t];
        let mut ps = (0..w.len().saturating_sub(1)).filter(|&p| out_of_order(&w[p], &w[p + 1]));
        match strategy {
            Strategy::Leftmost => ps.next(),
            Strategy::Rightmost => ps.next_back(),
        }
        .map(|p| (t, p))
    };
    match strategy {
        Strategy::Leftmost => (0..m.legs.len()).find_map(scan),
        Strategy::Rightmost => (0..m.legs.len()).rev().find_map(scan),
    }
}

/// One rewrite step on a monomial, or `None` if it is in normal form.
fn step(m: &Monom, rs: &RewriteSystem, strategy: Strategy) -> Result<Option<Vec<(RatExpr, Monom)>>> {
    let Some((t, p)) = find_pair(m, strategy) else { return Ok(None) };
    let w = &m.legs[t];
    let outs = rs.rewrite_pair(&w[p], &w[p + 1], t + 1)?;
    Ok(Some(
        outs.into_iter()
            .map(|o| {
                let mut nm = m.clone();
                nm.legs[t] = w[..p].iter().chain(&o.word).chain(&w[p + 2..]).copied().collect();
                if let Some(d) = o.delta {
                    nm.deltas.push(d);
                    nm.deltas.sort();
                }
                (o.coeff, nm)
            })
            .collect(),
    ))
}

fn check_gens(e: &Element, rs: &RewriteSystem) -> Result<()> {
    for (m, _) in e.terms() {
        for g in m.legs.iter().flatten() {
            rs.check_gen(g)?;
        }
    }
    Ok(())
}

/// Normal form under the leftmost strategy.
pub fn normal_order(e: &Element, rs: &RewriteSystem) -> Result<Element> {
    normal_order_traced(e, rs, Strategy::Leftmost, &mut |_, _| {})
}

/// Normal form under `strategy`; `on_rewrite(before, after)` is called for
/// every monomial produced by a rule application.
pub fn normal_order_traced(
    e: &Element,
    rs: &RewriteSystem,
    strategy: Strategy,
    on_rewrite: &mut dyn FnMut(&Monom, &Monom),
) -> Result<Element> {
    check_gens(e, rs)?;
    let mut current = contract(e, rs.n());
    for _ in 0..MAX_ROUNDS {
        let mut next = Element::zero(e.nlegs());
        let mut changed = false;
        for (m, c) in current.into_terms() {
            match step(&m, rs, strategy)? {
                None => next.add_term(c, m),
                Some(outs) => {
                    changed = true;
                    for (c2, m2) in outs {
                        on_rewrite(&m, &m2);
                        next.add_term(c.mul(&c2), m2);
                    }
                }
            }
        }
        if next.len() > MAX_TERMS {
            return Err(Error::Expansion(format!("normal ordering exceeded {MAX_TERMS} terms")));
        }
        let contracted = contract(&next, rs.n());
        let done = !changed && contracted == next;
        current = contracted;
        if done {
            return Ok(current);
        }
    }
    Err(Error::Expansion(format!("normal ordering did not finish in {MAX_ROUNDS} rounds")))
}

fn inverse_pair(a: GenKind, b: GenKind) -> bool {
    a.is_matrix() && a.inverse() == Some(b)
}

/// Replaces complete sums `sum_k c * X^{-1}_{ik}(z) X_{kj}(z)` (adjacent, same
/// argument, either order) by `c * delta_{ij}`.
pub fn contract(e: &Element, n: usize) -> Element {
    type Key = (Monom, usize, usize, u8, u8, GenKind, GenKind, ArgShift);
    let mut groups: HashMap<Key, Vec<(u8, RatExpr, Monom)>> = HashMap::new();
    let mut out = Element::zero(e.nlegs());
    for (m, c) in e.terms() {
        let site = m.legs.iter().enumerate().find_map(|(t, w)| {
            (0..w.len().saturating_sub(1))
                .find(|&p| inverse_pair(w[p].kind, w[p + 1].kind) && w[p].arg == w[p + 1].arg && w[p].j == w[p + 1].i)
                .map(|p| (t, p))
        });
        match site {
            None => out.add_term(c.clone(), m.clone()),
            Some((t, p)) => {
                let w = &m.legs[t];
                let mut rest = m.clone();
                rest.legs[t] = w[..p].iter().chain(&w[p + 2..]).copied().collect();
                let key = (rest, t, p, w[p].i, w[p + 1].j, w[p].kind, w[p + 1].kind, w[p].arg);
                groups.entry(key).or_default().push((w[p].j, c.clone(), m.clone()));
            }
        }
    }
    for ((rest, _, _, i, j, ..), members) in groups {
        let mut ks: Vec<u8> = members.iter().map(|x| x.0).collect();
        ks.sort_unstable();
        ks.dedup();
        let complete = ks.len() == n && members.iter().all(|x| x.1 == members[0].1);
        if complete {
            if i == j {
                out.add_term(members[0].1.clone(), rest);
            }
        } else {
            for (_, c, m) in members {
                out.add_term(c, m);
            }
        }
    }
    out
}

/// A pending substitution `z_a -> z_b q^{shift}`.
type Subst = BTreeMap<Var, (Var, LinForm)>;

fn subst_arg(a: &ArgShift, s: &Subst) -> ArgShift {
    match s.get(&a.var) {
        Some((v, sh)) => ArgShift { var: *v, shift: a.shift.add(sh) },
        None => *a,
    }
}

fn subst_delta(d: &DeltaFactor, s: &Subst) -> DeltaFactor {
    let a = subst_arg(&ArgShift { var: d.a, shift: d.shift }, s);
    let b = subst_arg(&ArgShift::plain(d.b), s);
    DeltaFactor::new(a.var, b.var, a.shift.sub(&b.shift))
}

/// Uses each `delta((z_a/z_b) q^s)` to substitute `z_a -> z_b q^{-s}` in the
/// coefficient, all arguments and the other deltas. Repeated deltas merge;
/// contradictory ones leave the term unsimplified and flagged.
pub fn delta_normalize(e: &Element) -> Element {
    let mut out = Element::zero(e.nlegs());
    for (m, c) in e.terms() {
        if m.deltas.is_empty() {
            out.add_term(c.clone(), m.clone());
            continue;
        }
        match normalize_term(m, c) {
            Some((c2, m2)) => out.add_term(c2, m2),
            None => {
                let mut m2 = m.clone();
                m2.flagged = true;
                out.add_term(c.clone(), m2);
            }
        }
    }
    out
}

fn normalize_term(m: &Monom, c: &RatExpr) -> Option<(RatExpr, Monom)> {
    let mut s = Subst::new();
    let mut kept: Vec<DeltaFactor> = Vec::new();
    for d in &m.deltas {
        if d.is_degenerate() {
            return None;
        }
        let d = subst_delta(d, &s);
        if d.is_degenerate() {
            if d.shift.is_zero() {
                continue;
            }
            return None;
        }
        let new = (d.b, d.shift.neg());
        for v in s.values_mut() {
            if v.0 == d.a {
                *v = (d.b, v.1.add(&new.1));
            }
        }
        s.insert(d.a, new);
        kept.push(d);
    }
    let kept: Vec<DeltaFactor> = kept.iter().map(|d| {
        let b = subst_arg(&ArgShift::plain(d.b), &s);
        DeltaFactor { a: d.a, b: b.var, shift: d.shift.sub(&b.shift) }
    }).collect();
    let bindings: Vec<(Var, Monomial)> =
        s.iter().map(|(a, (b, sh))| (*a, ArgShift { var: *b, shift: *sh }.monomial())).collect();
    let c2 = c.substitute_monomials(&bindings).ok()?;
    let legs = m.legs.iter().map(|w| w.iter().map(|g| GenOcc { arg: subst_arg(&g.arg, &s), ..*g }).collect()).collect();
    let mut deltas = kept;
    deltas.sort();
    Some((c2, Monom { deltas, legs, flagged: m.flagged }))
}

/// Alternates normal ordering and delta normalization until stable.
pub fn reduce(e: &Element, rs: &RewriteSystem) -> Result<Element> {
    let mut cur = delta_normalize(e);
    for _ in 0..64 {
        let next = delta_normalize(&normal_order(&cur, rs)?);
        if next == cur {
            return Ok(next);
        }
        cur = next;
    }
    Err(Error::Expansion("normal ordering and delta normalization did not stabilize".into()))
}

/// Result of comparing the two reduction strategies on reversed `Phi` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidReport {
    pub agree: bool,
    /// Number of nonzero residual terms across all index choices.
    pub residual_terms: usize,
    /// A printed nonzero residual, if any.
    pub sample: Option<String>,
}

/// Normal-orders `Phi_a(z3) Phi_b(z2) Phi_c(z1)` for all indices along the
/// leftmost and the rightmost strategy and compares. The two-letter
/// relation read in the opposite direction, `R(z2/z1) Phi(z2) Phi(z1) =
/// Phi(z1) Phi(z2)`, is reduced as well; it vanishes exactly when the rule
/// is compatible with unitarity.
pub fn braid_consistency(rs: &RewriteSystem) -> Result<BraidReport> {
    let n = rs.n();
    let z = |k| ArgShift::plain(Var::z(k));
    let mut residual_terms = 0;
    let mut sample = None;
    let mut record = |r: Element| {
        if !r.is_zero() {
            residual_terms += r.len();
            sample.get_or_insert_with(|| r.to_string());
        }
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let w = Element::word(
                    RatExpr::one(),
                    vec![
                        GenOcc::vector(GenKind::Phi, a, z(3)),
                        GenOcc::vector(GenKind::Phi, b, z(2)),
                        GenOcc::vector(GenKind::Phi, c, z(1)),
                    ],
                );
                let left = normal_order_traced(&w, rs, Strategy::Leftmost, &mut |_, _| {})?;
                let right = normal_order_traced(&w, rs, Strategy::Rightmost, &mut |_, _| {})?;
                record(left.sub(&right)?);
            }
        }
    }
    let [z1, z2] = rel_vars();
    for comp in relation_components(RelationId::PhiPhi, rs.rmatrix(), rs.toggles())? {
        let swapped = swap_vars(&comp, z1, z2)?;
        record(normal_order(&swapped, rs)?);
    }
    Ok(BraidReport { agree: residual_terms == 0, residual_terms, sample })
}

/// Exchanges two spectral variables throughout an element.
pub fn swap_vars(e: &Element, a: Var, b: Var) -> Result<Element> {
    let sw = |v: Var| if v == a { b } else if v == b { a } else { v };
    let bindings = [(a, Monomial::var(b)), (b, Monomial::var(a))];
    let mut out = Element::zero(e.nlegs());
    for (m, c) in e.terms() {
        let legs = m
            .legs
            .iter()
            .map(|w| w.iter().map(|g| GenOcc { arg: ArgShift { var: sw(g.arg.var), shift: g.arg.shift }, ..*g }).collect())
            .collect();
        let deltas = m.deltas.iter().map(|d| DeltaFactor::new(sw(d.a), sw(d.b), d.shift)).collect();
        out.add_term(c.substitute_monomials(&bindings)?, Monom { deltas, legs, flagged: m.flagged });
    }
    Ok(out)
}
