//! Mode expansion of currents: `G(z) = sum_n G[n] z^{-n}` and
//! `delta(z) = sum_n z^n`, with coefficient extraction from relations whose
//! coefficients have been cleared to Laurent polynomials.
//!
//! Expansion conventions: once denominators are cleared every coefficient
//! is a Laurent polynomial in the spectral variables, so no expansion
//! direction is needed. Delta factors are expanded two-sidedly. When a
//! coefficient of `prod_v v^{-m_v}` receives infinitely many contributions
//! (two generators on the same variable, or a free delta index), the free
//! mode indices are truncated to the window `|n| <= N`.

mod consistency;
mod drinfeld;

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{relation_components, Element, GenKind, RelationId, RewriteSystem};
use crate::error::{Error, Result};
use crate::symfield::{lcm, LaurentPoly, Monomial, RatExpr, Var};

pub use consistency::{check_mode_consistency, critical_pair_residuals};
pub use drinfeld::{drinfeld_compare, parse_reference, reference_relations, RefRelation, REFERENCE_DRINFELD};

/// One mode `G_ij[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeGen {
    pub kind: GenKind,
    pub i: u8,
    pub j: u8,
    pub n: i64,
}

impl ModeGen {
    /// Vanishes under the triangularity conditions: `l(n) = 0` for `n < 0`,
    /// `l*(n) = 0` for `n > 0`, `l_ij(0) = 0 = l*_ji(0)` for `i < j`.
    pub fn is_forbidden(&self) -> bool {
        match self.kind {
            GenKind::L => self.n < 0 || (self.n == 0 && self.i < self.j),
            GenKind::Lstar => self.n > 0 || (self.n == 0 && self.i > self.j),
            _ => false,
        }
    }

    /// The invertible zero modes `l_ii(0)`, `l*_ii(0)`.
    pub fn is_unit(&self) -> bool {
        matches!(self.kind, GenKind::L | GenKind::Lstar) && self.n == 0 && self.i == self.j
    }
}

impl fmt::Display for ModeGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_matrix() {
            write!(f, "{}{}{}[{}]", self.kind.name(), self.i + 1, self.j + 1, self.n)
        } else {
            write!(f, "{}{}[{}]", self.kind.name(), self.i + 1, self.n)
        }
    }
}

/// A mode word, one word per tensor leg.
pub type ModeMonom = Vec<Vec<ModeGen>>;

/// A finite linear combination of mode words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModeSum {
    pub terms: BTreeMap<ModeMonom, RatExpr>,
}

impl ModeSum {
    pub fn add_term(&mut self, c: RatExpr, m: ModeMonom) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.get(&m) {
            Some(x) => x.add(&c),
            None => c,
        };
        if s.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, s);
        }
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

    pub fn sub(&self, o: &ModeSum) -> ModeSum {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(c.neg(), m.clone());
        }
        out
    }

    /// Drops every word containing a mode forbidden by triangularity.
    pub fn triangular(&self) -> ModeSum {
        ModeSum {
            terms: self.terms.iter().filter(|(m, _)| !m.iter().flatten().any(ModeGen::is_forbidden)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Whether `self = lambda * other` for a nonzero scalar `lambda`.
    pub fn proportional(&self, other: &ModeSum) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        let mut ratio: Option<RatExpr> = None;
        for (m, c) in &self.terms {
            let Some(d) = other.terms.get(m) else { return false };
            let r = c.div(d).expect("stored coefficients are nonzero");
            match &ratio {
                None => ratio = Some(r),
                Some(x) if *x == r => {}
                Some(_) => return false,
            }
        }
        true
    }
}

impl fmt::Display for ModeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let legs: Vec<String> =
                    m.iter().map(|w| if w.is_empty() { "1".into() } else { w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("*") }).collect();
                format!("({c}) * {}", legs.join(" @ "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Truncation order `N` and guard band: assertions are made only for mode
/// indices with `|n| <= N - margin`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesWindow {
    pub n: i64,
    pub margin: i64,
}

impl SeriesWindow {
    pub fn new(n: i64, margin: i64) -> Result<Self> {
        if n <= margin || margin < 0 {
            return Err(Error::Domain(format!("window needs N > margin >= 0, got N={n}, margin={margin}")));
        }
        Ok(SeriesWindow { n, margin })
    }

    /// The default guard band `1 + max polynomial degree` for `e`.
    pub fn with_default_margin(n: i64, e: &[Element]) -> Result<Self> {
        let deg = e.iter().map(max_spectral_degree).max().unwrap_or(0);
        Self::new(n, (1 + deg).min(n - 1).max(0))
    }

    /// Largest asserted `|n|`.
    pub fn inner(&self) -> i64 {
        self.n - self.margin
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        -self.inner()..=self.inner()
    }
}

fn is_spectral(v: Var) -> bool {
    v.spectral().is_some() || v == Var::W
}

fn max_spectral_degree(e: &Element) -> i64 {
    e.terms()
        .flat_map(|(_, c)| c.num().terms().map(|(m, _)| m.vars().filter(|v| is_spectral(*v)).map(|v| m.exp(v).unsigned_abs() as i64).sum::<i64>()))
        .max()
        .unwrap_or(0)
}

/// Multiplies by the least common multiple of all coefficient
/// denominators, so every coefficient becomes a Laurent polynomial.
pub fn clear_element(e: &Element) -> Result<Element> {
    let mut d = LaurentPoly::one();
    for (_, c) in e.terms() {
        if !c.den().is_one() {
            d = lcm(&d, c.den());
        }
    }
    let cleared = e.scale(&RatExpr::from_poly(d));
    // strip the common spectral monomial, a unit that would shift mode indices
    let mut low: Option<Monomial> = None;
    for (_, c) in cleared.terms() {
        let m = c.num().min_exponents();
        low = Some(match low {
            None => m,
            Some(l) => l.meet(&m),
        });
    }
    let Some(low) = low else { return Ok(cleared) };
    let mut unit = Monomial::one();
    for v in low.vars().filter(|v| is_spectral(*v)) {
        unit.set_exp(v, -low.exp(v));
    }
    Ok(cleared.scale(&RatExpr::monomial(unit)))
}

/// The spectral variables occurring in an element.
pub fn spectral_vars(e: &Element) -> Vec<Var> {
    let mut vs: Vec<Var> = Vec::new();
    for (m, c) in e.terms() {
        vs.extend(m.legs.iter().flatten().map(|g| g.arg.var));
        vs.extend(m.deltas.iter().flat_map(|d| [d.a, d.b]));
        vs.extend(c.num().vars().into_iter().filter(|v| is_spectral(*v)));
    }
    vs.sort();
    vs.dedup();
    vs
}

/// Splits a monomial into its spectral exponents and the remaining part.
fn split_monomial(m: &Monomial, vars: &[Var]) -> Result<(Vec<i64>, Monomial)> {
    let mut rest = *m;
    let mut ex = Vec::with_capacity(vars.len());
    for v in vars {
        ex.push(m.exp(*v) as i64);
        rest.set_exp(*v, 0);
    }
    if rest.vars().any(is_spectral) {
        return Err(Error::Expansion("coefficient involves a spectral variable not in the target".into()));
    }
    Ok((ex, rest))
}

/// Coefficient of `prod_v v^{-target_v}` in a cleared element. Free mode
/// indices are restricted to `|n| <= bound`.
pub fn mode_coefficient(e: &Element, vars: &[Var], target: &[i64], bound: i64) -> Result<ModeSum> {
    let mut out = ModeSum::default();
    for (m, c) in e.terms() {
        if !c.den().is_one() {
            return Err(Error::Expansion(format!("coefficient {c} is not polynomial; clear denominators first")));
        }
        if m.flagged {
            return Err(Error::Expansion("term has unresolved delta factors".into()));
        }
        let gens: Vec<(usize, usize, &crate::algebra::GenOcc)> = m
            .legs
            .iter()
            .enumerate()
            .flat_map(|(t, w)| w.iter().enumerate().map(move |(p, g)| (t, p, g)))
            .collect();
        let idx = |v: Var| vars.iter().position(|x| *x == v).ok_or_else(|| Error::Expansion(format!("variable {v} missing from the target")));
        let gen_vars: Vec<usize> = gens.iter().map(|(_, _, g)| idx(g.arg.var)).collect::<Result<_>>()?;
        let delta_vars: Vec<(usize, usize)> = m.deltas.iter().map(|d| Ok((idx(d.a)?, idx(d.b)?))).collect::<Result<_>>()?;
        for (mono, k) in c.num().terms() {
            let (alpha, rest) = split_monomial(mono, vars)?;
            let base = RatExpr::monomial(rest).mul(&RatExpr::from_poly(LaurentPoly::constant(k.clone())));
            let mut ps = vec![-bound; m.deltas.len()];
            loop {
                // required sum of mode indices per variable
                let mut need: Vec<i64> = (0..vars.len()).map(|v| alpha[v] + target[v]).collect();
                for (p, (a, b)) in ps.iter().zip(&delta_vars) {
                    need[*a] += p;
                    need[*b] -= p;
                }
                let mut dcoef = base.clone();
                for (p, d) in ps.iter().zip(&m.deltas) {
                    dcoef = dcoef.mul_monomial(&d.shift.monomial().pow(*p as i32));
                }
                assign_modes(&gens, &gen_vars, &need, bound, m.legs.len(), &dcoef, &mut out);
                // next delta index tuple
                let mut t = 0;
                loop {
                    if t == ps.len() {
                        break;
                    }
                    ps[t] += 1;
                    if ps[t] <= bound {
                        break;
                    }
                    ps[t] = -bound;
                    t += 1;
                }
                if t == ps.len() {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Enumerates mode assignments with `sum_{g on v} n_g = need[v]`.
fn assign_modes(
    gens: &[(usize, usize, &crate::algebra::GenOcc)],
    gen_vars: &[usize],
    need: &[i64],
    bound: i64,
    nlegs: usize,
    coef: &RatExpr,
    out: &mut ModeSum,
) {
    for (v, &nv) in need.iter().enumerate() {
        if nv != 0 && !gen_vars.contains(&v) {
            return;
        }
    }
    let last_of: Vec<Option<usize>> = (0..need.len()).map(|v| gen_vars.iter().rposition(|x| *x == v)).collect();
    let mut ns = vec![0i64; gens.len()];
    let free: Vec<usize> = (0..gens.len()).filter(|&g| last_of[gen_vars[g]] != Some(g)).collect();
    for &g in &free {
        ns[g] = -bound;
    }
    loop {
        let mut sums = vec![0i64; need.len()];
        for &g in &free {
            sums[gen_vars[g]] += ns[g];
        }
        for (v, last) in last_of.iter().enumerate() {
            if let Some(l) = last {
                ns[*l] = need[v] - sums[v];
            }
        }
        let mut c = coef.clone();
        let mut legs: ModeMonom = vec![Vec::new(); nlegs];
        for (g, (t, _, occ)) in gens.iter().enumerate() {
            c = c.mul_monomial(&occ.arg.shift.monomial().pow(-(ns[g] as i32)));
            legs[*t].push(ModeGen { kind: occ.kind, i: occ.i, j: occ.j, n: ns[g] });
        }
        out.add_term(c, legs);
        let mut t = 0;
        loop {
            if t == free.len() {
                return;
            }
            ns[free[t]] += 1;
            if ns[free[t]] <= bound {
                break;
            }
            ns[free[t]] = -bound;
            t += 1;
        }
    }
}

/// A mode relation: the coefficient of `z1^{-m} z2^{-k}` in one cleared
/// component of a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeRelation {
    pub component: usize,
    pub m: i64,
    pub k: i64,
    pub sum: ModeSum,
}

/// The cleared components of a relation.
pub fn cleared_components(id: RelationId, rs: &RewriteSystem) -> Result<Vec<Element>> {
    relation_components(id, rs.rmatrix(), rs.toggles())?.iter().map(clear_element).collect()
}

/// All nonzero mode relations of `id` with `|m|, |k| <= N - margin`.
pub fn mode_expand_relation(id: RelationId, rs: &RewriteSystem, window: &SeriesWindow) -> Result<Vec<ModeRelation>> {
    let vars = [Var::z(1), Var::z(2)];
    let mut out = Vec::new();
    for (ci, comp) in cleared_components(id, rs)?.iter().enumerate() {
        for m in window.range() {
            for k in window.range() {
                let sum = mode_coefficient(comp, &vars, &[m, k], window.n)?;
                if !sum.is_zero() {
                    out.push(ModeRelation { component: ci, m, k, sum });
                }
            }
        }
    }
    Ok(out)
}

/// Brute-force truncated re-summation: every current is cut to
/// `|n| <= bound`, every delta to `|p| <= bound`, and the products are
/// multiplied out. Returns the coefficient of `prod_v v^{-target_v}` for
/// every target that occurs.
pub fn resum_truncated(e: &Element, vars: &[Var], bound: i64) -> Result<BTreeMap<Vec<i64>, ModeSum>> {
    let mut out: BTreeMap<Vec<i64>, ModeSum> = BTreeMap::new();
    for (m, c) in e.terms() {
        // partial products: (spectral exponent vector, coefficient, legs)
        let mut acc: Vec<(Vec<i64>, RatExpr, ModeMonom)> = Vec::new();
        for (mono, k) in c.num().terms() {
            let (alpha, rest) = split_monomial(mono, vars)?;
            let coef = RatExpr::monomial(rest).mul(&RatExpr::from_poly(LaurentPoly::constant(k.clone())));
            acc.push((alpha, coef, vec![Vec::new(); m.legs.len()]));
        }
        for d in &m.deltas {
            let (a, b) = (vars.iter().position(|x| *x == d.a), vars.iter().position(|x| *x == d.b));
            let (Some(a), Some(b)) = (a, b) else { return Err(Error::Expansion("delta variable missing from target".into())) };
            let mut next = Vec::new();
            for (ex, cf, legs) in &acc {
                for p in -bound..=bound {
                    let mut ex = ex.clone();
                    ex[a] += p;
                    ex[b] -= p;
                    next.push((ex, cf.mul_monomial(&d.shift.monomial().pow(p as i32)), legs.clone()));
                }
            }
            acc = next;
        }
        for (t, w) in m.legs.iter().enumerate() {
            for g in w {
                let v = vars.iter().position(|x| *x == g.arg.var).ok_or_else(|| Error::Expansion("generator variable missing".into()))?;
                let mut next = Vec::new();
                for (ex, cf, legs) in &acc {
                    for n in -bound..=bound {
                        let mut ex = ex.clone();
                        ex[v] -= n;
                        let mut legs = legs.clone();
                        legs[t].push(ModeGen { kind: g.kind, i: g.i, j: g.j, n });
                        next.push((ex, cf.mul_monomial(&g.arg.shift.monomial().pow(-(n as i32))), legs));
                    }
                }
                acc = next;
            }
        }
        for (ex, cf, legs) in acc {
            let target: Vec<i64> = ex.iter().map(|x| -x).collect();
            out.entry(target).or_default().add_term(cf, legs);
        }
    }
    Ok(out)
}
