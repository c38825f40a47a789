//! Comparison of the scalar instance's mode relations with the Drinfeld
//! current relations of `U_q(sl2-hat)`, stored as data.

use super::{cleared_components, mode_coefficient, ModeGen, ModeSum, SeriesWindow};
use crate::algebra::{Flavor, GenKind, RelationId, RewriteSystem, Toggles};
use crate::error::{Error, Result};
use crate::parse::parse_rat;
use crate::report::CheckResult;
use crate::rmatrix::RMatrix;
use crate::symfield::{RatExpr, Var};

/// The reference relation file.
pub const REFERENCE_DRINFELD: &str = include_str!("../../data/drinfeld_sl2.rel");

/// A mode index `a*m + b*k + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Affine(i64, i64, i64);

impl Affine {
    fn at(&self, m: i64, k: i64) -> i64 {
        self.0 * m + self.1 * k + self.2
    }
}

/// A relation `sum c * w = 0` among modes with indices affine in `m, k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefRelation {
    pub text: String,
    terms: Vec<(RatExpr, Vec<(GenKind, Affine)>)>,
}

impl RefRelation {
    /// The relation at a given `(m, k)`, as a one-leg mode sum.
    pub fn instantiate(&self, m: i64, k: i64) -> ModeSum {
        let mut s = ModeSum::default();
        for (c, w) in &self.terms {
            let word = w.iter().map(|(kind, a)| ModeGen { kind: *kind, i: 0, j: 0, n: a.at(m, k) }).collect();
            s.add_term(c.clone(), vec![word]);
        }
        s
    }

    /// The generator kind of the relation's first mode.
    pub fn kind(&self) -> Option<GenKind> {
        self.terms.first().and_then(|(_, w)| w.first()).map(|(k, _)| *k)
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col: 1, msg: msg.into() }
}

fn parse_affine(s: &str, line: usize) -> Result<Affine> {
    let mut a = Affine(0, 0, 0);
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let b = s.as_bytes();
    while i < b.len() {
        let sign = match b[i] {
            b'-' => {
                i += 1;
                -1
            }
            b'+' => {
                i += 1;
                1
            }
            _ => 1,
        };
        let start = i;
        while i < b.len() && b[i] != b'+' && b[i] != b'-' {
            i += 1;
        }
        match &s[start..i] {
            "m" => a.0 += sign,
            "k" => a.1 += sign,
            t => a.2 += sign * t.parse::<i64>().map_err(|_| perr(line, format!("bad mode index `{s}`")))?,
        }
    }
    Ok(a)
}

fn split_terms(side: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev = ' ';
    for ch in side.chars() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            '+' | '-' if depth == 0 && !cur.trim().is_empty() && !matches!(prev, '^' | '*' | '/') => {
                out.push(std::mem::take(&mut cur));
            }
            _ => {}
        }
        cur.push(ch);
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn parse_term(t: &str, line: usize) -> Result<(RatExpr, Vec<(GenKind, Affine)>)> {
    let t = t.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let mut coef = Vec::new();
    let mut word = Vec::new();
    for f in body.split('*').map(str::trim) {
        if let Some((name, rest)) = f.split_once('[') {
            let kind = match name {
                "xp" => GenKind::Phi,
                "xm" => GenKind::PhiStar,
                _ => return Err(perr(line, format!("unknown current `{name}`"))),
            };
            let idx = rest.strip_suffix(']').ok_or_else(|| perr(line, format!("unclosed bracket in `{f}`")))?;
            word.push((kind, parse_affine(idx, line)?));
        } else {
            coef.push(f);
        }
    }
    let c = if coef.is_empty() { RatExpr::one() } else { parse_rat(&coef.join("*"))? };
    Ok((c.scale_int(sign), word))
}

/// Parses relation lines `lhs = rhs`; `#` starts a comment.
pub fn parse_reference(text: &str) -> Result<Vec<RefRelation>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (l, r) = line.split_once('=').ok_or_else(|| perr(ln + 1, "expected `lhs = rhs`"))?;
        let mut terms = Vec::new();
        for t in split_terms(l) {
            terms.push(parse_term(&t, ln + 1)?);
        }
        for t in split_terms(r) {
            let (c, w) = parse_term(&t, ln + 1)?;
            terms.push((c.neg(), w));
        }
        out.push(RefRelation { text: line.to_string(), terms });
    }
    Ok(out)
}

/// The built-in reference relations.
pub fn reference_relations() -> Vec<RefRelation> {
    parse_reference(REFERENCE_DRINFELD).expect("reference relation file parses")
}

fn compare(rm: &RMatrix, window: &SeriesWindow) -> Result<(bool, usize, Option<String>)> {
    if rm.n() != 1 {
        return Err(Error::Shape(format!("Drinfeld comparison needs a scalar R-matrix, got n = {}", rm.n())));
    }
    let rs = RewriteSystem::new(rm.clone(), Flavor::DEP, Toggles::default())?;
    let vars = [Var::z(1), Var::z(2)];
    let mut compared = 0;
    for (id, kind) in [(RelationId::PhiPhi, GenKind::Phi), (RelationId::PhiStarPhiStar, GenKind::PhiStar)] {
        let reference = reference_relations()
            .into_iter()
            .find(|r| r.kind() == Some(kind))
            .ok_or_else(|| Error::Domain(format!("no reference relation for {}", kind.name())))?;
        let comp = cleared_components(id, &rs)?.pop().ok_or_else(|| Error::Shape("relation has no components".into()))?;
        for m in window.range() {
            for k in window.range() {
                let ours = mode_coefficient(&comp, &vars, &[m, k], window.n)?;
                let theirs = reference.instantiate(m, k);
                if !ours.proportional(&theirs) {
                    let msg = format!("{} at (m,k)=({m},{k}): got {ours}, reference {theirs}", id.name());
                    return Ok((false, compared, Some(msg)));
                }
                compared += 1;
            }
        }
    }
    Ok((true, compared, None))
}

/// Checks coefficient by coefficient in the window that the cleared `Phi Phi`
/// and `Phi* Phi*` mode relations of `rm` are proportional to the reference
/// `x+` and `x-` relations.
pub fn drinfeld_compare(rm: &RMatrix, window: &SeriesWindow) -> CheckResult {
    const NAME: &str = "drinfeld comparison";
    match compare(rm, window) {
        Ok((true, n, _)) => CheckResult::new(NAME, true).with_note(format!("{n} mode relations match")),
        Ok((false, _, msg)) => CheckResult::new(NAME, false).with_residual_text(msg.unwrap_or_default()),
        Err(e) => CheckResult::from_error(NAME, &e),
    }
}
