//! Spec-file ingestion and the verification plans behind the `rhopf`
//! binary.

use std::thread;

use crate::algebra::{
    braid_consistency, parse_element, reduce, relation_components, Element, Flavor, RelationId, RewriteSystem, Toggles,
};
use crate::error::{Error, Result};
use crate::hopf::{check_axioms, check_hom_on_relation, HopfTables};
use crate::modes::{check_mode_consistency, cleared_components, drinfeld_compare, SeriesWindow};
use crate::parse::parse_at;
use crate::report::{CheckResult, VerificationReport};
use crate::rmatrix::{instances, RMatrix, YbeConvention};
use crate::symfield::{RatExpr, Var};

/// A parsed R-matrix spec file.
#[derive(Clone, Debug)]
pub struct RSpec {
    pub name: Option<String>,
    pub rmatrix: RMatrix,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Parses `R[i,j;k,l]` (1-based) starting at `s`, which begins with `R[`.
fn parse_entry_index(s: &str, line: usize, col: usize) -> Result<([usize; 4], usize)> {
    let close = s.find(']').ok_or_else(|| perr(line, col, "missing ']'"))?;
    let inner = &s[2..close];
    let (a, b) = inner.split_once(';').ok_or_else(|| perr(line, col + 2, "expected 'i,j;k,l'"))?;
    let mut idx = [0usize; 4];
    let parts: Vec<&str> = a.split(',').chain(b.split(',')).collect();
    if parts.len() != 4 {
        return Err(perr(line, col + 2, "expected four indices 'i,j;k,l'"));
    }
    for (slot, p) in parts.iter().enumerate() {
        idx[slot] = p.trim().parse().map_err(|_| perr(line, col + 2, format!("bad index '{}'", p.trim())))?;
    }
    Ok((idx, close + 1))
}

/// Reads `n=<int>; var=<ident>; [name=<ident>;]` followed by lines
/// `R[i,j;k,l] = <expr>` with 1-based indices. Unassigned entries are zero;
/// `#` starts a comment.
pub fn parse_rspec(text: &str) -> Result<RSpec> {
    let mut n: Option<usize> = None;
    let mut var: Option<Var> = None;
    let mut name = None;
    let mut assigned: Vec<Option<RatExpr>> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut pos = 0;
        while pos < body.len() {
            let rest = &body[pos..];
            let trimmed = rest.trim_start();
            if trimmed.is_empty() {
                break;
            }
            pos += rest.len() - trimmed.len();
            let col = pos + 1;
            if trimmed.starts_with("R[") {
                let dim = n.ok_or_else(|| perr(line, col, "'n=' must precede the entries"))?;
                if var.is_none() {
                    return Err(perr(line, col, "'var=' must precede the entries"));
                }
                let ([i, j, k, l], used) = parse_entry_index(trimmed, line, col)?;
                if [i, j, k, l].iter().any(|&x| x == 0 || x > dim) {
                    return Err(Error::Index(format!("line {line}: entry R[{i},{j};{k},{l}] outside 1..={dim}")));
                }
                let after = &trimmed[used..];
                let eq = after.find('=').ok_or_else(|| perr(line, col + used, "expected '='"))?;
                if !after[..eq].trim().is_empty() {
                    return Err(perr(line, col + used, "expected '='"));
                }
                let expr_text = after[eq + 1..].trim_end().trim_end_matches(';');
                let expr_col = col + used + eq + 1;
                let value = parse_at(expr_text, line, expr_col)?.to_rat().map_err(|e| match e {
                    Error::Parse { line: 0, msg, .. } => perr(line, expr_col, msg),
                    other => other,
                })?;
                let slot = ((i - 1) * dim + (j - 1)) * dim * dim + (k - 1) * dim + (l - 1);
                if assigned[slot].replace(value).is_some() {
                    return Err(perr(line, col, format!("entry R[{i},{j};{k},{l}] assigned twice")));
                }
                break;
            }
            let stmt_end = trimmed.find(';').unwrap_or(trimmed.len());
            let stmt = &trimmed[..stmt_end];
            let (key, value) = stmt.split_once('=').ok_or_else(|| perr(line, col, format!("expected 'key=value', got '{}'", stmt.trim())))?;
            let value = value.trim();
            match key.trim() {
                "n" => {
                    let d: usize = value.parse().map_err(|_| perr(line, col, format!("bad dimension '{value}'")))?;
                    if d == 0 || d > 9 {
                        return Err(perr(line, col, format!("dimension {d} outside 1..=9")));
                    }
                    n = Some(d);
                    assigned = vec![None; d.pow(4)];
                }
                "var" => var = Some(Var::from_name(value).ok_or_else(|| perr(line, col, format!("unknown variable '{value}'")))?),
                "name" => name = Some(value.to_string()),
                other => return Err(perr(line, col, format!("unknown setting '{other}'"))),
            }
            pos += stmt_end + 1;
        }
    }
    let n = n.ok_or_else(|| perr(1, 1, "missing 'n='"))?;
    let var = var.ok_or_else(|| perr(1, 1, "missing 'var='"))?;
    let entries = assigned.into_iter().map(|e| e.unwrap_or_else(RatExpr::zero)).collect();
    Ok(RSpec { name, rmatrix: RMatrix::new(n, var, entries)? })
}

/// What a run does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckR,
    VerifyHopf,
    VerifyModes,
    NormalOrder,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckR => "check-r",
            Command::VerifyHopf => "verify-hopf",
            Command::VerifyModes => "verify-modes",
            Command::NormalOrder => "normal-order",
        }
    }
}

/// A fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct Plan {
    pub command: Command,
    pub instance: String,
    pub rmatrix: RMatrix,
    pub flavor: Flavor,
    pub toggles: Toggles,
    pub window: i64,
    pub margin: Option<i64>,
    pub triangular: bool,
    pub expr: Option<String>,
}

impl Plan {
    /// A plan on a built-in instance with default settings.
    pub fn builtin(command: Command, instance: &str) -> Result<Plan> {
        Ok(Plan {
            command,
            instance: instance.to_string(),
            rmatrix: instances::by_name(instance)?,
            flavor: Flavor::DEP,
            toggles: Toggles::default(),
            window: 5,
            margin: None,
            triangular: true,
            expr: None,
        })
    }
}

fn check_r(plan: &Plan, rep: &mut VerificationReport) {
    let rm = &plan.rmatrix;
    for (conv, label) in [(YbeConvention::Product, "ybe (z, zw, w)"), (YbeConvention::Quotient, "ybe (z, z/w, w)")] {
        let c = match rm.ybe_residual(conv) {
            Ok(m) => CheckResult::new(label, m.is_zero()).with_note(format!("{} nonzero entries", m.nonzero_count())),
            Err(e) => CheckResult::from_error(label, &e),
        };
        rep.push(if conv == plan.toggles.ybe { c } else { c.info() });
    }
    rep.push(match rm.unitarity_residual() {
        Ok(m) => CheckResult::new("unitarity", m.is_zero()).with_note(format!("{} nonzero entries", m.nonzero_count())),
        Err(e) => CheckResult::from_error("unitarity", &e),
    });
    let det = rm.determinant();
    rep.push(CheckResult::new("invertible", !det.is_zero()));
    rep.push(match rm.clear_poles() {
        Ok(c) => CheckResult::new("clear poles", true).with_note(format!("f = {}", c.f)),
        Err(e) => CheckResult::from_error("clear poles", &e),
    });
    if plan.instance == "example2-n3" {
        rep.push(CheckResult::new("example 2 completion", true).info().with_note("entries with |i-j| >= 2 set to 1"));
    }
}

/// Runs independent checks on scoped threads; results keep input order.
fn parallel<T: Sync, F: Fn(&T) -> CheckResult + Sync>(items: &[T], f: F) -> Vec<CheckResult> {
    thread::scope(|s| {
        let handles: Vec<_> = items.iter().map(|it| s.spawn(|| f(it))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    })
}

fn self_normalization(id: RelationId, rs: &RewriteSystem) -> CheckResult {
    let name = format!("{id} normalizes to zero");
    let res = relation_components(id, rs.rmatrix(), rs.toggles()).and_then(|cs| {
        let mut total = Element::zero(1);
        for c in cs {
            total = total.add(&reduce(&c, rs)?)?;
        }
        Ok(total)
    });
    match res {
        Ok(r) => CheckResult::from_residual(name, &r),
        Err(e) => CheckResult::from_error(name, &e),
    }
}

fn verify_hopf(plan: &Plan, rs: &RewriteSystem, rep: &mut VerificationReport) {
    rep.push(match braid_consistency(rs) {
        Ok(b) => {
            let c = CheckResult::new("braid consistency", b.agree);
            let c = CheckResult { residual_terms: Some(b.residual_terms), ..c };
            match b.sample {
                Some(s) => c.with_residual_text(s),
                None => c,
            }
        }
        Err(e) => CheckResult::from_error("braid consistency", &e),
    });
    let ids: Vec<RelationId> = RelationId::ALL.into_iter().filter(|id| id.flavor() <= plan.flavor).collect();
    rep.extend(parallel(&ids, |id| self_normalization(*id, rs)));
    if plan.flavor == Flavor::P {
        rep.push(CheckResult::skipped("hopf structure", "P carries no coproduct"));
        return;
    }
    let tables = HopfTables::new(rs);
    rep.extend(parallel(&ids, |id| check_hom_on_relation(*id, rs, &tables)));
    rep.extend(check_axioms(rs, &tables));
}

fn verify_modes(plan: &Plan, rs: &RewriteSystem, rep: &mut VerificationReport) -> Result<()> {
    let window = match plan.margin {
        Some(m) => SeriesWindow::new(plan.window, m)?,
        None => {
            let mut comps = Vec::new();
            for id in RelationId::of_flavor(plan.flavor) {
                comps.extend(cleared_components(id, rs)?);
            }
            SeriesWindow::with_default_margin(plan.window, &comps)?
        }
    };
    let checks = check_mode_consistency(rs, &window, plan.triangular);
    rep.push(CheckResult::new("mode window", true).info().with_note(format!("N = {}, margin = {}", window.n, window.margin)));
    rep.extend(checks);
    if plan.instance == "example1" {
        rep.push(drinfeld_compare(&plan.rmatrix, &window));
    } else {
        rep.push(CheckResult::skipped("drinfeld comparison", "only defined for example1"));
    }
    Ok(())
}

fn normal_order(plan: &Plan, rs: &RewriteSystem, rep: &mut VerificationReport) -> Result<Element> {
    let text = plan.expr.as_deref().ok_or_else(|| Error::Domain("normal-order needs an expression".into()))?;
    let e = parse_element(text)?;
    for (m, _) in e.terms() {
        for g in m.legs.iter().flatten() {
            rs.check_gen(g)?;
        }
    }
    let r = reduce(&e, rs)?;
    rep.push(CheckResult::new("normal form", !r.has_flagged()).with_note(r.to_string()));
    Ok(r)
}

/// Executes a plan. Errors are configuration or input errors; failed checks
/// are recorded in the report.
pub fn run_plan(plan: &Plan) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(plan.command.name(), &plan.instance, &plan.toggles);
    if plan.command == Command::CheckR {
        check_r(plan, &mut rep);
        return Ok(rep);
    }
    let rs = RewriteSystem::new(plan.rmatrix.clone(), plan.flavor, plan.toggles)?;
    match plan.command {
        Command::VerifyHopf => verify_hopf(plan, &rs, &mut rep),
        Command::VerifyModes => verify_modes(plan, &rs, &mut rep)?,
        Command::NormalOrder => {
            normal_order(plan, &rs, &mut rep)?;
        }
        Command::CheckR => unreachable!(),
    }
    Ok(rep)
}
