//! Self-consistency of the mode relations: exact extraction against
//! brute-force series multiplication, critical pairs of the rewrite
//! system, and triangularity.

use super::{clear_element, cleared_components, mode_coefficient, resum_truncated, spectral_vars, ModeSum, SeriesWindow};
use crate::algebra::{
    delta_normalize, normal_order_traced, ArgShift, Element, GenKind, GenOcc, RelationId, RewriteSystem, Strategy,
};
use crate::error::{Error, Result};
use crate::report::CheckResult;
use crate::symfield::{RatExpr, Var};

fn reduce_with(e: &Element, rs: &RewriteSystem, strategy: Strategy) -> Result<Element> {
    let mut cur = delta_normalize(e);
    for _ in 0..64 {
        let next = delta_normalize(&normal_order_traced(&cur, rs, strategy, &mut |_, _| {})?);
        if next == cur {
            return Ok(next);
        }
        cur = next;
    }
    Err(Error::Expansion("normal ordering and delta normalization did not stabilize".into()))
}

/// Index choices for the three letters of a critical word.
fn index_patterns(n: usize) -> Vec<[(usize, usize); 3]> {
    let count = (n * n).min(4);
    (0..count).map(|p| std::array::from_fn(|t| ((p + t) % n, (p / n + 2 * t + 1) % n))).collect()
}

/// Overlaps `g1(z3) g2(z2) g3(z1)` with nonincreasing kind groups, so both
/// adjacent pairs are out of order, reduced leftmost-first and
/// rightmost-first. Returns the nonzero differences with their words.
pub fn critical_pair_residuals(rs: &RewriteSystem) -> Result<Vec<(String, Element)>> {
    let kinds: Vec<GenKind> = rs.flavor().kinds().into_iter().filter(|k| !k.is_inverse()).collect();
    let mut out = Vec::new();
    for &k1 in &kinds {
        for &k2 in kinds.iter().filter(|k| k.group() <= k1.group()) {
            for &k3 in kinds.iter().filter(|k| k.group() <= k2.group()) {
                for idx in index_patterns(rs.n()) {
                    let word: Vec<GenOcc> = [k1, k2, k3]
                        .iter()
                        .zip(idx)
                        .zip([3, 2, 1])
                        .map(|((&k, (i, j)), z)| GenOcc { kind: k, i: i as u8, j: if k.is_matrix() { j as u8 } else { 0 }, arg: ArgShift::plain(Var::z(z)) })
                        .collect();
                    let e = Element::word(RatExpr::one(), word.clone());
                    let left = reduce_with(&e, rs, Strategy::Leftmost)?;
                    let right = reduce_with(&e, rs, Strategy::Rightmost)?;
                    let r = left.sub(&right)?;
                    if !r.is_zero() {
                        let name = word.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ");
                        out.push((name, r));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// First nonzero mode coefficient of a cleared element in the window.
fn first_nonzero_mode(e: &Element, window: &SeriesWindow, triangular: bool) -> Result<Option<(Vec<i64>, ModeSum)>> {
    let vars = spectral_vars(e);
    let r: Vec<i64> = window.range().collect();
    let mut target = vec![-window.inner(); vars.len()];
    loop {
        let mut s = mode_coefficient(e, &vars, &target, window.n)?;
        if triangular {
            s = s.triangular();
        }
        if !s.is_zero() {
            return Ok(Some((target, s)));
        }
        let mut t = 0;
        loop {
            if t == target.len() {
                return Ok(None);
            }
            target[t] += 1;
            if target[t] <= *r.last().expect("window is nonempty") {
                break;
            }
            target[t] = r[0];
            t += 1;
        }
    }
}

/// Exact mode extraction agrees with brute-force multiplication of
/// truncated series, for every relation component and every target in the
/// guard band.
fn truncation_check(rs: &RewriteSystem, window: &SeriesWindow) -> Result<CheckResult> {
    let vars = [Var::z(1), Var::z(2)];
    let mut compared = 0usize;
    for id in RelationId::of_flavor(rs.flavor()) {
        for comp in cleared_components(id, rs)? {
            let deg = super::max_spectral_degree(&comp);
            let brute = resum_truncated(&comp, &vars, 2 * window.n + deg + 1)?;
            for m in window.range() {
                for k in window.range() {
                    let exact = mode_coefficient(&comp, &vars, &[m, k], window.n)?;
                    let other = brute.get(&vec![m, k]).cloned().unwrap_or_default();
                    if exact != other {
                        let diff = exact.sub(&other);
                        return Ok(CheckResult::new("mode truncation", false)
                            .with_note(format!("{} at (m,k)=({m},{k})", id.name()))
                            .with_residual_text(diff.to_string()));
                    }
                    compared += 1;
                }
            }
        }
    }
    Ok(CheckResult::new("mode truncation", true).with_note(format!("{compared} mode relations compared")))
}

fn critical_pair_check(rs: &RewriteSystem, window: &SeriesWindow, triangular: bool) -> Result<CheckResult> {
    let residuals = critical_pair_residuals(rs)?;
    let mut nonzero = 0usize;
    let mut sample = None;
    for (word, r) in &residuals {
        if r.has_flagged() {
            nonzero += 1;
            sample.get_or_insert_with(|| format!("{word}: unresolved delta terms"));
            continue;
        }
        if let Some((target, s)) = first_nonzero_mode(&clear_element(r)?, window, triangular)? {
            nonzero += 1;
            sample.get_or_insert_with(|| format!("{word} at modes {target:?}: {s}"));
        }
    }
    let c = CheckResult::new("mode critical pairs", nonzero == 0);
    Ok(match sample {
        Some(t) => c.with_note(format!("{nonzero} critical words disagree in modes")).with_residual_text(t),
        None => c,
    })
}

/// A relation that, after imposing triangularity, reads `c * w = 0` with
/// `w` a product of invertible zero modes is a contradiction.
fn triangular_check(rs: &RewriteSystem, window: &SeriesWindow) -> Result<CheckResult> {
    let vars = [Var::z(1), Var::z(2)];
    for id in RelationId::of_flavor(rs.flavor()) {
        for comp in cleared_components(id, rs)? {
            for m in window.range() {
                for k in window.range() {
                    let s = mode_coefficient(&comp, &vars, &[m, k], window.n)?.triangular();
                    if s.len() == 1 {
                        let (w, _) = s.terms.iter().next().expect("one term");
                        if w.iter().flatten().all(|g| g.is_unit()) {
                            return Ok(CheckResult::new("mode triangularity", false)
                                .with_note(format!("{} at (m,k)=({m},{k}) forces an invertible word to vanish", id.name()))
                                .with_residual_text(s.to_string()));
                        }
                    }
                }
            }
        }
    }
    Ok(CheckResult::new("mode triangularity", true))
}

/// Mode-level checks for the flavor of `rs`.
pub fn check_mode_consistency(rs: &RewriteSystem, window: &SeriesWindow, triangular: bool) -> Vec<CheckResult> {
    let mut out = vec![
        truncation_check(rs, window).unwrap_or_else(|e| CheckResult::from_error("mode truncation", &e)),
        critical_pair_check(rs, window, triangular).unwrap_or_else(|e| CheckResult::from_error("mode critical pairs", &e)),
    ];
    if triangular {
        out.push(triangular_check(rs, window).unwrap_or_else(|e| CheckResult::from_error("mode triangularity", &e)));
    }
    out
}
