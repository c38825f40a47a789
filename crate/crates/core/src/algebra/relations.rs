//! The defining exchange relations, as factor lists for rule derivation and
//! as component elements for soundness and homomorphism checks.
//!
//! In every relation generators in auxiliary space 1 carry `x1`, those in
//! space 2 carry `x2`, `X` stands for `x1/x2` and `U` for `q^{c/2}`.

use std::fmt;

use super::derive::{gen, r_factor, r_inv_factor, Ph, Relation, TGen, RATIO};
use super::element::{Element, Monom};
use super::gen::{ArgShift, DeltaFactor, GenKind, GenOcc, LinForm};
use super::rules::{kappa, DeltaAssignment, Flavor, Reading, Toggles};
use crate::error::{Error, Result};
use crate::rmatrix::RMatrix;
use crate::symfield::{Monomial, RatExpr, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationId {
    PhiPhi,
    PhiL,
    LL,
    LstarLstar,
    LLstar,
    PhiStarPhiStar,
    LstarPhiStar,
    PhiPhiStar,
    LPhiStar,
    LstarPhi,
}

impl RelationId {
    pub const ALL: [RelationId; 10] = [
        RelationId::PhiPhi,
        RelationId::PhiL,
        RelationId::LL,
        RelationId::LstarLstar,
        RelationId::LLstar,
        RelationId::PhiStarPhiStar,
        RelationId::LstarPhiStar,
        RelationId::PhiPhiStar,
        RelationId::LPhiStar,
        RelationId::LstarPhi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationId::PhiPhi => "PhiPhi",
            RelationId::PhiL => "PhiL",
            RelationId::LL => "LL",
            RelationId::LstarLstar => "LstarLstar",
            RelationId::LLstar => "LLstar",
            RelationId::PhiStarPhiStar => "PhiStarPhiStar",
            RelationId::LstarPhiStar => "LstarPhiStar",
            RelationId::PhiPhiStar => "PhiPhiStar",
            RelationId::LPhiStar => "LPhiStar",
            RelationId::LstarPhi => "LstarPhi",
        }
    }

    pub fn from_name(s: &str) -> Option<RelationId> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }

    /// The smallest flavor containing the relation.
    pub fn flavor(self) -> Flavor {
        match self {
            RelationId::PhiPhi => Flavor::P,
            RelationId::PhiL | RelationId::LL => Flavor::EP,
            _ => Flavor::DEP,
        }
    }

    /// The relations of a flavor.
    pub fn of_flavor(f: Flavor) -> Vec<RelationId> {
        Self::ALL.into_iter().filter(|r| r.flavor() <= f).collect()
    }

    /// The relation exchanging two (non-inverse) generator families.
    pub fn for_kinds(a: GenKind, b: GenKind) -> RelationId {
        use GenKind::*;
        let (a, b) = if a.group() <= b.group() { (a.base(), b.base()) } else { (b.base(), a.base()) };
        match (a, b) {
            (Lstar, Lstar) => RelationId::LstarLstar,
            (Lstar, L) => RelationId::LLstar,
            (Lstar, PhiStar) => RelationId::LstarPhiStar,
            (Lstar, Phi) => RelationId::LstarPhi,
            (L, L) => RelationId::LL,
            (L, PhiStar) => RelationId::LPhiStar,
            (L, Phi) => RelationId::PhiL,
            (PhiStar, PhiStar) => RelationId::PhiStarPhiStar,
            (PhiStar, Phi) => RelationId::PhiPhiStar,
            (Phi, Phi) => RelationId::PhiPhi,
            _ => unreachable!("pairs are sorted by group"),
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn x() -> Monomial {
    Monomial::var(RATIO)
}

fn u() -> Monomial {
    Monomial::var(Var::u(1))
}

/// The factor form of a relation. The `PhiPhiStar` relation has delta terms
/// and is handled separately by the rewrite system.
pub fn base_relation(id: RelationId, rm: &RMatrix, toggles: &Toggles) -> Result<Relation> {
    use GenKind::*;
    use Ph::*;
    let r = |m: Monomial| r_factor(rm, &m, false);
    let r21 = |m: Monomial| r_factor(rm, &m, true);
    Ok(match id {
        RelationId::PhiPhi => Relation {
            lhs: vec![r(x())?, gen(Phi, 0, X1), gen(Phi, 1, X2)],
            rhs: vec![gen(Phi, 1, X2), gen(Phi, 0, X1)],
        },
        RelationId::PhiL => Relation {
            lhs: vec![gen(Phi, 0, X1), gen(L, 1, X2)],
            rhs: vec![r_inv_factor(rm, &u().mul(&x()), false)?, gen(L, 1, X2), gen(Phi, 0, X1)],
        },
        RelationId::LL | RelationId::LstarLstar => {
            let k = if id == RelationId::LL { L } else { Lstar };
            Relation { lhs: vec![r(x())?, gen(k, 0, X1), gen(k, 1, X2)], rhs: vec![gen(k, 1, X2), gen(k, 0, X1), r(x())?] }
        }
        RelationId::LLstar => {
            let right_first = match toggles.l_lstar {
                Reading::Corrected => L,
                Reading::Literal => Lstar,
            };
            Relation {
                lhs: vec![r(x().mul(&u().pow(-2)))?, gen(L, 0, X1), gen(Lstar, 1, X2)],
                rhs: vec![gen(Lstar, 1, X2), gen(right_first, 0, X1), r(x().mul(&u().pow(2)))?],
            }
        }
        RelationId::PhiStarPhiStar => Relation {
            lhs: vec![gen(PhiStar, 1, X2), gen(PhiStar, 0, X1)],
            rhs: vec![gen(PhiStar, 0, X1), gen(PhiStar, 1, X2), r21(x().inv())?],
        },
        RelationId::LstarPhiStar => Relation {
            lhs: vec![gen(Lstar, 1, X2), gen(PhiStar, 0, X1)],
            rhs: vec![gen(PhiStar, 0, X1), gen(Lstar, 1, X2), r21(u().mul(&x()).inv())?],
        },
        RelationId::LPhiStar => Relation {
            lhs: vec![gen(L, 0, X1), gen(PhiStar, 1, X2), r21(u().mul(&x()).inv())?],
            rhs: vec![gen(PhiStar, 1, X2), gen(L, 0, X1)],
        },
        RelationId::LstarPhi => Relation {
            lhs: vec![r(u().mul(&x()))?, gen(Lstar, 0, X1), gen(Phi, 1, X2)],
            rhs: vec![gen(Phi, 1, X2), gen(Lstar, 0, X1)],
        },
        RelationId::PhiPhiStar => {
            return Err(Error::UnsupportedRule("PhiPhiStar has delta terms; no factor form".into()));
        }
    })
}

/// The two spectral variables a relation is instantiated at.
pub fn rel_vars() -> [Var; 2] {
    [Var::z(1), Var::z(2)]
}

fn tgen_to_occ(g: &TGen) -> GenOcc {
    let var = match g.ph {
        Ph::X1 => rel_vars()[0],
        Ph::X2 => rel_vars()[1],
    };
    GenOcc { kind: g.kind, i: g.i, j: g.j, arg: ArgShift { var, shift: g.shift } }
}

/// The components `lhs - rhs` of a relation as one-leg elements in `z1`,
/// `z2` and the leg charge `c1`.
pub fn relation_components(id: RelationId, rm: &RMatrix, toggles: &Toggles) -> Result<Vec<Element>> {
    if id == RelationId::PhiPhiStar {
        return phi_phistar_components(rm.n(), toggles);
    }
    let rel = base_relation(id, rm, toggles)?;
    let ratio = Monomial::var(rel_vars()[0]).div(&Monomial::var(rel_vars()[1]));
    let mut out = Vec::new();
    for eq in rel.equations(rm.n())? {
        let mut e = Element::zero(1);
        for (w, c) in eq {
            let c = c.substitute_monomials(&[(RATIO, ratio)])?;
            e.add_term(c, Monom::word(w.iter().map(tgen_to_occ).collect()));
        }
        out.push(e);
    }
    Ok(out)
}

/// `Phi_i(z1) PhiStar_j(z2) - PhiStar_j(z2) Phi_i(z1) - (delta terms)`.
fn phi_phistar_components(n: usize, toggles: &Toggles) -> Result<Vec<Element>> {
    let (z, w) = (ArgShift::plain(rel_vars()[0]), ArgShift::plain(rel_vars()[1]));
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let phi = GenOcc::vector(GenKind::Phi, i, z);
            let phistar = GenOcc::vector(GenKind::PhiStar, j, w);
            let mut e = Element::word(RatExpr::one(), vec![phi, phistar]);
            e.add_term(RatExpr::int(-1), Monom::word(vec![phistar, phi]));
            for (c, d, g) in delta_terms(&phi, &phistar, 1, toggles) {
                e.add_term(c.neg(), Monom { deltas: vec![d], legs: vec![vec![g]], flagged: false });
            }
            out.push(e);
        }
    }
    Ok(out)
}

/// The delta terms of `[Phi_i(z), PhiStar_j(w)]` in leg `leg`.
pub fn delta_terms(phi: &GenOcc, phistar: &GenOcc, leg: usize, toggles: &Toggles) -> Vec<(RatExpr, DeltaFactor, GenOcc)> {
    use GenKind::*;
    let (first, second) = match toggles.phi_phistar {
        DeltaAssignment::Corrected => (Lstar, L),
        DeltaAssignment::Swapped => (L, Lstar),
        DeltaAssignment::Literal => (Lstar, Lstar),
    };
    let (z, w) = (phi.arg, phistar.arg);
    let c = LinForm::charge_halves(leg, 2);
    let half = LinForm::charge_halves(leg, 1);
    let base = z.shift.sub(&w.shift);
    let k = kappa();
    vec![
        (
            k.clone(),
            DeltaFactor::new(z.var, w.var, base.sub(&c)),
            GenOcc::matrix(first, phi.i as usize, phistar.i as usize, w.shifted(&half)),
        ),
        (k.neg(), DeltaFactor::new(z.var, w.var, base.add(&c)), GenOcc::matrix(second, phi.i as usize, phistar.i as usize, z.shifted(&half))),
    ]
}
