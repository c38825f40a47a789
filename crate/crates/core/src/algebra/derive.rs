//! Derivation of rewrite rules from matrix relations.
//!
//! A relation is a product of factors on each side: coefficient matrices on
//! `V (x) V` and generator matrices placed in auxiliary space 1 or 2. Both
//! sides are multiplied out as tensors over the two auxiliary spaces whose
//! entries are linear combinations of two-letter words, which gives one
//! linear equation per component. Solving these for the out-of-order words
//! yields the rule. Relations for the formal inverses are obtained by
//! multiplying a relation by the inverse generator on both sides.
//!
//! Worked example (`n = 2`, relation `Phi(x1)_1 L(x2)_2 = S L(x2)_2 Phi(x1)_1`
//! with `S = R(q^{c/2} x1/x2)^{-1}`): the `(e_a, E_bl)` component of the left
//! side is `Phi_a L_bl`; on the right `S` acts on the row indices of space 1
//! (the `Phi` index) and space 2 (the `L` row index), giving
//! `sum_{i,k} S[a,b <- i,k] L_kl Phi_i`. For `a = 1, b = 2, l = 1` this reads
//! `Phi_1 L_21 = sum_{i,k} S[1,2 <- i,k] L_k1 Phi_i`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::gen::{GenKind, LinForm};
use crate::error::{Error, Result};
use crate::rmatrix::{Mat, RMatrix};
use crate::symfield::{Monomial, RatExpr, Var};

/// Which relation argument a template generator carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ph {
    X1,
    X2,
}

/// A template generator: argument `x_ph q^{shift}`, where slot 1 of the
/// shift is the charge of the leg the rule is applied in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TGen {
    pub kind: GenKind,
    pub i: u8,
    pub j: u8,
    pub ph: Ph,
    pub shift: LinForm,
}

pub type TWord = Vec<TGen>;
type Combo = BTreeMap<TWord, RatExpr>;

/// Placeholder for the ratio `x1/x2` in template coefficients.
pub const RATIO: Var = Var::X;

/// Placeholder for `q^{c/2}` of the leg in template coefficients.
pub fn own_charge() -> Var {
    Var::u(1)
}

#[derive(Clone, Debug)]
pub enum Factor {
    /// Operator on `V (x) V` in row `k*n + l`, column `i*n + j` layout.
    Coef(Mat),
    Gen { kind: GenKind, space: usize, ph: Ph },
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub lhs: Vec<Factor>,
    pub rhs: Vec<Factor>,
}

/// Coefficient factor `R(arg)`, or `R21(arg)` when `flip`.
pub fn r_factor(rm: &RMatrix, arg: &Monomial, flip: bool) -> Result<Factor> {
    let m = if flip { rm.flip().matrix_at(arg)? } else { rm.matrix_at(arg)? };
    Ok(Factor::Coef(m))
}

pub fn r_inv_factor(rm: &RMatrix, arg: &Monomial, flip: bool) -> Result<Factor> {
    match r_factor(rm, arg, flip)? {
        Factor::Coef(m) => Ok(Factor::Coef(m.inverse()?)),
        f => Ok(f),
    }
}

pub fn gen(kind: GenKind, space: usize, ph: Ph) -> Factor {
    Factor::Gen { kind, space, ph }
}

fn coef_product(fs: &[Factor], dim: usize) -> Mat {
    let mut m = Mat::identity(dim);
    for f in fs {
        if let Factor::Coef(c) = f {
            m = m.mul(c);
        }
    }
    m
}

fn gen_positions(side: &[Factor]) -> Vec<usize> {
    side.iter().enumerate().filter(|(_, f)| matches!(f, Factor::Gen { .. })).map(|(i, _)| i).collect()
}

impl Relation {
    fn swap_sides(self) -> Relation {
        Relation { lhs: self.rhs, rhs: self.lhs }
    }

    /// Replaces the generator with placeholder `ph` by its formal inverse.
    ///
    /// The generator must be last on one side and first on the other once
    /// outer coefficient factors are moved across; then both sides are
    /// multiplied by its inverse on the left and on the right.
    pub fn invert(self, ph: Ph, dim: usize) -> Result<Relation> {
        let pos_of = |side: &[Factor]| {
            side.iter().position(|f| matches!(f, Factor::Gen { ph: p, .. } if *p == ph))
        };
        let lp = pos_of(&self.lhs).ok_or_else(|| Error::UnsupportedRule("generator missing from relation".into()))?;
        let lgens = gen_positions(&self.lhs);
        if lgens.first() == Some(&lp) && lgens.last() != Some(&lp) {
            return self.swap_sides().invert(ph, dim).map(Relation::swap_sides);
        }
        if lgens.last() != Some(&lp) {
            return Err(Error::UnsupportedRule("generator is not at an end of the relation".into()));
        }
        let rp = pos_of(&self.rhs).ok_or_else(|| Error::UnsupportedRule("generator missing from right side".into()))?;
        if gen_positions(&self.rhs).first() != Some(&rp) {
            return Err(Error::UnsupportedRule("cannot isolate generator for inversion".into()));
        }
        let Relation { mut lhs, mut rhs } = self;
        // move trailing coefficients of the left side to the right
        let trailing: Vec<Factor> = lhs.drain(lp + 1..).collect();
        if !trailing.is_empty() {
            rhs.push(Factor::Coef(coef_product(&trailing, dim).inverse()?));
        }
        // move leading coefficients of the right side to the left
        let leading: Vec<Factor> = rhs.drain(..rp).collect();
        if !leading.is_empty() {
            lhs.insert(0, Factor::Coef(coef_product(&leading, dim).inverse()?));
        }
        let Factor::Gen { kind, space, .. } = lhs.pop().expect("generator present") else { unreachable!() };
        rhs.remove(0);
        let inv = kind.inverse().ok_or_else(|| Error::UnsupportedRule(format!("{} has no inverse", kind.name())))?;
        lhs.insert(0, gen(inv, space, ph));
        rhs.push(gen(inv, space, ph));
        Ok(Relation { lhs, rhs })
    }

    /// Component equations `lhs - rhs = 0`.
    pub fn equations(&self, n: usize) -> Result<Vec<Combo>> {
        let l = Aux::product(&self.lhs, n)?;
        let r = Aux::product(&self.rhs, n)?;
        if l.shapes != r.shapes {
            return Err(Error::Shape("relation sides have different index structure".into()));
        }
        Ok(l.data
            .into_iter()
            .zip(r.data)
            .map(|(mut a, b)| {
                for (w, c) in b {
                    add_to(&mut a, w, c.neg());
                }
                a
            })
            .filter(|c| !c.is_empty())
            .collect())
    }
}

fn add_to(c: &mut Combo, w: TWord, v: RatExpr) {
    if v.is_zero() {
        return;
    }
    match c.get_mut(&w) {
        Some(x) => {
            *x = x.add(&v);
            if x.is_zero() {
                c.remove(&w);
            }
        }
        None => {
            c.insert(w, v);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Absent,
    Dims(usize, usize),
}

impl Shape {
    fn rows(self) -> usize {
        match self {
            Shape::Absent => 1,
            Shape::Dims(r, _) => r,
        }
    }
    fn cols(self) -> usize {
        match self {
            Shape::Absent => 1,
            Shape::Dims(_, c) => c,
        }
    }
}

/// A tensor over the two auxiliary spaces with word-combination entries.
/// An absent space acts as the identity of whatever size it meets.
struct Aux {
    shapes: [Shape; 2],
    data: Vec<Combo>,
}

impl Aux {
    fn index(&self, r1: usize, c1: usize, r2: usize, c2: usize) -> usize {
        let [s1, s2] = self.shapes;
        ((r1 * s1.cols() + c1) * s2.rows() + r2) * s2.cols() + c2
    }

    fn get(&self, r1: usize, c1: usize, r2: usize, c2: usize) -> Option<&Combo> {
        let mut idx = [r1, c1, r2, c2];
        for s in 0..2 {
            if self.shapes[s] == Shape::Absent {
                if idx[2 * s] != idx[2 * s + 1] {
                    return None;
                }
                idx[2 * s] = 0;
                idx[2 * s + 1] = 0;
            }
        }
        Some(&self.data[self.index(idx[0], idx[1], idx[2], idx[3])])
    }

    fn new(shapes: [Shape; 2]) -> Aux {
        let size = shapes.iter().map(|s| s.rows() * s.cols()).product();
        Aux { shapes, data: vec![Combo::new(); size] }
    }

    fn unit() -> Aux {
        let mut a = Aux::new([Shape::Absent; 2]);
        a.data[0].insert(Vec::new(), RatExpr::one());
        a
    }

    fn from_factor(f: &Factor, n: usize) -> Aux {
        match f {
            Factor::Coef(m) => {
                let mut a = Aux::new([Shape::Dims(n, n); 2]);
                for k in 0..n {
                    for i in 0..n {
                        for l in 0..n {
                            for j in 0..n {
                                let v = m.get(k * n + l, i * n + j);
                                if !v.is_zero() {
                                    let idx = a.index(k, i, l, j);
                                    a.data[idx].insert(Vec::new(), v.clone());
                                }
                            }
                        }
                    }
                }
                a
            }
            Factor::Gen { kind, space, ph } => {
                let shape = match kind {
                    GenKind::Phi => Shape::Dims(n, 1),
                    GenKind::PhiStar => Shape::Dims(1, n),
                    _ => Shape::Dims(n, n),
                };
                let mut shapes = [Shape::Absent; 2];
                shapes[*space] = shape;
                let mut a = Aux::new(shapes);
                for r in 0..shape.rows() {
                    for c in 0..shape.cols() {
                        let (i, j) = match kind {
                            GenKind::Phi => (r, 0),
                            GenKind::PhiStar => (c, 0),
                            _ => (r, c),
                        };
                        let g = TGen { kind: *kind, i: i as u8, j: j as u8, ph: *ph, shift: LinForm::ZERO };
                        let idx = if *space == 0 { a.index(r, c, 0, 0) } else { a.index(0, 0, r, c) };
                        a.data[idx].insert(vec![g], RatExpr::one());
                    }
                }
                a
            }
        }
    }

    fn mul(&self, o: &Aux) -> Result<Aux> {
        let mut shapes = [Shape::Absent; 2];
        let mut inner = [1usize; 2];
        for s in 0..2 {
            let (a, b) = (self.shapes[s], o.shapes[s]);
            shapes[s] = match (a, b) {
                (Shape::Absent, Shape::Absent) => Shape::Absent,
                (Shape::Absent, Shape::Dims(r, c)) => {
                    inner[s] = r;
                    Shape::Dims(r, c)
                }
                (Shape::Dims(r, c), Shape::Absent) => {
                    inner[s] = c;
                    Shape::Dims(r, c)
                }
                (Shape::Dims(r, c), Shape::Dims(r2, c2)) => {
                    if c != r2 {
                        return Err(Error::Shape("auxiliary dimensions do not match".into()));
                    }
                    inner[s] = c;
                    Shape::Dims(r, c2)
                }
            };
        }
        let mut out = Aux::new(shapes);
        let [s1, s2] = shapes;
        for r1 in 0..s1.rows() {
            for c1 in 0..s1.cols() {
                for r2 in 0..s2.rows() {
                    for c2 in 0..s2.cols() {
                        let mut acc = Combo::new();
                        for m1 in 0..inner[0] {
                            for m2 in 0..inner[1] {
                                let (Some(x), Some(y)) = (self.get(r1, m1, r2, m2), o.get(m1, c1, m2, c2)) else {
                                    continue;
                                };
                                for (wa, ca) in x {
                                    for (wb, cb) in y {
                                        let w: TWord = wa.iter().chain(wb).copied().collect();
                                        add_to(&mut acc, w, ca.mul(cb));
                                    }
                                }
                            }
                        }
                        let idx = out.index(r1, c1, r2, c2);
                        out.data[idx] = acc;
                    }
                }
            }
        }
        Ok(out)
    }

    fn product(fs: &[Factor], n: usize) -> Result<Aux> {
        let mut acc = Aux::unit();
        for f in fs {
            acc = acc.mul(&Aux::from_factor(f, n))?;
        }
        Ok(acc)
    }
}

/// Indices `(i1, j1, i2, j2)` of the two generators of a word.
pub type PairIndex = (u8, u8, u8, u8);

/// The rewrite of every out-of-order word of a fixed kind pair.
#[derive(Clone, Debug)]
pub struct RuleTemplate {
    /// Placeholders carried by the first and second generator of the word.
    pub first: Ph,
    pub second: Ph,
    pub table: HashMap<PairIndex, Vec<(TWord, RatExpr)>>,
}

/// Solves the component equations for the words selected by `unknown`.
pub fn solve(eqs: Vec<Combo>, first: Ph, second: Ph, unknown: impl Fn(&TWord) -> bool) -> Result<RuleTemplate> {
    let mut rows = eqs;
    let unknowns: BTreeSet<TWord> = rows.iter().flat_map(|r| r.keys()).filter(|w| unknown(w)).cloned().collect();
    let mut used = vec![false; rows.len()];
    let mut pivots = Vec::new();
    for u in &unknowns {
        let r = (0..rows.len())
            .find(|&r| !used[r] && rows[r].contains_key(u))
            .ok_or_else(|| Error::Singular("relation does not determine an out-of-order word".into()))?;
        used[r] = true;
        let inv = rows[r][u].inv()?;
        let pivot_row: Combo = rows[r].iter().map(|(w, c)| (w.clone(), c.mul(&inv))).collect();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            if let Some(f) = row.get(u).cloned() {
                for (w, c) in &pivot_row {
                    add_to(row, w.clone(), c.mul(&f).neg());
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push((u.clone(), r));
    }
    let mut table = HashMap::new();
    for (u, r) in pivots {
        let rhs: Vec<(TWord, RatExpr)> =
            rows[r].iter().filter(|(w, _)| **w != u).map(|(w, c)| (w.clone(), c.neg())).collect();
        if rhs.iter().any(|(w, _)| unknown(w)) {
            return Err(Error::Singular("out-of-order words are not independent".into()));
        }
        table.insert((u[0].i, u[0].j, u[1].i, u[1].j), rhs);
    }
    Ok(RuleTemplate { first, second, table })
}
