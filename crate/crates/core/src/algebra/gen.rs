//! Generators, their shifted arguments and formal delta factors.

use std::fmt;

use crate::symfield::{Monomial, Var};

/// Number of tensor legs whose central charges can be referenced.
pub const MAX_LEGS: usize = 3;

/// Generator families. The declaration order is irrelevant; the canonical
/// order is given by [`GenKind::group`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    Lstar,
    Lstarinv,
    L,
    Linv,
    PhiStar,
    Phi,
}

impl GenKind {
    pub const ALL: [GenKind; 6] =
        [GenKind::Lstar, GenKind::Lstarinv, GenKind::L, GenKind::Linv, GenKind::PhiStar, GenKind::Phi];

    /// Position in the canonical order `Lstar(+-) < L(+-) < PhiStar < Phi`.
    pub fn group(self) -> u8 {
        match self {
            GenKind::Lstar | GenKind::Lstarinv => 0,
            GenKind::L | GenKind::Linv => 1,
            GenKind::PhiStar => 2,
            GenKind::Phi => 3,
        }
    }

    pub fn is_matrix(self) -> bool {
        self.group() < 2
    }

    pub fn is_inverse(self) -> bool {
        matches!(self, GenKind::Linv | GenKind::Lstarinv)
    }

    /// The formal inverse family, for matrix kinds.
    pub fn inverse(self) -> Option<GenKind> {
        match self {
            GenKind::L => Some(GenKind::Linv),
            GenKind::Linv => Some(GenKind::L),
            GenKind::Lstar => Some(GenKind::Lstarinv),
            GenKind::Lstarinv => Some(GenKind::Lstar),
            _ => None,
        }
    }

    /// The non-inverted family.
    pub fn base(self) -> GenKind {
        match self {
            GenKind::Linv => GenKind::L,
            GenKind::Lstarinv => GenKind::Lstar,
            k => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Lstar => "Lstar",
            GenKind::Lstarinv => "Lstarinv",
            GenKind::L => "L",
            GenKind::Linv => "Linv",
            GenKind::PhiStar => "PhiStar",
            GenKind::Phi => "Phi",
        }
    }

    pub fn from_name(s: &str) -> Option<GenKind> {
        GenKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// A linear form `a_0 + sum_t a_t c_t` stored with doubled coefficients, so
/// half-integers are exact. Slot 0 is the constant, slots 1..=3 the legs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinForm(pub [i32; MAX_LEGS + 1]);

impl LinForm {
    pub const ZERO: LinForm = LinForm([0; MAX_LEGS + 1]);

    /// `q^{k/2}`.
    pub fn constant_halves(k: i32) -> Self {
        let mut f = Self::ZERO;
        f.0[0] = k;
        f
    }

    /// `k/2 * c_leg`.
    pub fn charge_halves(leg: usize, k: i32) -> Self {
        let mut f = Self::ZERO;
        f.0[leg] = k;
        f
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut f = *self;
        for (a, b) in f.0.iter_mut().zip(o.0) {
            *a += b;
        }
        f
    }

    pub fn neg(&self) -> Self {
        LinForm(self.0.map(|d| -d))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn charge(&self, leg: usize) -> i32 {
        self.0[leg]
    }

    /// Applies `c_t -> sum_u m[t][u] c_u` to the charge slots.
    pub fn map_charges(&self, image: &[[i32; MAX_LEGS + 1]; MAX_LEGS + 1]) -> Self {
        let mut out = [0; MAX_LEGS + 1];
        out[0] = self.0[0];
        for (&c, row) in self.0.iter().zip(image).skip(1) {
            if c != 0 {
                for (o, m) in out.iter_mut().zip(row).skip(1) {
                    *o += c * m;
                }
            }
        }
        LinForm(out)
    }

    /// The monomial `q^{form}` = `s^{d_0} prod u_t^{d_t}`.
    pub fn monomial(&self) -> Monomial {
        let mut m = Monomial::var_pow(Var::S, self.0[0]);
        for t in 1..=MAX_LEGS {
            m = m.mul(&Monomial::var_pow(Var::u(t), self.0[t]));
        }
        m
    }
}

impl fmt::Display for LinForm {
    /// The exponent of `q`, e.g. `1/2+c1-c2/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (slot, &d) in self.0.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let sym = if slot == 0 { String::new() } else { format!("c{slot}") };
            let sign = if d < 0 { "-" } else { "+" };
            let a = d.unsigned_abs();
            let body = match (a, slot) {
                (2, 0) => "1".to_string(),
                (2, _) => sym,
                (a, 0) if a % 2 == 0 => format!("{}", a / 2),
                (a, _) if a % 2 == 0 => format!("{}*{sym}", a / 2),
                (a, 0) => format!("{a}/2"),
                (1, _) => format!("{sym}/2"),
                (a, _) => format!("{a}*{sym}/2"),
            };
            parts.push(format!("{sign}{body}"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let s = parts.concat();
        write!(f, "{}", s.strip_prefix('+').unwrap_or(&s))
    }
}

/// A generator argument `z_k q^{shift}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgShift {
    pub var: Var,
    pub shift: LinForm,
}

impl ArgShift {
    pub fn plain(var: Var) -> Self {
        ArgShift { var, shift: LinForm::ZERO }
    }

    pub fn shifted(&self, by: &LinForm) -> Self {
        ArgShift { var: self.var, shift: self.shift.add(by) }
    }

    /// The monomial `z_k q^{shift}`.
    pub fn monomial(&self) -> Monomial {
        Monomial::var(self.var).mul(&self.shift.monomial())
    }

    /// `self / other` as a monomial.
    pub fn ratio(&self, other: &ArgShift) -> Monomial {
        self.monomial().div(&other.monomial())
    }
}

impl fmt::Display for ArgShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift.is_zero() {
            write!(f, "{}", self.var)
        } else {
            write!(f, "{}*q^({})", self.var, self.shift)
        }
    }
}

/// One generator occurrence. Indices are zero-based; `j` is unused (zero)
/// for the vector kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenOcc {
    pub kind: GenKind,
    pub i: u8,
    pub j: u8,
    pub arg: ArgShift,
}

impl GenOcc {
    pub fn vector(kind: GenKind, i: usize, arg: ArgShift) -> Self {
        GenOcc { kind, i: i as u8, j: 0, arg }
    }

    pub fn matrix(kind: GenKind, i: usize, j: usize, arg: ArgShift) -> Self {
        GenOcc { kind, i: i as u8, j: j as u8, arg }
    }

    /// Sort key of the canonical order: kind group, then spectral variable.
    pub fn order_key(&self) -> (u8, Var) {
        (self.kind.group(), self.arg.var)
    }
}

impl fmt::Display for GenOcc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_matrix() {
            write!(f, "{}{}{}({})", self.kind.name(), self.i + 1, self.j + 1, self.arg)
        } else {
            write!(f, "{}{}({})", self.kind.name(), self.i + 1, self.arg)
        }
    }
}

/// The formal distribution `delta((z_a / z_b) q^{shift})`. Canonical form
/// has `a < b`, so normalization eliminates the smaller variable; `a == b`
/// marks a degenerate factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaFactor {
    pub a: Var,
    pub b: Var,
    pub shift: LinForm,
}

impl DeltaFactor {
    /// Uses `delta(z) = delta(1/z)` to put the smaller variable on top.
    pub fn new(a: Var, b: Var, shift: LinForm) -> Self {
        if a > b {
            DeltaFactor { a: b, b: a, shift: shift.neg() }
        } else {
            DeltaFactor { a, b, shift }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

impl fmt::Display for DeltaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift.is_zero() {
            write!(f, "delta({}/{})", self.a, self.b)
        } else {
            write!(f, "delta({}/{}*q^({}))", self.a, self.b, self.shift)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linform_display_and_monomial() {
        let f = LinForm([1, 2, -1, 0]);
        assert_eq!(f.to_string(), "1/2+c1-c2/2");
        let m = f.monomial();
        assert_eq!(m.exp(Var::S), 1);
        assert_eq!(m.exp(Var::u(1)), 2);
        assert_eq!(m.exp(Var::u(2)), -1);
        assert_eq!(LinForm::ZERO.to_string(), "0");
        assert_eq!(LinForm([-4, 0, 0, 3]).to_string(), "-2+3*c3/2");
    }

    #[test]
    fn charge_map_splits_legs() {
        // c1 -> c1 + c2 applied to c1/2 + c2 (with old c2 renamed c3 first)
        let mut img = [[0; 4]; 4];
        img[1] = [0, 1, 1, 0];
        img[2] = [0, 0, 0, 1];
        let f = LinForm([0, 1, 2, 0]).map_charges(&img);
        assert_eq!(f, LinForm([0, 1, 1, 2]));
    }

    #[test]
    fn delta_canonical_orientation() {
        let d = DeltaFactor::new(Var::z(2), Var::z(1), LinForm::charge_halves(1, -2));
        assert_eq!((d.a, d.b), (Var::z(1), Var::z(2)));
        assert_eq!(d.shift, LinForm::charge_halves(1, 2));
    }

    #[test]
    fn kind_order_groups() {
        assert!(GenKind::Lstarinv.group() < GenKind::L.group());
        assert!(GenKind::PhiStar.group() < GenKind::Phi.group());
        assert_eq!(GenKind::Linv.inverse(), Some(GenKind::L));
        assert_eq!(GenKind::from_name("PhiStar"), Some(GenKind::PhiStar));
    }
}
