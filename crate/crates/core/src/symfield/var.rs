use std::fmt;

/// Number of variables in the fixed alphabet.
pub const NVARS: usize = 15;

/// A variable of the coefficient field.
///
/// The alphabet is ordered `s < u1 < u2 < u3 < x < z1 < ... < z9 < w`.
/// `s` is the square root of `q`, and `u_t` stands for `q^(c_t/2)`, the
/// central-charge exponential of tensor leg `t`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u8);

impl Var {
    pub const S: Var = Var(0);
    pub const X: Var = Var(4);
    pub const W: Var = Var(14);

    /// Central-charge exponential of leg `t` (1-based, at most 3).
    pub fn u(t: usize) -> Var {
        assert!((1..=3).contains(&t), "leg index {t} out of range");
        Var(t as u8)
    }

    /// Spectral variable `z_k` (1-based, at most 9).
    pub fn z(k: usize) -> Var {
        assert!((1..=9).contains(&k), "spectral index {k} out of range");
        Var(4 + k as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Var {
        assert!(i < NVARS);
        Var(i as u8)
    }

    /// Leg number if this is a `u_t` variable.
    pub fn leg(self) -> Option<usize> {
        (1..=3).contains(&self.0).then_some(self.0 as usize)
    }

    /// Spectral index if this is a `z_k` variable.
    pub fn spectral(self) -> Option<usize> {
        (5..=13).contains(&self.0).then(|| self.0 as usize - 4)
    }

    pub fn name(self) -> String {
        match self.0 {
            0 => "s".into(),
            1..=3 => format!("u{}", self.0),
            4 => "x".into(),
            5..=13 => format!("z{}", self.0 - 4),
            _ => "w".into(),
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "s" => Some(Var::S),
            "x" => Some(Var::X),
            "w" => Some(Var::W),
            _ => {
                let (head, tail) = name.split_at(1);
                let k: usize = tail.parse().ok()?;
                match head {
                    "u" if (1..=3).contains(&k) => Some(Var::u(k)),
                    "z" if (1..=9).contains(&k) => Some(Var::z(k)),
                    _ => None,
                }
            }
        }
    }

    pub fn all() -> impl Iterator<Item = Var> {
        (0..NVARS).map(Var::from_index)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for v in Var::all() {
            assert_eq!(Var::from_name(&v.name()), Some(v));
        }
        assert_eq!(Var::from_name("z0"), None);
        assert_eq!(Var::from_name("u4"), None);
        assert_eq!(Var::from_name("q"), None);
    }

    #[test]
    fn alphabet_order() {
        assert!(Var::S < Var::u(1));
        assert!(Var::u(3) < Var::X);
        assert!(Var::X < Var::z(1));
        assert!(Var::z(9) < Var::W);
    }
}
