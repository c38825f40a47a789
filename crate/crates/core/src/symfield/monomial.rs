use std::cmp::Ordering;
use std::fmt;

use super::var::{Var, NVARS};

/// A Laurent monomial: one integer exponent per alphabet variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial([i32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        let mut m = Self::one();
        m.0[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn set_exp(&mut self, v: Var, e: i32) {
        self.0[v.index()] = e;
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[i32; NVARS] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        out
    }

    pub fn inv(&self) -> Monomial {
        let mut out = *self;
        for e in out.0.iter_mut() {
            *e = -*e;
        }
        out
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        let mut out = *self;
        for e in out.0.iter_mut() {
            *e *= k;
        }
        out
    }

    /// True when every exponent is non-negative.
    pub fn is_ordinary(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// True if `other` divides `self` as ordinary monomials.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a >= b)
    }

    pub fn meet(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        out
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..NVARS).filter(|&i| self.0[i] != 0).map(Var::from_index)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }
}

impl Ord for Monomial {
    /// Lexicographic with the last alphabet variable most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..NVARS).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::all().collect::<Vec<_>>().into_iter().rev() {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if v == Var::S && e % 2 == 0 {
                if e == 2 {
                    f.write_str("q")?;
                } else {
                    write!(f, "q^{}", paren(e / 2))?;
                }
            } else if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{}", paren(e))?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

fn paren(e: i32) -> String {
    if e < 0 {
        format!("({e})")
    } else {
        e.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_lex_from_top() {
        let x = Monomial::var(Var::X);
        let s4 = Monomial::var_pow(Var::S, 4);
        assert!(x > s4);
        assert!(x.mul(&s4) > x);
        assert!(Monomial::var(Var::W) > Monomial::var_pow(Var::z(9), 7));
    }

    #[test]
    fn display_uses_q_for_even_powers() {
        let m = Monomial::var(Var::X).mul(&Monomial::var_pow(Var::S, 4));
        assert_eq!(m.to_string(), "x*q^2");
        assert_eq!(Monomial::var_pow(Var::S, -3).to_string(), "s^(-3)");
    }
}
