//! Spectral-parameter R-matrices and their side conditions: the Yang-Baxter
//! equation, unitarity, and the pole-clearing factor.
//!
//! `R[i,j -> k,l]` is the coefficient of `e_k (x) e_l` in `R(e_i (x) e_j)`.
//! As an operator on `V (x) V` with basis index `i*n + j` (first factor most
//! significant) this is the matrix element in row `k*n + l`, column `i*n + j`.

pub mod instances;
mod linalg;

use std::fmt;

pub use linalg::Mat;

use crate::error::{Error, Result};
use crate::symfield::{clear_denominators, LaurentPoly, Monomial, RatExpr, Var};

/// An `n^2 x n^2` array of coefficient-field entries in one spectral ratio
/// variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    n: usize,
    var: Var,
    entries: Vec<RatExpr>,
}

/// Middle argument used for `R13` in the Yang-Baxter residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum YbeConvention {
    /// `R12(z) R13(zw) R23(w)`: what the exchange relations require.
    Product,
    /// `R12(z) R13(z/w) R23(w)`: the displayed literal form.
    Quotient,
}

impl RMatrix {
    /// Validates that every entry depends only on `var` and `s`.
    pub fn new(n: usize, var: Var, entries: Vec<RatExpr>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        if entries.len() != n.pow(4) {
            return Err(Error::Shape(format!("expected {} entries, got {}", n.pow(4), entries.len())));
        }
        for e in &entries {
            for v in e.num().vars().into_iter().chain(e.den().vars()) {
                if v != var && v != Var::S {
                    return Err(Error::Domain(format!("entry {e} involves {v}, expected only {var} and s")));
                }
            }
        }
        Ok(RMatrix { n, var, entries })
    }

    /// Builds from `f(i, j, k, l)` with zero-based indices.
    pub fn from_fn(n: usize, var: Var, mut f: impl FnMut(usize, usize, usize, usize) -> RatExpr) -> Result<Self> {
        let mut entries = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        entries.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self::new(n, var, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn var(&self) -> Var {
        self.var
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    /// `R[i,j -> k,l]`, zero-based.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &RatExpr {
        &self.entries[self.idx(i, j, k, l)]
    }

    pub fn entries(&self) -> &[RatExpr] {
        &self.entries
    }

    /// `R21[i,j -> k,l] = R[j,i -> l,k]`.
    pub fn flip(&self) -> RMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        entries.push(self.get(j, i, l, k).clone());
                    }
                }
            }
        }
        RMatrix { n, var: self.var, entries }
    }

    /// The operator matrix on `V (x) V`.
    pub fn matrix(&self) -> Mat {
        let n = self.n;
        Mat::from_fn(n * n, |row, col| self.get(col / n, col % n, row / n, row % n).clone())
    }

    /// The operator matrix with the spectral variable replaced by `arg`.
    pub fn matrix_at(&self, arg: &Monomial) -> Result<Mat> {
        let b = [(self.var, *arg)];
        self.matrix().map(|e| e.substitute_monomials(&b))
    }

    pub fn determinant(&self) -> RatExpr {
        self.matrix().det()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n;
        (0..self.entries.len()).all(|t| {
            let (l, k, j, i) = (t % n, t / n % n, t / n / n % n, t / n / n / n);
            (i == k && j == l) || self.entries[t].is_zero()
        })
    }

    /// `R12(z) R13(m) R23(w) - R23(w) R13(m) R12(z)` on `V^(x)3` with
    /// `z = z1`, `w = w` and `m = zw` or `z/w`.
    pub fn ybe_residual(&self, conv: YbeConvention) -> Result<Mat> {
        let z = Monomial::var(Var::z(1));
        let w = Monomial::var(Var::W);
        let mid = match conv {
            YbeConvention::Product => z.mul(&w),
            YbeConvention::Quotient => z.div(&w),
        };
        let r12 = self.embed3(&self.matrix_at(&z)?, 0, 1);
        let r13 = self.embed3(&self.matrix_at(&mid)?, 0, 2);
        let r23 = self.embed3(&self.matrix_at(&w)?, 1, 2);
        Ok(r12.mul(&r13).mul(&r23).sub(&r23.mul(&r13).mul(&r12)))
    }

    /// Places an operator on `V (x) V` into factors `p < q` of `V^(x)3`.
    fn embed3(&self, m: &Mat, p: usize, q: usize) -> Mat {
        let n = self.n;
        let digits = |t: usize| [t / (n * n), t / n % n, t % n];
        Mat::from_fn(n * n * n, |row, col| {
            let (dr, dc) = (digits(row), digits(col));
            let other = 3 - p - q;
            if dr[other] != dc[other] {
                return RatExpr::zero();
            }
            m.get(dr[p] * n + dr[q], dc[p] * n + dc[q]).clone()
        })
    }

    /// `R21(x) R(1/x) - I`; zero exactly when the matrix is unitary.
    pub fn unitarity_residual(&self) -> Result<Mat> {
        if self.determinant().is_zero() {
            return Err(Error::Singular("R-matrix has zero determinant".into()));
        }
        let x = Monomial::var(self.var);
        let r21 = self.flip().matrix_at(&x)?;
        let r_inv_arg = self.matrix_at(&x.inv())?;
        Ok(r21.mul(&r_inv_arg).sub(&Mat::identity(self.n * self.n)))
    }

    /// The pole-clearing factor `f` and `R' = f R`.
    pub fn clear_poles(&self) -> Result<ClearedRMatrix> {
        let f = clear_denominators(&self.entries, self.var)?;
        let fr = RatExpr::from_poly(f.clone());
        let rprime = self.entries.iter().map(|e| e.mul(&fr)).collect();
        Ok(ClearedRMatrix { base: self.clone(), f, rprime })
    }
}

impl fmt::Display for RMatrix {
    /// One `R[i,j;k,l] = expr` line per nonzero entry, one-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}; var={};", self.n, self.var)?;
        let n = self.n;
        for (t, e) in self.entries.iter().enumerate() {
            if !e.is_zero() {
                let (l, k, j, i) = (t % n, t / n % n, t / n / n % n, t / n / n / n);
                writeln!(f, "R[{},{};{},{}] = {}", i + 1, j + 1, k + 1, l + 1, e)?;
            }
        }
        Ok(())
    }
}

/// An R-matrix together with its pole-clearing factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearedRMatrix {
    pub base: RMatrix,
    pub f: LaurentPoly,
    /// `f * R`, entrywise in the same layout as the base entries.
    pub rprime: Vec<RatExpr>,
}

impl ClearedRMatrix {
    pub fn rprime_get(&self, i: usize, j: usize, k: usize, l: usize) -> &RatExpr {
        &self.rprime[self.base.idx(i, j, k, l)]
    }
}

#[cfg(test)]
mod tests;
