//! Dense square matrices over the coefficient field.

use crate::error::{Error, Result};
use crate::symfield::RatExpr;

/// Square matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    dim: usize,
    data: Vec<RatExpr>,
}

impl Mat {
    pub fn zero(dim: usize) -> Self {
        Mat { dim, data: vec![RatExpr::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, RatExpr::one());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> RatExpr) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Mat { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &RatExpr {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatExpr) {
        self.data[r * self.dim + c] = v;
    }

    pub fn entries(&self) -> &[RatExpr] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatExpr::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries().iter().filter(|e| !e.is_zero()).count()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Mat::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c).add(&a.mul(b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.dim, other.dim);
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn map(&self, f: impl FnMut(&RatExpr) -> Result<RatExpr>) -> Result<Mat> {
        Ok(Mat { dim: self.dim, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> RatExpr {
        let mut a = self.clone();
        let n = self.dim;
        let mut det = RatExpr::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return RatExpr::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = det.neg();
            }
            let piv = a.get(col, col).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = a.get(r, col).mul(&inv);
                if !f.is_zero() {
                    a.axpy_row(r, col, &f.neg(), col);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination; `Singular` if not invertible.
    pub fn inverse(&self) -> Result<Mat> {
        let n = self.dim;
        let mut a = self.clone();
        let mut b = Mat::identity(n);
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::Singular("matrix is not invertible".into()))?;
            a.swap_rows(p, col);
            b.swap_rows(p, col);
            let inv = a.get(col, col).inv()?;
            a.scale_row(col, &inv);
            b.scale_row(col, &inv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if !f.is_zero() {
                    let nf = f.neg();
                    a.axpy_row(r, col, &nf, 0);
                    b.axpy_row(r, col, &nf, 0);
                }
            }
        }
        Ok(b)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 != r2 {
            for c in 0..self.dim {
                self.data.swap(r1 * self.dim + c, r2 * self.dim + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: &RatExpr) {
        for c in 0..self.dim {
            let v = self.get(r, c).mul(f);
            self.set(r, c, v);
        }
    }

    /// row[r] += f * row[src], for columns from `from` on.
    fn axpy_row(&mut self, r: usize, src: usize, f: &RatExpr, from: usize) {
        for c in from..self.dim {
            let s = self.get(src, c);
            if !s.is_zero() {
                let v = self.get(r, c).add(&f.mul(s));
                self.set(r, c, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rat;

    fn m2(e: [&str; 4]) -> Mat {
        Mat::from_fn(2, |r, c| parse_rat(e[r * 2 + c]).unwrap())
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = m2(["x", "1", "q", "x - 1"]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert_eq!(inv.mul(&a), Mat::identity(2));
        // 2x2 determinant by the cofactor formula
        assert_eq!(a.det(), parse_rat("x*(x-1) - q").unwrap());
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = m2(["x", "q", "x^2", "q*x"]);
        assert!(a.det().is_zero());
        assert!(matches!(a.inverse(), Err(Error::Singular(_))));
    }
}
