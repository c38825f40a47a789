//! Built-in R-matrices addressable by name.

use super::RMatrix;
use crate::error::{Error, Result};
use crate::symfield::{RatExpr, Var};

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 5] = ["example1", "example2-n2", "example2-n3", "identity", "broken-nonunitary"];

/// `(x - q^a) / (x q^a - 1)`.
pub fn ratio_function(a: i32) -> RatExpr {
    let x = RatExpr::var(Var::X);
    let qa = RatExpr::q_pow(a);
    x.sub(&qa).div(&x.mul(&qa).sub(&RatExpr::one())).expect("nonzero denominator")
}

fn diagonal(n: usize, mut f: impl FnMut(usize, usize) -> RatExpr) -> RMatrix {
    RMatrix::from_fn(n, Var::X, |i, j, k, l| if i == k && j == l { f(i, j) } else { RatExpr::zero() })
        .expect("diagonal entries depend only on x and s")
}

/// The scalar matrix `(x - q^2)/(x q^2 - 1)`.
pub fn example1() -> RMatrix {
    diagonal(1, |_, _| ratio_function(2))
}

/// The diagonal matrix with `(x - q^2)/(x q^2 - 1)` on `e_i (x) e_i`,
/// `(x - q^-1)/(x q^-1 - 1)` on adjacent pairs and `1` elsewhere.
pub fn example2(n: usize) -> RMatrix {
    diagonal(n, |i, j| match i.abs_diff(j) {
        0 => ratio_function(2),
        1 => ratio_function(-1),
        _ => RatExpr::one(),
    })
}

pub fn identity(n: usize) -> RMatrix {
    diagonal(n, |_, _| RatExpr::one())
}

/// The scalar `x + 1`, which satisfies the Yang-Baxter equation trivially
/// but is not unitary.
pub fn broken_nonunitary() -> RMatrix {
    diagonal(1, |_, _| RatExpr::var(Var::X).add(&RatExpr::one()))
}

pub fn by_name(name: &str) -> Result<RMatrix> {
    Ok(match name {
        "example1" => example1(),
        "example2-n2" => example2(2),
        "example2-n3" => example2(3),
        "identity" => identity(2),
        "broken-nonunitary" => broken_nonunitary(),
        _ => return Err(Error::Domain(format!("unknown instance {name:?}; known: {}", NAMES.join(", ")))),
    })
}
