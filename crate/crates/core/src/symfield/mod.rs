//! Exact coefficient field: reduced fractions of multivariate Laurent
//! polynomials over the integers.
//!
//! `q` is never a variable of its own. Every power of `q` is stored as an
//! even power of `s = q^(1/2)`, so half-integer powers stay integral.

mod gcd;
mod monomial;
mod poly;
mod rat;
mod var;

pub use gcd::{content_in, exact_div, gcd, lcm, normalize_sign, primitive_part_in};
pub use monomial::Monomial;
pub use poly::LaurentPoly;
pub use rat::{clear_denominators, Binding, RatExpr};
pub use var::{Var, NVARS};


#[cfg(test)]
mod tests;
