//! Exact construction and verification of R-matrix current algebras.
//!
//! Starting from a spectral-parameter R-matrix with rational entries the
//! crate builds the exchange algebra of a vector of currents `Phi(x)`, its
//! extension by an `L(x)` matrix, and the double with `Phi*(x)` and
//! `L*(x)`, all as rewrite systems over an exact coefficient field. On top
//! of that it checks the R-matrix conditions and every Hopf axiom of the
//! stated coproduct, counit and antipode by normal ordering residuals.
//! Mode expansion turns cleared relations into relations among Fourier
//! modes, checks their consistency and compares the scalar case with the
//! Drinfeld current relations. [`cli`] drives all of this from named
//! instances or R-matrix spec files and emits deterministic JSON reports.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod hopf;
pub mod modes;
pub mod parse;
pub mod report;
pub mod rmatrix;
pub mod symfield;

pub use error::{Error, Result};
