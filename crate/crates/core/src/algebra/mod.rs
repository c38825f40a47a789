//! The word algebra on the generators `Phi`, `PhiStar`, `L`, `Lstar` and
//! their formal inverses, with exchange relations derived from an R-matrix
//! and a normal-ordering rewrite system.

pub mod derive;
mod element;
mod gen;
mod input;
pub mod relations;
pub mod order;
mod rules;

pub use element::{Element, Monom, Term};
pub use gen::{ArgShift, DeltaFactor, GenKind, GenOcc, LinForm, MAX_LEGS};
pub use input::parse_element;
#[cfg(test)]
mod tests;

pub use order::{braid_consistency, contract, delta_normalize, measure, normal_order, normal_order_traced, reduce, swap_vars, BraidReport, Strategy};
pub use relations::{relation_components, RelationId};
pub use rules::{kappa, out_of_order, DeltaAssignment, Flavor, Reading, RewriteSystem, RuleOutput, Toggles};
