//! LG orbifolds `(W, G)`, their sectors and the integer invariants consumed
//! by the limit formula.

mod orbifold;
mod sector;

pub use orbifold::{grading_element, t_exponents, weights_from_shape, GroupElement, LGOrbifold, Shape};
pub use sector::{chain_decoration, enumerate_sectors, loop_hypothesis, multiplicity_table, normalize_for_theorem, selection_rule, Sector};
