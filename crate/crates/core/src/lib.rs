//! Exact Hodge integrals `λ_g^∨ · c_vir` for Landau–Ginzburg orbifolds of
//! Fermat, chain and loop type, computed as the `t → 1` limit of a
//! characteristic class built from Chiodo's and Mumford's formulas, together
//! with the tautological relations forced by the existence of that limit.

pub mod arith;
pub mod classes;
pub mod error;
pub mod graphs;
pub mod integrate;
pub mod limits;
pub mod model;

pub use error::{Error, Result};
