//! Stable graphs, spin weightings and the strata algebra of decorated
//! boundary classes.

mod decorated;
mod stable;
mod strata;
mod weighting;

pub use decorated::{distribute_kappa, DecoratedGraph, Half, HalfRef, Vertex};
pub use weighting::{enumerate_weightings, opposite, vertex_rule_holds};
pub use strata::{integrate_term, Ambient, Conventions, Orientation, StrataExpression};
pub use stable::{enumerate_stable_graphs, stable_graphs_by_edges, vertex_degenerations, StableGraph};
