//! Characteristic classes of root-curve cohomology: Chiodo's Chern
//! characters, the assembled exponent of the limit formula, the total class
//! and its closed-form graph-sum pairing, and the calibration suite.

mod assemble;
mod calibration;
mod chiodo;
mod graphsum;

pub use assemble::{
    assemble_exponent, channel_coefficient, cohft_factor, cohft_normalize, exp_truncated, prefactor, total_class, AtOne,
    Channel, Exact, SectorSetup, Specialization, Variant,
};
pub use calibration::*;
pub use chiodo::{chiodo_ch, edge_polynomial, single_edge_terms, ChiodoInput};
pub use graphsum::GraphSum;
