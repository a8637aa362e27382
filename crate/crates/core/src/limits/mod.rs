//! The `t → 1` limit: exact Hodge integrals with a regularity check, the
//! genus-zero concavity oracle and tautological-relation certificates from
//! the negative part of the Laurent expansion.

mod integral;
mod oracle;
mod relations;

pub use integral::{hodge_integral, psi_monomials, HodgeIntegralResult, IntegralOptions, SectorEvaluator, SectorInfo};
pub use oracle::{concavity_certificate, genus0_oracle, ORACLE_SIGN};
pub use relations::{relation_certificates, GradingViolation, RelationCertificate, RelationReport, Verdict};
