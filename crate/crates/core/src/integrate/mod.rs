//! Intersection numbers: Witten–Kontsevich ψ-correlators via the DVV
//! recursion with a persistent table, κ-to-ψ reduction, and pairing of
//! strata expressions against ψ-monomials.

mod cache;
mod correlator;
mod kappa;

pub use cache::{
    cache_path, cache_stats, clear_cache, flush_cache, load_cache, read_cache_file, reset_memory, verify_cache,
    CacheStats, CACHE_FILE, CACHE_HEADER,
};
pub use correlator::{degree_matches, psi_correlator, psi_correlator_with, CorrelatorKey, Recursion};
pub use kappa::{kappa_reduce, vertex_integral};
