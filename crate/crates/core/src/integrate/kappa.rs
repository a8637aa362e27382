use num_bigint::BigInt;
use num_traits::Zero;

use super::correlator::{psi_correlator, CorrelatorKey};
use crate::arith::Rat;

/// Set partitions of `{0..m}` as lists of blocks.
fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for i in 0..m {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(i);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Rewrites `∫_{M̄_{g,n}} Π ψ_i^{x_i} Π_j κ_{a_j}` as a signed sum of pure
/// ψ-correlators with one extra marking per block of a set partition of the
/// κ factors: `Σ_P (-1)^{m-|P|} ⟨Π τ_{x_i} Π_B τ_{a_B+1}⟩_g`. The block
/// coefficients `(-1)^{|B|-1}` invert the cycle sum
/// `π_*(Π ψ^{a_j+1}) = Σ_{σ ∈ S_m} Π_{cycles c} κ_{a_c}`.
pub fn kappa_reduce(g: u32, psi: &[u32], kappa: &[u32]) -> Vec<(CorrelatorKey, Rat)> {
    let m = kappa.len();
    let mut out = Vec::new();
    for p in set_partitions(m) {
        let sign = if (m - p.len()) % 2 == 0 { 1 } else { -1 };
        let c = BigInt::from(sign);
        let mut ds = psi.to_vec();
        for b in &p {
            ds.push(b.iter().map(|&i| kappa[i]).sum::<u32>() + 1);
        }
        ds.sort_unstable();
        out.push(((g, ds), Rat::from_integer(c)));
    }
    out
}

/// `∫_{M̄_{g,n}} Π ψ_i^{x_i} Π_j κ_{a_j}`, zero unless the degree is
/// `3g - 3 + n`.
pub fn vertex_integral(g: u32, psi: &[u32], kappa: &[u32]) -> Rat {
    let dim = 3 * g as i64 - 3 + psi.len() as i64;
    let deg = psi.iter().chain(kappa).map(|&x| x as i64).sum::<i64>();
    if dim < 0 || deg != dim {
        return Rat::zero();
    }
    let mut acc = Rat::zero();
    for ((g, ds), c) in kappa_reduce(g, psi, kappa) {
        acc += c * psi_correlator(g, &ds);
    }
    acc
}
