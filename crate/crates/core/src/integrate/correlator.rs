use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;

use crate::arith::{double_factorial_odd, Rat};

/// `(g, sorted exponents)`; only keys with `Σ d_i = 3g - 3 + n` are stored.
pub type CorrelatorKey = (u32, Vec<u32>);

pub(crate) struct Memo {
    pub(crate) values: RwLock<HashMap<CorrelatorKey, Rat>>,
    pub(crate) hits: AtomicU64,
    pub(crate) misses: AtomicU64,
}

pub(crate) static MEMO: LazyLock<Memo> = LazyLock::new(|| Memo {
    values: RwLock::new(HashMap::new()),
    hits: AtomicU64::new(0),
    misses: AtomicU64::new(0),
});

/// Evaluation strategy for the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recursion {
    /// Use string and dilaton equations when a `τ_0` or `τ_1` is present.
    pub shortcuts: bool,
}

pub fn degree_matches(g: u32, ds: &[u32]) -> bool {
    let dim = 3 * g as i64 - 3 + ds.len() as i64;
    dim >= 0 && ds.iter().map(|&d| d as i64).sum::<i64>() == dim
}

/// `⟨τ_{d_1} ⋯ τ_{d_n}⟩_g`, memoized in the process-wide table.
pub fn psi_correlator(g: u32, ds: &[u32]) -> Rat {
    if !degree_matches(g, ds) {
        return Rat::zero();
    }
    let mut key = ds.to_vec();
    key.sort_unstable();
    let key = (g, key);
    if let Some(v) = MEMO.values.read().get(&key) {
        MEMO.hits.fetch_add(1, Ordering::Relaxed);
        return v.clone();
    }
    MEMO.misses.fetch_add(1, Ordering::Relaxed);
    let v = evaluate(g, &key.1, Recursion { shortcuts: true }, &mut |g, ds| psi_correlator(g, ds));
    MEMO.values.write().insert(key, v.clone());
    v
}

/// Independent evaluation with a private memo, bypassing the shared table.
pub fn psi_correlator_with(g: u32, ds: &[u32], rec: Recursion) -> Rat {
    fn go(g: u32, ds: &[u32], rec: Recursion, memo: &mut HashMap<CorrelatorKey, Rat>) -> Rat {
        if !degree_matches(g, ds) {
            return Rat::zero();
        }
        let mut key = ds.to_vec();
        key.sort_unstable();
        if let Some(v) = memo.get(&(g, key.clone())) {
            return v.clone();
        }
        let mut sub = |g2: u32, d2: &[u32]| go(g2, d2, rec, memo);
        let v = evaluate(g, &key, rec, &mut sub);
        memo.insert((g, key), v.clone());
        v
    }
    go(g, ds, rec, &mut HashMap::new())
}

fn df(k: i64) -> Rat {
    // (2k-1)!! as a rational, k ≥ 0
    Rat::from_integer(double_factorial_odd(k))
}

/// One recursion step on sorted, degree-matching input.
fn evaluate(g: u32, ds: &[u32], rec: Recursion, sub: &mut dyn FnMut(u32, &[u32]) -> Rat) -> Rat {
    let n = ds.len();
    if g == 0 && n == 3 {
        return Rat::one();
    }
    if g == 1 && n == 1 {
        return Rat::new(BigInt::one(), BigInt::from(24));
    }
    if rec.shortcuts {
        if let Some(pos) = ds.iter().position(|&d| d == 0) {
            let rest: Vec<u32> = ds.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &d)| d).collect();
            let mut acc = Rat::zero();
            for j in 0..rest.len() {
                if rest[j] > 0 {
                    let mut v = rest.clone();
                    v[j] -= 1;
                    acc += sub(g, &v);
                }
            }
            return acc;
        }
        if let Some(pos) = ds.iter().position(|&d| d == 1) {
            let rest: Vec<u32> = ds.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &d)| d).collect();
            if rest.is_empty() {
                return Rat::zero();
            }
            return Rat::from_integer(BigInt::from(2 * g as i64 - 2 + rest.len() as i64)) * sub(g, &rest);
        }
    }
    // DVV on the largest exponent: τ_{k+1} with k ≥ 0 (degree forces one ≥ 1).
    let pos = (0..n).max_by_key(|&i| ds[i]).unwrap();
    let k = ds[pos] as i64 - 1;
    let rest: Vec<u32> = ds.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &d)| d).collect();
    let mut acc = Rat::zero();
    for j in 0..rest.len() {
        let dj = rest[j] as i64;
        let mut v = rest.clone();
        v[j] = (dj + k) as u32;
        let c = df(k + dj + 1) / df(dj);
        acc += c * sub(g, &v);
    }
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    for r in 0..k {
        let s = k - 1 - r;
        let c = df(r + 1) * df(s + 1) * &half;
        if g >= 1 {
            let mut v = rest.clone();
            v.push(r as u32);
            v.push(s as u32);
            acc += &c * sub(g - 1, &v);
        }
        let m = rest.len();
        for mask in 0u64..(1u64 << m) {
            let mut left = vec![r as u32];
            let mut right = vec![s as u32];
            for (i, &d) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(d);
                } else {
                    right.push(d);
                }
            }
            for g1 in 0..=g {
                let a = sub(g1, &left);
                if a.is_zero() {
                    continue;
                }
                let b = sub(g - g1, &right);
                acc += &c * a * b;
            }
        }
    }
    acc / df(k + 2)
}
