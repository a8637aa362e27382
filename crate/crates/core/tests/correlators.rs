use num_traits::One;
use proptest::prelude::*;
use spinhodge_core::arith::{factorial, int, rat, Rat};
use spinhodge_core::integrate::{psi_correlator, psi_correlator_with, vertex_integral, Recursion};

fn rat_of(n: num_bigint::BigInt) -> Rat {
    Rat::from_integer(n)
}

/// Stable key `(g, d)` with `Σ d = 3g - 3 + n`.
fn key() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..4, 1usize..6)
        .prop_filter("stable", |(g, n)| 2 * *g as i64 - 2 + *n as i64 > 0)
        .prop_flat_map(|(g, n)| {
            let dim = (3 * g as i64 - 3 + n as i64) as u32;
            prop::collection::vec(0u32..=dim, n - 1).prop_map(move |mut ds| {
                ds.sort_unstable();
                // consecutive gaps of sorted cut points give a composition of dim
                let mut out = Vec::with_capacity(n);
                let mut prev = 0;
                for c in ds {
                    out.push(c - prev);
                    prev = c;
                }
                out.push(dim - prev);
                (g, out)
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn string_equation((g, ds) in key()) {
        let mut lhs_key = vec![0];
        lhs_key.extend(&ds);
        let lhs = psi_correlator_with(g, &lhs_key, Recursion { shortcuts: false });
        let mut rhs = Rat::from_integer(0.into());
        for j in 0..ds.len() {
            if ds[j] > 0 {
                let mut e = ds.clone();
                e[j] -= 1;
                rhs += psi_correlator(g, &e);
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dilaton_equation((g, ds) in key()) {
        let mut lhs_key = vec![1];
        lhs_key.extend(&ds);
        let lhs = psi_correlator_with(g, &lhs_key, Recursion { shortcuts: false });
        let factor = int(2 * g as i64 - 2 + ds.len() as i64);
        prop_assert_eq!(lhs, factor * psi_correlator(g, &ds));
    }

    #[test]
    fn symmetric_in_the_insertions((g, ds) in key(), rot in 0usize..6) {
        let mut e = ds.clone();
        let k = rot % e.len();
        e.rotate_left(k);
        prop_assert_eq!(psi_correlator(g, &ds), psi_correlator(g, &e));
    }
}

#[test]
fn known_values() {
    assert_eq!(psi_correlator(0, &[0, 0, 0]), Rat::one());
    assert_eq!(psi_correlator(1, &[1]), rat(1, 24));
    assert_eq!(psi_correlator(2, &[4]), rat(1, 1152));
    assert_eq!(psi_correlator(0, &[0, 0, 0, 0, 0]), rat(0, 1));
}

#[test]
fn genus_zero_multinomial() {
    // ⟨τ_{d_1}⋯τ_{d_n}⟩_0 = (n-3)! / Π d_i!
    for n in 3..8usize {
        let dim = n as u32 - 3;
        for a in 0..=dim {
            let ds: Vec<u32> = std::iter::once(a).chain(std::iter::once(dim - a)).chain(std::iter::repeat(0).take(n - 2)).collect();
            let expected = rat_of(factorial(n as u64 - 3)) / (rat_of(factorial(a as u64)) * rat_of(factorial((dim - a) as u64)));
            assert_eq!(psi_correlator(0, &ds), expected, "{ds:?}");
        }
    }
}

#[test]
fn one_point_and_genus_one_families() {
    // ⟨τ_{3g-2}⟩_g = 1/(24^g g!)
    for g in 1..6u32 {
        let expected = Rat::one() / (rat_of(num_bigint::BigInt::from(24).pow(g)) * rat_of(factorial(g as u64)));
        assert_eq!(psi_correlator(g, &[3 * g - 2]), expected, "g = {g}");
    }
    // ⟨τ_1^n⟩_1 = (n-1)!/24
    for n in 1..7usize {
        assert_eq!(psi_correlator(1, &vec![1; n]), rat_of(factorial(n as u64 - 1)) / int(24));
    }
}

#[test]
fn plain_recursion_agrees_with_shortcuts() {
    for g in 0..4u32 {
        for n in 1..5usize {
            let dim = 3 * g as i64 - 3 + n as i64;
            if dim < 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let mut ds = vec![0u32; n];
            ds[0] = dim as u32;
            loop {
                let a = psi_correlator_with(g, &ds, Recursion { shortcuts: false });
                let b = psi_correlator_with(g, &ds, Recursion { shortcuts: true });
                assert_eq!(a, b, "g={g} {ds:?}");
                assert_eq!(a, psi_correlator(g, &ds));
                // move one unit of degree to the right
                let Some(i) = (0..n - 1).rev().find(|&i| ds[i] > 0) else { break };
                ds[i] -= 1;
                ds[i + 1] += 1;
                if ds[i + 1] > 0 && i + 1 < n - 1 {
                    let tail: u32 = ds[i + 1..].iter().sum();
                    for x in &mut ds[i + 1..] {
                        *x = 0;
                    }
                    ds[i + 1] = tail;
                }
            }
        }
    }
}

#[test]
fn kappa_integrals() {
    assert_eq!(vertex_integral(1, &[0], &[1]), rat(1, 24));
    assert_eq!(vertex_integral(0, &[0, 0, 0, 0], &[1]), Rat::one());
    assert_eq!(vertex_integral(0, &[0; 5], &[2]), Rat::one());
    assert_eq!(vertex_integral(0, &[0; 5], &[1, 1]), int(5));
    assert_eq!(vertex_integral(2, &[], &[3]), rat(1, 1152));
    // π_*(ψ^{a+1}ψ^{b+1}) = κ_aκ_b + κ_{a+b}
    assert_eq!(vertex_integral(2, &[], &[1, 2]), psi_correlator(2, &[2, 3]) - psi_correlator(2, &[4]));
    assert_eq!(vertex_integral(2, &[], &[1, 2]), rat(1, 240));
    assert_eq!(vertex_integral(2, &[], &[1, 1, 1]), rat(43, 2880));
    // ψ_1 pulls back to ψ_1 - D_{13}, and D_{13} ψ_3 = 0
    assert_eq!(vertex_integral(1, &[1, 0], &[1]), psi_correlator(1, &[1, 0, 2]));
}
