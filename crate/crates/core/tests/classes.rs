use num_traits::Zero;
use proptest::prelude::*;
use spinhodge_core::arith::{int, rat, LaurentSeries};
use spinhodge_core::classes::{
    calibrate, chiodo_ch, pinned_conventions, total_class, AtOne, ChiodoInput, GraphSum, SectorSetup, Variant,
};
use spinhodge_core::graphs::{Ambient, Conventions};
use spinhodge_core::limits::psi_monomials;
use spinhodge_core::model::{enumerate_sectors, LGOrbifold};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rank_is_riemann_roch(r in 1u64..7, g in 0u32..3, k in prop::collection::vec(0u64..6, 1..5), u in 0u64..6, shift in -1i64..2, bump in any::<u64>()) {
        let n = k.len();
        prop_assume!(2 * g as i64 - 2 + n as i64 > 0);
        let u = u % r;
        let k: Vec<u64> = k.iter().map(|x| x % r).collect();
        // a_i ≡ u k_i mod r in [0, r], trivial residues sometimes lifted to r
        let a: Vec<u64> = k.iter().enumerate().map(|(i, &ki)| {
            let m = (u * ki) % r;
            if m == 0 && (bump >> i) & 1 == 1 { r } else { m }
        }).collect();
        let amb = Ambient::new(g, r, &k);
        prop_assume!(amb.nonempty());
        let s = u as i64 + r as i64 * shift;
        let input = ChiodoInput { r, s, a: a.clone(), u };
        prop_assume!(input.validate(&amb).is_ok());
        let num = s * (2 * g as i64 - 2 + n as i64) - a.iter().map(|&x| x as i64).sum::<i64>();
        let chi = rat(num, r as i64) + int(1 - g as i64);
        let ch0 = chiodo_ch(0, &input, &amb, &Conventions::default()).unwrap();
        prop_assert_eq!(ch0.coefficient(&amb.smooth_graph()), chi);
        prop_assert!(ch0.len() <= 1);
    }
}

fn same_to(a: &LaurentSeries, b: &LaurentSeries, top: i64) -> bool {
    let low = a.valuation().min(b.valuation());
    (low..top).all(|k| a.coeff(k) == b.coeff(k))
}

#[test]
fn strata_products_agree_with_the_graph_sum() {
    let conv = Conventions::default();
    let cases = [(LGOrbifold::fermat(3).unwrap(), 1u32, 1usize), (LGOrbifold::fermat(3).unwrap(), 1, 2), (LGOrbifold::chain(&[2, 3]).unwrap(), 1, 1), (LGOrbifold::fermat(4).unwrap(), 1, 2)];
    let mut compared = 0;
    for (orb, g, n) in cases {
        for sector in enumerate_sectors(&orb, g, n, false) {
            for variant in [Variant::Twisted, Variant::BroadCorrected] {
                let setup = SectorSetup::new(&orb, &sector, variant, false).unwrap();
                let spec = AtOne::for_target(&setup, 2);
                let a = total_class(&spec, &setup, &conv).unwrap();
                let b = GraphSum::new(&spec, &setup, &conv);
                for m in psi_monomials(n, sector.dim() as u32) {
                    let x = a.pair(&m).unwrap();
                    let y = b.pair(&m).unwrap();
                    assert!(same_to(&x, &y, 2), "{} {sector} {m:?}: {x} vs {y}", orb.shape);
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 20);
}

#[test]
fn hodge_channel_is_inert_in_genus_zero() {
    let conv = Conventions::default();
    for orb in [LGOrbifold::fermat(3).unwrap(), LGOrbifold::fermat(5).unwrap(), LGOrbifold::chain(&[2, 3]).unwrap()] {
        for sector in enumerate_sectors(&orb, 0, 4, false) {
            let without = SectorSetup::new(&orb, &sector, Variant::Twisted, false).unwrap();
            let with = SectorSetup::new(&orb, &sector, Variant::Twisted, true).unwrap();
            assert_eq!(with.channels.len(), without.channels.len() + 1);
            let spec = AtOne::for_target(&without, 2);
            let a = GraphSum::new(&spec, &without, &conv);
            let b = GraphSum::new(&spec, &with, &conv);
            for m in psi_monomials(4, 1) {
                assert!(same_to(&a.pair(&m).unwrap(), &b.pair(&m).unwrap(), 2), "{} {sector} {m:?}", orb.shape);
            }
        }
    }
}

#[test]
fn decorations_shift_the_rank() {
    let orb = LGOrbifold::chain(&[2, 3]).unwrap();
    let mut decorated = 0;
    for g in 0..3u32 {
        for n in 1..4usize {
            for s in enumerate_sectors(&orb, g, n, false) {
                for j in 0..orb.num_vars() {
                    assert_eq!(s.ch0_untwisted(&orb, j).unwrap() - s.ch0(&orb, j).unwrap(), s.decorated_count(j));
                    let a = s.twisted_mult(&orb, j);
                    for i in 0..n {
                        assert_eq!(a[i], if s.decorated[i][j] { orb.exponent() } else { s.mult[i][j] });
                    }
                    decorated += s.decorated_count(j);
                }
            }
        }
    }
    assert!(decorated > 0);
}

#[test]
fn even_hodge_characters_vanish() {
    // ch_{2k}(E) = 0 for k ≥ 1
    let conv = Conventions::default();
    for (g, n) in [(1u32, 1usize), (1, 2), (1, 3), (1, 4), (2, 1)] {
        let amb = Ambient::new(g, 1, &vec![0; n]);
        let input = ChiodoInput::hodge(1, n);
        let dim = amb.dim() as usize;
        for l in (2..=dim).step_by(2) {
            let ch = chiodo_ch(l, &input, &amb, &conv).unwrap();
            for b in psi_monomials(n, (dim - l) as u32) {
                if b.iter().sum::<u32>() as usize == dim - l {
                    assert!(ch.pair(&b).unwrap().is_zero(), "g={g} n={n} l={l} b={b:?}");
                }
            }
        }
    }
}

#[test]
fn calibration_is_unique_and_stable() {
    let a = calibrate().unwrap();
    let b = calibrate().unwrap();
    assert_eq!(a, b);
    assert_eq!(a.conventions, pinned_conventions().unwrap());
    assert!(a.checks.iter().all(|c| c.pass));
}
