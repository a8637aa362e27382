use num_traits::Zero;
use proptest::prelude::*;
use spinhodge_core::classes::Variant;
use spinhodge_core::error::{Error, ValidationError};
use spinhodge_core::graphs::Conventions;
use spinhodge_core::limits::{genus0_oracle, hodge_integral, psi_monomials, relation_certificates, IntegralOptions, SectorEvaluator, Verdict};
use spinhodge_core::model::{enumerate_sectors, LGOrbifold, Sector};

fn rotate<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    let mut w = v.to_vec();
    w.rotate_left(k % v.len());
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_markings_permutes_values(pick in 0usize..100, rot in 1usize..3, which in 0usize..3) {
        let orb = [LGOrbifold::fermat(3), LGOrbifold::fermat(4), LGOrbifold::chain(&[2, 3])][which].clone().unwrap();
        let sectors = enumerate_sectors(&orb, 1, 3, true);
        prop_assume!(!sectors.is_empty());
        let s = &sectors[pick % sectors.len()];
        let t = Sector::new(&orb, 1, &rotate(&s.monodromies, rot)).unwrap();
        let opts = IntegralOptions::default();
        for b in psi_monomials(3, 2) {
            let x = hodge_integral(&orb, s, &b, &opts).unwrap().value;
            let y = hodge_integral(&orb, &t, &rotate(&b, rot), &opts).unwrap().value;
            prop_assert_eq!(x, y);
        }
    }
}

#[test]
fn empty_components_give_zero() {
    let orb = LGOrbifold::fermat(3).unwrap();
    let s = Sector::new(&orb, 0, &[1, 1, 1]).unwrap();
    assert!(s.empty);
    let r = hodge_integral(&orb, &s, &[0, 0, 0], &IntegralOptions::default()).unwrap();
    assert!(r.value.is_zero());
    assert!(r.sector.empty);
    assert!(relation_certificates(&orb, &s, &IntegralOptions::default()).unwrap().certificates.is_empty());
}

#[test]
fn pole_bound_formula() {
    for orb in [LGOrbifold::fermat(4).unwrap(), LGOrbifold::chain(&[2, 3]).unwrap()] {
        for g in 0..3u32 {
            for s in enumerate_sectors(&orb, g, 2, false) {
                let p = s.pole_bound(&orb).unwrap();
                assert_eq!(p, 2 * g as i64 - 3 + 2 - s.degvir(&orb).unwrap());
            }
        }
    }
}

#[test]
fn only_one_degree_survives_the_limit() {
    let orb = LGOrbifold::fermat(4).unwrap();
    for s in enumerate_sectors(&orb, 1, 2, true) {
        let ev = SectorEvaluator::new(&orb, &s, IntegralOptions::default(), 1).unwrap();
        let deg = s.dim() - ev.info.degvir - 1;
        for b in psi_monomials(2, s.dim() as u32) {
            let r = ev.integral(&b).unwrap();
            if b.iter().sum::<u32>() as i64 != deg {
                assert!(r.value.is_zero(), "{s} {b:?}");
            }
        }
    }
}

#[test]
fn narrow_sectors_do_not_see_the_variant() {
    let orb = LGOrbifold::fermat(3).unwrap();
    for s in enumerate_sectors(&orb, 1, 2, true) {
        for b in psi_monomials(2, 2) {
            let t = hodge_integral(&orb, &s, &b, &IntegralOptions::default()).unwrap();
            let opts = IntegralOptions { variant: Variant::BroadCorrected, ..IntegralOptions::default() };
            let c = hodge_integral(&orb, &s, &b, &opts).unwrap();
            assert_eq!(t.value, c.value);
            assert_eq!(t.laurent, c.laurent);
        }
    }
}

#[test]
fn truncation_check_and_prelimit() {
    let orb = LGOrbifold::fermat(3).unwrap();
    let opts = IntegralOptions { prelimit: true, truncation_check: true, ..IntegralOptions::default() };
    for s in enumerate_sectors(&orb, 1, 2, true) {
        for b in psi_monomials(2, 2) {
            let r = hodge_integral(&orb, &s, &b, &opts).unwrap();
            let f = r.prelimit.expect("requested");
            assert!(f.order_at_one() >= 0);
        }
    }
}

#[test]
fn genus_zero_limit_matches_the_concave_formula() {
    let conv = Conventions::default();
    let mut nonzero = 0;
    for orb in [LGOrbifold::fermat(3).unwrap(), LGOrbifold::fermat(4).unwrap()] {
        for s in enumerate_sectors(&orb, 0, 4, true) {
            let ev = SectorEvaluator::new(&orb, &s, IntegralOptions::default(), 1).unwrap();
            for b in psi_monomials(4, 1) {
                let o = genus0_oracle(&orb, &s, &b, &conv).unwrap();
                assert_eq!(ev.integral(&b).unwrap().value, o, "{} {s} {b:?}", orb.shape);
                nonzero += usize::from(!o.is_zero());
            }
        }
    }
    assert!(nonzero > 0);
    // broad markings are outside the oracle's reach
    let orb = LGOrbifold::chain(&[2, 3]).unwrap();
    let broad = enumerate_sectors(&orb, 0, 4, false).into_iter().find(|s| !s.is_narrow()).unwrap();
    let e = genus0_oracle(&orb, &broad, &[0, 0, 0, 1], &conv).unwrap_err();
    assert!(matches!(e, Error::Validation(ValidationError::Unsupported(_))));
}

#[test]
fn genus_one_relations_pass() {
    let orb = LGOrbifold::fermat(3).unwrap();
    let mut with_poles = 0;
    for s in enumerate_sectors(&orb, 1, 3, true) {
        let rep = relation_certificates(&orb, &s, &IntegralOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{s}");
        assert!(rep.lowest_exponent.is_none_or(|l| l >= -rep.sector.pole_bound.max(0)));
        with_poles += usize::from(!rep.certificates.is_empty());
    }
    assert!(with_poles > 0);
}

#[test]
fn wrong_constants_break_regularity() {
    let orb = LGOrbifold::fermat(3).unwrap();
    let s = Sector::new(&orb, 1, &[2, 2, 2]).unwrap();
    let bad = Conventions { excess: spinhodge_core::arith::int(1), ..Conventions::default() };
    let opts = IntegralOptions { conventions: bad, ..IntegralOptions::default() };
    let rep = relation_certificates(&orb, &s, &opts).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
}
