use num_traits::Zero;

use crate::arith::{factorial, Rat};
use crate::classes::{chiodo_ch, cohft_normalize, exp_truncated, SectorSetup, Variant};
use crate::error::{Error, ValidationError};
use crate::graphs::{enumerate_stable_graphs, enumerate_weightings, Conventions, HalfRef, StrataExpression};
use crate::model::{LGOrbifold, Sector};

/// Sign relating `∫ c_top(⊕_j R¹π_* L_j)` to the limit before the CohFT
/// factor, pinned on the cubic genus-zero four-point sector.
pub const ORACLE_SIGN: i32 = 1;

/// Genus-zero concavity: on every weighted stable graph each `L_j` has
/// negative degree on every component, so `R⁰π_* L_j = 0` fiberwise.
pub fn concavity_certificate(setup: &SectorSetup) -> Result<(), String> {
    let sector = &setup.sector;
    if sector.genus != 0 {
        return Err(format!("genus {} > 0", sector.genus));
    }
    if !sector.is_narrow() {
        return Err("a marking is broad".into());
    }
    let amb = &setup.ambient;
    let d = amb.r as i64;
    let dim = amb.dim().max(0) as usize;
    for gr in enumerate_stable_graphs(0, amb.n, dim) {
        for w in enumerate_weightings(&gr, amb.r, &amb.leg_weights) {
            for ch in setup.channels.iter().filter(|c| !c.hodge) {
                for v in 0..w.num_vertices() {
                    let mut a = 0i64;
                    for h in w.halves_at(v) {
                        a += match h {
                            HalfRef::Leg(i) => ch.input.a[i] as i64,
                            _ => ((ch.input.u * w.half(h).weight) % amb.r) as i64,
                        };
                    }
                    let num = ch.input.s * (w.valence(v) as i64 - 2) - a;
                    if num.rem_euclid(d) != 0 || num >= 0 {
                        return Err(format!("degree {num}/{d} ≥ 0 on a component of {:?}", w));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `∫ e(⊕_j (R¹π_* L_j)^∨) Π ψ^{b_i}` for concave genus-zero sectors, from
/// the Chern characters through Newton's identities, normalized like the
/// limit formula.
pub fn genus0_oracle(orb: &LGOrbifold, sector: &Sector, b: &[u32], conv: &Conventions) -> Result<Rat, Error> {
    if sector.empty {
        return Ok(Rat::zero());
    }
    let setup = SectorSetup::new(orb, sector, Variant::Twisted, false)?;
    concavity_certificate(&setup).map_err(|why| ValidationError::Unsupported(format!("oracle unavailable: {why}")))?;
    let dim = setup.dim();
    let total_b: i64 = b.iter().map(|&x| x as i64).sum();
    if total_b + setup.degvir != dim {
        return Ok(Rat::zero());
    }
    // c(R¹) = exp(Σ (-1)^{l-1} (l-1)! ch_l(R¹)) with ch_l(R¹) = -ch_l(R^•π_* L)
    let mut m = StrataExpression::<Rat>::zero(setup.ambient.clone());
    for ch in setup.channels.iter().filter(|c| !c.hodge) {
        for l in 1..=dim.max(0) as usize {
            let mut c = Rat::from_integer(factorial(l as u64 - 1));
            if l % 2 == 1 {
                c = -c;
            }
            m = m.add(&chiodo_ch(l, &ch.input, &setup.ambient, conv)?.scale_rat(&c))?;
        }
    }
    let top = exp_truncated(&m, dim, conv)?.graded_part(setup.degvir);
    let raw = top.pair(b)?;
    Ok(cohft_normalize(&raw, &setup) * Rat::from_integer(ORACLE_SIGN.into()))
}
