use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::assemble::{exp_truncated, AtOne, SectorSetup, Variant};
use super::chiodo::{chiodo_ch, ChiodoInput};
use super::graphsum::GraphSum;
use crate::arith::{factorial, format_rat, rat, Rat};
use crate::error::CalibrationError;
use crate::graphs::{Ambient, Conventions, DecoratedGraph, Orientation, StrataExpression};
use crate::model::{LGOrbifold, Sector};

/// One oracle of the calibration suite evaluated under one candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationCheck {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationReport {
    pub conventions: Conventions,
    pub checks: Vec<CalibrationCheck>,
    pub candidates_tried: usize,
    pub fingerprint: String,
}

fn check(name: &str, expected: &Rat, observed: &Rat) -> CalibrationCheck {
    CalibrationCheck {
        name: name.to_string(),
        expected: format_rat(expected),
        observed: format_rat(observed),
        pass: expected == observed,
    }
}

/// `ch(E)` on `M̄_{g,n}` turned into the total Chern class
/// `exp(Σ (-1)^{l-1} (l-1)! ch_l)`, returned degree by degree.
pub fn lambda_classes(g: u32, n: usize, conv: &Conventions) -> Result<Vec<StrataExpression<Rat>>, CalibrationError> {
    let amb = Ambient::new(g, 1, &vec![0; n]);
    let dim = amb.dim();
    let input = ChiodoInput::hodge(1, n);
    let mut m = StrataExpression::zero(amb.clone());
    for l in 1..=dim.max(0) as usize {
        let ch = chiodo_ch(l, &input, &amb, conv).map_err(|e| CalibrationError(e.to_string()))?;
        let mut c = Rat::from_integer(factorial(l as u64 - 1));
        if l % 2 == 0 {
            c = -c;
        }
        m = m.add(&ch.scale_rat(&c)).map_err(|e| CalibrationError(e.to_string()))?;
    }
    let total = exp_truncated(&m, dim, conv).map_err(|e| CalibrationError(e.to_string()))?;
    Ok((0..=dim).map(|k| total.graded_part(k)).collect())
}

/// `∫_{M̄_{1,1}}` of the degree-one Hodge Chern character.
pub fn mumford_lambda_one(conv: &Conventions) -> Rat {
    let amb = Ambient::new(1, 1, &[1]);
    chiodo_ch(1, &ChiodoInput::hodge(1, 1), &amb, conv)
        .and_then(|x| x.pair(&[0]))
        .unwrap_or_else(|_| Rat::zero())
}

/// The self-loop boundary stratum of `M̄_{1,1}` weighted by `1/|Aut|`.
pub fn self_loop_pairing() -> Rat {
    let amb = Ambient::new(1, 1, &[1]);
    let mut x = StrataExpression::<Rat>::zero(amb);
    let mut gr = DecoratedGraph::smooth(0, &[0]);
    gr.edges.push((crate::graphs::Half::new(0, 0), crate::graphs::Half::new(0, 0)));
    let aut = gr.automorphism_count();
    x.add_term(gr, Rat::new(BigInt::one(), BigInt::from(aut)));
    x.pair(&[0]).unwrap_or_else(|_| Rat::zero())
}

/// Degree-zero Chern character against Riemann–Roch on random admissible
/// inputs. Returns the number of mismatches.
pub fn riemann_roch_mismatches(samples: usize, seed: u64, conv: &Conventions) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    let mut done = 0;
    while done < samples {
        let r: u64 = rng.gen_range(1..=6);
        let g: u32 = rng.gen_range(0..=2);
        let n: usize = rng.gen_range(1..=4);
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            continue;
        }
        let u: u64 = rng.gen_range(0..r);
        let k: Vec<u64> = (0..n).map(|_| rng.gen_range(0..r)).collect();
        let a: Vec<u64> = k.iter().map(|&ki| {
            let m = (u * ki) % r;
            if m == 0 && rng.gen_bool(0.5) { r } else { m }
        }).collect();
        let amb = Ambient::new(g, r, &k);
        // the root itself must exist on the smooth locus
        if !amb.nonempty() {
            continue;
        }
        let s = u as i64 + r as i64 * rng.gen_range(-1..=1);
        let input = ChiodoInput { r, s, a: a.clone(), u };
        if input.validate(&amb).is_err() {
            continue;
        }
        done += 1;
        // deg L = (s(2g-2+n) - Σa)/r, χ = deg + 1 - g
        let chi = {
            let num = s * (2 * g as i64 - 2 + n as i64) - a.iter().map(|&x| x as i64).sum::<i64>();
            Rat::new(BigInt::from(num), BigInt::from(r)) + Rat::from_integer(BigInt::from(1 - g as i64))
        };
        let ch0 = chiodo_ch(0, &input, &amb, conv).map(|x| x.coefficient(&amb.smooth_graph()));
        if ch0.ok() != Some(chi) {
            bad += 1;
        }
    }
    bad
}

/// Whether every pairing of the reference sector is regular at `t = 1`.
fn reference_regular(conv: &Conventions) -> Result<bool, CalibrationError> {
    let err = |e: crate::error::ValidationError| CalibrationError(e.to_string());
    let orb = LGOrbifold::fermat(3).map_err(err)?;
    let sector = Sector::new(&orb, 1, &[2, 2, 2]).map_err(err)?;
    let setup = SectorSetup::new(&orb, &sector, Variant::Twisted, false).map_err(err)?;
    let spec = AtOne::for_target(&setup, 1);
    let gs = GraphSum::new(&spec, &setup, conv);
    for b in [[0, 0, 0], [1, 0, 0], [1, 1, 0], [2, 0, 0]] {
        let x = gs.pair(&b).map_err(err)?;
        if (x.valuation()..0).any(|k| !x.coeff(k).is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All oracles for one candidate.
pub fn evaluate_candidate(conv: &Conventions) -> Result<Vec<CalibrationCheck>, CalibrationError> {
    let mut out = vec![
        check("mumford lambda_1 on M(1,1)", &rat(1, 24), &mumford_lambda_one(conv)),
        check("self-loop stratum on M(1,1)", &rat(1, 2), &self_loop_pairing()),
        check(
            "ch_0 vs Riemann-Roch (50 random inputs), mismatches",
            &Rat::zero(),
            &Rat::from_integer(BigInt::from(riemann_roch_mismatches(50, 0x5eed, conv))),
        ),
    ];
    let lam = lambda_classes(2, 1, conv)?;
    let pair = |x: &StrataExpression<Rat>, b: u32| x.pair(&[b]).map_err(|e| CalibrationError(e.to_string()));
    out.push(check("lambda_2 psi^2 on M(2,1)", &rat(7, 5760), &pair(&lam[2], 2)?));
    let l1 = &lam[1];
    let l1_cubed = l1
        .mul(l1, 4, conv)
        .and_then(|x| x.mul(l1, 4, conv))
        .map_err(|e| CalibrationError(e.to_string()))?;
    out.push(check("lambda_1^3 psi on M(2,1)", &rat(1, 1440), &pair(&l1_cubed, 1)?));
    let regular = reference_regular(conv)?;
    out.push(CalibrationCheck {
        name: "regularity of fermat(3) g=1 m=(2,2,2)".into(),
        expected: "regular".into(),
        observed: if regular { "regular" } else { "pole" }.into(),
        pass: regular,
    });
    Ok(out)
}

/// Candidate gluing constants: boundary scale, excess sign and edge
/// polynomial orientation.
pub fn default_candidates() -> Vec<Conventions> {
    let mut out = Vec::new();
    for scale in [rat(1, 1), rat(1, 2), rat(2, 1)] {
        for excess in [rat(-1, 1), rat(1, 1)] {
            for orientation in [Orientation::PsiFirst, Orientation::PsiSecond] {
                out.push(Conventions { boundary_scale: scale.clone(), excess: excess.clone(), orientation });
            }
        }
    }
    out
}

pub fn fingerprint(conv: &Conventions, checks: &[CalibrationCheck]) -> String {
    let mut text = format!(
        "boundary_scale={};excess={};orientation={:?}\n",
        format_rat(&conv.boundary_scale),
        format_rat(&conv.excess),
        conv.orientation
    );
    for c in checks {
        let _ = writeln!(text, "{}={}", c.name, c.observed);
    }
    let digest = Sha256::digest(text.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest.iter() {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

/// Runs every oracle on every candidate; exactly one candidate must pass
/// all of them.
pub fn calibrate_from(candidates: &[Conventions]) -> Result<CalibrationReport, CalibrationError> {
    let mut passing = Vec::new();
    for conv in candidates {
        let checks = evaluate_candidate(conv)?;
        if checks.iter().all(|c| c.pass) {
            passing.push((conv.clone(), checks));
        }
    }
    match passing.len() {
        0 => Err(CalibrationError(format!(
            "none of the {} candidate conventions satisfies all calibration oracles",
            candidates.len()
        ))),
        1 => {
            let (conventions, checks) = passing.pop().expect("one element");
            let fingerprint = fingerprint(&conventions, &checks);
            Ok(CalibrationReport { conventions, checks, candidates_tried: candidates.len(), fingerprint })
        }
        k => Err(CalibrationError(format!("{k} candidate conventions pass every oracle; pinning is ambiguous"))),
    }
}

pub fn calibrate() -> Result<CalibrationReport, CalibrationError> {
    calibrate_from(&default_candidates())
}

/// Calibrated conventions, computed once per process.
pub fn pinned_conventions() -> Result<Conventions, CalibrationError> {
    static PINNED: OnceLock<Result<Conventions, CalibrationError>> = OnceLock::new();
    PINNED.get_or_init(|| calibrate().map(|r| r.conventions)).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Coeff;

    #[test]
    fn pins_the_expected_constants() {
        let report = calibrate().unwrap();
        assert_eq!(report.conventions, Conventions::default());
        assert_eq!(report.fingerprint, calibrate().unwrap().fingerprint);
    }

    #[test]
    fn impossible_pinning_is_an_error() {
        let bad = Conventions { boundary_scale: rat(3, 1), ..Conventions::default() };
        assert!(calibrate_from(&[bad]).is_err());
        assert!(calibrate_from(&[]).is_err());
    }

    #[test]
    fn lambda_one_is_coefficient_of_hodge() {
        let lam = lambda_classes(1, 1, &Conventions::default()).unwrap();
        assert_eq!(lam[1].pair(&[0]).unwrap(), rat(1, 24));
        assert!(Coeff::is_nil(&lam[0].pair(&[0]).unwrap()));
    }
}
