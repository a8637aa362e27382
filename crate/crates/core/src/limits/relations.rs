use num_traits::Zero;

use super::integral::{psi_monomials, IntegralOptions, SectorEvaluator, SectorInfo};
use crate::arith::Rat;
use crate::error::Error;
use crate::model::{LGOrbifold, Sector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Pairings of the `ε^m` coefficient (`m < 0`) of the total class against
/// every `ψ`-monomial. The family only detects relations visible to these
/// pairings, hence the label.
#[derive(Clone, Debug)]
pub struct RelationCertificate {
    pub m: i64,
    pub pairings: Vec<(Vec<u32>, Rat)>,
    pub verdict: Verdict,
    pub completeness: &'static str,
}

/// A coefficient below the degree bound `m < degvir + g - (dim - |b|)`
/// that does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingViolation {
    pub psi_powers: Vec<u32>,
    pub m: i64,
    pub coefficient: Rat,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub sector: SectorInfo,
    pub certificates: Vec<RelationCertificate>,
    pub grading_checks: usize,
    pub grading_violations: Vec<GradingViolation>,
    pub lowest_exponent: Option<i64>,
    pub verdict: Verdict,
}

/// Certificates for every `m ∈ [-p, -1]` plus the refined grading bound on
/// every coefficient it constrains (including `m ≥ 0`).
pub fn relation_certificates(orb: &LGOrbifold, sector: &Sector, options: &IntegralOptions) -> Result<RelationReport, Error> {
    let info = SectorInfo::new(orb, sector);
    let p = info.pole_bound;
    let g = sector.genus as i64;
    let dim = sector.dim();
    if sector.empty || p <= 0 {
        return Ok(RelationReport {
            sector: info,
            certificates: Vec::new(),
            grading_checks: 0,
            grading_violations: Vec::new(),
            lowest_exponent: None,
            verdict: Verdict::Pass,
        });
    }
    // the bound reaches up to ε^{degvir + g - 1}
    let target = (info.degvir + g).max(1);
    let eval = SectorEvaluator::new(orb, sector, options.clone(), target)?;
    let monomials = psi_monomials(sector.n(), dim as u32);
    let mut expansions = Vec::with_capacity(monomials.len());
    for b in &monomials {
        expansions.push((b.clone(), eval.laurent(b)?));
    }
    let mut certificates = Vec::new();
    for m in -p..0 {
        let pairings: Vec<(Vec<u32>, Rat)> = expansions.iter().map(|(b, x)| (b.clone(), x.coeff(m))).collect();
        let verdict = if pairings.iter().all(|(_, c)| c.is_zero()) { Verdict::Pass } else { Verdict::Fail };
        certificates.push(RelationCertificate { m, pairings, verdict, completeness: "pairing-complete" });
    }
    let mut grading_checks = 0;
    let mut grading_violations = Vec::new();
    let mut lowest: Option<i64> = None;
    for (b, x) in &expansions {
        if let Some((k, _)) = x.terms().find(|(_, c)| !c.is_zero()) {
            lowest = Some(lowest.map_or(k, |l| l.min(k)));
        }
        let deg = dim - b.iter().map(|&v| v as i64).sum::<i64>();
        let bound = info.degvir + g - deg;
        for m in x.valuation().min(-p)..bound.min(x.precision()) {
            grading_checks += 1;
            let c = x.coeff(m);
            if !c.is_zero() {
                grading_violations.push(GradingViolation { psi_powers: b.clone(), m, coefficient: c });
            }
        }
    }
    let below_bound = lowest.is_some_and(|l| l < -p);
    let verdict = if certificates.iter().all(|c| c.verdict == Verdict::Pass) && grading_violations.is_empty() && !below_bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(RelationReport { sector: info, certificates, grading_checks, grading_violations, lowest_exponent: lowest, verdict })
}
