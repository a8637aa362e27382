use num_traits::Zero;

use crate::arith::{format_rat, LaurentSeries, Rat, RationalFunction};
use crate::classes::{cohft_normalize, total_class, AtOne, Exact, GraphSum, SectorSetup, Variant};
use crate::error::{Error, IntegrityError, ValidationError};
use crate::graphs::Conventions;
use crate::model::{LGOrbifold, Sector};

/// Plain description of a sector for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorInfo {
    pub shape: String,
    pub weights: Vec<u64>,
    pub degree: u64,
    pub genus: u32,
    pub monodromies: Vec<u64>,
    pub degvir: i64,
    pub pole_bound: i64,
    pub empty: bool,
}

impl SectorInfo {
    pub fn new(orb: &LGOrbifold, sector: &Sector) -> Self {
        let (degvir, pole_bound) = if sector.empty {
            (0, 0)
        } else {
            (sector.degvir(orb).unwrap_or(0), sector.pole_bound(orb).unwrap_or(0))
        };
        SectorInfo {
            shape: orb.shape.to_string(),
            weights: orb.weights.clone(),
            degree: orb.degree,
            genus: sector.genus,
            monodromies: sector.monodromies.clone(),
            degvir,
            pole_bound,
            empty: sector.empty,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntegralOptions {
    pub variant: Variant,
    pub conventions: Conventions,
    /// Also compute the exact value in `ℚ(t)` before the limit.
    pub prelimit: bool,
    /// Recompute at higher precision and through the strata-product route
    /// and compare.
    pub truncation_check: bool,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions { variant: Variant::Twisted, conventions: Conventions::default(), prelimit: false, truncation_check: false }
    }
}

#[derive(Clone, Debug)]
pub struct HodgeIntegralResult {
    pub sector: SectorInfo,
    pub psi_powers: Vec<u32>,
    pub variant: Variant,
    pub prelimit: Option<RationalFunction>,
    /// Paired value (before normalization) expanded in `ε = t⁻¹ - 1`.
    pub laurent: LaurentSeries,
    /// `ε⁰` coefficient after the normalization factor.
    pub value: Rat,
    /// Minus the lowest exponent with a nonzero coefficient (0 for a zero
    /// series); positive means a pole.
    pub pole_order_found: i64,
}

/// `b` with `Σ b_i ≤ max`, in lexicographic order.
pub fn psi_monomials(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for x in 0..=(max - used) {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn lowest_nonzero(x: &LaurentSeries) -> Option<i64> {
    x.terms().find(|(_, c)| !c.is_zero()).map(|(k, _)| k)
}

/// Graph-sum evaluator of one sector, reused across `ψ`-monomials.
pub struct SectorEvaluator {
    pub orb: LGOrbifold,
    pub sector: Sector,
    pub setup: Option<SectorSetup>,
    pub info: SectorInfo,
    pub options: IntegralOptions,
    target: i64,
    sum: Option<GraphSum<LaurentSeries>>,
}

impl SectorEvaluator {
    /// `target`: the expansion is exact up to `O(ε^target)`; at least 1.
    pub fn new(orb: &LGOrbifold, sector: &Sector, options: IntegralOptions, target: i64) -> Result<Self, ValidationError> {
        let info = SectorInfo::new(orb, sector);
        let target = target.max(1);
        if sector.empty {
            return Ok(SectorEvaluator { orb: orb.clone(), sector: sector.clone(), setup: None, info, options, target, sum: None });
        }
        let setup = SectorSetup::new(orb, sector, options.variant, false)?;
        let spec = AtOne::for_target(&setup, target);
        let sum = GraphSum::new(&spec, &setup, &options.conventions);
        Ok(SectorEvaluator { orb: orb.clone(), sector: sector.clone(), setup: Some(setup), info, options, target, sum: Some(sum) })
    }

    pub fn dim(&self) -> i64 {
        self.sector.dim()
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    /// Paired Laurent expansion (before normalization).
    pub fn laurent(&self, b: &[u32]) -> Result<LaurentSeries, ValidationError> {
        match &self.sum {
            None => Ok(LaurentSeries::zero_to(crate::arith::EXACT)),
            Some(s) => s.pair(b),
        }
    }

    pub fn integral(&self, b: &[u32]) -> Result<HodgeIntegralResult, Error> {
        if b.len() != self.sector.n() {
            return Err(ValidationError::Ambient(format!("{} ψ powers for {} markings", b.len(), self.sector.n())).into());
        }
        let laurent = self.laurent(b)?;
        let low = lowest_nonzero(&laurent);
        let pole_order_found = low.map(|k| -k).unwrap_or(0);
        if pole_order_found > 0 {
            return Err(IntegrityError::Pole(format!(
                "{} {} b={:?}: pole of order {} (bound p = {}), expansion {}",
                self.info.shape, self.sector, b, pole_order_found, self.info.pole_bound, laurent
            ))
            .into());
        }
        let raw = laurent.coeff(0);
        let Some(setup) = &self.setup else {
            return Ok(HodgeIntegralResult {
                sector: self.info.clone(),
                psi_powers: b.to_vec(),
                variant: self.options.variant,
                prelimit: None,
                laurent,
                value: Rat::zero(),
                pole_order_found,
            });
        };
        let expected_degree = self.dim() - setup.degvir - self.sector.genus as i64;
        let total_b: i64 = b.iter().map(|&x| x as i64).sum();
        if total_b != expected_degree && !raw.is_zero() {
            return Err(IntegrityError::Internal(format!(
                "nonzero limit {} for ψ-degree {total_b} ≠ {expected_degree}",
                format_rat(&raw)
            ))
            .into());
        }
        let value = cohft_normalize(&raw, setup);
        let prelimit = if self.options.prelimit {
            let gs = GraphSum::new(&Exact, setup, &self.options.conventions);
            Some(gs.pair(b)?)
        } else {
            None
        };
        if self.options.truncation_check {
            self.check_truncation(setup, b, &laurent, prelimit.as_ref())?;
        }
        Ok(HodgeIntegralResult {
            sector: self.info.clone(),
            psi_powers: b.to_vec(),
            variant: self.options.variant,
            prelimit,
            laurent,
            value,
            pole_order_found,
        })
    }

    /// Independent expansions must agree on every coefficient both know.
    fn check_truncation(
        &self,
        setup: &SectorSetup,
        b: &[u32],
        laurent: &LaurentSeries,
        prelimit: Option<&RationalFunction>,
    ) -> Result<(), Error> {
        let conv = &self.options.conventions;
        let deeper = AtOne::for_target(setup, self.target + 2);
        let mut others = vec![("deeper expansion", GraphSum::new(&deeper, setup, conv).pair(b)?)];
        let spec = AtOne::for_target(setup, self.target);
        others.push(("strata products", total_class(&spec, setup, conv)?.pair(b)?));
        if let Some(f) = prelimit {
            others.push(("exact rational function", f.laurent_at_one(self.target)));
        }
        for (name, other) in others {
            let top = laurent.precision().min(other.precision()).min(self.target);
            let low = laurent.valuation().min(other.valuation());
            for k in low..top {
                if laurent.coeff(k) != other.coeff(k) {
                    return Err(IntegrityError::Internal(format!(
                        "truncation check ({name}) disagrees at ε^{k}: {} vs {}",
                        format_rat(&laurent.coeff(k)),
                        format_rat(&other.coeff(k))
                    ))
                    .into());
                }
            }
        }
        Ok(())
    }
}

/// `∫ λ_g^∨ c_vir Π ψ_i^{b_i}` in the normalization of the CohFT.
pub fn hodge_integral(orb: &LGOrbifold, sector: &Sector, b: &[u32], options: &IntegralOptions) -> Result<HodgeIntegralResult, Error> {
    SectorEvaluator::new(orb, sector, options.clone(), 1)?.integral(b)
}
