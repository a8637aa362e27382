use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::chiodo::{chiodo_ch, ChiodoInput};
use crate::arith::{
    one_minus_t_pow_laurent, s_function, s_function_laurent, Coeff, LaurentSeries, Rat, RationalFunction,
};
use crate::error::ValidationError;
use crate::graphs::{Ambient, Conventions, StrataExpression};
use crate::model::{normalize_for_theorem, t_exponents, LGOrbifold, Sector};

/// Which right-hand side of the limit formula to build for broad sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Twisted bundles `L_j^R` on decorated broad markings.
    Twisted,
    /// Untwisted bundles with the extra factor `(1 - t_j)^{r_j}`.
    BroadCorrected,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Twisted => "twisted",
            Variant::BroadCorrected => "broad-corrected",
        }
    }
}

/// One summand `c_l(t) · ch_l(R^•π_* L)` of the exponent.
#[derive(Clone, Debug)]
pub struct Channel {
    pub input: ChiodoInput,
    pub t_exp: i64,
    pub hodge: bool,
}

/// Everything about a sector needed to build its total class.
#[derive(Clone, Debug)]
pub struct SectorSetup {
    pub orb: LGOrbifold,
    pub sector: Sector,
    pub ambient: Ambient,
    pub channels: Vec<Channel>,
    /// `Π (1 - t^e)^n` as `(e, n)` pairs.
    pub prefactor: Vec<(i64, i64)>,
    pub degvir: i64,
    pub variant: Variant,
}

impl SectorSetup {
    /// Normalizes loop sectors (rotation to the hypothesis variable) and
    /// collects the channels. The Hodge channel is dropped in genus 0,
    /// where `E` has rank 0, unless `keep_hodge` is set.
    pub fn new(orb: &LGOrbifold, sector: &Sector, variant: Variant, keep_hodge: bool) -> Result<Self, ValidationError> {
        let (orb, sector) = normalize_for_theorem(orb, sector)?;
        let d = orb.degree;
        if orb.group_order != d {
            return Err(ValidationError::Unsupported(format!(
                "group of order {} ≠ d = {d}: only the cyclic group generated by the grading element is handled",
                orb.group_order
            )));
        }
        let g = sector.genus;
        let n = sector.n();
        let ambient = Ambient::new(g, d, &sector.monodromies);
        let texp = t_exponents(&orb)?;
        let mut channels = Vec::new();
        let mut prefactor = Vec::new();
        for j in 0..orb.num_vars() {
            let w = orb.weights[j];
            let a = match variant {
                Variant::Twisted => sector.twisted_mult(&orb, j),
                Variant::BroadCorrected => sector.mult.iter().map(|row| row[j]).collect(),
            };
            let exp = match variant {
                Variant::Twisted => -sector.ch0(&orb, j)?,
                Variant::BroadCorrected => sector.broad_count(j) - sector.ch0_untwisted(&orb, j)?,
            };
            prefactor.push((texp[j], exp));
            channels.push(Channel { input: ChiodoInput { r: d, s: w as i64, a, u: w % d }, t_exp: texp[j], hodge: false });
        }
        let eh = texp[orb.num_vars()];
        prefactor.push((eh, g as i64));
        if g > 0 || keep_hodge {
            channels.push(Channel { input: ChiodoInput::hodge(d, n), t_exp: eh, hodge: true });
        }
        for c in &channels {
            c.input.validate(&ambient)?;
        }
        let degvir = sector.degvir(&orb)?;
        Ok(SectorSetup { orb, sector, ambient, channels, prefactor, degvir, variant })
    }

    pub fn dim(&self) -> i64 {
        self.ambient.dim()
    }

    /// Valuation in `ε` of the prefactor.
    pub fn prefactor_valuation(&self) -> i64 {
        self.prefactor.iter().map(|&(_, n)| n).sum()
    }
}

/// Source of the `t`-dependent coefficients: exact in `ℚ(t)` or expanded
/// at `t = 1`.
pub trait Specialization: Sync {
    type C: Coeff;
    fn s(&self, l: usize, e: i64) -> Self::C;
    fn one_minus_t_pow(&self, e: i64, n: i64) -> Self::C;

    /// `Π (1 - t^e)^n`.
    fn product_of_powers(&self, factors: &[(i64, i64)]) -> Self::C {
        let mut acc = Self::C::unit();
        for &(e, n) in factors {
            if n != 0 {
                acc = acc.times(&self.one_minus_t_pow(e, n));
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Specialization for Exact {
    type C = RationalFunction;
    fn s(&self, l: usize, e: i64) -> RationalFunction {
        s_function(l, e).expect("l ≥ 1 and e ≠ 0 by construction")
    }
    fn one_minus_t_pow(&self, e: i64, n: i64) -> RationalFunction {
        RationalFunction::one_minus_t().compose_power(e).powi(n)
    }
}

/// Laurent expansion in `ε = t⁻¹ - 1`: `s_l` values to absolute precision
/// `s_prec`, prefactors to `pre_prec`.
#[derive(Clone, Copy, Debug)]
pub struct AtOne {
    pub s_prec: i64,
    pub pre_prec: i64,
}

impl AtOne {
    /// Precisions guaranteeing the final pairing is correct to `O(ε^target)`:
    /// the exponential part has valuation at least `-dim` and the prefactor
    /// valuation `v0`. Every factor keeps at least its leading term, since
    /// the series bookkeeping cannot represent a lower bound on the
    /// valuation of a wholly unknown series.
    pub fn for_target(setup: &SectorSetup, target: i64) -> Self {
        let dim = setup.dim().max(0);
        let v0 = setup.prefactor_valuation();
        AtOne { s_prec: (target - v0 + dim).max(1), pre_prec: (target + dim).max(v0 + 1) }
    }
}

impl Specialization for AtOne {
    type C = LaurentSeries;
    fn s(&self, l: usize, e: i64) -> LaurentSeries {
        s_function_laurent(l, e, self.s_prec).expect("l ≥ 1 and e ≠ 0 by construction")
    }
    fn one_minus_t_pow(&self, e: i64, n: i64) -> LaurentSeries {
        one_minus_t_pow_laurent(e, n, self.pre_prec)
    }

    fn product_of_powers(&self, factors: &[(i64, i64)]) -> LaurentSeries {
        // each factor `(1 - t^e)^n` has valuation `n`; keep the same relative
        // precision in all of them
        let v0: i64 = factors.iter().map(|&(_, n)| n).sum();
        let rel = self.pre_prec - v0;
        let mut acc = LaurentSeries::exact_constant(Rat::one());
        for &(e, n) in factors {
            if n != 0 {
                acc = acc.mul(&one_minus_t_pow_laurent(e, n, n + rel));
            }
        }
        acc
    }
}

/// Coefficient of `ch_l` of a channel in the exponent.
pub fn channel_coefficient<S: Specialization>(spec: &S, ch: &Channel, l: usize) -> S::C {
    let s = spec.s(l, ch.t_exp);
    if ch.hodge {
        // -s_l · ch_l(E^∨) with ch_l(E^∨) = (-1)^l ch_l(E)
        if l % 2 == 0 {
            s.negated()
        } else {
            s
        }
    } else {
        s
    }
}

pub fn prefactor<S: Specialization>(spec: &S, setup: &SectorSetup) -> S::C {
    spec.product_of_powers(&setup.prefactor)
}

/// The exponent `Σ_l Σ_channels c_l · ch_l` for `1 ≤ l ≤ l_max`, one
/// expression per `l`.
pub fn assemble_exponent<S: Specialization>(
    spec: &S,
    setup: &SectorSetup,
    l_max: usize,
    conv: &Conventions,
) -> Result<Vec<StrataExpression<S::C>>, ValidationError> {
    let mut out = Vec::with_capacity(l_max);
    for l in 1..=l_max {
        let mut acc = StrataExpression::zero(setup.ambient.clone());
        for ch in &setup.channels {
            let c = channel_coefficient(spec, ch, l);
            let x = chiodo_ch(l, &ch.input, &setup.ambient, conv)?;
            acc = acc.add(&x.map_coeffs(|q| c.scaled(q)))?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `Σ_{k ≤ cap} M^k / k!`, truncated at codimension `cap`.
pub fn exp_truncated<C: Coeff>(m: &StrataExpression<C>, cap: i64, conv: &Conventions) -> Result<StrataExpression<C>, ValidationError> {
    let mut total = StrataExpression::one(m.ambient.clone());
    let mut power = total.clone();
    for k in 1..=cap.max(0) {
        power = power.mul(m, cap, conv)?.scale_rat(&Rat::new(BigInt::one(), BigInt::from(k)));
        if power.is_empty() {
            break;
        }
        total = total.add(&power)?;
    }
    Ok(total)
}

/// Prefactor times the truncated exponential of the assembled exponent.
pub fn total_class<S: Specialization>(
    spec: &S,
    setup: &SectorSetup,
    conv: &Conventions,
) -> Result<StrataExpression<S::C>, ValidationError> {
    let cap = setup.dim();
    let parts = assemble_exponent(spec, setup, cap.max(0) as usize, conv)?;
    let mut m = StrataExpression::zero(setup.ambient.clone());
    for p in &parts {
        m = m.add(p)?;
    }
    Ok(exp_truncated(&m, cap, conv)?.scale(&prefactor(spec, setup)))
}

/// `(-1)^degvir · |G|^g / deg(o)` with `deg(o) = r^{2g-1}`.
pub fn cohft_factor(setup: &SectorSetup) -> Rat {
    let d = Rat::from_integer(BigInt::from(setup.orb.group_order));
    let g = setup.sector.genus as i32;
    let f = d.pow(g) / d.pow(2 * g - 1);
    if setup.degvir.rem_euclid(2) == 1 {
        -f
    } else {
        f
    }
}

pub fn cohft_normalize(value: &Rat, setup: &SectorSetup) -> Rat {
    if value.is_zero() {
        return Rat::zero();
    }
    value * cohft_factor(setup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::classes::GraphSum;

    fn limit(x: &LaurentSeries) -> Rat {
        for k in x.valuation()..0 {
            assert!(x.coeff(k).is_zero(), "pole ε^{k} in {x}");
        }
        x.coeff(0)
    }

    #[test]
    fn cubic_genus_zero_four_point() {
        let orb = LGOrbifold::fermat(3).unwrap();
        let sector = Sector::new(&orb, 0, &[2, 2, 2, 2]).unwrap();
        let setup = SectorSetup::new(&orb, &sector, Variant::Twisted, false).unwrap();
        let conv = Conventions::default();
        let spec = AtOne::for_target(&setup, 1);
        let a = total_class(&spec, &setup, &conv).unwrap().pair(&[0; 4]).unwrap();
        let b = GraphSum::new(&spec, &setup, &conv).pair(&[0; 4]).unwrap();
        assert_eq!(limit(&a), limit(&b));
        assert_eq!(cohft_normalize(&limit(&a), &setup), rat(1, 3));
    }
}
