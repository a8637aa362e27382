use std::fmt;

use num_traits::{One, Zero};

use super::coeff::Coeff;
use super::laurent::LaurentSeries;
use super::poly::Poly;
use super::Rat;

/// Element of ℚ(t) stored as a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Builds `num/den` and reduces it. Panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::constant(Rat::zero());
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g);
        let (mut den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = Rat::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn constant(c: Rat) -> Self {
        RationalFunction { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    /// The monomial `t^e` for any integer `e`.
    pub fn t_power(e: i64) -> Self {
        let m = e.unsigned_abs() as usize;
        let mono = Poly::monomial(Rat::one(), m);
        if e >= 0 {
            Self::from_poly(mono)
        } else {
            RationalFunction { num: Poly::one(), den: mono }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::constant(Rat::zero());
        }
        RationalFunction { num: self.num.scale(r), den: self.den.clone() }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn powi(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let m = e.unsigned_abs() as u32;
        RationalFunction { num: base.num.pow(m), den: base.den.pow(m) }
    }

    /// The substitution `t ↦ t^e` for a nonzero integer `e`.
    pub fn compose_power(&self, e: i64) -> Self {
        assert!(e != 0, "substitution t -> t^0 is not invertible");
        let m = e.unsigned_abs() as usize;
        if e > 0 {
            return Self::new(self.num.spread(m), self.den.spread(m));
        }
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        // N(t^-m) / D(t^-m) = Nrev(t^m) t^{m dd} / (Drev(t^m) t^{m dn})
        let num = self.num.reversed(dn).spread(m);
        let den = self.den.reversed(dd).spread(m);
        let num = num.mul(&Poly::monomial(Rat::one(), m * dd));
        let den = den.mul(&Poly::monomial(Rat::one(), m * dn));
        Self::new(num, den)
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Order of vanishing at `t = 1` (negative for a pole).
    pub fn order_at_one(&self) -> i64 {
        fn mult(p: &Poly) -> i64 {
            p.shift_by_one().low_order() as i64
        }
        if self.is_zero() {
            return i64::MAX;
        }
        mult(&self.num) - mult(&self.den)
    }

    /// Expansion in `ε = t⁻¹ − 1` with all coefficients of exponent below
    /// `order` exact. The leading term is always materialized.
    pub fn laurent_at_one(&self, order: i64) -> LaurentSeries {
        if self.is_zero() {
            return LaurentSeries::zero_to(order);
        }
        let dp = self.num.degree().unwrap();
        let dq = self.den.degree().unwrap();
        // t = 1/(1+ε): P(t) = (1+ε)^{-dp} · Prev(1+ε)
        let mut a = self.num.reversed(dp).shift_by_one();
        let mut b = self.den.reversed(dq).shift_by_one();
        let one_plus = Poly::new(vec![Rat::one(), Rat::one()]);
        if dq >= dp {
            a = a.mul(&one_plus.pow((dq - dp) as u32));
        } else {
            b = b.mul(&one_plus.pow((dp - dq) as u32));
        }
        let va = a.low_order();
        let vb = b.low_order();
        let val = va as i64 - vb as i64;
        let terms = (order - val).max(1) as usize;
        let a = &a.coeffs()[va..];
        let b = &b.coeffs()[vb..];
        let mut q: Vec<Rat> = Vec::with_capacity(terms);
        let b0 = &b[0];
        for k in 0..terms {
            let mut acc = a.get(k).cloned().unwrap_or_else(Rat::zero);
            for i in 1..b.len().min(k + 1) {
                acc -= &b[i] * &q[k - i];
            }
            q.push(acc / b0);
        }
        LaurentSeries::new(val, q, val + terms as i64)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Coeff for RationalFunction {
    fn nil() -> Self {
        Self::constant(Rat::zero())
    }
    fn unit() -> Self {
        Self::constant(Rat::one())
    }
    fn from_rat(r: &Rat) -> Self {
        Self::constant(r.clone())
    }
    fn is_nil(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, r: &Rat) -> Self {
        self.scale(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn one_minus_t_pow(e: i64) -> RationalFunction {
        RationalFunction::one().sub(&RationalFunction::t_power(e))
    }

    #[test]
    fn reduces_common_factors() {
        let f = one_minus_t_pow(3).div(&one_minus_t_pow(1));
        assert_eq!(f.denom(), &Poly::one());
        assert_eq!(f.numer(), &Poly::new(vec![int(1), int(1), int(1)]));
    }

    #[test]
    fn composition_with_negative_power() {
        let f = RationalFunction::t_power(1).div(&one_minus_t_pow(1));
        let g = f.compose_power(-2);
        let expected = RationalFunction::t_power(-2).div(&one_minus_t_pow(-2));
        assert_eq!(g, expected);
        assert_eq!(g.eval(&int(2)), Some(rat(1, 3)));
    }

    #[test]
    fn expansions_at_one() {
        let f = one_minus_t_pow(3).div(&one_minus_t_pow(1));
        let s = f.laurent_at_one(3);
        assert_eq!(s.valuation(), 0);
        assert_eq!(s.coeff(0), int(3));
        assert_eq!(s.coeff(1), int(-3));
        let pole = one_minus_t_pow(1).inv().laurent_at_one(2);
        assert_eq!(pole.valuation(), -1);
        assert_eq!(pole.coeff(-1), int(1));
        assert_eq!(pole.coeff(0), int(1));
        assert_eq!(pole.coeff(1), int(0));
        let c = RationalFunction::constant(rat(7, 3)).laurent_at_one(1);
        assert_eq!(c.valuation(), 0);
        assert_eq!(c.coeff(0), rat(7, 3));
        assert_eq!(one_minus_t_pow(2).powi(-3).order_at_one(), -3);
    }
}
