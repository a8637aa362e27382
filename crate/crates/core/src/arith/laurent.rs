use std::fmt;

use num_traits::{One, Zero};

use super::coeff::Coeff;
use super::Rat;

/// Precision marker for series that are known exactly (finite sums).
pub const EXACT: i64 = i64::MAX;

/// Truncated Laurent series `Σ_{k ≥ val} c_k ε^k + O(ε^prec)`.
///
/// The leading coefficient is nonzero unless the series is zero to its
/// precision, in which case `coeffs` is empty and `val == prec` (or `0` for
/// an exact zero).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentSeries {
    val: i64,
    coeffs: Vec<Rat>,
    prec: i64,
}

impl LaurentSeries {
    pub fn new(val: i64, coeffs: Vec<Rat>, prec: i64) -> Self {
        let mut s = LaurentSeries { val, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero_to(prec: i64) -> Self {
        Self::new(0, Vec::new(), prec)
    }

    pub fn exact_constant(c: Rat) -> Self {
        Self::new(0, vec![c], EXACT)
    }

    /// `ε^k`, exact.
    pub fn monomial(k: i64) -> Self {
        Self::new(k, vec![Rat::one()], EXACT)
    }

    fn normalize(&mut self) {
        if self.prec != EXACT {
            let room = (self.prec - self.val).max(0) as usize;
            self.coeffs.truncate(room);
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.val = if self.prec == EXACT { 0 } else { self.prec };
            return;
        }
        self.coeffs.drain(..lead);
        self.val += lead as i64;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Exponent of the leading nonzero term (equals the precision for a
    /// series that vanishes to its precision).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `ε^k`. Panics when `k` lies beyond the precision.
    pub fn coeff(&self, k: i64) -> Rat {
        assert!(k < self.prec, "coefficient ε^{k} beyond precision {}", self.prec);
        if k < self.val {
            return Rat::zero();
        }
        self.coeffs.get((k - self.val) as usize).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficients of all exponents in `[val, prec)` (or up to the last
    /// stored term for exact series).
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.val + i as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    fn last_exp(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() && self.prec == EXACT {
            return o.clone();
        }
        if o.is_zero() && o.prec == EXACT {
            return self.clone();
        }
        let prec = self.prec.min(o.prec);
        let lo = self.val.min(o.val);
        let hi = self.last_exp().max(o.last_exp()).min(prec);
        if hi <= lo {
            return Self::zero_to(prec);
        }
        let mut out = Vec::with_capacity((hi - lo) as usize);
        for k in lo..hi {
            let mut c = Rat::zero();
            if let Some(x) = self.get(k) {
                c += x;
            }
            if let Some(x) = o.get(k) {
                c += x;
            }
            out.push(c);
        }
        Self::new(lo, out, prec)
    }

    fn get(&self, k: i64) -> Option<&Rat> {
        if k < self.val {
            return None;
        }
        self.coeffs.get((k - self.val) as usize)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries { val: self.val, coeffs: self.coeffs.iter().map(|c| -c).collect(), prec: self.prec }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|c| c * r).collect(), self.prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = match (self.prec, o.prec) {
            (EXACT, EXACT) => EXACT,
            (EXACT, p) => self.val.saturating_add(p),
            (p, EXACT) => o.val.saturating_add(p),
            (p, q) => (self.val.saturating_add(q)).min(o.val.saturating_add(p)),
        };
        if self.is_zero() || o.is_zero() {
            return Self::zero_to(prec);
        }
        let val = self.val + o.val;
        let mut len = self.coeffs.len() + o.coeffs.len() - 1;
        if prec != EXACT {
            len = len.min((prec - val).max(0) as usize);
        }
        let mut out = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(val, out, prec)
    }

    /// Multiplicative inverse keeping the relative precision. For exact
    /// inputs the relative precision `rel` must be supplied.
    pub fn inverse(&self, rel: Option<i64>) -> Self {
        assert!(!self.is_zero(), "inverse of a series with no known nonzero term");
        let r = match (self.prec, rel) {
            (EXACT, Some(r)) => r,
            (EXACT, None) => panic!("inverse of an exact series needs a precision"),
            (p, Some(r)) => r.min(p - self.val),
            (p, None) => p - self.val,
        }
        .max(0) as usize;
        let b = &self.coeffs;
        let b0 = &b[0];
        let mut q: Vec<Rat> = Vec::with_capacity(r);
        for k in 0..r {
            let mut acc = if k == 0 { Rat::one() } else { Rat::zero() };
            for i in 1..b.len().min(k + 1) {
                acc -= &b[i] * &q[k - i];
            }
            q.push(acc / b0);
        }
        Self::new(-self.val, q, r as i64 - self.val)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*eps^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec != EXACT {
            write!(f, " + O(eps^{})", self.prec)?;
        }
        Ok(())
    }
}

impl Coeff for LaurentSeries {
    fn nil() -> Self {
        Self::zero_to(EXACT)
    }
    fn unit() -> Self {
        Self::exact_constant(Rat::one())
    }
    fn from_rat(r: &Rat) -> Self {
        Self::exact_constant(r.clone())
    }
    /// Only the exact zero: a series that vanishes to its precision still
    /// carries an error term that may matter after multiplication.
    fn is_nil(&self) -> bool {
        self.coeffs.is_empty() && self.prec == EXACT
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

    #[test]
    fn products_track_precision() {
        // (1/ε + 1 + O(ε^2)) · (ε + O(ε^3)) = 1 + ε + O(ε^2)
        let a = LaurentSeries::new(-1, vec![int(1), int(1), int(0)], 2);
        let b = LaurentSeries::new(1, vec![int(1), int(0)], 3);
        let c = a.mul(&b);
        assert_eq!(c.precision(), 2);
        assert_eq!(c.coeff(0), int(1));
        assert_eq!(c.coeff(1), int(1));
    }

    #[test]
    fn inverse_of_geometric() {
        let a = LaurentSeries::new(0, vec![int(1), int(-1)], EXACT);
        let inv = a.inverse(Some(5));
        for k in 0..5 {
            assert_eq!(inv.coeff(k), int(1));
        }
        let b = LaurentSeries::new(1, vec![int(2), int(4)], EXACT).inverse(Some(3));
        assert_eq!(b.valuation(), -1);
        assert_eq!(b.coeff(-1), rat(1, 2));
        assert_eq!(b.coeff(0), int(-1));
        assert_eq!(b.coeff(1), int(2));
        assert_eq!(b.precision(), 2);
    }

    #[test]
    fn cancellation_moves_valuation() {
        let a = LaurentSeries::new(-2, vec![int(1), int(3)], 4);
        let b = LaurentSeries::new(-2, vec![int(-1), int(2)], 1);
        let c = a.add(&b);
        assert_eq!(c.valuation(), -1);
        assert_eq!(c.coeff(-1), int(5));
        assert_eq!(c.precision(), 1);
        let z = a.add(&a.neg());
        assert!(z.is_zero());
        assert_eq!(z.valuation(), 4);
    }
}
