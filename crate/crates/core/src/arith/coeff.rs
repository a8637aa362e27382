use std::fmt::Debug;

use num_traits::{One, Zero};

use super::Rat;

/// Commutative ring of coefficients carried by strata expressions and
/// graph sums: plain rationals, rational functions of `t`, or truncated
/// Laurent series in `ε`.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn is_nil(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, r: &Rat) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.plus(other);
    }

    fn power(&self, e: u32) -> Self {
        let mut acc = Self::unit();
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }
}

impl Coeff for Rat {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rat) -> Self {
        self * r
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}
