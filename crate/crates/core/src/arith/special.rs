use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::Mutex;

use super::laurent::LaurentSeries;
use super::ratfun::RationalFunction;
use super::{binomial, factorial, Rat};
use crate::error::DomainError;

static BERNOULLI: Mutex<Vec<Rat>> = Mutex::new(Vec::new());

/// Bernoulli number `B_l = B_l(0)`, so `B_1 = -1/2`.
pub fn bernoulli_number(l: usize) -> Rat {
    let mut table = BERNOULLI.lock();
    if table.len() <= l {
        *table = akiyama_tanigawa(l.max(2 * table.len()).max(16));
    }
    table[l].clone()
}

// Akiyama–Tanigawa produces B_1 = +1/2; the sign is flipped on return.
fn akiyama_tanigawa(up_to: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(up_to + 1);
    let mut a: Vec<Rat> = Vec::with_capacity(up_to + 1);
    for m in 0..=up_to {
        a.push(Rat::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = (&a[j - 1] - &a[j]) * Rat::from_integer(BigInt::from(j));
        }
        out.push(a[0].clone());
    }
    if up_to >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// `B_l(x) = Σ_k C(l,k) B_k x^{l-k}`.
pub fn bernoulli_poly(l: usize, x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    let mut xp = Rat::one();
    for k in (0..=l).rev() {
        let b = bernoulli_number(k);
        if !b.is_zero() {
            acc += Rat::from_integer(binomial(l as u64, k as u64)) * b * &xp;
        }
        xp *= x;
    }
    acc
}

/// Coefficient of `z^l / l!` in `(e^z - 1)^k / k!`, i.e. the Stirling number
/// of the second kind `S(l, k)`.
pub fn gamma_lk(l: usize, k: usize) -> Rat {
    if k > l {
        return Rat::zero();
    }
    if k == 0 {
        return if l == 0 { Rat::one() } else { Rat::zero() };
    }
    // S(l,k) = (1/k!) Σ_j (-1)^{k-j} C(k,j) j^l
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let term = binomial(k as u64, j as u64) * BigInt::from(j).pow(l as u32);
        if (k - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Rat::from_integer(acc / factorial(k as u64))
}

/// `s_l(t^e) = B_l/l + (-1)^l Σ_{k=1}^{l} (k-1)! γ(l,k) (t^e/(1-t^e))^k`
/// as an element of ℚ(t).
pub fn s_function(l: usize, e: i64) -> Result<RationalFunction, DomainError> {
    if l == 0 {
        return Err(DomainError::SZero);
    }
    if e == 0 {
        return Err(DomainError::ZeroExponent);
    }
    let x = RationalFunction::t_power(1)
        .div(&RationalFunction::one_minus_t());
    let mut acc = RationalFunction::constant(bernoulli_number(l) / Rat::from_integer(BigInt::from(l)));
    let sign = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
    let mut xk = RationalFunction::constant(Rat::one());
    for k in 1..=l {
        xk = xk.mul(&x);
        let c = Rat::from_integer(factorial(k as u64 - 1)) * gamma_lk(l, k) * &sign;
        acc = acc.add(&xk.scale(&c));
    }
    Ok(if e == 1 { acc } else { acc.compose_power(e) })
}

/// `(1+ε)^e` for any integer `e`, correct to `O(ε^prec)`.
pub fn one_plus_eps_pow(e: i64, prec: i64) -> LaurentSeries {
    let n = prec.max(0) as usize;
    let mut coeffs = Vec::with_capacity(n);
    let mut c = Rat::one();
    for k in 0..n {
        coeffs.push(c.clone());
        // C(e, k+1) = C(e, k) (e - k) / (k + 1)
        c = c * Rat::from_integer(BigInt::from(e - k as i64)) / Rat::from_integer(BigInt::from(k + 1));
        if c.is_zero() {
            break;
        }
    }
    let exact = e >= 0 && (e as usize) < n;
    LaurentSeries::new(0, coeffs, if exact { super::laurent::EXACT } else { prec })
}

/// `t^e/(1-t^e) = 1/((1+ε)^e - 1)` in `ε = t⁻¹ - 1`, correct to `O(ε^prec)`.
pub fn geometric_laurent(e: i64, prec: i64) -> LaurentSeries {
    assert!(e != 0);
    // (1+ε)^e - 1 = ε·u(ε), u(0) = e; need u⁻¹ to relative precision prec + 1.
    let rel = (prec + 1).max(1);
    let y = one_plus_eps_pow(e, rel + 1).add(&LaurentSeries::exact_constant(-Rat::one()));
    let y = y.truncate(rel + 1);
    y.inverse(None)
}

/// Laurent expansion of `s_l(t^e)` at `t = 1`, correct to `O(ε^prec)`.
pub fn s_function_laurent(l: usize, e: i64, prec: i64) -> Result<LaurentSeries, DomainError> {
    if l == 0 {
        return Err(DomainError::SZero);
    }
    if e == 0 {
        return Err(DomainError::ZeroExponent);
    }
    let x = geometric_laurent(e, prec + l as i64);
    let sign = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
    let mut acc = LaurentSeries::exact_constant(bernoulli_number(l) / Rat::from_integer(BigInt::from(l)));
    let mut xk = LaurentSeries::exact_constant(Rat::one());
    for k in 1..=l {
        xk = xk.mul(&x);
        let c = Rat::from_integer(factorial(k as u64 - 1)) * gamma_lk(l, k) * &sign;
        acc = acc.add(&xk.scale(&c));
    }
    Ok(acc.truncate(prec))
}

/// `(1 - t^e)^n` expanded at `t = 1` to `O(ε^prec)`.
pub fn one_minus_t_pow_laurent(e: i64, n: i64, prec: i64) -> LaurentSeries {
    if n == 0 {
        return LaurentSeries::exact_constant(Rat::one());
    }
    // 1 - t^e = 1 - (1+ε)^{-e} = ε·v(ε), v(0) = e
    let rel = prec.saturating_sub(n).max(1) + n.abs();
    let base = LaurentSeries::exact_constant(Rat::one())
        .add(&one_plus_eps_pow(-e, rel + 1).neg())
        .truncate(rel + 1);
    let base = if n < 0 { base.inverse(None) } else { base };
    let mut acc = LaurentSeries::exact_constant(Rat::one());
    for _ in 0..n.unsigned_abs() {
        acc = acc.mul(&base);
    }
    acc.truncate(prec)
}

impl RationalFunction {
    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// `1 - t`
    pub fn one_minus_t() -> Self {
        Self::one().sub(&Self::t_power(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), int(0));
        assert_eq!(bernoulli_poly(1, &rat(2, 7)), rat(2, 7) - rat(1, 2));
        assert_eq!(bernoulli_poly(2, &rat(1, 3)), rat(-1, 18));
    }

    #[test]
    fn stirling_values() {
        assert_eq!(gamma_lk(3, 2), int(3));
        assert_eq!(gamma_lk(5, 5), int(1));
        assert_eq!(gamma_lk(2, 3), int(0));
        assert_eq!(gamma_lk(0, 0), int(1));
    }

    #[test]
    fn s_one_closed_form() {
        // -(1+t)/(2(1-t))
        let s = s_function(1, 1).unwrap();
        let expected = RationalFunction::one()
            .add(&RationalFunction::t_power(1))
            .scale(&rat(-1, 2))
            .div(&RationalFunction::one_minus_t());
        assert_eq!(s, expected);
        assert!(s_function(0, 1).is_err());
    }

    #[test]
    fn laurent_paths_agree() {
        for l in 1..6 {
            for e in [1i64, -2, 3, -3, 6] {
                let direct = s_function_laurent(l, e, 4).unwrap();
                let via = s_function(l, e).unwrap().laurent_at_one(4);
                assert_eq!(direct.valuation(), via.valuation(), "l={l} e={e}");
                for k in direct.valuation()..4 {
                    assert_eq!(direct.coeff(k), via.coeff(k), "l={l} e={e} k={k}");
                }
            }
        }
        for (e, n) in [(1i64, 2i64), (-3, -1), (2, -3), (6, 1)] {
            let direct = one_minus_t_pow_laurent(e, n, 3);
            let via = RationalFunction::one()
                .sub(&RationalFunction::t_power(e))
                .powi(n)
                .laurent_at_one(3);
            for k in direct.valuation().min(via.valuation())..3 {
                assert_eq!(direct.coeff(k), via.coeff(k), "e={e} n={n} k={k}");
            }
        }
    }
}
