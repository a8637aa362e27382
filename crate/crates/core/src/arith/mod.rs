//! Exact scalar kernel: rationals, ℚ(t), truncated Laurent series in
//! `ε = t⁻¹ − 1` and the Bernoulli-type special functions.

mod coeff;
mod laurent;
mod poly;
mod rat;
mod ratfun;
mod special;

pub use coeff::Coeff;
pub use laurent::{LaurentSeries, EXACT};
pub use poly::Poly;
pub use rat::{binomial, double_factorial_odd, factorial, format_rat, int, parse_rat, pow_rat, rat, Rat};
pub use ratfun::RationalFunction;
pub use special::{
    bernoulli_number, bernoulli_poly, gamma_lk, geometric_laurent, one_minus_t_pow_laurent, one_plus_eps_pow,
    s_function, s_function_laurent,
};

/// `laurent_at_one(f, order)`: free-function form of
/// [`RationalFunction::laurent_at_one`].
pub fn laurent_at_one(f: &RationalFunction, order: i64) -> LaurentSeries {
    f.laurent_at_one(order)
}
