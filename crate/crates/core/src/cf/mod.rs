//! Continued-fraction machinery: digit sources, convergents, tails and exact
//! comparison of linear forms `|qα - p|`.

pub mod alpha;
pub mod enclosure;
pub mod expansion;
pub mod form;
pub mod quad;

pub use alpha::{AlphaSpec, GeneratorRule, NamedConstant, Source};
pub use enclosure::{parse_rational, rat, rat_string, ten_pow_neg, Enclosure};
pub use expansion::{Convergent, Expansion};
pub use form::{compare_forms, linear_form, IntBracket, LatticePoint, LinearForm};
pub use quad::quad_to_cf;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Result;

/// `a_1 ..= a_count`.
pub fn digits(alpha: &AlphaSpec, count: usize) -> Result<Vec<u64>> {
    alpha.digits(count)
}

/// Rows `-1 ..= n` of the convergent recurrence.
pub fn convergents(alpha: &AlphaSpec, n: usize) -> Result<Vec<Convergent>> {
    let mut exp = Expansion::new(alpha);
    (-1..=n as isize).map(|k| exp.convergent(k)).collect()
}

/// Enclosure of `α_n` of width at most `goal`.
pub fn tail(alpha: &AlphaSpec, n: usize, goal: &BigRational) -> Result<Enclosure> {
    Expansion::new(alpha).tail(n, goal)
}

/// `α*_n = q_{n-1}/q_n`.
pub fn dual_tail(alpha: &AlphaSpec, n: usize) -> Result<BigRational> {
    Expansion::new(alpha).dual_tail(n)
}

/// `[0; a_n, a_{n-1}, ..., a_1]` evaluated directly from the digits.
pub fn reversed_digits_value(alpha: &AlphaSpec, n: usize) -> Result<BigRational> {
    let digits: Vec<BigInt> = (1..=n)
        .rev()
        .map(|k| alpha.digit(k).map(BigInt::from))
        .collect::<Result<_>>()?;
    let ((p, q), _) = expansion::eval_finite_cf(&BigInt::from(0), &digits);
    Ok(BigRational::new(p, q))
}
