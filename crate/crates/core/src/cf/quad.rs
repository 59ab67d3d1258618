use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::alpha::{AlphaSpec, Source};
use crate::error::{Error, Result};

/// Continued fraction of `(a + b√d)/c`, with the period found by the
/// reduced-surd cycle `(P + √D)/Q`.
pub fn quad_to_cf(a: i64, b: i64, d: i64, c: i64) -> Result<AlphaSpec> {
    if c == 0 {
        return Err(Error::InvalidArgument("denominator c must be nonzero".into()));
    }
    if d <= 0 {
        return Err(Error::NotIrrational(format!("d = {d} is not positive")));
    }
    let d_big = BigInt::from(d);
    let r = d_big.sqrt();
    if &r * &r == d_big {
        return Err(Error::NotIrrational(format!("d = {d} is a perfect square")));
    }
    if b == 0 {
        return Err(Error::NotIrrational("b = 0".into()));
    }
    let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let disc = &b * &b * &c * &c * &d_big;
    let root = disc.sqrt();
    // (a + b√d)/c = (P + √D)/Q with Q | D - P²
    let sign_bc = (&b * &c).signum();
    let (mut p, mut q) = if sign_bc.is_positive() {
        (&a * &c, &c * &c)
    } else {
        (-(&a * &c), -(&c * &c))
    };

    let floor_of = |p: &BigInt, q: &BigInt| -> BigInt {
        // floor((p + √D)/q) for irrational √D
        if q.is_positive() {
            (p + &root).div_floor(q)
        } else {
            (p + &root + BigInt::from(1)).div_floor(q)
        }
    };

    let step = |p: &mut BigInt, q: &mut BigInt| -> BigInt {
        let a = floor_of(p, q);
        let np = &a * &*q - &*p;
        let nq = (&disc - &np * &np) / &*q;
        *p = np;
        *q = nq;
        a
    };

    let a0 = step(&mut p, &mut q);
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut digits: Vec<u64> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let preperiod = digits[..start].to_vec();
            let period = digits[start..].to_vec();
            return AlphaSpec::new(a0, Source::Periodic { preperiod, period });
        }
        seen.insert((p.clone(), q.clone()), digits.len());
        let a = step(&mut p, &mut q);
        let a: u64 = a
            .try_into()
            .map_err(|_| Error::PrecisionCap("partial quotient exceeds u64".into()))?;
        digits.push(a);
        debug_assert!(!q.is_zero());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_surds() {
        assert_eq!(quad_to_cf(0, 1, 2, 1).unwrap().to_string(), "cf:[1;(2)]");
        assert_eq!(quad_to_cf(1, 1, 17, 2).unwrap().to_string(), "cf:[2;(1,1,3)]");
        assert_eq!(quad_to_cf(1, 1, 5, 2).unwrap().to_string(), "cf:[1;(1)]");
        assert_eq!(quad_to_cf(0, 1, 3, 1).unwrap().to_string(), "cf:[1;(1,2)]");
        assert_eq!(quad_to_cf(-1, 1, 5, 2).unwrap().to_string(), "cf:[0;(1)]");
    }

    #[test]
    fn negative_coefficients() {
        // (1 - √5)/2 = -0.618... = [-1; 2, 1, 1, ...]
        assert_eq!(quad_to_cf(1, -1, 5, 2).unwrap().to_string(), "cf:[-1;2,(1)]");
        // -√2 = [-2; 1, 1, 2, 2, ...]
        assert_eq!(quad_to_cf(0, 1, 2, -1).unwrap().to_string(), "cf:[-2;1,1,(2)]");
    }

    #[test]
    fn rejects_squares() {
        assert!(matches!(quad_to_cf(0, 1, 9, 1), Err(Error::NotIrrational(_))));
    }
}
