use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cf::{Enclosure, Expansion};
use crate::error::{Error, Result};

/// `κ^j_n` evaluated twice: as a lattice product `Q·|Qα - P|` and from the tails.
#[derive(Clone, Debug)]
pub struct KappaSample {
    pub n: usize,
    pub j: u8,
    pub via_products: Enclosure,
    pub via_tails: Enclosure,
    pub digit: u64,
}

impl KappaSample {
    pub fn consistent(&self) -> bool {
        self.via_products.intersects(&self.via_tails)
    }
}

fn check_j(j: u8) -> Result<()> {
    if (1..=4).contains(&j) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("kappa index j = {j} not in 1..=4")))
    }
}

/// Lattice point `(Q, P)` whose product `Q·|Qα - P|` is `κ^j_n`.
pub fn kappa_point(exp: &mut Expansion, n: usize, j: u8) -> Result<(BigInt, BigInt)> {
    check_j(j)?;
    let n = n as isize;
    let comb = |exp: &mut Expansion, c2: i64, n2: isize, c1: i64, n1: isize| -> Result<(BigInt, BigInt)> {
        let (q2, p2) = exp.point(n2)?;
        let (q1, p1) = exp.point(n1)?;
        Ok((c2 * q2 + c1 * q1, c2 * p2 + c1 * p1))
    };
    match j {
        1 => comb(exp, 1, n - 2, 1, n - 1),
        2 => comb(exp, 1, n, -1, n - 1),
        3 => comb(exp, 2, n - 2, 1, n - 1),
        _ => comb(exp, 2, n - 1, 0, n - 1),
    }
}

/// `Q·|Qα - P|` with width at most `goal`.
pub fn product(exp: &mut Expansion, q: &BigInt, p: &BigInt, goal: &BigRational) -> Result<Enclosure> {
    if q.is_zero() {
        return Ok(Enclosure::point(BigRational::zero()));
    }
    let qr = BigRational::from_integer(q.abs());
    let v = exp.form_value(q, p, &(goal / &qr))?;
    Ok(v.scale(&qr))
}

pub fn kappa_via_products(exp: &mut Expansion, n: usize, j: u8, goal: &BigRational) -> Result<Enclosure> {
    let (q, p) = kappa_point(exp, n, j)?;
    product(exp, &q, &p, goal)
}

fn k1(x: &BigRational, y: &BigRational) -> BigRational {
    let one = BigRational::one();
    (&one + x) * (y - &one) / (x + y)
}

fn k2(x: &BigRational, y: &BigRational) -> BigRational {
    let one = BigRational::one();
    (&one - x) * (y + &one) / (x + y)
}

fn k3(x: &BigRational, y: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    (&two * x + &one) * (&two * y - &one) / (x + y)
}

fn k4(x: &BigRational, y: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(4)) / (x + y)
}

/// Formula value of `κ^j` at a dual tail `x ∈ [0, 1]` and a tail `y > 1`.
/// For `j = 1, 3, 4` the pair is `(α*_{n-1}, α_n)`, for `j = 2` it is `(α*_n, α_{n+1})`.
pub fn kappa_formula_point(j: u8, x: &BigRational, y: &BigRational) -> BigRational {
    match j {
        1 => k1(x, y),
        2 => k2(x, y),
        3 => k3(x, y),
        _ => k4(x, y),
    }
}

/// Interval version of [`kappa_formula_point`]; exact because `κ¹`, `κ³` increase
/// and `κ²`, `κ⁴` decrease in both arguments.
pub fn kappa_formula(j: u8, x: &Enclosure, y: &Enclosure) -> Enclosure {
    let a = kappa_formula_point(j, x.lo(), y.lo());
    let b = kappa_formula_point(j, x.hi(), y.hi());
    Enclosure::new(a, b)
}

/// Tail arguments `(x, y)` of `κ^j_n`.
pub fn kappa_args(exp: &mut Expansion, n: usize, j: u8, goal: &BigRational) -> Result<(Enclosure, Enclosure)> {
    check_j(j)?;
    if j == 2 {
        let x = exp.dual_tail(n)?;
        Ok((Enclosure::point(x), exp.tail(n + 1, goal)?))
    } else {
        let x = if n >= 2 {
            exp.dual_tail(n - 1)?
        } else {
            BigRational::zero()
        };
        Ok((Enclosure::point(x), exp.tail(n, goal)?))
    }
}

/// Tail-route enclosure of `κ^j_n` with width at most `goal`.
pub fn kappa_via_tails(exp: &mut Expansion, n: usize, j: u8, goal: &BigRational) -> Result<Enclosure> {
    // every formula has slope at most 9 in y on the domain
    let mut g = goal / BigRational::from_integer(BigInt::from(16));
    loop {
        let (x, y) = kappa_args(exp, n, j, &g)?;
        let v = kappa_formula(j, &x, &y);
        if &v.width() <= goal {
            return Ok(v);
        }
        g /= BigRational::from_integer(BigInt::from(16));
    }
}

pub fn kappa(exp: &mut Expansion, n: usize, j: u8, goal: &BigRational) -> Result<KappaSample> {
    if n == 0 {
        return Err(Error::InvalidArgument("kappa index n starts at 1".into()));
    }
    Ok(KappaSample {
        n,
        j,
        via_products: kappa_via_products(exp, n, j, goal)?,
        via_tails: kappa_via_tails(exp, n, j, goal)?,
        digit: exp.digit(n)?,
    })
}

/// `𝔩*_n`: `κ³_n` if `a_n = 1`, else `min(κ¹_n, κ²_n)`.
pub fn ell_star(exp: &mut Expansion, n: usize, goal: &BigRational) -> Result<Enclosure> {
    if exp.digit(n)? == 1 {
        kappa_via_tails(exp, n, 3, goal)
    } else {
        let a = kappa_via_tails(exp, n, 1, goal)?;
        let b = kappa_via_tails(exp, n, 2, goal)?;
        Ok(a.min(&b))
    }
}

/// `q_n ξ_n = 1/(α_{n+1} + α*_n)`, `n >= 1`.
pub fn lagrange_term(exp: &mut Expansion, n: usize, goal: &BigRational) -> Result<Enclosure> {
    let x = exp.dual_tail(n)?;
    let y = exp.tail(n + 1, &(goal / BigRational::from_integer(BigInt::from(2))))?;
    Ok(Enclosure::new(
        BigRational::one() / (&x + y.lo()),
        BigRational::one() / (&x + y.hi()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{ten_pow_neg, AlphaSpec};

    #[test]
    fn routes_agree_on_named_numbers() {
        let goal = ten_pow_neg(25);
        for s in ["golden", "sqrt:2", "quad:1,1,17,2", "e", "cf:[0;(3)]", "cf:[3;1,7,2,(1,4)]"] {
            let a: AlphaSpec = s.parse().unwrap();
            let mut exp = Expansion::new(&a);
            for n in 1..30 {
                for j in 1..=4 {
                    let k = kappa(&mut exp, n, j, &goal).unwrap();
                    assert!(k.consistent(), "{s} n={n} j={j}: {} vs {}", k.via_products, k.via_tails);
                    assert!(k.via_tails.width() <= goal);
                }
            }
        }
    }

    #[test]
    fn classical_limits() {
        let goal = ten_pow_neg(20);
        let mut g = Expansion::new(&AlphaSpec::golden());
        let v = kappa_via_tails(&mut g, 40, 4, &goal).unwrap().to_f64();
        assert!((v - 4.0 / 5f64.sqrt()).abs() < 1e-12);
        let v = ell_star(&mut g, 40, &goal).unwrap().to_f64();
        assert!((v - 5f64.sqrt()).abs() < 1e-12);
        let mut r = Expansion::new(&"sqrt:2".parse().unwrap());
        let a = kappa_via_tails(&mut r, 30, 1, &goal).unwrap();
        let b = kappa_via_tails(&mut r, 30, 2, &goal).unwrap();
        assert!(a.intersects(&b));
        assert!((a.to_f64() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }
}
