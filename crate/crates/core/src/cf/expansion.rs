use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::alpha::AlphaSpec;
use super::enclosure::Enclosure;
use crate::error::{Error, Result};

/// Deepest digit index any refinement loop may consume.
pub const DEPTH_CAP: usize = 1_000_000;

/// One row of the convergent recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub n: isize,
    pub p: BigInt,
    pub q: BigInt,
    /// Sign of `q_n α - p_n`.
    pub sign: i8,
}

/// Sign of `q_n α - p_n`: positive for even `n`, negative for odd `n`.
/// Row `-1` is `(p, q) = (1, 0)` with form `-1`.
pub fn sign_of(n: isize) -> i8 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Memoized digits and convergents of one `α`.
#[derive(Clone, Debug)]
pub struct Expansion {
    alpha: AlphaSpec,
    digits: Vec<u64>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl Expansion {
    pub fn new(alpha: &AlphaSpec) -> Self {
        Expansion {
            alpha: alpha.clone(),
            digits: Vec::new(),
            p: vec![BigInt::one(), alpha.a0().clone()],
            q: vec![BigInt::zero(), BigInt::one()],
        }
    }

    pub fn alpha(&self) -> &AlphaSpec {
        &self.alpha
    }

    /// Makes rows up to index `n` available.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if n > DEPTH_CAP {
            return Err(Error::PrecisionCap(format!(
                "needs convergent {n}, cap is {DEPTH_CAP}"
            )));
        }
        while self.digits.len() < n {
            let k = self.digits.len() + 1;
            let a = self.alpha.digit(k)?;
            self.digits.push(a);
            let a = BigInt::from(a);
            let np = &a * &self.p[k] + &self.p[k - 1];
            let nq = &a * &self.q[k] + &self.q[k - 1];
            self.p.push(np);
            self.q.push(nq);
        }
        Ok(())
    }

    /// `a_n` for `n >= 1`.
    pub fn digit(&mut self, n: usize) -> Result<u64> {
        self.ensure(n)?;
        Ok(self.digits[n - 1])
    }

    fn slot(&mut self, n: isize) -> Result<usize> {
        assert!(n >= -1, "convergent index starts at -1");
        if n > 0 {
            self.ensure(n as usize)?;
        }
        Ok((n + 1) as usize)
    }

    pub fn p(&mut self, n: isize) -> Result<BigInt> {
        let i = self.slot(n)?;
        Ok(self.p[i].clone())
    }

    pub fn q(&mut self, n: isize) -> Result<BigInt> {
        let i = self.slot(n)?;
        Ok(self.q[i].clone())
    }

    /// `(q_n, p_n)`.
    pub fn point(&mut self, n: isize) -> Result<(BigInt, BigInt)> {
        let i = self.slot(n)?;
        Ok((self.q[i].clone(), self.p[i].clone()))
    }

    pub fn convergent(&mut self, n: isize) -> Result<Convergent> {
        let (q, p) = self.point(n)?;
        Ok(Convergent {
            n,
            p,
            q,
            sign: sign_of(n),
        })
    }

    /// Smallest `n >= 0` with `q_n > bound`.
    pub fn first_q_above(&mut self, bound: &BigInt) -> Result<usize> {
        let mut n = 0usize;
        loop {
            if &self.q(n as isize)? > bound {
                return Ok(n);
            }
            n += 1;
        }
    }

    /// `α` between `p_k/q_k` and `p_{k+1}/q_{k+1}` (width `1/(q_k q_{k+1})`).
    pub fn bracket(&mut self, k: usize) -> Result<Enclosure> {
        let (q0, p0) = self.point(k as isize)?;
        let (q1, p1) = self.point(k as isize + 1)?;
        Ok(Enclosure::new(
            BigRational::new(p0, q0),
            BigRational::new(p1, q1),
        ))
    }

    /// Smallest `k` whose bracket has width at most `width`.
    pub fn bracket_index_for(&mut self, width: &BigRational) -> Result<usize> {
        if !width.is_positive() {
            return Err(Error::InvalidArgument("precision goal must be positive".into()));
        }
        let need = (BigRational::one() / width).ceil().to_integer();
        let mut k = 0usize;
        loop {
            let prod = self.q(k as isize)? * self.q(k as isize + 1)?;
            if prod >= need {
                return Ok(k);
            }
            k += 1;
        }
    }

    pub fn alpha_enclosure(&mut self, width: &BigRational) -> Result<Enclosure> {
        let k = self.bracket_index_for(width)?;
        self.bracket(k)
    }

    /// Enclosure of `|qα - p|` of width at most `goal`.
    pub fn form_value(&mut self, q: &BigInt, p: &BigInt, goal: &BigRational) -> Result<Enclosure> {
        let qr = BigRational::from_integer(q.clone());
        let pr = BigRational::from_integer(p.clone());
        let scale = if q.is_zero() {
            BigRational::one()
        } else {
            BigRational::from_integer(q.abs())
        };
        let mut k = self.bracket_index_for(&(goal / scale))?;
        loop {
            let a = self.bracket(k)?;
            let lo = &qr * a.lo() - &pr;
            let hi = &qr * a.hi() - &pr;
            if lo.is_positive() {
                return Ok(Enclosure::new(lo, hi));
            }
            if hi.is_negative() {
                return Ok(Enclosure::new(-hi, -lo));
            }
            if q.is_zero() && p.is_zero() {
                return Err(Error::InvalidArgument("form at the origin is zero".into()));
            }
            k += 1;
        }
    }

    /// `ξ_n = |q_n α - p_n|`.
    pub fn xi(&mut self, n: isize, goal: &BigRational) -> Result<Enclosure> {
        let (q, p) = self.point(n)?;
        self.form_value(&q, &p, goal)
    }

    /// Enclosure of the tail `α_n = [a_n; a_{n+1}, ...]`, `n >= 1`.
    pub fn tail(&mut self, n: usize, goal: &BigRational) -> Result<Enclosure> {
        assert!(n >= 1, "tail index starts at 1");
        let a0 = BigInt::from(self.digit(n)?);
        cf_enclosure(a0, |i| self.digit(n + i), goal)
    }

    /// `α*_n = q_{n-1}/q_n`, `n >= 1`.
    pub fn dual_tail(&mut self, n: usize) -> Result<BigRational> {
        let q0 = self.q(n as isize - 1)?;
        let q1 = self.q(n as isize)?;
        Ok(BigRational::new(q0, q1))
    }
}

/// Encloses `[a0; d(1), d(2), ...]` between consecutive convergents until the
/// width is at most `goal`.
pub fn cf_enclosure(
    a0: BigInt,
    mut digit: impl FnMut(usize) -> Result<u64>,
    goal: &BigRational,
) -> Result<Enclosure> {
    if !goal.is_positive() {
        return Err(Error::InvalidArgument("precision goal must be positive".into()));
    }
    let need = (BigRational::one() / goal).ceil().to_integer();
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (a0, BigInt::one());
    let mut i = 1usize;
    loop {
        let a = BigInt::from(digit(i)?);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        if &q0 * &q1 >= need {
            return Ok(Enclosure::new(
                BigRational::new(p0, q0),
                BigRational::new(p1, q1),
            ));
        }
        i += 1;
        if i > DEPTH_CAP {
            return Err(Error::PrecisionCap("tail enclosure depth".into()));
        }
    }
}

/// Digits of a finite continued fraction of a rational: `[a0; a1, ..., at]` with `at >= 2`
/// whenever `t >= 1`.
pub fn rational_cf(x: &BigRational) -> (BigInt, Vec<BigInt>) {
    use num_integer::Integer;
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    let (a0, r) = n.div_mod_floor(&d);
    let mut digits = Vec::new();
    n = d;
    d = r;
    while !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        digits.push(a);
        n = d;
        d = r;
    }
    (a0, digits)
}

/// Value of the finite continued fraction `[a0; a1, ..., at]`, together with the
/// previous convergent `[a0; ..., a_{t-1}]` (which is `1/0` when `t = 0`).
pub fn eval_finite_cf(a0: &BigInt, digits: &[BigInt]) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (a0.clone(), BigInt::one());
    for a in digits {
        let p2 = a * &p1 + &p0;
        let q2 = a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    ((p1, q1), (p0, q0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::enclosure::{rat, ten_pow_neg};

    fn qs(alpha: &AlphaSpec, n: usize) -> Vec<i64> {
        let mut e = Expansion::new(alpha);
        (0..=n as isize)
            .map(|k| e.q(k).unwrap().try_into().unwrap())
            .collect()
    }

    #[test]
    fn denominators() {
        assert_eq!(qs(&AlphaSpec::golden(), 6), vec![1, 1, 2, 3, 5, 8, 13]);
        let s = AlphaSpec::periodic(0, &[], &[2]).unwrap();
        assert_eq!(qs(&s, 4), vec![1, 2, 5, 12, 29]);
    }

    #[test]
    fn e_convergents() {
        let mut x = Expansion::new(&AlphaSpec::e());
        let got: Vec<(i64, i64)> = (0..6)
            .map(|n| {
                let (q, p) = x.point(n).unwrap();
                (p.try_into().unwrap(), q.try_into().unwrap())
            })
            .collect();
        assert_eq!(got, vec![(2, 1), (3, 1), (8, 3), (11, 4), (19, 7), (87, 32)]);
    }

    #[test]
    fn dual_tails() {
        let mut g = Expansion::new(&AlphaSpec::golden());
        assert_eq!(g.dual_tail(4).unwrap(), rat(3, 5));
        let mut s = Expansion::new(&AlphaSpec::periodic(0, &[], &[2]).unwrap());
        assert_eq!(s.dual_tail(2).unwrap(), rat(2, 5));
        let mut e = Expansion::new(&AlphaSpec::prefix(0, &[7, 1]).unwrap());
        assert_eq!(e.dual_tail(1).unwrap(), rat(1, 7));
    }

    #[test]
    fn tails_and_forms() {
        let goal = ten_pow_neg(30);
        let mut g = Expansion::new(&AlphaSpec::golden());
        let t = g.tail(7, &goal).unwrap();
        assert!(t.width() <= goal);
        assert!((t.to_f64() - 1.618033988749895).abs() < 1e-15);

        let mut e = Expansion::new(&AlphaSpec::e());
        let t = e.tail(2, &ten_pow_neg(20)).unwrap();
        assert!(t.width() <= ten_pow_neg(20));
        // [2; 1, 1, 4, 1, 1, 6, ...] = 1/(e - 2 - 1)... checked against f64
        let e_f = std::f64::consts::E;
        let alpha1 = 1.0 / (e_f - 2.0);
        let alpha2 = 1.0 / (alpha1 - 1.0);
        assert!((t.to_f64() - alpha2).abs() < 1e-12);

        let mut r2 = Expansion::new(&"sqrt:2".parse().unwrap());
        let v = r2
            .form_value(&BigInt::from(5), &BigInt::from(7), &ten_pow_neg(20))
            .unwrap();
        assert!((v.to_f64() - (5.0 * 2f64.sqrt() - 7.0)).abs() < 1e-14);
    }

    #[test]
    fn prefix_runs_out() {
        let mut x = Expansion::new(&AlphaSpec::prefix(0, &[1, 2]).unwrap());
        assert!(x.q(2).is_ok());
        assert!(matches!(x.q(3), Err(Error::PrefixExhausted { .. })));
    }

    #[test]
    fn finite_cf_round_trip() {
        let x = BigRational::new(BigInt::from(87), BigInt::from(32));
        let (a0, d) = rational_cf(&x);
        assert_eq!(a0, BigInt::from(2));
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(2), BigInt::from(1), BigInt::from(1), BigInt::from(4)]);
        let ((p, q), (pp, qp)) = eval_finite_cf(&a0, &d);
        assert_eq!((p, q), (BigInt::from(87), BigInt::from(32)));
        assert_eq!((pp, qp), (BigInt::from(19), BigInt::from(7)));
    }
}
