use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::enclosure::Enclosure;
use super::expansion::{Expansion, DEPTH_CAP};
use crate::error::{Error, Result};

/// A lattice point `(q, p)` standing for the form `qα - p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub q: BigInt,
    pub p: BigInt,
}

impl LatticePoint {
    pub fn new(q: impl Into<BigInt>, p: impl Into<BigInt>) -> Self {
        LatticePoint {
            q: q.into(),
            p: p.into(),
        }
    }
}

/// `|qα - p|` together with an enclosure of its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub q: BigInt,
    pub p: BigInt,
    pub value: Enclosure,
}

impl LinearForm {
    pub fn new(exp: &mut Expansion, q: BigInt, p: BigInt, goal: &BigRational) -> Result<Self> {
        let value = exp.form_value(&q, &p, goal)?;
        Ok(LinearForm { q, p, value })
    }

    pub fn point(&self) -> LatticePoint {
        LatticePoint::new(self.q.clone(), self.p.clone())
    }

    /// Enclosure of `q·|qα - p|`.
    pub fn product(&self) -> Enclosure {
        self.value.scale(&BigRational::from_integer(self.q.clone()))
    }
}

/// The form at `q` with the nearest integer `p`, so that its value is `||qα||`.
pub fn linear_form(exp: &mut Expansion, q: &BigInt, goal: &BigRational) -> Result<LinearForm> {
    if !q.is_positive() {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let qr = BigRational::from_integer(q.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut k = 0usize;
    let p = loop {
        let a = exp.bracket(k)?;
        let lo = (&qr * a.lo() + &half).floor();
        let hi = (&qr * a.hi() + &half).floor();
        if lo == hi {
            break lo.to_integer();
        }
        k += 1;
    };
    LinearForm::new(exp, q.clone(), p, goal)
}

/// Exact order of `|q1 α - p1|` against `|q2 α - p2|`, refining the bracket
/// of `α` by doubling its depth until the two enclosures separate.
pub fn compare_forms(exp: &mut Expansion, f1: &LatticePoint, f2: &LatticePoint) -> Result<Ordering> {
    if f1 == f2 || (f1.q == -&f2.q && f1.p == -&f2.p) {
        return Err(Error::IdenticalForms {
            q: f1.q.to_string(),
            p: f1.p.to_string(),
        });
    }
    let mut k = 1usize;
    loop {
        let a = exp.bracket(k)?;
        let e1 = form_on(a.clone(), f1);
        let e2 = form_on(a, f2);
        if let (Some(e1), Some(e2)) = (e1, e2) {
            if let Some(ord) = e1.compare(&e2) {
                return Ok(ord);
            }
        }
        if k >= DEPTH_CAP {
            return Err(Error::PrecisionCap("form comparison depth".into()));
        }
        k = (2 * k).min(DEPTH_CAP);
    }
}

fn form_on(alpha: Enclosure, f: &LatticePoint) -> Option<Enclosure> {
    let q = BigRational::from_integer(f.q.clone());
    let p = BigRational::from_integer(f.p.clone());
    let lo = &q * alpha.lo() - &p;
    let hi = &q * alpha.hi() - &p;
    if lo.is_positive() {
        Some(Enclosure::new(lo, hi))
    } else if hi.is_negative() {
        Some(Enclosure::new(-hi, -lo))
    } else {
        None
    }
}

/// Integer model of `α` valid for forms with `|q| <= bound`:
/// the mediant `A/B` of the first pair of consecutive convergents with
/// `q_M + q_{M+1} > 2·bound`. No fraction with denominator at most `2·bound`
/// separates `α` from `A/B`, so for `q, q' <= bound` every comparison of
/// `|qα - p|` with `|q'α - p'|` equals the comparison of `|qA - pB|` with
/// `|q'A - p'B|`. Numerators are stored relative to `a0`.
#[derive(Clone, Debug)]
pub struct IntBracket {
    pub a0: BigInt,
    /// `A - a0·B`, in `(0, B)`.
    pub a: u128,
    pub b: u128,
    pub bound: u64,
}

impl IntBracket {
    pub fn new(exp: &mut Expansion, bound: u64) -> Result<Self> {
        let two_t = BigInt::from(bound) * 2;
        let mut m = 0usize;
        loop {
            let s = exp.q(m as isize)? + exp.q(m as isize + 1)?;
            if s > two_t {
                break;
            }
            m += 1;
        }
        let a0 = exp.alpha().a0().clone();
        let (q0, p0) = exp.point(m as isize)?;
        let (q1, p1) = exp.point(m as isize + 1)?;
        let b = &q0 + &q1;
        let a = &p0 + &p1 - &a0 * &b;
        let cap = || Error::PrecisionCap("integer bracket exceeds 120 bits".into());
        let b_u = b.to_u128().filter(|b| *b < (1u128 << 120)).ok_or_else(cap)?;
        let a_u = a.to_u128().ok_or_else(cap)?;
        Ok(IntBracket {
            a0,
            a: a_u,
            b: b_u,
            bound,
        })
    }

    /// Scaled value `|q·A - p'·B|` for `p' = p - a0·q`.
    pub fn scaled(&self, q: u64, p_rel: i128) -> u128 {
        let lhs = q as i128 * self.a as i128;
        let rhs = p_rel * self.b as i128;
        (lhs - rhs).unsigned_abs()
    }

    /// `p - a0·q` as a machine integer, if it fits.
    pub fn relative(&self, q: &BigInt, p: &BigInt) -> Option<i128> {
        (p - &self.a0 * q).to_i128()
    }

    pub fn absolute(&self, q: u64, p_rel: i128) -> BigInt {
        &self.a0 * BigInt::from(q) + BigInt::from(p_rel)
    }

    /// Integers `p'` with `|q·A - p'·B| <= d`.
    pub fn rows_within(&self, q: u64, d: u128) -> std::ops::RangeInclusive<i128> {
        let qa = q as i128 * self.a as i128;
        let b = self.b as i128;
        let d = d as i128;
        let lo = Integer::div_ceil(&(qa - d), &b);
        let hi = Integer::div_floor(&(qa + d), &b);
        lo..=hi
    }
}
