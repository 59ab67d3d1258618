//! Constructive witnesses: points of Cantor sets of continued fractions whose
//! combination hits a target value, and the `α` built around them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cf::expansion::{cf_enclosure, eval_finite_cf};
use crate::cf::{rat, ten_pow_neg, AlphaSpec, Enclosure, GeneratorRule, Source};
use crate::error::{Error, Result};

const DIGIT_CAP: u64 = 1 << 62;
const NODE_BUDGET: usize = 200_000;

/// `H(x, y) = (1+x)(1+y)/(2+x+y)` on `[0, 1/3]²`.
pub fn hall_h(x: &Enclosure, y: &Enclosure) -> Result<Enclosure> {
    let dom = Enclosure::new(BigRational::zero(), rat(1, 3));
    if !x.within(&dom) || !y.within(&dom) {
        return Err(Error::DomainViolation(format!(
            "H needs x, y in [0, 1/3], got {x} and {y}"
        )));
    }
    Ok(Enclosure::new(
        h_point(x.lo(), y.lo()),
        h_point(x.hi(), y.hi()),
    ))
}

fn h_point(x: &BigRational, y: &BigRational) -> BigRational {
    let one = BigRational::one();
    (&one + x) * (&one + y) / (BigRational::from_integer(2.into()) + x + y)
}

/// A set of continued fractions `[0; c_1, c_2, ...]` with digit constraints.
#[derive(Clone, Debug)]
pub struct CantorSet {
    first_min: u64,
    max: u64,
    forbidden: Option<u64>,
    top: Enclosure,
    tail: Enclosure,
}

impl CantorSet {
    /// First digit at least 3, later digits anything but 2.
    pub fn hall() -> Self {
        CantorSet {
            first_min: 3,
            max: DIGIT_CAP,
            forbidden: Some(2),
            top: Enclosure::new(BigRational::zero(), rat(1, 3)),
            tail: Enclosure::new(BigRational::zero(), BigRational::one()),
        }
    }

    /// All digits in `1..=m`.
    pub fn bounded(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument("digit bound must be at least 2".into()));
        }
        let g = ten_pow_neg(40);
        let lo = cf_enclosure(BigInt::zero(), |i| Ok(if i % 2 == 1 { m } else { 1 }), &g)?;
        let hi = cf_enclosure(BigInt::zero(), |i| Ok(if i % 2 == 1 { 1 } else { m }), &g)?;
        let top = Enclosure::new(lo.lo().clone(), hi.hi().clone());
        Ok(CantorSet {
            first_min: 1,
            max: m,
            forbidden: None,
            top: top.clone(),
            tail: top,
        })
    }

    fn allowed(&self, depth: usize, c: u64) -> bool {
        let min = if depth == 0 { self.first_min } else { 1 };
        c >= min && c <= self.max && (depth == 0 || Some(c) != self.forbidden)
    }

    fn mobius(prefix: &[u64]) -> ((BigInt, BigInt), (BigInt, BigInt)) {
        let d: Vec<BigInt> = prefix.iter().map(|&c| BigInt::from(c)).collect();
        eval_finite_cf(&BigInt::zero(), &d)
    }

    /// Hull of all members starting with `prefix`.
    pub fn hull(&self, prefix: &[u64]) -> Enclosure {
        if prefix.is_empty() {
            return self.top.clone();
        }
        let ((p1, q1), (p0, q0)) = Self::mobius(prefix);
        let at = |t: &BigRational| {
            (BigRational::from_integer(p1.clone()) + t * BigRational::from_integer(p0.clone()))
                / (BigRational::from_integer(q1.clone()) + t * BigRational::from_integer(q0.clone()))
        };
        Enclosure::new(at(self.tail.lo()), at(self.tail.hi()))
    }

    /// Next digit of a member equal to `z`, clamped to the allowed range.
    fn digit_for(&self, prefix: &[u64], z: &BigRational, tail: &BigRational) -> u64 {
        let ((p1, q1), (p0, q0)) = Self::mobius(prefix);
        let num = BigRational::from_integer(p1) - z * BigRational::from_integer(q1);
        let den = z * BigRational::from_integer(q0) - BigRational::from_integer(p0);
        if den.is_zero() {
            return DIGIT_CAP;
        }
        let s = num / den;
        if !s.is_positive() {
            return DIGIT_CAP;
        }
        let c = (s.recip() - tail).floor().to_integer();
        c.to_u64().unwrap_or(if c.is_negative() { 0 } else { DIGIT_CAP }).min(DIGIT_CAP)
    }

    /// Candidate next digits whose child hull meets `target`, best first.
    fn candidates(&self, prefix: &[u64], target: &Enclosure) -> Vec<u64> {
        let mut range = Vec::new();
        for z in [target.lo(), target.hi()] {
            for t in [self.tail.lo(), self.tail.hi()] {
                range.push(self.digit_for(prefix, z, t));
            }
        }
        let lo = range.iter().copied().min().unwrap_or(1).max(1);
        let hi = range.iter().copied().max().unwrap_or(1).saturating_add(1).min(self.max);
        let mid = target.midpoint();
        let centre = self.digit_for(prefix, &mid, &self.tail.midpoint());
        let mut cs: Vec<u64> = if hi - lo <= 48 {
            (lo..=hi).collect()
        } else {
            let mut v: Vec<u64> = (lo..lo + 16).chain(hi - 16..=hi).collect();
            v.extend(centre.saturating_sub(3)..=centre.saturating_add(3));
            v
        };
        cs.sort_unstable();
        cs.dedup();
        let depth = prefix.len();
        let mut scored: Vec<(BigRational, u64)> = cs
            .into_iter()
            .filter(|&c| c >= 1 && self.allowed(depth, c))
            .filter_map(|c| {
                let mut p = prefix.to_vec();
                p.push(c);
                let h = self.hull(&p);
                h.intersects(target)
                    .then(|| ((h.midpoint() - &mid).abs(), c))
            })
            .collect();
        scored.sort();
        scored.into_iter().map(|(_, c)| c).collect()
    }
}

/// Increasing two-variable combination used by the search.
#[derive(Clone, Copy, Debug)]
enum Combine {
    Hall,
    Sum,
}

impl Combine {
    fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        match self {
            Combine::Hall => h_point(x, y),
            Combine::Sum => x + y,
        }
    }

    fn range(&self, x: &Enclosure, y: &Enclosure) -> Enclosure {
        Enclosure::new(self.eval(x.lo(), y.lo()), self.eval(x.hi(), y.hi()))
    }

    /// `x` with `f(x, y) = v`.
    fn solve(&self, v: &BigRational, y: &BigRational) -> BigRational {
        let one = BigRational::one();
        match self {
            Combine::Hall => {
                (v * (BigRational::from_integer(2.into()) + y) - &one - y) / (&one + y - v)
            }
            Combine::Sum => v - y,
        }
    }
}

/// Depth-first search for `x ∈ X`, `y ∈ Y` with `f(x, y)` within `tol` of `k`,
/// both prefixes at least `need` digits long.
pub struct CantorSearch {
    sets: [CantorSet; 2],
    f: Combine,
    k: BigRational,
    tol: BigRational,
    need: usize,
    nodes: usize,
}

impl CantorSearch {
    fn run(&mut self) -> Option<[Vec<u64>; 2]> {
        let mut pre = [Vec::new(), Vec::new()];
        self.dfs(&mut pre).then_some(pre)
    }

    fn dfs(&mut self, pre: &mut [Vec<u64>; 2]) -> bool {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET || pre[0].len() + pre[1].len() > 4 * self.need + 400 {
            return false;
        }
        let hx = self.sets[0].hull(&pre[0]);
        let hy = self.sets[1].hull(&pre[1]);
        let g = self.f.range(&hx, &hy);
        let eps = &self.tol / BigRational::from_integer(4.into());
        let soft = Enclosure::new(&self.k - &eps, &self.k + &eps);
        if !g.intersects(&soft) {
            return false;
        }
        let done = [pre[0].len() >= self.need, pre[1].len() >= self.need];
        let hard = Enclosure::new(&self.k - &self.tol, &self.k + &self.tol);
        if done[0] && done[1] && g.within(&hard) {
            return true;
        }
        let i = match done {
            [true, false] => 1,
            [false, true] => 0,
            _ if hy.width() > hx.width() => 1,
            _ => 0,
        };
        let (own, other) = if i == 0 { (&hx, &hy) } else { (&hy, &hx) };
        let a = self.f.solve(soft.lo(), other.hi());
        let b = self.f.solve(soft.hi(), other.lo());
        let target = Enclosure::new(a, b);
        if !target.intersects(own) {
            return false;
        }
        let target = Enclosure::new(
            target.lo().max(own.lo()).clone(),
            target.hi().min(own.hi()).clone(),
        );
        for c in self.sets[i].candidates(&pre[i], &target) {
            pre[i].push(c);
            if self.dfs(pre) {
                return true;
            }
            pre[i].pop();
        }
        false
    }
}

/// A point `(x, y)` of `F × F` with `H(x, y)` near the target.
#[derive(Clone, Debug)]
pub struct HallPoint {
    pub k: BigRational,
    pub x_digits: Vec<u64>,
    pub y_digits: Vec<u64>,
    pub x: Enclosure,
    pub y: Enclosure,
    pub value: Enclosure,
    /// Blocks `x̄ 2 y` of growing length, capped at `cap` digits per side.
    pub alpha: AlphaSpec,
}

fn check_tol(tol: &BigRational) -> Result<()> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    Ok(())
}

/// Finds `x, y` in Hall's set with `H(x, y)` within `tol` of `k ∈ [1/2, 2/3]`.
pub fn hall_construct(k: &BigRational, cap: usize, tol: &BigRational) -> Result<HallPoint> {
    check_tol(tol)?;
    if k < &rat(1, 2) || k > &rat(2, 3) {
        return Err(Error::RangeViolation(format!(
            "target {} outside [1/2, 2/3]",
            crate::cf::rat_string(k)
        )));
    }
    if cap == 0 {
        return Err(Error::InvalidArgument("block cap must be positive".into()));
    }
    let mut s = CantorSearch {
        sets: [CantorSet::hall(), CantorSet::hall()],
        f: Combine::Hall,
        k: k.clone(),
        tol: tol.clone(),
        need: cap,
        nodes: 0,
    };
    let [xd, yd] = s.run().ok_or_else(|| {
        Error::RangeViolation("no point of F x F found within the search budget".into())
    })?;
    let x = s.sets[0].hull(&xd);
    let y = s.sets[1].hull(&yd);
    let value = hall_h(&x, &y)?;
    let alpha = blocks(2, &xd, &yd, cap)?;
    Ok(HallPoint {
        k: k.clone(),
        x_digits: xd,
        y_digits: yd,
        x,
        y,
        value,
        alpha,
    })
}

fn blocks(center: u64, x: &[u64], y: &[u64], cap: usize) -> Result<AlphaSpec> {
    AlphaSpec::new(
        0,
        Source::Rule(GeneratorRule::Blocks {
            center,
            left: x[..cap].to_vec(),
            right: y[..cap].to_vec(),
            cap,
        }),
    )
}

/// An `α` with `λ(α) ≈ λ₀` built from the block `x̄ a y`, `x, y ∈ F(6)`.
#[derive(Clone, Debug)]
pub struct L2Witness {
    pub lambda0: BigRational,
    pub center: u64,
    pub x_digits: Vec<u64>,
    pub y_digits: Vec<u64>,
    /// Enclosure of `x + y`.
    pub sum: Enclosure,
    pub alpha: AlphaSpec,
}

/// Largest `λ₀` the construction supports: `3/(21 + √15)`.
pub fn l2_upper_bound() -> f64 {
    3.0 / (21.0 + 15f64.sqrt())
}

/// Builds the witness for `0 < λ₀ <= 3/(21 + √15)`.
pub fn witness_l2(lambda0: &BigRational, cap: usize, tol: &BigRational) -> Result<L2Witness> {
    check_tol(tol)?;
    if cap == 0 {
        return Err(Error::InvalidArgument("block cap must be positive".into()));
    }
    if !lambda0.is_positive() {
        return Err(Error::RangeViolation("lambda0 must be positive".into()));
    }
    let l = lambda0.recip();
    let fifteen = BigRational::from_integer(15.into());
    let three = BigRational::from_integer(3.into());
    // L >= (21 + √15)/3
    let u = &three * &l - BigRational::from_integer(21.into());
    if u.is_negative() || &u * &u < fifteen {
        return Err(Error::RangeViolation(format!(
            "lambda0 = {} exceeds 3/(21 + sqrt 15) = {:.6}",
            crate::cf::rat_string(lambda0),
            l2_upper_bound()
        )));
    }
    // largest a with 3(L - a) + 3 >= √15
    let mut a = l.floor().to_integer();
    loop {
        let w = &three * (&l - BigRational::from_integer(a.clone())) + &three;
        if !w.is_negative() && &w * &w >= fifteen {
            break;
        }
        a -= 1;
    }
    let center = a
        .to_u64()
        .ok_or_else(|| Error::RangeViolation("lambda0 too small".into()))?;
    let target = &l - BigRational::from_integer(a);
    let mut s = CantorSearch {
        sets: [CantorSet::bounded(6)?, CantorSet::bounded(6)?],
        f: Combine::Sum,
        k: target,
        tol: tol.clone(),
        need: cap,
        nodes: 0,
    };
    let [xd, yd] = s
        .run()
        .ok_or_else(|| Error::RangeViolation("no point of F(6) + F(6) found".into()))?;
    let sum = Combine::Sum.range(&s.sets[0].hull(&xd), &s.sets[1].hull(&yd));
    let alpha = blocks(center, &xd, &yd, cap)?;
    Ok(L2Witness {
        lambda0: lambda0.clone(),
        center,
        x_digits: xd,
        y_digits: yd,
        sum,
        alpha,
    })
}

/// `[0; b_0, 2, b_1, 2, ...]` with `b_j = j + 2`, whose `𝔩*` values at the 2s tend to `1/2`.
pub fn witness_l2star_min() -> AlphaSpec {
    AlphaSpec::new(0, Source::Rule(GeneratorRule::Alt2 { offset: 2 })).expect("valid rule")
}
