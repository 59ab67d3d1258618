//! Jump sequences `𝔔` (for `ψ^[2]`) and `𝔛` (for `ψ^[2]*`) generated directly
//! from the partial quotients, in time linear in the number of digits.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::cf::{compare_forms, AlphaSpec, Expansion, LatticePoint};
use crate::error::{Error, Result};
use crate::psi::{t_threshold, JumpPoint, Provenance, PsiVariant};

/// The digit pattern and position that produced a jump point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleCase {
    Seed,
    /// `a_n >= 3`: slot 0 is `q_{n-2}+q_{n-1}`, slot 1 is `2q_{n-1}`, slot 2 is `q_n-q_{n-1}`.
    Q1Geq3 { n: usize, slot: u8 },
    /// `a_n = 2`: `q_n - q_{n-1}`.
    Q2Eq2 { n: usize },
    /// An isolated 1 at `n`: `2q_{n-2}+q_{n-1}`.
    Q3Isolated1 { n: usize },
    /// A run of `r >= 2` ones starting at `n`. Slot 0 is `2q_{n-2}+q_{n-1}`,
    /// slot `s` in `1..=r` is `2q_{n+s-2}`, slot `r+1` is `2q_{n+r-3}+q_{n+r-2}`.
    /// `r` is `None` when the run reaches past the generation horizon.
    Q4Run1 { n: usize, r: Option<usize>, slot: usize },
    /// A run of ones starting at `n` that never ends; slots as in `Q4Run1`.
    Q5Infinite1 { n: usize, slot: usize },
    /// `a_n >= 2`: `q_{n-2} + j q_{n-1}` for `1 <= j <= a_n - 1`.
    X1Geq2 { n: usize, j: u64 },
    /// `a_n = 1`: `2q_{n-2}+q_{n-1}`.
    X2Eq1 { n: usize },
}

impl RuleCase {
    /// Digit index the rule was read off.
    pub fn source_index(&self) -> Option<usize> {
        match *self {
            RuleCase::Seed => None,
            RuleCase::Q1Geq3 { n, .. }
            | RuleCase::Q2Eq2 { n }
            | RuleCase::Q3Isolated1 { n }
            | RuleCase::Q4Run1 { n, .. }
            | RuleCase::Q5Infinite1 { n, .. }
            | RuleCase::X1Geq2 { n, .. }
            | RuleCase::X2Eq1 { n } => Some(n),
        }
    }

    /// `(j, n)` such that the jump product equals `κ^j_n`, when one applies.
    pub fn kappa(&self, digit_at: impl Fn(usize) -> u64) -> Option<(u8, usize)> {
        match *self {
            RuleCase::Seed => None,
            RuleCase::Q1Geq3 { n, slot } => Some(([1, 4, 2][slot as usize], n)),
            RuleCase::Q2Eq2 { n } => Some((2, n)),
            RuleCase::Q3Isolated1 { n } => Some((3, n)),
            RuleCase::Q4Run1 { n, r, slot } => match r {
                Some(r) if slot == r + 1 => Some((3, n + r - 1)),
                _ if slot == 0 => Some((3, n)),
                _ => Some((4, n + slot - 1)),
            },
            RuleCase::Q5Infinite1 { n, slot } => {
                if slot == 0 {
                    Some((3, n))
                } else {
                    Some((4, n + slot - 1))
                }
            }
            RuleCase::X1Geq2 { n, j } => {
                if j == 1 {
                    Some((1, n))
                } else if j == digit_at(n) - 1 {
                    Some((2, n))
                } else {
                    None
                }
            }
            RuleCase::X2Eq1 { n } => Some((3, n)),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            RuleCase::Seed => "seed",
            RuleCase::Q1Geq3 { .. } => "Q1_geq3",
            RuleCase::Q2Eq2 { .. } => "Q2_eq2",
            RuleCase::Q3Isolated1 { .. } => "Q3_isolated1",
            RuleCase::Q4Run1 { .. } => "Q4_run1",
            RuleCase::Q5Infinite1 { .. } => "Q5_infinite1",
            RuleCase::X1Geq2 { .. } => "X1_geq2",
            RuleCase::X2Eq1 { .. } => "X2_eq1",
        }
    }
}

impl fmt::Display for RuleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = self.tag();
        match *self {
            RuleCase::Seed => f.write_str(tag),
            RuleCase::Q1Geq3 { n, slot } => write!(f, "{tag}(n={n},slot={slot})"),
            RuleCase::Q4Run1 { n, r: Some(r), slot } => write!(f, "{tag}(n={n},r={r},slot={slot})"),
            RuleCase::Q4Run1 { n, r: None, slot } => write!(f, "{tag}(n={n},r=?,slot={slot})"),
            RuleCase::Q5Infinite1 { n, slot } => write!(f, "{tag}(n={n},slot={slot})"),
            RuleCase::X1Geq2 { n, j } => write!(f, "{tag}(n={n},j={j})"),
            RuleCase::Q2Eq2 { n } | RuleCase::Q3Isolated1 { n } | RuleCase::X2Eq1 { n } => {
                write!(f, "{tag}(n={n})")
            }
        }
    }
}

/// A generated value that coincided with an earlier one and was dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coincidence {
    pub q: BigInt,
    pub kept: RuleCase,
    pub dropped: RuleCase,
}

#[derive(Clone, Debug)]
pub struct JumpSequence {
    pub variant: PsiVariant,
    pub points: Vec<JumpPoint>,
    pub dedup_log: Vec<Coincidence>,
}

impl JumpSequence {
    pub fn qs(&self) -> Vec<BigInt> {
        self.points.iter().map(|p| p.q.clone()).collect()
    }
}

/// How far rule generation runs.
#[derive(Clone, Debug)]
pub enum Limit {
    /// All values `<= T`.
    Value(BigInt),
    /// All items whose source digit index is `<= N`; for the `𝔛` blocks only
    /// the two ends `j = 1` and `j = a_n - 1` are produced.
    Index(usize),
}

/// One generated lattice point before merging.
#[derive(Clone, Debug)]
pub struct RuleItem {
    pub q: BigInt,
    pub p: BigInt,
    pub case: RuleCase,
}

struct Gen<'a> {
    exp: &'a mut Expansion,
    limit: Limit,
    items: Vec<RuleItem>,
}

impl Gen<'_> {
    /// `c2·z_{n2} + c1·z_{n1}`.
    fn comb(&mut self, c2: i64, n2: isize, c1: i64, n1: isize) -> Result<(BigInt, BigInt)> {
        let (q2, p2) = self.exp.point(n2)?;
        let (q1, p1) = self.exp.point(n1)?;
        Ok((c2 * q2 + c1 * q1, c2 * p2 + c1 * p1))
    }

    fn within(&self, q: &BigInt) -> bool {
        match &self.limit {
            Limit::Value(t) => q <= t,
            Limit::Index(_) => true,
        }
    }

    fn push(&mut self, (q, p): (BigInt, BigInt), case: RuleCase) {
        if self.within(&q) {
            self.items.push(RuleItem { q, p, case });
        }
    }

    /// Whether digit index `n` still needs processing.
    fn active(&mut self, n: usize) -> Result<bool> {
        match self.limit.clone() {
            Limit::Index(max) => Ok(n <= max),
            Limit::Value(t) => {
                let s = self.exp.q(n as isize - 2)? + self.exp.q(n as isize - 1)?;
                Ok(s <= t)
            }
        }
    }
}

fn run_of_ones(g: &mut Gen<'_>, m: usize) -> Result<usize> {
    let n = m as isize;
    let head = g.comb(2, n - 2, 1, n - 1)?;
    let mut body = Vec::new();
    let mut k = m;
    let periodic_ones = g.exp.alpha().is_golden_equivalent();
    let pre = g.exp.alpha().periodic_parts().map(|p| p.0).unwrap_or(0);
    let end = loop {
        let v = g.comb(2, k as isize - 1, 0, 0)?;
        let beyond = match &g.limit {
            Limit::Value(t) => &v.0 > t,
            Limit::Index(max) => k > *max,
        };
        if beyond {
            break None;
        }
        body.push(v);
        if periodic_ones && k > pre {
            k += 1;
            continue;
        }
        if g.exp.digit(k + 1)? != 1 {
            break Some(k - m + 1);
        }
        k += 1;
    };
    match end {
        Some(1) => g.push(head, RuleCase::Q3Isolated1 { n: m }),
        Some(r) => {
            g.push(head, RuleCase::Q4Run1 { n: m, r: Some(r), slot: 0 });
            for (s, v) in body.into_iter().enumerate() {
                g.push(v, RuleCase::Q4Run1 { n: m, r: Some(r), slot: s + 1 });
            }
            let tail = g.comb(2, n + r as isize - 3, 1, n + r as isize - 2)?;
            g.push(tail, RuleCase::Q4Run1 { n: m, r: Some(r), slot: r + 1 });
        }
        None => {
            let infinite = periodic_ones && k > pre;
            let case = |slot| {
                if infinite {
                    RuleCase::Q5Infinite1 { n: m, slot }
                } else {
                    RuleCase::Q4Run1 { n: m, r: None, slot }
                }
            };
            g.push(head, case(0));
            for (s, v) in body.into_iter().enumerate() {
                g.push(v, case(s + 1));
            }
        }
    }
    Ok(k + 1)
}

/// Unmerged items of `𝔔` or `𝔛` in generation order.
pub fn rule_items(exp: &mut Expansion, limit: Limit, variant: PsiVariant) -> Result<Vec<RuleItem>> {
    let mut g = Gen {
        exp,
        limit,
        items: Vec::new(),
    };
    let mut n = 1usize;
    while g.active(n)? {
        let a = g.exp.digit(n)?;
        let ni = n as isize;
        match variant {
            PsiVariant::SecondPair => {
                if a >= 3 {
                    let v = g.comb(1, ni - 2, 1, ni - 1)?;
                    g.push(v, RuleCase::Q1Geq3 { n, slot: 0 });
                    let v = g.comb(2, ni - 1, 0, 0)?;
                    g.push(v, RuleCase::Q1Geq3 { n, slot: 1 });
                    let v = g.comb(1, ni, -1, ni - 1)?;
                    g.push(v, RuleCase::Q1Geq3 { n, slot: 2 });
                } else if a == 2 {
                    let v = g.comb(1, ni, -1, ni - 1)?;
                    g.push(v, RuleCase::Q2Eq2 { n });
                } else {
                    n = run_of_ones(&mut g, n)?;
                    continue;
                }
            }
            PsiVariant::SecondFraction => {
                if a >= 2 {
                    let js: Vec<u64> = match &g.limit {
                        Limit::Index(_) => {
                            if a == 2 {
                                vec![1]
                            } else {
                                vec![1, a - 1]
                            }
                        }
                        Limit::Value(t) => {
                            let (q2, q1) = (g.exp.q(ni - 2)?, g.exp.q(ni - 1)?);
                            // q_{n-2} + j q_{n-1} <= T
                            let jmax = (t - &q2) / &q1;
                            let jmax = u64::try_from(jmax).unwrap_or(u64::MAX);
                            (1..=jmax.min(a - 1)).collect()
                        }
                    };
                    for j in js {
                        let v = g.comb(1, ni - 2, j as i64, ni - 1)?;
                        g.push(v, RuleCase::X1Geq2 { n, j });
                    }
                } else {
                    let v = g.comb(2, ni - 2, 1, ni - 1)?;
                    g.push(v, RuleCase::X2Eq1 { n });
                }
            }
            PsiVariant::Best => {
                return Err(Error::InvalidArgument(
                    "rules exist only for the second-best variants".into(),
                ))
            }
        }
        n += 1;
    }
    Ok(g.items)
}

fn build(alpha: &AlphaSpec, t: &BigInt, variant: PsiVariant) -> Result<JumpSequence> {
    if t < &BigInt::from(1) {
        return Err(Error::InvalidArgument("T must be at least 1".into()));
    }
    let threshold = BigInt::from(t_threshold(alpha)?);
    let mut exp = Expansion::new(alpha);
    let mut items = rule_items(&mut exp, Limit::Value(t.clone()), variant)?;
    let seed_p = items
        .iter()
        .find(|it| it.q == BigInt::from(1))
        .map(|it| it.p.clone())
        .expect("every first digit yields 1");
    items.insert(
        0,
        RuleItem {
            q: BigInt::from(1),
            p: seed_p,
            case: RuleCase::Seed,
        },
    );
    // stable: equal values keep generation order
    items.sort_by(|a, b| a.q.cmp(&b.q));
    let mut points: Vec<JumpPoint> = Vec::new();
    let mut dedup_log = Vec::new();
    for it in items {
        if let Some(last) = points.last_mut() {
            if last.q == it.q {
                let Provenance::Rule(kept) = last.provenance.clone() else {
                    unreachable!()
                };
                // distinct lattice points at one q: the smaller form is the minimizer
                let replace = last.p != it.p
                    && compare_forms(
                        &mut exp,
                        &LatticePoint::new(it.q.clone(), it.p.clone()),
                        &LatticePoint::new(last.q.clone(), last.p.clone()),
                    )? == Ordering::Less;
                if replace {
                    last.p = it.p;
                    last.provenance = Provenance::Rule(it.case.clone());
                    dedup_log.push(Coincidence {
                        q: it.q,
                        kept: it.case,
                        dropped: kept,
                    });
                } else {
                    dedup_log.push(Coincidence {
                        q: it.q,
                        kept,
                        dropped: it.case,
                    });
                }
                continue;
            }
        }
        points.push(JumpPoint {
            pre_threshold: it.q < threshold,
            q: it.q,
            p: it.p,
            provenance: Provenance::Rule(it.case),
        });
    }
    Ok(JumpSequence {
        variant,
        points,
        dedup_log,
    })
}

/// `𝔔` up to `T`.
pub fn build_q(alpha: &AlphaSpec, t: &BigInt) -> Result<JumpSequence> {
    build(alpha, t, PsiVariant::SecondPair)
}

/// `𝔛` up to `T`.
pub fn build_x(alpha: &AlphaSpec, t: &BigInt) -> Result<JumpSequence> {
    build(alpha, t, PsiVariant::SecondFraction)
}

/// Which rule produced `q`. When several rules produce the same `q`, this is
/// the one whose lattice point minimizes the form, the earliest on a tie.
pub fn rule_provenance(seq: &JumpSequence, q: &BigInt) -> Result<RuleCase> {
    seq.points
        .iter()
        .find(|p| &p.q == q)
        .and_then(|p| match &p.provenance {
            Provenance::Rule(c) => Some(c.clone()),
            Provenance::OracleScan => None,
        })
        .ok_or_else(|| Error::NotAJumpPoint { q: q.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::jump_scan;

    fn qs(seq: &JumpSequence) -> Vec<i64> {
        seq.points.iter().map(|p| i64::try_from(&p.q).unwrap()).collect()
    }

    #[test]
    fn named_sequences() {
        let t = |v: i64| BigInt::from(v);
        let g = AlphaSpec::golden();
        assert_eq!(qs(&build_q(&g, &t(30)).unwrap()), vec![1, 2, 4, 6, 10, 16, 26]);
        assert_eq!(qs(&build_x(&g, &t(30)).unwrap()), vec![1, 3, 4, 7, 11, 18, 29]);
        let r2: AlphaSpec = "sqrt:2".parse().unwrap();
        assert_eq!(qs(&build_q(&r2, &t(50)).unwrap()), vec![1, 3, 7, 17, 41]);
        assert_eq!(qs(&build_x(&r2, &t(50)).unwrap()), vec![1, 3, 7, 17, 41]);
        let three: AlphaSpec = "cf:[0;(3)]".parse().unwrap();
        assert_eq!(qs(&build_q(&three, &t(25)).unwrap()), vec![1, 2, 4, 6, 7, 13, 20, 23]);
        let six: AlphaSpec = "cf:[0;(6)]".parse().unwrap();
        assert_eq!(qs(&build_x(&six, &t(5)).unwrap()), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn provenance_lookup() {
        let r2: AlphaSpec = "sqrt:2".parse().unwrap();
        let s = build_q(&r2, &BigInt::from(50)).unwrap();
        // √2 = [1; 2, 2, ...]: q = 1, 2, 5, 12, so 7 = q_3 - q_2
        assert_eq!(rule_provenance(&s, &BigInt::from(7)).unwrap(), RuleCase::Q2Eq2 { n: 3 });
        let g = AlphaSpec::golden();
        let x = build_x(&g, &BigInt::from(30)).unwrap();
        assert_eq!(rule_provenance(&x, &BigInt::from(18)).unwrap(), RuleCase::X2Eq1 { n: 6 });
        let q = build_q(&g, &BigInt::from(30)).unwrap();
        assert_eq!(rule_provenance(&q, &BigInt::from(1)).unwrap(), RuleCase::Seed);
        assert!(matches!(
            rule_provenance(&q, &BigInt::from(5)),
            Err(Error::NotAJumpPoint { .. })
        ));
    }

    #[test]
    fn coincidences_are_logged() {
        let three: AlphaSpec = "cf:[0;(3)]".parse().unwrap();
        let s = build_q(&three, &BigInt::from(25)).unwrap();
        // 2q_0 = q_1 - q_0 = 2 at n = 1; z_1 - z_0 = (2, 1) beats 2z_0 = (2, 0)
        assert!(s.dedup_log.iter().any(|c| c.q == BigInt::from(2)
            && c.kept == RuleCase::Q1Geq3 { n: 1, slot: 2 }
            && c.dropped == RuleCase::Q1Geq3 { n: 1, slot: 1 }));
        let g = build_q(&AlphaSpec::golden(), &BigInt::from(30)).unwrap();
        // 2q_0 = 2q_1 for the golden ratio; 2z_1 = (2, 2) is the smaller form
        let two = g.points.iter().find(|p| p.q == BigInt::from(2)).unwrap();
        assert_eq!(two.p, BigInt::from(2));
        assert!(g.dedup_log.iter().any(|c| c.q == BigInt::from(2)));
        assert!(matches!(
            rule_provenance(&g, &BigInt::from(26)).unwrap(),
            RuleCase::Q5Infinite1 { n: 1, .. }
        ));
    }

    #[test]
    fn rules_match_scan_with_points() {
        for s in ["golden", "sqrt:2", "quad:1,1,17,2", "e", "cf:[0;(3)]", "cf:[0;1,1,2,1,5,1,1,1,(4,1)]"] {
            let a: AlphaSpec = s.parse().unwrap();
            for (variant, rules) in [
                (PsiVariant::SecondPair, build_q(&a, &BigInt::from(5000)).unwrap()),
                (PsiVariant::SecondFraction, build_x(&a, &BigInt::from(5000)).unwrap()),
            ] {
                let scan = jump_scan(&a, 5000, variant).unwrap();
                let key = |p: &JumpPoint| (p.q.clone(), p.p.clone());
                let r: Vec<_> = rules.points.iter().map(key).collect();
                let o: Vec<_> = scan.iter().map(key).collect();
                assert_eq!(r, o, "{s} {variant}");
            }
        }
    }
}
