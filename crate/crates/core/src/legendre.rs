//! Convergent-membership criteria: the Farey-interval characterization, the
//! Legendre and Lucas inequalities, and the second-best predicates.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cf::expansion::{eval_finite_cf, rational_cf, sign_of};
use crate::cf::{rat_string, ten_pow_neg, AlphaSpec, Enclosure, Expansion, IntBracket};
use crate::error::{Error, Result};
use crate::psi::{psi_second, PsiVariant, Scanner};
use crate::spectra::SpectrumReport;

fn check_reduced(p: &BigInt, q: &BigInt) -> Result<()> {
    if !q.is_positive() || !p.gcd(q).is_one() {
        return Err(Error::NotReduced {
            p: p.to_string(),
            q: q.to_string(),
        });
    }
    Ok(())
}

/// Convergents of `α` with a binary-searchable denominator list.
struct Table {
    exp: Expansion,
    qs: Vec<BigInt>,
    ps: Vec<BigInt>,
}

impl Table {
    fn new(alpha: &AlphaSpec) -> Self {
        Table {
            exp: Expansion::new(alpha),
            qs: Vec::new(),
            ps: Vec::new(),
        }
    }

    /// Rows `0..=n`.
    fn ensure(&mut self, n: usize) -> Result<()> {
        while self.qs.len() <= n {
            let (q, p) = self.exp.point(self.qs.len() as isize)?;
            self.qs.push(q);
            self.ps.push(p);
        }
        Ok(())
    }

    /// Ensures rows until `q_n > b`.
    fn cover(&mut self, b: &BigInt) -> Result<()> {
        self.ensure(1)?;
        while self.qs.last().expect("nonempty") <= b {
            self.ensure(self.qs.len())?;
        }
        Ok(())
    }

    /// Ordering of `α` relative to `a/b` (never equal for irrational `α`).
    fn cmp_alpha(&mut self, x: &BigRational) -> Result<Ordering> {
        let (a, b) = (x.numer(), x.denom());
        self.cover(b)?;
        let mut k = self.qs.partition_point(|q| q < b).saturating_sub(1);
        loop {
            self.ensure(k + 1)?;
            for m in [k, k + 1] {
                if &self.ps[m] * b == a * &self.qs[m] {
                    return Ok(if sign_of(m as isize) > 0 {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    });
                }
            }
            // sign of p_m/q_m - a/b
            let s = |m: usize, t: &Table| (&t.ps[m] * b - a * &t.qs[m]).sign();
            let (s0, s1) = (s(k, self), s(k + 1, self));
            if s0 == s1 {
                // both endpoints on one side of x, so α is too
                return Ok(if s0 == num_bigint::Sign::Plus {
                    Ordering::Greater
                } else {
                    Ordering::Less
                });
            }
            k += 1;
        }
    }

    /// `α` in the open interval `(lo, hi)`.
    fn inside(&mut self, lo: &BigRational, hi: &BigRational) -> Result<bool> {
        Ok(self.cmp_alpha(lo)? == Ordering::Greater && self.cmp_alpha(hi)? == Ordering::Less)
    }

    fn is_convergent(&mut self, p: &BigInt, q: &BigInt) -> Result<bool> {
        self.cover(q)?;
        let lo = self.qs.partition_point(|x| x < q);
        Ok((lo..self.qs.len())
            .take_while(|&m| &self.qs[m] == q)
            .any(|m| &self.ps[m] == p))
    }
}

/// The two continued-fraction forms of `p/q` with their previous convergents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfForms {
    /// `[a0; a1, ..., at]` with `at >= 2` when `t >= 1`.
    pub short: Vec<BigInt>,
    /// `[a0; a1, ..., at - 1, 1]`.
    pub long: Vec<BigInt>,
    /// `p/q` of `[a0; ..., a_{t-1}]`; `1/0` when `t = 0`.
    pub prev_short: (BigInt, BigInt),
    /// `p/q` of `[a0; ..., at - 1]`.
    pub prev_long: (BigInt, BigInt),
}

impl CfForms {
    pub fn of(p: &BigInt, q: &BigInt) -> Self {
        let (a0, d) = rational_cf(&BigRational::new(p.clone(), q.clone()));
        let mut short = vec![a0.clone()];
        short.extend(d.iter().cloned());
        let mut long = short.clone();
        let last = long.pop().expect("a0 present");
        long.push(last - 1);
        long.push(BigInt::one());
        let (_, prev_short) = eval_finite_cf(&a0, &d);
        let prev_long = (p - &prev_short.0, q - &prev_short.1);
        CfForms {
            short,
            long,
            prev_short,
            prev_long,
        }
    }

    /// Index `t` of the last digit of the short form.
    pub fn t_short(&self) -> usize {
        self.short.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyNeighbors {
    pub p_minus: BigInt,
    pub q_minus: BigInt,
    pub p_plus: BigInt,
    pub q_plus: BigInt,
    /// Open interval `((p+p₋)/(q+q₋), (p+p₊)/(q+q₊))`.
    pub interval: (BigRational, BigRational),
}

/// Neighbors of `p/q` in the Farey sequence of order `q`, read off the two
/// continued-fraction forms. For `q = 1` the right neighbor is `1/0`.
pub fn farey_neighbors(p: &BigInt, q: &BigInt) -> Result<FareyNeighbors> {
    check_reduced(p, q)?;
    let f = CfForms::of(p, q);
    let (a, b) = (f.prev_short, f.prev_long);
    // order by value: x/y < p/q iff x·q < p·y (y >= 0)
    let (minus, plus) = if &a.0 * q < p * &a.1 { (a, b) } else { (b, a) };
    debug_assert!((p * &minus.1 - &minus.0 * q).abs().is_one());
    debug_assert!((&plus.0 * q - p * &plus.1).abs().is_one());
    let interval = (
        BigRational::new(p + &minus.0, q + &minus.1),
        BigRational::new(p + &plus.0, q + &plus.1),
    );
    Ok(FareyNeighbors {
        p_minus: minus.0,
        q_minus: minus.1,
        p_plus: plus.0,
        q_plus: plus.1,
        interval,
    })
}

/// True iff `α` lies in the open Farey interval of `p/q`.
pub fn is_convergent_canonical(alpha: &AlphaSpec, p: &BigInt, q: &BigInt) -> Result<bool> {
    let mut t = Table::new(alpha);
    canonical(&mut t, p, q)
}

fn canonical(t: &mut Table, p: &BigInt, q: &BigInt) -> Result<bool> {
    let f = farey_neighbors(p, q)?;
    t.inside(&f.interval.0, &f.interval.1)
}

/// How the sign of `θ` selects the parity of `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityConvention {
    /// `t` odd when `θ > 0`.
    AsPrinted,
    /// `t` even when `θ > 0`.
    Swapped,
}

impl ParityConvention {
    pub fn all() -> [ParityConvention; 2] {
        [ParityConvention::AsPrinted, ParityConvention::Swapped]
    }

    fn wants_even(&self, theta_positive: bool) -> bool {
        match self {
            ParityConvention::AsPrinted => !theta_positive,
            ParityConvention::Swapped => theta_positive,
        }
    }
}

impl std::str::FromStr for ParityConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-printed" => Ok(ParityConvention::AsPrinted),
            "swapped" => Ok(ParityConvention::Swapped),
            _ => Err(Error::InvalidArgument(format!(
                "unknown parity convention '{s}' (as-printed|swapped)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LegendreCertificate {
    pub p: BigInt,
    pub q: BigInt,
    /// `q(qα - p)`.
    pub theta: Enclosure,
    pub cf_even: Vec<BigInt>,
    pub cf_odd: Vec<BigInt>,
    pub q_prime: BigInt,
    /// `q/(q + q')`.
    pub bound: BigRational,
    pub verdict: bool,
    pub canonical_verdict: bool,
}

impl LegendreCertificate {
    pub fn to_json(&self, lucas: Option<bool>) -> Value {
        json!({
            "schema": 1,
            "p": self.p.to_string(),
            "q": self.q.to_string(),
            "theta": [rat_string(self.theta.lo()), rat_string(self.theta.hi())],
            "bound": rat_string(&self.bound),
            "legendre": self.verdict,
            "canonical": self.canonical_verdict,
            "lucas": lucas,
        })
    }
}

pub fn legendre_test(
    alpha: &AlphaSpec,
    p: &BigInt,
    q: &BigInt,
    convention: ParityConvention,
) -> Result<LegendreCertificate> {
    let mut t = Table::new(alpha);
    legendre_with(&mut t, p, q, convention, &ten_pow_neg(20))
}

fn legendre_with(
    t: &mut Table,
    p: &BigInt,
    q: &BigInt,
    convention: ParityConvention,
    goal: &BigRational,
) -> Result<LegendreCertificate> {
    check_reduced(p, q)?;
    let x = BigRational::new(p.clone(), q.clone());
    let theta_positive = t.cmp_alpha(&x)? == Ordering::Greater;
    let f = CfForms::of(p, q);
    let short_even = f.t_short() % 2 == 0;
    let (cf_even, cf_odd) = if short_even {
        (f.short.clone(), f.long.clone())
    } else {
        (f.long.clone(), f.short.clone())
    };
    let use_short = convention.wants_even(theta_positive) == short_even;
    let q_prime = if use_short {
        f.prev_short.1.clone()
    } else {
        f.prev_long.1.clone()
    };
    let bound = BigRational::new(q.clone(), q + &q_prime);
    // |θ| < q/(q+q') iff |α - p/q| < 1/(q(q+q'))
    let delta = BigRational::new(BigInt::one(), q * (q + &q_prime));
    let verdict = t.inside(&(&x - &delta), &(&x + &delta))?;
    let qr = BigRational::from_integer(q.clone());
    let v = t.exp.form_value(q, p, &(goal / &qr))?.scale(&qr);
    let theta = if theta_positive {
        v
    } else {
        Enclosure::new(-v.hi().clone(), -v.lo().clone())
    };
    let canonical_verdict = canonical(t, p, q)?;
    Ok(LegendreCertificate {
        p: p.clone(),
        q: q.clone(),
        theta,
        cf_even,
        cf_odd,
        q_prime,
        bound,
        verdict,
        canonical_verdict,
    })
}

/// `|α - p/q| < 1/(q(q + q_prev))` for a unimodular pair `q_prev <= q`.
pub fn lucas_test(
    alpha: &AlphaSpec,
    p_prev: &BigInt,
    q_prev: &BigInt,
    p: &BigInt,
    q: &BigInt,
) -> Result<bool> {
    let mut t = Table::new(alpha);
    lucas_with(&mut t, p_prev, q_prev, p, q)
}

fn lucas_with(t: &mut Table, p_prev: &BigInt, q_prev: &BigInt, p: &BigInt, q: &BigInt) -> Result<bool> {
    let det = p * q_prev - p_prev * q;
    if !det.abs().is_one() || q_prev.is_negative() || q_prev > q || !q.is_positive() {
        return Err(Error::NotUnimodular {
            p_prev: p_prev.to_string(),
            q_prev: q_prev.to_string(),
            p: p.to_string(),
            q: q.to_string(),
        });
    }
    let x = BigRational::new(p.clone(), q.clone());
    let delta = BigRational::new(BigInt::one(), q * (q + q_prev));
    t.inside(&(&x - &delta), &(&x + &delta))
}

/// Result of the equivalence sweep over reduced fractions.
#[derive(Clone, Debug, Default)]
pub struct EquivalenceSweep {
    pub checked: usize,
    /// Fractions where Legendre, Farey and list membership are not all equal.
    pub disagreements: Vec<LegendreCertificate>,
    /// Consecutive convergent pairs where Lucas failed.
    pub lucas_failures: Vec<usize>,
    pub rows: Vec<Value>,
}

/// Compares the three verdicts for every reduced `p/q`, `q <= max_q`, with
/// `|qα - p| < 3`. Every other fraction has `|θ| >= 3q` and lies outside its
/// Farey interval, so all three verdicts are false there.
/// Also checks Lucas on consecutive convergents `n <= lucas_n`.
pub fn equivalence_sweep(
    alpha: &AlphaSpec,
    max_q: u64,
    convention: ParityConvention,
    lucas_n: usize,
    keep_rows: bool,
) -> Result<EquivalenceSweep> {
    let mut t = Table::new(alpha);
    let mut out = EquivalenceSweep::default();
    let goal = ten_pow_neg(20);
    let mut exp = Expansion::new(alpha);
    let br = IntBracket::new(&mut exp, max_q.max(1))?;
    for q in 1..=max_q {
        let qb = BigInt::from(q);
        let centre = Integer::div_floor(&(q as i128 * br.a as i128), &(br.b as i128));
        for rel in centre - 2..=centre + 3 {
            let p = br.absolute(q, rel);
            if !p.gcd(&qb).is_one() {
                continue;
            }
            let cert = legendre_with(&mut t, &p, &qb, convention, &goal)?;
            let member = t.is_convergent(&p, &qb)?;
            out.checked += 1;
            let lucas = if member {
                let n = (0..t.qs.len())
                    .find(|&m| t.qs[m] == qb && t.ps[m] == p)
                    .expect("member");
                if n >= 1 {
                    let (pp, qp) = (t.ps[n - 1].clone(), t.qs[n - 1].clone());
                    Some(lucas_with(&mut t, &pp, &qp, &p, &qb)?)
                } else {
                    None
                }
            } else {
                None
            };
            if cert.verdict != cert.canonical_verdict || cert.verdict != member {
                out.disagreements.push(cert.clone());
            }
            if keep_rows {
                out.rows.push(cert.to_json(lucas));
            }
        }
    }
    t.ensure(lucas_n)?;
    for n in 1..=lucas_n {
        let (pp, qp, p, q) = (
            t.ps[n - 1].clone(),
            t.qs[n - 1].clone(),
            t.ps[n].clone(),
            t.qs[n].clone(),
        );
        if !lucas_with(&mut t, &pp, &qp, &p, &q)? {
            out.lucas_failures.push(n);
        }
    }
    Ok(out)
}

/// Runs the sweep under each convention and returns the disagreement counts.
/// Exactly one convention is expected to have none.
pub fn parity_resolution(alphas: &[AlphaSpec], max_q: u64) -> Result<Vec<(ParityConvention, usize)>> {
    ParityConvention::all()
        .into_iter()
        .map(|c| {
            let mut bad = 0;
            for a in alphas {
                bad += equivalence_sweep(a, max_q, c, 0, false)?.disagreements.len();
            }
            Ok((c, bad))
        })
        .collect()
}

/// Which estimate statement 6 compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold6 {
    K,
    KStar,
}

#[derive(Clone, Debug)]
pub struct PredicateOptions {
    pub epsilon: BigRational,
    /// Smallest `q` at which statements 4 and 6 apply.
    pub t_min: u64,
    pub threshold6: Threshold6,
}

impl Default for PredicateOptions {
    fn default() -> Self {
        PredicateOptions {
            epsilon: ten_pow_neg(3),
            t_min: 1,
            threshold6: Threshold6::KStar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StatementVerdict {
    pub statement: u8,
    pub fired: bool,
    /// The conclusion: `q` is a convergent denominator (1, 3, 4) or
    /// `p/q` is a convergent (2, 5, 6).
    pub conclusion: bool,
}

impl StatementVerdict {
    pub fn failed(&self) -> bool {
        self.fired && !self.conclusion
    }
}

#[derive(Clone, Debug)]
pub struct PredicateReport {
    pub p: BigInt,
    pub q: BigInt,
    pub verdicts: Vec<StatementVerdict>,
}

impl PredicateReport {
    pub fn failures(&self) -> Vec<u8> {
        self.verdicts
            .iter()
            .filter(|v| v.failed())
            .map(|v| v.statement)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "p": self.p.to_string(),
            "q": self.q.to_string(),
            "statements": self.verdicts.iter().map(|v| json!({
                "statement": v.statement,
                "fired": v.fired,
                "conclusion": v.conclusion,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Strictly below `bound` (enclosure-wise).
fn below(x: &Enclosure, bound: &Enclosure, eps: &BigRational) -> bool {
    x.hi() < &(bound.lo() - eps)
}

fn coverage(t: &mut Table, report: &SpectrumReport, q: &BigInt) -> Result<()> {
    t.ensure(report.horizon)?;
    if q > &t.qs[report.horizon] {
        return Err(Error::InsufficientHorizon(format!(
            "q = {q} exceeds q_{} of the report",
            report.horizon
        )));
    }
    Ok(())
}

struct Verdicts<'a> {
    report: &'a SpectrumReport,
    opts: &'a PredicateOptions,
}

impl Verdicts<'_> {
    /// Statements 3-6 from the products `q||qα||` and `q|qα - p|`.
    fn products(
        &self,
        q: u64,
        near: &Enclosure,
        own: &Enclosure,
        q_member: bool,
        pq_member: bool,
    ) -> [StatementVerdict; 4] {
        let zero = BigRational::zero();
        let eps = &self.opts.epsilon;
        let late = q >= self.opts.t_min;
        // below the threshold the infimum defining 𝔧, 𝔧* says nothing about q
        let defined = q >= self.report.threshold;
        let th6 = match self.opts.threshold6 {
            Threshold6::K => &self.report.k.value,
            Threshold6::KStar => &self.report.k_star.value,
        };
        let v = |s, fired, conclusion| StatementVerdict {
            statement: s,
            fired,
            conclusion,
        };
        [
            v(3, defined && below(near, &self.report.j.value, &zero), q_member),
            v(4, late && below(near, &self.report.k.value, eps), q_member),
            v(5, defined && below(own, &self.report.j_star.value, &zero), pq_member),
            v(6, late && below(own, th6, eps), pq_member),
        ]
    }
}

/// Evaluates statements 1-6 for one reduced `p/q`.
pub fn predicate_suite(
    alpha: &AlphaSpec,
    p: &BigInt,
    q: &BigInt,
    report: &SpectrumReport,
    opts: &PredicateOptions,
) -> Result<PredicateReport> {
    check_reduced(p, q)?;
    let mut t = Table::new(alpha);
    coverage(&mut t, report, q)?;
    let goal = ten_pow_neg(30);
    let qr = BigRational::from_integer(q.clone());
    let near_p = (&qr * t.exp.alpha_enclosure(&(&goal / &qr))?.midpoint()).round().to_integer();
    let near = t.exp.form_value(q, &near_p, &goal)?;
    let own = t.exp.form_value(q, p, &goal)?;
    t.cover(q)?;
    let q_member = t.qs.contains(q);
    let pq_member = t.is_convergent(p, q)?;
    let rq = BigRational::from_integer(q.clone());
    let (s1, s2) = {
        let mut e = Expansion::new(alpha);
        let p2 = psi_second(alpha, &rq, PsiVariant::SecondPair, &goal)?;
        let p2s = psi_second(alpha, &rq, PsiVariant::SecondFraction, &goal)?;
        let c1 = crate::cf::compare_forms(
            &mut e,
            &crate::cf::LatticePoint::new(q.clone(), near_p.clone()),
            &p2.point(),
        );
        let c2 = crate::cf::compare_forms(
            &mut e,
            &crate::cf::LatticePoint::new(q.clone(), p.clone()),
            &p2s.point(),
        );
        (
            matches!(c1, Ok(Ordering::Less)),
            matches!(c2, Ok(Ordering::Less)),
        )
    };
    let qs = q.to_u64().unwrap_or(u64::MAX);
    let v = Verdicts { report, opts };
    let mut verdicts = vec![
        StatementVerdict {
            statement: 1,
            fired: s1,
            conclusion: q_member,
        },
        StatementVerdict {
            statement: 2,
            fired: s2,
            conclusion: pq_member,
        },
    ];
    verdicts.extend(v.products(qs, &near.scale(&rq), &own.scale(&rq), q_member, pq_member));
    Ok(PredicateReport {
        p: p.clone(),
        q: q.clone(),
        verdicts,
    })
}

/// Outcome of [`predicate_sweep`].
#[derive(Clone, Debug, Default)]
pub struct PredicateSweep {
    pub checked: usize,
    pub fired: [usize; 6],
    pub failures: Vec<PredicateReport>,
    /// Per statement: one more than the largest `q` where it fired with a false
    /// conclusion (1 if it never did).
    pub reliable_from: [u64; 6],
}

/// Runs statements 1-6 over all `q <= max_q` and the fractions `p/q` near `qα`.
/// Fractions with `|qα - p| >= 7/q` cannot fire any statement (all thresholds
/// are below 6 and the second-best values are below 1) and are skipped.
pub fn predicate_sweep(
    alpha: &AlphaSpec,
    max_q: u64,
    report: &SpectrumReport,
    opts: &PredicateOptions,
) -> Result<PredicateSweep> {
    let mut t = Table::new(alpha);
    coverage(&mut t, report, &BigInt::from(max_q))?;
    let mut exp = Expansion::new(alpha);
    let mut pair = Scanner::new(&mut exp, max_q, PsiVariant::SecondPair)?;
    let mut frac = Scanner::new(&mut exp, max_q, PsiVariant::SecondFraction)?;
    let br = pair.bracket().clone();
    let goal = ten_pow_neg(30);
    let conv_q: HashSet<u64> = t.qs.iter().filter_map(|q| q.to_u64()).collect();
    let mut out = PredicateSweep {
        reliable_from: [1; 6],
        ..Default::default()
    };
    let v = Verdicts { report, opts };
    while let (Some(sp), Some(sf)) = (pair.step(), frac.step()) {
        let q = sp.q;
        let qb = BigInt::from(q);
        let qr = BigRational::from_integer(qb.clone());
        let centre = Integer::div_floor(&(q as i128 * br.a as i128), &(br.b as i128));
        let near_rel = if br.scaled(q, centre) <= br.scaled(q, centre + 1) {
            centre
        } else {
            centre + 1
        };
        let near_scaled = br.scaled(q, near_rel);
        let q_member = conv_q.contains(&q);
        let near_p = br.absolute(q, near_rel);
        let near = t.exp.form_value(&qb, &near_p, &(&goal / &qr))?.scale(&qr);
        let r = 1 + 7 / q as i128;
        for rel in centre - r..=centre + 1 + r {
            let p = br.absolute(q, rel);
            if !p.gcd(&qb).is_one() {
                continue;
            }
            let own_scaled = br.scaled(q, rel);
            if own_scaled.saturating_mul(q as u128) >= 7 * br.b {
                continue;
            }
            let pq_member = t.is_convergent(&p, &qb)?;
            let own = t.exp.form_value(&qb, &p, &(&goal / &qr))?.scale(&qr);
            let mut verdicts = vec![
                StatementVerdict {
                    statement: 1,
                    fired: near_scaled < sp.best_scaled,
                    conclusion: q_member,
                },
                StatementVerdict {
                    statement: 2,
                    fired: own_scaled < sf.best_scaled,
                    conclusion: pq_member,
                },
            ];
            verdicts.extend(v.products(q, &near, &own, q_member, pq_member));
            out.checked += 1;
            for s in &verdicts {
                let i = s.statement as usize - 1;
                if s.fired {
                    out.fired[i] += 1;
                }
                if s.failed() {
                    out.reliable_from[i] = out.reliable_from[i].max(q + 1);
                }
            }
            let rep = PredicateReport {
                p,
                q: qb.clone(),
                verdicts,
            };
            if !rep.failures().is_empty() {
                out.failures.push(rep);
            }
        }
    }
    Ok(out)
}
