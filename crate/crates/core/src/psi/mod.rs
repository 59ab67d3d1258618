//! Definitional evaluation of `ψ_α`, `ψ^[2]`, `ψ^[2]*` by exact lattice scans,
//! the threshold `𝔱`, and parallelogram certificates for successive jump points.

pub mod certificate;
pub mod scan;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::cf::{rat_string, AlphaSpec, Expansion, LinearForm};
use crate::error::{Error, Result};
use crate::rules::RuleCase;

pub use certificate::{certify_successive, Certificate, PointClass};
pub use scan::{ScanStep, Scanner};

/// Which minimum is being tracked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PsiVariant {
    /// `ψ_α`: all pairs.
    Best,
    /// `ψ^[2]`: excludes the convergent pairs `(q_n, p_n)`.
    SecondPair,
    /// `ψ^[2]*`: excludes every pair whose fraction equals a convergent.
    SecondFraction,
}

impl FromStr for PsiVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "best" => Ok(PsiVariant::Best),
            "pair" => Ok(PsiVariant::SecondPair),
            "fraction" => Ok(PsiVariant::SecondFraction),
            _ => Err(Error::InvalidArgument(format!(
                "unknown variant `{s}` (best, pair, fraction)"
            ))),
        }
    }
}

impl fmt::Display for PsiVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PsiVariant::Best => "best",
            PsiVariant::SecondPair => "pair",
            PsiVariant::SecondFraction => "fraction",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    OracleScan,
    Rule(RuleCase),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::OracleScan => f.write_str("scan"),
            Provenance::Rule(c) => write!(f, "{c}"),
        }
    }
}

/// A point where the tracked minimum strictly drops. The value of the new
/// minimizer is computed on demand with [`JumpPoint::form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpPoint {
    pub q: BigInt,
    pub p: BigInt,
    pub provenance: Provenance,
    /// `q` lies below the threshold `𝔱`.
    pub pre_threshold: bool,
}

impl JumpPoint {
    pub fn form(&self, exp: &mut Expansion, goal: &BigRational) -> Result<LinearForm> {
        LinearForm::new(exp, self.q.clone(), self.p.clone(), goal)
    }
}

/// `ψ_α(t)`: the convergent `(q_n, p_n)` with `q_n <= t < q_{n+1}`.
pub fn psi(alpha: &AlphaSpec, t: &BigRational, goal: &BigRational) -> Result<LinearForm> {
    if t < &BigRational::one() {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let mut exp = Expansion::new(alpha);
    let t_int = t.floor().to_integer();
    let n = exp.first_q_above(&t_int)? as isize - 1;
    let (q, p) = exp.point(n)?;
    LinearForm::new(&mut exp, q, p, goal)
}

/// Exact minimizer of the chosen variant over `1 <= q <= t`.
pub fn psi_second(
    alpha: &AlphaSpec,
    t: &BigRational,
    variant: PsiVariant,
    goal: &BigRational,
) -> Result<LinearForm> {
    if t < &BigRational::one() {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let bound = t
        .floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::PrecisionCap("t exceeds the scan range".into()))?;
    let mut exp = Expansion::new(alpha);
    let mut sc = Scanner::new(&mut exp, bound, variant)?;
    let mut last = None;
    while let Some(s) = sc.step() {
        last = Some(s);
    }
    let s = last.expect("bound >= 1");
    let p = sc.bracket().absolute(s.best_q, s.best_p_rel);
    LinearForm::new(&mut exp, BigInt::from(s.best_q), p, goal)
}

/// Threshold `𝔱 ∈ {2, 3, 4}` from the first three digits of the fractional part.
pub fn t_threshold(alpha: &AlphaSpec) -> Result<u64> {
    let a = alpha.digits(3)?;
    Ok(match (a[0], a[1], a[2]) {
        (1, a2, _) if a2 >= 2 => 2,
        (a1, _, _) if a1 >= 3 => 2,
        (1, 1, a3) if a3 >= 2 => 3,
        (2, a2, _) if a2 >= 2 => 3,
        _ => 4,
    })
}

/// Scan statistics for throughput reporting.
#[derive(Clone, Copy, Debug)]
pub struct ScanProfile {
    pub forms: u64,
    pub elapsed: Duration,
}

impl ScanProfile {
    pub fn forms_per_second(&self) -> f64 {
        self.forms as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

/// All `q <= bound` where the variant's minimum strictly drops, starting at `q = 1`.
pub fn jump_scan(alpha: &AlphaSpec, bound: u64, variant: PsiVariant) -> Result<Vec<JumpPoint>> {
    jump_scan_profiled(alpha, bound, variant).map(|(j, _)| j)
}

pub fn jump_scan_profiled(
    alpha: &AlphaSpec,
    bound: u64,
    variant: PsiVariant,
) -> Result<(Vec<JumpPoint>, ScanProfile)> {
    if bound == 0 {
        return Err(Error::InvalidArgument("T must be at least 1".into()));
    }
    let start = Instant::now();
    let threshold = t_threshold(alpha)?;
    let mut exp = Expansion::new(alpha);
    let mut sc = Scanner::new(&mut exp, bound, variant)?;
    let mut out = Vec::new();
    while let Some(s) = sc.step() {
        if s.jumped {
            out.push(JumpPoint {
                q: BigInt::from(s.q),
                p: sc.bracket().absolute(s.q, s.best_p_rel),
                provenance: Provenance::OracleScan,
                pre_threshold: s.q < threshold,
            });
        }
    }
    let profile = ScanProfile {
        forms: sc.forms_examined(),
        elapsed: start.elapsed(),
    };
    Ok((out, profile))
}

fn num(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse().expect("integer literal"))
}

/// One JSON object per jump point, in order of `q`.
pub fn jump_json(exp: &mut Expansion, points: &[JumpPoint], goal: &BigRational) -> Result<Vec<Value>> {
    points
        .iter()
        .map(|pt| {
            let f = pt.form(exp, goal)?;
            let prod = f.product();
            Ok(json!({
                "schema": 1,
                "q": num(&pt.q),
                "p": num(&pt.p),
                "value_lo": rat_string(f.value.lo()),
                "value_hi": rat_string(f.value.hi()),
                "product_lo": rat_string(prod.lo()),
                "product_hi": rat_string(prod.hi()),
                "provenance": pt.provenance.to_string(),
            }))
        })
        .collect()
}
